//! PDDL text handling: lexing, parsing, the typed model and printing.

mod error;
mod lexer;
mod model;
mod parse;
mod print;
mod sexpr;

pub use error::{ParseWarning, PddlError};
pub use lexer::{tokenize, Pos, Token, TokenKind};
pub use model::{
    ActionSchema, Domain, GroundAtom, GroundLiteral, InvalidSymbol, Literal, Plan, PlanStep,
    Predicate, Problem, Symbol, Term, TypeHierarchy, TypedObject, TypedVar,
};
pub use parse::{check_problem, parse_domain, parse_plan, parse_problem, parse_problem_with_warnings};
pub use print::{print_domain, print_plan, print_problem};
pub use sexpr::{read_all, SExpr, MAX_DEPTH};
