//! PDDL parsing, STRIPS grounding, forward-search planning and plan
//! validation for benchmark scoring.

pub mod gold;
pub mod grounding;
pub mod pddl;
pub mod planner;
pub mod validator;

pub use pddl::{
    parse_domain, parse_plan, parse_problem, print_domain, print_plan, print_problem, Domain,
    GroundAtom, Plan, PlanStep, PddlError, Problem, Symbol,
};
