//! Recursive-descent parsing of domain, problem and plan files over the
//! S-expression tree, followed by semantic checks.

use std::collections::{BTreeSet, HashMap, HashSet};

use indexmap::IndexSet;

use super::error::{ParseWarning, PddlError};
use super::lexer::Pos;
use super::model::{
    ActionSchema, Domain, GroundAtom, GroundLiteral, Literal, Plan, PlanStep, Predicate, Problem,
    Symbol, Term, TypeHierarchy, TypedObject, TypedVar,
};
use super::sexpr::{read_all, SExpr};

const ACTION_KEYS: [&str; 3] = [":parameters", ":precondition", ":effect"];

fn atom<'a>(expr: &'a SExpr, what: &str) -> Result<(&'a str, Pos), PddlError> {
    match expr {
        SExpr::Atom { text, pos } => Ok((text, *pos)),
        SExpr::List { pos, .. } => Err(PddlError::syntax(
            *pos,
            format!("expected {what}, found a parenthesized list"),
        )),
    }
}

fn list<'a>(expr: &'a SExpr, what: &str) -> Result<&'a [SExpr], PddlError> {
    match expr {
        SExpr::List { items, .. } => Ok(items),
        SExpr::Atom { text, pos } => Err(PddlError::syntax(
            *pos,
            format!("expected {what}, found `{text}`"),
        )),
    }
}

fn name(text: &str, pos: Pos, what: &str) -> Result<Symbol, PddlError> {
    Symbol::new(text)
        .map_err(|_| PddlError::syntax(pos, format!("`{text}` is not a valid {what} name")))
}

fn variable(text: &str, pos: Pos) -> Result<Symbol, PddlError> {
    match text.strip_prefix('?') {
        Some(rest) => name(rest, pos, "variable"),
        None => Err(PddlError::syntax(
            pos,
            format!("expected a `?variable`, found `{text}`"),
        )),
    }
}

fn keyword<'a>(expr: &'a SExpr) -> Option<&'a str> {
    expr.head().filter(|h| h.starts_with(':'))
}

fn edit_distance(a: &str, b: &str) -> usize {
    let b: Vec<char> = b.chars().collect();
    let mut prev: Vec<usize> = (0..=b.len()).collect();
    for (i, ca) in a.chars().enumerate() {
        let mut cur = vec![i + 1; b.len() + 1];
        for (j, cb) in b.iter().enumerate() {
            let sub = prev[j] + usize::from(ca != *cb);
            cur[j + 1] = sub.min(prev[j + 1] + 1).min(cur[j] + 1);
        }
        prev = cur;
    }
    prev[b.len()]
}

fn suggestion(found: &str, known: &[&str]) -> String {
    known
        .iter()
        .map(|k| (edit_distance(found, k), *k))
        .filter(|(d, _)| *d <= 2)
        .min()
        .map(|(_, k)| format!(" (did you mean `{k}`?)"))
        .unwrap_or_default()
}

/// Parses a typed list such as `a b - block c` or `?h1 ?h2 - hand`.
fn typed_list(items: &[SExpr], vars: bool) -> Result<Vec<(Symbol, Symbol, Pos)>, PddlError> {
    let mut out = Vec::new();
    let mut pending: Vec<(Symbol, Pos)> = Vec::new();
    let mut iter = items.iter();
    while let Some(item) = iter.next() {
        let (text, pos) = atom(item, if vars { "a variable" } else { "a name" })?;
        if text == "-" {
            if pending.is_empty() {
                return Err(PddlError::syntax(pos, "`-` with nothing before it to type"));
            }
            let ty = match iter.next() {
                None => return Err(PddlError::syntax(pos, "`-` must be followed by a type")),
                Some(e @ SExpr::List { .. }) => {
                    return Err(if e.head() == Some("either") {
                        PddlError::unsupported(e.pos(), "`either` union types")
                    } else {
                        PddlError::syntax(e.pos(), "expected a type name after `-`")
                    })
                }
                Some(SExpr::Atom { text, pos }) => name(text, *pos, "type")?,
            };
            out.extend(pending.drain(..).map(|(n, p)| (n, ty.clone(), p)));
        } else {
            let sym = if vars {
                variable(text, pos)?
            } else {
                name(text, pos, "object")?
            };
            pending.push((sym, pos));
        }
    }
    out.extend(pending.into_iter().map(|(n, p)| (n, Symbol::object(), p)));
    Ok(out)
}

fn term(expr: &SExpr) -> Result<Term, PddlError> {
    let (text, pos) = atom(expr, "a term")?;
    if text.starts_with('?') {
        variable(text, pos).map(Term::Var)
    } else {
        name(text, pos, "constant").map(Term::Const)
    }
}

fn atomic_formula(items: &[SExpr], pos: Pos, positive: bool) -> Result<Literal, PddlError> {
    let (head, hpos) = match items.first() {
        Some(h) => atom(h, "a predicate name")?,
        None => return Err(PddlError::syntax(pos, "empty atomic formula")),
    };
    let predicate = name(head, hpos, "predicate")?;
    let args = items[1..].iter().map(term).collect::<Result<_, _>>()?;
    Ok(Literal::new(predicate, args, positive))
}

/// Conjunctive goal description: `(and ...)`, atoms, `(not atom)`.
fn condition(expr: &SExpr, out: &mut Vec<(Literal, Pos)>) -> Result<(), PddlError> {
    let pos = expr.pos();
    let items = match expr {
        SExpr::List { items, .. } => items,
        SExpr::Atom { text, .. } => {
            return Err(PddlError::syntax(
                pos,
                format!("expected a parenthesized formula, found `{text}`"),
            ))
        }
    };
    match items.first().and_then(SExpr::as_atom) {
        None if items.is_empty() => Ok(()),
        Some("and") => items[1..].iter().try_for_each(|e| condition(e, out)),
        Some("not") => {
            let inner = match &items[1..] {
                [one] => one,
                _ => return Err(PddlError::syntax(pos, "`not` takes exactly one formula")),
            };
            let inner_items = list(inner, "an atomic formula after `not`")?;
            match inner.head() {
                Some(h @ ("and" | "or" | "not" | "imply" | "exists" | "forall")) => Err(
                    PddlError::unsupported(inner.pos(), format!("`not` over `{h}` formula")),
                ),
                Some("=") => Err(PddlError::unsupported(inner.pos(), "equality (`=`)")),
                _ => {
                    out.push((atomic_formula(inner_items, inner.pos(), false)?, inner.pos()));
                    Ok(())
                }
            }
        }
        Some(h @ ("or" | "imply" | "exists" | "forall" | "when")) => {
            Err(PddlError::unsupported(pos, format!("`{h}` in a condition")))
        }
        Some("=") => Err(PddlError::unsupported(pos, "equality (`=`)")),
        Some(h @ ("<" | ">" | "<=" | ">=")) => Err(PddlError::unsupported(
            pos,
            format!("numeric comparison `{h}`"),
        )),
        _ => {
            out.push((atomic_formula(items, pos, true)?, pos));
            Ok(())
        }
    }
}

/// STRIPS effect: `(and ...)`, atoms, `(not atom)`.
fn effect(expr: &SExpr, out: &mut Vec<(Literal, Pos)>) -> Result<(), PddlError> {
    let pos = expr.pos();
    let items = match expr {
        SExpr::List { items, .. } => items,
        SExpr::Atom { text, .. } => {
            return Err(PddlError::syntax(
                pos,
                format!("expected a parenthesized effect, found `{text}`"),
            ))
        }
    };
    match items.first().and_then(SExpr::as_atom) {
        None if items.is_empty() => Ok(()),
        Some("and") => items[1..].iter().try_for_each(|e| effect(e, out)),
        Some("not") => {
            let inner = match &items[1..] {
                [one] => one,
                _ => return Err(PddlError::syntax(pos, "`not` takes exactly one atom")),
            };
            let inner_items = list(inner, "an atom after `not`")?;
            if let Some(h @ ("and" | "when" | "forall" | "not")) = inner.head() {
                return Err(PddlError::syntax(
                    inner.pos(),
                    format!("`not` must wrap an atom, found `{h}`"),
                ));
            }
            out.push((atomic_formula(inner_items, inner.pos(), false)?, inner.pos()));
            Ok(())
        }
        Some("when") => Err(PddlError::unsupported(pos, "conditional effect (`when`)")),
        Some("forall") => Err(PddlError::unsupported(pos, "universal effect (`forall`)")),
        Some(h @ ("increase" | "decrease" | "assign" | "scale-up" | "scale-down")) => Err(
            PddlError::unsupported(pos, format!("numeric effect `{h}`")),
        ),
        _ => {
            out.push((atomic_formula(items, pos, true)?, pos));
            Ok(())
        }
    }
}

/// Checks `(define (<kind> NAME) ...)` and returns the name and sections.
fn define_header<'a>(
    text: &str,
    forms: &'a [SExpr],
    kind: &str,
) -> Result<(Symbol, &'a [SExpr]), PddlError> {
    let form = match forms {
        [] => {
            return Err(PddlError::syntax(
                Pos {
                    offset: text.len(),
                    line: text.lines().count().max(1),
                    column: 1,
                },
                format!("expected `(define ({kind} ...))`, found no forms"),
            ))
        }
        [one] => one,
        [_, extra, ..] => {
            return Err(PddlError::syntax(
                extra.pos(),
                "unexpected content after the end of the `define` form",
            ))
        }
    };
    let items = list(form, "`(define ...)`")?;
    match items.first().map(|e| atom(e, "`define`")).transpose()? {
        Some(("define", _)) => {}
        Some((other, pos)) => {
            return Err(PddlError::syntax(
                pos,
                format!("expected `define`, found `{other}`"),
            ))
        }
        None => return Err(PddlError::syntax(form.pos(), "empty form, expected `define`")),
    }
    let header = items
        .get(1)
        .ok_or_else(|| PddlError::syntax(form.pos(), format!("missing `({kind} NAME)`")))?;
    let header_items = list(header, &format!("`({kind} NAME)`"))?;
    match header_items {
        [k, n] => {
            let (k, kpos) = atom(k, kind)?;
            if k != kind {
                return Err(PddlError::syntax(
                    kpos,
                    format!("expected `{kind}`, found `{k}`"),
                ));
            }
            let (n, npos) = atom(n, &format!("a {kind} name"))?;
            Ok((name(n, npos, kind)?, &items[2..]))
        }
        _ => Err(PddlError::syntax(
            header.pos(),
            format!("expected `({kind} NAME)`"),
        )),
    }
}

fn requirements(items: &[SExpr]) -> Result<BTreeSet<Symbol>, PddlError> {
    items
        .iter()
        .map(|e| {
            let (text, pos) = atom(e, "a requirement flag")?;
            match text.strip_prefix(':') {
                Some(flag) => name(flag, pos, "requirement"),
                None => Err(PddlError::syntax(
                    pos,
                    format!("requirement flags start with `:`, found `{text}`"),
                )),
            }
        })
        .collect()
}

struct ActionDraft {
    schema_name: Symbol,
    pos: Pos,
    params: Vec<(Symbol, Symbol, Pos)>,
    pre: Vec<(Literal, Pos)>,
    eff: Vec<(Literal, Pos)>,
}

fn action(items: &[SExpr], pos: Pos) -> Result<ActionDraft, PddlError> {
    let (n, npos) = match items.get(1) {
        Some(e) => atom(e, "an action name")?,
        None => return Err(PddlError::syntax(pos, "`:action` needs a name")),
    };
    let schema_name = name(n, npos, "action")?;
    let mut draft = ActionDraft {
        schema_name,
        pos,
        params: Vec::new(),
        pre: Vec::new(),
        eff: Vec::new(),
    };
    let mut seen = HashSet::new();
    let mut rest = items[2..].iter();
    while let Some(k) = rest.next() {
        let (key, kpos) = atom(k, "an action keyword such as `:precondition`")?;
        if !ACTION_KEYS.contains(&key) {
            return Err(PddlError::syntax(
                kpos,
                format!(
                    "unknown action keyword `{key}`{}",
                    suggestion(key, &ACTION_KEYS)
                ),
            ));
        }
        if !seen.insert(key) {
            return Err(PddlError::syntax(kpos, format!("duplicate `{key}`")));
        }
        let value = rest
            .next()
            .ok_or_else(|| PddlError::syntax(kpos, format!("`{key}` is missing its value")))?;
        match key {
            ":parameters" => draft.params = typed_list(list(value, "a parameter list")?, true)?,
            ":precondition" => condition(value, &mut draft.pre)?,
            _ => effect(value, &mut draft.eff)?,
        }
    }
    Ok(draft)
}

/// Parses a domain file and checks it for internal consistency.
pub fn parse_domain(text: &str) -> Result<Domain, PddlError> {
    let forms = read_all(text)?;
    let (domain_name, sections) = define_header(text, &forms, "domain")?;
    let mut reqs = BTreeSet::new();
    let mut types = TypeHierarchy::new();
    let mut type_pos: HashMap<Symbol, Pos> = HashMap::new();
    let mut constants: Vec<(Symbol, Symbol, Pos)> = Vec::new();
    let mut predicates: Vec<(Predicate, Pos)> = Vec::new();
    let mut drafts = Vec::new();
    let mut seen_sections = HashSet::new();

    for section in sections {
        let items = list(section, "a domain section such as `(:predicates ...)`")?;
        let Some(kw) = keyword(section) else {
            return Err(PddlError::syntax(
                section.pos(),
                "expected a domain section starting with a `:keyword`",
            ));
        };
        let pos = section.pos();
        if kw != ":action" && !seen_sections.insert(kw.to_string()) {
            return Err(PddlError::syntax(pos, format!("duplicate `{kw}` section")));
        }
        match kw {
            ":requirements" => reqs = requirements(&items[1..])?,
            ":types" => {
                let decls = typed_list(&items[1..], false)?;
                for (child, parent, p) in &decls {
                    if child.as_str() == "object" {
                        continue;
                    }
                    if !types.insert(child.clone(), parent.clone()) {
                        return Err(PddlError::semantic(
                            *p,
                            format!("type `{child}` declared with two different parents"),
                        ));
                    }
                    type_pos.entry(child.clone()).or_insert(*p);
                }
                // parents used without their own declaration hang off `object`
                for (_, parent, p) in decls {
                    if !types.contains(&parent) {
                        types.insert(parent.clone(), Symbol::object());
                        type_pos.entry(parent).or_insert(p);
                    }
                }
            }
            ":constants" => constants = typed_list(&items[1..], false)?,
            ":predicates" => {
                for p in &items[1..] {
                    let pitems = list(p, "a predicate declaration `(name ?x ...)`")?;
                    let (pn, ppos) = match pitems.first() {
                        Some(e) => atom(e, "a predicate name")?,
                        None => return Err(PddlError::syntax(p.pos(), "empty predicate declaration")),
                    };
                    let params = typed_list(&pitems[1..], true)?
                        .into_iter()
                        .map(|(n, t, _)| TypedVar::new(n, t))
                        .collect();
                    predicates.push((
                        Predicate {
                            name: name(pn, ppos, "predicate")?,
                            params,
                        },
                        p.pos(),
                    ));
                }
            }
            ":action" => drafts.push(action(items, pos)?),
            ":functions" => return Err(PddlError::unsupported(pos, "numeric fluents (`:functions`)")),
            ":durative-action" => return Err(PddlError::unsupported(pos, "durative actions")),
            ":derived" => return Err(PddlError::unsupported(pos, "derived predicates")),
            ":constraints" => return Err(PddlError::unsupported(pos, "trajectory constraints")),
            other => {
                return Err(PddlError::syntax(
                    pos,
                    format!(
                        "unknown domain section `{other}`{}",
                        suggestion(
                            other,
                            &[":requirements", ":types", ":constants", ":predicates", ":action"]
                        )
                    ),
                ))
            }
        }
    }

    if let Some(t) = types.find_cycle() {
        return Err(PddlError::semantic(
            type_pos.get(&t).copied(),
            format!("type hierarchy has a cycle through `{t}`"),
        ));
    }
    let check_type = |ty: &Symbol, pos: Pos| {
        if types.contains(ty) {
            Ok(())
        } else {
            Err(PddlError::semantic(pos, format!("undeclared type `{ty}`")))
        }
    };

    let mut const_objs = Vec::new();
    for (n, t, p) in constants {
        check_type(&t, p)?;
        if const_objs.iter().any(|c: &TypedObject| c.name == n) {
            return Err(PddlError::semantic(p, format!("constant `{n}` declared twice")));
        }
        const_objs.push(TypedObject::new(n, t));
    }

    let mut preds = Vec::new();
    for (p, pos) in predicates {
        for v in &p.params {
            check_type(&v.ty, pos)?;
        }
        if preds.iter().any(|q: &Predicate| q.name == p.name) {
            return Err(PddlError::semantic(
                pos,
                format!("predicate `{}` declared twice", p.name),
            ));
        }
        preds.push(p);
    }

    let mut actions: Vec<ActionSchema> = Vec::new();
    for d in drafts {
        if actions.iter().any(|a| a.name == d.schema_name) {
            return Err(PddlError::semantic(
                d.pos,
                format!("action `{}` declared twice", d.schema_name),
            ));
        }
        let mut params: Vec<TypedVar> = Vec::new();
        for (n, t, p) in d.params {
            check_type(&t, p)?;
            if params.iter().any(|q| q.name == n) {
                return Err(PddlError::semantic(
                    p,
                    format!("parameter `?{n}` repeated in action `{}`", d.schema_name),
                ));
            }
            params.push(TypedVar::new(n, t));
        }
        for (lit, pos) in d.pre.iter().chain(d.eff.iter()) {
            check_literal(lit, *pos, &preds, &const_objs, Some((&d.schema_name, &params)))?;
        }
        let precondition = d.pre.into_iter().map(|(l, _)| l).collect();
        let (add, del): (Vec<_>, Vec<_>) = d.eff.into_iter().map(|(l, _)| l).partition(|l| l.positive);
        let del = del.into_iter().map(|l| l.negated()).collect();
        actions.push(ActionSchema::new(d.schema_name, params, precondition, add, del));
    }

    Ok(Domain {
        name: domain_name,
        requirements: reqs,
        types,
        constants: const_objs,
        predicates: preds,
        actions,
    })
}

fn check_literal(
    lit: &Literal,
    pos: Pos,
    preds: &[Predicate],
    constants: &[TypedObject],
    action: Option<(&Symbol, &[TypedVar])>,
) -> Result<(), PddlError> {
    let Some(decl) = preds.iter().find(|p| p.name == lit.predicate) else {
        return Err(PddlError::semantic(
            pos,
            format!("undeclared predicate `{}`", lit.predicate),
        ));
    };
    if decl.arity() != lit.args.len() {
        return Err(PddlError::semantic(
            pos,
            format!(
                "predicate `{}` takes {} argument(s), {} given",
                lit.predicate,
                decl.arity(),
                lit.args.len()
            ),
        ));
    }
    for t in &lit.args {
        match t {
            Term::Var(v) => match action {
                Some((_, params)) if params.iter().any(|p| &p.name == v) => {}
                Some((an, _)) => {
                    return Err(PddlError::semantic(
                        pos,
                        format!("variable `?{v}` is not a parameter of action `{an}`"),
                    ))
                }
                None => return Err(PddlError::semantic(pos, format!("unbound variable `?{v}`"))),
            },
            Term::Const(c) => {
                if !constants.iter().any(|k| &k.name == c) {
                    return Err(PddlError::semantic(
                        pos,
                        format!("undeclared constant `{c}` in `{lit}`"),
                    ));
                }
            }
        }
    }
    Ok(())
}

/// Source positions recorded while parsing a problem, used for diagnostics.
#[derive(Default)]
struct ProblemPositions {
    objects: Vec<Pos>,
    init: Vec<Pos>,
    goal: Vec<Pos>,
}

/// Parses a problem file; when `domain` is given, runs the semantic checks.
pub fn parse_problem(text: &str, domain: Option<&Domain>) -> Result<Problem, PddlError> {
    let (problem, warnings) = parse_problem_with_warnings(text, domain)?;
    for w in warnings {
        log::warn!("{}", w.message);
    }
    Ok(problem)
}

pub fn parse_problem_with_warnings(
    text: &str,
    domain: Option<&Domain>,
) -> Result<(Problem, Vec<ParseWarning>), PddlError> {
    let forms = read_all(text)?;
    let (problem_name, sections) = define_header(text, &forms, "problem")?;
    let mut warnings = Vec::new();
    let mut positions = ProblemPositions::default();
    let mut domain_name = None;
    let mut reqs = BTreeSet::new();
    let mut objects: Vec<TypedObject> = Vec::new();
    let mut init = IndexSet::new();
    let mut goal: Option<Vec<GroundLiteral>> = None;
    let mut seen = HashSet::new();

    for section in sections {
        let items = list(section, "a problem section such as `(:init ...)`")?;
        let Some(kw) = keyword(section) else {
            return Err(PddlError::syntax(
                section.pos(),
                "expected a problem section starting with a `:keyword`",
            ));
        };
        let pos = section.pos();
        if !seen.insert(kw.to_string()) {
            return Err(PddlError::syntax(pos, format!("duplicate `{kw}` section")));
        }
        match kw {
            ":domain" => match &items[1..] {
                [n] => {
                    let (n, npos) = atom(n, "a domain name")?;
                    domain_name = Some(name(n, npos, "domain")?);
                }
                _ => return Err(PddlError::syntax(pos, "expected `(:domain NAME)`")),
            },
            ":requirements" => reqs = requirements(&items[1..])?,
            ":objects" => {
                for (n, t, p) in typed_list(&items[1..], false)? {
                    match objects.iter().find(|o| o.name == n) {
                        Some(o) if o.ty == t => warnings.push(ParseWarning {
                            pos: Some(p),
                            message: format!("object `{n}` declared twice"),
                        }),
                        Some(_) => {
                            return Err(PddlError::semantic(
                                p,
                                format!("object `{n}` declared with two different types"),
                            ))
                        }
                        None => {
                            objects.push(TypedObject::new(n, t));
                            positions.objects.push(p);
                        }
                    }
                }
            }
            ":init" => {
                for fact in &items[1..] {
                    let fitems = list(fact, "a ground atom in `:init`")?;
                    match fact.head() {
                        Some("not") => {
                            return Err(PddlError::syntax(
                                fact.pos(),
                                "negative literal in `:init`; the initial state is closed-world",
                            ))
                        }
                        Some("=") => {
                            return Err(PddlError::unsupported(
                                fact.pos(),
                                "numeric fluent initialization",
                            ))
                        }
                        Some("at") if is_timed_literal(fitems) => {
                            return Err(PddlError::unsupported(fact.pos(), "timed initial literals"))
                        }
                        _ => {}
                    }
                    let lit = atomic_formula(fitems, fact.pos(), true)?;
                    let atom = ground_atom(&lit, fact.pos())?;
                    if init.insert(atom) {
                        positions.init.push(fact.pos());
                    }
                }
            }
            ":goal" => {
                let [g] = &items[1..] else {
                    return Err(PddlError::syntax(pos, "`:goal` takes exactly one formula"));
                };
                let mut lits = Vec::new();
                condition(g, &mut lits)?;
                let mut out: Vec<GroundLiteral> = Vec::new();
                for (lit, lpos) in lits {
                    let g = GroundLiteral {
                        atom: ground_atom(&lit, lpos)?,
                        positive: lit.positive,
                    };
                    if out.contains(&g) {
                        warnings.push(ParseWarning {
                            pos: Some(lpos),
                            message: format!("duplicate goal literal `{g}` dropped"),
                        });
                    } else {
                        out.push(g);
                        positions.goal.push(lpos);
                    }
                }
                goal = Some(out);
            }
            ":metric" => return Err(PddlError::unsupported(pos, "plan metrics (`:metric`)")),
            ":constraints" => return Err(PddlError::unsupported(pos, "trajectory constraints")),
            other => {
                return Err(PddlError::syntax(
                    pos,
                    format!(
                        "unknown problem section `{other}`{}",
                        suggestion(other, &[":domain", ":requirements", ":objects", ":init", ":goal"])
                    ),
                ))
            }
        }
    }

    let end = forms[0].pos();
    let domain_name =
        domain_name.ok_or_else(|| PddlError::syntax(end, "missing `(:domain NAME)` section"))?;
    let goal = goal.ok_or_else(|| PddlError::syntax(end, "missing `(:goal ...)` section"))?;
    let problem = Problem {
        name: problem_name,
        domain_name,
        requirements: reqs,
        objects,
        init,
        goal,
    };
    if let Some(d) = domain {
        warnings.extend(check_problem_at(&problem, d, Some(&positions))?);
    }
    Ok((problem, warnings))
}

fn is_timed_literal(items: &[SExpr]) -> bool {
    // `(at 10 (p))`: second item numeric, third a list
    matches!(items, [_, SExpr::Atom { text, .. }, SExpr::List { .. }] if text.parse::<f64>().is_ok())
}

fn ground_atom(lit: &Literal, pos: Pos) -> Result<GroundAtom, PddlError> {
    let args = lit
        .args
        .iter()
        .map(|t| match t {
            Term::Const(c) => Ok(c.clone()),
            Term::Var(v) => Err(PddlError::semantic(
                pos,
                format!("variable `?{v}` in a ground formula"),
            )),
        })
        .collect::<Result<_, _>>()?;
    Ok(GroundAtom::new(lit.predicate.clone(), args))
}

/// Checks a problem against a domain: types, predicates, arities, objects.
pub fn check_problem(problem: &Problem, domain: &Domain) -> Result<Vec<ParseWarning>, PddlError> {
    check_problem_at(problem, domain, None)
}

fn check_problem_at(
    problem: &Problem,
    domain: &Domain,
    positions: Option<&ProblemPositions>,
) -> Result<Vec<ParseWarning>, PddlError> {
    let mut warnings = Vec::new();
    if problem.domain_name != domain.name {
        warnings.push(ParseWarning {
            pos: None,
            message: format!(
                "problem is declared for domain `{}` but is paired with `{}`",
                problem.domain_name, domain.name
            ),
        });
    }
    for (i, o) in problem.objects.iter().enumerate() {
        if !domain.types.contains(&o.ty) {
            return Err(PddlError::semantic(
                positions.and_then(|p| p.objects.get(i).copied()),
                format!("object `{}` has undeclared type `{}`", o.name, o.ty),
            ));
        }
    }
    let known = |s: &Symbol| problem.object(s).is_some() || domain.constant(s).is_some();
    let check = |atom: &GroundAtom, pos: Option<Pos>| -> Result<(), PddlError> {
        let Some(decl) = domain.predicate(&atom.predicate) else {
            return Err(PddlError::semantic(
                pos,
                format!("undeclared predicate `{}` in `{atom}`", atom.predicate),
            ));
        };
        if decl.arity() != atom.args.len() {
            return Err(PddlError::semantic(
                pos,
                format!(
                    "predicate `{}` takes {} argument(s), {} given in `{atom}`",
                    atom.predicate,
                    decl.arity(),
                    atom.args.len()
                ),
            ));
        }
        if let Some(bad) = atom.args.iter().find(|a| !known(a)) {
            return Err(PddlError::UndeclaredObject {
                pos,
                name: bad.to_string(),
            });
        }
        Ok(())
    };
    for (i, a) in problem.init.iter().enumerate() {
        check(a, positions.and_then(|p| p.init.get(i).copied()))?;
    }
    for (i, g) in problem.goal.iter().enumerate() {
        check(&g.atom, positions.and_then(|p| p.goal.get(i).copied()))?;
    }
    Ok(warnings)
}

/// Parses a plan: a sequence of flat `(action arg ...)` forms.
pub fn parse_plan(text: &str) -> Result<Plan, PddlError> {
    let mut steps = Vec::new();
    for form in read_all(text)? {
        let items = match &form {
            SExpr::List { items, .. } => items,
            SExpr::Atom { text, pos } => {
                return Err(PddlError::syntax(
                    *pos,
                    format!("expected a plan step `(action arg ...)`, found `{text}`"),
                ))
            }
        };
        let mut atoms = Vec::with_capacity(items.len());
        for it in items {
            match it {
                SExpr::Atom { text, pos } => atoms.push((text.as_str(), *pos)),
                SExpr::List { pos, .. } => {
                    return Err(PddlError::syntax(*pos, "nested expression in plan step"))
                }
            }
        }
        let Some(((head, hpos), args)) = atoms.split_first() else {
            return Err(PddlError::syntax(form.pos(), "empty plan step"));
        };
        let action = name(head, *hpos, "action")?;
        let args = args
            .iter()
            .map(|(t, p)| name(t, *p, "object"))
            .collect::<Result<_, _>>()?;
        steps.push(PlanStep::new(action, args));
    }
    Ok(Plan::new(steps))
}
