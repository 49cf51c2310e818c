//! Canonical printing. Output reparses to a structurally equal model.

use std::fmt::Write;

use super::model::{Domain, Literal, Plan, Problem, Symbol};

/// `a b - block c - ball`; the trailing `- object` group is left bare.
fn typed_list<'a>(items: impl IntoIterator<Item = (String, &'a Symbol)>) -> String {
    let mut groups: Vec<(Vec<String>, &Symbol)> = Vec::new();
    for (name, ty) in items {
        match groups.last_mut() {
            Some((names, t)) if *t == ty => names.push(name),
            _ => groups.push((vec![name], ty)),
        }
    }
    let n = groups.len();
    groups
        .into_iter()
        .enumerate()
        .map(|(i, (names, ty))| {
            if i + 1 == n && ty.as_str() == "object" {
                names.join(" ")
            } else {
                format!("{} - {ty}", names.join(" "))
            }
        })
        .collect::<Vec<_>>()
        .join(" ")
}

fn conjunction(lits: impl IntoIterator<Item = String>) -> String {
    let parts: Vec<String> = lits.into_iter().collect();
    if parts.is_empty() {
        "(and)".to_string()
    } else {
        format!("(and {})", parts.join(" "))
    }
}

fn requirements(out: &mut String, reqs: &std::collections::BTreeSet<Symbol>) {
    if !reqs.is_empty() {
        let flags: Vec<String> = reqs.iter().map(|r| format!(":{r}")).collect();
        let _ = write!(out, "\n  (:requirements {})", flags.join(" "));
    }
}

pub fn print_domain(d: &Domain) -> String {
    let mut out = format!("(define (domain {})", d.name);
    requirements(&mut out, &d.requirements);

    if !d.types.is_empty() {
        // children grouped by parent; `object` children printed last, bare
        let mut entries: Vec<(&Symbol, &Symbol)> = d.types.entries().collect();
        entries.sort_by_key(|(c, p)| (p.as_str() == "object", p.as_str(), c.as_str()));
        let list = typed_list(entries.into_iter().map(|(c, p)| (c.to_string(), p)));
        let _ = write!(out, "\n  (:types {list})");
    }
    if !d.constants.is_empty() {
        let list = typed_list(d.constants.iter().map(|c| (c.name.to_string(), &c.ty)));
        let _ = write!(out, "\n  (:constants {list})");
    }
    if !d.predicates.is_empty() {
        out.push_str("\n  (:predicates");
        for p in &d.predicates {
            let params = typed_list(p.params.iter().map(|v| (format!("?{}", v.name), &v.ty)));
            if params.is_empty() {
                let _ = write!(out, "\n    ({})", p.name);
            } else {
                let _ = write!(out, "\n    ({} {params})", p.name);
            }
        }
        out.push(')');
    }
    for a in &d.actions {
        let params = typed_list(a.params.iter().map(|v| (format!("?{}", v.name), &v.ty)));
        let pre = conjunction(a.precondition.iter().map(Literal::to_string));
        let eff = conjunction(
            a.add_effects
                .iter()
                .map(Literal::to_string)
                .chain(a.del_effects.iter().map(|l| l.negated().to_string())),
        );
        let _ = write!(
            out,
            "\n  (:action {}\n    :parameters ({params})\n    :precondition {pre}\n    :effect {eff})",
            a.name
        );
    }
    out.push_str(")\n");
    out
}

pub fn print_problem(p: &Problem) -> String {
    let mut out = format!("(define (problem {})\n  (:domain {})", p.name, p.domain_name);
    requirements(&mut out, &p.requirements);
    let objects = typed_list(p.objects.iter().map(|o| (o.name.to_string(), &o.ty)));
    if objects.is_empty() {
        out.push_str("\n  (:objects)");
    } else {
        let _ = write!(out, "\n  (:objects {objects})");
    }
    out.push_str("\n  (:init");
    for a in &p.init {
        let _ = write!(out, "\n    {a}");
    }
    out.push(')');
    if p.goal.is_empty() {
        out.push_str("\n  (:goal (and)))\n");
    } else {
        out.push_str("\n  (:goal (and");
        for g in &p.goal {
            let _ = write!(out, "\n    {g}");
        }
        out.push_str(")))\n");
    }
    out
}

/// One step per line; the empty plan prints as the empty string.
pub fn print_plan(plan: &Plan) -> String {
    plan.steps.iter().map(|s| format!("{s}\n")).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pddl::{parse_domain, parse_plan, parse_problem};

    #[test]
    fn empty_plan_prints_empty() {
        assert_eq!(print_plan(&Plan::default()), "");
    }

    #[test]
    fn domain_layout() {
        let d = parse_domain(
            "(define (domain D) (:requirements :typing :strips) (:types block - object)
              (:predicates (on ?x ?y - block) (arm-empty))
              (:action stack :parameters (?x ?y - block)
                 :precondition (and (arm-empty))
                 :effect (and (on ?x ?y) (not (arm-empty)))))",
        )
        .unwrap();
        let text = print_domain(&d);
        assert_eq!(
            text,
            "(define (domain d)\n  (:requirements :strips :typing)\n  (:types block)\n  (:predicates\n    (on ?x ?y - block)\n    (arm-empty))\n  (:action stack\n    :parameters (?x ?y - block)\n    :precondition (and (arm-empty))\n    :effect (and (on ?x ?y) (not (arm-empty)))))\n"
        );
        assert_eq!(parse_domain(&text).unwrap(), d);
    }

    #[test]
    fn problem_round_trip() {
        let text = "(define (problem p) (:domain d) (:objects a b - block h)
            (:init (on a b) (free h)) (:goal (and (on b a) (not (free h)))))";
        let p = parse_problem(text, None).unwrap();
        let printed = print_problem(&p);
        assert!(printed.contains("(:objects a b - block h)"), "{printed}");
        assert_eq!(parse_problem(&printed, None).unwrap(), p);
        assert_eq!(print_problem(&parse_problem(&printed, None).unwrap()), printed);
    }

    #[test]
    fn plan_round_trip() {
        let plan = parse_plan("(unstack b a)\n(put-down b)").unwrap();
        assert_eq!(print_plan(&plan), "(unstack b a)\n(put-down b)\n");
        assert_eq!(parse_plan(&print_plan(&plan)).unwrap(), plan);
    }
}
