//! Random domains, problems and plans for round-trip checks.

use indexmap::IndexSet;
use rand::seq::IndexedRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use pddlbench_core::pddl::*;

fn sym(s: String) -> Symbol {
    Symbol::new(&s).unwrap()
}

fn name(rng: &mut ChaCha8Rng, prefix: &str) -> String {
    const ALPHABET: &[u8] = b"abcdefghijklmnopqrstuvwxyz0123456789-_";
    let len = rng.random_range(0..5);
    let tail: String = (0..len).map(|_| *ALPHABET.choose(rng).unwrap() as char).collect();
    format!("{prefix}{tail}")
}

fn unique(rng: &mut ChaCha8Rng, prefix: &str, n: std::ops::Range<usize>) -> Vec<Symbol> {
    let n = rng.random_range(n);
    let mut out = IndexSet::new();
    while out.len() < n {
        out.insert(sym(name(rng, prefix)));
    }
    out.into_iter().collect()
}

pub fn random_domain(rng: &mut ChaCha8Rng) -> Domain {
    let mut requirements = std::collections::BTreeSet::new();
    for r in ["strips", "typing", "negative-preconditions"] {
        if rng.random_bool(0.5) {
            requirements.insert(sym(r.into()));
        }
    }
    let mut types = TypeHierarchy::new();
    let mut known = vec![Symbol::object()];
    for t in unique(rng, "t", 0..4) {
        let parent = known.choose(rng).unwrap().clone();
        types.insert(t.clone(), parent);
        known.push(t);
    }
    let constants: Vec<TypedObject> = unique(rng, "k", 0..3)
        .into_iter()
        .map(|c| TypedObject::new(c, known.choose(rng).unwrap().clone()))
        .collect();
    let predicates: Vec<Predicate> = unique(rng, "p", 1..5)
        .into_iter()
        .map(|n| {
            let params = unique(rng, "x", 0..4)
                .into_iter()
                .map(|v| TypedVar::new(v, known.choose(rng).unwrap().clone()))
                .collect();
            Predicate { name: n, params }
        })
        .collect();
    let actions = unique(rng, "a", 0..4)
        .into_iter()
        .map(|n| {
            let params: Vec<TypedVar> = unique(rng, "v", 0..4)
                .into_iter()
                .map(|v| TypedVar::new(v, known.choose(rng).unwrap().clone()))
                .collect();
            let mut terms: Vec<Term> = params.iter().map(|p| Term::Var(p.name.clone())).collect();
            terms.extend(constants.iter().map(|c| Term::Const(c.name.clone())));
            let lit = |rng: &mut ChaCha8Rng, positive: bool| -> Option<Literal> {
                let p = predicates.choose(rng).unwrap();
                if terms.is_empty() && p.arity() > 0 {
                    return None;
                }
                let args = (0..p.arity()).map(|_| terms.choose(rng).unwrap().clone()).collect();
                Some(Literal::new(p.name.clone(), args, positive))
            };
            let pre = (0..rng.random_range(0..4)).filter_map(|_| { let pos = rng.random_bool(0.7); lit(rng, pos) }).collect();
            let add = (0..rng.random_range(0..3)).filter_map(|_| lit(rng, true)).collect();
            let del = (0..rng.random_range(0..3)).filter_map(|_| lit(rng, true)).collect();
            ActionSchema::new(n, params, pre, add, del)
        })
        .collect();
    Domain {
        name: sym(name(rng, "d")),
        requirements,
        types,
        constants,
        predicates,
        actions,
    }
}

pub fn random_problem(rng: &mut ChaCha8Rng) -> Problem {
    let objects: Vec<TypedObject> = unique(rng, "o", 0..5)
        .into_iter()
        .map(|o| {
            let ty = if rng.random_bool(0.5) { Symbol::object() } else { sym(name(rng, "t")) };
            TypedObject::new(o, ty)
        })
        .collect();
    let preds = unique(rng, "p", 3..4);
    let atom = |rng: &mut ChaCha8Rng| {
        let args = if objects.is_empty() {
            vec![]
        } else {
            (0..rng.random_range(0..3)).map(|_| objects.choose(rng).unwrap().name.clone()).collect()
        };
        GroundAtom::new(preds.choose(rng).unwrap().clone(), args)
    };
    let init: IndexSet<GroundAtom> = (0..rng.random_range(0..6)).map(|_| atom(rng)).collect();
    let mut goal: Vec<GroundLiteral> = Vec::new();
    for _ in 0..rng.random_range(0..4) {
        let g = GroundLiteral { atom: atom(rng), positive: rng.random_bool(0.7) };
        if !goal.contains(&g) {
            goal.push(g);
        }
    }
    Problem {
        name: sym(name(rng, "q")),
        domain_name: sym(name(rng, "d")),
        requirements: Default::default(),
        objects,
        init,
        goal,
    }
}

pub fn random_plan(rng: &mut ChaCha8Rng) -> Plan {
    Plan::new(
        (0..rng.random_range(0..6))
            .map(|_| {
                let args = unique(rng, "o", 0..3);
                PlanStep::new(sym(name(rng, "a")), args)
            })
            .collect(),
    )
}
