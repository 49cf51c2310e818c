//! Structure-preserving renaming of every user symbol in a domain/problem pair.

use std::collections::{BTreeMap, BTreeSet};

use pddlbench_core::pddl::{
    ActionSchema, GroundLiteral, Literal, Predicate, Term, TypeHierarchy, TypedObject, TypedVar,
};
use pddlbench_core::{Domain, GroundAtom, Plan, PlanStep, Problem, Symbol};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::ForgeError;

/// Names that look like plain symbols but carry meaning in PDDL.
pub const RESERVED: [&str; 12] = [
    "object", "and", "not", "or", "either", "define", "domain", "problem", "forall", "exists",
    "when", "imply",
];

fn reserved(s: &Symbol) -> bool {
    RESERVED.contains(&s.as_str())
}

/// The blocksworld-to-mystery vocabulary.
pub const MYSTERY_NAMES: [(&str, &str); 10] = [
    ("blocksworld", "mystery_blocksworld"),
    ("pickup", "attack"),
    ("putdown", "succumb"),
    ("stack", "overcome"),
    ("unstack", "feast"),
    ("clear", "province"),
    ("on-table", "planet"),
    ("arm-empty", "harmony"),
    ("holding", "pain"),
    ("on", "craves"),
];

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct RenameMap {
    forward: BTreeMap<Symbol, Symbol>,
}

impl RenameMap {
    pub fn new(pairs: impl IntoIterator<Item = (Symbol, Symbol)>) -> Result<Self, ForgeError> {
        let mut forward = BTreeMap::new();
        let mut targets = BTreeMap::new();
        for (from, to) in pairs {
            if reserved(&from) || reserved(&to) {
                return Err(ForgeError::NotBijective(format!("`{from}` -> `{to}` touches a reserved name")));
            }
            if let Some(prev) = forward.insert(from.clone(), to.clone()) {
                if prev != to {
                    return Err(ForgeError::NotBijective(format!("`{from}` mapped to both `{prev}` and `{to}`")));
                }
            }
            if let Some(other) = targets.insert(to.clone(), from.clone()) {
                if other != from {
                    return Err(ForgeError::NotBijective(format!("`{other}` and `{from}` both map to `{to}`")));
                }
            }
        }
        Ok(RenameMap { forward })
    }

    pub fn identity(symbols: impl IntoIterator<Item = Symbol>) -> Self {
        RenameMap {
            forward: symbols.into_iter().filter(|s| !reserved(s)).map(|s| (s.clone(), s)).collect(),
        }
    }

    /// The mystery vocabulary plus blocks renamed to `a`, `b`, `c`, ... in order.
    pub fn mystery(objects: &[Symbol]) -> Result<Self, ForgeError> {
        if objects.len() > 26 {
            return Err(ForgeError::InvalidParameter(format!("{} objects exceed the a..z range", objects.len())));
        }
        let names = MYSTERY_NAMES.iter().map(|(a, b)| (Symbol::from_static(a), Symbol::from_static(b)));
        let letters = objects.iter().zip('a'..='z').map(|(o, c)| {
            (o.clone(), Symbol::new(&c.to_string()).expect("letters are valid symbols"))
        });
        RenameMap::new(names.chain(letters))
    }

    /// Fresh pronounceable nonsense for every symbol of the pair.
    pub fn nonsense<R: Rng + ?Sized>(rng: &mut R, domain: &Domain, problem: &Problem) -> Self {
        let symbols = symbols_of(domain, problem);
        let mut used: BTreeSet<String> = symbols.iter().map(|s| s.to_string()).collect();
        used.extend(RESERVED.iter().map(|s| s.to_string()));
        let forward = symbols
            .into_iter()
            .map(|s| {
                let word = loop {
                    let w = nonsense_word(rng);
                    if used.insert(w.clone()) {
                        break w;
                    }
                };
                (s, Symbol::new(&word).expect("nonsense words are valid symbols"))
            })
            .collect();
        RenameMap { forward }
    }

    pub fn get(&self, s: &Symbol) -> Option<&Symbol> {
        self.forward.get(s)
    }

    pub fn len(&self) -> usize {
        self.forward.len()
    }

    pub fn is_empty(&self) -> bool {
        self.forward.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Symbol, &Symbol)> {
        self.forward.iter()
    }

    pub fn inverse(&self) -> RenameMap {
        RenameMap {
            forward: self.forward.iter().map(|(a, b)| (b.clone(), a.clone())).collect(),
        }
    }

    fn map(&self, s: &Symbol) -> Symbol {
        self.forward.get(s).cloned().unwrap_or_else(|| s.clone())
    }
}

const ONSETS: [&str; 16] = ["b", "d", "f", "g", "k", "l", "m", "n", "p", "r", "s", "t", "v", "z", "sh", "gr"];
const VOWELS: [&str; 6] = ["a", "e", "i", "o", "u", "oo"];

fn nonsense_word<R: Rng + ?Sized>(rng: &mut R) -> String {
    let syllables = rng.random_range(2..=3);
    let mut w = String::new();
    for _ in 0..syllables {
        w.push_str(ONSETS[rng.random_range(0..ONSETS.len())]);
        w.push_str(VOWELS[rng.random_range(0..VOWELS.len())]);
    }
    w
}

/// Every renamable symbol, in a fixed order: domain name, types, constants,
/// predicates, actions, objects.
pub fn symbols_of(domain: &Domain, problem: &Problem) -> Vec<Symbol> {
    let mut out: Vec<Symbol> = Vec::new();
    let mut push = |s: &Symbol| {
        if !reserved(s) && !out.contains(s) {
            out.push(s.clone());
        }
    };
    push(&domain.name);
    push(&problem.domain_name);
    for (child, parent) in domain.types.entries() {
        push(child);
        push(parent);
    }
    domain.constants.iter().for_each(|c| push(&c.name));
    domain.predicates.iter().for_each(|p| push(&p.name));
    domain.actions.iter().for_each(|a| push(&a.name));
    problem.objects.iter().for_each(|o| push(&o.name));
    out
}

fn literal(m: &RenameMap, l: &Literal) -> Literal {
    let args = l
        .args
        .iter()
        .map(|t| match t {
            Term::Var(v) => Term::Var(v.clone()),
            Term::Const(c) => Term::Const(m.map(c)),
        })
        .collect();
    Literal::new(m.map(&l.predicate), args, l.positive)
}

fn typed_var(m: &RenameMap, v: &TypedVar) -> TypedVar {
    TypedVar::new(v.name.clone(), m.map(&v.ty))
}

fn ground(m: &RenameMap, a: &GroundAtom) -> GroundAtom {
    GroundAtom::new(m.map(&a.predicate), a.args.iter().map(|s| m.map(s)).collect())
}

/// Applies `map` to every symbol of the pair. Variables and reserved names are
/// untouched; the problem name is renamed only if the map mentions it.
pub fn obfuscate(domain: &Domain, problem: &Problem, map: &RenameMap) -> Result<(Domain, Problem), ForgeError> {
    let missing: Vec<String> = symbols_of(domain, problem)
        .into_iter()
        .filter(|s| map.get(s).is_none())
        .map(|s| s.to_string())
        .collect();
    if !missing.is_empty() {
        return Err(ForgeError::IncompleteMap(missing));
    }
    let m = map;
    let mut types = TypeHierarchy::new();
    for (child, parent) in domain.types.entries() {
        types.insert(m.map(child), m.map(parent));
    }
    let d = Domain {
        name: m.map(&domain.name),
        requirements: domain.requirements.clone(),
        types,
        constants: domain.constants.iter().map(|c| TypedObject::new(m.map(&c.name), m.map(&c.ty))).collect(),
        predicates: domain
            .predicates
            .iter()
            .map(|p| Predicate {
                name: m.map(&p.name),
                params: p.params.iter().map(|v| typed_var(m, v)).collect(),
            })
            .collect(),
        actions: domain
            .actions
            .iter()
            .map(|a| {
                ActionSchema::new(
                    m.map(&a.name),
                    a.params.iter().map(|v| typed_var(m, v)).collect(),
                    a.precondition.iter().map(|l| literal(m, l)).collect(),
                    a.add_effects.iter().map(|l| literal(m, l)).collect(),
                    a.del_effects.iter().map(|l| literal(m, l)).collect(),
                )
            })
            .collect(),
    };
    let p = Problem {
        name: m.map(&problem.name),
        domain_name: m.map(&problem.domain_name),
        requirements: problem.requirements.clone(),
        objects: problem.objects.iter().map(|o| TypedObject::new(m.map(&o.name), m.map(&o.ty))).collect(),
        init: problem.init.iter().map(|a| ground(m, a)).collect(),
        goal: problem
            .goal
            .iter()
            .map(|g| GroundLiteral {
                atom: ground(m, &g.atom),
                positive: g.positive,
            })
            .collect(),
    };
    Ok((d, p))
}

/// Renames action names and arguments of a plan; unknown symbols pass through.
pub fn map_plan(plan: &Plan, map: &RenameMap) -> Plan {
    Plan::new(
        plan.steps
            .iter()
            .map(|s| PlanStep::new(map.map(&s.action), s.args.iter().map(|a| map.map(a)).collect()))
            .collect(),
    )
}
