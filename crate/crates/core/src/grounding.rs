//! Instantiation of action schemas over objects, and STRIPS transition
//! semantics shared by the planner and the validator.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::pddl::{
    check_problem, ActionSchema, Domain, GroundAtom, GroundLiteral, Literal, PddlError, PlanStep,
    Problem, Symbol, Term, TypedObject,
};

/// Closed-world state: atoms not present are false.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct State {
    pub atoms: BTreeSet<GroundAtom>,
}

impl State {
    pub fn new(atoms: impl IntoIterator<Item = GroundAtom>) -> Self {
        State {
            atoms: atoms.into_iter().collect(),
        }
    }

    pub fn contains(&self, atom: &GroundAtom) -> bool {
        self.atoms.contains(atom)
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroundAction {
    pub name: Symbol,
    pub args: Vec<Symbol>,
    pub pre_pos: BTreeSet<GroundAtom>,
    pub pre_neg: BTreeSet<GroundAtom>,
    pub add: BTreeSet<GroundAtom>,
    pub del: BTreeSet<GroundAtom>,
}

impl GroundAction {
    pub fn step(&self) -> PlanStep {
        PlanStep::new(self.name.clone(), self.args.clone())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroundTask {
    pub actions: Vec<GroundAction>,
    pub init: State,
    pub goal_pos: BTreeSet<GroundAtom>,
    pub goal_neg: BTreeSet<GroundAtom>,
    /// Objects plus domain constants.
    pub num_objects: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct GroundingOptions {
    /// Drop ground actions whose preconditions on never-changing predicates
    /// are false in the initial state.
    pub prune_static: bool,
}

fn bind(lit: &Literal, schema: &ActionSchema, args: &[Symbol]) -> GroundAtom {
    let args = lit
        .args
        .iter()
        .map(|t| match t {
            Term::Const(c) => c.clone(),
            Term::Var(v) => {
                let i = schema
                    .param_index(v)
                    .expect("schema variables are bound by parameters");
                args[i].clone()
            }
        })
        .collect();
    GroundAtom::new(lit.predicate.clone(), args)
}

/// Binds `args` into `schema`. The caller guarantees `args.len()` equals the
/// schema's arity.
pub fn instantiate(schema: &ActionSchema, args: &[Symbol]) -> GroundAction {
    assert_eq!(args.len(), schema.arity(), "arity of `{}`", schema.name);
    let mut pre_pos = BTreeSet::new();
    let mut pre_neg = BTreeSet::new();
    for lit in &schema.precondition {
        let atom = bind(lit, schema, args);
        if lit.positive {
            pre_pos.insert(atom);
        } else {
            pre_neg.insert(atom);
        }
    }
    let add: BTreeSet<GroundAtom> = schema.add_effects.iter().map(|l| bind(l, schema, args)).collect();
    // distinct schema literals can collide once bound, e.g. (p ?x) and (p ?y)
    let del = schema
        .del_effects
        .iter()
        .map(|l| bind(l, schema, args))
        .filter(|a| !add.contains(a))
        .collect();
    GroundAction {
        name: schema.name.clone(),
        args: args.to_vec(),
        pre_pos,
        pre_neg,
        add,
        del,
    }
}

/// All objects visible to a problem: domain constants first.
pub fn universe<'a>(domain: &'a Domain, problem: &'a Problem) -> Vec<&'a TypedObject> {
    let mut out: Vec<&TypedObject> = domain.constants.iter().collect();
    for o in &problem.objects {
        if !out.iter().any(|c| c.name == o.name) {
            out.push(o);
        }
    }
    out
}

pub fn ground(domain: &Domain, problem: &Problem) -> Result<GroundTask, PddlError> {
    ground_with(domain, problem, GroundingOptions::default())
}

pub fn ground_with(
    domain: &Domain,
    problem: &Problem,
    opts: GroundingOptions,
) -> Result<GroundTask, PddlError> {
    check_problem(problem, domain)?;
    let objects = universe(domain, problem);
    let init = State::new(problem.init.iter().cloned());

    let fluent: BTreeSet<&Symbol> = domain
        .actions
        .iter()
        .flat_map(|a| a.add_effects.iter().chain(&a.del_effects))
        .map(|l| &l.predicate)
        .collect();

    let mut actions = Vec::new();
    for schema in &domain.actions {
        let candidates: Vec<Vec<Symbol>> = schema
            .params
            .iter()
            .map(|p| {
                objects
                    .iter()
                    .filter(|o| domain.types.is_subtype(&o.ty, &p.ty))
                    .map(|o| o.name.clone())
                    .collect()
            })
            .collect();
        if candidates.iter().any(Vec::is_empty) {
            continue;
        }
        // odometer over the cartesian product, last parameter fastest
        let mut idx = vec![0usize; candidates.len()];
        'odometer: loop {
            let args: Vec<Symbol> = idx
                .iter()
                .zip(&candidates)
                .map(|(&i, c)| c[i].clone())
                .collect();
            let a = instantiate(schema, &args);
            let keep = !opts.prune_static
                || (a
                    .pre_pos
                    .iter()
                    .all(|p| fluent.contains(&p.predicate) || init.contains(p))
                    && a
                        .pre_neg
                        .iter()
                        .all(|p| fluent.contains(&p.predicate) || !init.contains(p)));
            if keep {
                actions.push(a);
            }
            let mut k = idx.len();
            loop {
                if k == 0 {
                    break 'odometer;
                }
                k -= 1;
                idx[k] += 1;
                if idx[k] < candidates[k].len() {
                    continue 'odometer;
                }
                idx[k] = 0;
            }
        }
    }

    Ok(GroundTask {
        actions,
        init,
        goal_pos: problem.goal_pos().cloned().collect(),
        goal_neg: problem.goal_neg().cloned().collect(),
        num_objects: objects.len(),
    })
}

pub fn applicable(state: &State, a: &GroundAction) -> bool {
    a.pre_pos.iter().all(|p| state.contains(p)) && !a.pre_neg.iter().any(|p| state.contains(p))
}

/// Literals of `a`'s precondition that are false in `state`.
pub fn unsatisfied(state: &State, a: &GroundAction) -> Vec<GroundLiteral> {
    let missing = a
        .pre_pos
        .iter()
        .filter(|p| !state.contains(p))
        .cloned()
        .map(GroundLiteral::pos);
    let present = a
        .pre_neg
        .iter()
        .filter(|p| state.contains(p))
        .cloned()
        .map(GroundLiteral::neg);
    missing.chain(present).collect()
}

/// Successor state: deletes first, then adds.
pub fn apply(state: &State, a: &GroundAction) -> State {
    let mut atoms = state.atoms.clone();
    for d in &a.del {
        atoms.remove(d);
    }
    atoms.extend(a.add.iter().cloned());
    State { atoms }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("`{step}` is not applicable: {} precondition literal(s) false", unsatisfied.len())]
pub struct NotApplicable {
    pub step: PlanStep,
    pub unsatisfied: Vec<GroundLiteral>,
}

pub fn apply_checked(state: &State, a: &GroundAction) -> Result<State, NotApplicable> {
    let bad = unsatisfied(state, a);
    if bad.is_empty() {
        Ok(apply(state, a))
    } else {
        Err(NotApplicable {
            step: a.step(),
            unsatisfied: bad,
        })
    }
}

pub fn satisfies<'a>(
    state: &State,
    goal_pos: impl IntoIterator<Item = &'a GroundAtom>,
    goal_neg: impl IntoIterator<Item = &'a GroundAtom>,
) -> bool {
    goal_pos.into_iter().all(|g| state.contains(g))
        && !goal_neg.into_iter().any(|g| state.contains(g))
}

/// Goal literals that `state` fails.
pub fn unmet_goals(state: &State, goal: &[GroundLiteral]) -> Vec<GroundLiteral> {
    goal.iter()
        .filter(|g| state.contains(&g.atom) != g.positive)
        .cloned()
        .collect()
}
