//! Barman instances shaped like the IPC generator output: one shaker, two
//! hands, three shaker levels and one dispenser per ingredient.

use std::collections::BTreeMap;

use indexmap::IndexSet;
use pddlbench_core::pddl::{GroundLiteral, TypedObject};
use pddlbench_core::{GroundAtom, Plan, PlanStep, Problem, Symbol};
use rand::seq::{index, SliceRandom};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::{Complexity, ForgeError};

pub const MAX_SHOTS: usize = 9;
pub const MAX_INGREDIENTS: usize = 9;
pub const MAX_COCKTAILS: usize = 9;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BarmanConfig {
    pub shots: usize,
    pub ingredients: usize,
    /// Zero-based ingredient indices of each cocktail's two parts.
    pub parts: Vec<(usize, usize)>,
    /// Zero-based shot that must hold each cocktail; pairwise distinct.
    pub targets: Vec<usize>,
}

fn sym(s: &str) -> Symbol {
    Symbol::new(s).expect("generator names are valid symbols")
}

fn n(prefix: &str, i: usize) -> Symbol {
    sym(&format!("{prefix}{}", i + 1))
}

fn atom(pred: &str, args: &[Symbol]) -> GroundAtom {
    GroundAtom::new(sym(pred), args.to_vec())
}

impl BarmanConfig {
    pub fn cocktails(&self) -> usize {
        self.parts.len()
    }

    pub fn to_problem(&self, name: &str) -> Problem {
        let shaker = sym("shaker1");
        let (left, right) = (sym("left"), sym("right"));
        let levels: Vec<Symbol> = (0..3).map(|i| sym(&format!("l{i}"))).collect();
        let shots: Vec<Symbol> = (0..self.shots).map(|i| n("shot", i)).collect();
        let ingr: Vec<Symbol> = (0..self.ingredients).map(|i| n("ingredient", i)).collect();
        let disp: Vec<Symbol> = (0..self.ingredients).map(|i| n("dispenser", i)).collect();
        let cocktails: Vec<Symbol> = (0..self.cocktails()).map(|i| n("cocktail", i)).collect();

        fn typed<'a>(names: &'a [Symbol], ty: &'static str) -> impl Iterator<Item = TypedObject> + 'a {
            names.iter().map(move |o| TypedObject::new(o.clone(), sym(ty)))
        }
        let objects = typed(std::slice::from_ref(&shaker), "shaker")
            .chain(typed(&[left.clone(), right.clone()], "hand"))
            .chain(typed(&shots, "shot"))
            .chain(typed(&ingr, "ingredient"))
            .chain(typed(&cocktails, "cocktail"))
            .chain(typed(&disp, "dispenser"))
            .chain(typed(&levels, "level"))
            .collect();

        let containers: Vec<Symbol> = std::iter::once(shaker.clone()).chain(shots.iter().cloned()).collect();
        let mut init: IndexSet<GroundAtom> = IndexSet::new();
        init.extend(containers.iter().map(|c| atom("ontable", &[c.clone()])));
        init.extend(disp.iter().zip(&ingr).map(|(d, i)| atom("dispenses", &[d.clone(), i.clone()])));
        init.extend(containers.iter().map(|c| atom("clean", &[c.clone()])));
        init.extend(containers.iter().map(|c| atom("empty", &[c.clone()])));
        init.insert(atom("handempty", &[left.clone()]));
        init.insert(atom("handempty", &[right.clone()]));
        init.insert(atom("shaker-empty-level", &[shaker.clone(), levels[0].clone()]));
        init.insert(atom("shaker-level", &[shaker.clone(), levels[0].clone()]));
        init.insert(atom("next", &[levels[0].clone(), levels[1].clone()]));
        init.insert(atom("next", &[levels[1].clone(), levels[2].clone()]));
        for (c, &(a, b)) in cocktails.iter().zip(&self.parts) {
            init.insert(atom("cocktail-part1", &[c.clone(), ingr[a].clone()]));
            init.insert(atom("cocktail-part2", &[c.clone(), ingr[b].clone()]));
        }
        let goal = cocktails
            .iter()
            .zip(&self.targets)
            .map(|(c, &s)| GroundLiteral::pos(atom("contains", &[shots[s].clone(), c.clone()])))
            .collect();
        Problem {
            name: sym(name),
            domain_name: sym("barman"),
            requirements: Default::default(),
            objects,
            init,
            goal,
        }
    }

    /// Fourteen steps per cocktail, prepared in its own target shot with the
    /// left hand while the right hand stays free.
    pub fn witness_plan(&self) -> Plan {
        let mut steps = Vec::new();
        let mut push = |action: &str, args: Vec<Symbol>| steps.push(PlanStep::new(sym(action), args));
        let (sh, left, right) = (sym("shaker1"), sym("left"), sym("right"));
        let l = |i: usize| sym(&format!("l{i}"));
        for (c, (&(a, b), &t)) in self.parts.iter().zip(&self.targets).enumerate() {
            let (shot, cocktail) = (n("shot", t), n("cocktail", c));
            let (ia, ib) = (n("ingredient", a), n("ingredient", b));
            let (da, db) = (n("dispenser", a), n("dispenser", b));
            push("grasp", vec![left.clone(), shot.clone()]);
            push("fill-shot", vec![shot.clone(), ia.clone(), left.clone(), right.clone(), da]);
            push("pour-shot-to-clean-shaker", vec![shot.clone(), ia.clone(), sh.clone(), left.clone(), l(0), l(1)]);
            push("clean-shot", vec![shot.clone(), ia.clone(), left.clone(), right.clone()]);
            push("fill-shot", vec![shot.clone(), ib.clone(), left.clone(), right.clone(), db]);
            push("pour-shot-to-used-shaker", vec![shot.clone(), ib.clone(), sh.clone(), left.clone(), l(1), l(2)]);
            push("clean-shot", vec![shot.clone(), ib.clone(), left.clone(), right.clone()]);
            push("leave", vec![left.clone(), shot.clone()]);
            push("grasp", vec![left.clone(), sh.clone()]);
            push("shake", vec![cocktail.clone(), ia, ib, sh.clone(), left.clone(), right.clone()]);
            push("pour-shaker-to-shot", vec![cocktail.clone(), shot, left.clone(), sh.clone(), l(2), l(1)]);
            push("empty-shaker", vec![left.clone(), sh.clone(), cocktail, l(1), l(0)]);
            push("clean-shaker", vec![left.clone(), right.clone(), sh.clone()]);
            push("leave", vec![left.clone(), sh.clone()]);
        }
        Plan::new(steps)
    }

    pub fn complexity(&self) -> Complexity {
        BTreeMap::from([
            ("shots".to_string(), self.shots as u64),
            ("ingredients".to_string(), self.ingredients as u64),
            ("cocktails".to_string(), self.cocktails() as u64),
        ])
    }
}

pub fn gen_barman_config(seed: u64, shots: usize, ingredients: usize, cocktails: usize) -> Result<BarmanConfig, ForgeError> {
    let bad = |m: String| Err(ForgeError::InvalidParameter(m));
    if !(1..=MAX_SHOTS).contains(&shots) {
        return bad(format!("shots must be in 1..={MAX_SHOTS}, got {shots}"));
    }
    if !(1..=MAX_INGREDIENTS).contains(&ingredients) {
        return bad(format!("ingredients must be in 1..={MAX_INGREDIENTS}, got {ingredients}"));
    }
    if cocktails > MAX_COCKTAILS {
        return bad(format!("cocktails must be at most {MAX_COCKTAILS}, got {cocktails}"));
    }
    if cocktails > shots {
        return bad(format!("{cocktails} cocktails need at least as many shots, got {shots}"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let parts = (0..cocktails)
        .map(|_| {
            if ingredients == 1 {
                (0, 0)
            } else {
                let mut pair = index::sample(&mut rng, ingredients, 2).into_vec();
                pair.sort_unstable();
                (pair[0], pair[1])
            }
        })
        .collect();
    let mut order: Vec<usize> = (0..shots).collect();
    order.shuffle(&mut rng);
    order.truncate(cocktails);
    Ok(BarmanConfig {
        shots,
        ingredients,
        parts,
        targets: order,
    })
}

pub fn gen_barman_instance(seed: u64, shots: usize, ingredients: usize, cocktails: usize) -> Result<Problem, ForgeError> {
    let cfg = gen_barman_config(seed, shots, ingredients, cocktails)?;
    Ok(cfg.to_problem(&format!("barman-s{seed}")))
}
