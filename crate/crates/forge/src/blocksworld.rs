//! Random blocksworld instances: independent uniform set partitions of the
//! blocks into initial and goal stacks, each stack uniformly ordered.

use std::collections::{BTreeMap, HashMap};

use indexmap::IndexSet;
use pddlbench_core::pddl::{GroundLiteral, TypedObject};
use pddlbench_core::{GroundAtom, Plan, PlanStep, Problem, Symbol};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::{Complexity, ForgeError};

pub const MIN_BLOCKS: usize = 2;
pub const MAX_BLOCKS: usize = 15;

/// Block names, in object order.
pub const COLORS: [&str; MAX_BLOCKS] = [
    "red", "blue", "green", "yellow", "orange", "purple", "white", "black", "pink", "brown",
    "gray", "cyan", "magenta", "violet", "silver",
];

/// A blocksworld configuration. Stacks are listed bottom to top.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlocksConfig {
    pub blocks: Vec<Symbol>,
    pub init: Vec<Vec<Symbol>>,
    pub goal: Vec<Vec<Symbol>>,
}

fn sym(s: &str) -> Symbol {
    Symbol::new(s).expect("generator names are valid symbols")
}

fn atom(pred: &str, args: &[&Symbol]) -> GroundAtom {
    GroundAtom::new(sym(pred), args.iter().map(|&a| a.clone()).collect())
}

fn step(action: &str, args: &[&Symbol]) -> PlanStep {
    PlanStep::new(sym(action), args.iter().map(|&a| a.clone()).collect())
}

/// Structure atoms of a stack: the base on the table, each block on the one below.
fn stack_atoms(stack: &[Symbol]) -> impl Iterator<Item = GroundAtom> + '_ {
    stack.first().map(|b| atom("on-table", &[b])).into_iter().chain(
        stack.windows(2).map(|w| atom("on", &[&w[1], &w[0]])),
    )
}

impl BlocksConfig {
    /// Checks that both partitions cover `blocks` exactly once.
    pub fn new(blocks: Vec<Symbol>, init: Vec<Vec<Symbol>>, goal: Vec<Vec<Symbol>>) -> Result<Self, ForgeError> {
        for (label, stacks) in [("initial", &init), ("goal", &goal)] {
            let mut seen: Vec<&Symbol> = stacks.iter().flatten().collect();
            seen.sort();
            let mut want: Vec<&Symbol> = blocks.iter().collect();
            want.sort();
            if seen != want || stacks.iter().any(|s| s.is_empty()) {
                return Err(ForgeError::InvalidParameter(format!(
                    "{label} stacks must partition the blocks"
                )));
            }
        }
        Ok(BlocksConfig { blocks, init, goal })
    }

    /// Reads a configuration back out of a blocksworld problem.
    pub fn from_problem(p: &Problem) -> Option<Self> {
        let blocks: Vec<Symbol> = p.objects.iter().map(|o| o.name.clone()).collect();
        let read = |atoms: &mut dyn Iterator<Item = &GroundAtom>| -> Option<Vec<Vec<Symbol>>> {
            let mut bases = Vec::new();
            let mut above: HashMap<Symbol, Symbol> = HashMap::new();
            for a in atoms {
                match (a.predicate.as_str(), a.args.as_slice()) {
                    ("on-table", [b]) => bases.push(b.clone()),
                    ("on", [top, below]) => {
                        if above.insert(below.clone(), top.clone()).is_some() {
                            return None;
                        }
                    }
                    _ => {}
                }
            }
            let mut stacks = Vec::new();
            for base in bases {
                let mut stack = vec![base];
                while let Some(next) = above.get(stack.last().unwrap()) {
                    if stack.contains(next) {
                        return None;
                    }
                    stack.push(next.clone());
                }
                stacks.push(stack);
            }
            Some(stacks)
        };
        let init = read(&mut p.init.iter())?;
        let goal = read(&mut p.goal_pos())?;
        BlocksConfig::new(blocks, init, goal).ok()
    }

    pub fn num_blocks(&self) -> usize {
        self.blocks.len()
    }

    pub fn to_problem(&self, name: &str) -> Problem {
        let mut init: IndexSet<GroundAtom> = IndexSet::new();
        for s in &self.init {
            init.extend(stack_atoms(s));
            init.insert(atom("clear", &[s.last().expect("stacks are nonempty")]));
        }
        init.insert(atom("arm-empty", &[]));
        let goal = self
            .goal
            .iter()
            .flat_map(|s| stack_atoms(s))
            .map(GroundLiteral::pos)
            .collect();
        Problem {
            name: sym(name),
            domain_name: sym("blocksworld"),
            requirements: Default::default(),
            objects: self
                .blocks
                .iter()
                .map(|b| TypedObject::new(b.clone(), Symbol::object()))
                .collect(),
            init,
            goal,
        }
    }

    /// Unstacks everything onto the table, then builds each goal stack bottom-up.
    pub fn witness_plan(&self) -> Plan {
        let mut steps = Vec::new();
        for s in &self.init {
            for i in (1..s.len()).rev() {
                steps.push(step("unstack", &[&s[i], &s[i - 1]]));
                steps.push(step("putdown", &[&s[i]]));
            }
        }
        for s in &self.goal {
            for w in s.windows(2) {
                steps.push(step("pickup", &[&w[1]]));
                steps.push(step("stack", &[&w[1], &w[0]]));
            }
        }
        Plan::new(steps)
    }

    pub fn complexity(&self) -> Complexity {
        BTreeMap::from([
            ("num_blocks".to_string(), self.blocks.len() as u64),
            ("init_stacks".to_string(), self.init.len() as u64),
            ("goal_stacks".to_string(), self.goal.len() as u64),
        ])
    }
}

/// Stirling numbers of the second kind, `s[n][k]`, for n up to `MAX_BLOCKS`.
fn stirling() -> Vec<Vec<u64>> {
    let mut s = vec![vec![0u64; MAX_BLOCKS + 1]; MAX_BLOCKS + 1];
    s[0][0] = 1;
    for n in 1..=MAX_BLOCKS {
        for k in 1..=n {
            s[n][k] = k as u64 * s[n - 1][k] + s[n - 1][k - 1];
        }
    }
    s
}

/// A uniformly random set partition of `0..n`, blocks ordered by least element.
pub fn random_partition<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<Vec<usize>> {
    assert!(n <= MAX_BLOCKS, "partition size {n} exceeds {MAX_BLOCKS}");
    let s = stirling();
    let bell: u64 = s[n].iter().sum();
    let mut pick = rng.random_range(0..bell.max(1));
    let mut k = 0;
    for (j, &count) in s[n].iter().enumerate() {
        if pick < count {
            k = j;
            break;
        }
        pick -= count;
    }
    // element m-1 either opens a new block or joins one of the k existing ones
    fn build<R: Rng + ?Sized>(rng: &mut R, s: &[Vec<u64>], m: usize, k: usize) -> Vec<Vec<usize>> {
        if m == 0 {
            return Vec::new();
        }
        let alone = if k == 0 { 0 } else { s[m - 1][k - 1] };
        if rng.random_range(0..s[m][k]) < alone {
            let mut p = build(rng, s, m - 1, k - 1);
            p.push(vec![m - 1]);
            p
        } else {
            let mut p = build(rng, s, m - 1, k);
            let j = rng.random_range(0..k);
            p[j].push(m - 1);
            p
        }
    }
    let mut p = build(rng, &s, n, k);
    p.sort_by_key(|b| b[0]);
    p
}

fn random_stacks<R: Rng + ?Sized>(rng: &mut R, blocks: &[Symbol]) -> Vec<Vec<Symbol>> {
    random_partition(rng, blocks.len())
        .into_iter()
        .map(|mut part| {
            part.shuffle(rng);
            part.into_iter().map(|i| blocks[i].clone()).collect()
        })
        .collect()
}

pub fn gen_blocksworld_config(seed: u64, num_blocks: usize) -> Result<BlocksConfig, ForgeError> {
    if !(MIN_BLOCKS..=MAX_BLOCKS).contains(&num_blocks) {
        return Err(ForgeError::InvalidParameter(format!(
            "num_blocks must be in {MIN_BLOCKS}..={MAX_BLOCKS}, got {num_blocks}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let blocks: Vec<Symbol> = COLORS[..num_blocks].iter().map(|c| sym(c)).collect();
    let init = random_stacks(&mut rng, &blocks);
    let goal = random_stacks(&mut rng, &blocks);
    BlocksConfig::new(blocks, init, goal)
}

/// A seeded random instance named `blocksworld-s<seed>`.
pub fn gen_blocksworld_instance(seed: u64, num_blocks: usize) -> Result<(Problem, Complexity), ForgeError> {
    let cfg = gen_blocksworld_config(seed, num_blocks)?;
    Ok((cfg.to_problem(&format!("blocksworld-s{seed}")), cfg.complexity()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use pddlbench_core::gold;
    use pddlbench_core::validator::validate;

    #[test]
    fn stirling_row_sums_are_bell_numbers() {
        let s = stirling();
        let bell: Vec<u64> = (0..=6).map(|n| s[n].iter().sum()).collect();
        assert_eq!(bell, [1, 1, 2, 5, 15, 52, 203]);
        assert_eq!(s[15].iter().sum::<u64>(), 1_382_958_545);
    }

    #[test]
    fn partitions_of_three_are_uniform() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let mut counts: BTreeMap<Vec<Vec<usize>>, u32> = BTreeMap::new();
        for _ in 0..15_000 {
            *counts.entry(random_partition(&mut rng, 3)).or_default() += 1;
        }
        assert_eq!(counts.len(), 5);
        for c in counts.values() {
            assert!((2700..3300).contains(c), "{counts:?}");
        }
    }

    #[test]
    fn p99_from_stacks() {
        let c = |names: &[&str]| names.iter().map(|n| sym(n)).collect::<Vec<_>>();
        let cfg = BlocksConfig::new(
            c(&["red", "blue", "green", "yellow"]),
            vec![c(&["red", "blue"]), c(&["green", "yellow"])],
            vec![c(&["red", "green", "yellow", "blue"])],
        )
        .unwrap();
        assert_eq!(cfg.to_problem("blocksworld-p99"), gold::blocksworld_p99());
        assert_eq!(BlocksConfig::from_problem(&gold::blocksworld_p99()).unwrap(), cfg);
    }

    #[test]
    fn deterministic_and_valid() {
        let d = gold::blocksworld();
        for seed in 0..50 {
            for n in [2, 5, 15] {
                let a = gen_blocksworld_config(seed, n).unwrap();
                assert_eq!(a, gen_blocksworld_config(seed, n).unwrap());
                let p = a.to_problem("t");
                assert!(pddlbench_core::pddl::check_problem(&p, &d).is_ok());
                assert!(validate(&d, &p, &a.witness_plan()).is_valid(), "seed {seed} n {n}");
                assert_eq!(BlocksConfig::from_problem(&p).unwrap(), a);
                assert_eq!(p.init.len(), n + a.init.len() + 1);
            }
        }
    }

    #[test]
    fn block_count_bounds() {
        assert!(gen_blocksworld_config(0, 1).is_err());
        assert!(gen_blocksworld_config(0, 16).is_err());
    }

    #[test]
    fn two_block_swap() {
        // every two-block configuration shows up, including the full swap
        let mut seen = std::collections::BTreeSet::new();
        for seed in 0..200 {
            let cfg = gen_blocksworld_config(seed, 2).unwrap();
            seen.insert((cfg.init.clone(), cfg.goal.clone()));
        }
        assert_eq!(seen.len(), 9);
        let (r, b) = (sym("red"), sym("blue"));
        assert!(seen.contains(&(vec![vec![r.clone(), b.clone()]], vec![vec![b, r]])));
    }
}
