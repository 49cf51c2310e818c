//! Forward state-space search over a grounded task.
//!
//! States are sorted slices of interned atom ids. Successors come from a
//! trigger index: each action is filed under one of its positive
//! preconditions, so only actions whose trigger holds are tested.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, VecDeque};
use std::time::{Duration, Instant};

use indexmap::IndexSet;
use serde::{Deserialize, Serialize};

use crate::grounding::{ground, GroundTask};
use crate::pddl::{parse_domain, parse_problem, GroundAtom, PddlError, Plan};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Strategy {
    /// Breadth-first for tasks with at most `AUTO_BFS_MAX_OBJECTS` objects,
    /// greedy best-first otherwise.
    #[default]
    Auto,
    Bfs,
    GbfsGoalcount,
}

pub const AUTO_BFS_MAX_OBJECTS: usize = 8;

impl Strategy {
    pub fn resolve(self, task: &GroundTask) -> Strategy {
        match self {
            Strategy::Auto if task.num_objects <= AUTO_BFS_MAX_OBJECTS => Strategy::Bfs,
            Strategy::Auto => Strategy::GbfsGoalcount,
            s => s,
        }
    }
}

impl std::str::FromStr for Strategy {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().replace('-', "_").as_str() {
            "auto" => Ok(Strategy::Auto),
            "bfs" => Ok(Strategy::Bfs),
            "gbfs" | "gbfs_goalcount" => Ok(Strategy::GbfsGoalcount),
            other => Err(format!("unknown strategy `{other}` (auto, bfs, gbfs_goalcount)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SearchLimits {
    pub max_expanded_states: u64,
    pub max_wall_time_secs: f64,
    pub strategy: Strategy,
}

impl Default for SearchLimits {
    fn default() -> Self {
        SearchLimits {
            max_expanded_states: 2_000_000,
            max_wall_time_secs: 60.0,
            strategy: Strategy::Auto,
        }
    }
}

impl SearchLimits {
    pub fn with_strategy(self, strategy: Strategy) -> Self {
        SearchLimits { strategy, ..self }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchStats {
    pub expanded: u64,
    pub generated: u64,
    pub elapsed_secs: f64,
    pub strategy: Strategy,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum SolveVerdict {
    SolvedWithPlan { plan: Plan },
    ProvenUnsolvable,
    ResourceExceeded,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolveResult {
    pub verdict: SolveVerdict,
    pub stats: SearchStats,
}

impl SolveResult {
    pub fn plan(&self) -> Option<&Plan> {
        match &self.verdict {
            SolveVerdict::SolvedWithPlan { plan } => Some(plan),
            _ => None,
        }
    }
}

struct CompiledAction {
    pre_pos: Box<[u32]>,
    pre_neg: Box<[u32]>,
    add: Box<[u32]>,
    del: Box<[u32]>,
}

struct Compiled {
    actions: Vec<CompiledAction>,
    /// atom id -> actions triggered by it
    triggers: Vec<Vec<u32>>,
    /// actions without positive preconditions
    always: Vec<u32>,
    init: Box<[u32]>,
    goal_pos: Box<[u32]>,
    goal_neg: Box<[u32]>,
}

fn sorted_ids<'a>(
    atoms: &mut IndexSet<GroundAtom>,
    it: impl IntoIterator<Item = &'a GroundAtom>,
) -> Box<[u32]> {
    let mut v: Vec<u32> = it
        .into_iter()
        .map(|a| atoms.insert_full(a.clone()).0 as u32)
        .collect();
    v.sort_unstable();
    v.dedup();
    v.into_boxed_slice()
}

fn compile(task: &GroundTask) -> Compiled {
    let mut atoms = IndexSet::new();
    let init = sorted_ids(&mut atoms, &task.init.atoms);
    let goal_pos = sorted_ids(&mut atoms, &task.goal_pos);
    let goal_neg = sorted_ids(&mut atoms, &task.goal_neg);
    let actions: Vec<CompiledAction> = task
        .actions
        .iter()
        .map(|a| CompiledAction {
            pre_pos: sorted_ids(&mut atoms, &a.pre_pos),
            pre_neg: sorted_ids(&mut atoms, &a.pre_neg),
            add: sorted_ids(&mut atoms, &a.add),
            del: sorted_ids(&mut atoms, &a.del),
        })
        .collect();
    let mut triggers = vec![Vec::new(); atoms.len()];
    let mut always = Vec::new();
    for (i, a) in actions.iter().enumerate() {
        match a.pre_pos.first() {
            Some(&t) => triggers[t as usize].push(i as u32),
            None => always.push(i as u32),
        }
    }
    Compiled {
        actions,
        triggers,
        always,
        init,
        goal_pos,
        goal_neg,
    }
}

fn holds(state: &[u32], atom: u32) -> bool {
    state.binary_search(&atom).is_ok()
}

impl Compiled {
    fn applicable(&self, state: &[u32], a: &CompiledAction) -> bool {
        a.pre_pos.iter().all(|&p| holds(state, p)) && !a.pre_neg.iter().any(|&p| holds(state, p))
    }

    /// Applicable action ids in ascending order.
    fn successors(&self, state: &[u32], buf: &mut Vec<u32>) {
        buf.clear();
        for &atom in state {
            for &i in &self.triggers[atom as usize] {
                if self.applicable(state, &self.actions[i as usize]) {
                    buf.push(i);
                }
            }
        }
        for &i in &self.always {
            if self.applicable(state, &self.actions[i as usize]) {
                buf.push(i);
            }
        }
        buf.sort_unstable();
    }

    fn apply(&self, state: &[u32], a: &CompiledAction) -> Box<[u32]> {
        let mut v: Vec<u32> = state
            .iter()
            .copied()
            .filter(|s| a.del.binary_search(s).is_err())
            .chain(a.add.iter().copied())
            .collect();
        v.sort_unstable();
        v.dedup();
        v.into_boxed_slice()
    }

    fn unmet(&self, state: &[u32]) -> usize {
        self.goal_pos.iter().filter(|&&g| !holds(state, g)).count()
            + self.goal_neg.iter().filter(|&&g| holds(state, g)).count()
    }
}

/// Visited states with parent pointers: index -> (parent index, action id).
struct Closed {
    states: IndexSet<Box<[u32]>>,
    parents: Vec<(u32, u32)>,
}

impl Closed {
    fn plan(&self, task: &GroundTask, mut idx: usize) -> Plan {
        let mut steps = Vec::new();
        while idx != 0 {
            let (parent, action) = self.parents[idx];
            steps.push(task.actions[action as usize].step());
            idx = parent as usize;
        }
        steps.reverse();
        Plan::new(steps)
    }
}

/// Searches for a plan. Deterministic for identical inputs.
pub fn solve(task: &GroundTask, limits: &SearchLimits) -> SolveResult {
    let start = Instant::now();
    let strategy = limits.strategy.resolve(task);
    let deadline = Duration::try_from_secs_f64(limits.max_wall_time_secs.max(0.0)).unwrap_or(Duration::MAX);
    let c = compile(task);

    let mut closed = Closed {
        states: IndexSet::new(),
        parents: Vec::new(),
    };
    closed.states.insert(c.init.clone());
    closed.parents.push((0, 0));

    let mut fifo: VecDeque<usize> = VecDeque::new();
    let mut heap: BinaryHeap<Reverse<(usize, u64, usize)>> = BinaryHeap::new();
    let mut seq = 0u64;
    match strategy {
        Strategy::Bfs => fifo.push_back(0),
        _ => heap.push(Reverse((c.unmet(&c.init), seq, 0))),
    }

    let mut expanded = 0u64;
    let mut generated = 0u64;
    let mut buf = Vec::new();
    let verdict = loop {
        let next = match strategy {
            Strategy::Bfs => fifo.pop_front(),
            _ => heap.pop().map(|Reverse((_, _, i))| i),
        };
        let Some(idx) = next else {
            break SolveVerdict::ProvenUnsolvable;
        };
        if expanded >= limits.max_expanded_states
            || (expanded % 1024 == 0 && start.elapsed() > deadline)
        {
            break SolveVerdict::ResourceExceeded;
        }
        expanded += 1;
        let state = closed.states.get_index(idx).expect("queued states are closed").clone();
        if c.unmet(&state) == 0 {
            break SolveVerdict::SolvedWithPlan {
                plan: closed.plan(task, idx),
            };
        }
        c.successors(&state, &mut buf);
        for &a in &buf {
            generated += 1;
            let succ = c.apply(&state, &c.actions[a as usize]);
            let h = match strategy {
                Strategy::Bfs => 0,
                _ => c.unmet(&succ),
            };
            let (child, fresh) = closed.states.insert_full(succ);
            if !fresh {
                continue;
            }
            closed.parents.push((idx as u32, a));
            match strategy {
                Strategy::Bfs => fifo.push_back(child),
                _ => {
                    seq += 1;
                    heap.push(Reverse((h, seq, child)));
                }
            }
        }
    };

    SolveResult {
        verdict,
        stats: SearchStats {
            expanded,
            generated,
            elapsed_secs: start.elapsed().as_secs_f64(),
            strategy,
        },
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Solvability {
    Solvable { plan: Plan },
    Unsolvable,
    ParseFailure { error: PddlError },
    ResourceExceeded,
}

impl Solvability {
    pub fn is_solvable(&self) -> bool {
        matches!(self, Solvability::Solvable { .. })
    }

    pub fn label(&self) -> &'static str {
        match self {
            Solvability::Solvable { .. } => "solvable",
            Solvability::Unsolvable => "unsolvable",
            Solvability::ParseFailure { .. } => "parse_failure",
            Solvability::ResourceExceeded => "resource_exceeded",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolvabilityReport {
    pub verdict: Solvability,
    pub stats: Option<SearchStats>,
}

/// Parses, grounds and solves a (typically model-written) domain/problem pair.
pub fn solvability_check(df_text: &str, pf_text: &str, limits: &SearchLimits) -> SolvabilityReport {
    let parsed = parse_domain(df_text).and_then(|d| {
        let p = parse_problem(pf_text, Some(&d))?;
        let t = ground(&d, &p)?;
        Ok(t)
    });
    let task = match parsed {
        Ok(t) => t,
        Err(error) => {
            return SolvabilityReport {
                verdict: Solvability::ParseFailure { error },
                stats: None,
            }
        }
    };
    let result = solve(&task, limits);
    let verdict = match result.verdict {
        SolveVerdict::SolvedWithPlan { plan } => Solvability::Solvable { plan },
        SolveVerdict::ProvenUnsolvable => Solvability::Unsolvable,
        SolveVerdict::ResourceExceeded => Solvability::ResourceExceeded,
    };
    SolvabilityReport {
        verdict,
        stats: Some(result.stats),
    }
}
