//! Iterative-deepening depth-first search over ground actions, used as an
//! optimality oracle independent of the planner's search code.

use std::collections::HashMap;

use pddlbench_core::grounding::{applicable, apply, satisfies, GroundTask, State};

fn dfs(task: &GroundTask, state: &State, budget: usize, seen: &mut HashMap<State, usize>) -> bool {
    if satisfies(state, &task.goal_pos, &task.goal_neg) {
        return true;
    }
    if budget == 0 {
        return false;
    }
    match seen.get(state) {
        Some(&b) if b >= budget => return false,
        _ => {
            seen.insert(state.clone(), budget);
        }
    }
    task.actions
        .iter()
        .filter(|a| applicable(state, a))
        .any(|a| dfs(task, &apply(state, a), budget - 1, seen))
}

/// Length of a shortest plan, or `None` if none exists within `max_depth`.
pub fn optimal_length(task: &GroundTask, max_depth: usize) -> Option<usize> {
    (0..=max_depth).find(|&d| dfs(task, &task.init, d, &mut HashMap::new()))
}
