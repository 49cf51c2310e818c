#![allow(dead_code)]

pub mod oracle;

use rand::seq::SliceRandom;
use rand::Rng;

use pddlbench_core::pddl::{parse_problem, Problem};

/// Random stacks over `blocks`: each block joins an existing stack or opens a new one.
pub fn random_stacks<R: Rng>(rng: &mut R, blocks: &[String]) -> Vec<Vec<String>> {
    let mut order = blocks.to_vec();
    order.shuffle(rng);
    let mut stacks: Vec<Vec<String>> = Vec::new();
    for b in order {
        let k = rng.random_range(0..=stacks.len());
        if k == stacks.len() {
            stacks.push(vec![b]);
        } else {
            stacks[k].push(b);
        }
    }
    stacks
}

fn stack_atoms(stacks: &[Vec<String>], with_clear: bool) -> Vec<String> {
    let mut out = Vec::new();
    for s in stacks {
        out.push(format!("(on-table {})", s[0]));
        for w in s.windows(2) {
            out.push(format!("(on {} {})", w[1], w[0]));
        }
        if with_clear {
            out.push(format!("(clear {})", s[s.len() - 1]));
        }
    }
    out
}

/// A random blocksworld problem for the gold domain.
pub fn random_blocksworld<R: Rng>(rng: &mut R, n: usize) -> (Problem, String) {
    let blocks: Vec<String> = (0..n).map(|i| format!("b{i}")).collect();
    let init = stack_atoms(&random_stacks(rng, &blocks), true);
    let goal = stack_atoms(&random_stacks(rng, &blocks), false);
    let text = format!(
        "(define (problem rand) (:domain blocksworld) (:objects {}) (:init (arm-empty) {}) (:goal (and {})))",
        blocks.join(" "),
        init.join(" "),
        goal.join(" ")
    );
    (parse_problem(&text, None).unwrap(), text)
}
