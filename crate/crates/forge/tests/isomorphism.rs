//! Renaming never changes what is solvable or how long an optimal plan is.

#[path = "../../core/tests/common/oracle.rs"]
mod oracle;

use pddlbench_core::grounding::ground;
use pddlbench_core::validator::validate;
use pddlbench_core::{gold, Plan};
use pddlbench_forge::obfuscate::{map_plan, RenameMap};
use pddlbench_forge::{gen_barman_config, gen_blocksworld_config, obfuscate};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn blocksworld_optimal_lengths_survive_renaming() {
    let d = gold::blocksworld();
    for seed in 0..12u64 {
        let config = gen_blocksworld_config(seed, 2 + seed as usize % 3).unwrap();
        let p = config.to_problem("iso");
        let map = RenameMap::nonsense(&mut ChaCha8Rng::seed_from_u64(seed), &d, &p);
        let (od, op) = obfuscate(&d, &p, &map).unwrap();
        let a = oracle::optimal_length(&ground(&d, &p).unwrap(), 12);
        let b = oracle::optimal_length(&ground(&od, &op).unwrap(), 12);
        assert!(a.is_some());
        assert_eq!(a, b, "seed {seed}");
    }
}

#[test]
fn mystery_map_preserves_optimal_length() {
    let d = gold::blocksworld();
    let p = gold::blocksworld_p99();
    let objects: Vec<_> = p.objects.iter().map(|o| o.name.clone()).collect();
    let (od, op) = obfuscate(&d, &p, &RenameMap::mystery(&objects).unwrap()).unwrap();
    let a = oracle::optimal_length(&ground(&d, &p).unwrap(), 12);
    assert_eq!(a, oracle::optimal_length(&ground(&od, &op).unwrap(), 12));
}

#[test]
fn plan_validity_is_preserved_both_ways() {
    let d = gold::blocksworld();
    let bd = pddlbench_core::parse_domain(gold::BARMAN_DOMAIN).unwrap();
    let mut cases = Vec::new();
    for seed in 0..10u64 {
        let c = gen_blocksworld_config(seed, 3 + seed as usize).unwrap();
        cases.push((d.clone(), c.to_problem("iso"), c.witness_plan()));
        let b = gen_barman_config(seed, 3, 3, 2).unwrap();
        cases.push((bd.clone(), b.to_problem("iso"), b.witness_plan()));
    }
    for (seed, (d, p, plan)) in cases.into_iter().enumerate() {
        let map = RenameMap::nonsense(&mut ChaCha8Rng::seed_from_u64(seed as u64), &d, &p);
        let (od, op) = obfuscate(&d, &p, &map).unwrap();
        let truncated = Plan {
            steps: plan.steps[..plan.steps.len() - 1].to_vec(),
        };
        let mut reversed = plan.clone();
        reversed.steps.reverse();
        for candidate in [plan, truncated, reversed] {
            let before = validate(&d, &p, &candidate).is_valid();
            let after = validate(&od, &op, &map_plan(&candidate, &map)).is_valid();
            assert_eq!(before, after);
        }
    }
}
