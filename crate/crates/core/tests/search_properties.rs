mod common;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use pddlbench_core::gold;
use pddlbench_core::grounding::{ground, satisfies};
use pddlbench_core::pddl::{parse_plan, Plan};
use pddlbench_core::planner::{solve, SearchLimits, SolveVerdict, Strategy};
use pddlbench_core::validator::{validate, Verdict};

use common::oracle::optimal_length;

#[test]
fn bfs_matches_iterative_deepening_up_to_five_blocks() {
    let domain = gold::blocksworld();
    let limits = SearchLimits::default().with_strategy(Strategy::Bfs);
    for seed in 0..60u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = 1 + (seed as usize % 5);
        let (problem, _) = common::random_blocksworld(&mut rng, n);
        let task = ground(&domain, &problem).unwrap();
        let r = solve(&task, &limits);
        let plan = r.plan().expect("blocksworld is always solvable");
        assert!(validate(&domain, &problem, plan).is_valid(), "seed {seed}");
        assert_eq!(Some(plan.len()), optimal_length(&task, 2 * n + 2), "seed {seed}");
    }
}

#[test]
fn p99_optimum_is_ten() {
    let task = ground(&gold::blocksworld(), &gold::blocksworld_p99()).unwrap();
    assert_eq!(optimal_length(&task, 12), Some(10));
}

#[test]
fn every_found_plan_validates() {
    let domain = gold::blocksworld();
    for seed in 0..120u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(1000 + seed);
        let (problem, _) = common::random_blocksworld(&mut rng, 1 + seed as usize % 4);
        let task = ground(&domain, &problem).unwrap();
        for s in [Strategy::Bfs, Strategy::GbfsGoalcount] {
            let r = solve(&task, &SearchLimits::default().with_strategy(s));
            let report = validate(&domain, &problem, r.plan().unwrap());
            assert_eq!(report.verdict, Verdict::Valid, "seed {seed} {s:?}");
            assert!(satisfies(report.final_state.as_ref().unwrap(), &task.goal_pos, &task.goal_neg));
        }
    }
}

#[test]
fn gbfs_handles_fifteen_blocks() {
    let domain = gold::blocksworld();
    let mut rng = ChaCha8Rng::seed_from_u64(15);
    let (problem, _) = common::random_blocksworld(&mut rng, 15);
    let task = ground(&domain, &problem).unwrap();
    let r = solve(&task, &SearchLimits::default());
    assert_eq!(r.stats.strategy, Strategy::GbfsGoalcount);
    assert!(validate(&domain, &problem, r.plan().unwrap()).is_valid());
}

#[test]
fn larger_limits_never_flip_definite_verdicts() {
    let domain = gold::blocksworld();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let (problem, _) = common::random_blocksworld(&mut rng, 4);
    let task = ground(&domain, &problem).unwrap();
    let mut definite = None;
    for cap in [1u64, 10, 100, 1000, 100_000] {
        let limits = SearchLimits {
            max_expanded_states: cap,
            ..SearchLimits::default().with_strategy(Strategy::Bfs)
        };
        match (solve(&task, &limits).verdict, &definite) {
            (SolveVerdict::ResourceExceeded, None) => {}
            (SolveVerdict::ResourceExceeded, Some(_)) => panic!("definite verdict lost at cap {cap}"),
            (v, None) => definite = Some(v),
            (v, Some(d)) => assert_eq!(&v, d),
        }
    }
    assert!(definite.is_some());
}

#[test]
fn prefix_monotonicity() {
    let domain = gold::blocksworld();
    let problem = gold::blocksworld_p99();
    let bad = parse_plan("(unstack blue red)\n(pickup green)").unwrap();
    let r = validate(&domain, &problem, &bad);
    assert_eq!((r.verdict, r.failure_step), (Verdict::Invalid, Some(1)));
    let mut longer = bad.steps.clone();
    longer.extend(parse_plan("(putdown blue)\n(pickup red)").unwrap().steps);
    let r2 = validate(&domain, &problem, &Plan::new(longer));
    assert!(r2.failure_step.unwrap() <= 1);
}

#[test]
fn solving_is_deterministic() {
    let task = ground(&gold::blocksworld(), &gold::blocksworld_p99()).unwrap();
    for s in [Strategy::Bfs, Strategy::GbfsGoalcount] {
        let limits = SearchLimits::default().with_strategy(s);
        let a = solve(&task, &limits);
        let b = solve(&task, &limits);
        assert_eq!(a.verdict, b.verdict);
        assert_eq!((a.stats.expanded, a.stats.generated), (b.stats.expanded, b.stats.generated));
    }
}
