use std::time::Instant;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use pddlbench_core::pddl::*;

#[path = "common/random_pddl.rs"]
mod random_pddl;
use random_pddl::{random_domain, random_plan, random_problem};

proptest! {
    #![proptest_config(ProptestConfig { cases: 1000, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn parse_print_identity(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let d = random_domain(&mut rng);
        let dt = print_domain(&d);
        let back = parse_domain(&dt).map_err(|e| TestCaseError::fail(format!("{e}\n{dt}")))?;
        prop_assert_eq!(&back, &d, "{}", dt);
        prop_assert_eq!(print_domain(&back), dt);

        let p = random_problem(&mut rng);
        let pt = print_problem(&p);
        let back = parse_problem(&pt, None).map_err(|e| TestCaseError::fail(format!("{e}\n{pt}")))?;
        prop_assert_eq!(&back, &p);
        prop_assert_eq!(print_problem(&back), pt);

        let plan = random_plan(&mut rng);
        let text = print_plan(&plan);
        prop_assert_eq!(parse_plan(&text).unwrap(), plan);
    }
}

#[test]
fn thousand_cases_are_quick() {
    let start = Instant::now();
    for seed in 0..1000u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let d = random_domain(&mut rng);
        assert_eq!(parse_domain(&print_domain(&d)).unwrap(), d);
    }
    assert!(start.elapsed().as_secs() < 30);
}
