#![no_main]

use libfuzzer_sys::fuzz_target;
use pddlbench_core::{gold, parse_problem, print_problem};

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(p) = parse_problem(s, None) {
        assert_eq!(parse_problem(&print_problem(&p), None).expect("printed problem reparses"), p);
    }
    let _ = parse_problem(s, Some(&gold::blocksworld()));
});
