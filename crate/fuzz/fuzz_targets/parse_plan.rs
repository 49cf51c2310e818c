#![no_main]

use libfuzzer_sys::fuzz_target;
use pddlbench_core::validator::validate;
use pddlbench_core::{gold, parse_plan, print_plan};

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(plan) = parse_plan(s) {
        assert_eq!(parse_plan(&print_plan(&plan)).expect("printed plan reparses"), plan);
        let _ = validate(&gold::blocksworld(), &gold::blocksworld_p99(), &plan);
    }
});
