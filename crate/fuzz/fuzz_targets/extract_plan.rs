#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(s) = std::str::from_utf8(data) {
        if let Ok(text) = pddlbench_harness::extract_plan(s) {
            let _ = pddlbench_core::parse_plan(&text);
        }
    }
});
