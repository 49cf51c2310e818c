#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let _ = pddlbench_gateway::CacheEntry::from_json(data);
});
