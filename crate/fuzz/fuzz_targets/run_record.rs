#![no_main]

use libfuzzer_sys::fuzz_target;
use pddlbench_harness::RunRecord;

fuzz_target!(|data: &[u8]| {
    if let Ok(r) = serde_json::from_slice::<RunRecord>(data) {
        let line = serde_json::to_string(&r).expect("record serializes");
        let _ = pddlbench_harness::summarize_all(&[r], None);
        assert!(!line.contains('\n'));
    }
});
