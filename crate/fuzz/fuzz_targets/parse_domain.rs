#![no_main]

use libfuzzer_sys::fuzz_target;
use pddlbench_core::{parse_domain, print_domain};

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(d) = parse_domain(s) {
        // anything accepted must survive a print/parse round trip
        let text = print_domain(&d);
        assert_eq!(parse_domain(&text).expect("printed domain reparses"), d);
    }
});
