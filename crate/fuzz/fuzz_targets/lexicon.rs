#![no_main]

use libfuzzer_sys::fuzz_target;
use pddlbench_core::gold;
use pddlbench_forge::{render_heavy, render_heavy_pd, Lexicalization};

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(lex) = Lexicalization::from_toml(s) {
        let _ = render_heavy(&gold::blocksworld(), &lex);
        let _ = render_heavy_pd(&gold::blocksworld_p99(), &lex);
    }
});
