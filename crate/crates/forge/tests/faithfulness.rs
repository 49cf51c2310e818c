#[path = "common/accounting.rs"]
mod accounting;

use pddlbench_forge::obfuscate::RenameMap;
use pddlbench_forge::{
    gen_barman_instance, gen_blocksworld_instance, obfuscate, render_heavy, render_heavy_pd, render_moderate_pd,
    DomainTag, Lexicalization,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use accounting::{check_dd, check_pd, lex_value};

#[test]
fn gold_pairs() {
    for tag in DomainTag::ALL {
        let (d, p) = tag.gold().parse().unwrap();
        let lex = Lexicalization::builtin(tag);
        let v = lex_value(tag);
        check_dd(Some(&v), &d, &render_heavy(&d, &lex).unwrap());
        check_pd(Some((&v, "pd")), &p, &render_heavy_pd(&p, &lex).unwrap());
        if tag.has_moderate() {
            check_pd(Some((&v, "moderate")), &p, &render_moderate_pd(&p, &lex).unwrap());
        }
    }
}

#[test]
fn generated_blocksworld() {
    let d = pddlbench_core::gold::blocksworld();
    let lex = Lexicalization::builtin(DomainTag::Blocksworld);
    let v = lex_value(DomainTag::Blocksworld);
    for seed in 0..40 {
        let (p, _) = gen_blocksworld_instance(seed, 2 + (seed as usize % 14)).unwrap();
        check_pd(Some((&v, "pd")), &p, &render_heavy_pd(&p, &lex).unwrap());
        check_pd(Some((&v, "moderate")), &p, &render_moderate_pd(&p, &lex).unwrap());
    }
    check_dd(Some(&v), &d, &render_heavy(&d, &lex).unwrap());
}

#[test]
fn generated_barman() {
    let lex = Lexicalization::builtin(DomainTag::Barman);
    let v = lex_value(DomainTag::Barman);
    for seed in 0..30u64 {
        let s = 1 + seed as usize % 9;
        let p = gen_barman_instance(seed, s, 1 + (seed as usize * 7) % 9, 1 + seed as usize % s).unwrap();
        check_pd(Some((&v, "pd")), &p, &render_heavy_pd(&p, &lex).unwrap());
    }
    let empty = gen_barman_instance(3, 2, 2, 0).unwrap();
    check_pd(Some((&v, "pd")), &empty, &render_heavy_pd(&empty, &lex).unwrap());
}

#[test]
fn nonsense_vocabulary_uses_generic_lexicon() {
    let d = pddlbench_core::gold::blocksworld();
    for seed in 0..10 {
        let (p, _) = gen_blocksworld_instance(seed, 5).unwrap();
        let map = RenameMap::nonsense(&mut ChaCha8Rng::seed_from_u64(seed), &d, &p);
        let (od, op) = obfuscate(&d, &p, &map).unwrap();
        let lex = Lexicalization::generic(&od);
        check_dd(None, &od, &render_heavy(&od, &lex).unwrap());
        check_pd(None, &op, &render_heavy_pd(&op, &lex).unwrap());
    }
}
