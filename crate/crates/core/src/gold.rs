//! Reference domain/problem pairs shipped with the crate.

use crate::pddl::{parse_domain, parse_problem, Domain, PddlError, Problem};

pub const BLOCKSWORLD_DOMAIN: &str = include_str!("../assets/gold/blocksworld-domain.pddl");
pub const BLOCKSWORLD_P99: &str = include_str!("../assets/gold/blocksworld-p99.pddl");
pub const MYSTERY_DOMAIN: &str = include_str!("../assets/gold/mystery-domain.pddl");
pub const MYSTERY_P01: &str = include_str!("../assets/gold/mystery-p01.pddl");
pub const LOGISTICS_DOMAIN: &str = include_str!("../assets/gold/logistics-domain.pddl");
pub const LOGISTICS_4_0: &str = include_str!("../assets/gold/logistics-4-0.pddl");
pub const BARMAN_DOMAIN: &str = include_str!("../assets/gold/barman-domain.pddl");
pub const BARMAN_1_2_1: &str = include_str!("../assets/gold/barman-1-2-1.pddl");

/// A named gold domain text with one problem text.
#[derive(Debug, Clone, Copy)]
pub struct GoldPair {
    pub tag: &'static str,
    pub domain: &'static str,
    pub problem: &'static str,
}

impl GoldPair {
    pub fn parse(&self) -> Result<(Domain, Problem), PddlError> {
        let d = parse_domain(self.domain)?;
        let p = parse_problem(self.problem, Some(&d))?;
        Ok((d, p))
    }
}

pub const PAIRS: [GoldPair; 4] = [
    GoldPair {
        tag: "blocksworld",
        domain: BLOCKSWORLD_DOMAIN,
        problem: BLOCKSWORLD_P99,
    },
    GoldPair {
        tag: "mystery_blocksworld",
        domain: MYSTERY_DOMAIN,
        problem: MYSTERY_P01,
    },
    GoldPair {
        tag: "logistics",
        domain: LOGISTICS_DOMAIN,
        problem: LOGISTICS_4_0,
    },
    GoldPair {
        tag: "barman",
        domain: BARMAN_DOMAIN,
        problem: BARMAN_1_2_1,
    },
];

pub fn pair(tag: &str) -> Option<GoldPair> {
    PAIRS.iter().copied().find(|p| p.tag == tag)
}

pub fn blocksworld() -> Domain {
    parse_domain(BLOCKSWORLD_DOMAIN).expect("gold blocksworld domain parses")
}

pub fn blocksworld_p99() -> Problem {
    parse_problem(BLOCKSWORLD_P99, None).expect("gold p99 parses")
}
