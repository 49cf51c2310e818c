use std::fmt;
use std::str::FromStr;

use pddlbench_core::gold::{self, GoldPair};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DomainTag {
    Blocksworld,
    MysteryBlocksworld,
    Logistics,
    Barman,
}

impl DomainTag {
    pub const ALL: [DomainTag; 4] = [
        DomainTag::Blocksworld,
        DomainTag::MysteryBlocksworld,
        DomainTag::Logistics,
        DomainTag::Barman,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            DomainTag::Blocksworld => "blocksworld",
            DomainTag::MysteryBlocksworld => "mystery_blocksworld",
            DomainTag::Logistics => "logistics",
            DomainTag::Barman => "barman",
        }
    }

    pub fn gold(self) -> GoldPair {
        gold::pair(self.as_str()).expect("every tag has a gold pair")
    }

    /// Whether a hand-written moderately templated domain description ships.
    pub fn has_moderate(self) -> bool {
        matches!(self, DomainTag::Blocksworld | DomainTag::Logistics)
    }
}

impl fmt::Display for DomainTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for DomainTag {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().replace('-', "_").as_str() {
            "blocksworld" => Ok(DomainTag::Blocksworld),
            "mystery" | "mystery_blocksworld" => Ok(DomainTag::MysteryBlocksworld),
            "logistics" => Ok(DomainTag::Logistics),
            "barman" => Ok(DomainTag::Barman),
            other => Err(format!(
                "unknown domain `{other}` (blocksworld, mystery, logistics, barman)"
            )),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum NaturalnessLevel {
    #[serde(rename = "heavy")]
    HeavilyTemplated,
    #[serde(rename = "moderate")]
    ModeratelyTemplated,
    #[serde(rename = "natural")]
    Natural,
}

impl NaturalnessLevel {
    pub const ALL: [NaturalnessLevel; 3] = [
        NaturalnessLevel::HeavilyTemplated,
        NaturalnessLevel::ModeratelyTemplated,
        NaturalnessLevel::Natural,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            NaturalnessLevel::HeavilyTemplated => "heavy",
            NaturalnessLevel::ModeratelyTemplated => "moderate",
            NaturalnessLevel::Natural => "natural",
        }
    }
}

impl fmt::Display for NaturalnessLevel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for NaturalnessLevel {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().replace('-', "_").as_str() {
            "heavy" | "heavily_templated" => Ok(NaturalnessLevel::HeavilyTemplated),
            "moderate" | "moderately_templated" => Ok(NaturalnessLevel::ModeratelyTemplated),
            "natural" => Ok(NaturalnessLevel::Natural),
            other => Err(format!("unknown level `{other}` (heavy, moderate, natural)")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_round_trip() {
        for t in DomainTag::ALL {
            assert_eq!(t.as_str().parse::<DomainTag>().unwrap(), t);
            assert_eq!(serde_json::to_value(t).unwrap(), t.as_str());
            assert_eq!(t.gold().tag, t.as_str());
        }
        for l in NaturalnessLevel::ALL {
            assert_eq!(l.as_str().parse::<NaturalnessLevel>().unwrap(), l);
            assert_eq!(serde_json::to_value(l).unwrap(), l.as_str());
        }
        assert_eq!("mystery".parse::<DomainTag>().unwrap(), DomainTag::MysteryBlocksworld);
    }
}
