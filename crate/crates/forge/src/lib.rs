//! Benchmark instance generation: gold PDDL pairs, their natural-language
//! descriptions at three levels of templating, and the on-disk dataset layout.

use std::collections::BTreeMap;

pub mod barman;
pub mod blocksworld;
pub mod dataset;
mod error;
pub mod lex;
pub mod natural;
pub mod obfuscate;
mod tags;

pub use barman::{gen_barman_config, gen_barman_instance, BarmanConfig};
pub use blocksworld::{gen_blocksworld_config, gen_blocksworld_instance, BlocksConfig};
pub use dataset::{generate, load_dataset, read_instance, write_dataset, write_instance, GenSpec, TaskInstance, Verification};
pub use error::ForgeError;
pub use lex::{render_heavy, render_heavy_pd, render_moderate, render_moderate_pd, Lexicalization};
pub use natural::{render_natural, NaturalDraft, NaturalSettings, ProblemConfig, ReviewChecklist};
pub use obfuscate::{obfuscate, RenameMap};
pub use tags::{DomainTag, NaturalnessLevel};

/// Named size measures of an instance, e.g. `num_blocks`.
pub type Complexity = BTreeMap<String, u64>;
