//! Flat `key = value` experiment config, merged under command-line flags.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use pddlbench_core::planner::{SearchLimits, Strategy};
use pddlbench_forge::{DomainTag, NaturalnessLevel};
use pddlbench_harness::Pipeline;

use crate::RunArgs;

pub const KEYS: &[&str] = &[
    "dataset",
    "domains",
    "levels",
    "pipelines",
    "model",
    "temperature",
    "max_output_tokens",
    "cache",
    "out",
    "parallelism",
    "replay",
    "record",
    "prompts",
    "strategy",
    "max_states",
    "max_seconds",
];

/// Parses `key = value` lines; `#` starts a comment, blank lines are skipped.
pub fn parse_flat(text: &str) -> Result<BTreeMap<String, String>, String> {
    let mut out = BTreeMap::new();
    for (n, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| format!("line {}: expected `key = value`", n + 1))?;
        let k = k.trim().replace('-', "_");
        if !KEYS.contains(&k.as_str()) {
            return Err(format!("line {}: unknown key `{k}`", n + 1));
        }
        if out.insert(k.clone(), v.trim().to_string()).is_some() {
            return Err(format!("line {}: duplicate key `{k}`", n + 1));
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub datasets: Vec<PathBuf>,
    pub domains: Option<Vec<DomainTag>>,
    pub levels: Option<Vec<NaturalnessLevel>>,
    pub pipelines: Vec<Pipeline>,
    pub model_id: String,
    pub temperature: Option<f64>,
    pub max_output_tokens: Option<u32>,
    pub limits: SearchLimits,
    pub cache: Option<PathBuf>,
    pub out: PathBuf,
    pub parallelism: usize,
    pub replay: bool,
    pub record: bool,
    pub prompts: Option<PathBuf>,
}

pub fn list<T: FromStr<Err = String>>(s: &str) -> Result<Vec<T>, String> {
    s.split(',').map(str::trim).filter(|x| !x.is_empty()).map(T::from_str).collect()
}

fn num<T: FromStr>(key: &str, s: &str) -> Result<T, String> {
    s.parse().map_err(|_| format!("`{key}`: cannot parse `{s}`"))
}

fn flag(key: &str, s: &str) -> Result<bool, String> {
    match s.to_ascii_lowercase().as_str() {
        "true" | "yes" | "1" => Ok(true),
        "false" | "no" | "0" => Ok(false),
        _ => Err(format!("`{key}`: expected true or false, got `{s}`")),
    }
}

impl ExperimentConfig {
    /// Flags override file values key by key.
    pub fn resolve(args: &RunArgs, file: &BTreeMap<String, String>) -> Result<Self, String> {
        let get = |k: &str| file.get(k).map(String::as_str);
        let datasets = if !args.dataset.is_empty() {
            args.dataset.clone()
        } else {
            get("dataset").map(|s| s.split(',').map(|p| PathBuf::from(p.trim())).collect()).unwrap_or_default()
        };
        if datasets.is_empty() {
            return Err("no dataset given (--dataset or `dataset` in the config)".into());
        }
        for d in &datasets {
            if !d.is_dir() {
                return Err(format!("dataset {} does not exist", d.display()));
            }
        }
        let pick = |flag: &Option<String>, key: &str| flag.clone().or_else(|| get(key).map(str::to_string));

        let domains = pick(&args.domains, "domains").map(|s| list(&s)).transpose()?;
        let levels = pick(&args.levels, "levels").map(|s| list(&s)).transpose()?;
        let pipelines = match pick(&args.pipelines, "pipelines") {
            Some(s) => list(&s)?,
            None => Pipeline::ALL.to_vec(),
        };
        let model_id = pick(&args.model, "model").ok_or("no model given (--model or `model` in the config)")?;
        let temperature = match args.temperature {
            Some(t) => Some(t),
            None => get("temperature").map(|s| num("temperature", s)).transpose()?,
        };
        let max_output_tokens = match args.max_output_tokens {
            Some(t) => Some(t),
            None => get("max_output_tokens").map(|s| num("max_output_tokens", s)).transpose()?,
        };
        let mut limits = SearchLimits::default();
        if let Some(s) = pick(&args.strategy, "strategy") {
            limits.strategy = Strategy::from_str(&s)?;
        }
        if let Some(n) = args.max_states.or(get("max_states").map(|s| num("max_states", s)).transpose()?) {
            limits.max_expanded_states = n;
        }
        if let Some(t) = args.max_seconds.or(get("max_seconds").map(|s| num("max_seconds", s)).transpose()?) {
            limits.max_wall_time_secs = t;
        }
        let parallelism = match args.parallelism {
            Some(p) => p,
            None => get("parallelism").map(|s| num("parallelism", s)).transpose()?.unwrap_or(4),
        };
        let replay = args.replay || get("replay").map(|s| flag("replay", s)).transpose()?.unwrap_or(false);
        let record = args.record || get("record").map(|s| flag("record", s)).transpose()?.unwrap_or(false);
        if replay && record {
            return Err("--replay and --record are exclusive".into());
        }
        let cache = args.cache.clone().or_else(|| get("cache").map(PathBuf::from));
        if replay {
            match &cache {
                None => return Err("replay requires a cache directory (--cache)".into()),
                Some(c) if !c.is_dir() => return Err(format!("cache {} does not exist", c.display())),
                _ => {}
            }
        }
        let prompts = args.prompts.clone().or_else(|| get("prompts").map(PathBuf::from));
        if let Some(p) = &prompts {
            if !p.is_dir() {
                return Err(format!("prompt directory {} does not exist", p.display()));
            }
        }
        let out = args
            .out
            .clone()
            .or_else(|| get("out").map(PathBuf::from))
            .ok_or("no output directory given (--out or `out` in the config)")?;
        Ok(ExperimentConfig {
            datasets,
            domains,
            levels,
            pipelines,
            model_id,
            temperature,
            max_output_tokens,
            limits,
            cache,
            out,
            parallelism: parallelism.max(1),
            replay,
            record,
            prompts,
        })
    }

    pub fn records_path(&self) -> PathBuf {
        self.out.join("records.jsonl")
    }
}

pub fn read_config(path: &Path) -> Result<BTreeMap<String, String>, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    parse_flat(&text).map_err(|e| format!("{}: {e}", path.display()))
}
