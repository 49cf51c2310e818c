//! `pddlbench`: dataset generation, pipeline runs, scoring and the planner and
//! validator as standalone tools.
//!
//! Exit codes: 0 success, 1 negative verdict, 2 usage error, 3 infrastructure
//! error, 4 ill-formed input (PDDL or plan text that does not parse, or a plan
//! step naming an unknown action, object or arity).

mod config;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand};
use pddlbench_core::gold;
use pddlbench_core::planner::{solvability_check, SearchLimits, Solvability, Strategy};
use pddlbench_core::validator::{validate, FailureReason, Verdict};
use pddlbench_core::{parse_domain, parse_plan, parse_problem, print_plan};
use pddlbench_forge::dataset::MysteryMap;
use pddlbench_forge::{generate, load_dataset, write_dataset, DomainTag, GenSpec, NaturalSettings, NaturalnessLevel};
use pddlbench_gateway::{Cache, Gateway, HttpBackend, LlmClient, Mode};
use pddlbench_harness::{
    read_jsonl, run_batch, summarize_all, write_jsonl, Bucketing, PromptCatalog, RunConfig,
};

use crate::config::{list, read_config, ExperimentConfig};

const NEGATIVE: u8 = 1;
const USAGE: u8 = 2;
const INFRA: u8 = 3;
const ILL_FORMED: u8 = 4;

#[derive(Debug, Parser)]
#[command(name = "pddlbench", version, about = "Benchmark harness for model-written PDDL and model-written plans")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Generate a dataset of task instances.
    Gen(GenArgs),
    /// Run the pipelines over a dataset and write run records.
    Run(RunArgs),
    /// Summarize run records as a table (and optionally CSV).
    Score(ScoreArgs),
    /// Solve a domain/problem pair and print the plan.
    Solve(SolveArgs),
    /// Validate a plan against a domain/problem pair.
    Validate(ValidateArgs),
}

#[derive(Debug, Args)]
struct GenArgs {
    /// blocksworld, mystery, logistics or barman
    domain: DomainTag,
    #[arg(long, default_value_t = 100)]
    count: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Comma-separated: heavy, moderate, natural
    #[arg(long, default_value = "heavy")]
    levels: String,
    /// Mystery vocabulary: fixed or random
    #[arg(long, default_value = "fixed")]
    map: String,
    #[arg(long)]
    out: PathBuf,
    #[arg(long)]
    min_blocks: Option<usize>,
    #[arg(long)]
    max_blocks: Option<usize>,
    #[arg(long)]
    max_shots: Option<usize>,
    #[arg(long)]
    max_ingredients: Option<usize>,
    /// Skip the planner check (the constructive witness plan is still validated).
    #[arg(long)]
    no_planner_check: bool,
    /// Model for natural-level drafts.
    #[arg(long)]
    model: Option<String>,
    #[arg(long)]
    temperature: Option<f64>,
    #[arg(long)]
    cache: Option<PathBuf>,
    #[arg(long)]
    replay: bool,
}

#[derive(Debug, Args)]
pub struct RunArgs {
    /// Flat `key = value` file; flags override it.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Dataset root; repeatable.
    #[arg(long)]
    dataset: Vec<PathBuf>,
    #[arg(long)]
    domains: Option<String>,
    #[arg(long)]
    levels: Option<String>,
    /// Comma-separated: formalizer, planner
    #[arg(long)]
    pipelines: Option<String>,
    #[arg(long)]
    model: Option<String>,
    #[arg(long)]
    temperature: Option<f64>,
    #[arg(long)]
    max_output_tokens: Option<u32>,
    #[arg(long)]
    cache: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    parallelism: Option<usize>,
    /// Serve every call from the cache; misses become failed records.
    #[arg(long)]
    replay: bool,
    /// Always call the endpoint and overwrite cache entries.
    #[arg(long)]
    record: bool,
    /// Directory of prompt templates overriding the built-ins.
    #[arg(long)]
    prompts: Option<PathBuf>,
    #[arg(long)]
    strategy: Option<String>,
    #[arg(long)]
    max_states: Option<u64>,
    #[arg(long)]
    max_seconds: Option<f64>,
}

#[derive(Debug, Args)]
struct ScoreArgs {
    records: PathBuf,
    /// Also write the summary as CSV.
    #[arg(long)]
    csv: Option<PathBuf>,
    /// Bucket rows by a complexity key, e.g. `num_blocks:5,10`.
    #[arg(long)]
    bucket: Option<String>,
}

#[derive(Debug, Args)]
struct Limits {
    #[arg(long, default_value = "auto")]
    strategy: Strategy,
    #[arg(long)]
    max_states: Option<u64>,
    #[arg(long)]
    max_seconds: Option<f64>,
}

impl Limits {
    fn get(&self) -> SearchLimits {
        let d = SearchLimits::default();
        SearchLimits {
            max_expanded_states: self.max_states.unwrap_or(d.max_expanded_states),
            max_wall_time_secs: self.max_seconds.unwrap_or(d.max_wall_time_secs),
            strategy: self.strategy,
        }
    }
}

#[derive(Debug, Args)]
struct SolveArgs {
    /// Domain file, or `gold`
    df: String,
    /// Problem file, or a gold problem name when DF is `gold`
    pf: String,
    #[command(flatten)]
    limits: Limits,
}

#[derive(Debug, Args)]
struct ValidateArgs {
    /// Domain file, or `gold`
    df: String,
    /// Problem file, or a gold problem name when DF is `gold`
    pf: String,
    plan: PathBuf,
    /// Print the full report as JSON.
    #[arg(long)]
    json: bool,
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Infra(anyhow::Error),
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Infra(e)
    }
}

fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage(msg.into())
}

type Outcome = Result<u8, Failure>;

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { USAGE } else { 0 });
        }
    };
    let outcome = match cli.command {
        Command::Gen(a) => cmd_gen(a),
        Command::Run(a) => cmd_run(a),
        Command::Score(a) => cmd_score(a),
        Command::Solve(a) => cmd_solve(a),
        Command::Validate(a) => cmd_validate(a),
    };
    match outcome {
        Ok(code) => ExitCode::from(code),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(USAGE)
        }
        Err(Failure::Infra(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(INFRA)
        }
    }
}

fn open_gateway(mode: Mode, cache: Option<&Path>, parallelism: usize) -> Result<Gateway, Failure> {
    let cache = cache
        .map(Cache::open)
        .transpose()
        .context("opening the response cache")?;
    if mode == Mode::Replay {
        return Ok(Gateway::replay(cache.ok_or_else(|| usage("replay requires --cache"))?));
    }
    let backend = HttpBackend::from_env().context("configuring the endpoint")?;
    Ok(Gateway::new(mode, cache, Some(Box::new(backend)), parallelism).context("configuring the gateway")?)
}

fn cmd_gen(a: GenArgs) -> Outcome {
    let mut spec = GenSpec::new(a.domain, a.count, a.seed);
    spec.levels = list::<NaturalnessLevel>(&a.levels).map_err(usage)?;
    if spec.levels.is_empty() {
        return Err(usage("--levels is empty"));
    }
    spec.mystery_map = match a.map.as_str() {
        "fixed" => MysteryMap::Fixed,
        "random" => MysteryMap::Random,
        other => return Err(usage(format!("unknown --map `{other}` (fixed, random)"))),
    };
    let (lo, hi) = (*spec.blocks.start(), *spec.blocks.end());
    spec.blocks = a.min_blocks.unwrap_or(lo)..=a.max_blocks.unwrap_or(hi);
    spec.barman_max = (a.max_shots.unwrap_or(spec.barman_max.0), a.max_ingredients.unwrap_or(spec.barman_max.1));
    spec.planner_check = !a.no_planner_check;

    let gateway = if spec.levels.contains(&NaturalnessLevel::Natural) {
        let model = a.model.clone().ok_or_else(|| usage("the natural level needs --model"))?;
        let mut settings = NaturalSettings::new(model);
        if let Some(t) = a.temperature {
            settings.temperature = t;
        }
        spec.natural = Some(settings);
        let mode = if a.replay { Mode::Replay } else { Mode::Live };
        Some(open_gateway(mode, a.cache.as_deref(), 1)?)
    } else {
        None
    };
    let llm = gateway.as_ref().map(|g| g as &dyn LlmClient);
    let instances = generate(&spec, llm).map_err(|e| usage(e.to_string()))?;
    let manifest = write_dataset(&a.out, &spec, &instances).context("writing the dataset")?;
    eprintln!("wrote {} instances to {}", manifest.instances.len(), a.out.display());
    Ok(0)
}

fn cmd_run(a: RunArgs) -> Outcome {
    let file = match &a.config {
        Some(p) => read_config(p).map_err(usage)?,
        None => Default::default(),
    };
    let cfg = ExperimentConfig::resolve(&a, &file).map_err(usage)?;
    let mut instances = Vec::new();
    for d in &cfg.datasets {
        instances.extend(load_dataset(d).with_context(|| format!("loading {}", d.display()))?);
    }
    instances.retain(|i| {
        cfg.domains.as_ref().is_none_or(|ds| ds.contains(&i.domain_tag))
            && cfg.levels.as_ref().is_none_or(|ls| ls.contains(&i.level))
    });
    let catalog = match &cfg.prompts {
        Some(dir) => PromptCatalog::load_dir(dir).map_err(|e| usage(e.to_string()))?,
        None => PromptCatalog::default(),
    };
    let mode = match (cfg.replay, cfg.record) {
        (true, _) => Mode::Replay,
        (_, true) => Mode::Record,
        _ => Mode::Live,
    };
    let gateway = open_gateway(mode, cfg.cache.as_deref(), cfg.parallelism)?;

    let mut run = RunConfig::new(cfg.model_id.clone());
    run.temperature = cfg.temperature;
    run.max_output_tokens = cfg.max_output_tokens;
    run.limits = cfg.limits;
    run.parallelism = cfg.parallelism;
    // wall-clock timings would make replays differ run to run
    run.record_timings = mode != Mode::Replay;
    let records = run_batch(&instances, &cfg.pipelines, &gateway, &catalog, &run).context("running the batch")?;

    std::fs::create_dir_all(&cfg.out).with_context(|| format!("creating {}", cfg.out.display()))?;
    write_jsonl(&cfg.records_path(), &records).context("writing records")?;
    let failed = records.iter().filter(|r| r.is_failed()).count();
    eprintln!("wrote {} records to {}", records.len(), cfg.records_path().display());
    if failed > 0 {
        eprintln!("{failed} model calls failed; see the endpoint diagnoses in the records");
        return Ok(INFRA);
    }
    Ok(0)
}

fn parse_bucket(s: &str) -> Result<Bucketing, String> {
    let (key, edges) = s.split_once(':').ok_or("expected `key:e1,e2,...`")?;
    let edges = edges
        .split(',')
        .map(|e| e.trim().parse::<u64>().map_err(|_| format!("bad bucket edge `{e}`")))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Bucketing {
        key: key.trim().to_string(),
        edges,
    })
}

fn cmd_score(a: ScoreArgs) -> Outcome {
    if !a.records.is_file() {
        return Err(usage(format!("{} does not exist", a.records.display())));
    }
    let bucketing = a.bucket.as_deref().map(parse_bucket).transpose().map_err(usage)?;
    let records = read_jsonl(&a.records).context("reading records")?;
    let summary = summarize_all(&records, bucketing.as_ref());
    print!("{}", summary.to_table());
    if let Some(path) = &a.csv {
        std::fs::write(path, summary.to_csv()).with_context(|| format!("writing {}", path.display()))?;
    }
    Ok(0)
}

/// Domain and problem texts from paths, or from the shipped gold pairs.
fn load_pair(df: &str, pf: &str) -> Result<(String, String), Failure> {
    if df == "gold" {
        let tag = match pf {
            "p99" | "blocksworld" => "blocksworld",
            "p01" | "mystery" | "mystery_blocksworld" => "mystery_blocksworld",
            "logistics" | "logistics-4-0" => "logistics",
            "barman" | "barman-1-2-1" => "barman",
            other => {
                return Err(usage(format!(
                    "unknown gold problem `{other}` (p99, mystery, logistics-4-0, barman-1-2-1)"
                )))
            }
        };
        let pair = gold::pair(tag).expect("gold tags are shipped");
        return Ok((pair.domain.to_string(), pair.problem.to_string()));
    }
    Ok((read_input(Path::new(df))?, read_input(Path::new(pf))?))
}

fn read_input(path: &Path) -> Result<String, Failure> {
    if !path.is_file() {
        return Err(usage(format!("{} does not exist", path.display())));
    }
    Ok(std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?)
}

fn cmd_solve(a: SolveArgs) -> Outcome {
    let (df, pf) = load_pair(&a.df, &a.pf)?;
    let report = solvability_check(&df, &pf, &a.limits.get());
    let s = &report.stats;
    let stats = s
        .as_ref()
        .map(|s| format!(" ({} expanded, {:?}, {:.3}s)", s.expanded, s.strategy, s.elapsed_secs))
        .unwrap_or_default();
    match report.verdict {
        Solvability::Solvable { plan } => {
            print!("{}", print_plan(&plan));
            eprintln!("solved: {} steps{stats}", plan.len());
            Ok(0)
        }
        Solvability::Unsolvable => {
            eprintln!("unsolvable{stats}");
            Ok(NEGATIVE)
        }
        Solvability::ResourceExceeded => {
            eprintln!("search limits exceeded{stats}");
            Ok(NEGATIVE)
        }
        Solvability::ParseFailure { error } => {
            eprintln!("parse failure: {error}");
            Ok(ILL_FORMED)
        }
    }
}

fn describe(reason: &FailureReason) -> String {
    match reason {
        FailureReason::UnknownAction { action } => format!("unknown action `{action}`"),
        FailureReason::ArityMismatch { action, expected, found } => {
            format!("`{action}` takes {expected} arguments, got {found}")
        }
        FailureReason::UnknownObject { object } => format!("unknown object `{object}`"),
        FailureReason::TypeMismatch { object, expected, found } => {
            format!("`{object}` has type {found}, expected {expected}")
        }
        FailureReason::PreconditionUnsatisfied { literals } => {
            let l: Vec<String> = literals.iter().map(ToString::to_string).collect();
            format!("precondition unsatisfied: {}", l.join(" "))
        }
        FailureReason::GoalUnsatisfied { literals } => {
            let l: Vec<String> = literals.iter().map(ToString::to_string).collect();
            format!("goal unsatisfied: {}", l.join(" "))
        }
    }
}

fn cmd_validate(a: ValidateArgs) -> Outcome {
    let (df, pf) = load_pair(&a.df, &a.pf)?;
    let plan_text = read_input(&a.plan)?;
    let parsed = parse_domain(&df).and_then(|d| parse_problem(&pf, Some(&d)).map(|p| (d, p)));
    let (d, p) = match parsed {
        Ok(x) => x,
        Err(e) => {
            eprintln!("parse failure: {e}");
            return Ok(ILL_FORMED);
        }
    };
    let plan = match parse_plan(&plan_text) {
        Ok(plan) => plan,
        Err(e) => {
            eprintln!("plan parse failure: {e}");
            return Ok(ILL_FORMED);
        }
    };
    let report = validate(&d, &p, &plan);
    if a.json {
        println!("{}", serde_json::to_string_pretty(&report).context("serializing the report")?);
    } else {
        let verdict = match report.verdict {
            Verdict::Valid => "valid",
            Verdict::Invalid => "invalid",
            Verdict::IllFormed => "ill-formed",
        };
        match (&report.failure_step, &report.failure_reason) {
            (Some(i), Some(r)) => println!("{verdict}: step {} {}: {}", i + 1, plan.steps[*i], describe(r)),
            (None, Some(r)) => println!("{verdict}: {}", describe(r)),
            _ => println!("{verdict}"),
        }
    }
    Ok(match report.verdict {
        Verdict::Valid => 0,
        Verdict::Invalid => NEGATIVE,
        Verdict::IllFormed => ILL_FORMED,
    })
}
