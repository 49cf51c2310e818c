//! The two pipelines: model-as-formalizer and model-as-planner.

use std::time::Instant;

use pddlbench_core::planner::{solvability_check, SearchLimits, Solvability};
use pddlbench_core::validator::{correctness_of, Correctness};
use pddlbench_core::{parse_domain, parse_plan, print_plan, Domain, Plan};
use pddlbench_forge::TaskInstance;
use pddlbench_gateway::{LlmClient, LlmRequest, LlmResponse, Message, Usage};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::extract::{extract_pddl, extract_plan};
use crate::record::{
    CorrectnessVerdict, Diagnosis, ErrorClass, Extracted, Pipeline, RunRecord, SolvabilityVerdict, Timings,
};
use crate::{HarnessError, PromptCatalog};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub model_id: String,
    /// `None` leaves sampling to the endpoint's defaults.
    pub temperature: Option<f64>,
    pub max_output_tokens: Option<u32>,
    pub limits: SearchLimits,
    pub parallelism: usize,
    pub record_timings: bool,
}

impl RunConfig {
    pub fn new(model_id: impl Into<String>) -> Self {
        RunConfig {
            model_id: model_id.into(),
            temperature: None,
            max_output_tokens: None,
            limits: SearchLimits::default(),
            parallelism: 4,
            record_timings: true,
        }
    }

    fn request(&self, prompt: String) -> LlmRequest {
        let mut req = LlmRequest::new(self.model_id.clone(), vec![Message::user(prompt)]);
        req.temperature = self.temperature;
        req.max_output_tokens = self.max_output_tokens;
        req
    }
}

fn norm(name: &str) -> String {
    name.chars().filter(|c| !matches!(c, '-' | '_')).collect::<String>().to_ascii_lowercase()
}

/// Renames steps whose action is unknown to `gold` but matches exactly one of
/// its actions once case, `-` and `_` are ignored (`PICK-UP` -> `pickup`).
pub fn align_plan(plan: &Plan, gold: &Domain) -> Plan {
    let mut out = plan.clone();
    for step in &mut out.steps {
        if gold.action(&step.action).is_some() {
            continue;
        }
        let want = norm(step.action.as_str());
        let mut hits = gold.actions.iter().filter(|a| norm(a.name.as_str()) == want);
        if let (Some(a), None) = (hits.next(), hits.next()) {
            step.action = a.name.clone();
        }
    }
    out
}

fn ms(t: Instant) -> u64 {
    t.elapsed().as_millis() as u64
}

struct Draft {
    record: RunRecord,
    timings: Timings,
}

impl Draft {
    fn new(inst: &TaskInstance, pipeline: Pipeline, config: &RunConfig) -> Self {
        Draft {
            record: RunRecord {
                instance_id: inst.id.clone(),
                domain: inst.domain_tag,
                level: inst.level,
                model_id: config.model_id.clone(),
                pipeline,
                complexity: inst.complexity.clone(),
                raw_output: String::new(),
                extracted: Extracted::default(),
                solvability_verdict: None,
                found_plan: None,
                correctness_verdict: CorrectnessVerdict::Incorrect,
                diagnosis: None,
                error_class: ErrorClass::Unclassified,
                timings: None,
                usage: Usage::default(),
                cached: false,
            },
            timings: Timings::default(),
        }
    }

    /// Sends the prompt; on failure the record is finished as `Failed`.
    fn complete(&mut self, llm: &dyn LlmClient, req: &LlmRequest) -> Option<LlmResponse> {
        let t = Instant::now();
        let res = llm.complete(req, 0);
        self.timings.llm_ms = ms(t);
        match res {
            Ok(resp) => {
                self.record.raw_output = resp.text.clone();
                self.record.usage = resp.usage;
                self.record.cached = resp.cached;
                Some(resp)
            }
            Err(e) => {
                log::warn!("{} {}: {e}", self.record.instance_id, self.record.pipeline);
                self.record.correctness_verdict = CorrectnessVerdict::Failed;
                self.record.error_class = ErrorClass::Unclassified;
                self.record.diagnosis = Some(Diagnosis::Endpoint { message: e.to_string() });
                None
            }
        }
    }

    fn incorrect(&mut self, class: ErrorClass, diagnosis: Diagnosis) {
        self.record.correctness_verdict = CorrectnessVerdict::Incorrect;
        self.record.error_class = class;
        self.record.diagnosis = Some(diagnosis);
    }

    /// Validates `plan` against the gold pair.
    fn score(&mut self, inst: &TaskInstance, plan: &Plan) {
        let t = Instant::now();
        let plan = align_plan(plan, &inst.gold_df);
        match correctness_of(&inst.gold_df, &inst.gold_pf, &plan) {
            Correctness::Correct => {
                self.record.correctness_verdict = CorrectnessVerdict::Correct;
                self.record.error_class = ErrorClass::None;
                self.record.diagnosis = None;
            }
            Correctness::Incorrect { report } => self.incorrect(
                ErrorClass::Unclassified,
                Diagnosis::Validation {
                    verdict: report.verdict,
                    failure_step: report.failure_step,
                    failure_reason: report.failure_reason,
                },
            ),
            Correctness::PlanParseFailure { error } => {
                self.incorrect(ErrorClass::Syntax, Diagnosis::PlanParse { message: error.to_string() })
            }
        }
        self.timings.validate_ms = ms(t);
    }

    fn finish(mut self, config: &RunConfig) -> RunRecord {
        if config.record_timings {
            self.record.timings = Some(self.timings);
        }
        self.record
    }
}

/// Model writes DF and PF; the planner solves the predicted pair and the plan
/// it finds is validated against the gold pair.
pub fn run_formalizer(
    inst: &TaskInstance,
    llm: &dyn LlmClient,
    catalog: &PromptCatalog,
    config: &RunConfig,
) -> Result<RunRecord, HarnessError> {
    let prompt = catalog.render(Pipeline::Formalizer, inst.domain_tag, &inst.gold_df, &inst.dd_text, &inst.pd_text)?;
    let mut d = Draft::new(inst, Pipeline::Formalizer, config);
    let Some(resp) = d.complete(llm, &config.request(prompt)) else {
        return Ok(d.finish(config));
    };
    let (df, pf) = match extract_pddl(&resp.text) {
        Ok(pair) => pair,
        Err(failure) => {
            d.record.solvability_verdict = Some(SolvabilityVerdict::ExtractionFailure);
            d.incorrect(ErrorClass::Syntax, Diagnosis::Extraction { failure });
            return Ok(d.finish(config));
        }
    };
    d.record.extracted.df_text = Some(df.clone());
    d.record.extracted.pf_text = Some(pf.clone());

    let t = Instant::now();
    let report = solvability_check(&df, &pf, &config.limits);
    d.timings.solve_ms = ms(t);
    match report.verdict {
        Solvability::Solvable { plan } => {
            d.record.solvability_verdict = Some(SolvabilityVerdict::Solvable);
            d.record.found_plan = Some(print_plan(&plan));
            d.score(inst, &plan);
        }
        Solvability::ParseFailure { error } => {
            d.record.solvability_verdict = Some(SolvabilityVerdict::ParseFailure);
            let file = if parse_domain(&df).is_err() { "domain" } else { "problem" };
            d.incorrect(
                ErrorClass::Syntax,
                Diagnosis::PddlParse {
                    file: file.to_string(),
                    message: error.to_string(),
                },
            );
        }
        Solvability::Unsolvable => {
            d.record.solvability_verdict = Some(SolvabilityVerdict::Unsolvable);
            d.incorrect(ErrorClass::Unclassified, Diagnosis::NotSolvable);
        }
        Solvability::ResourceExceeded => {
            d.record.solvability_verdict = Some(SolvabilityVerdict::ResourceExceeded);
            d.incorrect(ErrorClass::Unclassified, Diagnosis::NotSolvable);
        }
    }
    Ok(d.finish(config))
}

/// Model writes the plan; it is validated against the gold pair.
pub fn run_planner(
    inst: &TaskInstance,
    llm: &dyn LlmClient,
    catalog: &PromptCatalog,
    config: &RunConfig,
) -> Result<RunRecord, HarnessError> {
    let prompt = catalog.render(Pipeline::Planner, inst.domain_tag, &inst.gold_df, &inst.dd_text, &inst.pd_text)?;
    let mut d = Draft::new(inst, Pipeline::Planner, config);
    let Some(resp) = d.complete(llm, &config.request(prompt)) else {
        return Ok(d.finish(config));
    };
    let text = match extract_plan(&resp.text) {
        Ok(t) => t,
        Err(failure) => {
            d.incorrect(ErrorClass::Syntax, Diagnosis::Extraction { failure });
            return Ok(d.finish(config));
        }
    };
    d.record.extracted.plan_text = Some(text.clone());
    match parse_plan(&text) {
        Ok(plan) => d.score(inst, &plan),
        Err(e) => d.incorrect(ErrorClass::Syntax, Diagnosis::PlanParse { message: e.to_string() }),
    }
    Ok(d.finish(config))
}

pub fn run_one(
    inst: &TaskInstance,
    pipeline: Pipeline,
    llm: &dyn LlmClient,
    catalog: &PromptCatalog,
    config: &RunConfig,
) -> Result<RunRecord, HarnessError> {
    match pipeline {
        Pipeline::Formalizer => run_formalizer(inst, llm, catalog, config),
        Pipeline::Planner => run_planner(inst, llm, catalog, config),
    }
}

/// Runs every (instance, pipeline) pair with at most `config.parallelism`
/// workers. Records come back in input order, instance-major.
pub fn run_batch(
    instances: &[TaskInstance],
    pipelines: &[Pipeline],
    llm: &dyn LlmClient,
    catalog: &PromptCatalog,
    config: &RunConfig,
) -> Result<Vec<RunRecord>, HarnessError> {
    let jobs: Vec<(&TaskInstance, Pipeline)> =
        instances.iter().flat_map(|i| pipelines.iter().map(move |&p| (i, p))).collect();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.parallelism.max(1))
        .build()
        .map_err(|e| HarnessError::Config(e.to_string()))?;
    pool.install(|| {
        jobs.par_iter()
            .map(|(inst, p)| run_one(inst, *p, llm, catalog, config))
            .collect()
    })
}
