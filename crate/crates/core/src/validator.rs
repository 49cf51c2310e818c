//! Plan replay against a reference domain and problem.

use serde::{Deserialize, Serialize};

use crate::grounding::{apply, instantiate, unmet_goals, unsatisfied, universe, State};
use crate::pddl::{parse_domain, parse_plan, parse_problem, Domain, GroundLiteral, PddlError, Plan, Problem};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Valid,
    Invalid,
    IllFormed,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "reason", rename_all = "snake_case")]
pub enum FailureReason {
    UnknownAction { action: String },
    ArityMismatch { action: String, expected: usize, found: usize },
    UnknownObject { object: String },
    TypeMismatch { object: String, expected: String, found: String },
    PreconditionUnsatisfied { literals: Vec<GroundLiteral> },
    GoalUnsatisfied { literals: Vec<GroundLiteral> },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub verdict: Verdict,
    /// Zero-based index of the offending step; absent for goal failures.
    pub failure_step: Option<usize>,
    pub failure_reason: Option<FailureReason>,
    /// State after the last successfully applied step.
    pub final_state: Option<State>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.verdict == Verdict::Valid
    }

    fn fail(verdict: Verdict, step: Option<usize>, reason: FailureReason, state: State) -> Self {
        ValidationReport {
            verdict,
            failure_step: step,
            failure_reason: Some(reason),
            final_state: Some(state),
        }
    }
}

/// Replays `plan` from the initial state of `problem` under `domain`.
pub fn validate(domain: &Domain, problem: &Problem, plan: &Plan) -> ValidationReport {
    let objects = universe(domain, problem);
    let mut state = State::new(problem.init.iter().cloned());
    for (i, step) in plan.steps.iter().enumerate() {
        let Some(schema) = domain.action(&step.action) else {
            let reason = FailureReason::UnknownAction {
                action: step.action.to_string(),
            };
            return ValidationReport::fail(Verdict::IllFormed, Some(i), reason, state);
        };
        if schema.arity() != step.args.len() {
            let reason = FailureReason::ArityMismatch {
                action: step.action.to_string(),
                expected: schema.arity(),
                found: step.args.len(),
            };
            return ValidationReport::fail(Verdict::IllFormed, Some(i), reason, state);
        }
        for (arg, param) in step.args.iter().zip(&schema.params) {
            let Some(obj) = objects.iter().find(|o| &o.name == arg) else {
                let reason = FailureReason::UnknownObject {
                    object: arg.to_string(),
                };
                return ValidationReport::fail(Verdict::IllFormed, Some(i), reason, state);
            };
            if !domain.types.is_subtype(&obj.ty, &param.ty) {
                let reason = FailureReason::TypeMismatch {
                    object: arg.to_string(),
                    expected: param.ty.to_string(),
                    found: obj.ty.to_string(),
                };
                return ValidationReport::fail(Verdict::IllFormed, Some(i), reason, state);
            }
        }
        let action = instantiate(schema, &step.args);
        let bad = unsatisfied(&state, &action);
        if !bad.is_empty() {
            let reason = FailureReason::PreconditionUnsatisfied { literals: bad };
            return ValidationReport::fail(Verdict::Invalid, Some(i), reason, state);
        }
        state = apply(&state, &action);
    }
    let unmet = unmet_goals(&state, &problem.goal);
    if unmet.is_empty() {
        ValidationReport {
            verdict: Verdict::Valid,
            failure_step: None,
            failure_reason: None,
            final_state: Some(state),
        }
    } else {
        let reason = FailureReason::GoalUnsatisfied { literals: unmet };
        ValidationReport::fail(Verdict::Invalid, None, reason, state)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Correctness {
    Correct,
    Incorrect { report: ValidationReport },
    PlanParseFailure { error: PddlError },
}

impl Correctness {
    pub fn is_correct(&self) -> bool {
        matches!(self, Correctness::Correct)
    }

    pub fn label(&self) -> &'static str {
        match self {
            Correctness::Correct => "correct",
            Correctness::Incorrect { .. } => "incorrect",
            Correctness::PlanParseFailure { .. } => "plan_parse_failure",
        }
    }
}

/// Scores candidate plan text against reference PDDL texts. Errors only if
/// the reference texts themselves fail to parse.
pub fn correctness_check(gold_df: &str, gold_pf: &str, plan_text: &str) -> Result<Correctness, PddlError> {
    let d = parse_domain(gold_df)?;
    let p = parse_problem(gold_pf, Some(&d))?;
    Ok(correctness_check_parsed(&d, &p, plan_text))
}

pub fn correctness_check_parsed(domain: &Domain, problem: &Problem, plan_text: &str) -> Correctness {
    match parse_plan(plan_text) {
        Err(error) => Correctness::PlanParseFailure { error },
        Ok(plan) => correctness_of(domain, problem, &plan),
    }
}

pub fn correctness_of(domain: &Domain, problem: &Problem, plan: &Plan) -> Correctness {
    let report = validate(domain, problem, plan);
    if report.is_valid() {
        Correctness::Correct
    } else {
        Correctness::Incorrect { report }
    }
}
