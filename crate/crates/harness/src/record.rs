use std::fmt;
use std::io::{BufRead, Write};
use std::path::Path;
use std::str::FromStr;

use pddlbench_core::validator::{FailureReason, Verdict};
use pddlbench_forge::{Complexity, DomainTag, NaturalnessLevel};
use pddlbench_gateway::Usage;
use serde::{Deserialize, Serialize};

use crate::extract::ExtractionFailure;
use crate::HarnessError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Pipeline {
    /// The model writes PDDL; a planner solves it.
    Formalizer,
    /// The model writes the plan.
    Planner,
}

impl Pipeline {
    pub const ALL: [Pipeline; 2] = [Pipeline::Formalizer, Pipeline::Planner];

    pub fn as_str(self) -> &'static str {
        match self {
            Pipeline::Formalizer => "formalizer",
            Pipeline::Planner => "planner",
        }
    }
}

impl fmt::Display for Pipeline {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Pipeline {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "formalizer" | "llm-as-formalizer" => Ok(Pipeline::Formalizer),
            "planner" | "llm-as-planner" => Ok(Pipeline::Planner),
            other => Err(format!("unknown pipeline `{other}`")),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Extracted {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub df_text: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pf_text: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub plan_text: Option<String>,
}

/// Planner verdict on the predicted pair (formalizer records only).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SolvabilityVerdict {
    Solvable,
    Unsolvable,
    ParseFailure,
    ResourceExceeded,
    ExtractionFailure,
}

impl SolvabilityVerdict {
    pub fn is_solvable(self) -> bool {
        self == SolvabilityVerdict::Solvable
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CorrectnessVerdict {
    Correct,
    Incorrect,
    /// The model call itself failed; see the `endpoint` diagnosis.
    Failed,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ErrorClass {
    None,
    Syntax,
    DfSemantic,
    PfSemantic,
    Unclassified,
}

/// Why a record is not correct.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Diagnosis {
    Extraction { failure: ExtractionFailure },
    PddlParse { file: String, message: String },
    NotSolvable,
    PlanParse { message: String },
    Validation { verdict: Verdict, failure_step: Option<usize>, failure_reason: Option<FailureReason> },
    Endpoint { message: String },
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Timings {
    pub llm_ms: u64,
    pub solve_ms: u64,
    pub validate_ms: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub instance_id: String,
    pub domain: DomainTag,
    pub level: NaturalnessLevel,
    pub model_id: String,
    pub pipeline: Pipeline,
    pub complexity: Complexity,
    pub raw_output: String,
    pub extracted: Extracted,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub solvability_verdict: Option<SolvabilityVerdict>,
    /// The plan the planner found for the predicted pair.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub found_plan: Option<String>,
    pub correctness_verdict: CorrectnessVerdict,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub diagnosis: Option<Diagnosis>,
    pub error_class: ErrorClass,
    /// Left out when replaying, so replays are byte-identical.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timings: Option<Timings>,
    pub usage: Usage,
    pub cached: bool,
}

impl RunRecord {
    pub fn is_correct(&self) -> bool {
        self.correctness_verdict == CorrectnessVerdict::Correct
    }

    pub fn is_solvable(&self) -> bool {
        self.solvability_verdict.is_some_and(SolvabilityVerdict::is_solvable)
    }

    pub fn is_failed(&self) -> bool {
        self.correctness_verdict == CorrectnessVerdict::Failed
    }
}

pub fn write_jsonl(path: &Path, records: &[RunRecord]) -> Result<(), HarnessError> {
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
    std::fs::create_dir_all(dir).map_err(|e| HarnessError::io(dir, e))?;
    let tmp = path.with_extension("jsonl.tmp");
    {
        let file = std::fs::File::create(&tmp).map_err(|e| HarnessError::io(&tmp, e))?;
        let mut w = std::io::BufWriter::new(file);
        for r in records {
            let line = serde_json::to_string(r).expect("records serialize");
            writeln!(w, "{line}").map_err(|e| HarnessError::io(&tmp, e))?;
        }
        w.flush().map_err(|e| HarnessError::io(&tmp, e))?;
    }
    std::fs::rename(&tmp, path).map_err(|e| HarnessError::io(path, e))
}

pub fn read_jsonl(path: &Path) -> Result<Vec<RunRecord>, HarnessError> {
    let file = std::fs::File::open(path).map_err(|e| HarnessError::io(path, e))?;
    let mut out = Vec::new();
    for (i, line) in std::io::BufReader::new(file).lines().enumerate() {
        let line = line.map_err(|e| HarnessError::io(path, e))?;
        if line.trim().is_empty() {
            continue;
        }
        let r = serde_json::from_str(&line).map_err(|e| HarnessError::Record {
            path: path.to_path_buf(),
            line: i + 1,
            message: e.to_string(),
        })?;
        out.push(r);
    }
    Ok(out)
}
