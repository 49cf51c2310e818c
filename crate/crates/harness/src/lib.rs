//! Evaluation pipelines over benchmark instances: prompting, extraction,
//! solving, validation against gold, aggregate metrics and error triage.

use std::path::PathBuf;

use thiserror::Error;

pub mod extract;
pub mod metrics;
pub mod prompts;
pub mod record;
pub mod run;
pub mod triage;

pub use extract::{extract_pddl, extract_plan, ExtractionFailure};
pub use metrics::{summarize, summarize_all, Bucketing, MetricsSummary, SummaryRow};
pub use prompts::PromptCatalog;
pub use record::{
    read_jsonl, write_jsonl, CorrectnessVerdict, Diagnosis, ErrorClass, Extracted, Pipeline, RunRecord,
    SolvabilityVerdict, Timings,
};
pub use run::{align_plan, run_batch, run_formalizer, run_one, run_planner, RunConfig};
pub use triage::{triage_errors, Category, Suggestion, TriageReport};

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("records mix pipelines ({0} and {1}); summarize each pipeline separately")]
    MixedPipelines(Pipeline, Pipeline),
    #[error("prompt template: {0}")]
    Template(String),
    #[error("configuration: {0}")]
    Config(String),
    #[error("{path}:{line}: {message}")]
    Record { path: PathBuf, line: usize, message: String },
    #[error("i/o error at {path}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl HarnessError {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        HarnessError::Io {
            path: path.into(),
            source,
        }
    }
}
