use std::path::PathBuf;

use pddlbench_core::PddlError;
use pddlbench_gateway::GatewayError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ForgeError {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("lexicon `{domain}` has no entry for {entry}")]
    MissingLexEntry { domain: String, entry: String },
    #[error("malformed lexicon: {0}")]
    Lexicon(String),
    #[error("no moderately templated description exists for domain `{0}`")]
    UnsupportedDomain(String),
    #[error("rename map does not cover: {}", .0.join(", "))]
    IncompleteMap(Vec<String>),
    #[error("rename map is not a bijection: {0}")]
    NotBijective(String),
    #[error("generated instance failed its solvability check: {0}")]
    Unsolvable(String),
    #[error(transparent)]
    Pddl(#[from] PddlError),
    #[error(transparent)]
    Gateway(#[from] GatewayError),
    #[error("i/o error at {path}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: {message}")]
    Dataset { path: PathBuf, message: String },
}

impl ForgeError {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        ForgeError::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn missing(domain: &str, entry: impl Into<String>) -> Self {
        ForgeError::MissingLexEntry {
            domain: domain.to_string(),
            entry: entry.into(),
        }
    }
}
