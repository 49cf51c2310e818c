use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::lexer::Pos;

/// Everything that can go wrong turning PDDL text into a model.
#[derive(Debug, Clone, PartialEq, Eq, Error, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PddlError {
    #[error("syntax error at {pos}: {message}")]
    Syntax { pos: Pos, message: String },

    #[error("unsupported feature at {pos}: {feature}")]
    Unsupported { pos: Pos, feature: String },

    #[error("semantic error{}: {message}", at_suffix(.pos))]
    Semantic { pos: Option<Pos>, message: String },

    #[error("undeclared object `{name}`{}", at_suffix(.pos))]
    UndeclaredObject { pos: Option<Pos>, name: String },
}

fn at_suffix(pos: &Option<Pos>) -> String {
    match pos {
        Some(p) => format!(" at {p}"),
        None => String::new(),
    }
}

impl PddlError {
    pub(crate) fn syntax(pos: Pos, message: impl Into<String>) -> Self {
        PddlError::Syntax {
            pos,
            message: message.into(),
        }
    }

    pub(crate) fn unsupported(pos: Pos, feature: impl Into<String>) -> Self {
        PddlError::Unsupported {
            pos,
            feature: feature.into(),
        }
    }

    pub(crate) fn semantic(pos: impl Into<Option<Pos>>, message: impl Into<String>) -> Self {
        PddlError::Semantic {
            pos: pos.into(),
            message: message.into(),
        }
    }

    /// Short machine-readable category name.
    pub fn category(&self) -> &'static str {
        match self {
            PddlError::Syntax { .. } => "syntax",
            PddlError::Unsupported { .. } => "unsupported",
            PddlError::Semantic { .. } => "semantic",
            PddlError::UndeclaredObject { .. } => "undeclared_object",
        }
    }

    pub fn pos(&self) -> Option<Pos> {
        match self {
            PddlError::Syntax { pos, .. } | PddlError::Unsupported { pos, .. } => Some(*pos),
            PddlError::Semantic { pos, .. } | PddlError::UndeclaredObject { pos, .. } => *pos,
        }
    }
}

/// Non-fatal observation made while parsing.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParseWarning {
    pub pos: Option<Pos>,
    pub message: String,
}
