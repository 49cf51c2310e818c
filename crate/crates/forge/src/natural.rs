//! Model-assisted drafts of natural descriptions. Nothing produced here is
//! accepted into a dataset until a reviewer signs off the checklist.

use pddlbench_gateway::{LlmClient, LlmRequest, Message};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::{BlocksConfig, ForgeError};

pub const DEFAULT_TEMPERATURE: f64 = 1.0;

/// What the problem description has to convey.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ProblemConfig {
    Blocks(BlocksConfig),
    /// Any other domain: a templated description to rewrite.
    Described(String),
}

impl ProblemConfig {
    /// The symbolic summary handed to the model.
    pub fn summary(&self) -> String {
        match self {
            ProblemConfig::Blocks(c) => {
                let stacks = |stacks: &[Vec<pddlbench_core::Symbol>]| {
                    stacks
                        .iter()
                        .map(|s| {
                            let names: Vec<&str> = s.iter().map(|b| b.as_str()).collect();
                            format!("[{}]", names.join(", "))
                        })
                        .collect::<Vec<_>>()
                        .join(" ")
                };
                format!(
                    "blocks: {}\ninitial stacks (bottom to top): {}\ngoal stacks (bottom to top): {}\nthe hand starts empty",
                    c.num_blocks(),
                    stacks(&c.init),
                    stacks(&c.goal)
                )
            }
            ProblemConfig::Described(text) => text.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NaturalSettings {
    pub model_id: String,
    pub temperature: f64,
    pub max_output_tokens: Option<u32>,
}

impl NaturalSettings {
    pub fn new(model_id: impl Into<String>) -> Self {
        NaturalSettings {
            model_id: model_id.into(),
            temperature: DEFAULT_TEMPERATURE,
            max_output_tokens: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChecklistItem {
    pub question: String,
    pub passed: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReviewChecklist {
    pub items: Vec<ChecklistItem>,
    pub verified: bool,
    pub reviewer: Option<String>,
}

const REVIEW_QUESTIONS: [&str; 4] = [
    "Every predicate, precondition and effect of the reference PDDL is stated or clearly implied.",
    "Nothing is stated that the reference PDDL does not contain.",
    "The wording differs from the seed rather than copying it.",
    "Each sentence has a single reading.",
];

impl Default for ReviewChecklist {
    fn default() -> Self {
        ReviewChecklist {
            items: REVIEW_QUESTIONS
                .iter()
                .map(|q| ChecklistItem {
                    question: q.to_string(),
                    passed: None,
                })
                .collect(),
            verified: false,
            reviewer: None,
        }
    }
}

impl ReviewChecklist {
    /// Records a reviewer's answers. The draft counts as verified only when
    /// every item passes.
    pub fn sign(&mut self, reviewer: &str, answers: &[bool]) -> Result<(), ForgeError> {
        if answers.len() != self.items.len() {
            return Err(ForgeError::InvalidParameter(format!(
                "checklist has {} items, got {} answers",
                self.items.len(),
                answers.len()
            )));
        }
        for (item, &a) in self.items.iter_mut().zip(answers) {
            item.passed = Some(a);
        }
        self.verified = answers.iter().all(|&a| a);
        self.reviewer = Some(reviewer.to_string());
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NaturalDraft {
    pub dd_text: String,
    pub pd_text: String,
    pub checklist: ReviewChecklist,
    /// Selects a distinct sample for otherwise identical requests.
    pub replicate_index: u32,
    pub settings: NaturalSettings,
}

const DD_SYSTEM: &str = "You rewrite technical descriptions of planning domains into plain, varied English. \
Keep every rule: what each action needs beforehand, what becomes true, and what stops being true. \
Do not add rules, objects or hints. Reply with the rewritten description only.";

const PD_SYSTEM: &str = "You turn a symbolic summary of a planning problem into a short, friendly description \
of the starting situation and the goal. Mention every object and every fact exactly as the summary gives it, \
and nothing more. Reply with the description only.";

const PD_EXEMPLARS: [(&str, &str); 2] = [
    (
        "blocks: 3\ninitial stacks (bottom to top): [red, blue] [green]\ngoal stacks (bottom to top): [green, red, blue]\nthe hand starts empty",
        "Three blocks sit on a table: red, blue and green. Blue is resting on red, and green stands alone. \
Nothing is on top of blue or green, and my hand holds nothing. I would like a single tower with green at \
the bottom, red in the middle and blue on top.",
    ),
    (
        "blocks: 2\ninitial stacks (bottom to top): [orange] [yellow]\ngoal stacks (bottom to top): [yellow, orange]\nthe hand starts empty",
        "Two blocks, orange and yellow, are each lying directly on the table with nothing above them, and my hand \
is free. The aim is to end up with orange stacked on yellow, with yellow still on the table.",
    ),
];

fn dd_request(seed_dd: &str, s: &NaturalSettings) -> LlmRequest {
    let mut req = LlmRequest::new(
        s.model_id.clone(),
        vec![Message::system(DD_SYSTEM), Message::user(format!("Description to rewrite:\n\n{seed_dd}"))],
    )
    .with_temperature(s.temperature);
    req.max_output_tokens = s.max_output_tokens;
    req
}

fn pd_request(config: &ProblemConfig, s: &NaturalSettings) -> LlmRequest {
    let mut user = String::from("Examples:\n\n");
    for (summary, text) in PD_EXEMPLARS {
        user.push_str(&format!("Summary:\n{summary}\nDescription:\n{text}\n\n"));
    }
    user.push_str(&format!("Summary:\n{}\nDescription:\n", config.summary()));
    let mut req = LlmRequest::new(s.model_id.clone(), vec![Message::system(PD_SYSTEM), Message::user(user)])
        .with_temperature(s.temperature);
    req.max_output_tokens = s.max_output_tokens;
    req
}

/// Asks the model for a paraphrase of `seed_dd` and a humanized problem
/// description. Gateway failures, including a missing endpoint, are returned
/// as errors.
pub fn render_natural<R: Rng + ?Sized>(
    seed_dd: &str,
    config: &ProblemConfig,
    llm: &dyn LlmClient,
    rng: &mut R,
    settings: &NaturalSettings,
) -> Result<NaturalDraft, ForgeError> {
    if !(settings.temperature > 0.0) {
        return Err(ForgeError::InvalidParameter(format!(
            "natural drafts need a positive temperature, got {}",
            settings.temperature
        )));
    }
    let replicate_index = rng.random::<u32>();
    let dd = llm.complete(&dd_request(seed_dd, settings), replicate_index)?;
    let pd = llm.complete(&pd_request(config, settings), replicate_index)?;
    let (dd_text, pd_text) = (dd.text.trim().to_string(), pd.text.trim().to_string());
    if dd_text.is_empty() || pd_text.is_empty() {
        return Err(ForgeError::InvalidParameter("model returned an empty description".into()));
    }
    Ok(NaturalDraft {
        dd_text,
        pd_text,
        checklist: ReviewChecklist::default(),
        replicate_index,
        settings: settings.clone(),
    })
}
