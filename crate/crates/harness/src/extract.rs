//! Pulling PDDL and plans out of raw model text.
//!
//! PDDL: a JSON object with domain/problem string fields, then fenced code
//! blocks, then bare `(define ...)` forms anywhere in the text. Plans: a JSON
//! array, then fenced blocks, then raw lines. Reasoning enclosed in
//! `<think>` tags is dropped first.

use std::sync::LazyLock;

use regex::Regex;
use serde::{Deserialize, Serialize};
use serde_json::Value;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error, Serialize, Deserialize)]
#[serde(tag = "missing", rename_all = "snake_case")]
pub enum ExtractionFailure {
    #[error("no domain definition found")]
    Domain,
    #[error("no problem definition found")]
    Problem,
    #[error("no domain or problem definition found")]
    Both,
    #[error("no plan steps found")]
    Plan,
}

static THINK: LazyLock<Regex> = LazyLock::new(|| Regex::new(r"(?is)<think>.*?(</think>|\z)").unwrap());
static FENCE: LazyLock<Regex> = LazyLock::new(|| Regex::new(r"(?s)```[^\n`]*\n(.*?)```").unwrap());
static DEFINE: LazyLock<Regex> = LazyLock::new(|| Regex::new(r"(?i)\(\s*define\s*\(\s*(domain|problem)\b").unwrap());
static STEP: LazyLock<Regex> =
    LazyLock::new(|| Regex::new(r"\(\s*[A-Za-z][A-Za-z0-9_-]*(?:\s+[A-Za-z0-9_-]+)*\s*\)").unwrap());
static NUMBERING: LazyLock<Regex> =
    LazyLock::new(|| Regex::new(r"(?i)^(?:[-*]\s*|\d+\s*[.):]\s*|step\s*\d+\s*[.):]\s*)").unwrap());

fn strip_think(raw: &str) -> String {
    THINK.replace_all(raw, "").into_owned()
}

/// End (exclusive) of the balanced form opening at `start`, skipping `;` comments.
fn balanced_end(text: &str, start: usize) -> Option<usize> {
    let mut depth = 0usize;
    let mut in_comment = false;
    for (i, c) in text[start..].char_indices() {
        match c {
            '\n' => in_comment = false,
            _ if in_comment => {}
            ';' => in_comment = true,
            '(' => depth += 1,
            ')' => {
                depth = depth.checked_sub(1)?;
                if depth == 0 {
                    return Some(start + i + 1);
                }
            }
            _ => {}
        }
    }
    None
}

#[derive(Default)]
struct Found {
    domain: Option<String>,
    problem: Option<String>,
}

impl Found {
    fn full(&self) -> bool {
        self.domain.is_some() && self.problem.is_some()
    }

    fn offer(&mut self, kind: &str, text: String) {
        let slot = if kind.eq_ignore_ascii_case("domain") {
            &mut self.domain
        } else {
            &mut self.problem
        };
        if slot.is_none() {
            *slot = Some(text);
        }
    }
}

/// Every complete `(define (domain|problem ...))` form in `text`.
fn define_forms(text: &str, into: &mut Found) {
    let mut from = 0;
    while let Some(m) = DEFINE.captures_at(text, from) {
        let whole = m.get(0).unwrap();
        match balanced_end(text, whole.start()) {
            Some(end) => {
                into.offer(&m[1], text[whole.start()..end].to_string());
                from = end;
            }
            None => from = whole.end(),
        }
    }
}

/// Candidate JSON values: the whole text, fenced blocks, then the widest
/// brace-delimited span.
fn json_candidates(text: &str) -> Vec<Value> {
    let mut out = Vec::new();
    let mut push = |s: &str| {
        if let Ok(v) = serde_json::from_str::<Value>(s.trim()) {
            if v.is_object() || v.is_array() {
                out.push(v);
            }
        }
    };
    push(text);
    for c in FENCE.captures_iter(text) {
        push(&c[1]);
    }
    for (open, close) in [('{', '}'), ('[', ']')] {
        if let (Some(a), Some(b)) = (text.find(open), text.rfind(close)) {
            if a < b {
                push(&text[a..=b]);
            }
        }
    }
    out
}

fn json_pddl(v: &Value, into: &mut Found) {
    match v {
        Value::Object(map) => {
            for (k, val) in map {
                let key = k.to_ascii_lowercase();
                match val {
                    Value::String(s) if key.contains("domain") && !key.contains("problem") => {
                        into.offer("domain", s.clone())
                    }
                    Value::String(s) if key.contains("problem") => into.offer("problem", s.clone()),
                    Value::Object(_) | Value::Array(_) => json_pddl(val, into),
                    _ => {}
                }
            }
        }
        Value::Array(items) => items.iter().for_each(|i| json_pddl(i, into)),
        _ => {}
    }
}

/// Returns `(df_text, pf_text)` from the first stage that yields both.
pub fn extract_pddl(raw: &str) -> Result<(String, String), ExtractionFailure> {
    let text = strip_think(raw);
    let mut seen = Found::default();
    let mut stages: [Box<dyn Fn(&mut Found)>; 3] = [
        Box::new(|f| json_candidates(&text).iter().for_each(|v| json_pddl(v, f))),
        Box::new(|f| FENCE.captures_iter(&text).for_each(|c| define_forms(&c[1], f))),
        Box::new(|f| define_forms(&text, f)),
    ];
    for stage in stages.iter_mut() {
        let mut found = Found::default();
        stage(&mut found);
        if found.full() {
            return Ok((found.domain.unwrap(), found.problem.unwrap()));
        }
        seen.domain = seen.domain.or(found.domain);
        seen.problem = seen.problem.or(found.problem);
    }
    Err(match (seen.domain.is_some(), seen.problem.is_some()) {
        (true, false) => ExtractionFailure::Problem,
        (false, true) => ExtractionFailure::Domain,
        _ => ExtractionFailure::Both,
    })
}

/// Steps on a line that holds nothing but flat forms, after optional numbering.
fn line_steps(line: &str) -> Option<Vec<String>> {
    let line = NUMBERING.replace(line.trim(), "");
    let line = line.trim().trim_end_matches([',', ';', '.']);
    if !line.starts_with('(') {
        return None;
    }
    let steps: Vec<String> = STEP.find_iter(line).map(|m| m.as_str().to_string()).collect();
    let rest = STEP.replace_all(line, "");
    (!steps.is_empty() && rest.trim().is_empty()).then_some(steps)
}

fn lines_steps(text: &str) -> Vec<String> {
    text.lines().filter_map(line_steps).flatten().collect()
}

fn json_plan(v: &Value) -> Option<Vec<String>> {
    let as_steps = |items: &Vec<Value>| -> Option<Vec<String>> {
        let strs: Option<Vec<&str>> = items.iter().map(Value::as_str).collect();
        let steps: Vec<String> = strs?
            .iter()
            .map(|s| {
                let s = s.trim();
                if s.starts_with('(') { s.to_string() } else { format!("({s})") }
            })
            .collect();
        (!steps.is_empty()).then_some(steps)
    };
    match v {
        Value::Array(items) => as_steps(items),
        Value::Object(map) => {
            let mut keys: Vec<&String> = map.keys().collect();
            keys.sort_by_key(|k| !k.to_ascii_lowercase().contains("plan"));
            keys.into_iter().find_map(|k| match &map[k] {
                Value::Array(items) => as_steps(items),
                Value::String(s) if k.to_ascii_lowercase().contains("plan") => {
                    let steps = lines_steps(s);
                    (!steps.is_empty()).then_some(steps)
                }
                _ => None,
            })
        }
        _ => None,
    }
}

/// Plan steps, one per line, from the first source that has any.
pub fn extract_plan(raw: &str) -> Result<String, ExtractionFailure> {
    let text = strip_think(raw);
    let steps = json_candidates(&text)
        .iter()
        .find_map(json_plan)
        .or_else(|| {
            let fenced: Vec<String> = FENCE.captures_iter(&text).flat_map(|c| lines_steps(&c[1])).collect();
            (!fenced.is_empty()).then_some(fenced)
        })
        .unwrap_or_else(|| lines_steps(&text));
    if steps.is_empty() {
        Err(ExtractionFailure::Plan)
    } else {
        Ok(steps.join("\n"))
    }
}
