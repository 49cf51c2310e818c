//! Structural comparison of a predicted DF/PF against the gold pair. The
//! output is a set of suggested error categories for a human annotator; it
//! never sets a final label by itself.

use std::collections::{BTreeMap, BTreeSet};

use pddlbench_core::pddl::{ActionSchema, Literal, Term};
use pddlbench_core::{parse_domain, parse_problem, Domain, Problem, Symbol};
use serde::{Deserialize, Serialize};

use crate::record::{CorrectnessVerdict, ErrorClass, Pipeline, RunRecord};
use crate::HarnessError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Category {
    WrongPrecondition,
    WrongEffect,
    MissingPredicate,
    MissingAction,
    MissingParameters,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Suggestion {
    pub category: Category,
    /// Gold action or predicate the suggestion is about.
    pub subject: String,
    pub detail: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SetDiff {
    pub missing: Vec<String>,
    pub extra: Vec<String>,
}

impl SetDiff {
    fn of(gold: BTreeSet<String>, predicted: BTreeSet<String>) -> Self {
        SetDiff {
            missing: gold.difference(&predicted).cloned().collect(),
            extra: predicted.difference(&gold).cloned().collect(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.missing.is_empty() && self.extra.is_empty()
    }

    fn describe(&self) -> String {
        let mut parts = Vec::new();
        if !self.missing.is_empty() {
            parts.push(format!("missing {}", self.missing.join(" ")));
        }
        if !self.extra.is_empty() {
            parts.push(format!("extra {}", self.extra.join(" ")));
        }
        parts.join("; ")
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct DfDiff {
    /// Gold name -> predicted name.
    pub predicates: BTreeMap<String, String>,
    pub actions: BTreeMap<String, String>,
    pub unaligned_predicates: SetDiff,
    pub unaligned_actions: SetDiff,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PfDiff {
    pub objects: SetDiff,
    pub init: SetDiff,
    pub goal: SetDiff,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TriageReport {
    pub instance_id: String,
    pub suggestions: Vec<Suggestion>,
    pub df: Option<DfDiff>,
    pub pf: Option<PfDiff>,
    /// Why no comparison was made, if none was.
    pub note: Option<String>,
    /// Filled in by a human annotator.
    pub human_label: Option<ErrorClass>,
}

impl TriageReport {
    fn skipped(record: &RunRecord, note: impl Into<String>) -> Self {
        TriageReport {
            instance_id: record.instance_id.clone(),
            suggestions: Vec::new(),
            df: None,
            pf: None,
            note: Some(note.into()),
            human_label: None,
        }
    }

    /// Records the annotator's decision on both the report and the record.
    pub fn annotate(&mut self, record: &mut RunRecord, label: ErrorClass) -> Result<(), HarnessError> {
        if !matches!(label, ErrorClass::DfSemantic | ErrorClass::PfSemantic | ErrorClass::Unclassified) {
            return Err(HarnessError::Config(format!("{label:?} is not a semantic label")));
        }
        self.human_label = Some(label);
        record.error_class = label;
        Ok(())
    }
}

fn norm(s: &str) -> String {
    s.chars().filter(|c| !matches!(c, '-' | '_')).collect::<String>().to_ascii_lowercase()
}

/// `(pred, role)` pairs describing where a predicate occurs, with actions
/// named by their gold counterpart.
fn usage(d: &Domain, pred: &Symbol, action_names: &BTreeMap<String, String>) -> BTreeSet<(String, &'static str)> {
    let mut out = BTreeSet::new();
    for a in &d.actions {
        let Some(name) = action_names.get(a.name.as_str()) else { continue };
        for (role, lits) in [("pre", &a.precondition), ("add", &a.add_effects), ("del", &a.del_effects)] {
            if lits.iter().any(|l| &l.predicate == pred) {
                out.insert((name.clone(), role));
            }
        }
    }
    out
}

fn align_actions(gold: &Domain, pred: &Domain) -> BTreeMap<String, String> {
    let mut out = BTreeMap::new();
    for g in &gold.actions {
        let hits: Vec<&ActionSchema> = pred.actions.iter().filter(|p| norm(p.name.as_str()) == norm(g.name.as_str())).collect();
        if let [p] = hits.as_slice() {
            out.insert(g.name.to_string(), p.name.to_string());
        }
    }
    out
}

fn align_predicates(gold: &Domain, pred: &Domain, actions: &BTreeMap<String, String>) -> BTreeMap<String, String> {
    let mut out: BTreeMap<String, String> = BTreeMap::new();
    for g in &gold.predicates {
        if let Some(p) = pred.predicates.iter().find(|p| norm(p.name.as_str()) == norm(g.name.as_str()) && p.arity() == g.arity()) {
            out.insert(g.name.to_string(), p.name.to_string());
        }
    }
    // predicted action name -> gold action name
    let back: BTreeMap<String, String> = actions.iter().map(|(g, p)| (p.clone(), g.clone())).collect();
    let ident: BTreeMap<String, String> = actions.keys().map(|g| (g.clone(), g.clone())).collect();
    let taken: BTreeSet<String> = out.values().cloned().collect();
    let free: Vec<_> = pred.predicates.iter().filter(|p| !taken.contains(p.name.as_str())).collect();
    let unaligned: Vec<_> = gold.predicates.iter().filter(|g| !out.contains_key(g.name.as_str())).collect();
    let matches = |g: &pddlbench_core::pddl::Predicate, p: &pddlbench_core::pddl::Predicate| {
        let gu = usage(gold, &g.name, &ident);
        g.arity() == p.arity() && !gu.is_empty() && gu == usage(pred, &p.name, &back)
    };
    for g in &unaligned {
        let cands: Vec<_> = free.iter().filter(|p| matches(g, p)).collect();
        if let [p] = cands.as_slice() {
            if unaligned.iter().filter(|g2| matches(g2, p)).count() == 1 {
                out.insert(g.name.to_string(), p.name.to_string());
            }
        }
    }
    out
}

fn lit_text(l: &Literal, pred: &str, vars: &BTreeMap<String, String>) -> String {
    let args: Vec<String> = l
        .args
        .iter()
        .map(|t| match t {
            Term::Var(v) => format!("?{}", vars.get(v.as_str()).cloned().unwrap_or_else(|| v.to_string())),
            Term::Const(c) => c.to_string(),
        })
        .collect();
    let core = if args.is_empty() { format!("({pred})") } else { format!("({pred} {})", args.join(" ")) };
    if l.positive { core } else { format!("(not {core})") }
}

/// Literal texts in gold vocabulary. Gold literals over predicates the
/// prediction lacks are left out; so are predicted literals over predicates
/// with no gold counterpart.
fn gold_side(lits: &[Literal], keep: &BTreeSet<String>) -> BTreeSet<String> {
    lits.iter()
        .filter(|l| keep.contains(l.predicate.as_str()))
        .map(|l| lit_text(l, l.predicate.as_str(), &BTreeMap::new()))
        .collect()
}

fn pred_side(lits: &[Literal], back: &BTreeMap<String, String>, vars: &BTreeMap<String, String>) -> BTreeSet<String> {
    lits.iter()
        .filter_map(|l| back.get(l.predicate.as_str()).map(|g| lit_text(l, g, vars)))
        .collect()
}

/// Compares two domains; exposed for tooling beyond run records.
pub fn diff_domains(gold: &Domain, pred: &Domain) -> (DfDiff, Vec<Suggestion>) {
    let actions = align_actions(gold, pred);
    let predicates = align_predicates(gold, pred, &actions);
    let back: BTreeMap<String, String> = predicates.iter().map(|(g, p)| (p.clone(), g.clone())).collect();
    let keep: BTreeSet<String> = predicates.keys().cloned().collect();
    let mut suggestions = Vec::new();

    for g in &gold.predicates {
        if !predicates.contains_key(g.name.as_str()) {
            suggestions.push(Suggestion {
                category: Category::MissingPredicate,
                subject: g.name.to_string(),
                detail: format!("no predicted predicate of arity {} plays the role of `{}`", g.arity(), g.name),
            });
        }
    }
    for g in &gold.actions {
        let Some(pname) = actions.get(g.name.as_str()) else {
            suggestions.push(Suggestion {
                category: Category::MissingAction,
                subject: g.name.to_string(),
                detail: format!("no predicted action named like `{}`", g.name),
            });
            continue;
        };
        let p = pred.actions.iter().find(|a| a.name.as_str() == pname).expect("aligned");
        if p.arity() != g.arity() {
            suggestions.push(Suggestion {
                category: Category::MissingParameters,
                subject: g.name.to_string(),
                detail: format!("gold takes {} parameters, prediction takes {}", g.arity(), p.arity()),
            });
            continue;
        }
        let vars: BTreeMap<String, String> =
            p.params.iter().zip(&g.params).map(|(pv, gv)| (pv.name.to_string(), gv.name.to_string())).collect();
        let pre = SetDiff::of(gold_side(&g.precondition, &keep), pred_side(&p.precondition, &back, &vars));
        if !pre.is_empty() {
            suggestions.push(Suggestion {
                category: Category::WrongPrecondition,
                subject: g.name.to_string(),
                detail: pre.describe(),
            });
        }
        let add = SetDiff::of(gold_side(&g.add_effects, &keep), pred_side(&p.add_effects, &back, &vars));
        let del = SetDiff::of(gold_side(&g.del_effects, &keep), pred_side(&p.del_effects, &back, &vars));
        for (kind, d) in [("add", add), ("delete", del)] {
            if !d.is_empty() {
                suggestions.push(Suggestion {
                    category: Category::WrongEffect,
                    subject: g.name.to_string(),
                    detail: format!("{kind} list: {}", d.describe()),
                });
            }
        }
    }
    let names = |d: &Domain, f: fn(&Domain) -> Vec<String>| f(d).into_iter().collect::<BTreeSet<_>>();
    let gold_preds = names(gold, |d| d.predicates.iter().map(|p| p.name.to_string()).collect());
    let pred_preds = names(pred, |d| d.predicates.iter().map(|p| p.name.to_string()).collect());
    let gold_acts = names(gold, |d| d.actions.iter().map(|a| a.name.to_string()).collect());
    let pred_acts = names(pred, |d| d.actions.iter().map(|a| a.name.to_string()).collect());
    let diff = DfDiff {
        unaligned_predicates: SetDiff {
            missing: gold_preds.iter().filter(|g| !predicates.contains_key(*g)).cloned().collect(),
            extra: pred_preds.iter().filter(|p| !back.contains_key(*p)).cloned().collect(),
        },
        unaligned_actions: SetDiff {
            missing: gold_acts.iter().filter(|g| !actions.contains_key(*g)).cloned().collect(),
            extra: pred_acts.iter().filter(|p| !actions.values().any(|v| v == *p)).cloned().collect(),
        },
        predicates,
        actions,
    };
    suggestions.sort();
    (diff, suggestions)
}

fn diff_problems(gold: &Problem, pred: &Problem, predicates: &BTreeMap<String, String>) -> PfDiff {
    let back: BTreeMap<&str, &str> = predicates.iter().map(|(g, p)| (p.as_str(), g.as_str())).collect();
    let rename = |a: &pddlbench_core::GroundAtom| {
        let name = back.get(a.predicate.as_str()).copied().unwrap_or(a.predicate.as_str());
        let mut parts = vec![name.to_string()];
        parts.extend(a.args.iter().map(|s| s.to_string()));
        format!("({})", parts.join(" "))
    };
    let objects = |p: &Problem| p.objects.iter().map(|o| o.name.to_string()).collect::<BTreeSet<_>>();
    let goal = |p: &Problem, map: &dyn Fn(&pddlbench_core::GroundAtom) -> String| {
        p.goal
            .iter()
            .map(|g| if g.positive { map(&g.atom) } else { format!("(not {})", map(&g.atom)) })
            .collect::<BTreeSet<_>>()
    };
    PfDiff {
        objects: SetDiff::of(objects(gold), objects(pred)),
        init: SetDiff::of(
            gold.init.iter().map(|a| a.to_string()).collect(),
            pred.init.iter().map(rename).collect(),
        ),
        goal: SetDiff::of(goal(gold, &|a| a.to_string()), goal(pred, &rename)),
    }
}

/// Suggests fine-grained error categories for a formalizer record whose PDDL
/// was extracted and parses but did not yield a correct plan.
pub fn triage_errors(record: &RunRecord, gold_df: &Domain, gold_pf: &Problem) -> TriageReport {
    if record.pipeline != Pipeline::Formalizer {
        return TriageReport::skipped(record, "only formalizer records are triaged");
    }
    if record.correctness_verdict != CorrectnessVerdict::Incorrect {
        return TriageReport::skipped(record, "record is not incorrect");
    }
    let (Some(df), Some(pf)) = (&record.extracted.df_text, &record.extracted.pf_text) else {
        return TriageReport::skipped(record, "no PDDL was extracted");
    };
    let Ok(pd) = parse_domain(df) else {
        return TriageReport::skipped(record, "predicted domain does not parse");
    };
    let (diff, suggestions) = diff_domains(gold_df, &pd);
    let pf_diff = parse_problem(pf, Some(&pd)).ok().map(|pp| diff_problems(gold_pf, &pp, &diff.predicates));
    TriageReport {
        instance_id: record.instance_id.clone(),
        suggestions,
        note: pf_diff.is_none().then(|| "predicted problem does not parse".to_string()),
        df: Some(diff),
        pf: pf_diff,
        human_label: None,
    }
}
