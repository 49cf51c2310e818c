//! Phrase tables and the heavily/moderately templated renderers.

use std::collections::BTreeMap;

use pddlbench_core::pddl::{Literal, Term};
use pddlbench_core::{Domain, GroundAtom, Problem};
use serde::{Deserialize, Serialize};

use crate::{DomainTag, ForgeError};

const DEFAULT_PRE: &str = "To perform {action} action, the following facts need to be true: {facts}.";
const DEFAULT_ADD: &str = "Once {action} action is performed the following facts will be true: {facts}.";
const DEFAULT_DEL: &str = "Once {action} action is performed the following facts will be false: {facts}.";

fn default_restrictions() -> String {
    "I have the following restrictions on my actions:".to_string()
}

fn default_object() -> String {
    "{}".to_string()
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Frames {
    pub pre: Option<String>,
    pub add: Option<String>,
    pub del: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DdLex {
    pub intro: String,
    pub menu: Vec<String>,
    #[serde(default = "default_restrictions")]
    pub restrictions: String,
    /// Upper-cases the first letter of every rendered fact.
    #[serde(default)]
    pub capitalize: bool,
    #[serde(default)]
    pub frames: Frames,
    pub predicates: BTreeMap<String, String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ActionLex {
    pub label: String,
    /// How each parameter is referred to, in schema order.
    pub params: Vec<String>,
    #[serde(default)]
    pub frames: Frames,
    #[serde(default)]
    pub pre_order: Vec<String>,
    #[serde(default)]
    pub add_order: Vec<String>,
    #[serde(default)]
    pub del_order: Vec<String>,
    /// Whole-literal overrides keyed by the lifted literal, e.g. `(truck ?truck)`.
    #[serde(default)]
    pub phrases: BTreeMap<String, String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Conjunction {
    /// `a, b, and c`
    #[default]
    Oxford,
    /// `a, b and c`
    Plain,
}

impl Conjunction {
    pub fn join(self, items: &[String]) -> String {
        match items {
            [] => String::new(),
            [one] => one.clone(),
            [a, b] => format!("{a} and {b}"),
            [init @ .., last] => {
                let sep = if self == Conjunction::Oxford { ", and " } else { " and " };
                format!("{}{sep}{last}", init.join(", "))
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ObjectList {
    #[serde(rename = "type")]
    pub ty: String,
    pub frame: String,
}

/// Opening sentences that introduce the objects by type.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PdIntro {
    pub frame: String,
    pub types: BTreeMap<String, String>,
    #[serde(default)]
    pub lists: Vec<ObjectList>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PdLex {
    pub init_frame: String,
    pub goal_frame: String,
    #[serde(default)]
    pub conjunction: Conjunction,
    /// How an object is named; `{}` is the object.
    #[serde(default = "default_object")]
    pub object: String,
    /// Facts are grouped by predicate in this order; others keep their place after.
    #[serde(default)]
    pub order: Vec<String>,
    /// Within a predicate group, goal facts are sorted by argument.
    #[serde(default)]
    pub sort_goal: bool,
    #[serde(default)]
    pub intro: Option<PdIntro>,
    pub predicates: BTreeMap<String, String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModerateLex {
    #[serde(default)]
    pub predicates: BTreeMap<String, String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Lexicalization {
    pub domain: String,
    pub dd: DdLex,
    #[serde(default)]
    pub actions: BTreeMap<String, ActionLex>,
    pub pd: PdLex,
    #[serde(default)]
    pub moderate: Option<ModerateLex>,
}

const BLOCKSWORLD: &str = include_str!("../assets/lex/blocksworld.toml");
const MYSTERY: &str = include_str!("../assets/lex/mystery_blocksworld.toml");
const LOGISTICS: &str = include_str!("../assets/lex/logistics.toml");
const BARMAN: &str = include_str!("../assets/lex/barman.toml");

const MODERATE_BLOCKSWORLD: &str = include_str!("../assets/moderate/blocksworld-dd.txt");
const MODERATE_LOGISTICS: &str = include_str!("../assets/moderate/logistics-dd.txt");

/// Substitutes `{0}`, `{1}`, ... in `template`.
fn fill(template: &str, args: &[String]) -> String {
    let mut out = template.to_string();
    for (i, a) in args.iter().enumerate() {
        out = out.replace(&format!("{{{i}}}"), a);
    }
    out
}

fn capitalize(s: &str) -> String {
    let mut c = s.chars();
    match c.next() {
        Some(f) => f.to_uppercase().chain(c).collect(),
        None => String::new(),
    }
}

/// Stable sort by the first key matching the literal text or its predicate.
fn rank<T>(items: &mut [T], order: &[String], key: impl Fn(&T) -> (String, String)) {
    if order.is_empty() {
        return;
    }
    items.sort_by_cached_key(|it| {
        let (text, pred) = key(it);
        order.iter().position(|k| *k == text || *k == pred).unwrap_or(order.len())
    });
}

impl Lexicalization {
    pub fn from_toml(text: &str) -> Result<Self, ForgeError> {
        toml::from_str(text).map_err(|e| ForgeError::Lexicon(e.to_string()))
    }

    /// The shipped table for a gold domain.
    pub fn builtin(tag: DomainTag) -> Self {
        let text = match tag {
            DomainTag::Blocksworld => BLOCKSWORLD,
            DomainTag::MysteryBlocksworld => MYSTERY,
            DomainTag::Logistics => LOGISTICS,
            DomainTag::Barman => BARMAN,
        };
        Self::from_toml(text).unwrap_or_else(|e| panic!("shipped lexicon for {tag}: {e}"))
    }

    /// A mechanical table that names everything by its PDDL symbol; used for
    /// domains with freshly generated vocabularies.
    pub fn generic(domain: &Domain) -> Self {
        let template = |name: &str, arity: usize| {
            std::iter::once(name.to_string())
                .chain((0..arity).map(|i| format!("{{{i}}}")))
                .collect::<Vec<_>>()
                .join(" ")
        };
        let predicates: BTreeMap<String, String> = domain
            .predicates
            .iter()
            .map(|p| (p.name.to_string(), template(p.name.as_str(), p.arity())))
            .collect();
        let actions: BTreeMap<String, ActionLex> = domain
            .actions
            .iter()
            .map(|a| {
                let lex = ActionLex {
                    label: a.name.to_string(),
                    params: a.params.iter().map(|v| v.name.to_string()).collect(),
                    frames: Frames::default(),
                    pre_order: vec![],
                    add_order: vec![],
                    del_order: vec![],
                    phrases: BTreeMap::new(),
                };
                (a.name.to_string(), lex)
            })
            .collect();
        let menu = domain
            .actions
            .iter()
            .map(|a| {
                std::iter::once(a.name.to_string())
                    .chain(a.params.iter().map(|v| v.name.to_string()))
                    .collect::<Vec<_>>()
                    .join(" ")
            })
            .collect();
        Lexicalization {
            domain: domain.name.to_string(),
            dd: DdLex {
                intro: "Here are the actions I can do".to_string(),
                menu,
                restrictions: default_restrictions(),
                capitalize: false,
                frames: Frames::default(),
                predicates: predicates.clone(),
            },
            actions,
            pd: PdLex {
                init_frame: "As initial conditions I have that, {facts}.".to_string(),
                goal_frame: "My goal is to have that {facts}.".to_string(),
                conjunction: Conjunction::Oxford,
                object: default_object(),
                order: vec![],
                sort_goal: false,
                intro: None,
                predicates,
            },
            moderate: None,
        }
    }

    fn action(&self, name: &str) -> Result<&ActionLex, ForgeError> {
        self.actions
            .get(name)
            .ok_or_else(|| ForgeError::missing(&self.domain, format!("action `{name}`")))
    }

    /// The phrase for a lifted literal of action `action`, ignoring polarity.
    pub fn dd_phrase(&self, action: &str, domain: &Domain, lit: &Literal) -> Result<String, ForgeError> {
        let entry = self.action(action)?;
        let schema = domain
            .action(&pddlbench_core::Symbol::new(action).map_err(|e| ForgeError::Lexicon(e.to_string()))?)
            .ok_or_else(|| ForgeError::Lexicon(format!("domain has no action `{action}`")))?;
        let positive = if lit.positive { lit.clone() } else { lit.negated() };
        let phrase = match entry.phrases.get(&positive.to_string()) {
            Some(p) => p.clone(),
            None => {
                let template = self
                    .dd
                    .predicates
                    .get(lit.predicate.as_str())
                    .ok_or_else(|| ForgeError::missing(&self.domain, format!("predicate `{}`", lit.predicate)))?;
                let args: Vec<String> = lit
                    .args
                    .iter()
                    .map(|t| match t {
                        Term::Var(v) => schema
                            .param_index(v)
                            .and_then(|i| entry.params.get(i))
                            .cloned()
                            .unwrap_or_else(|| v.to_string()),
                        Term::Const(c) => c.to_string(),
                    })
                    .collect();
                fill(template, &args)
            }
        };
        Ok(if self.dd.capitalize { capitalize(&phrase) } else { phrase })
    }

    fn frame<'a>(&'a self, entry: &'a ActionLex, pick: fn(&Frames) -> &Option<String>, default: &'static str) -> &'a str {
        pick(&entry.frames)
            .as_deref()
            .or(pick(&self.dd.frames).as_deref())
            .unwrap_or(default)
    }

    /// Phrases of one action's precondition, add list and delete list, in
    /// rendering order.
    pub fn action_facts(&self, domain: &Domain, action: &str) -> Result<[Vec<String>; 3], ForgeError> {
        let entry = self.action(action)?;
        let schema = domain
            .actions
            .iter()
            .find(|a| a.name.as_str() == action)
            .ok_or_else(|| ForgeError::Lexicon(format!("domain has no action `{action}`")))?;
        if entry.params.len() != schema.arity() {
            return Err(ForgeError::Lexicon(format!(
                "action `{action}` has {} parameters but the lexicon names {}",
                schema.arity(),
                entry.params.len()
            )));
        }
        let phrases = |lits: &[Literal], order: &[String]| -> Result<Vec<String>, ForgeError> {
            let mut lits: Vec<&Literal> = lits.iter().collect();
            rank(&mut lits, order, |l| {
                let pos = if l.positive { (*l).clone() } else { l.negated() };
                (pos.to_string(), l.predicate.to_string())
            });
            lits.into_iter().map(|l| self.dd_phrase(action, domain, l)).collect()
        };
        Ok([
            phrases(&schema.precondition, &entry.pre_order)?,
            phrases(&schema.add_effects, &entry.add_order)?,
            phrases(&schema.del_effects, &entry.del_order)?,
        ])
    }

    fn pd_atom(&self, atom: &GroundAtom, table: &BTreeMap<String, String>) -> Result<String, ForgeError> {
        let template = table
            .get(atom.predicate.as_str())
            .or_else(|| self.pd.predicates.get(atom.predicate.as_str()))
            .ok_or_else(|| ForgeError::missing(&self.domain, format!("predicate `{}`", atom.predicate)))?;
        let args: Vec<String> = atom.args.iter().map(|a| self.pd.object.replace("{}", a.as_str())).collect();
        Ok(fill(template, &args))
    }

    fn pd_facts<'a>(
        &self,
        atoms: impl Iterator<Item = (&'a GroundAtom, bool)>,
        sort: bool,
        table: &BTreeMap<String, String>,
    ) -> Result<Vec<String>, ForgeError> {
        let mut atoms: Vec<(&GroundAtom, bool)> = atoms.collect();
        if sort {
            atoms.sort_by(|a, b| a.0.args.cmp(&b.0.args));
        }
        rank(&mut atoms, &self.pd.order, |(a, _)| (a.to_string(), a.predicate.to_string()));
        atoms
            .into_iter()
            .map(|(a, positive)| {
                let p = self.pd_atom(a, table)?;
                Ok(if positive { p } else { format!("it is not the case that {p}") })
            })
            .collect()
    }

    fn render_pd(&self, problem: &Problem, table: &BTreeMap<String, String>) -> Result<String, ForgeError> {
        let conj = self.pd.conjunction;
        let listed = |items: Vec<String>| {
            if items.is_empty() {
                "nothing".to_string()
            } else {
                conj.join(&items)
            }
        };
        let mut out = String::new();
        if let Some(intro) = &self.pd.intro {
            let items: Vec<String> = problem
                .objects
                .iter()
                .filter_map(|o| intro.types.get(o.ty.as_str()).map(|f| f.replace("{}", o.name.as_str())))
                .collect();
            let mut sentences = vec![intro.frame.replace("{items}", &listed(items))];
            for list in &intro.lists {
                let names: Vec<String> = problem
                    .objects
                    .iter()
                    .filter(|o| o.ty.as_str() == list.ty)
                    .map(|o| o.name.to_string())
                    .collect();
                if !names.is_empty() {
                    sentences.push(list.frame.replace("{items}", &conj.join(&names)));
                }
            }
            out.push_str(&sentences.join(" "));
            out.push('\n');
        }
        let init = self.pd_facts(problem.init.iter().map(|a| (a, true)), false, table)?;
        let goal = self.pd_facts(problem.goal.iter().map(|g| (&g.atom, g.positive)), self.pd.sort_goal, table)?;
        out.push_str(&self.pd.init_frame.replace("{facts}", &listed(init)));
        out.push('\n');
        out.push_str(&self.pd.goal_frame.replace("{facts}", &listed(goal)));
        out.push('\n');
        Ok(out)
    }
}

/// Heavily templated domain description: the action menu, then one sentence
/// each for the precondition, add list and delete list of every action. An
/// empty list produces no sentence.
pub fn render_heavy(domain: &Domain, lex: &Lexicalization) -> Result<String, ForgeError> {
    let mut out = format!("{}\n\n", lex.dd.intro);
    for line in &lex.dd.menu {
        out.push_str(&format!("   {line}\n"));
    }
    out.push('\n');
    out.push_str(&lex.dd.restrictions);
    out.push('\n');
    for schema in &domain.actions {
        let name = schema.name.as_str();
        let entry = lex.action(name)?;
        let facts = lex.action_facts(domain, name)?;
        let frames = [
            lex.frame(entry, |f| &f.pre, DEFAULT_PRE),
            lex.frame(entry, |f| &f.add, DEFAULT_ADD),
            lex.frame(entry, |f| &f.del, DEFAULT_DEL),
        ];
        for (frame, list) in frames.iter().zip(&facts) {
            if !list.is_empty() {
                let s = frame.replace("{action}", &entry.label).replace("{facts}", &list.join(", "));
                out.push_str(&format!("    {s}\n"));
            }
        }
    }
    Ok(out)
}

/// Heavily templated problem description: every initial fact, then every goal fact.
pub fn render_heavy_pd(problem: &Problem, lex: &Lexicalization) -> Result<String, ForgeError> {
    lex.render_pd(problem, &BTreeMap::new())
}

/// The hand-written moderately templated domain description.
pub fn render_moderate(tag: DomainTag) -> Result<&'static str, ForgeError> {
    match tag {
        DomainTag::Blocksworld => Ok(MODERATE_BLOCKSWORLD),
        DomainTag::Logistics => Ok(MODERATE_LOGISTICS),
        other => Err(ForgeError::UnsupportedDomain(other.to_string())),
    }
}

/// The heavy problem description with the lexicon's moderate phrase overrides.
pub fn render_moderate_pd(problem: &Problem, lex: &Lexicalization) -> Result<String, ForgeError> {
    let moderate = lex
        .moderate
        .as_ref()
        .ok_or_else(|| ForgeError::UnsupportedDomain(lex.domain.clone()))?;
    lex.render_pd(problem, &moderate.predicates)
}
