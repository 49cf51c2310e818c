//! The typed PDDL model shared by every other module.
//!
//! All values are immutable once built and cheap to clone: symbols are
//! reference-counted strings.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use indexmap::IndexSet;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

/// A normalized PDDL identifier: lowercase, matching `[a-z][a-z0-9_-]*`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Symbol(Arc<str>);

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("`{0}` is not a valid PDDL name")]
pub struct InvalidSymbol(pub String);

impl Symbol {
    /// Case-folds and validates `text`.
    pub fn new(text: &str) -> Result<Symbol, InvalidSymbol> {
        let lower = text.to_lowercase();
        if Self::is_valid(&lower) {
            Ok(Symbol(Arc::from(lower)))
        } else {
            Err(InvalidSymbol(text.to_string()))
        }
    }

    /// `Symbol::new` for names known to be valid (literals in code).
    ///
    /// Panics on an invalid name.
    pub fn from_static(text: &'static str) -> Symbol {
        Symbol::new(text).unwrap_or_else(|e| panic!("{e}"))
    }

    pub fn is_valid(text: &str) -> bool {
        let mut chars = text.chars();
        matches!(chars.next(), Some('a'..='z'))
            && chars.all(|c| matches!(c, 'a'..='z' | '0'..='9' | '_' | '-'))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    pub fn object() -> Symbol {
        Symbol::from_static("object")
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", &*self.0)
    }
}

impl AsRef<str> for Symbol {
    fn as_ref(&self) -> &str {
        &self.0
    }
}

impl Serialize for Symbol {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.0)
    }
}

impl<'de> Deserialize<'de> for Symbol {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        Symbol::new(&s).map_err(serde::de::Error::custom)
    }
}

/// A parameter or predicate argument: `?name - type`. `name` excludes the `?`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TypedVar {
    pub name: Symbol,
    #[serde(rename = "type")]
    pub ty: Symbol,
}

impl TypedVar {
    pub fn new(name: Symbol, ty: Symbol) -> Self {
        TypedVar { name, ty }
    }

    pub fn untyped(name: Symbol) -> Self {
        TypedVar {
            name,
            ty: Symbol::object(),
        }
    }
}

/// A declared object or constant with its type.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TypedObject {
    pub name: Symbol,
    #[serde(rename = "type")]
    pub ty: Symbol,
}

impl TypedObject {
    pub fn new(name: Symbol, ty: Symbol) -> Self {
        TypedObject { name, ty }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Predicate {
    pub name: Symbol,
    pub params: Vec<TypedVar>,
}

impl Predicate {
    pub fn arity(&self) -> usize {
        self.params.len()
    }
}

/// An argument inside an action schema: a parameter or a constant.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Term {
    Var(Symbol),
    Const(Symbol),
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(v) => write!(f, "?{v}"),
            Term::Const(c) => write!(f, "{c}"),
        }
    }
}

/// A possibly-negated lifted atom, e.g. `(not (on-table ?b))`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Literal {
    pub predicate: Symbol,
    pub args: Vec<Term>,
    pub positive: bool,
}

impl Literal {
    pub fn new(predicate: Symbol, args: Vec<Term>, positive: bool) -> Self {
        Literal {
            predicate,
            args,
            positive,
        }
    }

    pub fn negated(&self) -> Literal {
        Literal {
            positive: !self.positive,
            ..self.clone()
        }
    }

    pub fn vars(&self) -> impl Iterator<Item = &Symbol> {
        self.args.iter().filter_map(|t| match t {
            Term::Var(v) => Some(v),
            Term::Const(_) => None,
        })
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if !self.positive {
            f.write_str("(not ")?;
        }
        write!(f, "({}", self.predicate)?;
        for a in &self.args {
            write!(f, " {a}")?;
        }
        f.write_str(")")?;
        if !self.positive {
            f.write_str(")")?;
        }
        Ok(())
    }
}

/// A STRIPS action schema. Delete effects are stored unnegated.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ActionSchema {
    pub name: Symbol,
    pub params: Vec<TypedVar>,
    pub precondition: Vec<Literal>,
    pub add_effects: Vec<Literal>,
    pub del_effects: Vec<Literal>,
}

impl ActionSchema {
    /// Builds a schema and normalizes it: duplicate literals are dropped and
    /// any delete effect that also appears as an add effect is removed
    /// (delete-then-add makes the atom true either way).
    pub fn new(
        name: Symbol,
        params: Vec<TypedVar>,
        precondition: Vec<Literal>,
        add_effects: Vec<Literal>,
        del_effects: Vec<Literal>,
    ) -> Self {
        let precondition = dedup(precondition);
        let add_effects = dedup(add_effects);
        let del_effects = dedup(del_effects)
            .into_iter()
            .filter(|d| !add_effects.contains(d))
            .collect();
        ActionSchema {
            name,
            params,
            precondition,
            add_effects,
            del_effects,
        }
    }

    pub fn arity(&self) -> usize {
        self.params.len()
    }

    pub fn param_index(&self, var: &Symbol) -> Option<usize> {
        self.params.iter().position(|p| &p.name == var)
    }
}

fn dedup<T: PartialEq>(items: Vec<T>) -> Vec<T> {
    let mut out: Vec<T> = Vec::with_capacity(items.len());
    for it in items {
        if !out.contains(&it) {
            out.push(it);
        }
    }
    out
}

/// Type hierarchy as a child → parent map rooted at `object`.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct TypeHierarchy {
    parents: BTreeMap<Symbol, Symbol>,
}

impl TypeHierarchy {
    pub fn new() -> Self {
        Self::default()
    }

    /// Records `child - parent`. Returns false if `child` already had a
    /// different parent.
    pub fn insert(&mut self, child: Symbol, parent: Symbol) -> bool {
        match self.parents.get(&child) {
            Some(p) if *p != parent => false,
            _ => {
                self.parents.insert(child, parent);
                true
            }
        }
    }

    pub fn parent(&self, ty: &Symbol) -> Option<&Symbol> {
        self.parents.get(ty)
    }

    pub fn is_empty(&self) -> bool {
        self.parents.is_empty()
    }

    /// Declared types other than `object`, in sorted order.
    pub fn types(&self) -> impl Iterator<Item = &Symbol> {
        self.parents.keys()
    }

    pub fn entries(&self) -> impl Iterator<Item = (&Symbol, &Symbol)> {
        self.parents.iter()
    }

    pub fn contains(&self, ty: &Symbol) -> bool {
        ty.as_str() == "object" || self.parents.contains_key(ty)
    }

    /// Types that are nobody's parent.
    pub fn leaves(&self) -> Vec<&Symbol> {
        let parents: BTreeSet<&Symbol> = self.parents.values().collect();
        self.parents
            .keys()
            .filter(|t| !parents.contains(t))
            .collect()
    }

    /// True if `ty` equals `ancestor` or descends from it.
    pub fn is_subtype(&self, ty: &Symbol, ancestor: &Symbol) -> bool {
        if ancestor.as_str() == "object" {
            return true;
        }
        let mut cur = ty;
        // bounded walk so a malformed (cyclic) map cannot loop forever
        for _ in 0..=self.parents.len() {
            if cur == ancestor {
                return true;
            }
            match self.parents.get(cur) {
                Some(p) => cur = p,
                None => return false,
            }
        }
        false
    }

    /// Returns a type that lies on a cycle, if any.
    pub fn find_cycle(&self) -> Option<Symbol> {
        for start in self.parents.keys() {
            let mut cur = start;
            for _ in 0..=self.parents.len() {
                match self.parents.get(cur) {
                    Some(p) if p == start => return Some(start.clone()),
                    Some(p) => cur = p,
                    None => break,
                }
            }
        }
        None
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Domain {
    pub name: Symbol,
    /// Requirement flags without the leading colon. Retained, not enforced.
    pub requirements: BTreeSet<Symbol>,
    pub types: TypeHierarchy,
    pub constants: Vec<TypedObject>,
    pub predicates: Vec<Predicate>,
    pub actions: Vec<ActionSchema>,
}

impl Domain {
    pub fn predicate(&self, name: &Symbol) -> Option<&Predicate> {
        self.predicates.iter().find(|p| &p.name == name)
    }

    pub fn action(&self, name: &Symbol) -> Option<&ActionSchema> {
        self.actions.iter().find(|a| &a.name == name)
    }

    pub fn constant(&self, name: &Symbol) -> Option<&TypedObject> {
        self.constants.iter().find(|c| &c.name == name)
    }
}

/// A ground atom such as `(on blue red)`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroundAtom {
    pub predicate: Symbol,
    pub args: Vec<Symbol>,
}

impl GroundAtom {
    pub fn new(predicate: Symbol, args: Vec<Symbol>) -> Self {
        GroundAtom { predicate, args }
    }

    /// Parses `(pred a b)` (or `pred a b`) without any domain checks.
    pub fn parse(text: &str) -> Result<GroundAtom, InvalidSymbol> {
        let inner = text.trim();
        let inner = inner
            .strip_prefix('(')
            .and_then(|s| s.strip_suffix(')'))
            .unwrap_or(inner);
        let mut parts = inner.split_whitespace();
        let predicate = Symbol::new(parts.next().unwrap_or(""))?;
        let args = parts.map(Symbol::new).collect::<Result<_, _>>()?;
        Ok(GroundAtom { predicate, args })
    }
}

impl fmt::Display for GroundAtom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}", self.predicate)?;
        for a in &self.args {
            write!(f, " {a}")?;
        }
        f.write_str(")")
    }
}

impl fmt::Debug for GroundAtom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Serialize for GroundAtom {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for GroundAtom {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        GroundAtom::parse(&s).map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GroundLiteral {
    pub atom: GroundAtom,
    pub positive: bool,
}

impl GroundLiteral {
    pub fn pos(atom: GroundAtom) -> Self {
        GroundLiteral {
            atom,
            positive: true,
        }
    }

    pub fn neg(atom: GroundAtom) -> Self {
        GroundLiteral {
            atom,
            positive: false,
        }
    }
}

impl fmt::Display for GroundLiteral {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.positive {
            write!(f, "{}", self.atom)
        } else {
            write!(f, "(not {})", self.atom)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Problem {
    pub name: Symbol,
    pub domain_name: Symbol,
    pub requirements: BTreeSet<Symbol>,
    pub objects: Vec<TypedObject>,
    /// Set semantics; insertion order is kept for printing and rendering.
    pub init: IndexSet<GroundAtom>,
    /// Conjunction of ground literals.
    pub goal: Vec<GroundLiteral>,
}

impl Problem {
    pub fn object(&self, name: &Symbol) -> Option<&TypedObject> {
        self.objects.iter().find(|o| &o.name == name)
    }

    pub fn goal_pos(&self) -> impl Iterator<Item = &GroundAtom> {
        self.goal.iter().filter(|l| l.positive).map(|l| &l.atom)
    }

    pub fn goal_neg(&self) -> impl Iterator<Item = &GroundAtom> {
        self.goal.iter().filter(|l| !l.positive).map(|l| &l.atom)
    }
}

/// One instantiated step `(action arg...)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PlanStep {
    pub action: Symbol,
    pub args: Vec<Symbol>,
}

impl PlanStep {
    pub fn new(action: Symbol, args: Vec<Symbol>) -> Self {
        PlanStep { action, args }
    }
}

impl fmt::Display for PlanStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}", self.action)?;
        for a in &self.args {
            write!(f, " {a}")?;
        }
        f.write_str(")")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Plan {
    pub steps: Vec<PlanStep>,
}

impl Plan {
    pub fn new(steps: Vec<PlanStep>) -> Self {
        Plan { steps }
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }
}
