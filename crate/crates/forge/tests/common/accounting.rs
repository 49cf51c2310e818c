//! Substring accounting for the templated renderers. The expected phrase of
//! every literal is computed here straight from the lexicon TOML, then each
//! sentence is split back into its facts and compared as a multiset.

use pddlbench_core::pddl::{Literal, Term};
use pddlbench_core::{Domain, Problem};
use pddlbench_forge::DomainTag;
use toml::Value;

pub fn lex_value(tag: DomainTag) -> Value {
    let text = match tag {
        DomainTag::Blocksworld => include_str!("../../assets/lex/blocksworld.toml"),
        DomainTag::MysteryBlocksworld => include_str!("../../assets/lex/mystery_blocksworld.toml"),
        DomainTag::Logistics => include_str!("../../assets/lex/logistics.toml"),
        DomainTag::Barman => include_str!("../../assets/lex/barman.toml"),
    };
    Value::Table(toml::from_str(text).unwrap())
}

fn get<'a>(v: &'a Value, path: &[&str]) -> Option<&'a Value> {
    path.iter().try_fold(v, |v, k| v.get(*k))
}

fn fill(t: &str, args: &[String]) -> String {
    args.iter().enumerate().fold(t.to_string(), |t, (i, a)| t.replace(&format!("{{{i}}}"), a))
}

fn positive_text(l: &Literal) -> String {
    let args: Vec<String> = l
        .args
        .iter()
        .map(|t| match t {
            Term::Var(v) => format!("?{v}"),
            Term::Const(c) => c.to_string(),
        })
        .collect();
    if args.is_empty() {
        format!("({})", l.predicate)
    } else {
        format!("({} {})", l.predicate, args.join(" "))
    }
}

/// `Some(table)` uses the TOML; `None` means the generic symbol-name lexicon.
fn dd_phrase(table: Option<&Value>, d: &Domain, action: &str, l: &Literal) -> String {
    let schema = d.actions.iter().find(|a| a.name.as_str() == action).unwrap();
    let Some(v) = table else {
        let mut words = vec![l.predicate.to_string()];
        words.extend(l.args.iter().map(|t| match t {
            Term::Var(x) | Term::Const(x) => x.to_string(),
        }));
        return words.join(" ");
    };
    let phrase = if let Some(p) = get(v, &["actions", action, "phrases", &positive_text(l)]) {
        p.as_str().unwrap().to_string()
    } else {
        let params = get(v, &["actions", action, "params"]).unwrap().as_array().unwrap();
        let args: Vec<String> = l
            .args
            .iter()
            .map(|t| match t {
                Term::Var(x) => {
                    let i = schema.params.iter().position(|p| p.name == *x).unwrap();
                    params[i].as_str().unwrap().to_string()
                }
                Term::Const(c) => c.to_string(),
            })
            .collect();
        fill(get(v, &["dd", "predicates", l.predicate.as_str()]).unwrap().as_str().unwrap(), &args)
    };
    if get(v, &["dd", "capitalize"]).and_then(Value::as_bool) == Some(true) {
        let mut c = phrase.chars();
        c.next().unwrap().to_uppercase().chain(c).collect()
    } else {
        phrase
    }
}

fn sorted(mut v: Vec<String>) -> Vec<String> {
    v.sort();
    v
}

/// Splits `a, b, and c` / `a, b and c` / `a and b` back into items.
fn split_list(s: &str) -> Vec<String> {
    let mut parts: Vec<String> = s.split(", ").map(str::to_string).collect();
    let last = parts.pop().unwrap();
    let last = last.strip_prefix("and ").unwrap_or(&last).to_string();
    match last.rsplit_once(" and ") {
        Some((a, b)) => {
            parts.push(a.to_string());
            parts.push(b.to_string());
        }
        None => parts.push(last),
    }
    parts
}

pub fn check_dd(table: Option<&Value>, d: &Domain, text: &str) {
    let lines: Vec<&str> = text.lines().map(str::trim).collect();
    let start = lines.iter().position(|l| l.starts_with("I have the following restrictions")).unwrap() + 1;
    let mut sentences = lines[start..].iter().filter(|l| !l.is_empty());
    for a in &d.actions {
        for (kind, lits) in [("pre", &a.precondition), ("add", &a.add_effects), ("del", &a.del_effects)] {
            if lits.is_empty() {
                continue;
            }
            let s = sentences.next().unwrap_or_else(|| panic!("{}: missing {kind} sentence", a.name));
            let facts = s.split_once(':').unwrap().1.trim_end_matches('.');
            let facts = facts.trim_start_matches([',', ' ']);
            let want: Vec<String> = lits.iter().map(|l| dd_phrase(table, d, a.name.as_str(), l)).collect();
            let got: Vec<String> = facts.split(", ").map(str::to_string).collect();
            assert_eq!(sorted(got), sorted(want), "{} {kind}: {s}", a.name);
        }
    }
    assert!(sentences.next().is_none(), "extra sentences");
}

pub fn check_pd(table: Option<(&Value, &str)>, p: &Problem, text: &str) {
    let (init_prefix, goal_prefix, phrase): (&str, &str, Box<dyn Fn(&pddlbench_core::GroundAtom) -> String>) =
        match table {
            None => (
                "As initial conditions I have that, ",
                "My goal is to have that ",
                Box::new(|a| a.to_string().trim_matches(['(', ')']).to_string()),
            ),
            Some((v, section)) => {
                let frame = |k: &str| get(v, &["pd", k]).unwrap().as_str().unwrap().split("{facts}").next().unwrap();
                let object = get(v, &["pd", "object"]).unwrap().as_str().unwrap().to_string();
                (
                    frame("init_frame"),
                    frame("goal_frame"),
                    Box::new(move |a| {
                        let t = get(v, &[section, "predicates", a.predicate.as_str()])
                            .or_else(|| get(v, &["pd", "predicates", a.predicate.as_str()]))
                            .unwrap()
                            .as_str()
                            .unwrap();
                        let args: Vec<String> = a.args.iter().map(|x| object.replace("{}", x.as_str())).collect();
                        fill(t, &args)
                    }),
                )
            }
        };
    let line = |prefix: &str| -> Vec<String> {
        let l = text.lines().find(|l| l.starts_with(prefix)).unwrap_or_else(|| panic!("no `{prefix}` in {text}"));
        split_list(l[prefix.len()..].trim_end_matches('.'))
    };
    let init: Vec<String> = p.init.iter().map(&phrase).collect();
    assert_eq!(sorted(line(init_prefix)), sorted(init));
    let goal: Vec<String> = p
        .goal
        .iter()
        .map(|g| {
            let s = phrase(&g.atom);
            if g.positive { s } else { format!("it is not the case that {s}") }
        })
        .collect();
    if goal.is_empty() {
        assert_eq!(line(goal_prefix), vec!["nothing".to_string()]);
    } else {
        assert_eq!(sorted(line(goal_prefix)), sorted(goal));
    }
}
