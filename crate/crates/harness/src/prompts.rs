//! Prompt templates. A catalog maps each pipeline, optionally per domain, to a
//! text template with `{domain_description}` and `{problem_description}` slots.
//! Generic planner templates may also use `{action_menu}` and `{example_plan}`.

use std::collections::BTreeMap;
use std::path::Path;

use pddlbench_core::Domain;
use pddlbench_forge::DomainTag;

use crate::{HarnessError, Pipeline};

pub const DOMAIN_SLOT: &str = "{domain_description}";
pub const PROBLEM_SLOT: &str = "{problem_description}";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PromptCatalog {
    /// Keyed by file stem: `planner`, `planner-blocksworld`, `formalizer`, ...
    templates: BTreeMap<String, String>,
}

fn key(pipeline: Pipeline, domain: Option<DomainTag>) -> String {
    match domain {
        Some(d) => format!("{}-{}", pipeline.as_str(), d.as_str()),
        None => pipeline.as_str().to_string(),
    }
}

impl Default for PromptCatalog {
    fn default() -> Self {
        let templates = [
            ("formalizer", include_str!("../assets/prompts/formalizer.txt")),
            ("planner", include_str!("../assets/prompts/planner.txt")),
            ("planner-blocksworld", include_str!("../assets/prompts/planner-blocksworld.txt")),
            ("planner-mystery_blocksworld", include_str!("../assets/prompts/planner-mystery_blocksworld.txt")),
        ];
        PromptCatalog {
            templates: templates.into_iter().map(|(k, v)| (k.to_string(), v.to_string())).collect(),
        }
    }
}

impl PromptCatalog {
    pub fn empty() -> Self {
        PromptCatalog {
            templates: BTreeMap::new(),
        }
    }

    /// Adds or replaces a template; both description slots are required.
    pub fn insert(&mut self, name: &str, template: &str) -> Result<(), HarnessError> {
        for slot in [DOMAIN_SLOT, PROBLEM_SLOT] {
            if !template.contains(slot) {
                return Err(HarnessError::Template(format!("template `{name}` lacks the {slot} slot")));
            }
        }
        self.templates.insert(name.to_string(), template.to_string());
        Ok(())
    }

    /// The built-in templates overlaid with every `*.txt` file in `dir`.
    pub fn load_dir(dir: &Path) -> Result<Self, HarnessError> {
        let mut catalog = PromptCatalog::default();
        let entries = std::fs::read_dir(dir).map_err(|e| HarnessError::io(dir, e))?;
        let mut paths: Vec<_> = entries.filter_map(|e| e.ok().map(|e| e.path())).collect();
        paths.sort();
        for path in paths.iter().filter(|p| p.extension().is_some_and(|e| e == "txt")) {
            let text = std::fs::read_to_string(path).map_err(|e| HarnessError::io(path, e))?;
            let stem = path.file_stem().unwrap().to_string_lossy().to_string();
            catalog.insert(&stem, &text)?;
        }
        Ok(catalog)
    }

    pub fn template(&self, pipeline: Pipeline, domain: DomainTag) -> Result<&str, HarnessError> {
        self.templates
            .get(&key(pipeline, Some(domain)))
            .or_else(|| self.templates.get(&key(pipeline, None)))
            .map(String::as_str)
            .ok_or_else(|| HarnessError::Template(format!("no {} template for {domain}", pipeline.as_str())))
    }

    /// Fills the template for `pipeline` on `domain`. `gold` supplies the
    /// action menu for generic planner templates.
    pub fn render(&self, pipeline: Pipeline, domain: DomainTag, gold: &Domain, dd: &str, pd: &str) -> Result<String, HarnessError> {
        let t = self.template(pipeline, domain)?;
        let mut out = t.replace(DOMAIN_SLOT, dd.trim_end()).replace(PROBLEM_SLOT, pd.trim_end());
        if out.contains("{action_menu}") {
            out = out.replace("{action_menu}", &action_menu(gold));
        }
        if out.contains("{example_plan}") {
            out = out.replace("{example_plan}", &example_plan(gold));
        }
        Ok(out)
    }
}

/// `(LOAD-TRUCK package truck location)` style lines.
pub fn action_menu(d: &Domain) -> String {
    d.actions
        .iter()
        .map(|a| {
            let params: Vec<&str> = a
                .params
                .iter()
                .map(|p| if p.ty.as_str() == "object" { p.name.as_str() } else { p.ty.as_str() })
                .collect();
            if params.is_empty() {
                format!("({})", a.name.as_str().to_uppercase())
            } else {
                format!("({} {})", a.name.as_str().to_uppercase(), params.join(" "))
            }
        })
        .collect::<Vec<_>>()
        .join("\n")
}

fn example_plan(d: &Domain) -> String {
    d.actions
        .iter()
        .take(2)
        .map(|a| {
            let args: Vec<String> = (0..a.arity()).map(|i| ((b'A' + i as u8) as char).to_string()).collect();
            std::iter::once(a.name.as_str().to_uppercase()).chain(args).collect::<Vec<_>>().join(" ")
        })
        .map(|s| format!("({s})"))
        .collect::<Vec<_>>()
        .join("\n")
}

#[cfg(test)]
mod tests {
    use super::*;
    use pddlbench_core::gold;

    #[test]
    fn blocksworld_planner_prompt() {
        let c = PromptCatalog::default();
        let p = c.render(Pipeline::Planner, DomainTag::Blocksworld, &gold::blocksworld(), "DD\n", "PD").unwrap();
        assert!(p.starts_with("Here is a game involving a table with blocks on it.\n\nDD\n\nPD\n\nWrite the plan"));
        assert!(p.contains("(PICK-UP block): pick up a block from the table"));
        assert!(!p.contains('{'));
    }

    #[test]
    fn generic_planner_prompt_lists_actions() {
        let (d, _) = DomainTag::Logistics.gold().parse().unwrap();
        let p = PromptCatalog::default().render(Pipeline::Planner, DomainTag::Logistics, &d, "DD", "PD").unwrap();
        assert!(p.contains("(LOAD-TRUCK "), "{p}");
        assert!(p.contains("(FLY-AIRPLANE "), "{p}");
        assert!(!p.contains("{action_menu}") && !p.contains("{example_plan}"));
    }

    #[test]
    fn formalizer_falls_back_to_generic() {
        let c = PromptCatalog::default();
        let p = c.render(Pipeline::Formalizer, DomainTag::Barman, &gold::blocksworld(), "DD", "PD").unwrap();
        assert!(p.contains("DD\n\nPD") && p.contains("domain_file"));
    }

    #[test]
    fn templates_need_both_slots() {
        let mut c = PromptCatalog::empty();
        assert!(c.insert("planner", "only {domain_description}").is_err());
        assert!(c.template(Pipeline::Planner, DomainTag::Barman).is_err());
        c.insert("planner", "{domain_description} {problem_description}").unwrap();
        assert_eq!(c.template(Pipeline::Planner, DomainTag::Barman).unwrap(), "{domain_description} {problem_description}");
    }

    #[test]
    fn directory_overrides() {
        let dir = tempfile::tempdir().unwrap();
        std::fs::write(dir.path().join("planner-barman.txt"), "B {domain_description} {problem_description}").unwrap();
        let c = PromptCatalog::load_dir(dir.path()).unwrap();
        assert!(c.template(Pipeline::Planner, DomainTag::Barman).unwrap().starts_with("B "));
        assert!(c.template(Pipeline::Planner, DomainTag::Blocksworld).unwrap().starts_with("Here is a game"));
    }
}
