//! Task instances and the on-disk dataset layout
//! `<domain>/<level>/<id>/{domain.pddl, problem.pddl, dd.txt, pd.txt, meta.json}`.

use std::fs;
use std::ops::RangeInclusive;
use std::path::{Path, PathBuf};

use pddlbench_core::grounding::ground;
use pddlbench_core::planner::{solve, SearchLimits, SolveVerdict};
use pddlbench_core::validator::validate;
use pddlbench_core::{parse_domain, parse_problem, print_domain, print_problem, Domain, Plan, Problem};
use pddlbench_gateway::LlmClient;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::blocksworld::{MAX_BLOCKS, MIN_BLOCKS};
use crate::natural::{render_natural, NaturalSettings, ProblemConfig, ReviewChecklist};
use crate::obfuscate::{map_plan, obfuscate};
use crate::{
    gen_barman_config, gen_blocksworld_config, render_heavy, render_heavy_pd, render_moderate, render_moderate_pd,
    BlocksConfig, Complexity, DomainTag, ForgeError, Lexicalization, NaturalnessLevel, RenameMap,
};

pub const MANIFEST: &str = "manifest.json";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verification {
    /// Templated text is correct by construction.
    NotRequired,
    Pending,
    Verified,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NaturalProvenance {
    pub settings: NaturalSettings,
    pub replicate_index: u32,
    pub checklist: ReviewChecklist,
}

/// Everything in `meta.json`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InstanceMeta {
    pub id: String,
    pub domain: DomainTag,
    pub level: NaturalnessLevel,
    /// Absent for fixture instances.
    pub seed: Option<u64>,
    pub complexity: Complexity,
    pub verification: Verification,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub natural: Option<NaturalProvenance>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TaskInstance {
    pub id: String,
    pub domain_tag: DomainTag,
    pub gold_df: Domain,
    pub gold_pf: Problem,
    pub dd_text: String,
    pub pd_text: String,
    pub level: NaturalnessLevel,
    pub complexity: Complexity,
    pub seed: Option<u64>,
    pub verification: Verification,
    pub natural: Option<NaturalProvenance>,
}

impl TaskInstance {
    pub fn meta(&self) -> InstanceMeta {
        InstanceMeta {
            id: self.id.clone(),
            domain: self.domain_tag,
            level: self.level,
            seed: self.seed,
            complexity: self.complexity.clone(),
            verification: self.verification,
            natural: self.natural.clone(),
        }
    }

    /// Relative directory of this instance inside a dataset root.
    pub fn rel_dir(&self) -> PathBuf {
        PathBuf::from(self.domain_tag.as_str()).join(self.level.as_str()).join(&self.id)
    }

    /// Marks a natural draft as reviewed.
    pub fn sign_off(&mut self, reviewer: &str, answers: &[bool]) -> Result<(), ForgeError> {
        let prov = self
            .natural
            .as_mut()
            .ok_or_else(|| ForgeError::InvalidParameter(format!("{} is not a natural instance", self.id)))?;
        prov.checklist.sign(reviewer, answers)?;
        self.verification = if prov.checklist.verified {
            Verification::Verified
        } else {
            Verification::Pending
        };
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MysteryMap {
    /// The fixed mystery vocabulary.
    #[default]
    Fixed,
    /// Fresh nonsense per instance.
    Random,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GenSpec {
    pub domain: DomainTag,
    pub count: usize,
    pub seed: u64,
    pub levels: Vec<NaturalnessLevel>,
    #[serde(default)]
    pub mystery_map: MysteryMap,
    pub blocks: RangeInclusive<usize>,
    /// Barman `(shots, ingredients)` upper bounds; cocktails never exceed shots.
    pub barman_max: (usize, usize),
    /// Also require the planner to solve each instance under default limits.
    pub planner_check: bool,
    pub natural: Option<NaturalSettings>,
}

impl GenSpec {
    pub fn new(domain: DomainTag, count: usize, seed: u64) -> Self {
        GenSpec {
            domain,
            count,
            seed,
            levels: vec![NaturalnessLevel::HeavilyTemplated],
            mystery_map: MysteryMap::Fixed,
            blocks: MIN_BLOCKS..=MAX_BLOCKS,
            barman_max: (crate::barman::MAX_SHOTS, crate::barman::MAX_INGREDIENTS),
            planner_check: true,
            natural: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ManifestEntry {
    pub id: String,
    pub level: NaturalnessLevel,
    pub path: PathBuf,
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub spec: GenSpec,
    pub instances: Vec<ManifestEntry>,
}

/// A gold pair, the lexicon for describing it, and an optional generator-side
/// structure for natural prompts.
struct Drawn {
    domain: Domain,
    problem: Problem,
    witness: Option<Plan>,
    lex: Lexicalization,
    blocks: Option<BlocksConfig>,
    complexity: Complexity,
}

const MAX_REDRAWS: usize = 32;

fn draw(spec: &GenSpec, seed: u64, rng: &mut ChaCha8Rng) -> Result<Drawn, ForgeError> {
    match spec.domain {
        DomainTag::Blocksworld | DomainTag::MysteryBlocksworld => {
            let n = rng.random_range(spec.blocks.clone());
            let config = gen_blocksworld_config(seed, n)?;
            let (domain, problem) = (pddlbench_core::gold::blocksworld(), config.to_problem(&format!("blocksworld-s{seed}")));
            let witness = config.witness_plan();
            let complexity = config.complexity();
            if spec.domain == DomainTag::Blocksworld {
                return Ok(Drawn {
                    domain,
                    problem,
                    witness: Some(witness),
                    lex: Lexicalization::builtin(DomainTag::Blocksworld),
                    blocks: Some(config),
                    complexity,
                });
            }
            let (map, lex_of): (RenameMap, fn(&Domain) -> Lexicalization) = match spec.mystery_map {
                MysteryMap::Fixed => (RenameMap::mystery(&config.blocks)?, |_| {
                    Lexicalization::builtin(DomainTag::MysteryBlocksworld)
                }),
                MysteryMap::Random => (
                    RenameMap::nonsense(&mut ChaCha8Rng::seed_from_u64(seed), &domain, &problem),
                    Lexicalization::generic,
                ),
            };
            let (d, p) = obfuscate(&domain, &problem, &map)?;
            Ok(Drawn {
                lex: lex_of(&d),
                domain: d,
                problem: p,
                witness: Some(map_plan(&witness, &map)),
                blocks: None,
                complexity,
            })
        }
        DomainTag::Logistics => {
            let (domain, problem) = DomainTag::Logistics.gold().parse()?;
            let complexity = Complexity::from([
                ("num_objects".to_string(), problem.objects.len() as u64),
                ("num_goals".to_string(), problem.goal.len() as u64),
            ]);
            Ok(Drawn {
                domain,
                problem,
                witness: None,
                lex: Lexicalization::builtin(DomainTag::Logistics),
                blocks: None,
                complexity,
            })
        }
        DomainTag::Barman => {
            let (max_s, max_i) = spec.barman_max;
            let shots = rng.random_range(1..=max_s);
            let ingredients = rng.random_range(1..=max_i);
            let cocktails = rng.random_range(1..=shots);
            let config = gen_barman_config(seed, shots, ingredients, cocktails)?;
            Ok(Drawn {
                domain: pddlbench_core::parse_domain(pddlbench_core::gold::BARMAN_DOMAIN)?,
                problem: config.to_problem(&format!("barman-s{seed}")),
                witness: Some(config.witness_plan()),
                lex: Lexicalization::builtin(DomainTag::Barman),
                blocks: None,
                complexity: config.complexity(),
            })
        }
    }
}

/// Checks the witness plan, then optionally the planner. `Ok(false)` asks for
/// a redraw.
fn solvable(d: &Drawn, planner_check: bool) -> Result<bool, ForgeError> {
    if let Some(plan) = &d.witness {
        let report = validate(&d.domain, &d.problem, plan);
        if !report.is_valid() {
            return Err(ForgeError::Unsolvable(format!("{}: witness plan rejected: {report:?}", d.problem.name)));
        }
    }
    if !planner_check {
        return Ok(true);
    }
    let task = ground(&d.domain, &d.problem)?;
    Ok(matches!(solve(&task, &SearchLimits::default()).verdict, SolveVerdict::SolvedWithPlan { .. }))
}

fn check_spec(spec: &GenSpec, llm: Option<&dyn LlmClient>) -> Result<(), ForgeError> {
    if spec.levels.is_empty() {
        return Err(ForgeError::InvalidParameter("no naturalness levels requested".into()));
    }
    if spec.domain == DomainTag::Logistics && spec.count > 1 {
        return Err(ForgeError::InvalidParameter(
            "logistics ships a single fixture instance; count must be at most 1".into(),
        ));
    }
    let (lo, hi) = (*spec.blocks.start(), *spec.blocks.end());
    if lo < MIN_BLOCKS || hi > MAX_BLOCKS || lo > hi {
        return Err(ForgeError::InvalidParameter(format!(
            "block range {lo}..={hi} outside {MIN_BLOCKS}..={MAX_BLOCKS}"
        )));
    }
    let (s, i) = spec.barman_max;
    if !(1..=crate::barman::MAX_SHOTS).contains(&s) || !(1..=crate::barman::MAX_INGREDIENTS).contains(&i) {
        return Err(ForgeError::InvalidParameter(format!("barman bounds ({s}, {i}) out of range")));
    }
    for level in &spec.levels {
        match level {
            NaturalnessLevel::HeavilyTemplated => {}
            NaturalnessLevel::ModeratelyTemplated => {
                render_moderate(spec.domain)?;
            }
            NaturalnessLevel::Natural => {
                if spec.domain == DomainTag::Barman {
                    return Err(ForgeError::UnsupportedDomain(spec.domain.to_string()));
                }
                if spec.natural.is_none() || llm.is_none() {
                    return Err(ForgeError::InvalidParameter(
                        "natural descriptions need model settings and an LLM client".into(),
                    ));
                }
            }
        }
    }
    Ok(())
}

/// Generates `spec.count` gold pairs and describes each at every requested
/// level. All non-LLM output is a pure function of `spec`.
pub fn generate(spec: &GenSpec, llm: Option<&dyn LlmClient>) -> Result<Vec<TaskInstance>, ForgeError> {
    check_spec(spec, llm)?;
    let mut master = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut out = Vec::new();
    for k in 0..spec.count {
        let id = format!("p{:03}", k + 1);
        let fixture = spec.domain == DomainTag::Logistics;
        let (seed, drawn) = {
            let mut attempt = 0;
            loop {
                let seed: u64 = master.random();
                let d = draw(spec, seed, &mut master)?;
                if solvable(&d, spec.planner_check)? {
                    break (seed, d);
                }
                attempt += 1;
                if attempt == MAX_REDRAWS {
                    return Err(ForgeError::Unsolvable(format!("{id}: {MAX_REDRAWS} draws failed the planner check")));
                }
                log::debug!("{id}: redrawing after planner failure on seed {seed}");
            }
        };
        let heavy_dd = render_heavy(&drawn.domain, &drawn.lex)?;
        let heavy_pd = render_heavy_pd(&drawn.problem, &drawn.lex)?;
        for &level in &spec.levels {
            let mut natural = None;
            let (dd_text, pd_text, verification) = match level {
                NaturalnessLevel::HeavilyTemplated => (heavy_dd.clone(), heavy_pd.clone(), Verification::NotRequired),
                NaturalnessLevel::ModeratelyTemplated => (
                    render_moderate(spec.domain)?.to_string(),
                    render_moderate_pd(&drawn.problem, &drawn.lex)?,
                    Verification::NotRequired,
                ),
                NaturalnessLevel::Natural => {
                    let (settings, llm) = (spec.natural.as_ref().expect("checked"), llm.expect("checked"));
                    let seed_dd = render_moderate(spec.domain).map(str::to_string).unwrap_or_else(|_| heavy_dd.clone());
                    let config = match &drawn.blocks {
                        Some(b) => ProblemConfig::Blocks(b.clone()),
                        None => ProblemConfig::Described(heavy_pd.clone()),
                    };
                    let draft = render_natural(&seed_dd, &config, llm, &mut ChaCha8Rng::seed_from_u64(seed), settings)?;
                    natural = Some(NaturalProvenance {
                        settings: draft.settings,
                        replicate_index: draft.replicate_index,
                        checklist: draft.checklist,
                    });
                    (draft.dd_text, draft.pd_text, Verification::Pending)
                }
            };
            out.push(TaskInstance {
                id: id.clone(),
                domain_tag: spec.domain,
                gold_df: drawn.domain.clone(),
                gold_pf: drawn.problem.clone(),
                dd_text,
                pd_text,
                level,
                complexity: drawn.complexity.clone(),
                seed: (!fixture).then_some(seed),
                verification,
                natural,
            });
        }
    }
    Ok(out)
}

fn write(path: &Path, text: &str) -> Result<(), ForgeError> {
    fs::write(path, text).map_err(|e| ForgeError::io(path, e))
}

fn read(path: &Path) -> Result<String, ForgeError> {
    fs::read_to_string(path).map_err(|e| ForgeError::io(path, e))
}

fn bad(path: &Path, message: impl Into<String>) -> ForgeError {
    ForgeError::Dataset {
        path: path.to_path_buf(),
        message: message.into(),
    }
}

pub fn write_instance(root: &Path, inst: &TaskInstance) -> Result<PathBuf, ForgeError> {
    let dir = root.join(inst.rel_dir());
    fs::create_dir_all(&dir).map_err(|e| ForgeError::io(&dir, e))?;
    write(&dir.join("domain.pddl"), &print_domain(&inst.gold_df))?;
    write(&dir.join("problem.pddl"), &print_problem(&inst.gold_pf))?;
    write(&dir.join("dd.txt"), &inst.dd_text)?;
    write(&dir.join("pd.txt"), &inst.pd_text)?;
    let meta = serde_json::to_string_pretty(&inst.meta()).expect("meta serializes");
    write(&dir.join("meta.json"), &meta)?;
    Ok(dir)
}

pub fn read_instance(dir: &Path) -> Result<TaskInstance, ForgeError> {
    let meta_path = dir.join("meta.json");
    let meta: InstanceMeta =
        serde_json::from_str(&read(&meta_path)?).map_err(|e| bad(&meta_path, e.to_string()))?;
    let gold_df = parse_domain(&read(&dir.join("domain.pddl"))?)?;
    let gold_pf = parse_problem(&read(&dir.join("problem.pddl"))?, Some(&gold_df))?;
    let (dd_text, pd_text) = (read(&dir.join("dd.txt"))?, read(&dir.join("pd.txt"))?);
    if dd_text.trim().is_empty() || pd_text.trim().is_empty() {
        return Err(bad(dir, "empty description"));
    }
    Ok(TaskInstance {
        id: meta.id,
        domain_tag: meta.domain,
        gold_df,
        gold_pf,
        dd_text,
        pd_text,
        level: meta.level,
        complexity: meta.complexity,
        seed: meta.seed,
        verification: meta.verification,
        natural: meta.natural,
    })
}

/// Writes every instance and a manifest listing them.
pub fn write_dataset(root: &Path, spec: &GenSpec, instances: &[TaskInstance]) -> Result<Manifest, ForgeError> {
    fs::create_dir_all(root).map_err(|e| ForgeError::io(root, e))?;
    let mut entries = Vec::new();
    for inst in instances {
        write_instance(root, inst)?;
        entries.push(ManifestEntry {
            id: inst.id.clone(),
            level: inst.level,
            path: inst.rel_dir(),
            seed: inst.seed,
        });
    }
    let manifest = Manifest {
        spec: spec.clone(),
        instances: entries,
    };
    let text = serde_json::to_string_pretty(&manifest).expect("manifest serializes");
    write(&root.join(MANIFEST), &text)?;
    Ok(manifest)
}

fn subdirs(dir: &Path) -> Result<Vec<PathBuf>, ForgeError> {
    let mut out: Vec<PathBuf> = fs::read_dir(dir)
        .map_err(|e| ForgeError::io(dir, e))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.is_dir())
        .collect();
    out.sort();
    Ok(out)
}

/// Loads instances under `root`, ordered by domain, level and id. With a
/// manifest only its entries are read.
pub fn load_dataset(root: &Path) -> Result<Vec<TaskInstance>, ForgeError> {
    let manifest_path = root.join(MANIFEST);
    let dirs: Vec<PathBuf> = if manifest_path.is_file() {
        let m: Manifest =
            serde_json::from_str(&read(&manifest_path)?).map_err(|e| bad(&manifest_path, e.to_string()))?;
        m.instances.into_iter().map(|e| root.join(e.path)).collect()
    } else {
        let mut dirs = Vec::new();
        for domain in subdirs(root)? {
            for level in subdirs(&domain)? {
                dirs.extend(subdirs(&level)?);
            }
        }
        dirs
    };
    let mut out = dirs.iter().map(|d| read_instance(d)).collect::<Result<Vec<_>, _>>()?;
    out.sort_by(|a, b| (a.domain_tag.as_str(), a.level.as_str(), &a.id).cmp(&(b.domain_tag.as_str(), b.level.as_str(), &b.id)));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn levels_share_the_gold_pair() {
        let mut spec = GenSpec::new(DomainTag::Blocksworld, 3, 7);
        spec.levels = vec![NaturalnessLevel::HeavilyTemplated, NaturalnessLevel::ModeratelyTemplated];
        spec.blocks = 2..=6;
        let insts = generate(&spec, None).unwrap();
        assert_eq!(insts.len(), 6);
        assert_eq!(insts[0].gold_pf, insts[1].gold_pf);
        assert_ne!(insts[0].pd_text, insts[1].pd_text);
        assert_eq!(insts[0].dd_text, insts[2].dd_text);
        assert!(insts.iter().all(|i| i.verification == Verification::NotRequired));
    }

    #[test]
    fn spec_rejections() {
        let mut s = GenSpec::new(DomainTag::Logistics, 2, 0);
        assert!(matches!(generate(&s, None), Err(ForgeError::InvalidParameter(_))));
        s.count = 1;
        assert_eq!(generate(&s, None).unwrap()[0].seed, None);
        let mut s = GenSpec::new(DomainTag::Barman, 1, 0);
        s.levels = vec![NaturalnessLevel::ModeratelyTemplated];
        assert!(matches!(generate(&s, None), Err(ForgeError::UnsupportedDomain(_))));
        let mut s = GenSpec::new(DomainTag::Blocksworld, 1, 0);
        s.levels = vec![NaturalnessLevel::Natural];
        assert!(matches!(generate(&s, None), Err(ForgeError::InvalidParameter(_))));
        let mut s = GenSpec::new(DomainTag::Blocksworld, 1, 0);
        s.blocks = 1..=4;
        assert!(matches!(generate(&s, None), Err(ForgeError::InvalidParameter(_))));
    }
}
