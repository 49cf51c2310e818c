#[path = "common/fixtures.rs"]
mod fixtures;

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use pddlbench_core::validator::{correctness_of, validate};
use pddlbench_core::{parse_plan, Plan};
use pddlbench_forge::obfuscate::{map_plan, RenameMap};
use pddlbench_forge::{load_dataset, obfuscate, TaskInstance};
use pddlbench_gateway::Cache;
use pddlbench_gateway::Gateway;
use pddlbench_harness::{
    align_plan, read_jsonl, run_batch, summarize_all, CorrectnessVerdict, ErrorClass, Pipeline, PromptCatalog,
    RunRecord, SolvabilityVerdict,
};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn checked_in() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

fn tree(root: &Path) -> BTreeMap<PathBuf, Vec<u8>> {
    let mut out = BTreeMap::new();
    let mut stack = vec![root.to_path_buf()];
    while let Some(dir) = stack.pop() {
        for e in std::fs::read_dir(&dir).unwrap() {
            let path = e.unwrap().path();
            if path.is_dir() {
                stack.push(path);
            } else {
                out.insert(path.strip_prefix(root).unwrap().to_path_buf(), std::fs::read(&path).unwrap());
            }
        }
    }
    out
}

fn replay() -> (Vec<TaskInstance>, Vec<RunRecord>) {
    let root = checked_in();
    let insts = load_dataset(&root.join("dataset")).unwrap();
    let gw = Gateway::replay(Cache::open(root.join("cache")).unwrap());
    let records = run_batch(&insts, &Pipeline::ALL, &gw, &PromptCatalog::default(), &fixtures::config()).unwrap();
    (insts, records)
}

#[test]
fn checked_in_fixtures_are_current() {
    let tmp = tempfile::tempdir().unwrap();
    fixtures::build(tmp.path());
    let fresh = tree(tmp.path());
    let old = tree(&checked_in());
    assert_eq!(
        fresh.keys().collect::<Vec<_>>(),
        old.keys().collect::<Vec<_>>(),
        "run `cargo run -p pddlbench-harness --example regen_fixtures`"
    );
    for (path, bytes) in &fresh {
        assert!(bytes == &old[path], "{} differs from a fresh build", path.display());
    }
}

#[test]
fn replay_matches_goldens() {
    let (_, records) = replay();
    let expected = checked_in().join("expected");
    assert_eq!(records, read_jsonl(&expected.join("records.jsonl")).unwrap());
    let tmp = tempfile::tempdir().unwrap();
    pddlbench_harness::write_jsonl(&tmp.path().join("r.jsonl"), &records).unwrap();
    assert_eq!(
        std::fs::read(tmp.path().join("r.jsonl")).unwrap(),
        std::fs::read(expected.join("records.jsonl")).unwrap()
    );
    let summary = summarize_all(&records, None);
    assert_eq!(summary.to_table(), std::fs::read_to_string(expected.join("summary.txt")).unwrap());
    assert_eq!(summary.to_csv(), std::fs::read_to_string(expected.join("summary.csv")).unwrap());
    assert!(records.iter().all(|r| r.cached && r.timings.is_none()));
}

#[test]
fn verdict_matrix() {
    use CorrectnessVerdict::*;
    use SolvabilityVerdict as S;
    let (_, records) = replay();
    let got: Vec<_> = records
        .iter()
        .map(|r| {
            (
                format!("{}/{}", r.domain, r.instance_id),
                r.pipeline,
                r.solvability_verdict,
                r.correctness_verdict,
                r.error_class,
            )
        })
        .collect();
    let f = Pipeline::Formalizer;
    let p = Pipeline::Planner;
    let want = vec![
        ("blocksworld/p001".to_string(), f, Some(S::Solvable), Correct, ErrorClass::None),
        ("blocksworld/p001".to_string(), p, None, Correct, ErrorClass::None),
        ("blocksworld/p002".to_string(), f, Some(S::ParseFailure), Incorrect, ErrorClass::Syntax),
        ("blocksworld/p002".to_string(), p, None, Incorrect, ErrorClass::Syntax),
        ("blocksworld/p003".to_string(), f, Some(S::Solvable), Incorrect, ErrorClass::Unclassified),
        ("blocksworld/p003".to_string(), p, None, Incorrect, ErrorClass::Unclassified),
        ("mystery_blocksworld/p001".to_string(), f, Some(S::Solvable), Correct, ErrorClass::None),
        ("mystery_blocksworld/p001".to_string(), p, None, Correct, ErrorClass::None),
    ];
    assert_eq!(got, want);
}

/// Independent recheck: every plan the records scored, replayed by the validator.
#[test]
fn record_verdicts_agree_with_validator() {
    let (insts, records) = replay();
    for r in &records {
        let inst = insts.iter().find(|i| i.id == r.instance_id && i.domain_tag == r.domain).unwrap();
        let Some(plan) = scored_plan(r, inst) else { continue };
        let valid = validate(&inst.gold_df, &inst.gold_pf, &plan).is_valid();
        assert_eq!(valid, r.is_correct(), "{} {}", r.instance_id, r.pipeline);
    }
}

fn scored_plan(r: &RunRecord, inst: &TaskInstance) -> Option<Plan> {
    let text = match r.pipeline {
        Pipeline::Formalizer => r.found_plan.as_ref()?,
        Pipeline::Planner => r.extracted.plan_text.as_ref()?,
    };
    Some(align_plan(&parse_plan(text).ok()?, &inst.gold_df))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    /// Renaming gold and candidate plan together leaves every verdict alone.
    #[test]
    fn scoring_ignores_symbol_names(seed in any::<u64>()) {
        let (insts, records) = replay();
        for r in &records {
            let inst = insts.iter().find(|i| i.id == r.instance_id && i.domain_tag == r.domain).unwrap();
            let Some(plan) = scored_plan(r, inst) else { continue };
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let map = RenameMap::nonsense(&mut rng, &inst.gold_df, &inst.gold_pf);
            let (d, p) = obfuscate(&inst.gold_df, &inst.gold_pf, &map).unwrap();
            let before = correctness_of(&inst.gold_df, &inst.gold_pf, &plan);
            let after = correctness_of(&d, &p, &map_plan(&plan, &map));
            prop_assert_eq!(before.is_correct(), after.is_correct());
            prop_assert_eq!(before.is_correct(), r.is_correct());
            if let (Some(a), Some(b)) = (report(&before), report(&after)) {
                prop_assert_eq!(a.verdict, b.verdict);
                prop_assert_eq!(a.failure_step, b.failure_step);
            }
        }
    }
}

fn report(c: &pddlbench_core::validator::Correctness) -> Option<&pddlbench_core::validator::ValidationReport> {
    match c {
        pddlbench_core::validator::Correctness::Incorrect { report } => Some(report),
        _ => None,
    }
}
