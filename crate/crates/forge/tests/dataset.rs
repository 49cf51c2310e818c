use pddlbench_core::planner::{solvability_check, SearchLimits, Solvability};
use pddlbench_core::{gold, print_domain, print_problem};
use pddlbench_forge::dataset::{MysteryMap, Verification};
use pddlbench_forge::{generate, load_dataset, write_dataset, DomainTag, GenSpec, NaturalSettings, NaturalnessLevel};
use pddlbench_gateway::{GatewayError, LlmClient, LlmRequest, LlmResponse, Usage};

struct Canned;

impl LlmClient for Canned {
    fn complete(&self, req: &LlmRequest, replicate_index: u32) -> Result<LlmResponse, GatewayError> {
        Ok(LlmResponse {
            text: format!("draft {replicate_index} of {} chars", req.messages[1].content.len()),
            usage: Usage::default(),
            cached: false,
        })
    }
}

fn assert_solvable(insts: &[pddlbench_forge::TaskInstance]) {
    for i in insts {
        let r = solvability_check(&print_domain(&i.gold_df), &print_problem(&i.gold_pf), &SearchLimits::default());
        assert!(matches!(r.verdict, Solvability::Solvable { .. }), "{} {:?}", i.id, r.verdict);
        assert!(!i.dd_text.trim().is_empty() && !i.pd_text.trim().is_empty());
    }
}

#[test]
fn every_generated_blocksworld_instance_is_solvable() {
    let insts = generate(&GenSpec::new(DomainTag::Blocksworld, 25, 11), None).unwrap();
    assert_eq!(insts.len(), 25);
    assert!(insts.iter().any(|i| i.complexity["num_blocks"] >= 10));
    assert_solvable(&insts);
}

#[test]
fn every_generated_barman_instance_is_solvable() {
    let mut spec = GenSpec::new(DomainTag::Barman, 10, 5);
    spec.barman_max = (2, 2);
    let insts = generate(&spec, None).unwrap();
    assert!(insts.iter().all(|i| i.complexity["cocktails"] <= 2));
    assert_solvable(&insts);
}

#[test]
fn generation_is_a_function_of_the_seed() {
    let mut spec = GenSpec::new(DomainTag::MysteryBlocksworld, 5, 3);
    spec.mystery_map = MysteryMap::Random;
    assert_eq!(generate(&spec, None).unwrap(), generate(&spec, None).unwrap());
    spec.seed = 4;
    let other = generate(&spec, None).unwrap();
    spec.seed = 3;
    assert_ne!(generate(&spec, None).unwrap(), other);
}

#[test]
fn fixed_mystery_map_gives_the_mystery_domain() {
    let insts = generate(&GenSpec::new(DomainTag::MysteryBlocksworld, 2, 9), None).unwrap();
    let mystery = pddlbench_core::parse_domain(gold::MYSTERY_DOMAIN).unwrap();
    for i in &insts {
        assert_eq!(i.gold_df, mystery);
        assert!(i.dd_text.contains("To perform Attack action"));
        assert!(i.pd_text.contains("object a"));
    }
    assert_solvable(&insts);
}

#[test]
fn write_then_load_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let mut spec = GenSpec::new(DomainTag::Blocksworld, 3, 21);
    spec.levels = vec![NaturalnessLevel::HeavilyTemplated, NaturalnessLevel::ModeratelyTemplated];
    let insts = generate(&spec, None).unwrap();
    let manifest = write_dataset(dir.path(), &spec, &insts).unwrap();
    assert_eq!(manifest.instances.len(), 6);
    assert!(dir.path().join("blocksworld/moderate/p002/pd.txt").is_file());
    let meta: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("blocksworld/heavy/p001/meta.json")).unwrap())
            .unwrap();
    assert_eq!(meta["seed"], insts[0].seed.unwrap());
    assert_eq!(meta["verification"], "not_required");
    let mut loaded = load_dataset(dir.path()).unwrap();
    let mut want = insts.clone();
    let key = |i: &pddlbench_forge::TaskInstance| (i.level.as_str(), i.id.clone());
    loaded.sort_by_key(key);
    want.sort_by_key(key);
    assert_eq!(loaded, want);

    std::fs::remove_file(dir.path().join("manifest.json")).unwrap();
    assert_eq!(load_dataset(dir.path()).unwrap().len(), 6);
}

#[test]
fn natural_drafts_wait_for_review() {
    let dir = tempfile::tempdir().unwrap();
    let mut spec = GenSpec::new(DomainTag::Blocksworld, 2, 1);
    spec.levels = vec![NaturalnessLevel::Natural];
    spec.natural = Some(NaturalSettings::new("test-model"));
    let mut insts = generate(&spec, Some(&Canned)).unwrap();
    assert!(insts.iter().all(|i| i.verification == Verification::Pending));
    assert!(insts[0].dd_text.starts_with("draft "));
    assert_ne!(insts[0].natural.as_ref().unwrap().replicate_index, insts[1].natural.as_ref().unwrap().replicate_index);

    insts[0].sign_off("reviewer", &[true; 4]).unwrap();
    insts[1].sign_off("reviewer", &[true, false, true, true]).unwrap();
    write_dataset(dir.path(), &spec, &insts).unwrap();
    let loaded = load_dataset(dir.path()).unwrap();
    assert_eq!(loaded[0].verification, Verification::Verified);
    assert_eq!(loaded[1].verification, Verification::Pending);
    assert_eq!(loaded[0].natural.as_ref().unwrap().settings.temperature, 1.0);
}
