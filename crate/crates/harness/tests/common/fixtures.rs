//! Builds the replay fixture set: a small dataset, a response cache recorded
//! from scripted model outputs, and the golden run records and summaries.

use std::collections::HashMap;
use std::path::Path;

use pddlbench_core::grounding::ground;
use pddlbench_core::planner::{solve, SearchLimits};
use pddlbench_core::validator::validate;
use pddlbench_core::{gold, print_domain, print_plan, print_problem, Domain, Plan, Problem};

use pddlbench_forge::dataset::{write_instance, Verification};
use pddlbench_forge::{
    gen_blocksworld_config, render_heavy, render_heavy_pd, DomainTag, Lexicalization, NaturalnessLevel,
    TaskInstance,
};
use pddlbench_gateway::{Backend, Cache, Gateway, GatewayError, LlmRequest, Mode, Usage};
use pddlbench_harness::{run_batch, summarize_all, write_jsonl, Pipeline, PromptCatalog, RunConfig};

pub const MODEL: &str = "fixture-model";

pub fn config() -> RunConfig {
    let mut c = RunConfig::new(MODEL);
    c.record_timings = false;
    c.parallelism = 2;
    c
}

struct Scripted(HashMap<String, String>);

impl Backend for Scripted {
    fn call(&self, req: &LlmRequest) -> Result<(String, Usage), GatewayError> {
        let prompt = &req.messages.last().unwrap().content;
        let text = self.0.get(prompt).cloned().unwrap_or_default();
        let usage = Usage {
            input_tokens: prompt.split_whitespace().count() as u64,
            output_tokens: text.split_whitespace().count() as u64,
        };
        Ok((text, usage))
    }
}

fn instance(id: &str, tag: DomainTag, d: Domain, p: Problem, complexity: pddlbench_forge::Complexity) -> TaskInstance {
    let lex = Lexicalization::builtin(tag);
    TaskInstance {
        id: id.to_string(),
        domain_tag: tag,
        dd_text: render_heavy(&d, &lex).unwrap(),
        pd_text: render_heavy_pd(&p, &lex).unwrap(),
        gold_df: d,
        gold_pf: p,
        level: NaturalnessLevel::HeavilyTemplated,
        complexity,
        seed: None,
        verification: Verification::NotRequired,
        natural: None,
    }
}

fn without_clear(d: &Domain, p: &Problem) -> (Domain, Problem) {
    let mut d = d.clone();
    d.predicates.retain(|x| x.name.as_str() != "clear");
    for a in &mut d.actions {
        for lits in [&mut a.precondition, &mut a.add_effects, &mut a.del_effects] {
            lits.retain(|l| l.predicate.as_str() != "clear");
        }
    }
    let mut p = p.clone();
    p.init.retain(|a| a.predicate.as_str() != "clear");
    p.goal.retain(|g| g.atom.predicate.as_str() != "clear");
    (d, p)
}

fn shout(plan: &Plan) -> String {
    print_plan(plan)
        .to_uppercase()
        .replace("(PICKUP ", "(PICK-UP ")
        .replace("(PUTDOWN ", "(PUT-DOWN ")
}

/// The four instances and what the scripted model answers for each prompt.
fn script() -> (Vec<TaskInstance>, HashMap<String, String>) {
    let bw = gold::blocksworld();
    let p99 = gold::blocksworld_p99();
    let p99_cfg = pddlbench_forge::BlocksConfig::from_problem(&p99).unwrap();
    let p99_plan = solve(&ground(&bw, &p99).unwrap(), &SearchLimits::default()).plan().cloned().unwrap();
    let typo_cfg = gen_blocksworld_config(2, 3).unwrap();
    // first seed whose clear-free model admits a plan the gold model rejects
    let (clear_cfg, clear_pair) = (0..)
        .map(|s| gen_blocksworld_config(s, 3).unwrap())
        .find_map(|c| {
            let p = c.to_problem("missing-clear");
            let (d2, p2) = without_clear(&bw, &p);
            let plan = solve(&ground(&d2, &p2).unwrap(), &SearchLimits::default()).plan().cloned()?;
            (!validate(&bw, &p, &plan).is_valid()).then_some((c, (d2, p2)))
        })
        .unwrap();
    let (md, mp) = DomainTag::MysteryBlocksworld.gold().parse().unwrap();

    let insts = vec![
        instance("p001", DomainTag::Blocksworld, bw.clone(), p99.clone(), p99_cfg.complexity()),
        instance("p002", DomainTag::Blocksworld, bw.clone(), typo_cfg.to_problem("typo"), typo_cfg.complexity()),
        instance("p003", DomainTag::Blocksworld, bw.clone(), clear_cfg.to_problem("missing-clear"), clear_cfg.complexity()),
        instance(
            "p001",
            DomainTag::MysteryBlocksworld,
            md.clone(),
            mp.clone(),
            pddlbench_forge::Complexity::from([("num_blocks".to_string(), mp.objects.len() as u64)]),
        ),
    ];

    let catalog = PromptCatalog::default();
    let prompt = |i: &TaskInstance, p: Pipeline| catalog.render(p, i.domain_tag, &i.gold_df, &i.dd_text, &i.pd_text).unwrap();
    let mut answers = HashMap::new();
    let mut say = |i: &TaskInstance, p: Pipeline, text: String| {
        answers.insert(prompt(i, p), text);
    };

    // gold echo, as the requested JSON object
    let echo = serde_json::json!({ "domain_file": gold::BLOCKSWORLD_DOMAIN, "problem_file": gold::BLOCKSWORLD_P99 });
    say(&insts[0], Pipeline::Formalizer, serde_json::to_string_pretty(&echo).unwrap());
    say(&insts[0], Pipeline::Planner, shout(&p99_plan));

    // misspelled keyword in fenced blocks
    let typo_df = print_domain(&bw).replacen(":precondition", ":preconditions", 1);
    let typo_pf = print_problem(&insts[1].gold_pf);
    say(&insts[1], Pipeline::Formalizer, format!("Domain:\n```pddl\n{typo_df}```\nProblem:\n```pddl\n{typo_pf}```\n"));
    say(&insts[1], Pipeline::Planner, "I would start by moving the top block somewhere safe and then rebuild the tower.".into());

    // bookkeeping left out, as bare forms in prose
    let (d2, p2) = clear_pair;
    say(
        &insts[2],
        Pipeline::Formalizer,
        format!("Here is the domain:\n{}\nand the problem:\n{}\n", print_domain(&d2), print_problem(&p2)),
    );
    let mut short = clear_cfg.witness_plan();
    short.steps.pop();
    let steps: Vec<String> = print_plan(&short).lines().map(str::to_string).collect();
    say(&insts[2], Pipeline::Planner, serde_json::json!({ "plan": steps }).to_string());

    // mystery gold echo after some reasoning, and a planner answer in menu style
    say(
        &insts[3],
        Pipeline::Formalizer,
        format!(
            "<think>The names are odd but the structure is familiar.</think>\n```\n{}\n```\n```\n{}\n```",
            gold::MYSTERY_DOMAIN.trim(),
            gold::MYSTERY_P01.trim()
        ),
    );
    let mplan = solve(&ground(&md, &mp).unwrap(), &SearchLimits::default()).plan().cloned().unwrap();
    say(&insts[3], Pipeline::Planner, print_plan(&mplan).to_uppercase());

    (insts, answers)
}

/// Writes `dataset/`, `cache/` and `expected/` under `root`.
pub fn build(root: &Path) {
    let (insts, answers) = script();
    for i in &insts {
        write_instance(&root.join("dataset"), i).unwrap();
    }
    let cache = Cache::open(root.join("cache")).unwrap();
    let recorder = Gateway::new(Mode::Record, Some(cache), Some(Box::new(Scripted(answers))), 2).unwrap();
    let loaded = pddlbench_forge::load_dataset(&root.join("dataset")).unwrap();
    run_batch(&loaded, &Pipeline::ALL, &recorder, &PromptCatalog::default(), &config()).unwrap();

    let replay = Gateway::replay(Cache::open(root.join("cache")).unwrap());
    let records = run_batch(&loaded, &Pipeline::ALL, &replay, &PromptCatalog::default(), &config()).unwrap();
    let expected = root.join("expected");
    write_jsonl(&expected.join("records.jsonl"), &records).unwrap();
    let summary = summarize_all(&records, None);
    std::fs::write(expected.join("summary.txt"), summary.to_table()).unwrap();
    std::fs::write(expected.join("summary.csv"), summary.to_csv()).unwrap();
}
