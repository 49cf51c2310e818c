use std::time::Instant;

use pddlbench_core::gold::{self, PAIRS};
use pddlbench_core::pddl::*;

#[test]
fn gold_pairs_parse_with_declared_counts() {
    let start = Instant::now();
    let expect = [
        ("blocksworld", 5, 4, 4, 7, 4),
        ("mystery_blocksworld", 5, 4, 4, 7, 2),
        ("logistics", 9, 6, 15, 30, 4),
        ("barman", 15, 12, 0, 0, 0),
    ];
    for (pair, (tag, preds, actions, objs, init, goal)) in PAIRS.iter().zip(expect) {
        assert_eq!(pair.tag, tag);
        let (d, p) = pair.parse().unwrap();
        assert_eq!(d.predicates.len(), preds, "{tag} predicates");
        assert_eq!(d.actions.len(), actions, "{tag} actions");
        if objs > 0 {
            assert_eq!((p.objects.len(), p.init.len(), p.goal.len()), (objs, init, goal), "{tag}");
        }
    }
    assert!(start.elapsed().as_secs_f64() < 1.0);
}

#[test]
fn p99_shape() {
    let p = gold::blocksworld_p99();
    let names: Vec<&str> = p.objects.iter().map(|o| o.name.as_str()).collect();
    assert_eq!(names, ["red", "blue", "green", "yellow"]);
    assert!(p.objects.iter().all(|o| o.ty.as_str() == "object"));
    assert!(p.init.contains(&GroundAtom::parse("(on blue red)").unwrap()));
}

#[test]
fn barman_type_tree_has_seven_leaves() {
    let d = parse_domain(gold::BARMAN_DOMAIN).unwrap();
    assert_eq!(d.types.leaves().len(), 7);
    assert!(d.types.is_subtype(&Symbol::new("shot").unwrap(), &Symbol::new("container").unwrap()));
}

#[test]
fn tokens_of_blocksworld_reparse_to_four_actions() {
    let toks = tokenize(gold::BLOCKSWORLD_DOMAIN);
    assert!(toks.iter().any(|t| t.text() == "pickup"));
    let d = parse_domain(gold::BLOCKSWORLD_DOMAIN).unwrap();
    assert_eq!(d.actions.len(), 4);
}

#[test]
fn case_insensitive() {
    for pair in PAIRS {
        let d = parse_domain(pair.domain).unwrap();
        let up = parse_domain(&pair.domain.to_uppercase()).unwrap();
        assert_eq!(d, up, "{}", pair.tag);
        assert_eq!(
            parse_problem(pair.problem, Some(&d)).unwrap(),
            parse_problem(&pair.problem.to_uppercase(), Some(&d)).unwrap()
        );
    }
}

#[test]
fn comments_are_transparent() {
    for pair in PAIRS {
        let d = parse_domain(pair.domain).unwrap();
        // put a comment line in front of every top-level section
        let noisy = pair.domain.replace("\n(", "\n; noise\n(").replace("\n  (:", "\n; noise ( ) \n  (:");
        assert_eq!(parse_domain(&noisy).unwrap(), d, "{}", pair.tag);
        let noisy = format!("; noise\n{}\n; noise\n", pair.problem);
        assert_eq!(parse_problem(&noisy, None).unwrap(), parse_problem(pair.problem, None).unwrap());
    }
}

#[test]
fn print_parse_round_trip_and_idempotence() {
    for pair in PAIRS {
        let (d, p) = pair.parse().unwrap();
        let dt = print_domain(&d);
        let pt = print_problem(&p);
        assert_eq!(parse_domain(&dt).unwrap(), d, "{}", pair.tag);
        assert_eq!(parse_problem(&pt, Some(&d)).unwrap(), p, "{}", pair.tag);
        assert_eq!(print_domain(&parse_domain(&dt).unwrap()), dt);
        assert_eq!(print_problem(&parse_problem(&pt, None).unwrap()), pt);
    }
}

#[test]
fn logistics_repeats_parameter_name_in_predicate() {
    let d = parse_domain(gold::LOGISTICS_DOMAIN).unwrap();
    let inp = d.predicate(&Symbol::new("in").unwrap()).unwrap();
    assert_eq!(inp.arity(), 2);
}
