mod common;

use std::collections::{BTreeSet, HashSet};

use proptest::prelude::*;

use refquest::belief::PropertyDistribution;
use refquest::dialogue::{run_episode, AgentPolicy, Limits};
use refquest::dnet::{
    build_network, select_question, wh_entropy, yn_expected_entropy, FrequencyTable, QuestionKind,
    UtilityPolicy,
};
use refquest::minset::{compute_min_set, pairwise_clauses, solve_min_hitting_set};
use refquest::worlds::{generate_random_world, spacecraft_world, RandomWorldSpec};
use refquest::{Belief, PropertyId, QuestionCatalog, World};

use common::{brute_force_min_size, separates, world_from_rows};

fn small_rows() -> impl Strategy<Value = (Vec<Vec<usize>>, usize, usize)> {
    (1usize..=5, 2usize..=3).prop_flat_map(|(props, vals)| {
        (
            prop::collection::vec(prop::collection::vec(0..vals, props), 1..=6),
            Just(props),
            Just(vals),
        )
    })
}

fn random_world(seed: u64, high: bool) -> World {
    let spec = if high {
        RandomWorldSpec::high_variance(seed)
    } else {
        RandomWorldSpec::low_variance(seed)
    };
    generate_random_world(&spec).unwrap()
}

fn agents() -> Vec<AgentPolicy> {
    vec![
        AgentPolicy::Model(UtilityPolicy::Entropy),
        AgentPolicy::Model(UtilityPolicy::Data(FrequencyTable::spacecraft())),
        AgentPolicy::Baseline { seed: 9 },
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn min_set_is_minimum_and_sound((rows, props, vals) in small_rows()) {
        let w = world_from_rows(&rows, props, vals);
        let all: Vec<usize> = (0..w.len()).collect();
        let m = compute_min_set(&w, &all).unwrap();
        prop_assert_eq!(m.len(), brute_force_min_size(&w, &all));
        prop_assert!(separates(&w, &all, |p| m.contains(PropertyId(p))));
        prop_assert_eq!(&m, &compute_min_set(&w, &all).unwrap());
    }

    #[test]
    fn greedy_hits_every_clause((rows, props, vals) in small_rows()) {
        let w = world_from_rows(&rows, props, vals);
        let all: Vec<usize> = (0..w.len()).collect();
        let clauses = pairwise_clauses(&w, &all).unwrap();
        let greedy = solve_min_hitting_set(&clauses, 0);
        prop_assert!(clauses.is_hit_by(&greedy.properties));
        prop_assert!(greedy.len() >= compute_min_set(&w, &all).unwrap().len());
    }

    #[test]
    fn min_set_excludes_constant_properties(seed in any::<u64>()) {
        let w = random_world(seed, false);
        let all: Vec<usize> = (0..w.len()).collect();
        let m = compute_min_set(&w, &all).unwrap();
        for p in &m.properties {
            prop_assert!(all.iter().any(|&i| w.code(i, *p) != w.code(0, *p)));
        }
    }

    #[test]
    fn yn_never_beats_wh(counts in prop::collection::vec(0usize..30, 1..9)) {
        prop_assume!(counts.iter().sum::<usize>() > 0);
        let d = PropertyDistribution::from_counts(PropertyId(0), &counts);
        let (wh, yn) = (wh_entropy(&d), yn_expected_entropy(&d));
        prop_assert!(yn <= wh + 1e-12, "yn {} > wh {}", yn, wh);
        let support = counts.iter().filter(|&&c| c > 0).count() as f64;
        prop_assert!(wh >= 0.0 && wh <= support.log2() + 1e-12);
        prop_assert_eq!(wh == 0.0, d.is_degenerate());
        prop_assert_eq!(yn == 0.0, d.is_degenerate());
    }

    #[test]
    fn entropy_ignores_value_order(mut counts in prop::collection::vec(0usize..30, 2..9), rot in 0usize..8) {
        prop_assume!(counts.iter().sum::<usize>() > 0);
        let a = PropertyDistribution::from_counts(PropertyId(0), &counts);
        let k = rot % counts.len();
        counts.rotate_left(k);
        let last = counts.len() - 1;
        counts.swap(0, last);
        let b = PropertyDistribution::from_counts(PropertyId(0), &counts);
        prop_assert_eq!(wh_entropy(&a).to_bits(), wh_entropy(&b).to_bits());
        prop_assert_eq!(yn_expected_entropy(&a).to_bits(), yn_expected_entropy(&b).to_bits());
    }

    #[test]
    fn selection_is_invariant_to_positive_scaling(seed in any::<u64>(), high in any::<bool>(), factor in 1e-3f64..1e3) {
        let w = random_world(seed, high);
        let cat = QuestionCatalog::spacecraft();
        let b = Belief::new(&w, "object 0").unwrap();
        for policy in [UtilityPolicy::Entropy, UtilityPolicy::Data(FrequencyTable::spacecraft())] {
            let net = build_network(&b, &cat, &policy).unwrap();
            let picked = select_question(&net).unwrap().clone();
            let scaled = net.with_utilities(net.utilities.scaled(factor));
            prop_assert_eq!(select_question(&scaled).unwrap(), &picked);
            // changing the log base is a positive rescaling of every entropy
            let nats = net.with_utilities(net.utilities.scaled(std::f64::consts::LN_2));
            prop_assert_eq!(select_question(&nats).unwrap(), &picked);
            let rebuilt = build_network(&b, &cat, &policy).unwrap();
            prop_assert_eq!(select_question(&rebuilt).unwrap(), &picked);
        }
    }

    #[test]
    fn episodes_respect_dialogue_invariants(seed in any::<u64>(), high in any::<bool>(), target in 0usize..20) {
        let w = random_world(seed, high);
        let cat = QuestionCatalog::spacecraft();
        let target_id = w.entities()[target].id.clone();
        for agent in agents() {
            let rec = run_episode(&w, &target_id, &agent, &cat, Limits::default()).unwrap();
            prop_assert_eq!(&rec.resolved, &target_id);
            prop_assert_eq!(rec.question_count, rec.transcript.len());

            let mut belief = Belief::new(&w, &rec.instruction_label).unwrap();
            let mut active = compute_min_set(&w, belief.candidates()).unwrap().len();
            prop_assert_eq!(active, rec.initial_min_set);
            let mut asked_wh = HashSet::new();
            for turn in &rec.transcript {
                let q = &turn.question;
                if matches!(agent, AgentPolicy::Model(_)) {
                    prop_assert!(!belief.distribution(q.property).is_degenerate(),
                        "model asked about {} which is constant among candidates", q.property_name);
                }
                if q.kind == QuestionKind::Wh {
                    prop_assert!(asked_wh.insert(q.property), "repeated WH about {}", q.property_name);
                }
                let before: BTreeSet<usize> = belief.candidates().iter().copied().collect();
                belief = match (&q.value, &turn.answer) {
                    (None, refquest::Answer::Value(v)) => belief.apply_wh_answer(q.property, v).unwrap(),
                    (Some(v), a) => belief.apply_yn_answer(q.property, v, *a == refquest::Answer::Yes).unwrap(),
                    _ => unreachable!(),
                };
                let after: BTreeSet<usize> = belief.candidates().iter().copied().collect();
                prop_assert!(after.is_subset(&before));
                prop_assert!(after.contains(&target));
                for p in w.schema().ids() {
                    let s: f64 = belief.distribution(p).probs.iter().sum();
                    prop_assert!((s - 1.0).abs() < 1e-12);
                }
                let next = compute_min_set(&w, belief.candidates()).unwrap().len();
                prop_assert!(next <= active);
                active = next;
            }
            if matches!(agent, AgentPolicy::Model(_)) {
                prop_assert!(rec.wh_count() <= rec.initial_min_set);
            }
        }
    }

    #[test]
    fn generated_worlds_round_trip_through_config(seed in any::<u64>(), high in any::<bool>()) {
        let w = random_world(seed, high);
        let text = w.to_config_string().unwrap();
        prop_assert_eq!(World::from_config_str(&text).unwrap(), w);
    }
}

#[test]
fn spacecraft_round_trips_and_resolves_every_tool() {
    let w = spacecraft_world();
    assert_eq!(
        World::from_config_str(&w.to_config_string().unwrap()).unwrap(),
        w
    );
    let cat = QuestionCatalog::spacecraft();
    for e in w.entities() {
        for agent in agents() {
            let rec = run_episode(&w, &e.id, &agent, &cat, Limits::default()).unwrap();
            assert_eq!(rec.resolved, e.id);
            assert_eq!(rec.initial_min_set, 2, "{}", e.id);
        }
    }
}

#[test]
fn baseline_can_waste_questions_on_constant_properties() {
    // the zero-information questions the model never asks
    let cat = QuestionCatalog::spacecraft();
    let mut wasted = 0;
    for seed in 0..20 {
        let w = random_world(seed, false);
        let rec = run_episode(
            &w,
            "e00",
            &AgentPolicy::Baseline { seed },
            &cat,
            Limits::default(),
        )
        .unwrap();
        let mut belief = Belief::new(&w, &rec.instruction_label).unwrap();
        for turn in &rec.transcript {
            let q = &turn.question;
            if belief.distribution(q.property).is_degenerate() {
                wasted += 1;
            }
            belief = match (&q.value, &turn.answer) {
                (None, refquest::Answer::Value(v)) => {
                    belief.apply_wh_answer(q.property, v).unwrap()
                }
                (Some(v), a) => belief
                    .apply_yn_answer(q.property, v, *a == refquest::Answer::Yes)
                    .unwrap(),
                _ => unreachable!(),
            };
        }
    }
    assert!(wasted > 0);
}
