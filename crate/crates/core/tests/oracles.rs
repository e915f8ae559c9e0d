mod common;

use common::{check_against_oracles, oracle_adaboost, oracle_realboost, p, randomly_filled, rng, table};
use crowdboost::combiners::adaboost_train_traced;
use crowdboost::{adaboost_train, realboost_train};
use rand::Rng;

#[test]
fn adaboost_toy_table_matches_oracle() {
    let t = table(
        vec![
            vec![p(0.8), p(0.3), p(0.6), p(0.4)],
            vec![p(0.7), None, p(0.2), p(0.9)],
            vec![p(0.4), p(0.1), None, p(0.55)],
        ],
        &[1, -1, -1, 1],
    );
    let model = adaboost_train(&t, 2, 11).unwrap();
    let oracle = oracle_adaboost(&randomly_filled(&t, 11), t.outcomes(), 2);
    let picked: Vec<usize> = model.rounds.iter().map(|r| r.forecaster).collect();
    assert_eq!(picked, oracle.selections);
    for (r, a) in model.rounds.iter().zip(&oracle.alphas) {
        assert!((r.alpha - a).abs() < 1e-12);
    }
    check_against_oracles(&t, 2, 11).unwrap();
}

#[test]
fn realboost_toy_table_matches_oracle() {
    let t = table(
        vec![
            vec![p(0.9), p(0.2), p(0.6), p(0.3), p(0.7)],
            vec![p(0.6), p(0.4), None, p(0.1), p(0.55)],
            vec![p(0.5), p(0.5), p(0.5), p(0.5), p(0.5)],
            vec![None, p(0.35), p(0.8), p(0.45), p(0.95)],
        ],
        &[1, -1, 1, -1, 1],
    );
    let model = realboost_train(&t, 3).unwrap();
    let halves: Vec<Vec<f64>> = (0..4)
        .map(|j| t.forecaster_row(j).iter().map(|c| c.map_or(0.5, |p| p.value())).collect())
        .collect();
    let oracle = oracle_realboost(&halves, t.outcomes(), 3);
    let picked: Vec<usize> = model.rounds.iter().map(|r| r.forecaster).collect();
    assert_eq!(picked, oracle.selections);
    check_against_oracles(&t, 3, 0).unwrap();
}

#[test]
fn random_small_tables_match_oracles() {
    let mut r = rng(2024);
    for case in 0..300 {
        let n = r.random_range(1..=5);
        let q = r.random_range(1..=8);
        let m = r.random_range(1..=5);
        let seed = r.random::<u64>();
        let t = common::random_table(&mut r, n, q);
        if let Err(e) = check_against_oracles(&t, m, seed) {
            panic!("case {case} (N={n}, Q={q}, M={m}): {e}");
        }
    }
}

#[test]
fn longer_runs_match_oracles() {
    let mut r = rng(99);
    for _ in 0..20 {
        let t = common::random_table(&mut r, 8, 30);
        check_against_oracles(&t, 25, r.random()).unwrap();
    }
}

#[test]
fn adaboost_scale_invariance_via_unnormalized_oracle() {
    // The oracle never normalizes; agreement over many rounds shows selection
    // and α do not depend on the weight scale.
    let mut r = rng(5);
    let t = common::random_table(&mut r, 5, 40);
    let (model, trace) = adaboost_train_traced(&t, 40, 3).unwrap();
    let oracle = oracle_adaboost(&randomly_filled(&t, 3), t.outcomes(), 40);
    assert_eq!(model.rounds.len(), oracle.selections.len());
    assert_eq!(trace.stopped_early, model.rounds.len() < 40);
    check_against_oracles(&t, 40, 3).unwrap();
}
