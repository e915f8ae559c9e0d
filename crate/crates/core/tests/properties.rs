mod common;

use common::{oracle_adaboost_scaled, randomly_filled};
use crowdboost::combiners::realboost_train_traced;
use crowdboost::evaluation::loo_fold_model;
use crowdboost::io::{format_f64, parse_model, write_model};
use crowdboost::links::DEFAULT_CLIP;
use crowdboost::{
    adaboost_train, bag, conditional_risk, decompose, ensemble_predict, impute, realboost_train,
    ForecastTable, ImputationPolicy, LinkSpec, Method, Outcome, Prediction, Probability,
    ScoringRule,
};
use proptest::prelude::*;

fn cell() -> impl Strategy<Value = Option<Probability>> {
    prop_oneof![
        1 => Just(None),
        1 => prop_oneof![Just(0.0), Just(0.5), Just(1.0)].prop_map(|v| Some(Probability::new(v).unwrap())),
        6 => (0.0..=1.0f64).prop_map(|v| Some(Probability::new(v).unwrap())),
    ]
}

fn outcome() -> impl Strategy<Value = Outcome> {
    prop_oneof![Just(Outcome::Positive), Just(Outcome::Negative)]
}

fn build(rows: Vec<Vec<Option<Probability>>>, ys: Vec<Outcome>) -> ForecastTable {
    ForecastTable::new(
        (0..ys.len()).map(|i| format!("q{i}")).collect(),
        (0..rows.len()).map(|j| format!("f{j}")).collect(),
        rows,
        ys,
    )
    .unwrap()
}

/// Tables with 1..=max_n forecasters and 1..=max_q questions.
fn tables(max_n: usize, max_q: usize) -> impl Strategy<Value = ForecastTable> {
    (1..=max_n, 1..=max_q).prop_flat_map(|(n, q)| {
        (
            prop::collection::vec(prop::collection::vec(cell(), q), n),
            prop::collection::vec(outcome(), q),
        )
            .prop_map(|(rows, ys)| build(rows, ys))
    })
}

fn dense_tables(max_n: usize, max_q: usize) -> impl Strategy<Value = ForecastTable> {
    (1..=max_n, 1..=max_q).prop_flat_map(|(n, q)| {
        (
            prop::collection::vec(prop::collection::vec(0.0..=1.0f64, q), n),
            prop::collection::vec(outcome(), q),
        )
            .prop_map(|(rows, ys)| {
                let rows = rows
                    .into_iter()
                    .map(|r| r.into_iter().map(|v| Some(Probability::new(v).unwrap())).collect())
                    .collect();
                build(rows, ys)
            })
    })
}

proptest! {
    #![proptest_config(ProptestConfig { failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn imputation_leaves_dense_tables_alone(t in dense_tables(5, 10), seed: u64) {
        for policy in [ImputationPolicy::HALF, ImputationPolicy::random(seed)] {
            let dense = impute(&t, policy).unwrap();
            for j in 0..t.n_forecasters() {
                for q in 0..t.n_questions() {
                    prop_assert_eq!(Some(dense.get(j, q)), t.forecast(j, q));
                }
            }
        }
    }

    #[test]
    fn random_imputation_fills_gaps_in_range(t in tables(5, 10), seed: u64) {
        let a = impute(&t, ImputationPolicy::random(seed)).unwrap();
        let b = impute(&t, ImputationPolicy::random(seed)).unwrap();
        prop_assert_eq!(a.values(), b.values());
        for j in 0..t.n_forecasters() {
            for q in 0..t.n_questions() {
                let v = a.get(j, q).value();
                prop_assert!((0.0..=1.0).contains(&v));
                if let Some(present) = t.forecast(j, q) {
                    prop_assert_eq!(present.value(), v);
                }
            }
        }
    }

    #[test]
    fn link_round_trip(eta in DEFAULT_CLIP..=1.0 - DEFAULT_CLIP) {
        let link = LinkSpec::exponential();
        let back = link.inverse(link.link(Probability::new(eta).unwrap())).value();
        prop_assert!((back - eta).abs() < 1e-12, "{} -> {}", eta, back);
    }

    #[test]
    fn inverse_link_antisymmetry(v in -10.0..=10.0f64) {
        let link = LinkSpec::exponential();
        let a = link.inverse(Prediction::new(v).unwrap()).value();
        let b = link.inverse(Prediction::new(-v).unwrap()).value();
        prop_assert!((a + b - 1.0).abs() < 1e-12);
    }

    #[test]
    fn optimal_link_minimizes_conditional_risk(eta in 0.001..0.999f64, v in -8.0..8.0f64) {
        let link = LinkSpec::exponential();
        let eta = Probability::new(eta).unwrap();
        let best = conditional_risk(&link, eta, link.link(eta));
        prop_assert!(best <= conditional_risk(&link, eta, Prediction::new(v).unwrap()) + 1e-12);
    }

    #[test]
    fn minimum_conditional_risk_is_symmetric(eta in 0.0..=1.0f64) {
        let link = LinkSpec::exponential();
        prop_assert!((link.min_cond_risk(eta) - link.min_cond_risk(1.0 - eta)).abs() < 1e-12);
    }

    #[test]
    fn savage_bound(eta in 0.0..=1.0f64, eta_hat in 0.0..=1.0f64) {
        let rule = ScoringRule::exponential();
        prop_assert!(rule.expected_score(eta, eta_hat) <= rule.j(eta) + 1e-12);
    }

    #[test]
    fn decomposition_is_additive_and_calibration_nonpositive(
        pairs in prop::collection::vec((0.0..=1.0f64, outcome()), 1..200),
        bins in 1usize..25,
    ) {
        let (f, y): (Vec<Probability>, Vec<Outcome>) = pairs
            .into_iter()
            .map(|(v, o)| (Probability::new(v).unwrap(), o))
            .unzip();
        let r = decompose(&f, &y, &ScoringRule::exponential(), bins).unwrap();
        prop_assert!((r.total - (r.calibration + r.refinement)).abs() < 1e-10);
        prop_assert!(r.calibration <= 1e-12);
        prop_assert_eq!(r.per_bin.iter().map(|b| b.count).sum::<usize>(), f.len());
    }

    #[test]
    fn adaboost_ignores_weight_scale(t in tables(5, 8), rounds in 1usize..6, seed: u64, scale in 1e-6..1e6f64) {
        let filled = randomly_filled(&t, seed);
        let unit = oracle_adaboost_scaled(&filled, t.outcomes(), rounds, 1.0);
        let scaled = oracle_adaboost_scaled(&filled, t.outcomes(), rounds, scale);
        prop_assert_eq!(&unit.selections, &scaled.selections);
        for (a, b) in unit.alphas.iter().zip(&scaled.alphas) {
            prop_assert!((a - b).abs() < 1e-12);
        }
        let model = adaboost_train(&t, rounds, seed).unwrap();
        let picked: Vec<usize> = model.rounds.iter().map(|r| r.forecaster).collect();
        prop_assert_eq!(picked, scaled.selections);
    }

    #[test]
    fn training_is_deterministic(t in tables(5, 8), rounds in 1usize..6, seed: u64) {
        for (a, b) in [
            (adaboost_train(&t, rounds, seed).unwrap(), adaboost_train(&t, rounds, seed).unwrap()),
            (realboost_train(&t, rounds).unwrap(), realboost_train(&t, rounds).unwrap()),
            (bag(&t).unwrap(), bag(&t).unwrap()),
        ] {
            prop_assert_eq!(write_model(&a), write_model(&b));
            prop_assert_eq!(&a, &b);
        }
    }

    #[test]
    fn model_files_round_trip(t in tables(5, 8), rounds in 1usize..6, seed: u64) {
        for model in [adaboost_train(&t, rounds, seed).unwrap(), realboost_train(&t, rounds).unwrap(), bag(&t).unwrap()] {
            let text = write_model(&model);
            let back = parse_model("model", &text).unwrap();
            prop_assert_eq!(&back, &model);
            prop_assert_eq!(write_model(&back), text);
        }
    }

    #[test]
    fn realboost_risk_never_increases(t in tables(6, 12), rounds in 1usize..30) {
        let (_, trace) = realboost_train_traced(&t, rounds).unwrap();
        // Only guaranteed when every round found a predictor at least as good
        // as the constant 0.
        prop_assume!(trace.beats_constant_every_round());
        for w in trace.risks.windows(2) {
            prop_assert!(w[1] <= w[0] * (1.0 + 1e-12), "{:?}", trace.risks);
        }
    }

    #[test]
    fn held_out_outcome_never_reaches_its_fold(t in tables(5, 8), rounds in 1usize..6, seed: u64, q in 0usize..8) {
        let q = q % t.n_questions();
        let flipped = t.with_outcome(q, match t.outcomes()[q] {
            Outcome::Positive => Outcome::Negative,
            Outcome::Negative => Outcome::Positive,
        });
        for method in [Method::Bagging, Method::AdaBoost, Method::RealBoost] {
            if method.is_boosting() && t.n_questions() < 2 {
                continue;
            }
            let a = loo_fold_model(&t, method, rounds, seed, q).unwrap();
            let b = loo_fold_model(&flipped, method, rounds, seed, q).unwrap();
            prop_assert_eq!(a, b);
        }
    }

    #[test]
    fn bagging_beats_average_squared_error(t in tables(6, 10)) {
        let model = bag(&t).unwrap();
        for q in 0..t.n_questions() {
            let column = t.question_column(q);
            let y = t.outcomes()[q].indicator();
            let (_, mean) = ensemble_predict(&model, &column).unwrap();
            let filled: Vec<f64> = column.iter().map(|c| c.map_or(0.5, |p| p.value())).collect();
            let individual = filled.iter().map(|f| (y - f).powi(2)).sum::<f64>() / filled.len() as f64;
            prop_assert!((y - mean.value()).powi(2) <= individual + 1e-15);
        }
    }

    #[test]
    fn number_format_round_trips(bits: u64) {
        let x = f64::from_bits(bits);
        prop_assume!(x.is_finite());
        let back: f64 = format_f64(x).parse().unwrap();
        prop_assert_eq!(back.to_bits(), x.to_bits());
    }
}
