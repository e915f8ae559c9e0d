//! Brute-force reference implementations and fixtures shared by the
//! integration tests. The oracles work on plain `f64` matrices, keep their
//! weights unnormalized and recompute every quantity from scratch each round.

#![allow(dead_code, clippy::needless_range_loop)]

use crowdboost::{
    ensemble_predict, impute, EnsembleModel, ForecastTable, ImputationPolicy, Outcome, Probability,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const CLIP: f64 = 1e-6;
pub const TIE: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct OracleRun {
    pub selections: Vec<usize>,
    pub alphas: Vec<f64>,
    /// Final margin of every training question.
    pub margins: Vec<f64>,
}

pub fn p(v: f64) -> Option<Probability> {
    Some(Probability::new(v).unwrap())
}

pub fn outcomes(signs: &[i32]) -> Vec<Outcome> {
    signs.iter().map(|&s| Outcome::from_sign(s).unwrap()).collect()
}

pub fn table(rows: Vec<Vec<Option<Probability>>>, signs: &[i32]) -> ForecastTable {
    ForecastTable::new(
        (0..signs.len()).map(|i| format!("q{i}")).collect(),
        (0..rows.len()).map(|j| format!("f{j}")).collect(),
        rows,
        outcomes(signs),
    )
    .unwrap()
}

fn label(y: Outcome) -> f64 {
    if y == Outcome::Positive {
        1.0
    } else {
        -1.0
    }
}

/// Smallest candidate, where anything within the relative tie tolerance of
/// the minimum counts as equal and the lowest index wins.
fn pick(candidates: &[f64]) -> usize {
    let mut min = f64::INFINITY;
    for &c in candidates {
        if c < min {
            min = c;
        }
    }
    let mut j = 0;
    while candidates[j] > min + TIE * min.abs() {
        j += 1;
    }
    j
}

/// Forecast matrix `[forecaster][question]` with gaps filled by the
/// training-time random draws.
pub fn randomly_filled(table: &ForecastTable, seed: u64) -> Vec<Vec<f64>> {
    let dense = impute(table, ImputationPolicy::random(seed)).unwrap();
    (0..table.n_forecasters())
        .map(|j| dense.row(j).iter().map(|p| p.value()).collect())
        .collect()
}

/// Discrete AdaBoost on a dense forecast matrix, following the weight update
/// `w ← w·e^(α·1[miss])` without renormalization.
pub fn oracle_adaboost(forecasts: &[Vec<f64>], ys: &[Outcome], rounds: usize) -> OracleRun {
    oracle_adaboost_scaled(forecasts, ys, rounds, 1.0)
}

/// [`oracle_adaboost`] started from weights `scale / n` instead of `1 / n`.
pub fn oracle_adaboost_scaled(
    forecasts: &[Vec<f64>],
    ys: &[Outcome],
    rounds: usize,
    scale: f64,
) -> OracleRun {
    let n = ys.len();
    let h: Vec<Vec<f64>> = forecasts
        .iter()
        .map(|row| row.iter().map(|&f| if 2.0 * f - 1.0 > 0.0 { 1.0 } else { -1.0 }).collect())
        .collect();
    let mut w = vec![scale / n as f64; n];
    let mut run = OracleRun { selections: vec![], alphas: vec![], margins: vec![0.0; n] };

    for _ in 0..rounds {
        let wsum: f64 = w.iter().sum();
        let eps: Vec<f64> = h
            .iter()
            .map(|hj| {
                let mut miss = 0.0;
                for i in 0..n {
                    if hj[i] != label(ys[i]) {
                        miss += w[i];
                    }
                }
                miss / wsum
            })
            .collect();
        let j = pick(&eps);
        if eps[j] >= 0.5 - TIE {
            if run.selections.is_empty() {
                run.selections.push(j);
                run.alphas.push(0.0);
            }
            break;
        }
        let e = eps[j].clamp(1e-8, 1.0 - 1e-8);
        let alpha = 0.5 * ((1.0 - e) / e).ln();
        for i in 0..n {
            if h[j][i] != label(ys[i]) {
                w[i] *= alpha.exp();
            }
            run.margins[i] += alpha * h[j][i];
        }
        run.selections.push(j);
        run.alphas.push(alpha);
    }
    run
}

/// RealBoost on a dense forecast matrix. Each candidate is scored by the
/// exponential risk of the cumulative margin it would produce, relative to
/// the risk before the round.
pub fn oracle_realboost(forecasts: &[Vec<f64>], ys: &[Outcome], rounds: usize) -> OracleRun {
    let n = ys.len();
    let base: Vec<Vec<f64>> = forecasts
        .iter()
        .map(|row| {
            row.iter()
                .map(|&f| {
                    let c = f.clamp(CLIP, 1.0 - CLIP);
                    0.5 * (c / (1.0 - c)).ln()
                })
                .collect()
        })
        .collect();
    let mut run = OracleRun { selections: vec![], alphas: vec![], margins: vec![0.0; n] };

    for _ in 0..rounds {
        let before: f64 = (0..n).map(|i| (-label(ys[i]) * run.margins[i]).exp()).sum();
        let objective: Vec<f64> = base
            .iter()
            .map(|pj| {
                let after: f64 = (0..n)
                    .map(|i| (-label(ys[i]) * (run.margins[i] + pj[i])).exp())
                    .sum();
                after / before
            })
            .collect();
        let j = pick(&objective);
        for i in 0..n {
            run.margins[i] += base[j][i];
        }
        run.selections.push(j);
        run.alphas.push(1.0);
    }
    run
}

/// Margins the trained model assigns to its own training questions, with
/// missing cells restored from the model's frozen imputations (AdaBoost) or
/// left for the model's 0.5 policy (RealBoost).
pub fn model_training_margins(model: &EnsembleModel, table: &ForecastTable) -> Vec<f64> {
    (0..table.n_questions())
        .map(|q| {
            let mut column = table.question_column(q);
            for cell in model.frozen_imputations.iter().filter(|c| c.question == q) {
                column[cell.forecaster] = Some(cell.value);
            }
            ensemble_predict(model, &column).unwrap().0.value()
        })
        .collect()
}

/// Random table with `n` forecasters and `q` questions. Cells are missing a
/// quarter of the time and sometimes sit exactly on 0, 0.5 or 1.
pub fn random_table(rng: &mut ChaCha8Rng, n: usize, q: usize) -> ForecastTable {
    let rows = (0..n)
        .map(|_| {
            (0..q)
                .map(|_| match rng.random_range(0..20) {
                    0..=4 => None,
                    5 => p(0.5),
                    6 => p(0.0),
                    7 => p(1.0),
                    _ => p(rng.random::<f64>()),
                })
                .collect()
        })
        .collect();
    let signs: Vec<i32> = (0..q).map(|_| if rng.random_bool(0.5) { 1 } else { -1 }).collect();
    table(rows, &signs)
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * (1.0 + a.abs().max(b.abs()))
}

fn compare(name: &str, model: &EnsembleModel, table: &ForecastTable, oracle: &OracleRun) -> Result<(), String> {
    let selections: Vec<usize> = model.rounds.iter().map(|r| r.forecaster).collect();
    if selections != oracle.selections {
        return Err(format!("{name}: selections {selections:?} vs oracle {:?}", oracle.selections));
    }
    for (r, &a) in model.rounds.iter().zip(&oracle.alphas) {
        if !close(r.alpha, a, TIE) {
            return Err(format!("{name}: alpha {} vs oracle {a}", r.alpha));
        }
    }
    let margins = model_training_margins(model, table);
    for (i, (&v, &o)) in margins.iter().zip(&oracle.margins).enumerate() {
        if !close(v, o, TIE) {
            return Err(format!("{name}: margin of question {i} is {v}, oracle {o}"));
        }
    }
    Ok(())
}

/// Trains both boosters on `table` and checks them against the oracles.
pub fn check_against_oracles(table: &ForecastTable, rounds: usize, seed: u64) -> Result<(), String> {
    let ys = table.outcomes();

    let ada = crowdboost::adaboost_train(table, rounds, seed).map_err(|e| e.to_string())?;
    let filled = randomly_filled(table, seed);
    for cell in &ada.frozen_imputations {
        if cell.value.value() != filled[cell.forecaster][cell.question] {
            return Err(format!("adaboost: frozen cell {cell:?} differs from its draw"));
        }
    }
    compare("adaboost", &ada, table, &oracle_adaboost(&filled, ys, rounds))?;

    let real = crowdboost::realboost_train(table, rounds).map_err(|e| e.to_string())?;
    let halves: Vec<Vec<f64>> = (0..table.n_forecasters())
        .map(|j| table.forecaster_row(j).iter().map(|c| c.map_or(0.5, |p| p.value())).collect())
        .collect();
    compare("realboost", &real, table, &oracle_realboost(&halves, ys, rounds))
}
