use super::{
    argmin_lowest_index, base_prediction, check_training_input, exponential_risk, BoostTrace,
    EnsembleModel, FrozenCell, Method, Round, TIE_TOLERANCE,
};
use crate::domain::{impute, ForecastTable, ImputationPolicy};
use crate::error::Result;
use crate::links::LinkSpec;

/// Weighted errors are clamped to `[EPSILON_CLAMP, 1 − EPSILON_CLAMP]` before
/// computing α, so a perfect forecaster gets a large but finite weight.
pub const EPSILON_CLAMP: f64 = 1e-8;

/// α = ½·ln((1 − ε) / ε) with ε clamped.
pub fn adaboost_alpha(epsilon: f64) -> f64 {
    let e = epsilon.clamp(EPSILON_CLAMP, 1.0 - EPSILON_CLAMP);
    0.5 * ((1.0 - e) / e).ln()
}

pub fn adaboost_train(table: &ForecastTable, iterations: usize, seed: u64) -> Result<EnsembleModel> {
    adaboost_train_traced(table, iterations, seed).map(|(model, _)| model)
}

/// Discrete AdaBoost over the binary predictors `sign(2η̂ − 1)`.
///
/// Missing forecasts are replaced once, before the first round, by
/// [`impute`] under `ImputationPolicy::random(seed)`; the realized values are
/// stored in the model. Weights are renormalized to sum to one after each
/// update. Training stops early when the best weighted error is at least ½;
/// if that happens in the first round a single zero-weight round is kept.
pub fn adaboost_train_traced(
    table: &ForecastTable,
    iterations: usize,
    seed: u64,
) -> Result<(EnsembleModel, BoostTrace)> {
    check_training_input(table, iterations)?;
    let link = LinkSpec::exponential();
    let policy = ImputationPolicy::random(seed);
    let dense = impute(table, policy)?;
    let outcomes = table.outcomes();
    let n = table.n_questions();
    let pool = table.n_forecasters();

    // mistakes[j][i]: forecaster j's binary prediction is wrong on question i
    let predictions: Vec<Vec<f64>> = (0..pool)
        .map(|j| {
            dense
                .row(j)
                .iter()
                .map(|&p| base_prediction(Method::AdaBoost, &link, p))
                .collect()
        })
        .collect();
    let mistakes: Vec<Vec<bool>> = predictions
        .iter()
        .map(|row| row.iter().zip(outcomes).map(|(&p, y)| p != y.sign()).collect())
        .collect();

    let mut weights = vec![1.0 / n as f64; n];
    let mut margins = vec![0.0; n];
    let mut rounds = Vec::with_capacity(iterations);
    let mut trace = BoostTrace::default();

    for _ in 0..iterations {
        let total: f64 = weights.iter().sum();
        let errors = mistakes.iter().map(|row| {
            row.iter()
                .zip(&weights)
                .filter(|(&wrong, _)| wrong)
                .map(|(_, w)| w)
                .sum::<f64>()
        });
        let (best, error) = argmin_lowest_index(errors);
        let epsilon = error / total;

        if epsilon >= 0.5 - TIE_TOLERANCE {
            trace.stopped_early = true;
            if rounds.is_empty() {
                rounds.push(Round { forecaster: best, alpha: 0.0 });
                trace.objectives.push(epsilon);
                trace.risks.push(exponential_risk(&margins, outcomes));
            }
            break;
        }

        let alpha = adaboost_alpha(epsilon);
        let boost = alpha.exp();
        for (w, &wrong) in weights.iter_mut().zip(&mistakes[best]) {
            if wrong {
                *w *= boost;
            }
        }
        let total: f64 = weights.iter().sum();
        weights.iter_mut().for_each(|w| *w /= total);

        for (v, p) in margins.iter_mut().zip(&predictions[best]) {
            *v += alpha * p;
        }
        rounds.push(Round { forecaster: best, alpha });
        trace.objectives.push(epsilon);
        trace.risks.push(exponential_risk(&margins, outcomes));
    }

    let frozen_imputations = (0..pool)
        .flat_map(|j| (0..n).map(move |q| (j, q)))
        .filter(|&(j, q)| table.forecast(j, q).is_none())
        .map(|(j, q)| FrozenCell {
            question: q,
            forecaster: j,
            value: dense.get(j, q),
        })
        .collect();

    let model = EnsembleModel {
        method: Method::AdaBoost,
        rounds,
        link,
        imputation: policy,
        frozen_imputations,
        forecaster_ids: table.forecaster_ids().to_vec(),
    };
    Ok((model, trace))
}
