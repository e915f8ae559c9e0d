use super::{
    argmin_lowest_index, base_prediction, check_training_input, exponential_risk, BoostTrace,
    EnsembleModel, Method, Round,
};
use crate::domain::{impute, ForecastTable, ImputationPolicy};
use crate::error::Result;
use crate::links::LinkSpec;

pub fn realboost_train(table: &ForecastTable, iterations: usize) -> Result<EnsembleModel> {
    realboost_train_traced(table, iterations).map(|(model, _)| model)
}

/// RealBoost over the real predictors `½·ln(η̂ / (1 − η̂))`, η̂ clipped to
/// `[δ, 1 − δ]` and missing forecasts set to 0.5 (predictor output 0).
///
/// Each round picks the forecaster minimizing Σ wᵢ·e^(−yᵢ·p(xᵢ)), multiplies
/// each weight by its factor e^(−yᵢ·p(xᵢ)) and renormalizes. Every round has
/// α = 1.
pub fn realboost_train_traced(
    table: &ForecastTable,
    iterations: usize,
) -> Result<(EnsembleModel, BoostTrace)> {
    check_training_input(table, iterations)?;
    let link = LinkSpec::exponential();
    let dense = impute(table, ImputationPolicy::HALF)?;
    let outcomes = table.outcomes();
    let n = table.n_questions();

    let predictions: Vec<Vec<f64>> = (0..table.n_forecasters())
        .map(|j| {
            dense
                .row(j)
                .iter()
                .map(|&p| base_prediction(Method::RealBoost, &link, p))
                .collect()
        })
        .collect();
    // factors[j][i] = e^(−yᵢ·p_j(xᵢ))
    let factors: Vec<Vec<f64>> = predictions
        .iter()
        .map(|row| {
            row.iter()
                .zip(outcomes)
                .map(|(p, y)| (-y.sign() * p).exp())
                .collect()
        })
        .collect();

    let mut weights = vec![1.0 / n as f64; n];
    let mut margins = vec![0.0; n];
    let mut rounds = Vec::with_capacity(iterations);
    let mut trace = BoostTrace::default();

    for _ in 0..iterations {
        let objectives = factors
            .iter()
            .map(|row| row.iter().zip(&weights).map(|(f, w)| f * w).sum::<f64>());
        let (best, objective) = argmin_lowest_index(objectives);

        for (w, f) in weights.iter_mut().zip(&factors[best]) {
            *w *= f;
        }
        let total: f64 = weights.iter().sum();
        weights.iter_mut().for_each(|w| *w /= total);

        for (v, p) in margins.iter_mut().zip(&predictions[best]) {
            *v += p;
        }
        rounds.push(Round {
            forecaster: best,
            alpha: 1.0,
        });
        trace.objectives.push(objective);
        trace.risks.push(exponential_risk(&margins, outcomes));
    }

    let model = EnsembleModel {
        method: Method::RealBoost,
        rounds,
        link,
        imputation: ImputationPolicy::HALF,
        frozen_imputations: Vec::new(),
        forecaster_ids: table.forecaster_ids().to_vec(),
    };
    Ok((model, trace))
}
