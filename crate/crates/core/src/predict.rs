//! Glue used by the command-line front end: applying a stored model to a
//! forecast file and scoring every forecaster of a table.

use std::collections::HashMap;

use crate::combiners::{classify, ensemble_predict_keyed, EnsembleModel};
use crate::domain::{ForecastTable, Outcome, Probability};
use crate::error::{Error, Result};
use crate::io::{ForecastMatrix, ForecasterScore, PredictionReport, PredictionRow, ScoreSummary};
use crate::links::ScoringRule;
use crate::scoring::decompose;

/// Applies `model` to every question of `matrix`, in file order.
///
/// Model forecasters missing from the file count as absent forecasts; file
/// forecasters unknown to the model are ignored. Question `q` uses imputation
/// stream `q`. When `outcomes` is given every question must have one, and the
/// report carries the error count and the score decomposition of the ensemble
/// probabilities.
pub fn predict_matrix(
    model: &EnsembleModel,
    matrix: &ForecastMatrix,
    outcomes: Option<&[(String, Outcome)]>,
    bins: usize,
) -> Result<PredictionReport> {
    let truth: Option<HashMap<&str, Outcome>> =
        outcomes.map(|o| o.iter().map(|(q, y)| (q.as_str(), *y)).collect());

    let missing = model
        .forecaster_ids
        .iter()
        .filter(|id| !matrix.forecaster_ids.contains(id))
        .count();
    if missing > 0 {
        log::warn!("{missing} model forecasters have no rows in the forecast file");
    }

    let mut rows = Vec::with_capacity(matrix.question_ids.len());
    for (q, qid) in matrix.question_ids.iter().enumerate() {
        let column = matrix.aligned_column(q, &model.forecaster_ids);
        let (margin, probability) = ensemble_predict_keyed(model, &column, q as u64)?;
        let truth = match &truth {
            Some(map) => Some(
                *map.get(qid.as_str())
                    .ok_or_else(|| Error::MissingOutcome(qid.clone()))?,
            ),
            None => None,
        };
        rows.push(PredictionRow {
            question_id: qid.clone(),
            margin: margin.value(),
            probability,
            predicted: classify(margin),
            truth,
        });
    }

    let (errors, score) = if truth.is_some() && !rows.is_empty() {
        let probs: Vec<Probability> = rows.iter().map(|r| r.probability).collect();
        let ys: Vec<Outcome> = rows.iter().map(|r| r.truth.expect("checked above")).collect();
        let errors = rows.iter().filter(|r| Some(r.predicted) != r.truth).count();
        let score = decompose(&probs, &ys, &ScoringRule::exponential(), bins)?;
        (Some(errors), Some(score))
    } else {
        (None, None)
    };

    Ok(PredictionReport {
        method: model.method,
        rows,
        errors,
        score,
    })
}

/// Exponential-rule score decomposition of each forecaster over the questions
/// it answered.
pub fn score_forecasters(table: &ForecastTable, bins: usize) -> Result<ScoreSummary> {
    if bins < 1 {
        return Err(Error::ZeroBins);
    }
    let rule = ScoringRule::exponential();
    let forecasters = table
        .forecaster_ids()
        .iter()
        .enumerate()
        .map(|(j, id)| {
            let (probs, ys): (Vec<Probability>, Vec<Outcome>) = table
                .forecaster_row(j)
                .iter()
                .zip(table.outcomes())
                .filter_map(|(f, y)| f.map(|p| (p, *y)))
                .unzip();
            let report = if probs.is_empty() {
                None
            } else {
                Some(decompose(&probs, &ys, &rule, bins)?)
            };
            Ok(ForecasterScore {
                forecaster_id: id.clone(),
                answered: probs.len(),
                report,
            })
        })
        .collect::<Result<_>>()?;
    Ok(ScoreSummary { bins, forecasters })
}
