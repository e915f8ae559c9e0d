//! Leave-one-out evaluation of ensemble forecasters against the individual
//! forecasters they are built from.
//!
//! Every prediction, individual or ensemble, goes through [`classify`], so a
//! forecast counts as predicting the event only when it is strictly above 0.5.

mod synthetic;

use rayon::prelude::*;

pub use synthetic::{generate_synthetic, DifferenceType, SyntheticSpec};

use crate::combiners::{classify, ensemble_predict_keyed, train, EnsembleModel, Method};
use crate::domain::{ForecastTable, Outcome, Probability};
use crate::error::{Error, Result};
use crate::links::LinkSpec;

/// Error counts of each forecaster judged on its own.
#[derive(Debug, Clone, PartialEq)]
pub struct Baseline {
    pub per_forecaster: Vec<usize>,
    pub best: usize,
    pub mean: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct QuestionResult {
    pub question_id: String,
    pub predicted: Outcome,
    pub truth: Outcome,
    pub probability: Probability,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EvalReport {
    pub method: Method,
    pub iterations: usize,
    pub seed: u64,
    pub total_questions: usize,
    pub prediction_errors: usize,
    pub avg_unique_forecasters: f64,
    pub per_question: Vec<QuestionResult>,
    pub best_individual_errors: usize,
    pub mean_individual_errors: f64,
}

/// Whether a single forecast gets the question wrong. A missing forecast is
/// always wrong.
pub fn is_individual_error(forecast: Option<Probability>, truth: Outcome) -> bool {
    match forecast {
        Some(p) => classify(LinkSpec::linear().link(p)) != truth,
        None => true,
    }
}

pub fn individual_baseline(table: &ForecastTable) -> Result<Baseline> {
    if table.n_forecasters() == 0 || table.n_questions() == 0 {
        return Err(Error::Empty("baseline needs at least one forecaster and question"));
    }
    let outcomes = table.outcomes();
    let per_forecaster: Vec<usize> = (0..table.n_forecasters())
        .map(|j| {
            table
                .forecaster_row(j)
                .iter()
                .zip(outcomes)
                .filter(|(&f, &y)| is_individual_error(f, y))
                .count()
        })
        .collect();
    let best = *per_forecaster.iter().min().expect("non-empty pool");
    let mean = per_forecaster.iter().sum::<usize>() as f64 / per_forecaster.len() as f64;
    Ok(Baseline {
        per_forecaster,
        best,
        mean,
    })
}

/// Seed used for the fold that holds out question `held_out`.
pub fn fold_seed(seed: u64, held_out: usize) -> u64 {
    seed ^ held_out as u64
}

/// Model trained for the fold that holds out question `held_out`. Only the
/// other questions are passed to the trainer.
pub fn loo_fold_model(
    table: &ForecastTable,
    method: Method,
    iterations: usize,
    seed: u64,
    held_out: usize,
) -> Result<EnsembleModel> {
    let training = table.without_question(held_out);
    train(&training, method, iterations, fold_seed(seed, held_out))
}

pub fn loo_evaluate(
    table: &ForecastTable,
    method: Method,
    iterations: usize,
    seed: u64,
) -> Result<EvalReport> {
    let q = table.n_questions();
    let needed = if method.is_boosting() { 2 } else { 1 };
    if q < needed {
        return Err(Error::InsufficientQuestions { needed, got: q });
    }
    let baseline = individual_baseline(table)?;

    let folds: Vec<(QuestionResult, usize)> = (0..q)
        .into_par_iter()
        .map(|held_out| {
            let model = loo_fold_model(table, method, iterations, seed, held_out)?;
            let (margin, probability) =
                ensemble_predict_keyed(&model, &table.question_column(held_out), 0)?;
            log::debug!(
                "fold {held_out}: margin {:.6} with {} unique forecasters",
                margin.value(),
                model.unique_forecasters()
            );
            let result = QuestionResult {
                question_id: table.question_ids()[held_out].clone(),
                predicted: classify(margin),
                truth: table.outcomes()[held_out],
                probability,
            };
            Ok((result, model.unique_forecasters()))
        })
        .collect::<Result<_>>()?;

    let prediction_errors = folds.iter().filter(|(r, _)| r.predicted != r.truth).count();
    let avg_unique_forecasters = folds.iter().map(|(_, u)| *u as f64).sum::<f64>() / q as f64;
    Ok(EvalReport {
        method,
        iterations: if method.is_boosting() { iterations } else { 0 },
        seed,
        total_questions: q,
        prediction_errors,
        avg_unique_forecasters,
        per_question: folds.into_iter().map(|(r, _)| r).collect(),
        best_individual_errors: baseline.best,
        mean_individual_errors: baseline.mean,
    })
}
