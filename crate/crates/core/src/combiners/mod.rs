//! Ensemble forecasters built from a pool of probability forecasters.
//!
//! * [`bag`] averages every forecaster (missing forecasts count as 0.5).
//! * [`adaboost_train`] boosts the binary predictors `sign(2η̂ − 1)`.
//! * [`realboost_train`] boosts the real predictors `½·ln(η̂ / (1 − η̂))`.
//!
//! A trained [`EnsembleModel`] produces a margin `v = Σ αᵢ·p(x⁽ⁱ⁾)`. Boosted
//! margins are mapped back to a probability with the exponential inverse link;
//! the bagged probability is the average forecast itself.
//!
//! Per-round selection scans every forecaster, so the same forecaster may be
//! chosen in several rounds. Values within a relative [`TIE_TOLERANCE`] of the
//! round minimum count as ties, and ties go to the lowest forecaster index.

mod adaboost;
mod bagging;
mod realboost;

use std::collections::BTreeSet;
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub use adaboost::{adaboost_alpha, adaboost_train, adaboost_train_traced, EPSILON_CLAMP};
pub use bagging::bag;
pub use realboost::{realboost_train, realboost_train_traced};

use crate::domain::{ForecastTable, ImputationMode, ImputationPolicy, Outcome, Prediction, Probability};
use crate::error::{Error, Result};
use crate::links::LinkSpec;

/// Relative gap below which two round objectives are treated as equal.
pub const TIE_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    Bagging,
    AdaBoost,
    RealBoost,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::Bagging => "bagging",
            Method::AdaBoost => "adaboost",
            Method::RealBoost => "realboost",
        }
    }

    /// Round counts used for the GJP forecaster experiment.
    pub fn default_iterations(self) -> usize {
        match self {
            Method::Bagging => 1,
            Method::AdaBoost => 800,
            Method::RealBoost => 70,
        }
    }

    pub fn is_boosting(self) -> bool {
        self != Method::Bagging
    }
}

impl std::str::FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "bagging" => Ok(Method::Bagging),
            "adaboost" => Ok(Method::AdaBoost),
            "realboost" => Ok(Method::RealBoost),
            other => Err(Error::UnknownMethod(other.to_string())),
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Round {
    pub forecaster: usize,
    pub alpha: f64,
}

/// A random imputation drawn at training time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrozenCell {
    /// Index into the training table's questions.
    pub question: usize,
    pub forecaster: usize,
    pub value: Probability,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EnsembleModel {
    pub method: Method,
    pub rounds: Vec<Round>,
    pub link: LinkSpec,
    pub imputation: ImputationPolicy,
    pub frozen_imputations: Vec<FrozenCell>,
    /// Forecaster pool the round indices refer to.
    pub forecaster_ids: Vec<String>,
}

/// Per-round diagnostics of a boosting run.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct BoostTrace {
    /// AdaBoost: weighted error ε of the selected predictor. RealBoost:
    /// weighted exponential objective Σ wᵢ·e^(−yᵢ·p) of the selected predictor
    /// under normalized weights.
    pub objectives: Vec<f64>,
    /// Empirical exponential risk (1/n)·Σ e^(−yᵢ·vᵢ) of the ensemble after each
    /// round, computed directly from the cumulative margins.
    pub risks: Vec<f64>,
    /// AdaBoost stopped before the requested round count because no forecaster
    /// beat chance.
    pub stopped_early: bool,
}

impl BoostTrace {
    /// True when every selected RealBoost predictor did at least as well as the
    /// constant predictor 0 (objective ≤ 1), which makes the risk sequence
    /// non-increasing.
    pub fn beats_constant_every_round(&self) -> bool {
        self.objectives.iter().all(|&o| o <= 1.0 + TIE_TOLERANCE)
    }
}

impl EnsembleModel {
    pub fn n_forecasters(&self) -> usize {
        self.forecaster_ids.len()
    }

    /// Number of distinct forecasters used by any round.
    pub fn unique_forecasters(&self) -> usize {
        self.rounds
            .iter()
            .map(|r| r.forecaster)
            .collect::<BTreeSet<_>>()
            .len()
    }

    /// Base predictor output of one forecaster for one (possibly imputed)
    /// forecast.
    pub fn base_prediction(&self, forecast: Probability) -> f64 {
        base_prediction(self.method, &self.link, forecast)
    }
}

pub(crate) fn base_prediction(method: Method, link: &LinkSpec, forecast: Probability) -> f64 {
    match method {
        Method::Bagging => forecast.value(),
        Method::AdaBoost => sign_predictor(forecast),
        Method::RealBoost => link.link(forecast).value(),
    }
}

/// `+1` when the forecast favours the event (η̂ > 0.5), `-1` otherwise.
#[inline]
pub fn sign_predictor(forecast: Probability) -> f64 {
    classify(LinkSpec::linear().link(forecast)).sign()
}

/// Decision rule: `+1` iff the margin is strictly positive.
#[inline]
pub fn classify(margin: Prediction) -> Outcome {
    if margin.value() > 0.0 {
        Outcome::Positive
    } else {
        Outcome::Negative
    }
}

/// Lowest index whose value is within [`TIE_TOLERANCE`] (relative) of the
/// minimum, together with that value.
pub(crate) fn argmin_lowest_index(values: impl IntoIterator<Item = f64>) -> (usize, f64) {
    let values: Vec<f64> = values.into_iter().collect();
    let min = values.iter().copied().fold(f64::INFINITY, f64::min);
    let cutoff = min + TIE_TOLERANCE * min.abs();
    values
        .iter()
        .position(|&v| v <= cutoff)
        .map(|j| (j, values[j]))
        .expect("argmin over an empty pool")
}

pub(crate) fn check_training_input(table: &ForecastTable, iterations: usize) -> Result<()> {
    if iterations < 1 {
        return Err(Error::ZeroIterations);
    }
    if table.n_forecasters() == 0 {
        return Err(Error::Empty("table has no forecasters"));
    }
    if table.n_questions() == 0 {
        return Err(Error::Empty("table has no questions"));
    }
    Ok(())
}

pub(crate) fn exponential_risk(margins: &[f64], outcomes: &[Outcome]) -> f64 {
    let sum: f64 = margins
        .iter()
        .zip(outcomes)
        .map(|(v, y)| (-y.sign() * v).exp())
        .sum();
    sum / margins.len() as f64
}

/// Trains the requested combiner on the whole table.
pub fn train(
    table: &ForecastTable,
    method: Method,
    iterations: usize,
    seed: u64,
) -> Result<EnsembleModel> {
    match method {
        Method::Bagging => bag(table),
        Method::AdaBoost => adaboost_train(table, iterations, seed),
        Method::RealBoost => realboost_train(table, iterations),
    }
}

/// Margin and probability of the ensemble on one question.
///
/// Equivalent to [`ensemble_predict_keyed`] with key 0.
pub fn ensemble_predict(
    model: &EnsembleModel,
    forecasts: &[Option<Probability>],
) -> Result<(Prediction, Probability)> {
    ensemble_predict_keyed(model, forecasts, 0)
}

/// Like [`ensemble_predict`], with `key` selecting the random stream used to
/// impute missing forecasts under random imputation. The same model, forecasts
/// and key always give the same result.
pub fn ensemble_predict_keyed(
    model: &EnsembleModel,
    forecasts: &[Option<Probability>],
    key: u64,
) -> Result<(Prediction, Probability)> {
    if forecasts.len() != model.n_forecasters() {
        return Err(Error::Shape(format!(
            "model expects {} forecasts, got {}",
            model.n_forecasters(),
            forecasts.len()
        )));
    }
    let filled = fill_missing(model.imputation, forecasts, key);

    if model.method == Method::Bagging {
        let mean = filled.iter().map(|p| p.value()).sum::<f64>() / filled.len() as f64;
        let probability = Probability::saturating(mean);
        return Ok((LinkSpec::linear().link(probability), probability));
    }

    let margin: f64 = model
        .rounds
        .iter()
        .map(|r| r.alpha * model.base_prediction(filled[r.forecaster]))
        .sum();
    let margin = Prediction::new(margin)?;
    Ok((margin, model.link.inverse(margin)))
}

fn fill_missing(
    policy: ImputationPolicy,
    forecasts: &[Option<Probability>],
    key: u64,
) -> Vec<Probability> {
    match policy.mode {
        ImputationMode::Random => {
            // stream 0 is reserved for training-time imputation
            let mut rng = ChaCha8Rng::seed_from_u64(policy.seed);
            rng.set_stream(key.wrapping_add(1));
            forecasts
                .iter()
                .map(|c| {
                    let draw = Probability::saturating(rng.random::<f64>());
                    c.unwrap_or(draw)
                })
                .collect()
        }
        ImputationMode::Half | ImputationMode::Error => forecasts
            .iter()
            .map(|c| c.unwrap_or(Probability::HALF))
            .collect(),
    }
}
