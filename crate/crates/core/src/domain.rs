//! Value types shared by every other module.
//!
//! A [`ForecastTable`] is the training set: `N` forecasters by `Q` questions,
//! each cell an optional [`Probability`] that the question resolves to
//! [`Outcome::Positive`]. Missing forecasts are tracked as `None`, never as a
//! sentinel probability.

use std::collections::HashSet;
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// Probability that the event `y = +1` occurs. Always in `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
#[repr(transparent)]
pub struct Probability(f64);

impl Probability {
    pub const HALF: Probability = Probability(0.5);

    pub fn new(value: f64) -> Result<Self> {
        if (0.0..=1.0).contains(&value) {
            Ok(Probability(value))
        } else {
            Err(Error::ProbabilityOutOfRange(value))
        }
    }

    /// Clamps into `[0, 1]`; NaN maps to 0.5.
    pub fn saturating(value: f64) -> Self {
        if value.is_nan() {
            Probability::HALF
        } else {
            Probability(value.clamp(0.0, 1.0))
        }
    }

    #[inline]
    pub fn value(self) -> f64 {
        self.0
    }

    /// Restricts to `[delta, 1 - delta]`.
    #[inline]
    pub fn clipped(self, delta: f64) -> f64 {
        self.0.clamp(delta, 1.0 - delta)
    }
}

impl fmt::Display for Probability {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// Resolved binary outcome of a question.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Outcome {
    Positive,
    Negative,
}

impl Outcome {
    /// `+1.0` or `-1.0`.
    #[inline]
    pub fn sign(self) -> f64 {
        match self {
            Outcome::Positive => 1.0,
            Outcome::Negative => -1.0,
        }
    }

    /// `1.0` for a positive outcome, `0.0` otherwise.
    #[inline]
    pub fn indicator(self) -> f64 {
        match self {
            Outcome::Positive => 1.0,
            Outcome::Negative => 0.0,
        }
    }

    #[inline]
    pub fn is_positive(self) -> bool {
        self == Outcome::Positive
    }

    pub fn from_sign(sign: i32) -> Option<Self> {
        match sign {
            1 => Some(Outcome::Positive),
            -1 => Some(Outcome::Negative),
            _ => None,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Outcome::Positive => "+1",
            Outcome::Negative => "-1",
        }
    }
}

impl std::str::FromStr for Outcome {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "+1" | "1" => Ok(Outcome::Positive),
            "-1" => Ok(Outcome::Negative),
            other => Err(Error::InvalidOutcome(other.to_string())),
        }
    }
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// Real-valued, margin-scale point forecast. Always finite.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
#[repr(transparent)]
pub struct Prediction(f64);

impl Prediction {
    pub const ZERO: Prediction = Prediction(0.0);

    pub fn new(value: f64) -> Result<Self> {
        if value.is_finite() {
            Ok(Prediction(value))
        } else {
            Err(Error::NonFinitePrediction(value))
        }
    }

    /// Callers must guarantee `value` is finite.
    #[inline]
    pub(crate) fn from_finite(value: f64) -> Self {
        debug_assert!(value.is_finite(), "non-finite prediction {value}");
        Prediction(value)
    }

    #[inline]
    pub fn value(self) -> f64 {
        self.0
    }
}

/// Forecasts of `N` forecasters on `Q` resolved questions.
#[derive(Debug, Clone, PartialEq)]
pub struct ForecastTable {
    question_ids: Vec<String>,
    forecaster_ids: Vec<String>,
    // forecaster-major, N * Q
    forecasts: Vec<Option<Probability>>,
    outcomes: Vec<Outcome>,
}

impl ForecastTable {
    /// `forecasts[j][q]` is forecaster `j`'s forecast for question `q`.
    pub fn new(
        question_ids: Vec<String>,
        forecaster_ids: Vec<String>,
        forecasts: Vec<Vec<Option<Probability>>>,
        outcomes: Vec<Outcome>,
    ) -> Result<Self> {
        check_ids(&question_ids, Error::DuplicateQuestion)?;
        check_ids(&forecaster_ids, Error::DuplicateForecaster)?;
        let q = question_ids.len();
        if outcomes.len() != q {
            return Err(Error::Shape(format!(
                "{} outcomes for {} questions",
                outcomes.len(),
                q
            )));
        }
        if forecasts.len() != forecaster_ids.len() {
            return Err(Error::Shape(format!(
                "{} forecast rows for {} forecasters",
                forecasts.len(),
                forecaster_ids.len()
            )));
        }
        let mut flat = Vec::with_capacity(forecasts.len() * q);
        for (j, row) in forecasts.into_iter().enumerate() {
            if row.len() != q {
                return Err(Error::Shape(format!(
                    "forecaster {:?} has {} forecasts for {} questions",
                    forecaster_ids[j],
                    row.len(),
                    q
                )));
            }
            flat.extend(row);
        }
        Ok(ForecastTable {
            question_ids,
            forecaster_ids,
            forecasts: flat,
            outcomes,
        })
    }

    pub fn n_forecasters(&self) -> usize {
        self.forecaster_ids.len()
    }

    pub fn n_questions(&self) -> usize {
        self.question_ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.forecaster_ids.is_empty() || self.question_ids.is_empty()
    }

    pub fn question_ids(&self) -> &[String] {
        &self.question_ids
    }

    pub fn forecaster_ids(&self) -> &[String] {
        &self.forecaster_ids
    }

    pub fn outcomes(&self) -> &[Outcome] {
        &self.outcomes
    }

    #[inline]
    pub fn forecast(&self, forecaster: usize, question: usize) -> Option<Probability> {
        self.forecasts[forecaster * self.n_questions() + question]
    }

    /// All forecasts of one forecaster, in question order.
    pub fn forecaster_row(&self, forecaster: usize) -> &[Option<Probability>] {
        let q = self.n_questions();
        &self.forecasts[forecaster * q..(forecaster + 1) * q]
    }

    /// Every forecaster's forecast for one question, in forecaster order.
    pub fn question_column(&self, question: usize) -> Vec<Option<Probability>> {
        (0..self.n_forecasters())
            .map(|j| self.forecast(j, question))
            .collect()
    }

    /// Number of present forecasts.
    pub fn coverage_count(&self) -> usize {
        self.forecasts.iter().filter(|c| c.is_some()).count()
    }

    /// The table restricted to `questions`, in the given order.
    pub fn select_questions(&self, questions: &[usize]) -> ForecastTable {
        let forecasts = (0..self.n_forecasters())
            .flat_map(|j| questions.iter().map(move |&q| self.forecast(j, q)))
            .collect();
        ForecastTable {
            question_ids: questions.iter().map(|&q| self.question_ids[q].clone()).collect(),
            forecaster_ids: self.forecaster_ids.clone(),
            forecasts,
            outcomes: questions.iter().map(|&q| self.outcomes[q]).collect(),
        }
    }

    /// The table with question `held_out` removed.
    pub fn without_question(&self, held_out: usize) -> ForecastTable {
        let keep: Vec<usize> = (0..self.n_questions()).filter(|&q| q != held_out).collect();
        self.select_questions(&keep)
    }

    /// Replaces one outcome. Used to build perturbed copies in tests and audits.
    pub fn with_outcome(&self, question: usize, outcome: Outcome) -> ForecastTable {
        let mut table = self.clone();
        table.outcomes[question] = outcome;
        table
    }
}

fn check_ids(ids: &[String], dup: fn(String) -> Error) -> Result<()> {
    let mut seen = HashSet::with_capacity(ids.len());
    for id in ids {
        if id.contains(['\n', '\r']) {
            return Err(Error::InvalidIdentifier(id.clone()));
        }
        if !seen.insert(id.as_str()) {
            return Err(dup(id.clone()));
        }
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ImputationMode {
    /// Substitute 0.5.
    Half,
    /// Substitute a seeded uniform draw.
    Random,
    /// Count the missing forecast as a wrong prediction. Only meaningful for
    /// error counting; [`impute`] rejects it.
    Error,
}

impl ImputationMode {
    pub fn name(self) -> &'static str {
        match self {
            ImputationMode::Half => "half",
            ImputationMode::Random => "random",
            ImputationMode::Error => "error",
        }
    }
}

impl std::str::FromStr for ImputationMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "half" => Ok(ImputationMode::Half),
            "random" => Ok(ImputationMode::Random),
            "error" => Ok(ImputationMode::Error),
            other => Err(format!("unknown imputation mode {other:?}")),
        }
    }
}

impl fmt::Display for ImputationMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ImputationPolicy {
    pub mode: ImputationMode,
    /// Only read in [`ImputationMode::Random`].
    pub seed: u64,
}

impl ImputationPolicy {
    pub const HALF: ImputationPolicy = ImputationPolicy {
        mode: ImputationMode::Half,
        seed: 0,
    };

    pub fn random(seed: u64) -> Self {
        ImputationPolicy {
            mode: ImputationMode::Random,
            seed,
        }
    }
}

/// Dense `N x Q` matrix of probabilities, forecaster-major.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseForecasts {
    n_forecasters: usize,
    n_questions: usize,
    values: Vec<Probability>,
}

impl DenseForecasts {
    pub fn n_forecasters(&self) -> usize {
        self.n_forecasters
    }

    pub fn n_questions(&self) -> usize {
        self.n_questions
    }

    #[inline]
    pub fn get(&self, forecaster: usize, question: usize) -> Probability {
        self.values[forecaster * self.n_questions + question]
    }

    pub fn row(&self, forecaster: usize) -> &[Probability] {
        &self.values[forecaster * self.n_questions..(forecaster + 1) * self.n_questions]
    }

    pub fn values(&self) -> &[Probability] {
        &self.values
    }
}

/// Fills every absent cell of `table` according to `policy`.
///
/// In random mode one uniform value is drawn for *every* cell in
/// forecaster-major order, present or not, so a cell's imputed value does not
/// depend on which other cells happen to be missing.
pub fn impute(table: &ForecastTable, policy: ImputationPolicy) -> Result<DenseForecasts> {
    let values = match policy.mode {
        ImputationMode::Half => table
            .forecasts
            .iter()
            .map(|c| c.unwrap_or(Probability::HALF))
            .collect(),
        ImputationMode::Random => {
            let mut rng = ChaCha8Rng::seed_from_u64(policy.seed);
            table
                .forecasts
                .iter()
                .map(|c| {
                    let draw = Probability(rng.random::<f64>());
                    c.unwrap_or(draw)
                })
                .collect()
        }
        ImputationMode::Error => return Err(Error::UnsupportedImputation(policy.mode)),
    };
    Ok(DenseForecasts {
        n_forecasters: table.n_forecasters(),
        n_questions: table.n_questions(),
        values,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(v: f64) -> Option<Probability> {
        Some(Probability::new(v).unwrap())
    }

    fn small() -> ForecastTable {
        ForecastTable::new(
            vec!["q1".into(), "q2".into(), "q3".into()],
            vec!["a".into(), "b".into()],
            vec![vec![p(0.73), None, p(0.1)], vec![None, p(0.4), None]],
            vec![Outcome::Positive, Outcome::Negative, Outcome::Positive],
        )
        .unwrap()
    }

    #[test]
    fn probability_range_is_enforced() {
        assert!(Probability::new(0.0).is_ok());
        assert!(Probability::new(1.0).is_ok());
        assert!(Probability::new(-1e-12).is_err());
        assert!(Probability::new(1.0 + 1e-12).is_err());
        assert!(Probability::new(f64::NAN).is_err());
    }

    #[test]
    fn prediction_must_be_finite() {
        assert!(Prediction::new(3.0).is_ok());
        assert!(Prediction::new(f64::INFINITY).is_err());
        assert!(Prediction::new(f64::NAN).is_err());
    }

    #[test]
    fn outcome_parsing() {
        assert_eq!("+1".parse::<Outcome>().unwrap(), Outcome::Positive);
        assert_eq!("-1".parse::<Outcome>().unwrap(), Outcome::Negative);
        assert!("0".parse::<Outcome>().is_err());
        assert!("".parse::<Outcome>().is_err());
    }

    #[test]
    fn table_rejects_duplicates_and_bad_shapes() {
        let dup_q = ForecastTable::new(
            vec!["q".into(), "q".into()],
            vec!["a".into()],
            vec![vec![None, None]],
            vec![Outcome::Positive; 2],
        );
        assert!(matches!(dup_q, Err(Error::DuplicateQuestion(_))));

        let dup_f = ForecastTable::new(
            vec!["q".into()],
            vec!["a".into(), "a".into()],
            vec![vec![None], vec![None]],
            vec![Outcome::Positive],
        );
        assert!(matches!(dup_f, Err(Error::DuplicateForecaster(_))));

        let short = ForecastTable::new(
            vec!["q1".into(), "q2".into()],
            vec!["a".into()],
            vec![vec![None]],
            vec![Outcome::Positive; 2],
        );
        assert!(matches!(short, Err(Error::Shape(_))));

        let outcomes = ForecastTable::new(
            vec!["q1".into()],
            vec!["a".into()],
            vec![vec![None]],
            vec![],
        );
        assert!(matches!(outcomes, Err(Error::Shape(_))));
    }

    #[test]
    fn half_imputation_fills_absent_cells() {
        let dense = impute(&small(), ImputationPolicy::HALF).unwrap();
        assert_eq!(dense.get(0, 1).value(), 0.5);
        assert_eq!(dense.get(1, 0).value(), 0.5);
        assert_eq!(dense.get(0, 0).value(), 0.73);
        assert_eq!(dense.get(1, 1).value(), 0.4);
    }

    #[test]
    fn random_imputation_keeps_present_cells_and_is_deterministic() {
        let table = small();
        let a = impute(&table, ImputationPolicy::random(7)).unwrap();
        let b = impute(&table, ImputationPolicy::random(7)).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.get(0, 0).value(), 0.73);
        assert_eq!(a.get(0, 2).value(), 0.1);
        let c = impute(&table, ImputationPolicy::random(8)).unwrap();
        assert_ne!(a, c);
        assert!(a.values().iter().all(|p| (0.0..=1.0).contains(&p.value())));
    }

    #[test]
    fn error_mode_is_rejected() {
        let policy = ImputationPolicy {
            mode: ImputationMode::Error,
            seed: 0,
        };
        assert!(matches!(
            impute(&small(), policy),
            Err(Error::UnsupportedImputation(ImputationMode::Error))
        ));
    }

    #[test]
    fn select_and_drop_questions() {
        let t = small();
        let dropped = t.without_question(1);
        assert_eq!(dropped.question_ids(), &["q1".to_string(), "q3".to_string()]);
        assert_eq!(dropped.forecast(0, 1), p(0.1));
        assert_eq!(dropped.outcomes(), &[Outcome::Positive, Outcome::Positive]);
        assert_eq!(t.question_column(0), vec![p(0.73), None]);
    }
}
