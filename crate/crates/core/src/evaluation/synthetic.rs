//! Seeded synthetic forecaster populations.
//!
//! Each question resolves `y = ±1` with probability ½. Forecaster `j` sees a
//! private signal `o = y + σⱼ·ε` and reports its exact posterior
//! `P(y = +1 | o) = 1 / (1 + e^(−2o/σⱼ²))`. Every forecaster is therefore
//! calibrated, and the signals are independent given the outcome, so pooling
//! forecasters adds information. With `noise = 0` every forecast is exactly
//! 0 or 1 and always right.
//!
//! * [`DifferenceType::Type2`]: σⱼ = noise · 2 · U(0.5, 1.5), independent
//!   feature noise per forecaster.
//! * [`DifferenceType::Type1`]: all forecasters share one history of 32
//!   standard-normal residuals; forecaster `j` bootstraps it and σⱼ = noise ·
//!   2 · RMS of its resample.

use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::domain::{ForecastTable, Outcome, Probability};
use crate::error::{Error, Result};

/// Typical channel noise σ at `noise = 1`.
pub const CHANNEL_SCALE: f64 = 2.0;
const HISTORY_LEN: usize = 32;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DifferenceType {
    /// Forecasters differ in the data they learned from.
    Type1,
    /// Forecasters differ in the features they observe.
    Type2,
}

impl std::str::FromStr for DifferenceType {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "type1" => Ok(DifferenceType::Type1),
            "type2" => Ok(DifferenceType::Type2),
            other => Err(format!("unknown difference type {other:?}")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SyntheticSpec {
    pub forecasters: usize,
    pub questions: usize,
    pub mode: DifferenceType,
    pub noise: f64,
    /// Fraction of questions each forecaster answers, in (0, 1].
    pub coverage: f64,
    pub seed: u64,
}

impl Default for SyntheticSpec {
    fn default() -> Self {
        SyntheticSpec {
            forecasters: 50,
            questions: 200,
            mode: DifferenceType::Type2,
            noise: 1.0,
            coverage: 1.0,
            seed: 0,
        }
    }
}

impl SyntheticSpec {
    pub fn validate(&self) -> Result<()> {
        if self.forecasters == 0 {
            return Err(Error::InvalidSynthetic("need at least one forecaster".into()));
        }
        if self.questions == 0 {
            return Err(Error::InvalidSynthetic("need at least one question".into()));
        }
        if !(self.noise.is_finite() && self.noise >= 0.0) {
            return Err(Error::InvalidSynthetic(format!(
                "noise must be finite and non-negative, got {}",
                self.noise
            )));
        }
        if !(self.coverage > 0.0 && self.coverage <= 1.0) {
            return Err(Error::InvalidSynthetic(format!(
                "coverage must be in (0, 1], got {}",
                self.coverage
            )));
        }
        Ok(())
    }

    /// Questions answered by each forecaster.
    pub fn answered_per_forecaster(&self) -> usize {
        ((self.coverage * self.questions as f64).round() as usize).clamp(1, self.questions)
    }
}

/// P(y = +1 | o) for a signal with noise scale `sigma`.
fn posterior(signal: f64, sigma: f64) -> f64 {
    if sigma == 0.0 {
        return if signal > 0.0 { 1.0 } else { 0.0 };
    }
    1.0 / (1.0 + (-2.0 * signal / (sigma * sigma)).exp())
}

pub fn generate_synthetic(spec: &SyntheticSpec) -> Result<ForecastTable> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let q = spec.questions;

    let outcomes: Vec<Outcome> = (0..q)
        .map(|_| {
            if rng.random_bool(0.5) {
                Outcome::Positive
            } else {
                Outcome::Negative
            }
        })
        .collect();
    let history: Vec<f64> = (0..HISTORY_LEN).map(|_| rng.sample(StandardNormal)).collect();

    let answered = spec.answered_per_forecaster();
    let mut rows = Vec::with_capacity(spec.forecasters);
    for _ in 0..spec.forecasters {
        let scale = match spec.mode {
            DifferenceType::Type2 => rng.random_range(0.5..1.5),
            DifferenceType::Type1 => {
                let ss: f64 = (0..HISTORY_LEN)
                    .map(|_| {
                        let h = history[rng.random_range(0..HISTORY_LEN)];
                        h * h
                    })
                    .sum();
                (ss / HISTORY_LEN as f64).sqrt()
            }
        };
        let sigma = spec.noise * CHANNEL_SCALE * scale;
        let forecasts: Vec<f64> = outcomes
            .iter()
            .map(|y| {
                let eps: f64 = rng.sample(StandardNormal);
                posterior(y.sign() + sigma * eps, sigma)
            })
            .collect();
        let mut row = vec![None; q];
        for k in index::sample(&mut rng, q, answered) {
            row[k] = Some(Probability::saturating(forecasts[k]));
        }
        rows.push(row);
    }

    ForecastTable::new(
        (0..q).map(|k| format!("q{k}")).collect(),
        (0..spec.forecasters).map(|j| format!("f{j}")).collect(),
        rows,
        outcomes,
    )
}
