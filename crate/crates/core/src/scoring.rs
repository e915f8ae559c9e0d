//! Empirical forecaster scores and their calibration/refinement split.
//!
//! Forecasts are grouped into `B` equal-width bins on `[0, 1]` (a forecast of
//! exactly 1.0 falls in the top bin). For bin `b` with `n_b` members, mean
//! forecast `m_b` and observed event frequency `f_b`:
//!
//! ```text
//! calibration = Σ_b (n_b / n) · [ I(f_b, m_b) − J(f_b) ]      (≤ 0)
//! refinement  = Σ_b (n_b / n) · J(f_b)
//! total       = calibration + refinement
//! ```
//!
//! where `I(η, η̂) = η·I₁(η̂) + (1 − η)·I₋₁(η̂)`. The total equals the empirical
//! score of a forecaster that reports `m_b` for every member of bin `b`.
//! Empty bins contribute nothing.

use crate::domain::{Outcome, Probability};
use crate::error::{Error, Result};
use crate::links::ScoringRule;

pub const DEFAULT_BINS: usize = 10;

#[derive(Debug, Clone, PartialEq)]
pub struct BinSummary {
    pub center: f64,
    pub count: usize,
    /// Observed frequency of `y = +1`; `None` for an empty bin.
    pub frequency: Option<f64>,
    /// Mean member forecast; `None` for an empty bin.
    pub mean_forecast: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScoreReport {
    pub total: f64,
    pub calibration: f64,
    pub refinement: f64,
    pub bins: usize,
    pub per_bin: Vec<BinSummary>,
}

fn check_lengths(forecasts: &[Probability], outcomes: &[Outcome]) -> Result<()> {
    if forecasts.is_empty() {
        return Err(Error::Empty("no forecasts to score"));
    }
    if forecasts.len() != outcomes.len() {
        return Err(Error::Shape(format!(
            "{} forecasts for {} outcomes",
            forecasts.len(),
            outcomes.len()
        )));
    }
    Ok(())
}

/// Mean score (1/n)·Σ I_{yᵢ}(η̂ᵢ).
pub fn empirical_score(
    forecasts: &[Probability],
    outcomes: &[Outcome],
    rule: &ScoringRule,
) -> Result<f64> {
    check_lengths(forecasts, outcomes)?;
    let sum: f64 = forecasts
        .iter()
        .zip(outcomes)
        .map(|(f, &y)| rule.score(y, f.value()))
        .sum();
    Ok(sum / forecasts.len() as f64)
}

/// Index of the equal-width bin holding `p`.
#[inline]
pub fn bin_index(p: f64, bins: usize) -> usize {
    ((p * bins as f64) as usize).min(bins - 1)
}

pub fn decompose(
    forecasts: &[Probability],
    outcomes: &[Outcome],
    rule: &ScoringRule,
    bins: usize,
) -> Result<ScoreReport> {
    check_lengths(forecasts, outcomes)?;
    if bins < 1 {
        return Err(Error::ZeroBins);
    }

    let mut count = vec![0usize; bins];
    let mut positives = vec![0usize; bins];
    let mut forecast_sum = vec![0.0f64; bins];
    for (f, y) in forecasts.iter().zip(outcomes) {
        let b = bin_index(f.value(), bins);
        count[b] += 1;
        forecast_sum[b] += f.value();
        if y.is_positive() {
            positives[b] += 1;
        }
    }

    let n = forecasts.len() as f64;
    let width = 1.0 / bins as f64;
    let mut calibration = 0.0;
    let mut refinement = 0.0;
    let mut per_bin = Vec::with_capacity(bins);
    for b in 0..bins {
        let center = (b as f64 + 0.5) * width;
        if count[b] == 0 {
            per_bin.push(BinSummary {
                center,
                count: 0,
                frequency: None,
                mean_forecast: None,
            });
            continue;
        }
        let share = count[b] as f64 / n;
        let freq = positives[b] as f64 / count[b] as f64;
        let mean = forecast_sum[b] / count[b] as f64;
        let j = rule.j(freq);
        calibration += share * (rule.expected_score(freq, mean) - j);
        refinement += share * j;
        per_bin.push(BinSummary {
            center,
            count: count[b],
            frequency: Some(freq),
            mean_forecast: Some(mean),
        });
    }

    Ok(ScoreReport {
        total: calibration + refinement,
        calibration,
        refinement,
        bins,
        per_bin,
    })
}
