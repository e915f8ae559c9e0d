//! Proper losses: matched (loss, optimal link, inverse link, minimum
//! conditional risk) families and the Savage scoring rules they induce.
//!
//! Two families are provided:
//!
//! | family        | loss φ(v)   | link f*(η)        | inverse          | C*(η)          |
//! |---------------|-------------|-------------------|------------------|----------------|
//! | `exponential` | e^(−v)      | ½·ln(η/(1−η))     | e^(2v)/(1+e^(2v))| 2√(η(1−η))     |
//! | `linear`      | (1−v)²      | 2η−1              | (v+1)/2, clamped | 4η(1−η)        |
//!
//! The exponential link clips η to `[δ, 1−δ]` before taking the logarithm so
//! that every prediction is finite (|v| ≤ ½·ln((1−δ)/δ) ≈ 6.91 for the default
//! δ = 1e−6).

use std::fmt;
use std::sync::Arc;

use crate::domain::{Outcome, Prediction, Probability};
use crate::error::{Error, Result};

/// Default probability clipping bound for the logarithmic link.
pub const DEFAULT_CLIP: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LinkKind {
    Exponential,
    Linear,
}

impl LinkKind {
    pub fn name(self) -> &'static str {
        match self {
            LinkKind::Exponential => "exponential",
            LinkKind::Linear => "linear",
        }
    }
}

impl std::str::FromStr for LinkKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exponential" => Ok(LinkKind::Exponential),
            "linear" => Ok(LinkKind::Linear),
            other => Err(Error::UnknownLink(other.to_string())),
        }
    }
}

impl fmt::Display for LinkKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A margin loss together with its optimal link, inverse link and minimum
/// conditional risk.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinkSpec {
    pub kind: LinkKind,
    pub clip: f64,
}

impl LinkSpec {
    pub const fn new(kind: LinkKind) -> Self {
        LinkSpec {
            kind,
            clip: DEFAULT_CLIP,
        }
    }

    pub const fn exponential() -> Self {
        Self::new(LinkKind::Exponential)
    }

    pub const fn linear() -> Self {
        Self::new(LinkKind::Linear)
    }

    pub fn with_clip(mut self, clip: f64) -> Self {
        self.clip = clip;
        self
    }

    /// Margin loss φ(v).
    pub fn loss(&self, v: f64) -> f64 {
        match self.kind {
            LinkKind::Exponential => (-v).exp(),
            LinkKind::Linear => (1.0 - v) * (1.0 - v),
        }
    }

    /// Optimal link f*(η).
    pub fn link(&self, eta: Probability) -> Prediction {
        let v = match self.kind {
            LinkKind::Exponential => {
                let e = eta.clipped(self.clip);
                0.5 * (e / (1.0 - e)).ln()
            }
            LinkKind::Linear => 2.0 * eta.value() - 1.0,
        };
        Prediction::from_finite(v)
    }

    /// Inverse link (f*)⁻¹(v).
    pub fn inverse(&self, v: Prediction) -> Probability {
        Probability::saturating(self.inverse_raw(v.value()))
    }

    pub(crate) fn inverse_raw(&self, v: f64) -> f64 {
        match self.kind {
            // e^(2v) / (1 + e^(2v)) written to avoid overflow for large v
            LinkKind::Exponential => 1.0 / (1.0 + (-2.0 * v).exp()),
            LinkKind::Linear => ((v + 1.0) / 2.0).clamp(0.0, 1.0),
        }
    }

    /// Minimum conditional risk C*φ(η).
    pub fn min_cond_risk(&self, eta: f64) -> f64 {
        match self.kind {
            LinkKind::Exponential => 2.0 * (eta * (1.0 - eta)).sqrt(),
            LinkKind::Linear => 4.0 * eta * (1.0 - eta),
        }
    }

    /// Analytic derivative of C*φ.
    pub fn min_cond_risk_derivative(&self, eta: f64) -> f64 {
        match self.kind {
            LinkKind::Exponential => (1.0 - 2.0 * eta) / (eta * (1.0 - eta)).sqrt(),
            LinkKind::Linear => 4.0 - 8.0 * eta,
        }
    }

    /// Scoring rule with J = −C*φ, the rule this loss is equivalent to.
    pub fn scoring_rule(&self) -> ScoringRule {
        let link = *self;
        savage_scores(
            move |eta| -link.min_cond_risk(eta),
            move |eta| -link.min_cond_risk_derivative(eta),
        )
        .with_clip(self.clip)
    }
}

pub fn make_link(name: &str) -> Result<LinkSpec> {
    Ok(LinkSpec::new(name.parse()?))
}

/// Rebuilds φ(v) from the link and minimum conditional risk alone:
/// φ(v) = C*(η) + (1 − η)·C*′(η) with η = (f*)⁻¹(v).
///
/// Accurate while the inverse link stays inside (0, 1), i.e. |v| ≲ 18 for the
/// exponential family.
pub fn reconstruct_loss(link: &LinkSpec, v: f64) -> f64 {
    let eta = link.inverse_raw(v);
    link.min_cond_risk(eta) + (1.0 - eta) * link.min_cond_risk_derivative(eta)
}

/// η·φ(v) + (1 − η)·φ(−v).
pub fn conditional_risk(link: &LinkSpec, eta: Probability, v: Prediction) -> f64 {
    let eta = eta.value();
    eta * link.loss(v.value()) + (1.0 - eta) * link.loss(-v.value())
}

type RealFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// Savage pair (I₁, I₋₁) generated by a convex function J.
///
/// I₁(η̂) = J(η̂) + (1 − η̂)·J′(η̂) and I₋₁(η̂) = J(η̂) − η̂·J′(η̂). When a clip
/// bound is set, η̂ is restricted to `[clip, 1 − clip]` before evaluating either
/// score; J itself is never clipped.
#[derive(Clone)]
pub struct ScoringRule {
    convex: RealFn,
    derivative: RealFn,
    clip: Option<f64>,
}

impl fmt::Debug for ScoringRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ScoringRule")
            .field("clip", &self.clip)
            .finish_non_exhaustive()
    }
}

/// Builds the scoring rule of a convex `j` whose derivative is `dj`.
pub fn savage_scores<J, D>(j: J, dj: D) -> ScoringRule
where
    J: Fn(f64) -> f64 + Send + Sync + 'static,
    D: Fn(f64) -> f64 + Send + Sync + 'static,
{
    ScoringRule {
        convex: Arc::new(j),
        derivative: Arc::new(dj),
        clip: None,
    }
}

impl ScoringRule {
    /// J(η) = −2√(η(1−η)), the rule matching the exponential loss.
    pub fn exponential() -> Self {
        LinkSpec::exponential().scoring_rule()
    }

    pub fn with_clip(mut self, clip: f64) -> Self {
        self.clip = Some(clip);
        self
    }

    pub fn clip(&self) -> Option<f64> {
        self.clip
    }

    #[inline]
    fn clipped(&self, eta_hat: f64) -> f64 {
        match self.clip {
            Some(d) => eta_hat.clamp(d, 1.0 - d),
            None => eta_hat,
        }
    }

    /// J(η).
    pub fn j(&self, eta: f64) -> f64 {
        (self.convex)(eta)
    }

    /// J′(η).
    pub fn j_prime(&self, eta: f64) -> f64 {
        (self.derivative)(eta)
    }

    /// I₁(η̂): score received when the event happens.
    pub fn score_positive(&self, eta_hat: f64) -> f64 {
        let e = self.clipped(eta_hat);
        self.j(e) + (1.0 - e) * self.j_prime(e)
    }

    /// I₋₁(η̂): score received when the event does not happen.
    pub fn score_negative(&self, eta_hat: f64) -> f64 {
        let e = self.clipped(eta_hat);
        self.j(e) - e * self.j_prime(e)
    }

    pub fn score(&self, outcome: Outcome, eta_hat: f64) -> f64 {
        match outcome {
            Outcome::Positive => self.score_positive(eta_hat),
            Outcome::Negative => self.score_negative(eta_hat),
        }
    }

    /// I(η, η̂) = η·I₁(η̂) + (1 − η)·I₋₁(η̂).
    pub fn expected_score(&self, eta: f64, eta_hat: f64) -> f64 {
        eta * self.score_positive(eta_hat) + (1.0 - eta) * self.score_negative(eta_hat)
    }
}
