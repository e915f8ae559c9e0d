//! Ensemble probability forecasters.
//!
//! Combines a pool of probability forecasters with bagging (plain averaging),
//! AdaBoost and RealBoost, and evaluates forecasters with proper scoring rules
//! split into calibration and refinement.
//!
//! ```
//! use crowdboost::{bag, ensemble_predict, ForecastTable, Outcome, Probability};
//!
//! let p = |v| Some(Probability::new(v).unwrap());
//! let table = ForecastTable::new(
//!     vec!["q1".into()],
//!     vec!["alice".into(), "bob".into()],
//!     vec![vec![p(0.9)], vec![None]],
//!     vec![Outcome::Positive],
//! )
//! .unwrap();
//! let model = bag(&table).unwrap();
//! let (_, prob) = ensemble_predict(&model, &table.question_column(0)).unwrap();
//! assert!((prob.value() - 0.7).abs() < 1e-12);
//! ```

pub mod combiners;
pub mod domain;
pub mod error;
pub mod evaluation;
pub mod io;
pub mod links;
pub mod predict;
pub mod scoring;

pub use combiners::{
    adaboost_train, bag, classify, ensemble_predict, ensemble_predict_keyed, realboost_train,
    train, BoostTrace, EnsembleModel, Method, Round,
};
pub use domain::{
    impute, DenseForecasts, ForecastTable, ImputationMode, ImputationPolicy, Outcome, Prediction,
    Probability,
};
pub use error::{Error, Result};
pub use evaluation::{
    generate_synthetic, individual_baseline, loo_evaluate, DifferenceType, EvalReport,
    SyntheticSpec,
};
pub use links::{
    conditional_risk, make_link, reconstruct_loss, savage_scores, LinkKind, LinkSpec, ScoringRule,
};
pub use scoring::{decompose, empirical_score, ScoreReport};
