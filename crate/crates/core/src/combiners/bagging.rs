use super::{EnsembleModel, Method, Round};
use crate::domain::{ForecastTable, ImputationPolicy};
use crate::error::{Error, Result};
use crate::links::LinkSpec;

/// Equal-weight average of every forecaster. Missing forecasts count as 0.5.
///
/// Bagging has no trainable state: the outcomes of `table` are ignored and
/// only its forecaster pool is recorded.
pub fn bag(table: &ForecastTable) -> Result<EnsembleModel> {
    let n = table.n_forecasters();
    if n == 0 {
        return Err(Error::Empty("table has no forecasters"));
    }
    let alpha = 1.0 / n as f64;
    Ok(EnsembleModel {
        method: Method::Bagging,
        rounds: (0..n).map(|forecaster| Round { forecaster, alpha }).collect(),
        link: LinkSpec::linear(),
        imputation: ImputationPolicy::HALF,
        frozen_imputations: Vec::new(),
        forecaster_ids: table.forecaster_ids().to_vec(),
    })
}
