//! Model file layout:
//!
//! ```text
//! # crowdboost model
//! format = 1
//! method = realboost
//! link = exponential
//! clip = 9.9999999999999995e-7
//! imputation = half
//! seed = 0
//! forecasters = 2
//! forecaster = alice
//! forecaster = bob
//! rounds = 1
//! round = 1 1.0000000000000000
//! frozen = 0
//! ```
//!
//! `round` lines are `<forecaster index> <alpha>`; `impute` lines (one per
//! frozen cell, count given by `frozen`) are `<question> <forecaster> <value>`.

use std::fmt::Write as _;
use std::path::Path;

use crate::combiners::{EnsembleModel, FrozenCell, Method, Round};
use crate::domain::{ImputationMode, ImputationPolicy, Probability};
use crate::error::Result;
use crate::links::{LinkKind, LinkSpec};

use super::kv::KvReader;
use super::{format_f64, read_file, write_file};

const FORMAT_VERSION: u32 = 1;

pub fn write_model(model: &EnsembleModel) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "# crowdboost model");
    let _ = writeln!(out, "format = {FORMAT_VERSION}");
    let _ = writeln!(out, "method = {}", model.method);
    let _ = writeln!(out, "link = {}", model.link.kind);
    let _ = writeln!(out, "clip = {}", format_f64(model.link.clip));
    let _ = writeln!(out, "imputation = {}", model.imputation.mode);
    let _ = writeln!(out, "seed = {}", model.imputation.seed);
    let _ = writeln!(out, "forecasters = {}", model.forecaster_ids.len());
    for id in &model.forecaster_ids {
        let _ = writeln!(out, "forecaster = {id}");
    }
    let _ = writeln!(out, "rounds = {}", model.rounds.len());
    for r in &model.rounds {
        let _ = writeln!(out, "round = {} {}", r.forecaster, format_f64(r.alpha));
    }
    let _ = writeln!(out, "frozen = {}", model.frozen_imputations.len());
    for c in &model.frozen_imputations {
        let _ = writeln!(
            out,
            "impute = {} {} {}",
            c.question,
            c.forecaster,
            format_f64(c.value.value())
        );
    }
    out
}

pub fn parse_model(source: &str, text: &str) -> Result<EnsembleModel> {
    let mut kv = KvReader::new(source, text)?;
    let version: u32 = kv.value("format")?;
    if version != FORMAT_VERSION {
        return Err(kv.error(format!("unsupported model format {version}")));
    }
    let method: Method = kv.value("method")?;
    let kind: LinkKind = kv.value("link")?;
    let clip: f64 = kv.value("clip")?;
    let mode: ImputationMode = kv.value("imputation")?;
    let seed: u64 = kv.value("seed")?;

    let n: usize = kv.value("forecasters")?;
    let forecaster_ids = (0..n)
        .map(|_| kv.raw("forecaster").map(str::to_string))
        .collect::<Result<Vec<_>>>()?;

    let m: usize = kv.value("rounds")?;
    let mut rounds = Vec::with_capacity(m);
    for _ in 0..m {
        let f = kv.fields("round", 2)?;
        let forecaster: usize = kv.parse_field("round", f[0])?;
        if forecaster >= n {
            return Err(kv.error(format!("round refers to forecaster {forecaster} of {n}")));
        }
        let alpha: f64 = kv.parse_field("round", f[1])?;
        if !alpha.is_finite() {
            return Err(kv.error("round weight must be finite"));
        }
        rounds.push(Round { forecaster, alpha });
    }

    let k: usize = kv.value("frozen")?;
    let mut frozen_imputations = Vec::with_capacity(k);
    for _ in 0..k {
        let f = kv.fields("impute", 3)?;
        let question: usize = kv.parse_field("impute", f[0])?;
        let forecaster: usize = kv.parse_field("impute", f[1])?;
        let raw: f64 = kv.parse_field("impute", f[2])?;
        let value = Probability::new(raw).map_err(|e| kv.error(e.to_string()))?;
        frozen_imputations.push(FrozenCell {
            question,
            forecaster,
            value,
        });
    }
    kv.finish()?;

    Ok(EnsembleModel {
        method,
        rounds,
        link: LinkSpec::new(kind).with_clip(clip),
        imputation: ImputationPolicy { mode, seed },
        frozen_imputations,
        forecaster_ids,
    })
}

pub fn save_model(model: &EnsembleModel, path: impl AsRef<Path>) -> Result<()> {
    write_file(path.as_ref(), &write_model(model))
}

pub fn load_model(path: impl AsRef<Path>) -> Result<EnsembleModel> {
    let path = path.as_ref();
    parse_model(&path.display().to_string(), &read_file(path)?)
}
