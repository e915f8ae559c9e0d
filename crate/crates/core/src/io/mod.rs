//! File formats: forecast/outcome CSVs, model files and report files.
//!
//! Models and reports are line-oriented `key = value` text. Lines starting with
//! `#` and blank lines are ignored. Floating-point values are written with 17
//! significant digits so that parsing a written file reproduces every value
//! bit for bit. Repeated keys (`round`, `question`, ...) keep their order.

mod kv;
mod model;
mod report;
mod table;

pub use model::{load_model, parse_model, save_model, write_model};
pub use report::{
    parse_eval_report, parse_prediction_report, parse_score_report, write_eval_report,
    write_prediction_report, write_score_report, ForecasterScore, PredictionReport,
    PredictionRow, ScoreSummary,
};
pub use table::{load_forecasts, load_outcomes, load_table, write_table_csv, ForecastMatrix, SynthPaths};

use std::path::Path;

use crate::error::{Error, Result};

/// Formats `x` with 17 significant digits, positionally when the decimal
/// exponent is in `-5..=16` and in scientific notation otherwise.
pub fn format_f64(x: f64) -> String {
    if !x.is_finite() {
        return x.to_string();
    }
    if x == 0.0 {
        return if x.is_sign_negative() { "-0".into() } else { "0".into() };
    }
    let sci = format!("{x:.16e}");
    let exp: i32 = sci[sci.find('e').expect("exponent") + 1..]
        .parse()
        .expect("integer exponent");
    if (-5..=16).contains(&exp) {
        format!("{:.*}", (16 - exp) as usize, x)
    } else {
        sci
    }
}

pub(crate) fn write_file(path: &Path, contents: &str) -> Result<()> {
    std::fs::write(path, contents).map_err(|e| Error::io(path, e))
}

pub(crate) fn read_file(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::io(path, e))
}
