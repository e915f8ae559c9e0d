//! Report files written by the `loo`, `score` and `predict` commands.

use std::fmt::Write as _;

use crate::combiners::Method;
use crate::domain::{Outcome, Probability};
use crate::error::Result;
use crate::evaluation::{EvalReport, QuestionResult};
use crate::scoring::{BinSummary, ScoreReport};

use super::format_f64;
use super::kv::{opt_field, KvReader};

const FORMAT_VERSION: u32 = 1;

fn check_format(kv: &mut KvReader<'_>) -> Result<()> {
    let version: u32 = kv.value("format")?;
    if version != FORMAT_VERSION {
        return Err(kv.error(format!("unsupported report format {version}")));
    }
    Ok(())
}

fn parse_probability(kv: &KvReader<'_>, key: &str, raw: &str) -> Result<Probability> {
    let v: f64 = kv.parse_field(key, raw)?;
    Probability::new(v).map_err(|e| kv.error(e.to_string()))
}

fn parse_opt<T: std::str::FromStr>(kv: &KvReader<'_>, key: &str, raw: &str) -> Result<Option<T>>
where
    T::Err: std::fmt::Display,
{
    if raw == "-" {
        Ok(None)
    } else {
        kv.parse_field(key, raw).map(Some)
    }
}

// ---------------------------------------------------------------------------
// leave-one-out report

/// ```text
/// question = <predicted> <truth> <probability> <question id>
/// ```
pub fn write_eval_report(report: &EvalReport) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "# crowdboost leave-one-out report");
    let _ = writeln!(out, "format = {FORMAT_VERSION}");
    let _ = writeln!(out, "method = {}", report.method);
    let _ = writeln!(out, "iterations = {}", report.iterations);
    let _ = writeln!(out, "seed = {}", report.seed);
    let _ = writeln!(out, "total_questions = {}", report.total_questions);
    let _ = writeln!(out, "prediction_errors = {}", report.prediction_errors);
    let _ = writeln!(out, "avg_unique_forecasters = {}", format_f64(report.avg_unique_forecasters));
    let _ = writeln!(out, "best_individual_errors = {}", report.best_individual_errors);
    let _ = writeln!(out, "mean_individual_errors = {}", format_f64(report.mean_individual_errors));
    for r in &report.per_question {
        let _ = writeln!(
            out,
            "question = {} {} {} {}",
            r.predicted,
            r.truth,
            format_f64(r.probability.value()),
            r.question_id
        );
    }
    out
}

pub fn parse_eval_report(source: &str, text: &str) -> Result<EvalReport> {
    let mut kv = KvReader::new(source, text)?;
    check_format(&mut kv)?;
    let method: Method = kv.value("method")?;
    let iterations = kv.value("iterations")?;
    let seed = kv.value("seed")?;
    let total_questions: usize = kv.value("total_questions")?;
    let prediction_errors = kv.value("prediction_errors")?;
    let avg_unique_forecasters = kv.value("avg_unique_forecasters")?;
    let best_individual_errors = kv.value("best_individual_errors")?;
    let mean_individual_errors = kv.value("mean_individual_errors")?;
    let mut per_question = Vec::with_capacity(total_questions);
    for _ in 0..total_questions {
        let f = kv.fields("question", 4)?;
        per_question.push(QuestionResult {
            predicted: kv.parse_field("question", f[0])?,
            truth: kv.parse_field("question", f[1])?,
            probability: parse_probability(&kv, "question", f[2])?,
            question_id: f[3].to_string(),
        });
    }
    kv.finish()?;
    Ok(EvalReport {
        method,
        iterations,
        seed,
        total_questions,
        prediction_errors,
        avg_unique_forecasters,
        per_question,
        best_individual_errors,
        mean_individual_errors,
    })
}

// ---------------------------------------------------------------------------
// score decomposition

fn write_score_body(out: &mut String, report: &ScoreReport) {
    let _ = writeln!(out, "total = {}", format_f64(report.total));
    let _ = writeln!(out, "calibration = {}", format_f64(report.calibration));
    let _ = writeln!(out, "refinement = {}", format_f64(report.refinement));
    for b in &report.per_bin {
        let _ = writeln!(
            out,
            "bin = {} {} {} {}",
            format_f64(b.center),
            b.count,
            opt_field(b.frequency.map(format_f64)),
            opt_field(b.mean_forecast.map(format_f64)),
        );
    }
}

fn parse_score_body(kv: &mut KvReader<'_>, bins: usize) -> Result<ScoreReport> {
    let total = kv.value("total")?;
    let calibration = kv.value("calibration")?;
    let refinement = kv.value("refinement")?;
    let mut per_bin = Vec::with_capacity(bins);
    for _ in 0..bins {
        let f = kv.fields("bin", 4)?;
        per_bin.push(BinSummary {
            center: kv.parse_field("bin", f[0])?,
            count: kv.parse_field("bin", f[1])?,
            frequency: parse_opt(kv, "bin", f[2])?,
            mean_forecast: parse_opt(kv, "bin", f[3])?,
        });
    }
    Ok(ScoreReport {
        total,
        calibration,
        refinement,
        bins,
        per_bin,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct ForecasterScore {
    pub forecaster_id: String,
    /// Number of questions the forecaster answered.
    pub answered: usize,
    /// `None` when the forecaster answered nothing.
    pub report: Option<ScoreReport>,
}

/// Per-forecaster decompositions produced by the `score` command.
#[derive(Debug, Clone, PartialEq)]
pub struct ScoreSummary {
    pub bins: usize,
    pub forecasters: Vec<ForecasterScore>,
}

pub fn write_score_report(summary: &ScoreSummary) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "# crowdboost score report");
    let _ = writeln!(out, "format = {FORMAT_VERSION}");
    let _ = writeln!(out, "bins = {}", summary.bins);
    let _ = writeln!(out, "forecasters = {}", summary.forecasters.len());
    for f in &summary.forecasters {
        let _ = writeln!(out, "forecaster = {}", f.forecaster_id);
        let _ = writeln!(out, "answered = {}", f.answered);
        if let Some(r) = &f.report {
            write_score_body(&mut out, r);
        }
    }
    out
}

pub fn parse_score_report(source: &str, text: &str) -> Result<ScoreSummary> {
    let mut kv = KvReader::new(source, text)?;
    check_format(&mut kv)?;
    let bins: usize = kv.value("bins")?;
    let n: usize = kv.value("forecasters")?;
    let mut forecasters = Vec::with_capacity(n);
    for _ in 0..n {
        let forecaster_id = kv.raw("forecaster")?.to_string();
        let answered: usize = kv.value("answered")?;
        let report = if answered > 0 {
            Some(parse_score_body(&mut kv, bins)?)
        } else {
            None
        };
        forecasters.push(ForecasterScore {
            forecaster_id,
            answered,
            report,
        });
    }
    kv.finish()?;
    Ok(ScoreSummary { bins, forecasters })
}

// ---------------------------------------------------------------------------
// predictions

#[derive(Debug, Clone, PartialEq)]
pub struct PredictionRow {
    pub question_id: String,
    pub margin: f64,
    pub probability: Probability,
    pub predicted: Outcome,
    pub truth: Option<Outcome>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PredictionReport {
    pub method: Method,
    pub rows: Vec<PredictionRow>,
    /// Present when outcomes were supplied.
    pub errors: Option<usize>,
    /// Exponential-rule decomposition of the ensemble probabilities, present
    /// when outcomes were supplied.
    pub score: Option<ScoreReport>,
}

/// ```text
/// prediction = <margin> <probability> <predicted> <truth or -> <question id>
/// ```
pub fn write_prediction_report(report: &PredictionReport) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "# crowdboost predictions");
    let _ = writeln!(out, "format = {FORMAT_VERSION}");
    let _ = writeln!(out, "method = {}", report.method);
    let _ = writeln!(out, "questions = {}", report.rows.len());
    for r in &report.rows {
        let _ = writeln!(
            out,
            "prediction = {} {} {} {} {}",
            format_f64(r.margin),
            format_f64(r.probability.value()),
            r.predicted,
            opt_field(r.truth.map(|t| t.to_string())),
            r.question_id
        );
    }
    if let (Some(errors), Some(score)) = (report.errors, &report.score) {
        let _ = writeln!(out, "errors = {errors}");
        let _ = writeln!(out, "bins = {}", score.bins);
        write_score_body(&mut out, score);
    }
    out
}

pub fn parse_prediction_report(source: &str, text: &str) -> Result<PredictionReport> {
    let mut kv = KvReader::new(source, text)?;
    check_format(&mut kv)?;
    let method: Method = kv.value("method")?;
    let n: usize = kv.value("questions")?;
    let mut rows = Vec::with_capacity(n);
    for _ in 0..n {
        let f = kv.fields("prediction", 5)?;
        rows.push(PredictionRow {
            margin: kv.parse_field("prediction", f[0])?,
            probability: parse_probability(&kv, "prediction", f[1])?,
            predicted: kv.parse_field("prediction", f[2])?,
            truth: parse_opt(&kv, "prediction", f[3])?,
            question_id: f[4].to_string(),
        });
    }
    let (errors, score) = if kv.peek_key() == Some("errors") {
        let errors = kv.value("errors")?;
        let bins = kv.value("bins")?;
        (Some(errors), Some(parse_score_body(&mut kv, bins)?))
    } else {
        (None, None)
    };
    kv.finish()?;
    Ok(PredictionReport {
        method,
        rows,
        errors,
        score,
    })
}
