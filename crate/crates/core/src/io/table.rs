use std::collections::HashMap;
use std::path::{Path, PathBuf};

use crate::domain::{ForecastTable, Outcome, Probability};
use crate::error::{Error, Result};

use super::format_f64;

const FORECAST_HEADER: [&str; 3] = ["question_id", "forecaster_id", "probability"];
const OUTCOME_HEADER: [&str; 2] = ["question_id", "outcome"];

/// Forecasts read without outcomes. Questions and forecasters are ordered by
/// first appearance in the file.
#[derive(Debug, Clone, PartialEq)]
pub struct ForecastMatrix {
    pub question_ids: Vec<String>,
    pub forecaster_ids: Vec<String>,
    /// `rows[j][q]`, forecaster-major.
    pub rows: Vec<Vec<Option<Probability>>>,
}

impl ForecastMatrix {
    /// Forecasts for question `q`, reordered to match `forecaster_ids`.
    /// Forecasters absent from the file yield `None`.
    pub fn aligned_column(&self, q: usize, forecaster_ids: &[String]) -> Vec<Option<Probability>> {
        let index: HashMap<&str, usize> = self
            .forecaster_ids
            .iter()
            .enumerate()
            .map(|(j, id)| (id.as_str(), j))
            .collect();
        forecaster_ids
            .iter()
            .map(|id| index.get(id.as_str()).and_then(|&j| self.rows[j][q]))
            .collect()
    }
}

fn open_csv(path: &Path) -> Result<csv::Reader<std::fs::File>> {
    let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
    Ok(csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(false)
        .from_reader(file))
}

fn csv_error(path: &Path, err: csv::Error) -> Error {
    let line = err.position().map_or(0, |p| p.line());
    match err.into_kind() {
        csv::ErrorKind::Io(e) => Error::io(path, e),
        kind => Error::parse(path.display(), line, format!("{kind:?}")),
    }
}

fn check_header(
    path: &Path,
    reader: &mut csv::Reader<std::fs::File>,
    expected: &[&str],
) -> Result<()> {
    let header = reader.headers().map_err(|e| csv_error(path, e))?;
    if header.iter().ne(expected.iter().copied()) {
        return Err(Error::parse(
            path.display(),
            1,
            format!("header must be `{}`", expected.join(",")),
        ));
    }
    Ok(())
}

fn parse_probability(path: &Path, line: u64, raw: &str) -> Result<Option<Probability>> {
    let raw = raw.trim();
    if raw.is_empty() {
        return Ok(None);
    }
    let value: f64 = raw
        .parse()
        .map_err(|_| Error::parse(path.display(), line, format!("probability {raw:?} is not a number")))?;
    Probability::new(value)
        .map(Some)
        .map_err(|_| Error::parse(path.display(), line, format!("probability {raw} is outside [0, 1]")))
}

pub fn load_forecasts(path: impl AsRef<Path>) -> Result<ForecastMatrix> {
    let path = path.as_ref();
    let mut reader = open_csv(path)?;
    check_header(path, &mut reader, &FORECAST_HEADER)?;

    let mut questions: HashMap<String, usize> = HashMap::new();
    let mut forecasters: HashMap<String, usize> = HashMap::new();
    let mut matrix = ForecastMatrix {
        question_ids: Vec::new(),
        forecaster_ids: Vec::new(),
        rows: Vec::new(),
    };
    let mut cells: Vec<(usize, usize, Option<Probability>)> = Vec::new();
    let mut seen: HashMap<(usize, usize), u64> = HashMap::new();

    for record in reader.records() {
        let record = record.map_err(|e| csv_error(path, e))?;
        let line = record.position().map_or(0, |p| p.line());
        let (qid, fid) = (&record[0], &record[1]);
        for id in [qid, fid] {
            if id.contains(['\n', '\r']) {
                return Err(Error::parse(path.display(), line, format!("identifier {id:?} contains a line break")));
            }
        }
        let next_q = questions.len();
        let q = *questions.entry(qid.to_string()).or_insert_with(|| {
            matrix.question_ids.push(qid.to_string());
            next_q
        });
        let next_f = forecasters.len();
        let f = *forecasters.entry(fid.to_string()).or_insert_with(|| {
            matrix.forecaster_ids.push(fid.to_string());
            next_f
        });
        if let Some(first) = seen.insert((q, f), line) {
            return Err(Error::parse(
                path.display(),
                line,
                format!("duplicate forecast for question {qid:?} by forecaster {fid:?} (first on line {first})"),
            ));
        }
        cells.push((q, f, parse_probability(path, line, &record[2])?));
    }

    let nq = matrix.question_ids.len();
    matrix.rows = vec![vec![None; nq]; matrix.forecaster_ids.len()];
    for (q, f, p) in cells {
        matrix.rows[f][q] = p;
    }
    Ok(matrix)
}

/// Outcome rows in file order.
pub fn load_outcomes(path: impl AsRef<Path>) -> Result<Vec<(String, Outcome)>> {
    let path = path.as_ref();
    let mut reader = open_csv(path)?;
    check_header(path, &mut reader, &OUTCOME_HEADER)?;
    let mut out = Vec::new();
    let mut seen: HashMap<String, u64> = HashMap::new();
    for record in reader.records() {
        let record = record.map_err(|e| csv_error(path, e))?;
        let line = record.position().map_or(0, |p| p.line());
        let qid = record[0].to_string();
        let outcome: Outcome = record[1]
            .parse()
            .map_err(|e: Error| Error::parse(path.display(), line, e.to_string()))?;
        if let Some(first) = seen.insert(qid.clone(), line) {
            return Err(Error::parse(
                path.display(),
                line,
                format!("question {qid:?} already has an outcome on line {first}"),
            ));
        }
        out.push((qid, outcome));
    }
    Ok(out)
}

/// Reads a forecast CSV and an outcome CSV into a table. Questions follow the
/// outcome file's order; forecasters follow first appearance in the forecast
/// file.
pub fn load_table(
    forecasts_path: impl AsRef<Path>,
    outcomes_path: impl AsRef<Path>,
) -> Result<ForecastTable> {
    let outcomes = load_outcomes(outcomes_path.as_ref())?;
    let matrix = load_forecasts(forecasts_path.as_ref())?;

    let order: HashMap<&str, usize> = outcomes
        .iter()
        .enumerate()
        .map(|(i, (q, _))| (q.as_str(), i))
        .collect();
    // position in the outcome file of each question in the forecast file
    let mut remap = Vec::with_capacity(matrix.question_ids.len());
    for qid in &matrix.question_ids {
        match order.get(qid.as_str()) {
            Some(&i) => remap.push(i),
            None => return Err(Error::MissingOutcome(qid.clone())),
        }
    }
    let nq = outcomes.len();
    let rows = matrix
        .rows
        .iter()
        .map(|row| {
            let mut out = vec![None; nq];
            for (k, p) in row.iter().enumerate() {
                out[remap[k]] = *p;
            }
            out
        })
        .collect();
    let (question_ids, outcomes): (Vec<String>, Vec<Outcome>) = outcomes.into_iter().unzip();
    ForecastTable::new(question_ids, matrix.forecaster_ids, rows, outcomes)
}

/// Locations of a table written by [`write_table_csv`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SynthPaths {
    pub forecasts: PathBuf,
    pub outcomes: PathBuf,
}

impl SynthPaths {
    pub fn from_prefix(prefix: &str) -> Self {
        SynthPaths {
            forecasts: PathBuf::from(format!("{prefix}_forecasts.csv")),
            outcomes: PathBuf::from(format!("{prefix}_outcomes.csv")),
        }
    }
}

fn werr(path: &Path) -> impl Fn(csv::Error) -> Error + '_ {
    move |e| csv_error(path, e)
}

fn csv_writer(path: &Path) -> Result<csv::Writer<std::fs::File>> {
    let file = std::fs::File::create(path).map_err(|e| Error::io(path, e))?;
    Ok(csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(file))
}

/// Writes `table` as a forecast CSV (one row per cell, forecaster-major, empty
/// probability for a missing forecast) and an outcome CSV.
pub fn write_table_csv(table: &ForecastTable, paths: &SynthPaths) -> Result<()> {
    let mut w = csv_writer(&paths.outcomes)?;
    w.write_record(OUTCOME_HEADER).map_err(werr(&paths.outcomes))?;
    for (qid, y) in table.question_ids().iter().zip(table.outcomes()) {
        w.write_record([qid.as_str(), y.label()]).map_err(werr(&paths.outcomes))?;
    }
    w.flush().map_err(|e| Error::io(&paths.outcomes, e))?;

    let mut w = csv_writer(&paths.forecasts)?;
    w.write_record(FORECAST_HEADER).map_err(werr(&paths.forecasts))?;
    for (j, fid) in table.forecaster_ids().iter().enumerate() {
        for (q, qid) in table.question_ids().iter().enumerate() {
            let p = table
                .forecast(j, q)
                .map(|p| format_f64(p.value()))
                .unwrap_or_default();
            w.write_record([qid.as_str(), fid.as_str(), p.as_str()])
                .map_err(werr(&paths.forecasts))?;
        }
    }
    w.flush().map_err(|e| Error::io(&paths.forecasts, e))?;
    Ok(())
}
