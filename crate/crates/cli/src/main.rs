//! Command-line front end for `crowdboost`.
//!
//! Exit status: 0 on success, 1 for usage errors, 2 for data errors.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use crowdboost::io::{
    load_forecasts, load_model, load_outcomes, load_table, save_model, write_eval_report,
    write_prediction_report, write_score_report, write_table_csv, ScoreSummary, SynthPaths,
};
use crowdboost::predict::{predict_matrix, score_forecasters};
use crowdboost::{generate_synthetic, loo_evaluate, train, DifferenceType, Error, EvalReport, Method, SyntheticSpec};

#[derive(Parser)]
#[command(name = "crowdboost", version, about = "Combine probability forecasters with bagging and boosting")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Train a combiner on the full table and save the model.
    Combine(CombineArgs),
    /// Apply a saved model to a forecast file.
    Predict(PredictArgs),
    /// Leave-one-out evaluation against the individual forecasters.
    Loo(LooArgs),
    /// Calibration/refinement decomposition of every forecaster.
    Score(ScoreArgs),
    /// Write a synthetic forecast/outcome pair.
    Synth(SynthArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    Bagging,
    Adaboost,
    Realboost,
}

impl From<MethodArg> for Method {
    fn from(m: MethodArg) -> Self {
        match m {
            MethodArg::Bagging => Method::Bagging,
            MethodArg::Adaboost => Method::AdaBoost,
            MethodArg::Realboost => Method::RealBoost,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Type1,
    Type2,
}

#[derive(Args)]
struct TrainingArgs {
    #[arg(long, value_enum)]
    method: MethodArg,
    #[arg(long)]
    forecasts: PathBuf,
    #[arg(long)]
    outcomes: PathBuf,
    /// Boosting rounds [default: 800 for adaboost, 70 for realboost]
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    iterations: Option<u64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

impl TrainingArgs {
    fn method(&self) -> Method {
        self.method.into()
    }

    fn iterations(&self) -> usize {
        self.iterations
            .map_or_else(|| self.method().default_iterations(), |m| m as usize)
    }
}

#[derive(Args)]
struct CombineArgs {
    #[command(flatten)]
    training: TrainingArgs,
    #[arg(long)]
    model_out: PathBuf,
}

#[derive(Args)]
struct PredictArgs {
    #[arg(long)]
    model: PathBuf,
    #[arg(long)]
    forecasts: PathBuf,
    #[arg(long)]
    outcomes: Option<PathBuf>,
    #[arg(long, default_value_t = 10, value_parser = clap::value_parser!(u64).range(1..))]
    bins: u64,
    #[arg(long)]
    report_out: PathBuf,
}

#[derive(Args)]
struct LooArgs {
    #[command(flatten)]
    training: TrainingArgs,
    #[arg(long)]
    report_out: PathBuf,
}

#[derive(Args)]
struct ScoreArgs {
    #[arg(long)]
    forecasts: PathBuf,
    #[arg(long)]
    outcomes: PathBuf,
    #[arg(long, default_value_t = 10, value_parser = clap::value_parser!(u64).range(1..))]
    bins: u64,
    /// Also write the full per-bin report here.
    #[arg(long)]
    report_out: Option<PathBuf>,
}

#[derive(Args)]
struct SynthArgs {
    #[arg(long)]
    forecasters: usize,
    #[arg(long)]
    questions: usize,
    #[arg(long, value_enum, default_value = "type2")]
    mode: ModeArg,
    #[arg(long, default_value_t = 1.0)]
    noise: f64,
    #[arg(long, default_value_t = 1.0)]
    coverage: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Files are written to `<prefix>_forecasts.csv` and `<prefix>_outcomes.csv`.
    #[arg(long)]
    out_prefix: String,
}

enum Failure {
    Usage(String),
    Data(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidSynthetic(_) | Error::ZeroIterations | Error::ZeroBins => {
                Failure::Usage(e.to_string())
            }
            other => Failure::Data(other.to_string()),
        }
    }
}

fn write_output(path: &Path, contents: &str) -> Result<(), Failure> {
    std::fs::write(path, contents)
        .map_err(|e| Failure::Data(format!("cannot write {}: {e}", path.display())))
}

fn combine(args: CombineArgs) -> Result<(), Failure> {
    let t = &args.training;
    let table = load_table(&t.forecasts, &t.outcomes)?;
    log::info!(
        "training {} on {} questions x {} forecasters",
        t.method(),
        table.n_questions(),
        table.n_forecasters()
    );
    let model = train(&table, t.method(), t.iterations(), t.seed)?;
    save_model(&model, &args.model_out)?;
    println!(
        "{}: {} rounds, {} unique forecasters -> {}",
        model.method,
        model.rounds.len(),
        model.unique_forecasters(),
        args.model_out.display()
    );
    Ok(())
}

fn predict(args: PredictArgs) -> Result<(), Failure> {
    let model = load_model(&args.model)?;
    let matrix = load_forecasts(&args.forecasts)?;
    let outcomes = args.outcomes.as_ref().map(load_outcomes).transpose()?;
    let report = predict_matrix(&model, &matrix, outcomes.as_deref(), args.bins as usize)?;
    write_output(&args.report_out, &write_prediction_report(&report))?;
    match (report.errors, &report.score) {
        (Some(errors), Some(score)) => println!(
            "{} questions, {errors} errors, score {:.6} (calibration {:.6}, refinement {:.6})",
            report.rows.len(),
            score.total,
            score.calibration,
            score.refinement
        ),
        _ => println!("{} questions predicted", report.rows.len()),
    }
    Ok(())
}

fn loo_summary(report: &EvalReport) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "{:<10} {:>10} {:>10} {:>12} {:>8} {:>8} {:>12}",
        "method", "iterations", "questions", "pred_errors", "best", "mean", "avg_unique"
    );
    let _ = writeln!(
        out,
        "{:<10} {:>10} {:>10} {:>12} {:>8} {:>8.2} {:>12.2}",
        report.method.name(),
        report.iterations,
        report.total_questions,
        report.prediction_errors,
        report.best_individual_errors,
        report.mean_individual_errors,
        report.avg_unique_forecasters
    );
    out
}

fn loo(args: LooArgs) -> Result<(), Failure> {
    let t = &args.training;
    let table = load_table(&t.forecasts, &t.outcomes)?;
    let report = loo_evaluate(&table, t.method(), t.iterations(), t.seed)?;
    write_output(&args.report_out, &write_eval_report(&report))?;
    print!("{}", loo_summary(&report));
    Ok(())
}

fn score_table(summary: &ScoreSummary) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "{:<20} {:>8} {:>12} {:>12} {:>12}",
        "forecaster", "answered", "total", "calibration", "refinement"
    );
    for f in &summary.forecasters {
        match &f.report {
            Some(r) => {
                let _ = writeln!(
                    out,
                    "{:<20} {:>8} {:>12.6} {:>12.6} {:>12.6}",
                    f.forecaster_id, f.answered, r.total, r.calibration, r.refinement
                );
            }
            None => {
                let _ = writeln!(out, "{:<20} {:>8} {:>12} {:>12} {:>12}", f.forecaster_id, 0, "-", "-", "-");
            }
        }
    }
    out
}

fn score(args: ScoreArgs) -> Result<(), Failure> {
    let table = load_table(&args.forecasts, &args.outcomes)?;
    let summary = score_forecasters(&table, args.bins as usize)?;
    if let Some(path) = &args.report_out {
        write_output(path, &write_score_report(&summary))?;
    }
    print!("{}", score_table(&summary));
    Ok(())
}

fn synth(args: SynthArgs) -> Result<(), Failure> {
    let spec = SyntheticSpec {
        forecasters: args.forecasters,
        questions: args.questions,
        mode: match args.mode {
            ModeArg::Type1 => DifferenceType::Type1,
            ModeArg::Type2 => DifferenceType::Type2,
        },
        noise: args.noise,
        coverage: args.coverage,
        seed: args.seed,
    };
    let table = generate_synthetic(&spec)?;
    let paths = SynthPaths::from_prefix(&args.out_prefix);
    write_table_csv(&table, &paths)?;
    println!("wrote {} and {}", paths.forecasts.display(), paths.outcomes.display());
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("LOG_LEVEL", "warn")).init();

    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(1);
        }
    };

    let result = match cli.command {
        Command::Combine(a) => combine(a),
        Command::Predict(a) => predict(a),
        Command::Loo(a) => loo(a),
        Command::Score(a) => score(a),
        Command::Synth(a) => synth(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Data(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
