//! Batch command line: `run` (align, classify, write predictions and an
//! optional report) and `eval` (score a predictions file).
//!
//! Exit codes: 0 success, 1 internal failure, 2 bad arguments, 3 malformed
//! data, 4 infeasible task or missing class, 5 I/O.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;
use std::time::{Duration, Instant};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::alignment::AlignmentKind;
use crate::dataio::{self, DatasetFile, LabelColumn, TaskReport, WallTimes};
use crate::error::Error;
use crate::pipeline::{self, ClassifierKind, PipelineConfig};
use crate::programming::LabeledDataset;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INTERNAL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_PARSE: i32 = 3;
pub const EXIT_INFEASIBLE: i32 = 4;
pub const EXIT_IO: i32 = 5;

#[derive(Debug, Parser)]
#[command(
    name = "easytl",
    version,
    about = "Hyperparameter-free transfer learning on CSV features"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Align, classify the target set and write predictions.
    Run(RunArgs),
    /// Compare a predictions file against ground truth.
    Eval(EvalArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum AlignmentArg {
    None,
    Coral,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum ClassifierArg {
    Easytl,
    #[value(name = "1nn")]
    OneNn,
    Centroid,
}

#[derive(Debug, Args)]
pub struct LabelArgs {
    /// Input files have no header line (requires --label-col-index).
    #[arg(long)]
    pub no_header: bool,
    /// Name of the label column.
    #[arg(long, value_name = "NAME", conflicts_with = "label_col_index")]
    pub label_col: Option<String>,
    /// Zero-based index of the label column.
    #[arg(long, value_name = "N")]
    pub label_col_index: Option<usize>,
}

impl LabelArgs {
    fn validate(&self) -> Result<(), String> {
        if self.no_header && self.label_col.is_some() {
            return Err(
                "--label-col needs a header; use --label-col-index with --no-header".into(),
            );
        }
        if self.no_header && self.label_col_index.is_none() {
            return Err("--no-header requires --label-col-index".into());
        }
        Ok(())
    }

    fn file(&self, path: &PathBuf) -> DatasetFile {
        let label = match (&self.label_col, self.label_col_index) {
            (_, Some(i)) => LabelColumn::Index(i),
            (Some(name), None) => LabelColumn::Name(name.clone()),
            (None, None) => LabelColumn::default(),
        };
        DatasetFile::new(path)
            .with_header(!self.no_header)
            .with_label_column(label)
    }
}

#[derive(Debug, Args)]
pub struct RunArgs {
    /// Labeled source-domain CSV.
    #[arg(long, value_name = "PATH")]
    pub source: PathBuf,
    /// Unlabeled target-domain CSV.
    #[arg(long, value_name = "PATH")]
    pub target: PathBuf,
    /// Ground-truth target labels; enables accuracy in the report.
    #[arg(long, value_name = "PATH")]
    pub target_labels: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "coral")]
    pub alignment: AlignmentArg,
    #[arg(long, value_enum, default_value = "easytl")]
    pub classifier: ClassifierArg,
    /// Predictions CSV (default: standard output).
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
    /// Report JSON (default: standard output when --target-labels is given).
    #[arg(long, value_name = "PATH")]
    pub report: Option<PathBuf>,
    #[command(flatten)]
    pub labels: LabelArgs,
    /// Include per-stage wall times in the report.
    #[arg(long)]
    pub with_timings: bool,
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    /// Predictions CSV (`index,label`).
    #[arg(long, value_name = "PATH")]
    pub pred: PathBuf,
    /// Ground-truth CSV.
    #[arg(long, value_name = "PATH")]
    pub truth: PathBuf,
    #[command(flatten)]
    pub labels: LabelArgs,
}

impl From<AlignmentArg> for AlignmentKind {
    fn from(a: AlignmentArg) -> Self {
        match a {
            AlignmentArg::None => AlignmentKind::None,
            AlignmentArg::Coral => AlignmentKind::Coral,
        }
    }
}

impl From<ClassifierArg> for ClassifierKind {
    fn from(c: ClassifierArg) -> Self {
        match c {
            ClassifierArg::Easytl => ClassifierKind::EasyTl,
            ClassifierArg::OneNn => ClassifierKind::NearestNeighbor1,
            ClassifierArg::Centroid => ClassifierKind::NearestCentroid,
        }
    }
}

/// Maps a library error to the documented exit code.
pub fn exit_code(err: &Error) -> i32 {
    match err.root() {
        Error::Parse { .. } | Error::InvalidInput(_) => EXIT_PARSE,
        Error::Infeasible { .. } | Error::MissingClass { .. } => EXIT_INFEASIBLE,
        Error::Io { .. } => EXIT_IO,
        Error::State(_)
        | Error::Capacity(_)
        | Error::NoConvergence { .. }
        | Error::Pipeline { .. } => EXIT_INTERNAL,
    }
}

struct Failure {
    code: i32,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure {
            code: exit_code(&e),
            message: e.to_string(),
        }
    }
}

fn usage(message: impl Into<String>) -> Failure {
    Failure {
        code: EXIT_USAGE,
        message: message.into(),
    }
}

fn ms(d: Duration) -> f64 {
    d.as_secs_f64() * 1e3
}

/// Parses `args` (including the program name) and runs the command, writing
/// normal output to `stdout` and one-line diagnostics to `stderr`.
pub fn main_with_args<I, S>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(stdout, "{e}");
                return EXIT_OK;
            }
            let rendered = e.to_string();
            let line = rendered.lines().next().unwrap_or("invalid arguments");
            let _ = writeln!(stderr, "easytl: {}", line.trim_start_matches("error: "));
            return EXIT_USAGE;
        }
    };
    let result = match &cli.command {
        Command::Run(args) => cmd_run(args, stdout),
        Command::Eval(args) => cmd_eval(args, stdout),
    };
    match result {
        Ok(()) => EXIT_OK,
        Err(f) => {
            let _ = writeln!(stderr, "easytl: error: {}", f.message);
            f.code
        }
    }
}

fn write_out(stdout: &mut dyn Write, bytes: &[u8]) -> Result<(), Failure> {
    stdout
        .write_all(bytes)
        .map_err(|e| Failure::from(Error::io("<stdout>", e)))
}

fn cmd_run(args: &RunArgs, stdout: &mut dyn Write) -> Result<(), Failure> {
    args.labels.validate().map_err(usage)?;
    let cfg = PipelineConfig {
        alignment: args.alignment.into(),
        classifier: args.classifier.into(),
    };

    let started = Instant::now();
    let (src, dict): (LabeledDataset<f64>, _) =
        dataio::load_labeled(&args.labels.file(&args.source))?;
    let target = dataio::load_unlabeled::<f64>(&args.labels.file(&args.target))?;
    let truth = args
        .target_labels
        .as_ref()
        .map(|p| dataio::load_label_column(&args.labels.file(p)))
        .transpose()?;
    let load_time = started.elapsed();

    let (prediction, timings) = pipeline::run_timed(cfg, &src, &target)?;

    match &args.out {
        Some(path) => dataio::save_predictions(&prediction, &dict, path)?,
        None => {
            let mut buf = Vec::new();
            dataio::write_predictions(&prediction.labels, &dict, &mut buf)?;
            write_out(stdout, &buf)?;
        }
    }

    if truth.is_none() && args.report.is_none() {
        return Ok(());
    }
    let evaluation = match &truth {
        Some(truth) => {
            let predicted: Vec<&str> = prediction
                .labels
                .iter()
                .map(|&l| dict.decode(l).unwrap_or_default())
                .collect();
            let truth: Vec<&str> = truth.iter().map(String::as_str).collect();
            Some(dataio::evaluate(&predicted, &truth, dict.labels())?)
        }
        None => None,
    };
    let report = TaskReport {
        accuracy: evaluation.as_ref().map(|e| e.accuracy),
        per_class_accuracy: evaluation.map(|e| e.per_class_accuracy).unwrap_or_default(),
        n_source: src.len(),
        n_target: target.rows(),
        num_classes: src.num_classes,
        wall_time_ms: args.with_timings.then(|| WallTimes {
            load: ms(load_time),
            alignment: ms(timings.alignment),
            classification: ms(timings.classification),
            total: ms(started.elapsed()),
        }),
        config: cfg,
        label_dictionary: dict.labels().to_vec(),
    };
    match &args.report {
        Some(path) => dataio::save_report(&report, path)?,
        None => write_out(stdout, dataio::report_json(&report).as_bytes())?,
    }
    Ok(())
}

fn cmd_eval(args: &EvalArgs, stdout: &mut dyn Write) -> Result<(), Failure> {
    args.labels.validate().map_err(usage)?;
    let pred_file = DatasetFile::new(&args.pred)
        .with_header(!args.labels.no_header)
        .with_label_column(if args.labels.no_header {
            LabelColumn::Index(1)
        } else {
            LabelColumn::default()
        });
    let predicted = dataio::load_label_column(&pred_file)?;
    let truth = dataio::load_label_column(&args.labels.file(&args.truth))?;
    if predicted.len() != truth.len() {
        return Err(Failure {
            code: EXIT_PARSE,
            message: format!(
                "{} has {} rows but {} has {}",
                args.pred.display(),
                predicted.len(),
                args.truth.display(),
                truth.len()
            ),
        });
    }
    let evaluation = dataio::evaluate(&predicted, &truth, &[])?;
    let mut json = serde_json::to_string_pretty(&evaluation).expect("evaluation serializes");
    json.push('\n');
    write_out(stdout, json.as_bytes())
}
