//! Binary entry point: flag parsing and exit-code mapping. All real work
//! lives in the library's `cli` module.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use keyjudge::analytics::Metric;
use keyjudge::cli::{self, Command, Config};
use keyjudge::rational::{in_unit_interval, parse_rational};
use keyjudge::Rational;

fn parse_threshold(literal: &str) -> Result<Rational, String> {
    let value = parse_rational(literal).map_err(|err| err.to_string())?;
    if !in_unit_interval(value) {
        return Err(format!("{literal} is outside [0, 1]"));
    }
    Ok(value)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MetricArg {
    /// Mean reciprocal rank over the key's questions.
    Mrr,
    /// Fraction of questions whose rank-1 response is judged correct.
    FirstAnswer,
}

impl From<MetricArg> for Metric {
    fn from(arg: MetricArg) -> Metric {
        match arg {
            MetricArg::Mrr => Metric::MeanReciprocalRank,
            MetricArg::FirstAnswer => Metric::FirstAnswerAccuracy,
        }
    }
}

/// Flags shared by every command that judges responses.
#[derive(Debug, Args)]
struct JudgingArgs {
    /// Answer key TSV: question_id<TAB>answers, '|' between answers,
    /// ';' between alternative forms of one answer.
    #[arg(long, value_name = "PATH")]
    key: PathBuf,

    /// Response TSV: run_id<TAB>question_id<TAB>rank<TAB>response text.
    #[arg(long, value_name = "PATH")]
    responses: PathBuf,

    /// Recall threshold in [0, 1], as a fraction "m/k" or a decimal.
    /// A response is correct when its recall is strictly greater.
    #[arg(long, value_name = "R", default_value = "1/4", value_parser = parse_threshold)]
    threshold: Rational,

    /// Replace the built-in stop-word list: one lowercase word per line,
    /// '#' comments allowed.
    #[arg(long, value_name = "PATH")]
    stopwords: Option<PathBuf>,

    /// Keep only runs whose run_id starts with this prefix.
    #[arg(long, value_name = "PREFIX")]
    run_filter: Option<String>,

    /// Write the report here (atomically) instead of standard output.
    /// For rank: a path prefix, producing <OUT>.auto.tsv and <OUT>.human.tsv.
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

impl JudgingArgs {
    fn into_config(self, judgments: Option<PathBuf>, metric: Metric, roc_steps: u32) -> Config {
        Config {
            key_path: self.key,
            responses_path: Some(self.responses),
            judgments_path: judgments,
            threshold: self.threshold,
            stopword_path: self.stopwords,
            metric,
            roc_steps,
            run_filter: self.run_filter,
            out: self.out,
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "keyjudge",
    version,
    about = "Judges ranked question-answering responses by recall of stemmed \
             content words against an answer key, and reports how well that \
             automatic judge tracks human judgments."
)]
struct CliArgs {
    #[command(subcommand)]
    command: CliCommand,
}

#[derive(Debug, Subcommand)]
enum CliCommand {
    /// Score and judge every response against the key.
    Judge {
        #[command(flatten)]
        judging: JudgingArgs,
        /// Also report answers-per-question, forms-per-answer, and
        /// content-words-per-form means of the key.
        #[arg(long)]
        stats: bool,
    },
    /// Sweep the threshold and emit hit/false-alarm rates as CSV.
    Roc {
        #[command(flatten)]
        judging: JudgingArgs,
        /// Human judgment TSV: run_id<TAB>question_id<TAB>rank<TAB>0|1.
        #[arg(long, value_name = "PATH")]
        judgments: PathBuf,
        /// Number of grid steps: thresholds k/N for k = 0..=N.
        #[arg(long, value_name = "N", default_value_t = 100, value_parser = clap::value_parser!(u32).range(1..))]
        roc_steps: u32,
        /// Also write the perfect-judge reference point to this CSV.
        #[arg(long, value_name = "PATH")]
        best_out: Option<PathBuf>,
        /// Also write the random-judge diagonal to this CSV.
        #[arg(long, value_name = "PATH")]
        worst_out: Option<PathBuf>,
    },
    /// Rank runs under automatic and human judgments and compare with
    /// Kendall's tau.
    Rank {
        #[command(flatten)]
        judging: JudgingArgs,
        /// Human judgment TSV: run_id<TAB>question_id<TAB>rank<TAB>0|1.
        #[arg(long, value_name = "PATH")]
        judgments: PathBuf,
        /// Per-run scoring metric.
        #[arg(long, value_enum, default_value_t = MetricArg::Mrr)]
        metric: MetricArg,
    },
    /// List every response where the automatic and human judgments differ.
    Disagreements {
        #[command(flatten)]
        judging: JudgingArgs,
        /// Human judgment TSV: run_id<TAB>question_id<TAB>rank<TAB>0|1.
        #[arg(long, value_name = "PATH")]
        judgments: PathBuf,
    },
    /// Tabulate recall buckets against human judgments.
    Buckets {
        #[command(flatten)]
        judging: JudgingArgs,
        /// Human judgment TSV: run_id<TAB>question_id<TAB>rank<TAB>0|1.
        #[arg(long, value_name = "PATH")]
        judgments: PathBuf,
    },
    /// Report size statistics of an answer key.
    KeyStats {
        /// Answer key TSV.
        #[arg(long, value_name = "PATH")]
        key: PathBuf,
        /// Replace the built-in stop-word list.
        #[arg(long, value_name = "PATH")]
        stopwords: Option<PathBuf>,
        /// Write the report here instead of standard output.
        #[arg(long, value_name = "PATH")]
        out: Option<PathBuf>,
    },
}

impl CliCommand {
    fn into_parts(self) -> (Config, Command) {
        match self {
            CliCommand::Judge { judging, stats } => (
                judging.into_config(None, Metric::MeanReciprocalRank, 100),
                Command::Judge { stats },
            ),
            CliCommand::Roc {
                judging,
                judgments,
                roc_steps,
                best_out,
                worst_out,
            } => (
                judging.into_config(Some(judgments), Metric::MeanReciprocalRank, roc_steps),
                Command::Roc {
                    best_out,
                    worst_out,
                },
            ),
            CliCommand::Rank {
                judging,
                judgments,
                metric,
            } => (
                judging.into_config(Some(judgments), metric.into(), 100),
                Command::Rank,
            ),
            CliCommand::Disagreements { judging, judgments } => (
                judging.into_config(Some(judgments), Metric::MeanReciprocalRank, 100),
                Command::Disagreements,
            ),
            CliCommand::Buckets { judging, judgments } => (
                judging.into_config(Some(judgments), Metric::MeanReciprocalRank, 100),
                Command::Buckets,
            ),
            CliCommand::KeyStats {
                key,
                stopwords,
                out,
            } => (
                Config {
                    key_path: key,
                    responses_path: None,
                    judgments_path: None,
                    threshold: Rational::new(1, 4),
                    stopword_path: stopwords,
                    metric: Metric::MeanReciprocalRank,
                    roc_steps: 100,
                    run_filter: None,
                    out,
                },
                Command::KeyStats,
            ),
        }
    }
}

fn main() -> ExitCode {
    let args = match CliArgs::try_parse() {
        Ok(args) => args,
        Err(err) => {
            // Help and version requests arrive here too; they are not
            // usage errors.
            let code = if err.use_stderr() { 1 } else { 0 };
            let _ = err.print();
            return ExitCode::from(code);
        }
    };
    let (config, command) = args.command.into_parts();
    match cli::run(&config, &command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.exit_code() as u8)
        }
    }
}
