//! Command pipelines and report rendering.
//!
//! Every command is a pure pipeline over its input files: identical inputs
//! and flags produce byte-identical reports. Reports go to `--out` when
//! given (written atomically, temp file then rename) with a one-line summary
//! on stdout, otherwise to stdout with the summary on stderr. Every report
//! starts with a comment line recording the tool version, threshold, metric,
//! and stop-list hash, so published numbers can be traced to their
//! configuration.
//!
//! Exit codes are a stable contract: 0 success, 1 usage error (flag
//! parsing, handled by the binary), 2 input error (missing or malformed
//! files), 3 analytic precondition error (for example no human-correct
//! record to condition a hit rate on).

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use thiserror::Error;

use crate::analytics::{
    agreement, best_possible_point, bucket_table, default_threshold_grid, join_human,
    kendalls_tau, parse_judgments, rank_runs, roc_curve, run_scores, AnalyticsError, BucketTable,
    JudgmentSource, Metric, Ranking, RankingComparison, RocCurve, BUCKET_LABELS,
};
use crate::answer_key::AnswerKey;
use crate::rational::{format_fixed, format_fraction, Rational};
use crate::scorer::{judge_batch, parse_responses, BatchOutcome, JudgedResponse, Response};
use crate::text_norm::StopWordList;

/// Resolved configuration shared by the commands. `responses_path` is
/// `None` only for commands that never read responses (key-stats).
#[derive(Debug, Clone)]
pub struct Config {
    pub key_path: PathBuf,
    pub responses_path: Option<PathBuf>,
    pub judgments_path: Option<PathBuf>,
    pub threshold: Rational,
    pub stopword_path: Option<PathBuf>,
    pub metric: Metric,
    pub roc_steps: u32,
    pub run_filter: Option<String>,
    pub out: Option<PathBuf>,
}

/// Which report to produce.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Command {
    Judge {
        /// Also print the key's per-question/per-answer/per-form means.
        stats: bool,
    },
    Roc {
        best_out: Option<PathBuf>,
        worst_out: Option<PathBuf>,
    },
    Rank,
    Disagreements,
    Buckets,
    KeyStats,
}

/// A command failure, classified by exit code.
#[derive(Debug, Error)]
pub enum CliError {
    /// Missing or malformed input files. Exit code 2.
    #[error("{0}")]
    Input(String),
    /// An analytic quantity is undefined on these inputs. Exit code 3.
    #[error("{0}")]
    Analytic(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => 2,
            CliError::Analytic(_) => 3,
        }
    }
}

impl From<AnalyticsError> for CliError {
    fn from(err: AnalyticsError) -> CliError {
        CliError::Analytic(err.to_string())
    }
}

/// Runs one command to completion, printing and writing its outputs.
pub fn run(config: &Config, command: &Command) -> Result<(), CliError> {
    match command {
        Command::Judge { stats } => cmd_judge(config, *stats),
        Command::Roc {
            best_out,
            worst_out,
        } => cmd_roc(config, best_out.as_deref(), worst_out.as_deref()),
        Command::Rank => cmd_rank(config),
        Command::Disagreements => cmd_disagreements(config),
        Command::Buckets => cmd_buckets(config),
        Command::KeyStats => cmd_key_stats(config),
    }
}

/// The comment line opening every report.
pub fn header_line(config: &Config, stops: &StopWordList) -> String {
    format!(
        "# keyjudge {} threshold={} metric={} stoplist=sha256:{}\n",
        env!("CARGO_PKG_VERSION"),
        format_fraction(config.threshold),
        config.metric.flag_name(),
        stops.sha256_hex()
    )
}

fn read_input(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path)
        .map_err(|err| CliError::Input(format!("{}: {err}", path.display())))
}

fn load_stops(config: &Config) -> Result<StopWordList, CliError> {
    match &config.stopword_path {
        None => Ok(StopWordList::default_english()),
        Some(path) => StopWordList::parse(&read_input(path)?)
            .map_err(|err| CliError::Input(format!("{}: {err}", path.display()))),
    }
}

fn load_key(config: &Config, stops: &StopWordList) -> Result<AnswerKey, CliError> {
    let text = read_input(&config.key_path)?;
    let (key, warnings) = AnswerKey::parse(&text, stops)
        .map_err(|err| CliError::Input(format!("{}: {err}", config.key_path.display())))?;
    for warning in warnings {
        eprintln!("warning: {warning}");
    }
    Ok(key)
}

fn keeps_run(config: &Config, run_id: &str) -> bool {
    config
        .run_filter
        .as_deref()
        .is_none_or(|prefix| run_id.starts_with(prefix))
}

fn load_responses(config: &Config) -> Result<Vec<Response>, CliError> {
    let path = config
        .responses_path
        .as_deref()
        .expect("command requires a responses file");
    let text = read_input(path)?;
    let mut responses = parse_responses(&text)
        .map_err(|err| CliError::Input(format!("{}: {err}", path.display())))?;
    responses.retain(|r| keeps_run(config, &r.run_id));
    Ok(responses)
}

fn warn_unknown(unknown: &[Response]) {
    if unknown.is_empty() {
        return;
    }
    let questions: BTreeSet<&str> = unknown.iter().map(|r| r.question_id.as_str()).collect();
    let list: Vec<&str> = questions.into_iter().collect();
    eprintln!(
        "warning: {} responses reference questions missing from the key: {}",
        unknown.len(),
        list.join(", ")
    );
}

fn judge_all(
    config: &Config,
    key: &AnswerKey,
    stops: &StopWordList,
) -> Result<(BatchOutcome, usize), CliError> {
    let responses = load_responses(config)?;
    let total = responses.len();
    let outcome = judge_batch(responses, key, config.threshold, stops);
    warn_unknown(&outcome.unknown_question);
    Ok((outcome, total))
}

/// Loads the judgment file (required by the calling command), filters it to
/// the configured runs, and attaches verdicts to the judged records.
fn attach_judgments(config: &Config, judged: &mut [JudgedResponse]) -> Result<(), CliError> {
    let path = config
        .judgments_path
        .as_deref()
        .expect("command requires a judgments file");
    let text = read_input(path)?;
    let mut judgments = parse_judgments(&text)
        .map_err(|err| CliError::Input(format!("{}: {err}", path.display())))?;
    judgments.retain(|j| keeps_run(config, &j.run_id));
    let applied = join_human(judged, &judgments);
    if applied < judgments.len() {
        eprintln!(
            "warning: {} judgments matched no judged response",
            judgments.len() - applied
        );
    }
    Ok(())
}

/// Replaces tabs so a free-text field cannot break the TSV column grid.
/// Newlines cannot occur: the parsers are line-based.
fn sanitize(text: &str) -> String {
    text.replace('\t', " ")
}

fn write_atomic(path: &Path, content: &str) -> Result<(), CliError> {
    let context = |err: &dyn std::fmt::Display| CliError::Input(format!("{}: {err}", path.display()));
    let dir = match path.parent() {
        Some(parent) if !parent.as_os_str().is_empty() => parent,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(|e| context(&e))?;
    tmp.write_all(content.as_bytes()).map_err(|e| context(&e))?;
    tmp.persist(path).map_err(|e| context(&e))?;
    Ok(())
}

/// Report to `--out` with the summary on stdout, or report to stdout with
/// the summary on stderr.
fn emit(config: &Config, report: &str, summary: &str) -> Result<(), CliError> {
    match &config.out {
        Some(path) => {
            write_atomic(path, report)?;
            println!("{summary}");
        }
        None => {
            print!("{report}");
            eprintln!("{summary}");
        }
    }
    Ok(())
}

/// Renders judged responses as TSV, one row per response in input order.
pub fn render_judged_tsv(header: &str, judged: &[JudgedResponse]) -> String {
    let mut out = String::from(header);
    out.push_str("# run_id\tquestion_id\trank\ttext\trecall\tmatched\tkey_size\tauto\n");
    for record in judged {
        let _ = writeln!(
            out,
            "{}\t{}\t{}\t{}\t{}/{}\t{}\t{}\t{}",
            record.response.run_id,
            record.response.question_id,
            record.response.rank,
            sanitize(&record.response.text),
            record.score.matched,
            record.score.key_size,
            record.score.matched,
            record.score.key_size,
            record.auto.as_binary(),
        );
    }
    out
}

fn render_key_stats(key: &AnswerKey) -> String {
    let questions = key.question_count();
    let (answers, forms) = key.iter().fold((0usize, 0usize), |(a, f), (_, answer_list)| {
        (
            a + answer_list.len(),
            f + answer_list.iter().map(|ans| ans.forms.len()).sum::<usize>(),
        )
    });
    let mut out = format!("questions={questions}\nanswers={answers}\nforms={forms}\n");
    if let Some(stats) = key.statistics() {
        let mean = |value: Rational| format!("{} ({})", format_fraction(value), format_fixed(value, 4));
        let _ = writeln!(
            out,
            "answers_per_question={}",
            mean(stats.answers_per_question)
        );
        let _ = writeln!(out, "forms_per_answer={}", mean(stats.forms_per_answer));
        let _ = writeln!(
            out,
            "content_words_per_form={}",
            mean(stats.content_words_per_form)
        );
    }
    out
}

fn cmd_judge(config: &Config, stats: bool) -> Result<(), CliError> {
    let stops = load_stops(config)?;
    let key = load_key(config, &stops)?;
    let (outcome, total) = judge_all(config, &key, &stops)?;
    let report = render_judged_tsv(&header_line(config, &stops), &outcome.judged);
    let correct = outcome
        .judged
        .iter()
        .filter(|j| j.auto.is_correct())
        .count();
    let mut summary = format!(
        "{total} responses ({correct} correct, {} incorrect, {} unknown question)",
        outcome.judged.len() - correct,
        outcome.unknown_question.len()
    );
    if stats {
        summary.push('\n');
        summary.push_str(render_key_stats(&key).trim_end());
    }
    emit(config, &report, &summary)
}

/// Renders the ROC sweep as CSV. The accept-all point has no threshold and
/// is labeled as such; all rates are fixed 4-decimal percentages.
pub fn render_roc_csv(header: &str, curve: &RocCurve) -> String {
    let mut out = String::from(header);
    out.push_str("# threshold,hit_rate_pct,false_alarm_pct\n");
    for point in &curve.points {
        let threshold = match point.threshold {
            None => "accept-all".to_string(),
            Some(t) => format_fixed(t, 4),
        };
        let _ = writeln!(
            out,
            "{threshold},{},{}",
            format_fixed(point.hit_rate_pct, 4),
            format_fixed(point.false_alarm_pct, 4),
        );
    }
    out
}

fn render_best_csv(header: &str) -> String {
    let (hit, fa) = best_possible_point();
    format!(
        "{header}# hit_rate_pct,false_alarm_pct\n{},{}\n",
        format_fixed(hit, 4),
        format_fixed(fa, 4)
    )
}

fn render_worst_csv(header: &str, steps: u32) -> String {
    let mut out = String::from(header);
    out.push_str("# accept_pct,hit_rate_pct,false_alarm_pct\n");
    // The acceptance probability, hit rate, and false-alarm rate of a
    // random judge are all the same percentage.
    for (hit, fa) in crate::analytics::worst_possible_diagonal(steps) {
        let _ = writeln!(
            out,
            "{},{},{}",
            format_fixed(hit, 4),
            format_fixed(hit, 4),
            format_fixed(fa, 4)
        );
    }
    out
}

fn cmd_roc(
    config: &Config,
    best_out: Option<&Path>,
    worst_out: Option<&Path>,
) -> Result<(), CliError> {
    let stops = load_stops(config)?;
    let key = load_key(config, &stops)?;
    let (mut outcome, _) = judge_all(config, &key, &stops)?;
    attach_judgments(config, &mut outcome.judged)?;
    let grid = default_threshold_grid(config.roc_steps);
    let curve = roc_curve(&outcome.judged, &grid)?;
    let header = header_line(config, &stops);
    if let Some(path) = best_out {
        write_atomic(path, &render_best_csv(&header))?;
    }
    if let Some(path) = worst_out {
        write_atomic(path, &render_worst_csv(&header, config.roc_steps))?;
    }
    let human_correct = outcome
        .judged
        .iter()
        .filter(|j| j.human.is_some_and(|h| h.is_correct()))
        .count();
    let summary = format!(
        "{} points swept over {} records ({} human correct, {} human incorrect)",
        curve.points.len(),
        outcome.judged.len(),
        human_correct,
        outcome.judged.len() - human_correct
    );
    emit(config, &render_roc_csv(&header, &curve), &summary)
}

/// Renders one ranking as TSV rows. Tied runs share a competition rank.
pub fn render_ranking_rows(ranking: &Ranking, scores: &std::collections::BTreeMap<String, Rational>) -> String {
    let mut out = String::from("# rank\trun_id\tscore\n");
    for (index, run_id) in ranking.order.iter().enumerate() {
        let _ = writeln!(
            out,
            "{}\t{}\t{}",
            ranking.competition_rank(index),
            run_id,
            format_fraction(scores[run_id]),
        );
    }
    out
}

/// The single-line rendering of a ranking comparison.
pub fn tau_line(cmp: &RankingComparison) -> String {
    format!(
        "n={} concordant={} discordant={} tau={}",
        cmp.n(),
        cmp.concordant,
        cmp.discordant,
        format_fraction(cmp.tau)
    )
}

fn path_with_suffix(prefix: &Path, suffix: &str) -> PathBuf {
    let mut name = prefix.as_os_str().to_owned();
    name.push(suffix);
    PathBuf::from(name)
}

fn cmd_rank(config: &Config) -> Result<(), CliError> {
    let stops = load_stops(config)?;
    let key = load_key(config, &stops)?;
    let (mut outcome, _) = judge_all(config, &key, &stops)?;
    attach_judgments(config, &mut outcome.judged)?;
    let universe: BTreeSet<String> = key.question_ids().map(String::from).collect();
    let auto_scores = run_scores(
        &outcome.judged,
        config.metric,
        JudgmentSource::Auto,
        &universe,
    )?;
    let human_scores = run_scores(
        &outcome.judged,
        config.metric,
        JudgmentSource::Human,
        &universe,
    )?;
    let auto_ranking = rank_runs(&auto_scores);
    let human_ranking = rank_runs(&human_scores);
    let comparison = kendalls_tau(&auto_ranking, &human_ranking)?;
    let header = header_line(config, &stops);
    let line = tau_line(&comparison);
    match &config.out {
        Some(prefix) => {
            let auto_report = format!(
                "{header}{}",
                render_ranking_rows(&auto_ranking, &auto_scores)
            );
            let human_report = format!(
                "{header}{}",
                render_ranking_rows(&human_ranking, &human_scores)
            );
            write_atomic(&path_with_suffix(prefix, ".auto.tsv"), &auto_report)?;
            write_atomic(&path_with_suffix(prefix, ".human.tsv"), &human_report)?;
            println!("{line}");
        }
        None => {
            print!(
                "{header}# ranking=auto\n{}# ranking=human\n{}",
                render_ranking_rows(&auto_ranking, &auto_scores),
                render_ranking_rows(&human_ranking, &human_scores)
            );
            eprintln!("{line}");
        }
    }
    Ok(())
}

fn cmd_disagreements(config: &Config) -> Result<(), CliError> {
    let stops = load_stops(config)?;
    let key = load_key(config, &stops)?;
    let (mut outcome, _) = judge_all(config, &key, &stops)?;
    attach_judgments(config, &mut outcome.judged)?;
    let judged = &outcome.judged;
    // With nothing judged there is trivially nothing to list; agreement
    // would reject the empty set because its fraction is undefined.
    let (low_recall_misses, high_recall_alarms) = if judged.is_empty() {
        (0, 0)
    } else {
        let confusion = agreement(judged)?.confusion;
        (
            confusion.human_correct_auto_incorrect(),
            confusion.human_incorrect_auto_correct(),
        )
    };
    let mut rows: Vec<&JudgedResponse> = Vec::new();
    for record in judged {
        let human = record.human.ok_or_else(|| {
            CliError::from(AnalyticsError::MissingHumanJudgment {
                run_id: record.response.run_id.clone(),
                question_id: record.response.question_id.clone(),
                rank: record.response.rank,
            })
        })?;
        if human != record.auto {
            rows.push(record);
        }
    }
    rows.sort_by(|a, b| {
        (&a.response.question_id, &a.response.run_id, a.response.rank).cmp(&(
            &b.response.question_id,
            &b.response.run_id,
            b.response.rank,
        ))
    });
    let mut report = header_line(config, &stops);
    report.push_str(
        "# question_id\trun_id\trank\ttext\trecall\tbucket\thuman\tauto\tcategory\n",
    );
    for record in &rows {
        let human = record.human.expect("disagreement rows carry human judgments");
        let _ = writeln!(
            report,
            "{}\t{}\t{}\t{}\t{}/{}\t{}\t{}\t{}\t",
            record.response.question_id,
            record.response.run_id,
            record.response.rank,
            sanitize(&record.response.text),
            record.score.matched,
            record.score.key_size,
            BUCKET_LABELS[crate::analytics::bucket_index(record.score.value)],
            human.as_binary(),
            record.auto.as_binary(),
        );
    }
    let summary = format!(
        "{} disagreements of {} records (human_correct_low_recall={}, human_incorrect_high_recall={})",
        rows.len(),
        judged.len(),
        low_recall_misses,
        high_recall_alarms
    );
    emit(config, &report, &summary)
}

/// Renders the bucket table as TSV with one-decimal column percentages and
/// a TOTAL row.
pub fn render_bucket_tsv(header: &str, table: &BucketTable) -> String {
    let (total_incorrect, total_correct) = table.totals();
    let mut out = String::from(header);
    out.push_str("# bucket\thuman_incorrect\tpct_incorrect\thuman_correct\tpct_correct\n");
    for row in &table.rows {
        let _ = writeln!(
            out,
            "{}\t{}\t{}\t{}\t{}",
            row.label,
            row.human_incorrect,
            format_fixed(
                BucketTable::percent_of_column(row.human_incorrect, total_incorrect),
                1
            ),
            row.human_correct,
            format_fixed(
                BucketTable::percent_of_column(row.human_correct, total_correct),
                1
            ),
        );
    }
    let _ = writeln!(
        out,
        "TOTAL\t{}\t{}\t{}\t{}",
        total_incorrect,
        format_fixed(
            BucketTable::percent_of_column(total_incorrect, total_incorrect),
            1
        ),
        total_correct,
        format_fixed(BucketTable::percent_of_column(total_correct, total_correct), 1),
    );
    out
}

fn cmd_buckets(config: &Config) -> Result<(), CliError> {
    let stops = load_stops(config)?;
    let key = load_key(config, &stops)?;
    let (mut outcome, _) = judge_all(config, &key, &stops)?;
    attach_judgments(config, &mut outcome.judged)?;
    let table = bucket_table(&outcome.judged)?;
    let (total_incorrect, total_correct) = table.totals();
    let report = render_bucket_tsv(&header_line(config, &stops), &table);
    let summary = format!(
        "{} records bucketed ({} human incorrect, {} human correct)",
        total_incorrect + total_correct,
        total_incorrect,
        total_correct
    );
    emit(config, &report, &summary)
}

fn cmd_key_stats(config: &Config) -> Result<(), CliError> {
    let stops = load_stops(config)?;
    let key = load_key(config, &stops)?;
    let report = format!("{}{}", header_line(config, &stops), render_key_stats(&key));
    let summary = format!("{} questions", key.question_count());
    emit(config, &report, &summary)
}
