//! Analytics comparing automatic judgments with human ones: agreement and
//! confusion counts, recall-bucket tables, ROC sweeps over the threshold,
//! per-run scores, and Kendall's tau between run rankings.
//!
//! Everything here is pure over immutable judged-response lists and exact
//! over rationals. Undefined quantities (conditional rates with an empty
//! condition, means over an empty universe) are errors, never silent 0/0
//! conventions.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};

use num_traits::Zero;
use thiserror::Error;

use crate::rational::Rational;
use crate::scorer::{JudgedResponse, Judgment};

/// One human verdict on one ranked response.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HumanJudgment {
    pub run_id: String,
    pub question_id: String,
    pub rank: u32,
    pub correct: bool,
}

/// Errors from the judgment file format:
/// `run_id<TAB>question_id<TAB>rank<TAB>judgment(0|1)`.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum JudgmentParseError {
    #[error("judgment line {line}: expected 4 tab-separated columns")]
    MissingColumns { line: usize },
    #[error("judgment line {line}: {field} is empty")]
    EmptyField { line: usize, field: &'static str },
    #[error("judgment line {line}: rank {value:?} is not an integer >= 1")]
    BadRank { line: usize, value: String },
    #[error("judgment line {line}: verdict {value:?} is not 0 or 1")]
    BadVerdict { line: usize, value: String },
    #[error(
        "judgment line {line}: duplicate judgment for run {run_id:?} question {question_id:?} rank {rank}"
    )]
    DuplicateJudgment {
        line: usize,
        run_id: String,
        question_id: String,
        rank: u32,
    },
}

/// Parses a human-judgment file. Blank lines and `#` comments are skipped;
/// LF and CRLF both accepted. The verdict column must be exactly `0` or `1`.
pub fn parse_judgments(text: &str) -> Result<Vec<HumanJudgment>, JudgmentParseError> {
    let mut judgments = Vec::new();
    let mut seen: BTreeSet<(String, String, u32)> = BTreeSet::new();
    for (idx, raw_line) in text.lines().enumerate() {
        let line = raw_line.strip_suffix('\r').unwrap_or(raw_line);
        if line.trim().is_empty() || line.starts_with('#') {
            continue;
        }
        let no = idx + 1;
        let cols: Vec<&str> = line.split('\t').collect();
        if cols.len() != 4 {
            return Err(JudgmentParseError::MissingColumns { line: no });
        }
        let (run_id, question_id, rank, verdict) = (cols[0], cols[1], cols[2], cols[3]);
        if run_id.is_empty() {
            return Err(JudgmentParseError::EmptyField {
                line: no,
                field: "run_id",
            });
        }
        if question_id.is_empty() {
            return Err(JudgmentParseError::EmptyField {
                line: no,
                field: "question_id",
            });
        }
        let rank_value: u32 = rank.parse().map_err(|_| JudgmentParseError::BadRank {
            line: no,
            value: rank.to_string(),
        })?;
        if rank_value == 0 {
            return Err(JudgmentParseError::BadRank {
                line: no,
                value: rank.to_string(),
            });
        }
        let correct = match verdict {
            "0" => false,
            "1" => true,
            other => {
                return Err(JudgmentParseError::BadVerdict {
                    line: no,
                    value: other.to_string(),
                })
            }
        };
        if !seen.insert((run_id.to_string(), question_id.to_string(), rank_value)) {
            return Err(JudgmentParseError::DuplicateJudgment {
                line: no,
                run_id: run_id.to_string(),
                question_id: question_id.to_string(),
                rank: rank_value,
            });
        }
        judgments.push(HumanJudgment {
            run_id: run_id.to_string(),
            question_id: question_id.to_string(),
            rank: rank_value,
            correct,
        });
    }
    Ok(judgments)
}

/// Attaches human verdicts to judged responses, matching on
/// (run_id, question_id, rank). Returns how many records received one.
/// Judgments matching no record are left unapplied; with duplicate keys in
/// `judgments` the last one wins.
pub fn join_human(judged: &mut [JudgedResponse], judgments: &[HumanJudgment]) -> usize {
    let lookup: BTreeMap<(&str, &str, u32), bool> = judgments
        .iter()
        .map(|j| ((j.run_id.as_str(), j.question_id.as_str(), j.rank), j.correct))
        .collect();
    let mut applied = 0;
    for record in judged.iter_mut() {
        let key = (
            record.response.run_id.as_str(),
            record.response.question_id.as_str(),
            record.response.rank,
        );
        if let Some(&correct) = lookup.get(&key) {
            record.human = Some(Judgment::from_bool(correct));
            applied += 1;
        }
    }
    applied
}

/// Precondition failures of the analytics themselves (as opposed to file
/// syntax). Each corresponds to a quantity that would otherwise be undefined
/// or ambiguous.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AnalyticsError {
    #[error("no judged records to analyze")]
    NoRecords,
    #[error(
        "run {run_id:?} question {question_id:?} rank {rank} has no human judgment"
    )]
    MissingHumanJudgment {
        run_id: String,
        question_id: String,
        rank: u32,
    },
    #[error("no record is human-judged correct, so the hit rate is undefined")]
    NoHumanCorrect,
    #[error("no record is human-judged incorrect, so the false-alarm rate is undefined")]
    NoHumanIncorrect,
    #[error("run {run_id:?} question {question_id:?} has two responses at rank {rank}")]
    DuplicateRank {
        run_id: String,
        question_id: String,
        rank: u32,
    },
    #[error("the question universe is empty, so per-run means are undefined")]
    NoQuestions,
    #[error("the two rankings do not cover the same set of runs")]
    MismatchedRunSets,
    #[error("rank correlation needs at least 2 runs, got {count}")]
    TooFewRuns { count: usize },
}

fn human_verdict(record: &JudgedResponse) -> Result<Judgment, AnalyticsError> {
    record
        .human
        .ok_or_else(|| AnalyticsError::MissingHumanJudgment {
            run_id: record.response.run_id.clone(),
            question_id: record.response.question_id.clone(),
            rank: record.response.rank,
        })
}

/// 2x2 contingency counts indexed `cells[human][auto]`, 0 = incorrect and
/// 1 = correct on both axes.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Confusion {
    pub cells: [[usize; 2]; 2],
}

impl Confusion {
    fn record(&mut self, human: Judgment, auto: Judgment) {
        self.cells[human.as_binary() as usize][auto.as_binary() as usize] += 1;
    }

    pub fn total(&self) -> usize {
        self.cells.iter().flatten().sum()
    }

    pub fn agreements(&self) -> usize {
        self.cells[0][0] + self.cells[1][1]
    }

    pub fn both_incorrect(&self) -> usize {
        self.cells[0][0]
    }

    pub fn both_correct(&self) -> usize {
        self.cells[1][1]
    }

    /// Human said correct, the automatic judge said incorrect (a miss).
    pub fn human_correct_auto_incorrect(&self) -> usize {
        self.cells[1][0]
    }

    /// Human said incorrect, the automatic judge said correct (a false alarm).
    pub fn human_incorrect_auto_correct(&self) -> usize {
        self.cells[0][1]
    }

    /// Record count with human verdict incorrect / correct.
    pub fn human_totals(&self) -> (usize, usize) {
        (
            self.cells[0][0] + self.cells[0][1],
            self.cells[1][0] + self.cells[1][1],
        )
    }
}

/// Agreement between the automatic judge and the human assessor.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Agreement {
    /// (both-correct + both-incorrect) / total, reduced.
    pub fraction: Rational,
    pub confusion: Confusion,
}

/// Computes agreement over records that all carry human judgments.
pub fn agreement(judged: &[JudgedResponse]) -> Result<Agreement, AnalyticsError> {
    if judged.is_empty() {
        return Err(AnalyticsError::NoRecords);
    }
    let mut confusion = Confusion::default();
    for record in judged {
        confusion.record(human_verdict(record)?, record.auto);
    }
    Ok(Agreement {
        fraction: Rational::new(confusion.agreements() as i64, confusion.total() as i64),
        confusion,
    })
}

/// Row labels of the recall-bucket table, in bucket order.
pub const BUCKET_LABELS: [&str; 6] = [
    "0.00",
    "0.01 to 0.25",
    "0.26 to 0.50",
    "0.51 to 0.75",
    "0.76 to 0.99",
    "1.00",
];

/// Places an exact recall in [0, 1] into its bucket: [0], (0, 1/4],
/// (1/4, 1/2], (1/2, 3/4], (3/4, 1), [1]. The labels read like rounded
/// hundredths but the boundaries are exact rationals.
pub fn bucket_index(value: Rational) -> usize {
    let one = Rational::from_integer(1);
    debug_assert!(value >= Rational::zero() && value <= one);
    if value.is_zero() {
        0
    } else if value <= Rational::new(1, 4) {
        1
    } else if value <= Rational::new(1, 2) {
        2
    } else if value <= Rational::new(3, 4) {
        3
    } else if value < one {
        4
    } else {
        5
    }
}

/// One row of the bucket table: counts by human verdict.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BucketRow {
    pub label: &'static str,
    pub human_incorrect: usize,
    pub human_correct: usize,
}

/// Distribution of recall scores split by human verdict, six fixed buckets.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BucketTable {
    pub rows: [BucketRow; 6],
}

impl BucketTable {
    /// Column totals as (human-incorrect, human-correct).
    pub fn totals(&self) -> (usize, usize) {
        self.rows.iter().fold((0, 0), |(i, c), row| {
            (i + row.human_incorrect, c + row.human_correct)
        })
    }

    /// A cell as a percentage of its column total. An empty column has no
    /// meaningful percentages and renders as zeros.
    pub fn percent_of_column(count: usize, column_total: usize) -> Rational {
        if column_total == 0 {
            Rational::zero()
        } else {
            Rational::new(100 * count as i64, column_total as i64)
        }
    }
}

/// Buckets every record's recall, split by human verdict.
pub fn bucket_table(judged: &[JudgedResponse]) -> Result<BucketTable, AnalyticsError> {
    if judged.is_empty() {
        return Err(AnalyticsError::NoRecords);
    }
    let mut rows = BUCKET_LABELS.map(|label| BucketRow {
        label,
        human_incorrect: 0,
        human_correct: 0,
    });
    for record in judged {
        let human = human_verdict(record)?;
        let row = &mut rows[bucket_index(record.score.value)];
        if human.is_correct() {
            row.human_correct += 1;
        } else {
            row.human_incorrect += 1;
        }
    }
    Ok(BucketTable { rows })
}

/// One point of the ROC sweep. `threshold` is `None` for the synthetic
/// accept-all point; rates are percentages.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RocPoint {
    pub threshold: Option<Rational>,
    pub hit_rate_pct: Rational,
    pub false_alarm_pct: Rational,
}

/// An ROC sweep: the accept-all point followed by one point per threshold,
/// in the caller's threshold order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RocCurve {
    pub points: Vec<RocPoint>,
}

/// Sweeps the judging threshold over human-judged records. For each
/// threshold t: hit rate = share of human-correct records with recall > t,
/// false-alarm rate = share of human-incorrect records with recall > t.
/// Thresholds must be sorted ascending within [0, 1].
pub fn roc_curve(
    judged: &[JudgedResponse],
    thresholds: &[Rational],
) -> Result<RocCurve, AnalyticsError> {
    if judged.is_empty() {
        return Err(AnalyticsError::NoRecords);
    }
    debug_assert!(thresholds.windows(2).all(|w| w[0] <= w[1]));
    debug_assert!(thresholds
        .iter()
        .all(|t| *t >= Rational::zero() && *t <= Rational::from_integer(1)));
    let mut correct_recalls = Vec::new();
    let mut incorrect_recalls = Vec::new();
    for record in judged {
        if human_verdict(record)?.is_correct() {
            correct_recalls.push(record.score.value);
        } else {
            incorrect_recalls.push(record.score.value);
        }
    }
    if correct_recalls.is_empty() {
        return Err(AnalyticsError::NoHumanCorrect);
    }
    if incorrect_recalls.is_empty() {
        return Err(AnalyticsError::NoHumanIncorrect);
    }
    let hundred = |hits: usize, total: usize| Rational::new(100 * hits as i64, total as i64);
    let mut points = vec![RocPoint {
        threshold: None,
        hit_rate_pct: Rational::from_integer(100),
        false_alarm_pct: Rational::from_integer(100),
    }];
    for &t in thresholds {
        let tp = correct_recalls.iter().filter(|v| **v > t).count();
        let fp = incorrect_recalls.iter().filter(|v| **v > t).count();
        points.push(RocPoint {
            threshold: Some(t),
            hit_rate_pct: hundred(tp, correct_recalls.len()),
            false_alarm_pct: hundred(fp, incorrect_recalls.len()),
        });
    }
    Ok(RocCurve { points })
}

/// The default sweep grid: k/steps for k = 0..=steps. `steps` must be >= 1.
pub fn default_threshold_grid(steps: u32) -> Vec<Rational> {
    debug_assert!(steps >= 1);
    (0..=steps)
        .map(|k| Rational::new(k as i64, steps as i64))
        .collect()
}

/// Reference curve of the worst useful judge: one that accepts uniformly at
/// random with probability p scores hit rate = false-alarm rate = 100p, the
/// chance diagonal. Points are (hit_pct, false_alarm_pct) for p = k/steps.
pub fn worst_possible_diagonal(steps: u32) -> Vec<(Rational, Rational)> {
    debug_assert!(steps >= 1);
    (0..=steps)
        .map(|k| {
            let pct = Rational::new(100 * k as i64, steps as i64);
            (pct, pct)
        })
        .collect()
}

/// Reference point of a perfect judge: 100% hit rate at 0% false alarms.
pub fn best_possible_point() -> (Rational, Rational) {
    (Rational::from_integer(100), Rational::zero())
}

/// Per-run scoring metric.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Metric {
    /// Mean over the question universe of 1/(best rank judged correct),
    /// 0 for questions with no correct response.
    MeanReciprocalRank,
    /// Fraction of the question universe whose rank-1 response is correct.
    FirstAnswerAccuracy,
}

impl Metric {
    /// The flag spelling, also used in report headers.
    pub fn flag_name(self) -> &'static str {
        match self {
            Metric::MeanReciprocalRank => "mrr",
            Metric::FirstAnswerAccuracy => "first-answer",
        }
    }
}

/// Which judgment a score is computed from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum JudgmentSource {
    Auto,
    Human,
}

impl JudgmentSource {
    pub fn flag_name(self) -> &'static str {
        match self {
            JudgmentSource::Auto => "auto",
            JudgmentSource::Human => "human",
        }
    }
}

/// Scores every run over a fixed question universe (normally the key's
/// question set). Every run is averaged over the whole universe, so
/// unanswered questions count as zeros. Records for questions outside the
/// universe are ignored. With the human source, every consulted record must
/// carry a human judgment.
pub fn run_scores(
    judged: &[JudgedResponse],
    metric: Metric,
    source: JudgmentSource,
    questions: &BTreeSet<String>,
) -> Result<BTreeMap<String, Rational>, AnalyticsError> {
    if questions.is_empty() {
        return Err(AnalyticsError::NoQuestions);
    }
    // question -> [(rank, correct)]
    type RankedVerdicts<'a> = BTreeMap<&'a str, Vec<(u32, bool)>>;
    let mut runs: BTreeMap<&str, RankedVerdicts> = BTreeMap::new();
    let mut seen_ranks: BTreeSet<(&str, &str, u32)> = BTreeSet::new();
    for record in judged {
        let run_id = record.response.run_id.as_str();
        let question_id = record.response.question_id.as_str();
        // Every run present in the input gets a score, even one whose
        // records all fall outside the universe.
        let per_question = runs.entry(run_id).or_default();
        if !questions.contains(question_id) {
            continue;
        }
        let rank = record.response.rank;
        if !seen_ranks.insert((run_id, question_id, rank)) {
            return Err(AnalyticsError::DuplicateRank {
                run_id: run_id.to_string(),
                question_id: question_id.to_string(),
                rank,
            });
        }
        let correct = match source {
            JudgmentSource::Auto => record.auto.is_correct(),
            JudgmentSource::Human => human_verdict(record)?.is_correct(),
        };
        per_question.entry(question_id).or_default().push((rank, correct));
    }
    let universe_size = questions.len() as i64;
    let mut scores = BTreeMap::new();
    for (run_id, per_question) in &runs {
        let mut sum = Rational::zero();
        for question_id in questions {
            let Some(responses) = per_question.get(question_id.as_str()) else {
                continue;
            };
            match metric {
                Metric::MeanReciprocalRank => {
                    if let Some(best) = responses
                        .iter()
                        .filter(|(_, correct)| *correct)
                        .map(|(rank, _)| *rank)
                        .min()
                    {
                        sum += Rational::new(1, best as i64);
                    }
                }
                Metric::FirstAnswerAccuracy => {
                    if responses.iter().any(|&(rank, correct)| rank == 1 && correct) {
                        sum += Rational::from_integer(1);
                    }
                }
            }
        }
        scores.insert(run_id.to_string(), sum / universe_size);
    }
    Ok(scores)
}

/// A ranking of runs: best first, with tie groups. `tie_group[i]` is the
/// 0-based group of `order[i]`; groups are contiguous and increase down the
/// ranking. Two runs are tied exactly when they share a group.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ranking {
    pub order: Vec<String>,
    pub tie_group: Vec<usize>,
}

impl Ranking {
    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    /// run_id -> tie group, for pairwise comparison.
    fn groups(&self) -> BTreeMap<&str, usize> {
        self.order
            .iter()
            .zip(&self.tie_group)
            .map(|(run_id, &group)| (run_id.as_str(), group))
            .collect()
    }

    /// Competition rank of position i: 1 + number of runs in strictly
    /// better groups, so tied runs share a rank.
    pub fn competition_rank(&self, index: usize) -> usize {
        let group = self.tie_group[index];
        self.tie_group.iter().filter(|&&g| g < group).count() + 1
    }
}

/// Orders runs by descending score, ties broken by ascending run_id, with
/// equal scores recorded as tie groups.
pub fn rank_runs(scores: &BTreeMap<String, Rational>) -> Ranking {
    // BTreeMap iteration is ascending by run_id and the sort is stable, so
    // equal scores keep run_id order.
    let mut items: Vec<(&String, &Rational)> = scores.iter().collect();
    items.sort_by(|a, b| b.1.cmp(a.1));
    let mut order = Vec::with_capacity(items.len());
    let mut tie_group = Vec::with_capacity(items.len());
    let mut group = 0;
    for (i, (run_id, score)) in items.iter().enumerate() {
        if i > 0 && *score != items[i - 1].1 {
            group += 1;
        }
        order.push((*run_id).clone());
        tie_group.push(group);
    }
    Ranking { order, tie_group }
}

/// Result of comparing two rankings of the same run set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RankingComparison {
    pub ranking_a: Ranking,
    pub ranking_b: Ranking,
    pub concordant: usize,
    pub discordant: usize,
    /// Pairs tied in at least one ranking; they count as neither concordant
    /// nor discordant.
    pub tied_pairs: usize,
    /// (concordant - discordant) / (n(n-1)/2), exact.
    pub tau: Rational,
}

impl RankingComparison {
    pub fn n(&self) -> usize {
        self.ranking_a.len()
    }
}

/// Kendall's tau between two rankings over all n(n-1)/2 unordered pairs.
/// The denominator is always the full pair count; ties have no correction
/// term, they just drop out of the numerator.
pub fn kendalls_tau(a: &Ranking, b: &Ranking) -> Result<RankingComparison, AnalyticsError> {
    let groups_a = a.groups();
    let groups_b = b.groups();
    if groups_a.keys().ne(groups_b.keys()) {
        return Err(AnalyticsError::MismatchedRunSets);
    }
    let n = a.len();
    if n < 2 {
        return Err(AnalyticsError::TooFewRuns { count: n });
    }
    let mut concordant = 0usize;
    let mut discordant = 0usize;
    let mut tied_pairs = 0usize;
    let runs: Vec<&str> = groups_a.keys().copied().collect();
    for i in 0..runs.len() {
        for j in (i + 1)..runs.len() {
            let in_a = groups_a[runs[i]].cmp(&groups_a[runs[j]]);
            let in_b = groups_b[runs[i]].cmp(&groups_b[runs[j]]);
            if in_a == Ordering::Equal || in_b == Ordering::Equal {
                tied_pairs += 1;
            } else if in_a == in_b {
                concordant += 1;
            } else {
                discordant += 1;
            }
        }
    }
    let pair_count = (n * (n - 1) / 2) as i64;
    Ok(RankingComparison {
        ranking_a: a.clone(),
        ranking_b: b.clone(),
        concordant,
        discordant,
        tied_pairs,
        tau: Rational::new(concordant as i64 - discordant as i64, pair_count),
    })
}


#[cfg(test)]
mod props {
    use super::*;
    use crate::scorer::{RecallScore, Response};
    use proptest::prelude::*;

    fn record(i: usize, recall: Rational, auto_correct: bool, human_correct: bool) -> JudgedResponse {
        JudgedResponse {
            response: Response {
                run_id: "run".to_string(),
                question_id: format!("Q{i}"),
                rank: 1,
                text: String::new(),
            },
            score: RecallScore {
                value: recall,
                best_answer_index: 0,
                best_form_index: 0,
                matched: *recall.numer() as usize,
                key_size: *recall.denom() as usize,
            },
            auto: Judgment::from_bool(auto_correct),
            human: Some(Judgment::from_bool(human_correct)),
        }
    }

    /// (numerator, human) pairs; recall = numerator/8 spans all buckets.
    fn records() -> impl Strategy<Value = Vec<JudgedResponse>> {
        prop::collection::vec((0i64..=8, any::<bool>(), any::<bool>()), 2..40).prop_map(|raw| {
            raw.into_iter()
                .enumerate()
                .map(|(i, (num, auto, human))| record(i, Rational::new(num, 8), auto, human))
                .collect()
        })
    }

    proptest! {
        #[test]
        fn roc_rates_are_non_increasing_in_threshold(judged in records()) {
            let grid = default_threshold_grid(20);
            match roc_curve(&judged, &grid) {
                Ok(curve) => {
                    for pair in curve.points[1..].windows(2) {
                        prop_assert!(pair[0].hit_rate_pct >= pair[1].hit_rate_pct);
                        prop_assert!(pair[0].false_alarm_pct >= pair[1].false_alarm_pct);
                    }
                    // The accept-all point dominates everything.
                    for point in &curve.points[1..] {
                        prop_assert!(point.hit_rate_pct <= Rational::from_integer(100));
                        prop_assert!(point.false_alarm_pct <= Rational::from_integer(100));
                    }
                }
                Err(AnalyticsError::NoHumanCorrect | AnalyticsError::NoHumanIncorrect) => {}
                Err(other) => prop_assert!(false, "unexpected error {other:?}"),
            }
        }

        #[test]
        fn confusion_and_buckets_conserve_counts(judged in records()) {
            let agreement = agreement(&judged).unwrap();
            let table = bucket_table(&judged).unwrap();
            prop_assert_eq!(agreement.confusion.total(), judged.len());
            let (bucket_incorrect, bucket_correct) = table.totals();
            let (human_incorrect, human_correct) = agreement.confusion.human_totals();
            prop_assert_eq!(bucket_incorrect, human_incorrect);
            prop_assert_eq!(bucket_correct, human_correct);
            let disagreements = judged.len() - agreement.confusion.agreements();
            prop_assert_eq!(
                disagreements,
                agreement.confusion.human_correct_auto_incorrect()
                    + agreement.confusion.human_incorrect_auto_correct()
            );
        }
    }

    /// Random scores over a fixed small range force plenty of ties.
    fn score_maps() -> impl Strategy<Value = BTreeMap<String, Rational>> {
        prop::collection::vec(0i64..5, 2..9).prop_map(|raw| {
            raw.into_iter()
                .enumerate()
                .map(|(i, s)| (format!("run{i}"), Rational::new(s, 4)))
                .collect()
        })
    }

    /// Pair classification straight from the scores, independent of the
    /// Ranking representation.
    fn tau_from_scores(
        a: &BTreeMap<String, Rational>,
        b: &BTreeMap<String, Rational>,
    ) -> (usize, usize, Rational) {
        let ids: Vec<&String> = a.keys().collect();
        let n = ids.len();
        let mut concordant = 0usize;
        let mut discordant = 0usize;
        for i in 0..n {
            for j in (i + 1)..n {
                let in_a = a[ids[i]].cmp(&a[ids[j]]);
                let in_b = b[ids[i]].cmp(&b[ids[j]]);
                if in_a == std::cmp::Ordering::Equal || in_b == std::cmp::Ordering::Equal {
                    continue;
                }
                if in_a == in_b {
                    concordant += 1;
                } else {
                    discordant += 1;
                }
            }
        }
        let tau = Rational::new(
            concordant as i64 - discordant as i64,
            (n * (n - 1) / 2) as i64,
        );
        (concordant, discordant, tau)
    }

    proptest! {
        #[test]
        fn tau_matches_score_level_oracle(a in score_maps(), b_raw in prop::collection::vec(0i64..5, 2..9)) {
            // Rebuild b over a's run set so the sets always match.
            let b: BTreeMap<String, Rational> = a
                .keys()
                .zip(b_raw.iter().cycle())
                .map(|(id, &s)| (id.clone(), Rational::new(s, 4)))
                .collect();
            let cmp = kendalls_tau(&rank_runs(&a), &rank_runs(&b)).unwrap();
            let (concordant, discordant, tau) = tau_from_scores(&a, &b);
            prop_assert_eq!(cmp.concordant, concordant);
            prop_assert_eq!(cmp.discordant, discordant);
            prop_assert_eq!(cmp.tau, tau);
        }

        #[test]
        fn tau_is_symmetric_bounded_and_conserving(a in score_maps(), b_raw in prop::collection::vec(0i64..5, 2..9)) {
            let b: BTreeMap<String, Rational> = a
                .keys()
                .zip(b_raw.iter().cycle())
                .map(|(id, &s)| (id.clone(), Rational::new(s, 4)))
                .collect();
            let ra = rank_runs(&a);
            let rb = rank_runs(&b);
            let ab = kendalls_tau(&ra, &rb).unwrap();
            let ba = kendalls_tau(&rb, &ra).unwrap();
            prop_assert_eq!(ab.tau, ba.tau);
            prop_assert!(ab.tau >= Rational::from_integer(-1));
            prop_assert!(ab.tau <= Rational::from_integer(1));
            let n = ab.n();
            prop_assert_eq!(
                ab.concordant + ab.discordant + ab.tied_pairs,
                n * (n - 1) / 2
            );
        }

        #[test]
        fn ranking_ignores_positive_scaling(a in score_maps(), factor in 1i64..50) {
            let scaled: BTreeMap<String, Rational> = a
                .iter()
                .map(|(id, s)| (id.clone(), s * Rational::from_integer(factor)))
                .collect();
            prop_assert_eq!(rank_runs(&a), rank_runs(&scaled));
        }
    }
}
