//! Scoring responses against the key and thresholding into judgments.
//!
//! A response's score is its best recall over every form of every answer for
//! its question: shared terms divided by the form's term count. Judging is a
//! strict comparison, `recall > threshold`, so threshold 1 rejects even
//! perfect recall and the accept-everything regime lives in the analytics
//! layer as an explicit point rather than a comparator change.

use std::collections::BTreeSet;

use num_traits::Zero;
use thiserror::Error;

use crate::answer_key::{AnswerForm, AnswerKey};
use crate::rational::Rational;
use crate::text_norm::{normalize, NormalizedTermSet, StopWordList};

/// One system response: a ranked answer string for one question from one run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Response {
    pub run_id: String,
    pub question_id: String,
    /// 1-based rank of this response within its (run, question) group.
    pub rank: u32,
    pub text: String,
}

/// Errors from the response file format: `run_id<TAB>question_id<TAB>rank<TAB>text`.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ResponseParseError {
    #[error("response line {line}: expected 4 tab-separated columns")]
    MissingColumns { line: usize },
    #[error("response line {line}: {field} is empty")]
    EmptyField { line: usize, field: &'static str },
    #[error("response line {line}: rank {value:?} is not an integer >= 1")]
    BadRank { line: usize, value: String },
    #[error(
        "response line {line}: duplicate response for run {run_id:?} question {question_id:?} rank {rank}"
    )]
    DuplicateResponse {
        line: usize,
        run_id: String,
        question_id: String,
        rank: u32,
    },
}

/// Parses a response file. Blank lines and `#`-prefixed comments are skipped;
/// LF and CRLF both accepted. The text column is the remainder of the line,
/// so it may itself contain tabs.
pub fn parse_responses(text: &str) -> Result<Vec<Response>, ResponseParseError> {
    let mut responses = Vec::new();
    let mut seen: BTreeSet<(String, String, u32)> = BTreeSet::new();
    for (idx, raw_line) in text.lines().enumerate() {
        let line = raw_line.strip_suffix('\r').unwrap_or(raw_line);
        if line.trim().is_empty() || line.starts_with('#') {
            continue;
        }
        let no = idx + 1;
        let mut cols = line.splitn(4, '\t');
        let run_id = cols.next().unwrap_or("");
        let question_id = cols.next();
        let rank = cols.next();
        let body = cols.next();
        let (Some(question_id), Some(rank), Some(body)) = (question_id, rank, body) else {
            return Err(ResponseParseError::MissingColumns { line: no });
        };
        if run_id.is_empty() {
            return Err(ResponseParseError::EmptyField {
                line: no,
                field: "run_id",
            });
        }
        if question_id.is_empty() {
            return Err(ResponseParseError::EmptyField {
                line: no,
                field: "question_id",
            });
        }
        let rank_value: u32 = rank.parse().map_err(|_| ResponseParseError::BadRank {
            line: no,
            value: rank.to_string(),
        })?;
        if rank_value == 0 {
            return Err(ResponseParseError::BadRank {
                line: no,
                value: rank.to_string(),
            });
        }
        if !seen.insert((run_id.to_string(), question_id.to_string(), rank_value)) {
            return Err(ResponseParseError::DuplicateResponse {
                line: no,
                run_id: run_id.to_string(),
                question_id: question_id.to_string(),
                rank: rank_value,
            });
        }
        responses.push(Response {
            run_id: run_id.to_string(),
            question_id: question_id.to_string(),
            rank: rank_value,
            text: body.to_string(),
        });
    }
    Ok(responses)
}

/// A response's recall against the key, with the identity of the form that
/// produced it. `value` always equals `matched / key_size`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RecallScore {
    pub value: Rational,
    /// Index into the question's answers of the best-matching form.
    pub best_answer_index: usize,
    /// Index of that form within its answer.
    pub best_form_index: usize,
    /// Number of the best form's terms found in the response.
    pub matched: usize,
    /// Term count of the best form.
    pub key_size: usize,
}

/// Binary correctness, automatic or human.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Judgment {
    Correct,
    Incorrect,
}

impl Judgment {
    pub fn from_bool(correct: bool) -> Judgment {
        if correct {
            Judgment::Correct
        } else {
            Judgment::Incorrect
        }
    }

    pub fn is_correct(self) -> bool {
        matches!(self, Judgment::Correct)
    }

    /// The file rendering: 1 for correct, 0 for incorrect.
    pub fn as_binary(self) -> u8 {
        self.is_correct() as u8
    }
}

/// Scoring error: the response names a question the key does not contain.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScoreError {
    #[error("question {question_id:?} is not in the answer key")]
    UnknownQuestion { question_id: String },
}

/// Recall of a response's term set against one answer form.
pub fn form_recall(response_terms: &NormalizedTermSet, form: &AnswerForm) -> Rational {
    debug_assert!(!form.terms.is_empty());
    Rational::new(
        response_terms.intersection_count(&form.terms) as i64,
        form.terms.len() as i64,
    )
}

/// Scores one response: best recall over all forms of all answers for its
/// question, ties resolved in favor of the first form in key order.
pub fn score_response(
    response: &Response,
    key: &AnswerKey,
    stops: &StopWordList,
) -> Result<RecallScore, ScoreError> {
    let answers = key
        .answers(&response.question_id)
        .ok_or_else(|| ScoreError::UnknownQuestion {
            question_id: response.question_id.clone(),
        })?;
    let response_terms = normalize(&response.text, stops);
    let mut best: Option<RecallScore> = None;
    for (ai, answer) in answers.iter().enumerate() {
        for (fi, form) in answer.forms.iter().enumerate() {
            let value = form_recall(&response_terms, form);
            if best.as_ref().is_none_or(|b| value > b.value) {
                best = Some(RecallScore {
                    value,
                    best_answer_index: ai,
                    best_form_index: fi,
                    matched: response_terms.intersection_count(&form.terms),
                    key_size: form.terms.len(),
                });
            }
        }
    }
    // The key guarantees at least one answer with at least one form.
    Ok(best.expect("answer key entry with no forms"))
}

/// Thresholds a recall score into a judgment: correct iff `value > threshold`.
pub fn judge(score: &RecallScore, threshold: Rational) -> Judgment {
    Judgment::from_bool(score.value > threshold)
}

/// A scored and judged response, optionally paired with a human judgment.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JudgedResponse {
    pub response: Response,
    pub score: RecallScore,
    pub auto: Judgment,
    pub human: Option<Judgment>,
}

/// Result of judging a batch: judged records in input order, plus the
/// responses whose question the key lacks, also in input order. Nothing is
/// silently dropped.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BatchOutcome {
    pub judged: Vec<JudgedResponse>,
    pub unknown_question: Vec<Response>,
}

/// Scores and judges every response against the key at `threshold`.
pub fn judge_batch(
    responses: Vec<Response>,
    key: &AnswerKey,
    threshold: Rational,
    stops: &StopWordList,
) -> BatchOutcome {
    let mut judged = Vec::with_capacity(responses.len());
    let mut unknown_question = Vec::new();
    for response in responses {
        match score_response(&response, key, stops) {
            Ok(score) => {
                let auto = judge(&score, threshold);
                judged.push(JudgedResponse {
                    response,
                    score,
                    auto,
                    human: None,
                });
            }
            Err(ScoreError::UnknownQuestion { .. }) => unknown_question.push(response),
        }
    }
    BatchOutcome {
        judged,
        unknown_question,
    }
}

/// True when the score shares no term with any form: recall is exactly zero.
pub fn is_zero_recall(score: &RecallScore) -> bool {
    score.value.is_zero()
}


#[cfg(test)]
mod props {
    use super::*;
    use crate::answer_key::AnswerKey;
    use proptest::prelude::*;

    fn stops() -> StopWordList {
        StopWordList::default_english()
    }

    /// Stemming-inert content words (consonant-vowel-consonants shape, no
    /// suffix material, never stop words), so recall arithmetic is on plain
    /// display here.
    fn vocab_word(i: usize) -> String {
        const C: [char; 8] = ['b', 'c', 'd', 'f', 'g', 'k', 'm', 'p'];
        const V: [char; 4] = ['a', 'o', 'u', 'i'];
        format!(
            "{}{}{}",
            C[i % C.len()],
            V[(i / C.len()) % V.len()],
            C[(i / (C.len() * V.len())) % C.len()]
        )
    }

    fn word_picks() -> impl Strategy<Value = Vec<usize>> {
        prop::collection::vec(0usize..24, 1..8)
    }

    fn text_from(picks: &[usize]) -> String {
        picks
            .iter()
            .map(|&i| vocab_word(i))
            .collect::<Vec<_>>()
            .join(" ")
    }

    fn key_from(forms: &[Vec<usize>]) -> AnswerKey {
        let spec = forms
            .iter()
            .map(|f| text_from(f))
            .collect::<Vec<_>>()
            .join(" | ");
        AnswerKey::parse(&format!("QP\t{spec}\n"), &stops())
            .unwrap()
            .0
    }

    fn resp(text: String) -> Response {
        Response {
            run_id: "r".to_string(),
            question_id: "QP".to_string(),
            rank: 1,
            text,
        }
    }

    proptest! {
        #[test]
        fn score_bounds_and_consistency(
            forms in prop::collection::vec(word_picks(), 1..5),
            picks in word_picks(),
        ) {
            let key = key_from(&forms);
            let score = score_response(&resp(text_from(&picks)), &key, &stops()).unwrap();
            prop_assert!(score.value >= Rational::zero());
            prop_assert!(score.value <= Rational::from_integer(1));
            prop_assert_eq!(
                score.value,
                Rational::new(score.matched as i64, score.key_size as i64)
            );
        }

        /// The reported score dominates the recall of every individual form.
        #[test]
        fn max_dominance(
            forms in prop::collection::vec(word_picks(), 1..5),
            picks in word_picks(),
        ) {
            let key = key_from(&forms);
            let response = resp(text_from(&picks));
            let score = score_response(&response, &key, &stops()).unwrap();
            let terms = crate::text_norm::normalize(&response.text, &stops());
            for answer in key.answers("QP").unwrap() {
                for form in &answer.forms {
                    prop_assert!(score.value >= form_recall(&terms, form));
                }
            }
        }

        /// Appending text never lowers the score.
        #[test]
        fn append_monotone(
            forms in prop::collection::vec(word_picks(), 1..5),
            picks in word_picks(),
            extra in word_picks(),
        ) {
            let key = key_from(&forms);
            let base = score_response(&resp(text_from(&picks)), &key, &stops()).unwrap();
            let longer = format!("{} {}", text_from(&picks), text_from(&extra));
            let grown = score_response(&resp(longer), &key, &stops()).unwrap();
            prop_assert!(grown.value >= base.value);
        }

        /// Raising the threshold never turns an incorrect into a correct.
        #[test]
        fn threshold_monotone(
            forms in prop::collection::vec(word_picks(), 1..5),
            picks in word_picks(),
            t1 in 0i64..=100,
            t2 in 0i64..=100,
        ) {
            let (lo, hi) = (t1.min(t2), t1.max(t2));
            let key = key_from(&forms);
            let score = score_response(&resp(text_from(&picks)), &key, &stops()).unwrap();
            let at_hi = judge(&score, Rational::new(hi, 100));
            let at_lo = judge(&score, Rational::new(lo, 100));
            if at_hi.is_correct() {
                prop_assert!(at_lo.is_correct());
            }
        }

        /// Zero exactly when no form shares a term with the response.
        #[test]
        fn zero_iff_disjoint(
            forms in prop::collection::vec(word_picks(), 1..5),
            picks in word_picks(),
        ) {
            let key = key_from(&forms);
            let response = resp(text_from(&picks));
            let score = score_response(&response, &key, &stops()).unwrap();
            let terms = crate::text_norm::normalize(&response.text, &stops());
            let any_overlap = key.answers("QP").unwrap().iter().any(|a| {
                a.forms
                    .iter()
                    .any(|f| terms.intersection_count(&f.terms) > 0)
            });
            prop_assert_eq!(is_zero_recall(&score), !any_overlap);
        }
    }
}
