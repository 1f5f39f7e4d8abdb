//! The human answer key: parsing, serialization, and summary statistics.
//!
//! A key file is one record per line, `QID<TAB>answers`, where the answers
//! field lists alternative answers separated by `|` and equivalent phrasings
//! of one answer separated by `;`:
//!
//! ```text
//! Q12<TAB>National Center for Supercomputing Applications; NCSA | Netscape Communications
//! ```
//!
//! Answer and form order is preserved from the file; the scorer's first-wins
//! tie-break depends on it.

use indexmap::IndexMap;
use thiserror::Error;

use crate::rational::Rational;
use crate::text_norm::{normalize, NormalizedTermSet, StopWordList};

/// One phrasing of an answer: the raw text as written in the key, plus its
/// normalized terms. `terms` is never empty; empty-normalizing forms are
/// dropped at parse time.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AnswerForm {
    pub raw: String,
    pub terms: NormalizedTermSet,
}

/// One acceptable answer to a question, with at least one surviving form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Answer {
    pub forms: Vec<AnswerForm>,
}

/// Hard errors from key parsing. Line numbers are 1-based and count every
/// physical line, comments included.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum KeyParseError {
    #[error("key line {line}: missing tab between question id and answer spec")]
    MissingTab { line: usize },
    #[error("key line {line}: empty question id")]
    EmptyQuestionId { line: usize },
    #[error("key line {line}: every answer form of {question_id:?} normalizes to nothing")]
    EmptyAnswerSet { line: usize, question_id: String },
    #[error("key line {line}: duplicate question id {question_id:?}")]
    DuplicateQuestionId { line: usize, question_id: String },
}

/// Non-fatal parse findings, reported alongside the parsed key.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum KeyWarning {
    /// A form normalized to the empty set (stop words and punctuation only)
    /// and was dropped. The rest of the record stands.
    #[error("question {question_id:?}: dropped answer form {raw:?} (no content words)")]
    DroppedEmptyForm { question_id: String, raw: String },
}

/// Parses a single `QID<TAB>spec` record. `line` is the 1-based line number
/// used in errors and warnings.
pub fn parse_key_line(
    text: &str,
    line: usize,
    stops: &StopWordList,
) -> Result<(String, Vec<Answer>, Vec<KeyWarning>), KeyParseError> {
    let (qid, spec) = text
        .split_once('\t')
        .ok_or(KeyParseError::MissingTab { line })?;
    let qid = qid.trim();
    if qid.is_empty() {
        return Err(KeyParseError::EmptyQuestionId { line });
    }

    let mut answers = Vec::new();
    let mut warnings = Vec::new();
    for answer_spec in spec.split('|') {
        let mut forms = Vec::new();
        for form_spec in answer_spec.split(';') {
            let raw = form_spec.trim();
            let terms = normalize(raw, stops);
            if terms.is_empty() {
                warnings.push(KeyWarning::DroppedEmptyForm {
                    question_id: qid.to_string(),
                    raw: raw.to_string(),
                });
            } else {
                forms.push(AnswerForm {
                    raw: raw.to_string(),
                    terms,
                });
            }
        }
        if !forms.is_empty() {
            answers.push(Answer { forms });
        }
    }
    if answers.is_empty() {
        return Err(KeyParseError::EmptyAnswerSet {
            line,
            question_id: qid.to_string(),
        });
    }
    Ok((qid.to_string(), answers, warnings))
}

/// An entire answer key. Question order follows the file.
#[derive(Debug, Clone, Default)]
pub struct AnswerKey {
    entries: IndexMap<String, Vec<Answer>>,
}

impl PartialEq for AnswerKey {
    /// Structural equality: same questions mapping to the same answers,
    /// regardless of question order.
    fn eq(&self, other: &Self) -> bool {
        self.entries == other.entries
    }
}

impl Eq for AnswerKey {}

impl AnswerKey {
    /// Parses a whole key file. Accepts LF or CRLF, skips blank lines and
    /// `#`-prefixed comment lines.
    pub fn parse(
        text: &str,
        stops: &StopWordList,
    ) -> Result<(AnswerKey, Vec<KeyWarning>), KeyParseError> {
        let mut entries: IndexMap<String, Vec<Answer>> = IndexMap::new();
        let mut warnings = Vec::new();
        for (idx, raw_line) in text.lines().enumerate() {
            let line = raw_line.strip_suffix('\r').unwrap_or(raw_line);
            if line.trim().is_empty() || line.starts_with('#') {
                continue;
            }
            let (qid, answers, mut w) = parse_key_line(line, idx + 1, stops)?;
            if entries.contains_key(&qid) {
                return Err(KeyParseError::DuplicateQuestionId {
                    line: idx + 1,
                    question_id: qid,
                });
            }
            entries.insert(qid, answers);
            warnings.append(&mut w);
        }
        Ok((AnswerKey { entries }, warnings))
    }

    /// Renders the key back into its file format, one record per question in
    /// stored order. Re-parsing the output reproduces this key exactly.
    pub fn serialize(&self) -> String {
        let mut out = String::new();
        for (qid, answers) in &self.entries {
            let spec = answers
                .iter()
                .map(|a| {
                    a.forms
                        .iter()
                        .map(|f| f.raw.as_str())
                        .collect::<Vec<_>>()
                        .join("; ")
                })
                .collect::<Vec<_>>()
                .join(" | ");
            out.push_str(qid);
            out.push('\t');
            out.push_str(&spec);
            out.push('\n');
        }
        out
    }

    pub fn answers(&self, question_id: &str) -> Option<&[Answer]> {
        self.entries.get(question_id).map(Vec::as_slice)
    }

    pub fn contains_question(&self, question_id: &str) -> bool {
        self.entries.contains_key(question_id)
    }

    pub fn question_ids(&self) -> impl Iterator<Item = &str> {
        self.entries.keys().map(String::as_str)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &[Answer])> {
        self.entries.iter().map(|(q, a)| (q.as_str(), a.as_slice()))
    }

    pub fn question_count(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Summary means over the key, or `None` for an empty key.
    ///
    /// * answers per question: total answers over total questions;
    /// * forms per answer: each question's own forms-per-answer mean,
    ///   averaged over questions, so a many-answered question does not
    ///   dominate the figure;
    /// * content words per form: mean term count over every form in the key.
    pub fn statistics(&self) -> Option<KeyStatistics> {
        if self.entries.is_empty() {
            return None;
        }
        let questions = self.entries.len() as i64;
        let mut answers_total = 0i64;
        let mut per_question_form_means = Rational::from_integer(0);
        let mut forms_total = 0i64;
        let mut terms_total = 0i64;
        for answers in self.entries.values() {
            let answer_count = answers.len() as i64;
            let form_count: i64 = answers.iter().map(|a| a.forms.len() as i64).sum();
            answers_total += answer_count;
            forms_total += form_count;
            per_question_form_means += Rational::new(form_count, answer_count);
            terms_total += answers
                .iter()
                .flat_map(|a| &a.forms)
                .map(|f| f.terms.len() as i64)
                .sum::<i64>();
        }
        Some(KeyStatistics {
            answers_per_question: Rational::new(answers_total, questions),
            forms_per_answer: per_question_form_means / Rational::from_integer(questions),
            content_words_per_form: Rational::new(terms_total, forms_total),
        })
    }
}

/// The three structural means describing a key.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct KeyStatistics {
    pub answers_per_question: Rational,
    pub forms_per_answer: Rational,
    pub content_words_per_form: Rational,
}
