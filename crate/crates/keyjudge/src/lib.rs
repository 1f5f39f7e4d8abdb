//! Recall-based judging of question-answering output against a human answer key.
//!
//! The pipeline is deliberately simple: responses and answer-key forms are
//! reduced to sets of stemmed content words, a response's recall against the
//! best-matching form decides correctness at a configurable threshold, and the
//! analytics layer measures how well those automatic judgments track human
//! ones (agreement, recall buckets, ROC sweeps, run rankings and rank
//! correlation).
//!
//! All scores, thresholds, and derived statistics are exact rationals. No
//! float ever enters a comparison, so judgments and reports are reproducible
//! down to the byte.

pub mod analytics;
pub mod answer_key;
pub mod cli;
pub mod rational;
pub mod scorer;
pub mod text_norm;

pub use rational::Rational;
