//! Stop-word list: the fixed default shipped in the binary, plus the
//! file-based override format.

use std::collections::BTreeSet;

use sha2::{Digest, Sha256};
use thiserror::Error;

/// Default English stop list: the classic 127-word English IR list, plus
/// `el` so that a stray foreign article in otherwise-English response text
/// ("El Niño") does not count as content.
///
/// Order here is the list's traditional one; the set is sorted internally.
const DEFAULT_ENGLISH: &[&str] = &[
    "i", "me", "my", "myself", "we", "our", "ours", "ourselves", "you", "your", "yours",
    "yourself", "yourselves", "he", "him", "his", "himself", "she", "her", "hers", "herself",
    "it", "its", "itself", "they", "them", "their", "theirs", "themselves", "what", "which",
    "who", "whom", "this", "that", "these", "those", "am", "is", "are", "was", "were", "be",
    "been", "being", "have", "has", "had", "having", "do", "does", "did", "doing", "a", "an",
    "the", "and", "but", "if", "or", "because", "as", "until", "while", "of", "at", "by", "for",
    "with", "about", "against", "between", "into", "through", "during", "before", "after",
    "above", "below", "to", "from", "up", "down", "in", "out", "on", "off", "over", "under",
    "again", "further", "then", "once", "here", "there", "when", "where", "why", "how", "all",
    "any", "both", "each", "few", "more", "most", "other", "some", "such", "no", "nor", "not",
    "only", "own", "same", "so", "than", "too", "very", "s", "t", "can", "will", "just", "don",
    "should", "now", "el",
];

/// Error from stop-word list construction or file parsing.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StopWordError {
    /// Entries must already be case-folded; the list never folds for you.
    #[error("stop list line {line}: entry {entry:?} is not lowercase")]
    NotLowercase { line: usize, entry: String },
    /// One word per line; interior or leading whitespace is malformed input.
    #[error("stop list line {line}: entry {entry:?} contains whitespace")]
    ContainsWhitespace { line: usize, entry: String },
}

/// A fixed set of words excluded from term sets during normalization.
///
/// Entries are lowercase, non-empty, and unique. Membership is tested against
/// the case-folded token, so the list itself never needs mixed-case entries.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StopWordList {
    words: BTreeSet<String>,
}

impl StopWordList {
    /// The embedded default list. Stable across runs; its hash identifies it
    /// in report headers.
    pub fn default_english() -> Self {
        StopWordList {
            words: DEFAULT_ENGLISH.iter().map(|w| w.to_string()).collect(),
        }
    }

    /// Builds a list from pre-validated words, rejecting anything that is
    /// empty, non-lowercase, or whitespace-bearing. Duplicates collapse.
    pub fn from_words<I, S>(words: I) -> Result<Self, StopWordError>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let mut set = BTreeSet::new();
        for (idx, word) in words.into_iter().enumerate() {
            set.insert(validate(word.as_ref(), idx + 1)?);
        }
        Ok(StopWordList { words: set })
    }

    /// Parses the override file format: one lowercase word per line,
    /// `#`-prefixed comment lines ignored, trailing whitespace trimmed.
    /// Blank lines are skipped.
    pub fn parse(text: &str) -> Result<Self, StopWordError> {
        let mut set = BTreeSet::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.trim_end();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            set.insert(validate(line, idx + 1)?);
        }
        Ok(StopWordList { words: set })
    }

    pub fn contains(&self, word: &str) -> bool {
        self.words.contains(word)
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &str> {
        self.words.iter().map(|w| w.as_str())
    }

    /// SHA-256 of the sorted entries, one per line. Report headers carry this
    /// so that two reports are comparable only when the same list produced
    /// them.
    pub fn sha256_hex(&self) -> String {
        let mut hasher = Sha256::new();
        for word in &self.words {
            hasher.update(word.as_bytes());
            hasher.update(b"\n");
        }
        let digest = hasher.finalize();
        let mut hex = String::with_capacity(64);
        for byte in digest {
            hex.push_str(&format!("{byte:02x}"));
        }
        hex
    }
}

fn validate(entry: &str, line: usize) -> Result<String, StopWordError> {
    debug_assert!(!entry.is_empty());
    if entry.chars().any(char::is_whitespace) {
        return Err(StopWordError::ContainsWhitespace {
            line,
            entry: entry.to_string(),
        });
    }
    if entry.chars().any(char::is_uppercase) {
        return Err(StopWordError::NotLowercase {
            line,
            entry: entry.to_string(),
        });
    }
    Ok(entry.to_string())
}
