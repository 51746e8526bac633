//! Time-stamped reference corpora.
//!
//! A corpus is read from line-delimited JSON, one pre-tokenized document per
//! line:
//!
//! ```text
//! {"timestamp": 1990, "tokens": ["neural", "network", "training"]}
//! ```
//!
//! Tokenization and stopword removal happen upstream; tokens are taken
//! verbatim. Vocabulary ids are assigned in lexicographic order so that the
//! id of a word never depends on document order.

mod cache;
mod cooccur;

use std::collections::{BTreeSet, HashMap};
use std::io::BufRead;
use std::sync::Arc;

use serde::Deserialize;

use crate::error::{Error, Result};

pub use cache::{read_stats_cache, write_stats_cache, StatsCache, CACHE_VERSION};
pub use cooccur::{count_cooccurrences, CooccurrenceStats, DEFAULT_WINDOW_SIZE};

pub type WordId = u32;

/// Dense word ↔ id mapping. Ids run `0..len()`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Vocabulary {
    words: Vec<String>,
    index: HashMap<String, WordId>,
}

impl Vocabulary {
    /// Builds a vocabulary from distinct words; ids follow sorted order.
    pub fn from_words<I, S>(words: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let sorted: BTreeSet<String> = words.into_iter().map(Into::into).collect();
        let words: Vec<String> = sorted.into_iter().collect();
        let index = words
            .iter()
            .enumerate()
            .map(|(i, w)| (w.clone(), i as WordId))
            .collect();
        Vocabulary { words, index }
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn id(&self, word: &str) -> Option<WordId> {
        self.index.get(word).copied()
    }

    pub fn word(&self, id: WordId) -> Option<&str> {
        self.words.get(id as usize).map(String::as_str)
    }

    pub fn words(&self) -> &[String] {
        &self.words
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Document {
    pub timestamp: i64,
    /// Token ids into the owning corpus's vocabulary.
    pub tokens: Vec<WordId>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TimedCorpus {
    documents: Vec<Document>,
    timestamps: Vec<i64>,
    vocabulary: Arc<Vocabulary>,
    rejected_empty: usize,
}

#[derive(Deserialize)]
struct Record {
    timestamp: i64,
    tokens: Vec<String>,
}

/// Reads a line-delimited JSON corpus.
///
/// Blank lines are ignored. Records with an empty token list are skipped
/// and counted in [`TimedCorpus::rejected_empty`].
pub fn load_corpus<R: BufRead>(reader: R) -> Result<TimedCorpus> {
    let mut raw = Vec::new();
    let mut rejected = 0;
    for (i, line) in reader.lines().enumerate() {
        let line_no = i + 1;
        let line = line.map_err(|e| Error::Parse {
            line: line_no,
            message: e.to_string(),
        })?;
        if line.trim().is_empty() {
            continue;
        }
        let record: Record = serde_json::from_str(&line).map_err(|e| Error::Parse {
            line: line_no,
            message: e.to_string(),
        })?;
        if record.tokens.is_empty() {
            rejected += 1;
            continue;
        }
        raw.push((record.timestamp, record.tokens));
    }
    if raw.is_empty() {
        return Err(Error::invalid("corpus contains no documents"));
    }
    let mut corpus = TimedCorpus::from_token_lists(raw)?;
    corpus.rejected_empty = rejected;
    Ok(corpus)
}

impl TimedCorpus {
    /// Builds a corpus from `(timestamp, tokens)` pairs. Every token becomes
    /// part of the vocabulary.
    pub fn from_token_lists<I, S>(docs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (i64, Vec<S>)>,
        S: AsRef<str>,
    {
        let docs: Vec<(i64, Vec<S>)> = docs.into_iter().collect();
        if docs.iter().any(|(_, tokens)| tokens.is_empty()) {
            return Err(Error::invalid("document with no tokens"));
        }
        let vocabulary = Vocabulary::from_words(
            docs.iter()
                .flat_map(|(_, tokens)| tokens.iter().map(|t| t.as_ref().to_owned())),
        );
        let timestamps: BTreeSet<i64> = docs.iter().map(|(ts, _)| *ts).collect();
        let documents = docs
            .iter()
            .map(|(ts, tokens)| Document {
                timestamp: *ts,
                tokens: tokens
                    .iter()
                    .map(|t| vocabulary.id(t.as_ref()).expect("token indexed above"))
                    .collect(),
            })
            .collect();
        Ok(TimedCorpus {
            documents,
            timestamps: timestamps.into_iter().collect(),
            vocabulary: Arc::new(vocabulary),
            rejected_empty: 0,
        })
    }

    pub fn documents(&self) -> &[Document] {
        &self.documents
    }

    /// Distinct timestamps, ascending.
    pub fn timestamps(&self) -> &[i64] {
        &self.timestamps
    }

    pub fn vocabulary(&self) -> &Arc<Vocabulary> {
        &self.vocabulary
    }

    /// Number of input records skipped because their token list was empty.
    pub fn rejected_empty(&self) -> usize {
        self.rejected_empty
    }

    pub fn len(&self) -> usize {
        self.documents.len()
    }

    pub fn is_empty(&self) -> bool {
        self.documents.is_empty()
    }

    /// Token strings of one document.
    pub fn tokens(&self, doc: usize) -> Vec<&str> {
        self.documents[doc]
            .tokens
            .iter()
            .map(|&id| self.vocabulary.word(id).expect("dense ids"))
            .collect()
    }

    /// Documents of a single timestamp, sharing this corpus's vocabulary.
    pub fn year_slice(&self, timestamp: i64) -> TimedCorpus {
        TimedCorpus {
            documents: self
                .documents
                .iter()
                .filter(|d| d.timestamp == timestamp)
                .cloned()
                .collect(),
            timestamps: vec![timestamp],
            vocabulary: Arc::clone(&self.vocabulary),
            rejected_empty: 0,
        }
    }

    /// Number of documents containing each word, indexed by word id.
    pub fn document_frequencies(&self) -> Vec<usize> {
        let mut df = vec![0usize; self.vocabulary.len()];
        let mut seen = vec![usize::MAX; self.vocabulary.len()];
        for (d, doc) in self.documents.iter().enumerate() {
            for &t in &doc.tokens {
                if seen[t as usize] != d {
                    seen[t as usize] = d;
                    df[t as usize] += 1;
                }
            }
        }
        df
    }
}

/// Keeps exactly the words whose document frequency `df` satisfies
/// `min_df·D ≤ df ≤ max_df·D`, removes all other tokens from the documents
/// and renumbers the survivors densely.
///
/// Documents are never dropped, even if pruning empties them; they still
/// count towards `D` and contribute one empty window to co-occurrence
/// counting. This keeps the operation idempotent.
pub fn prune_vocabulary(corpus: &TimedCorpus, min_df: f64, max_df: f64) -> Result<TimedCorpus> {
    if !(0.0..=1.0).contains(&min_df) || !(0.0..=1.0).contains(&max_df) {
        return Err(Error::invalid(format!(
            "min_df and max_df must lie in [0, 1], got {min_df} and {max_df}"
        )));
    }
    if min_df > max_df {
        return Err(Error::invalid(format!(
            "min_df ({min_df}) exceeds max_df ({max_df})"
        )));
    }
    let n_docs = corpus.documents.len() as f64;
    let lower = min_df * n_docs;
    let upper = max_df * n_docs;
    // absorbs rounding in fraction·D products such as 0.3·10
    const SLACK: f64 = 1e-9;
    let df = corpus.document_frequencies();
    let keep: Vec<bool> = df
        .iter()
        .map(|&d| {
            let d = d as f64;
            d >= lower - SLACK && d <= upper + SLACK
        })
        .collect();

    let vocabulary = Vocabulary::from_words(
        corpus
            .vocabulary
            .words()
            .iter()
            .zip(&keep)
            .filter(|(_, &k)| k)
            .map(|(w, _)| w.clone()),
    );
    if vocabulary.is_empty() {
        return Err(Error::invalid(format!(
            "pruning with min_df={min_df}, max_df={max_df} leaves an empty vocabulary"
        )));
    }
    // old id -> new id; both vocabularies are sorted so order is preserved
    let remap: Vec<Option<WordId>> = corpus
        .vocabulary
        .words()
        .iter()
        .map(|w| vocabulary.id(w))
        .collect();
    let documents = corpus
        .documents
        .iter()
        .map(|doc| Document {
            timestamp: doc.timestamp,
            tokens: doc
                .tokens
                .iter()
                .filter_map(|&t| remap[t as usize])
                .collect(),
        })
        .collect();
    Ok(TimedCorpus {
        documents,
        timestamps: corpus.timestamps.clone(),
        vocabulary: Arc::new(vocabulary),
        rejected_empty: corpus.rejected_empty,
    })
}
