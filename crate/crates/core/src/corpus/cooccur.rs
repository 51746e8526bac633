use std::collections::HashMap;
use std::sync::Arc;

use rayon::prelude::*;

use super::{Document, TimedCorpus, Vocabulary, WordId};
use crate::error::{Error, Result};

pub const DEFAULT_WINDOW_SIZE: usize = 10;

/// Documents per parallel counting task.
const CHUNK: usize = 256;

/// Sliding-window co-occurrence counts over a reference corpus.
///
/// Every contiguous span of `window_size` tokens is one virtual window; a
/// document no longer than the window is a single window. Counts use set
/// semantics: a word present twice in a window counts once for it.
#[derive(Debug, Clone, PartialEq)]
pub struct CooccurrenceStats {
    pub(crate) window_size: usize,
    pub(crate) total_windows: u64,
    pub(crate) vocabulary: Arc<Vocabulary>,
    pub(crate) word_windows: Vec<u64>,
    /// Keyed by `(min, max)` id; only observed pairs are stored.
    pub(crate) pair_windows: HashMap<(WordId, WordId), u64>,
}

/// Counts windows for every word and every co-occurring word pair.
///
/// Document partitions are counted in parallel and merged by integer
/// addition, so the result does not depend on scheduling.
pub fn count_cooccurrences(corpus: &TimedCorpus, window_size: usize) -> Result<CooccurrenceStats> {
    if window_size == 0 {
        return Err(Error::invalid("window_size must be at least 1"));
    }
    let vocab_len = corpus.vocabulary().len();
    let partial = corpus
        .documents()
        .par_chunks(CHUNK)
        .map(|docs| {
            let mut acc = Partial::new(vocab_len);
            for doc in docs {
                acc.add_document(doc, window_size);
            }
            acc
        })
        .reduce(|| Partial::new(vocab_len), Partial::merge);
    Ok(CooccurrenceStats {
        window_size,
        total_windows: partial.total,
        vocabulary: Arc::clone(corpus.vocabulary()),
        word_windows: partial.words,
        pair_windows: partial.pairs,
    })
}

struct Partial {
    total: u64,
    words: Vec<u64>,
    pairs: HashMap<(WordId, WordId), u64>,
}

impl Partial {
    fn new(vocab_len: usize) -> Self {
        Partial {
            total: 0,
            words: vec![0; vocab_len],
            pairs: HashMap::new(),
        }
    }

    fn merge(mut self, other: Partial) -> Partial {
        self.total += other.total;
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a += b;
        }
        for (k, v) in other.pairs {
            *self.pairs.entry(k).or_insert(0) += v;
        }
        self
    }

    fn add_document(&mut self, doc: &Document, window_size: usize) {
        let tokens = &doc.tokens;
        if tokens.len() <= window_size {
            let mut present: Vec<WordId> = tokens.clone();
            present.sort_unstable();
            present.dedup();
            self.add_window(&present);
            return;
        }
        // multiplicity of each id inside the current window
        let mut inside: HashMap<WordId, u32> = HashMap::new();
        for &t in &tokens[..window_size] {
            *inside.entry(t).or_insert(0) += 1;
        }
        let mut present = Vec::with_capacity(window_size);
        for start in 0..=tokens.len() - window_size {
            if start > 0 {
                let out = tokens[start - 1];
                let slot = inside.get_mut(&out).expect("token entered earlier");
                *slot -= 1;
                if *slot == 0 {
                    inside.remove(&out);
                }
                *inside.entry(tokens[start + window_size - 1]).or_insert(0) += 1;
            }
            present.clear();
            present.extend(inside.keys().copied());
            present.sort_unstable();
            self.add_window(&present);
        }
    }

    /// `present` must be sorted and free of duplicates.
    fn add_window(&mut self, present: &[WordId]) {
        self.total += 1;
        for (i, &a) in present.iter().enumerate() {
            self.words[a as usize] += 1;
            for &b in &present[i + 1..] {
                *self.pairs.entry((a, b)).or_insert(0) += 1;
            }
        }
    }
}

impl CooccurrenceStats {
    pub fn window_size(&self) -> usize {
        self.window_size
    }

    pub fn total_windows(&self) -> u64 {
        self.total_windows
    }

    pub fn vocabulary(&self) -> &Arc<Vocabulary> {
        &self.vocabulary
    }

    pub fn word_id(&self, word: &str) -> Option<WordId> {
        self.vocabulary.id(word)
    }

    pub fn word_count(&self, w: WordId) -> u64 {
        self.word_windows.get(w as usize).copied().unwrap_or(0)
    }

    /// Windows containing both words. For `a == b` this is the word count.
    pub fn pair_count(&self, a: WordId, b: WordId) -> u64 {
        if a == b {
            return self.word_count(a);
        }
        let key = if a < b { (a, b) } else { (b, a) };
        self.pair_windows.get(&key).copied().unwrap_or(0)
    }

    /// Number of distinct co-occurring pairs stored.
    pub fn observed_pairs(&self) -> usize {
        self.pair_windows.len()
    }

    /// Observed pairs in ascending key order.
    pub fn sorted_pairs(&self) -> Vec<((WordId, WordId), u64)> {
        let mut pairs: Vec<_> = self.pair_windows.iter().map(|(&k, &v)| (k, v)).collect();
        pairs.sort_unstable();
        pairs
    }

    pub fn p_word(&self, w: WordId) -> f64 {
        if self.total_windows == 0 {
            return 0.0;
        }
        self.word_count(w) as f64 / self.total_windows as f64
    }

    pub fn p_pair(&self, a: WordId, b: WordId) -> f64 {
        if self.total_windows == 0 {
            return 0.0;
        }
        self.pair_count(a, b) as f64 / self.total_windows as f64
    }

    /// Marginal probability by word string; 0 for out-of-vocabulary words.
    pub fn p_word_str(&self, w: &str) -> f64 {
        self.word_id(w).map_or(0.0, |id| self.p_word(id))
    }

    pub fn p_pair_str(&self, a: &str, b: &str) -> f64 {
        match (self.word_id(a), self.word_id(b)) {
            (Some(a), Some(b)) => self.p_pair(a, b),
            _ => 0.0,
        }
    }
}
