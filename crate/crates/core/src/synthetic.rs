//! Deterministic drifting-chain fixtures.
//!
//! Topic `k` owns a chain of `n_top + n_timestamps − 1` words; its slice at
//! time `t` is the window `chain[t .. t + n_top]`, so consecutive slices
//! share `n_top − 1` words and topics never share words. Each (topic, year)
//! slice emits documents sampled from its own words, which makes within-slice
//! and cross-year pairs of one topic co-occur in the reference corpus. A
//! `mix` share of each document's tokens is drawn from the other topics of
//! the same year instead, as in documents that mix several topics.

use std::io::Write;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::corpus::TimedCorpus;
use crate::error::{Error, Result};
use crate::topics::DynamicTopics;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChainConfig {
    pub n_topics: usize,
    pub n_timestamps: usize,
    pub n_top: usize,
    pub docs_per_slice: usize,
    pub min_doc_len: usize,
    pub max_doc_len: usize,
    pub start_year: i64,
    /// Probability that a token comes from another topic of the same year.
    pub mix: f64,
    pub seed: u64,
}

impl Default for ChainConfig {
    fn default() -> Self {
        ChainConfig {
            n_topics: 10,
            n_timestamps: 10,
            n_top: 10,
            docs_per_slice: 6,
            min_doc_len: 15,
            max_doc_len: 30,
            start_year: 2000,
            mix: 0.2,
            seed: 0,
        }
    }
}

pub struct ChainFixture {
    pub topics: DynamicTopics,
    /// Documents as `(timestamp, tokens)`, ordered by year then topic.
    pub documents: Vec<(i64, Vec<String>)>,
}

pub fn chain_word(topic: usize, position: usize) -> String {
    format!("t{topic:02}w{position:03}")
}

pub fn drifting_chains(config: &ChainConfig) -> Result<ChainFixture> {
    let ChainConfig {
        n_topics,
        n_timestamps,
        n_top,
        docs_per_slice,
        min_doc_len,
        max_doc_len,
        start_year,
        mix,
        seed,
    } = *config;
    if n_topics == 0 || n_timestamps == 0 || n_top == 0 || docs_per_slice == 0 {
        return Err(Error::invalid("fixture dimensions must all be positive"));
    }
    if min_doc_len == 0 || min_doc_len > max_doc_len {
        return Err(Error::invalid("document length range is empty"));
    }
    if !(0.0..=1.0).contains(&mix) {
        return Err(Error::invalid(format!("mix must lie in [0, 1], got {mix}")));
    }
    let timestamps: Vec<i64> = (0..n_timestamps as i64).map(|t| start_year + t).collect();
    let grid: Vec<Vec<Vec<String>>> = (0..n_topics)
        .map(|k| {
            (0..n_timestamps)
                .map(|t| (t..t + n_top).map(|j| chain_word(k, j)).collect())
                .collect()
        })
        .collect();
    let topics = DynamicTopics::from_grid(timestamps.clone(), &grid)?;

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut documents = Vec::with_capacity(n_topics * n_timestamps * docs_per_slice);
    for (t, &ts) in timestamps.iter().enumerate() {
        for k in 0..n_topics {
            for _ in 0..docs_per_slice {
                let len = rng.gen_range(min_doc_len..=max_doc_len);
                let tokens = (0..len)
                    .map(|_| {
                        let source = if n_topics > 1 && rng.gen_bool(mix) {
                            (k + rng.gen_range(1..n_topics)) % n_topics
                        } else {
                            k
                        };
                        let words = &grid[source][t];
                        words[rng.gen_range(0..words.len())].clone()
                    })
                    .collect();
                documents.push((ts, tokens));
            }
        }
    }
    Ok(ChainFixture { topics, documents })
}

impl ChainFixture {
    pub fn corpus(&self) -> Result<TimedCorpus> {
        TimedCorpus::from_token_lists(self.documents.iter().map(|(t, d)| (*t, d.clone())))
    }

    /// Writes the documents in the line-delimited corpus format.
    pub fn write_corpus_jsonl<W: Write>(&self, mut writer: W) -> Result<()> {
        for (timestamp, tokens) in &self.documents {
            let line = serde_json::json!({ "timestamp": timestamp, "tokens": tokens });
            writeln!(writer, "{line}").map_err(|e| Error::io("<corpus>", e))?;
        }
        Ok(())
    }
}
