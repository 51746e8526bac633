//! Top-word lists of a dynamic topic model laid out on a topic × time grid.
//!
//! On disk a model is a JSON document:
//!
//! ```text
//! {
//!   "timestamps": [1990, 1991],
//!   "n_top": 3,
//!   "topics": [
//!     {"id": 0, "slices": [["rules", "rule", "cell"], ["rules", "rule", "group"]]}
//!   ]
//! }
//! ```
//!
//! Perturbed models written by this crate carry an extra `provenance`
//! object, which readers ignore.

use std::collections::HashSet;
use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const DEFAULT_N_TOP: usize = 10;

/// Ordered list of distinct top words of one topic at one timestamp.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<String>", into = "Vec<String>")]
pub struct TopicWordList(Vec<String>);

impl TopicWordList {
    pub fn new<I, S>(words: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let words: Vec<String> = words.into_iter().map(Into::into).collect();
        if words.is_empty() {
            return Err(Error::invalid("topic word list is empty"));
        }
        let mut seen = HashSet::with_capacity(words.len());
        for w in &words {
            if !seen.insert(w.as_str()) {
                return Err(Error::invalid(format!("word {w:?} repeated in topic word list")));
            }
        }
        Ok(TopicWordList(words))
    }

    pub fn words(&self) -> &[String] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, word: &str) -> bool {
        self.0.iter().any(|w| w == word)
    }

    pub fn iter(&self) -> impl Iterator<Item = &str> {
        self.0.iter().map(String::as_str)
    }

    pub(crate) fn words_mut(&mut self) -> &mut Vec<String> {
        &mut self.0
    }
}

impl TryFrom<Vec<String>> for TopicWordList {
    type Error = Error;

    fn try_from(words: Vec<String>) -> Result<Self> {
        TopicWordList::new(words)
    }
}

impl From<TopicWordList> for Vec<String> {
    fn from(list: TopicWordList) -> Self {
        list.0
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Topic {
    pub id: usize,
    pub slices: Vec<TopicWordList>,
}

/// Dense K × T grid of topic slices with exactly `n_top` words each.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DynamicTopics {
    timestamps: Vec<i64>,
    n_top: usize,
    topics: Vec<Topic>,
}

impl DynamicTopics {
    pub fn new(timestamps: Vec<i64>, n_top: usize, topics: Vec<Topic>) -> Result<Self> {
        if timestamps.is_empty() {
            return Err(Error::invalid("topic model has no timestamps"));
        }
        if timestamps.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::invalid("timestamps must be strictly increasing"));
        }
        if topics.is_empty() {
            return Err(Error::invalid("topic model has no topics"));
        }
        if n_top == 0 {
            return Err(Error::invalid("n_top must be at least 1"));
        }
        let mut ids = HashSet::new();
        for topic in &topics {
            if !ids.insert(topic.id) {
                return Err(Error::invalid(format!("duplicate topic id {}", topic.id)));
            }
            if topic.slices.len() != timestamps.len() {
                return Err(Error::invalid(format!(
                    "topic {} has {} slices for {} timestamps",
                    topic.id,
                    topic.slices.len(),
                    timestamps.len()
                )));
            }
            for (slice, ts) in topic.slices.iter().zip(&timestamps) {
                if slice.len() != n_top {
                    return Err(Error::invalid(format!(
                        "topic {} at {ts} has {} words, expected n_top = {n_top}",
                        topic.id,
                        slice.len()
                    )));
                }
            }
        }
        Ok(DynamicTopics {
            timestamps,
            n_top,
            topics,
        })
    }

    /// Builds a grid from word lists indexed `[topic][timestamp]`; topic ids
    /// are the positions.
    pub fn from_grid<S: AsRef<str>>(timestamps: Vec<i64>, grid: &[Vec<Vec<S>>]) -> Result<Self> {
        let n_top = grid
            .first()
            .and_then(|t| t.first())
            .map_or(0, |s| s.len());
        let topics = grid
            .iter()
            .enumerate()
            .map(|(id, slices)| {
                Ok(Topic {
                    id,
                    slices: slices
                        .iter()
                        .map(|s| TopicWordList::new(s.iter().map(|w| w.as_ref().to_owned())))
                        .collect::<Result<_>>()?,
                })
            })
            .collect::<Result<_>>()?;
        DynamicTopics::new(timestamps, n_top, topics)
    }

    pub fn timestamps(&self) -> &[i64] {
        &self.timestamps
    }

    pub fn n_top(&self) -> usize {
        self.n_top
    }

    pub fn n_topics(&self) -> usize {
        self.topics.len()
    }

    pub fn n_timestamps(&self) -> usize {
        self.timestamps.len()
    }

    pub fn topics(&self) -> &[Topic] {
        &self.topics
    }

    /// Temporal sequence of topic `k` (by position).
    pub fn sequence(&self, k: usize) -> &[TopicWordList] {
        &self.topics[k].slices
    }

    pub fn slice(&self, k: usize, t: usize) -> &TopicWordList {
        &self.topics[k].slices[t]
    }

    /// All K slices at timestamp index `t`, in topic order.
    pub fn slices_at(&self, t: usize) -> Vec<&TopicWordList> {
        self.topics.iter().map(|topic| &topic.slices[t]).collect()
    }

    pub(crate) fn topics_mut(&mut self) -> &mut [Topic] {
        &mut self.topics
    }
}

#[derive(Serialize, Deserialize)]
struct TopicsFile<P> {
    timestamps: Vec<i64>,
    n_top: usize,
    topics: Vec<Topic>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    provenance: Option<P>,
}

pub fn read_topics<R: Read>(reader: R) -> Result<DynamicTopics> {
    let file: TopicsFile<serde::de::IgnoredAny> = serde_json::from_reader(reader)
        .map_err(|e| Error::invalid(format!("malformed topics file: {e}")))?;
    DynamicTopics::new(file.timestamps, file.n_top, file.topics)
}

/// Writes pretty-printed topics JSON, with an optional provenance block.
pub fn write_topics<W: Write, P: Serialize>(
    topics: &DynamicTopics,
    provenance: Option<&P>,
    mut writer: W,
) -> Result<()> {
    let file = TopicsFile {
        timestamps: topics.timestamps.clone(),
        n_top: topics.n_top,
        topics: topics.topics.clone(),
        provenance,
    };
    serde_json::to_writer_pretty(&mut writer, &file)
        .map_err(|e| Error::invalid(format!("cannot serialize topics: {e}")))?;
    writer
        .write_all(b"\n")
        .map_err(|e| Error::io("<topics>", e))
}
