//! Versioned JSON persistence for co-occurrence statistics.

use std::collections::{BTreeMap, HashMap};
use std::io::{Read, Write};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::{CooccurrenceStats, Vocabulary, WordId};
use crate::error::{Error, Result};

pub const CACHE_VERSION: u32 = 1;
const CACHE_FORMAT: &str = "dtm-eval/cooccurrence";

/// Global statistics of a corpus plus, optionally, one table per timestamp.
/// All tables share one vocabulary and window size.
#[derive(Debug, Clone, PartialEq)]
pub struct StatsCache {
    pub timestamps: Vec<i64>,
    pub global: CooccurrenceStats,
    pub per_year: Option<BTreeMap<i64, CooccurrenceStats>>,
}

#[derive(Serialize, Deserialize)]
struct CacheFile {
    format: String,
    version: u32,
    window_size: usize,
    timestamps: Vec<i64>,
    vocabulary: Vec<String>,
    global: Table,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    per_year: Option<BTreeMap<i64, Table>>,
}

#[derive(Serialize, Deserialize)]
struct Table {
    total_windows: u64,
    word_windows: Vec<u64>,
    /// `[a, b, count]` with `a < b`, sorted.
    pair_windows: Vec<(WordId, WordId, u64)>,
}

impl Table {
    fn from_stats(stats: &CooccurrenceStats) -> Self {
        Table {
            total_windows: stats.total_windows,
            word_windows: stats.word_windows.clone(),
            pair_windows: stats
                .sorted_pairs()
                .into_iter()
                .map(|((a, b), n)| (a, b, n))
                .collect(),
        }
    }

    fn into_stats(self, window_size: usize, vocabulary: &Arc<Vocabulary>) -> Result<CooccurrenceStats> {
        let v = vocabulary.len();
        if self.word_windows.len() != v {
            return Err(Error::invalid(format!(
                "cache word table has {} entries for a vocabulary of {v}",
                self.word_windows.len()
            )));
        }
        let mut pairs = HashMap::with_capacity(self.pair_windows.len());
        for (a, b, n) in self.pair_windows {
            if a >= b || b as usize >= v {
                return Err(Error::invalid(format!("cache pair key ({a}, {b}) is invalid")));
            }
            pairs.insert((a, b), n);
        }
        Ok(CooccurrenceStats {
            window_size,
            total_windows: self.total_windows,
            vocabulary: Arc::clone(vocabulary),
            word_windows: self.word_windows,
            pair_windows: pairs,
        })
    }
}

pub fn write_stats_cache<W: Write>(cache: &StatsCache, mut writer: W) -> Result<()> {
    let file = CacheFile {
        format: CACHE_FORMAT.to_owned(),
        version: CACHE_VERSION,
        window_size: cache.global.window_size,
        timestamps: cache.timestamps.clone(),
        vocabulary: cache.global.vocabulary.words().to_vec(),
        global: Table::from_stats(&cache.global),
        per_year: cache
            .per_year
            .as_ref()
            .map(|m| m.iter().map(|(&t, s)| (t, Table::from_stats(s))).collect()),
    };
    serde_json::to_writer(&mut writer, &file)
        .map_err(|e| Error::invalid(format!("cannot serialize stats cache: {e}")))?;
    writer
        .write_all(b"\n")
        .map_err(|e| Error::io("<stats cache>", e))
}

pub fn read_stats_cache<R: Read>(reader: R) -> Result<StatsCache> {
    let file: CacheFile = serde_json::from_reader(reader)
        .map_err(|e| Error::invalid(format!("malformed stats cache: {e}")))?;
    if file.format != CACHE_FORMAT {
        return Err(Error::invalid(format!(
            "not a co-occurrence cache (format {:?})",
            file.format
        )));
    }
    if file.version != CACHE_VERSION {
        return Err(Error::invalid(format!(
            "stats cache version {} is not supported (expected {CACHE_VERSION})",
            file.version
        )));
    }
    let vocabulary = Arc::new(Vocabulary::from_words(file.vocabulary.iter().cloned()));
    if vocabulary.words() != file.vocabulary.as_slice() {
        return Err(Error::invalid("cache vocabulary is not sorted and distinct"));
    }
    let global = file.global.into_stats(file.window_size, &vocabulary)?;
    let per_year = match file.per_year {
        Some(m) => Some(
            m.into_iter()
                .map(|(t, table)| Ok((t, table.into_stats(file.window_size, &vocabulary)?)))
                .collect::<Result<BTreeMap<_, _>>>()?,
        ),
        None => None,
    };
    Ok(StatsCache {
        timestamps: file.timestamps,
        global,
        per_year,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{count_cooccurrences, TimedCorpus};

    fn cache() -> StatsCache {
        let corpus = TimedCorpus::from_token_lists(vec![
            (1990, vec!["a", "b", "c", "a"]),
            (1991, vec!["b", "d"]),
        ])
        .unwrap();
        let global = count_cooccurrences(&corpus, 2).unwrap();
        let per_year = corpus
            .timestamps()
            .iter()
            .map(|&t| (t, count_cooccurrences(&corpus.year_slice(t), 2).unwrap()))
            .collect();
        StatsCache {
            timestamps: corpus.timestamps().to_vec(),
            global,
            per_year: Some(per_year),
        }
    }

    #[test]
    fn round_trip() {
        let c = cache();
        let mut buf = Vec::new();
        write_stats_cache(&c, &mut buf).unwrap();
        let back = read_stats_cache(buf.as_slice()).unwrap();
        assert_eq!(back, c);
        let mut again = Vec::new();
        write_stats_cache(&back, &mut again).unwrap();
        assert_eq!(buf, again);
    }

    #[test]
    fn rejects_other_versions() {
        let mut buf = Vec::new();
        write_stats_cache(&cache(), &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap().replace("\"version\":1", "\"version\":99");
        let err = read_stats_cache(text.as_bytes()).unwrap_err();
        assert!(err.to_string().contains("version 99"));
    }
}
