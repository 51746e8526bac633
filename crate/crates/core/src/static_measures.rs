//! Year-wise measures: NPMI coherence, redundancy/diversity and topic quality.
//!
//! Coherence of a slice is the mean NPMI over its unordered word pairs.
//! Redundancy of a slice against `C` other slices counts, for each of its
//! `N` words, how many of the others contain it, normalized by `|C|·N`;
//! diversity is `1 − redundancy`. Topic quality at a timestamp is the mean
//! over topics of coherence × diversity.

use std::collections::{BTreeMap, HashMap};
use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::corpus::{CooccurrenceStats, WordId};
use crate::error::{Error, Result};
use crate::numeric::order_free_mean;
use crate::topics::{DynamicTopics, TopicWordList};

pub const DEFAULT_EPSILON: f64 = 1e-12;

/// NPMI of two word ids, or `None` when either marginal is zero.
///
/// `log((P(a,b)+ε) / (P(a)·P(b))) / −log(P(a,b)+ε)`, clamped to `[−1, 1]`.
/// When `P(a,b)+ε ≥ 1` both words fill every window and the score is 1.
pub fn npmi_ids(stats: &CooccurrenceStats, a: WordId, b: WordId, epsilon: f64) -> Option<f64> {
    assert!(epsilon > 0.0, "epsilon must be positive");
    let pa = stats.p_word(a);
    let pb = stats.p_word(b);
    if pa == 0.0 || pb == 0.0 {
        return None;
    }
    let joint = stats.p_pair(a, b) + epsilon;
    if joint >= 1.0 {
        return Some(1.0);
    }
    let score = (joint / (pa * pb)).ln() / -joint.ln();
    Some(score.clamp(-1.0, 1.0))
}

/// NPMI of two words looked up in the reference vocabulary.
pub fn npmi_pair(stats: &CooccurrenceStats, w1: &str, w2: &str, epsilon: f64) -> Option<f64> {
    let a = stats.word_id(w1)?;
    let b = stats.word_id(w2)?;
    npmi_ids(stats, a, b, epsilon)
}

/// Mean of a set of pairwise NPMI scores with undefined pairs left out.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PairwiseScore {
    /// Mean over defined pairs; 0 when none is defined.
    pub value: f64,
    pub pairs: usize,
    pub undefined_pairs: usize,
}

impl PairwiseScore {
    pub(crate) fn from_scores(scores: impl IntoIterator<Item = Option<f64>>) -> Self {
        let mut defined = Vec::new();
        let mut pairs = 0;
        for s in scores {
            pairs += 1;
            if let Some(v) = s {
                defined.push(v);
            }
        }
        PairwiseScore {
            value: order_free_mean(&defined).unwrap_or(0.0),
            pairs,
            undefined_pairs: pairs - defined.len(),
        }
    }

    /// True when no pair had a defined score; `value` is then 0.
    pub fn all_undefined(&self) -> bool {
        self.undefined_pairs == self.pairs
    }
}

pub(crate) fn lookup_ids(stats: &CooccurrenceStats, topic: &TopicWordList) -> Vec<Option<WordId>> {
    topic.iter().map(|w| stats.word_id(w)).collect()
}

/// Mean NPMI over the `N(N−1)/2` unordered pairs of a slice.
pub fn topic_coherence(
    stats: &CooccurrenceStats,
    topic: &TopicWordList,
    epsilon: f64,
) -> Result<PairwiseScore> {
    if topic.len() < 2 {
        return Err(Error::invalid("coherence needs at least two words"));
    }
    check_epsilon(epsilon)?;
    let ids = lookup_ids(stats, topic);
    let scores = (1..ids.len()).flat_map(|j| {
        let ids = &ids;
        (0..j).map(move |i| match (ids[i], ids[j]) {
            (Some(a), Some(b)) => npmi_ids(stats, a, b, epsilon),
            _ => None,
        })
    });
    Ok(PairwiseScore::from_scores(scores))
}

pub(crate) fn check_epsilon(epsilon: f64) -> Result<()> {
    if epsilon > 0.0 && epsilon.is_finite() {
        Ok(())
    } else {
        Err(Error::invalid(format!("epsilon must be positive, got {epsilon}")))
    }
}

/// Fraction of `topic`'s word slots found in the other lists, in `[0, 1]`.
pub fn topic_redundancy(topic: &TopicWordList, others: &[&TopicWordList]) -> Result<f64> {
    if others.is_empty() {
        return Err(Error::invalid("redundancy needs at least one other topic"));
    }
    let hits: usize = topic
        .iter()
        .map(|w| others.iter().filter(|q| q.contains(w)).count())
        .sum();
    Ok(hits as f64 / (others.len() * topic.len()) as f64)
}

pub fn topic_diversity(topic: &TopicWordList, others: &[&TopicWordList]) -> Result<f64> {
    Ok(1.0 - topic_redundancy(topic, others)?)
}

/// Share of word slots, over all lists, filled by a word that occurs in
/// exactly one list.
pub fn diversity_unique_fraction(topics: &[&TopicWordList]) -> Result<f64> {
    if topics.is_empty() {
        return Err(Error::invalid("unique-word diversity needs at least one topic"));
    }
    let mut occurrences: HashMap<&str, usize> = HashMap::new();
    for topic in topics {
        for w in topic.iter() {
            *occurrences.entry(w).or_insert(0) += 1;
        }
    }
    let slots: usize = topics.iter().map(|t| t.len()).sum();
    let unique = occurrences.values().filter(|&&n| n == 1).count();
    Ok(unique as f64 / slots as f64)
}

/// Mean over topics of coherence × diversity.
pub fn topic_quality(coherences: &[f64], diversities: &[f64]) -> Result<f64> {
    if coherences.len() != diversities.len() {
        return Err(Error::invalid(format!(
            "{} coherences but {} diversities",
            coherences.len(),
            diversities.len()
        )));
    }
    let products: Vec<f64> = coherences
        .iter()
        .zip(diversities)
        .map(|(c, d)| c * d)
        .collect();
    order_free_mean(&products).ok_or_else(|| Error::invalid("topic quality needs at least one topic"))
}

/// Where year-wise probabilities come from.
#[derive(Debug, Clone, Copy)]
pub enum ReferenceStats<'a> {
    /// One table for all timestamps.
    Global(&'a CooccurrenceStats),
    /// A table per timestamp; every evaluated timestamp must be present.
    PerYear(&'a BTreeMap<i64, CooccurrenceStats>),
}

impl<'a> ReferenceStats<'a> {
    fn for_year(&self, timestamp: i64) -> Result<&'a CooccurrenceStats> {
        match self {
            ReferenceStats::Global(s) => Ok(s),
            ReferenceStats::PerYear(m) => m.get(&timestamp).ok_or_else(|| {
                Error::invalid(format!("no reference statistics for timestamp {timestamp}"))
            }),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct YearRow {
    pub timestamp: i64,
    pub tc: f64,
    pub td: f64,
    pub tq: f64,
    /// Unique-word diversity of the year's topics.
    pub td_unique: f64,
    pub coherence: Vec<f64>,
    pub diversity: Vec<f64>,
    /// Topics whose every word pair was undefined.
    pub undefined_topics: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct YearwiseReport {
    pub n_top: usize,
    pub epsilon: f64,
    pub years: Vec<YearRow>,
    pub mean_tc: f64,
    pub mean_td: f64,
    pub mean_tq: f64,
}

/// Per-timestamp TC, TD and TQ of a topic model.
///
/// With a single topic there is nothing to be redundant with, so its
/// diversity is taken as 1.
pub fn yearwise_report(
    topics: &DynamicTopics,
    reference: ReferenceStats<'_>,
    epsilon: f64,
) -> Result<YearwiseReport> {
    check_epsilon(epsilon)?;
    let mut years = Vec::with_capacity(topics.n_timestamps());
    for (t, &timestamp) in topics.timestamps().iter().enumerate() {
        let stats = reference.for_year(timestamp)?;
        let slices = topics.slices_at(t);
        let mut coherence = Vec::with_capacity(slices.len());
        let mut diversity = Vec::with_capacity(slices.len());
        let mut undefined_topics = 0;
        for (k, slice) in slices.iter().enumerate() {
            let score = topic_coherence(stats, slice, epsilon)?;
            if score.all_undefined() {
                undefined_topics += 1;
            }
            coherence.push(score.value);
            let others: Vec<&TopicWordList> = slices
                .iter()
                .enumerate()
                .filter(|&(q, _)| q != k)
                .map(|(_, s)| *s)
                .collect();
            diversity.push(if others.is_empty() {
                1.0
            } else {
                topic_diversity(slice, &others)?
            });
        }
        years.push(YearRow {
            timestamp,
            tc: order_free_mean(&coherence).unwrap_or(0.0),
            td: order_free_mean(&diversity).unwrap_or(0.0),
            tq: topic_quality(&coherence, &diversity)?,
            td_unique: diversity_unique_fraction(&slices)?,
            coherence,
            diversity,
            undefined_topics,
        });
    }
    let col = |f: fn(&YearRow) -> f64| order_free_mean(&years.iter().map(f).collect::<Vec<_>>()).unwrap_or(0.0);
    Ok(YearwiseReport {
        n_top: topics.n_top(),
        epsilon,
        mean_tc: col(|r| r.tc),
        mean_td: col(|r| r.td),
        mean_tq: col(|r| r.tq),
        years,
    })
}

impl YearwiseReport {
    pub fn tq_series(&self) -> Vec<f64> {
        self.years.iter().map(|r| r.tq).collect()
    }

    /// CSV with columns `timestamp,tc,td,tq`.
    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut out = csv::Writer::from_writer(writer);
        let err = |e: csv::Error| Error::invalid(format!("cannot write year-wise CSV: {e}"));
        out.write_record(["timestamp", "tc", "td", "tq"]).map_err(err)?;
        for row in &self.years {
            out.write_record([
                row.timestamp.to_string(),
                row.tc.to_string(),
                row.td.to_string(),
                row.tq.to_string(),
            ])
            .map_err(err)?;
        }
        out.flush().map_err(|e| Error::io("<year-wise csv>", e))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{count_cooccurrences, TimedCorpus};

    fn list(words: &[&str]) -> TopicWordList {
        TopicWordList::new(words.iter().copied()).unwrap()
    }

    fn four_doc_stats() -> CooccurrenceStats {
        let corpus = TimedCorpus::from_token_lists(vec![
            (0, vec!["a", "b"]),
            (0, vec!["a", "b"]),
            (0, vec!["a", "c"]),
            (0, vec!["d", "e"]),
        ])
        .unwrap();
        count_cooccurrences(&corpus, 10).unwrap()
    }

    #[test]
    fn self_pair_is_one() {
        let s = four_doc_stats();
        for w in ["a", "b", "c", "d", "e"] {
            let v = npmi_pair(&s, w, w, DEFAULT_EPSILON).unwrap();
            assert!((v - 1.0).abs() < 1e-9, "{w}: {v}");
        }
    }

    #[test]
    fn word_in_every_window_scores_one() {
        let corpus =
            TimedCorpus::from_token_lists(vec![(0, vec!["a", "b"]), (0, vec!["a", "b"])]).unwrap();
        let s = count_cooccurrences(&corpus, 10).unwrap();
        assert_eq!(npmi_pair(&s, "a", "b", DEFAULT_EPSILON), Some(1.0));
        let coh = topic_coherence(&s, &list(&["a", "b"]), DEFAULT_EPSILON).unwrap();
        assert_eq!(coh.value, 1.0);
    }

    #[test]
    fn unseen_words_are_undefined() {
        let s = four_doc_stats();
        assert_eq!(npmi_pair(&s, "a", "zzz", DEFAULT_EPSILON), None);
        let coh = topic_coherence(&s, &list(&["x", "y", "z"]), DEFAULT_EPSILON).unwrap();
        assert!(coh.all_undefined());
        assert_eq!(coh.value, 0.0);
        assert_eq!(coh.pairs, 3);
    }

    #[test]
    fn partially_undefined_topic_averages_defined_pairs() {
        let s = four_doc_stats();
        let ab = npmi_pair(&s, "a", "b", DEFAULT_EPSILON).unwrap();
        let coh = topic_coherence(&s, &list(&["a", "b", "zzz"]), DEFAULT_EPSILON).unwrap();
        assert_eq!(coh.undefined_pairs, 2);
        assert_eq!(coh.value, ab);
    }

    #[test]
    fn coherence_needs_two_words() {
        let s = four_doc_stats();
        assert!(topic_coherence(&s, &list(&["a"]), DEFAULT_EPSILON).is_err());
        assert!(topic_coherence(&s, &list(&["a", "b"]), 0.0).is_err());
    }

    #[test]
    fn redundancy_counts() {
        let t = list(&["a", "b", "c", "d", "e", "f", "g", "h", "i", "j"]);
        let same = list(&["j", "i", "h", "g", "f", "e", "d", "c", "b", "a"]);
        let disjoint = list(&["k", "l"]);
        let seven = list(&["a", "b", "c", "d", "e", "f", "g", "x", "y", "z"]);
        assert_eq!(topic_redundancy(&t, &[&same]).unwrap(), 1.0);
        assert_eq!(topic_redundancy(&t, &[&disjoint]).unwrap(), 0.0);
        assert!((topic_redundancy(&t, &[&seven]).unwrap() - 0.7).abs() < 1e-15);
        assert_eq!(topic_diversity(&t, &[&same]).unwrap(), 0.0);
        assert_eq!(topic_diversity(&t, &[&disjoint]).unwrap(), 1.0);
        assert!((topic_diversity(&t, &[&seven]).unwrap() - 0.3).abs() < 1e-15);
        assert!(topic_redundancy(&t, &[]).is_err());
    }

    #[test]
    fn unique_fraction_counts() {
        let a = list(&["a", "b", "c", "d", "e", "f", "g", "h", "i", "j"]);
        let b = list(&["a", "b", "c", "d", "k", "l", "m", "n", "o", "p"]);
        let c = list(&["q", "r"]);
        assert!((diversity_unique_fraction(&[&a, &b]).unwrap() - 0.6).abs() < 1e-15);
        assert_eq!(diversity_unique_fraction(&[&a, &a]).unwrap(), 0.0);
        assert_eq!(diversity_unique_fraction(&[&a, &c]).unwrap(), 1.0);
        assert!(diversity_unique_fraction(&[]).is_err());
    }

    #[test]
    fn quality_arithmetic() {
        assert_eq!(topic_quality(&[0.5, 0.5], &[0.5, 0.5]).unwrap(), 0.25);
        assert_eq!(topic_quality(&[0.9, 0.4], &[0.0, 0.0]).unwrap(), 0.0);
        assert_eq!(topic_quality(&[0.8, 0.4], &[0.0, 1.0]).unwrap(), 0.2);
        assert!(topic_quality(&[0.5], &[0.5, 0.5]).is_err());
        assert!(topic_quality(&[], &[]).is_err());
    }

    #[test]
    fn identical_topics_have_zero_quality() {
        let s = four_doc_stats();
        let topics = DynamicTopics::from_grid(
            vec![1],
            &[vec![vec!["a", "b"]], vec![vec!["a", "b"]], vec![vec!["b", "a"]]],
        )
        .unwrap();
        let r = yearwise_report(&topics, ReferenceStats::Global(&s), DEFAULT_EPSILON).unwrap();
        assert_eq!(r.years[0].td, 0.0);
        assert_eq!(r.years[0].tq, 0.0);
        assert!(r.years[0].tc > 0.0);
    }

    #[test]
    fn disjoint_topics_quality_equals_coherence() {
        let s = four_doc_stats();
        let topics =
            DynamicTopics::from_grid(vec![1], &[vec![vec!["a", "b"]], vec![vec!["d", "e"]]])
                .unwrap();
        let r = yearwise_report(&topics, ReferenceStats::Global(&s), DEFAULT_EPSILON).unwrap();
        let y = &r.years[0];
        assert_eq!(y.td, 1.0);
        assert_eq!(y.td_unique, 1.0);
        assert!((y.tq - y.tc).abs() < 1e-15);
    }

    #[test]
    fn per_year_reference_must_cover_timestamps() {
        let topics = DynamicTopics::from_grid(vec![7], &[vec![vec!["a", "b"]]]).unwrap();
        let empty = BTreeMap::new();
        let err = yearwise_report(&topics, ReferenceStats::PerYear(&empty), DEFAULT_EPSILON)
            .unwrap_err();
        assert!(err.to_string().contains('7'));
    }

    #[test]
    fn csv_columns() {
        let s = four_doc_stats();
        let topics =
            DynamicTopics::from_grid(vec![1990], &[vec![vec!["a", "b"]], vec![vec!["d", "e"]]])
                .unwrap();
        let r = yearwise_report(&topics, ReferenceStats::Global(&s), DEFAULT_EPSILON).unwrap();
        let mut buf = Vec::new();
        r.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("timestamp,tc,td,tq\n1990,"));
    }
}
