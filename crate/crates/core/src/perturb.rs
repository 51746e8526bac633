//! Seeded degradations of a topic model: temporal shuffling, component
//! collapse and word intrusion.
//!
//! Every function is a pure function of its input and seed.

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::corpus::CooccurrenceStats;
use crate::error::{Error, Result};
use crate::temporal::temporal_series;
use crate::topics::DynamicTopics;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PerturbationKind {
    Shuffle,
    Collapse,
    Intrude,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PerturbationSpec {
    pub kind: PerturbationKind,
    pub seed: u64,
    #[serde(default)]
    pub intrude_target: Option<usize>,
    #[serde(default)]
    pub intrude_levels: Vec<usize>,
}

impl PerturbationSpec {
    /// Checks the spec against a model with `n_topics` topics of `n_top` words.
    pub fn validate(&self, n_topics: usize, n_top: usize) -> Result<()> {
        if n_topics < 2 {
            return Err(Error::invalid(format!(
                "{:?} needs at least 2 topics, model has {n_topics}",
                self.kind
            )));
        }
        if let Some(k) = self.intrude_target {
            if k >= n_topics {
                return Err(Error::invalid(format!(
                    "target topic {k} out of range for {n_topics} topics"
                )));
            }
        }
        if let Some(&bad) = self.intrude_levels.iter().find(|&&n| n == 0 || n > n_top) {
            return Err(Error::invalid(format!(
                "intrusion level {bad} outside 1..={n_top}"
            )));
        }
        Ok(())
    }
}

/// Applies an independent uniform permutation of the topics at every
/// timestamp. Slice `k` at time `t` moves to slot `π_t(k)`.
pub fn temporal_shuffle(topics: &DynamicTopics, seed: u64) -> Result<DynamicTopics> {
    let k = topics.n_topics();
    if k < 2 {
        return Err(Error::invalid("shuffling needs at least 2 topics"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = topics.clone();
    for t in 0..topics.n_timestamps() {
        let mut perm: Vec<usize> = (0..k).collect();
        perm.shuffle(&mut rng);
        for (from, &to) in perm.iter().enumerate() {
            out.topics_mut()[to].slices[t] = topics.slice(from, t).clone();
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CollapseChoice {
    Index(usize),
    /// Pick the repeated topic uniformly with this seed.
    Random(u64),
}

/// Replaces every topic's timeline with a copy of one chosen topic.
/// Returns the new model and the chosen topic position. Topic ids are kept.
pub fn collapse_repeat(
    topics: &DynamicTopics,
    choice: CollapseChoice,
) -> Result<(DynamicTopics, usize)> {
    let k = topics.n_topics();
    if k < 2 {
        return Err(Error::invalid("collapse needs at least 2 topics"));
    }
    let chosen = match choice {
        CollapseChoice::Index(i) if i < k => i,
        CollapseChoice::Index(i) => {
            return Err(Error::invalid(format!("topic index {i} out of range for {k} topics")))
        }
        CollapseChoice::Random(seed) => ChaCha8Rng::seed_from_u64(seed).gen_range(0..k),
    };
    let source = topics.sequence(chosen).to_vec();
    let mut out = topics.clone();
    for topic in out.topics_mut() {
        topic.slices = source.clone();
    }
    Ok((out, chosen))
}

/// Result of one intrusion, with the choices that produced it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Intrusion {
    pub topics: DynamicTopics,
    /// Index into the timestamps of the modified slice.
    pub time_index: usize,
    /// Replaced word positions, in replacement order.
    pub positions: Vec<usize>,
    pub intruders: Vec<String>,
}

/// Replaces `level` words of topic `target` at one seeded timestamp with
/// distinct words taken from the other topics at that timestamp.
///
/// The timestamp, position order and intruder order depend only on the
/// seed, so level `n` modifies a superset of the positions of level `n − 1`.
pub fn intrude(
    topics: &DynamicTopics,
    target: usize,
    level: usize,
    seed: u64,
) -> Result<Intrusion> {
    let k = topics.n_topics();
    let n = topics.n_top();
    if k < 2 {
        return Err(Error::invalid("intrusion needs at least 2 topics"));
    }
    if target >= k {
        return Err(Error::invalid(format!("target topic {target} out of range for {k} topics")));
    }
    if level == 0 || level > n {
        return Err(Error::invalid(format!("intrusion level {level} outside 1..={n}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let time_index = rng.gen_range(0..topics.n_timestamps());

    let mut positions: Vec<usize> = (0..n).collect();
    positions.shuffle(&mut rng);

    let target_slice = topics.slice(target, time_index);
    let pool: BTreeSet<&str> = topics
        .slices_at(time_index)
        .iter()
        .enumerate()
        .filter(|&(q, _)| q != target)
        .flat_map(|(_, s)| s.iter())
        .filter(|w| !target_slice.contains(w))
        .collect();
    let mut pool: Vec<&str> = pool.into_iter().collect();
    pool.shuffle(&mut rng);
    if pool.len() < level {
        return Err(Error::invalid(format!(
            "only {} intruder candidates for level {level}",
            pool.len()
        )));
    }

    positions.truncate(level);
    let intruders: Vec<String> = pool[..level].iter().map(|w| (*w).to_owned()).collect();
    let mut out = topics.clone();
    let words = out.topics_mut()[target].slices[time_index].words_mut();
    for (&pos, word) in positions.iter().zip(&intruders) {
        words[pos] = word.clone();
    }
    Ok(Intrusion {
        topics: out,
        time_index,
        positions,
        intruders,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub seed: u64,
    /// 0 is the unperturbed reference.
    pub level: usize,
    pub ttc: f64,
    pub tts: f64,
    pub ttq: f64,
}

/// Temporal measures of the target topic for every seed and intrusion
/// level, plus a level-0 row per seed for the unperturbed topic.
///
/// Rows are ordered by seed (input order) then level.
pub fn intrusion_sweep(
    stats: &CooccurrenceStats,
    topics: &DynamicTopics,
    target: usize,
    levels: &[usize],
    seeds: &[u64],
    window: usize,
    epsilon: f64,
) -> Result<Vec<SweepRow>> {
    if target >= topics.n_topics() {
        return Err(Error::invalid(format!(
            "target topic {target} out of range for {} topics",
            topics.n_topics()
        )));
    }
    let base = temporal_series(stats, topics.sequence(target), window, epsilon)?;
    let per_seed: Vec<Vec<SweepRow>> = seeds
        .par_iter()
        .map(|&seed| {
            let mut rows = vec![SweepRow {
                seed,
                level: 0,
                ttc: base.mean_ttc(),
                tts: base.mean_tts(),
                ttq: base.ttq,
            }];
            for &level in levels {
                let perturbed = intrude(topics, target, level, seed)?;
                let s = temporal_series(stats, perturbed.topics.sequence(target), window, epsilon)?;
                rows.push(SweepRow {
                    seed,
                    level,
                    ttc: s.mean_ttc(),
                    tts: s.mean_tts(),
                    ttq: s.ttq,
                });
            }
            Ok(rows)
        })
        .collect::<Result<_>>()?;
    Ok(per_seed.into_iter().flatten().collect())
}

pub fn write_sweep_csv<W: std::io::Write>(rows: &[SweepRow], writer: W) -> Result<()> {
    let mut out = csv::Writer::from_writer(writer);
    let err = |e: csv::Error| Error::invalid(format!("cannot write sweep CSV: {e}"));
    out.write_record(["seed", "level", "ttc", "tts", "ttq"]).map_err(err)?;
    for r in rows {
        out.write_record([
            r.seed.to_string(),
            r.level.to_string(),
            r.ttc.to_string(),
            r.tts.to_string(),
            r.ttq.to_string(),
        ])
        .map_err(err)?;
    }
    out.flush().map_err(|e| Error::io("<sweep csv>", e))
}
