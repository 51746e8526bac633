//! Temporal measures along each topic's timeline.
//!
//! For a window of `L` consecutive slices starting at `t`:
//!
//! * TTC is the mean NPMI over all `N × N` cross pairs between the slices at
//!   `t` and `t + L − 1` (same-word pairs included);
//! * TTS is the redundancy of the slice at `t` against the `L − 1` slices
//!   after it.
//!
//! TTQ of a topic is the mean over windows of TTC × TTS and DTQ averages
//! mean year-wise TQ with mean TTQ.

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::corpus::CooccurrenceStats;
use crate::error::{Error, Result};
use crate::numeric::order_free_mean;
use crate::static_measures::{
    check_epsilon, lookup_ids, npmi_ids, topic_coherence, topic_redundancy, yearwise_report,
    PairwiseScore, ReferenceStats, YearwiseReport,
};
use crate::topics::{DynamicTopics, TopicWordList};

pub const DEFAULT_TIME_WINDOW: usize = 2;

/// Temporal topic coherence between a window's first and last slice.
pub fn ttc(
    stats: &CooccurrenceStats,
    start: &TopicWordList,
    end: &TopicWordList,
    epsilon: f64,
) -> Result<PairwiseScore> {
    check_epsilon(epsilon)?;
    let from = lookup_ids(stats, start);
    let to = lookup_ids(stats, end);
    let scores = from.iter().flat_map(|&a| {
        to.iter().map(move |&b| match (a, b) {
            (Some(a), Some(b)) => npmi_ids(stats, a, b, epsilon),
            _ => None,
        })
    });
    Ok(PairwiseScore::from_scores(scores))
}

/// Temporal topic smoothness of a window: share of the first slice's words
/// found in each later slice, averaged over the later slices.
pub fn tts(window: &[&TopicWordList]) -> Result<f64> {
    let (anchor, rest) = match window.split_first() {
        Some((anchor, rest)) if !rest.is_empty() => (anchor, rest),
        _ => {
            return Err(Error::invalid(format!(
                "smoothness window needs at least 2 slices, got {}",
                window.len()
            )))
        }
    };
    if rest.iter().any(|s| s.len() != anchor.len()) {
        return Err(Error::invalid("slices in a smoothness window differ in length"));
    }
    topic_redundancy(anchor, rest)
}

/// Windowed series of one topic.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TemporalSeries {
    pub ttc: Vec<f64>,
    pub tts: Vec<f64>,
    pub ttq: f64,
    /// Windows whose TTC had no defined pair.
    pub undefined_windows: usize,
}

impl TemporalSeries {
    pub fn mean_ttc(&self) -> f64 {
        order_free_mean(&self.ttc).unwrap_or(0.0)
    }

    pub fn mean_tts(&self) -> f64 {
        order_free_mean(&self.tts).unwrap_or(0.0)
    }
}

/// TTC and TTS for every window `t = 0..=T−L` of one topic, and its TTQ.
pub fn temporal_series(
    stats: &CooccurrenceStats,
    slices: &[TopicWordList],
    window: usize,
    epsilon: f64,
) -> Result<TemporalSeries> {
    if window < 2 {
        return Err(Error::invalid(format!("time window must be at least 2, got {window}")));
    }
    if slices.len() < window {
        return Err(Error::invalid(format!(
            "{} timestamps are fewer than the time window {window}",
            slices.len()
        )));
    }
    let n_windows = slices.len() - window + 1;
    let mut ttc_values = Vec::with_capacity(n_windows);
    let mut tts_values = Vec::with_capacity(n_windows);
    let mut undefined_windows = 0;
    for t in 0..n_windows {
        let coherence = ttc(stats, &slices[t], &slices[t + window - 1], epsilon)?;
        if coherence.all_undefined() {
            undefined_windows += 1;
        }
        let span: Vec<&TopicWordList> = slices[t..t + window].iter().collect();
        ttc_values.push(coherence.value);
        tts_values.push(tts(&span)?);
    }
    let products: Vec<f64> = ttc_values.iter().zip(&tts_values).map(|(c, s)| c * s).collect();
    Ok(TemporalSeries {
        ttq: order_free_mean(&products).unwrap_or(0.0),
        ttc: ttc_values,
        tts: tts_values,
        undefined_windows,
    })
}

/// Temporal topic quality of one topic's slice sequence.
pub fn ttq(
    stats: &CooccurrenceStats,
    slices: &[TopicWordList],
    window: usize,
    epsilon: f64,
) -> Result<f64> {
    Ok(temporal_series(stats, slices, window, epsilon)?.ttq)
}

/// Baseline coherence: the mean of a topic's per-timestamp coherences.
pub fn btc(per_year_coherences: &[f64]) -> Result<f64> {
    order_free_mean(per_year_coherences)
        .ok_or_else(|| Error::invalid("baseline coherence needs at least one timestamp"))
}

/// Baseline smoothness: TTS of the whole timeline as a single window.
pub fn bts(slices: &[TopicWordList]) -> Result<f64> {
    if slices.len() < 2 {
        return Err(Error::invalid("baseline smoothness needs at least 2 timestamps"));
    }
    tts(&slices.iter().collect::<Vec<_>>())
}

/// Dynamic topic quality: half the sum of mean TQ and mean TTQ.
pub fn dtq(tq_per_year: &[f64], ttq_per_topic: &[f64]) -> Result<f64> {
    let tq = order_free_mean(tq_per_year)
        .ok_or_else(|| Error::invalid("DTQ needs at least one year-wise TQ"))?;
    let ttq = order_free_mean(ttq_per_topic)
        .ok_or_else(|| Error::invalid("DTQ needs at least one topic TTQ"))?;
    Ok(0.5 * (tq + ttq))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TopicTemporal {
    pub topic: usize,
    pub ttc: Vec<f64>,
    pub tts: Vec<f64>,
    pub ttq: f64,
    pub btc: f64,
    pub bts: f64,
    pub undefined_windows: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TemporalReport {
    pub window: usize,
    pub epsilon: f64,
    /// Timestamp at which each window starts.
    pub window_starts: Vec<i64>,
    pub topics: Vec<TopicTemporal>,
    pub mean_ttc: f64,
    pub mean_tts: f64,
    pub mean_ttq: f64,
    pub mean_tq: f64,
    pub dtq: f64,
}

/// Full temporal evaluation of a topic model against one reference table.
pub fn temporal_report(
    stats: &CooccurrenceStats,
    topics: &DynamicTopics,
    window: usize,
    epsilon: f64,
) -> Result<TemporalReport> {
    let yearwise = yearwise_report(topics, ReferenceStats::Global(stats), epsilon)?;
    temporal_report_with(stats, topics, &yearwise, window, epsilon)
}

/// As [`temporal_report`], reusing an existing year-wise report for TQ.
pub fn temporal_report_with(
    stats: &CooccurrenceStats,
    topics: &DynamicTopics,
    yearwise: &YearwiseReport,
    window: usize,
    epsilon: f64,
) -> Result<TemporalReport> {
    let mut rows = Vec::with_capacity(topics.n_topics());
    for (k, topic) in topics.topics().iter().enumerate() {
        let series = temporal_series(stats, &topic.slices, window, epsilon)?;
        let coherences = topic
            .slices
            .iter()
            .map(|s| topic_coherence(stats, s, epsilon).map(|c| c.value))
            .collect::<Result<Vec<_>>>()?;
        rows.push(TopicTemporal {
            topic: topics.topics()[k].id,
            btc: btc(&coherences)?,
            bts: bts(&topic.slices)?,
            ttq: series.ttq,
            undefined_windows: series.undefined_windows,
            ttc: series.ttc,
            tts: series.tts,
        });
    }
    let all_ttc: Vec<f64> = rows.iter().flat_map(|r| r.ttc.iter().copied()).collect();
    let all_tts: Vec<f64> = rows.iter().flat_map(|r| r.tts.iter().copied()).collect();
    let ttqs: Vec<f64> = rows.iter().map(|r| r.ttq).collect();
    let tq = yearwise.tq_series();
    let n_windows = topics.n_timestamps() - window + 1;
    Ok(TemporalReport {
        window,
        epsilon,
        window_starts: topics.timestamps()[..n_windows].to_vec(),
        mean_ttc: order_free_mean(&all_ttc).unwrap_or(0.0),
        mean_tts: order_free_mean(&all_tts).unwrap_or(0.0),
        mean_ttq: order_free_mean(&ttqs).unwrap_or(0.0),
        mean_tq: order_free_mean(&tq).unwrap_or(0.0),
        dtq: dtq(&tq, &ttqs)?,
        topics: rows,
    })
}

fn csv_err(e: csv::Error) -> Error {
    Error::invalid(format!("cannot write temporal CSV: {e}"))
}

impl TemporalReport {
    pub fn ttq_series(&self) -> Vec<f64> {
        self.topics.iter().map(|r| r.ttq).collect()
    }

    /// Per-window series: `topic,t,ttc,tts`, with `t` the window's start.
    pub fn write_series_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut out = csv::Writer::from_writer(writer);
        out.write_record(["topic", "t", "ttc", "tts"]).map_err(csv_err)?;
        for row in &self.topics {
            for (i, (c, s)) in row.ttc.iter().zip(&row.tts).enumerate() {
                out.write_record([
                    row.topic.to_string(),
                    self.window_starts[i].to_string(),
                    c.to_string(),
                    s.to_string(),
                ])
                .map_err(csv_err)?;
            }
        }
        out.flush().map_err(|e| Error::io("<temporal csv>", e))
    }

    /// Per-topic summary: `topic,ttq,btc,bts`.
    pub fn write_topics_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut out = csv::Writer::from_writer(writer);
        out.write_record(["topic", "ttq", "btc", "bts"]).map_err(csv_err)?;
        for row in &self.topics {
            out.write_record([
                row.topic.to_string(),
                row.ttq.to_string(),
                row.btc.to_string(),
                row.bts.to_string(),
            ])
            .map_err(csv_err)?;
        }
        out.flush().map_err(|e| Error::io("<temporal csv>", e))
    }

    /// Single scalar row: `mean_ttc,mean_tts,mean_ttq,dtq`.
    pub fn write_overall_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut out = csv::Writer::from_writer(writer);
        out.write_record(["mean_ttc", "mean_tts", "mean_ttq", "dtq"])
            .map_err(csv_err)?;
        out.write_record([
            self.mean_ttc.to_string(),
            self.mean_tts.to_string(),
            self.mean_ttq.to_string(),
            self.dtq.to_string(),
        ])
        .map_err(csv_err)?;
        out.flush().map_err(|e| Error::io("<temporal csv>", e))
    }

    /// Per-topic measures in the layout read by the human-rating
    /// correlation: `topic_id,ttc,tts,btc,bts`, TTC and TTS averaged over
    /// windows.
    pub fn write_measures_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut out = csv::Writer::from_writer(writer);
        out.write_record(["topic_id", "ttc", "tts", "btc", "bts"])
            .map_err(csv_err)?;
        for row in &self.topics {
            out.write_record([
                row.topic.to_string(),
                order_free_mean(&row.ttc).unwrap_or(0.0).to_string(),
                order_free_mean(&row.tts).unwrap_or(0.0).to_string(),
                row.btc.to_string(),
                row.bts.to_string(),
            ])
            .map_err(csv_err)?;
        }
        out.flush().map_err(|e| Error::io("<temporal csv>", e))
    }
}
