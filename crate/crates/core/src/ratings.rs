//! Human ratings of topic sequences: ingestion, respondent filtering,
//! aggregation and correlation with the automated measures.
//!
//! Ratings CSV header:
//!
//! ```text
//! rater_id,topic_id,relatedness,smoothness,familiarity,duration_seconds,is_control
//! ```

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fmt;
use std::io::{Read, Write};

use serde::{Deserialize, Deserializer, Serialize};

use crate::correlation::{correlate, CorrelationResult};
use crate::error::{Error, Result};

pub const ORDINAL_MIN: u8 = 1;
pub const ORDINAL_MAX: u8 = 3;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Rating {
    pub rater_id: String,
    pub topic_id: String,
    pub relatedness: u8,
    pub smoothness: u8,
    pub familiarity: u8,
    pub duration_seconds: f64,
    #[serde(deserialize_with = "flexible_bool")]
    pub is_control: bool,
}

fn flexible_bool<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<bool, D::Error> {
    let s = String::deserialize(d)?;
    match s.trim().to_ascii_lowercase().as_str() {
        "true" | "1" | "yes" => Ok(true),
        "false" | "0" | "no" | "" => Ok(false),
        other => Err(serde::de::Error::custom(format!("not a boolean: {other:?}"))),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RatingsTable {
    rows: Vec<Rating>,
}

impl RatingsTable {
    pub fn new(rows: Vec<Rating>) -> Result<Self> {
        let mut seen = HashSet::new();
        for r in &rows {
            for (name, v) in [("relatedness", r.relatedness), ("smoothness", r.smoothness)] {
                if !(ORDINAL_MIN..=ORDINAL_MAX).contains(&v) {
                    return Err(Error::invalid(format!(
                        "rater {} topic {}: {name} {v} outside {ORDINAL_MIN}..={ORDINAL_MAX}",
                        r.rater_id, r.topic_id
                    )));
                }
            }
            if !(r.duration_seconds > 0.0 && r.duration_seconds.is_finite()) {
                return Err(Error::invalid(format!(
                    "rater {} topic {}: duration must be positive",
                    r.rater_id, r.topic_id
                )));
            }
            if !seen.insert((r.rater_id.as_str(), r.topic_id.as_str())) {
                return Err(Error::invalid(format!(
                    "rater {} rated topic {} twice",
                    r.rater_id, r.topic_id
                )));
            }
        }
        Ok(RatingsTable { rows })
    }

    pub fn rows(&self) -> &[Rating] {
        &self.rows
    }

    pub fn raters(&self) -> BTreeSet<&str> {
        self.rows.iter().map(|r| r.rater_id.as_str()).collect()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }
}

pub fn read_ratings<R: Read>(reader: R) -> Result<RatingsTable> {
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
    let rows = rdr
        .deserialize()
        .enumerate()
        .map(|(i, rec)| {
            rec.map_err(|e| Error::Parse {
                line: i + 2,
                message: e.to_string(),
            })
        })
        .collect::<Result<Vec<Rating>>>()?;
    RatingsTable::new(rows)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FilterRules {
    /// Highest relatedness/smoothness a rater may give the control topic.
    pub control_threshold: u8,
    /// Raters whose total duration lies outside `[median/f, median·f]` are
    /// dropped.
    pub duration_factor: f64,
}

impl Default for FilterRules {
    fn default() -> Self {
        FilterRules {
            control_threshold: ORDINAL_MIN,
            duration_factor: 3.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExclusionReason {
    /// Rated the control topic above the threshold.
    Control,
    /// Never rated the control topic.
    MissingControl,
    /// Total duration outside the band around the median.
    Duration,
}

impl fmt::Display for ExclusionReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ExclusionReason::Control => "control",
            ExclusionReason::MissingControl => "missing-control",
            ExclusionReason::Duration => "duration",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Exclusion {
    pub rater_id: String,
    pub reason: ExclusionReason,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FilteredRatings {
    pub valid: RatingsTable,
    pub exclusions: Vec<Exclusion>,
}

fn median(values: &mut [f64]) -> f64 {
    values.sort_by(f64::total_cmp);
    let n = values.len();
    if n % 2 == 1 {
        values[n / 2]
    } else {
        0.5 * (values[n / 2 - 1] + values[n / 2])
    }
}

/// Drops raters who fail the control topic, then repeatedly drops raters
/// whose total duration falls outside the band around the median of the
/// remaining raters until no rater is dropped. The result is a fixed point,
/// so filtering again removes nothing.
///
/// A row belongs to the control task if its topic is `control_topic` or it
/// carries `is_control`.
pub fn filter_respondents(
    ratings: &RatingsTable,
    control_topic: &str,
    rules: FilterRules,
) -> Result<FilteredRatings> {
    if !(rules.duration_factor >= 1.0 && rules.duration_factor.is_finite()) {
        return Err(Error::invalid("duration factor must be at least 1"));
    }
    let is_control = |r: &Rating| r.is_control || r.topic_id == control_topic;
    if !ratings.rows.iter().any(is_control) {
        return Err(Error::invalid(format!(
            "control topic {control_topic:?} does not occur in the ratings"
        )));
    }

    let mut exclusions = Vec::new();
    let mut kept: BTreeSet<&str> = BTreeSet::new();
    for rater in ratings.raters() {
        let control_rows: Vec<&Rating> = ratings
            .rows
            .iter()
            .filter(|r| r.rater_id == rater && is_control(r))
            .collect();
        let reason = if control_rows.is_empty() {
            Some(ExclusionReason::MissingControl)
        } else if control_rows.iter().any(|r| {
            r.relatedness > rules.control_threshold || r.smoothness > rules.control_threshold
        }) {
            Some(ExclusionReason::Control)
        } else {
            None
        };
        match reason {
            Some(reason) => exclusions.push(Exclusion {
                rater_id: rater.to_owned(),
                reason,
            }),
            None => {
                kept.insert(rater);
            }
        }
    }

    loop {
        let totals: BTreeMap<&str, f64> = kept
            .iter()
            .map(|&rater| {
                let total = ratings
                    .rows
                    .iter()
                    .filter(|r| r.rater_id == rater)
                    .map(|r| r.duration_seconds)
                    .sum();
                (rater, total)
            })
            .collect();
        if totals.is_empty() {
            break;
        }
        let m = median(&mut totals.values().copied().collect::<Vec<_>>());
        let (lo, hi) = (m / rules.duration_factor, m * rules.duration_factor);
        let outliers: Vec<&str> = totals
            .iter()
            .filter(|(_, &d)| d < lo || d > hi)
            .map(|(&r, _)| r)
            .collect();
        if outliers.is_empty() {
            break;
        }
        for rater in outliers {
            kept.remove(rater);
            exclusions.push(Exclusion {
                rater_id: rater.to_owned(),
                reason: ExclusionReason::Duration,
            });
        }
    }

    if kept.is_empty() {
        return Err(Error::invalid("no valid raters remain after filtering"));
    }
    let rows = ratings
        .rows
        .iter()
        .filter(|r| kept.contains(r.rater_id.as_str()))
        .cloned()
        .collect();
    Ok(FilteredRatings {
        valid: RatingsTable { rows },
        exclusions,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TopicAggregate {
    pub relatedness: f64,
    pub smoothness: f64,
    pub familiarity: f64,
    pub respondents: usize,
}

/// Per-topic means over the given (valid) ratings.
pub fn aggregate_ratings(valid: &RatingsTable) -> BTreeMap<String, TopicAggregate> {
    let mut sums: BTreeMap<&str, (u64, u64, u64, usize)> = BTreeMap::new();
    for r in &valid.rows {
        let e = sums.entry(r.topic_id.as_str()).or_insert((0, 0, 0, 0));
        e.0 += u64::from(r.relatedness);
        e.1 += u64::from(r.smoothness);
        e.2 += u64::from(r.familiarity);
        e.3 += 1;
    }
    sums.into_iter()
        .map(|(topic, (rel, smooth, fam, n))| {
            let d = n as f64;
            (
                topic.to_owned(),
                TopicAggregate {
                    relatedness: rel as f64 / d,
                    smoothness: smooth as f64 / d,
                    familiarity: fam as f64 / d,
                    respondents: n,
                },
            )
        })
        .collect()
}

/// Automated measures of one topic, as read from a measures CSV with
/// header `topic_id,ttc,tts,btc,bts`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TopicMeasures {
    pub ttc: f64,
    pub tts: f64,
    pub btc: f64,
    pub bts: f64,
}

#[derive(Deserialize)]
struct MeasuresRecord {
    topic_id: String,
    ttc: f64,
    tts: f64,
    btc: f64,
    bts: f64,
}

pub fn read_measures<R: Read>(reader: R) -> Result<BTreeMap<String, TopicMeasures>> {
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
    let mut out = BTreeMap::new();
    for (i, rec) in rdr.deserialize().enumerate() {
        let rec: MeasuresRecord = rec.map_err(|e| Error::Parse {
            line: i + 2,
            message: e.to_string(),
        })?;
        if out
            .insert(
                rec.topic_id.clone(),
                TopicMeasures {
                    ttc: rec.ttc,
                    tts: rec.tts,
                    btc: rec.btc,
                    bts: rec.bts,
                },
            )
            .is_some()
        {
            return Err(Error::invalid(format!("topic {} listed twice", rec.topic_id)));
        }
    }
    Ok(out)
}

/// Spearman correlations for the canonical pairings: relatedness with TTC
/// and B-TC, smoothness with TTS and B-TS, over the topics present in both
/// inputs.
pub fn correlate_measures(
    aggregates: &BTreeMap<String, TopicAggregate>,
    measures: &BTreeMap<String, TopicMeasures>,
) -> Result<Vec<CorrelationResult>> {
    let common: Vec<&String> = aggregates.keys().filter(|k| measures.contains_key(*k)).collect();
    if common.len() < 3 {
        return Err(Error::invalid(format!(
            "only {} topics are shared by ratings and measures; need at least 3",
            common.len()
        )));
    }
    let human = |f: fn(&TopicAggregate) -> f64| common.iter().map(|k| f(&aggregates[*k])).collect::<Vec<_>>();
    let auto = |f: fn(&TopicMeasures) -> f64| common.iter().map(|k| f(&measures[*k])).collect::<Vec<_>>();
    let relatedness = human(|a| a.relatedness);
    let smoothness = human(|a| a.smoothness);
    Ok(vec![
        correlate("relatedness~ttc", &relatedness, &auto(|m| m.ttc))?,
        correlate("relatedness~btc", &relatedness, &auto(|m| m.btc))?,
        correlate("smoothness~tts", &smoothness, &auto(|m| m.tts))?,
        correlate("smoothness~bts", &smoothness, &auto(|m| m.bts))?,
    ])
}

pub fn write_exclusions_csv<W: Write>(exclusions: &[Exclusion], writer: W) -> Result<()> {
    let mut out = csv::Writer::from_writer(writer);
    let err = |e: csv::Error| Error::invalid(format!("cannot write exclusion CSV: {e}"));
    out.write_record(["rater_id", "reason"]).map_err(err)?;
    for e in exclusions {
        out.write_record([e.rater_id.clone(), e.reason.to_string()])
            .map_err(err)?;
    }
    out.flush().map_err(|e| Error::io("<exclusion csv>", e))
}

pub fn write_aggregates_csv<W: Write>(
    aggregates: &BTreeMap<String, TopicAggregate>,
    writer: W,
) -> Result<()> {
    let mut out = csv::Writer::from_writer(writer);
    let err = |e: csv::Error| Error::invalid(format!("cannot write aggregate CSV: {e}"));
    out.write_record(["topic_id", "relatedness", "smoothness", "familiarity", "respondents"])
        .map_err(err)?;
    for (topic, a) in aggregates {
        out.write_record([
            topic.clone(),
            a.relatedness.to_string(),
            a.smoothness.to_string(),
            a.familiarity.to_string(),
            a.respondents.to_string(),
        ])
        .map_err(err)?;
    }
    out.flush().map_err(|e| Error::io("<aggregate csv>", e))
}
