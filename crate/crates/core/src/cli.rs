//! Command implementations behind the `dtm-eval` binary.
//!
//! Each command reads its inputs, computes everything in memory and only
//! then writes its outputs, each file through a temporary sibling that is
//! renamed into place. Reports in JSON embed the effective [`RunConfig`].

use std::collections::BTreeMap;
use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::corpus::{
    count_cooccurrences, load_corpus, prune_vocabulary, read_stats_cache, write_stats_cache,
    StatsCache, DEFAULT_WINDOW_SIZE,
};
use crate::correlation::{correlate, write_correlations_csv, CorrelationResult};
use crate::error::{Error, Result};
use crate::numeric::{mean, sample_std};
use crate::perturb::{
    collapse_repeat, intrude, intrusion_sweep, temporal_shuffle, write_sweep_csv, CollapseChoice,
    PerturbationKind, PerturbationSpec, SweepRow,
};
use crate::ratings::{
    aggregate_ratings, correlate_measures, filter_respondents, read_measures, read_ratings,
    write_aggregates_csv, write_exclusions_csv, FilterRules, TopicAggregate,
};
use crate::static_measures::{yearwise_report, ReferenceStats, YearwiseReport, DEFAULT_EPSILON};
use crate::synthetic::{drifting_chains, ChainConfig};
use crate::temporal::{temporal_report_with, TemporalReport, DEFAULT_TIME_WINDOW};
use crate::topics::{read_topics, write_topics, DynamicTopics, DEFAULT_N_TOP};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Json,
    Csv,
}

/// Effective settings of one run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub corpus_path: Option<PathBuf>,
    pub topics_path: Option<PathBuf>,
    pub stats_cache_path: Option<PathBuf>,
    pub window_size: usize,
    pub epsilon: f64,
    /// Number of consecutive timestamps per temporal window (L).
    pub time_window: usize,
    pub n_top: usize,
    pub min_df: f64,
    pub max_df: f64,
    pub seed: u64,
    pub output_dir: PathBuf,
    pub output_format: OutputFormat,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            corpus_path: None,
            topics_path: None,
            stats_cache_path: None,
            window_size: DEFAULT_WINDOW_SIZE,
            epsilon: DEFAULT_EPSILON,
            time_window: DEFAULT_TIME_WINDOW,
            n_top: DEFAULT_N_TOP,
            min_df: 0.0,
            max_df: 1.0,
            seed: 0,
            output_dir: PathBuf::from("out"),
            output_format: OutputFormat::Json,
        }
    }
}

/// Optional overrides, from a `--config` JSON file or the command line.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize, clap::Args)]
#[serde(deny_unknown_fields)]
pub struct ConfigArgs {
    /// Line-delimited JSON corpus
    #[arg(long, global = true)]
    pub corpus_path: Option<PathBuf>,
    /// Topics JSON file
    #[arg(long, global = true)]
    pub topics_path: Option<PathBuf>,
    /// Co-occurrence cache file
    #[arg(long, global = true)]
    pub stats_cache_path: Option<PathBuf>,
    /// Tokens per sliding window for co-occurrence counting
    #[arg(long, global = true)]
    pub window_size: Option<usize>,
    /// Smoothing constant inside the NPMI logarithm
    #[arg(long, global = true)]
    pub epsilon: Option<f64>,
    /// Timestamps per temporal window (L)
    #[arg(long, visible_alias = "L", global = true)]
    #[serde(alias = "L")]
    pub time_window: Option<usize>,
    /// Top words per topic slice
    #[arg(long, global = true)]
    pub n_top: Option<usize>,
    /// Minimum document-frequency fraction kept in the vocabulary
    #[arg(long, global = true)]
    pub min_df: Option<f64>,
    /// Maximum document-frequency fraction kept in the vocabulary
    #[arg(long, global = true)]
    pub max_df: Option<f64>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    #[arg(long, global = true)]
    pub output_dir: Option<PathBuf>,
    #[arg(long, value_enum, global = true)]
    pub output_format: Option<OutputFormat>,
}

impl ConfigArgs {
    pub fn read(path: &Path) -> Result<Self> {
        let file = File::open(path).map_err(|e| Error::io(path, e))?;
        serde_json::from_reader(BufReader::new(file)).map_err(|e| Error::Format {
            path: path.to_owned(),
            message: e.to_string(),
        })
    }
}

impl RunConfig {
    /// Defaults, then `file`, then `cli`; later sources win.
    pub fn resolve(file: Option<&ConfigArgs>, cli: &ConfigArgs) -> Result<Self> {
        let mut cfg = RunConfig::default();
        for layer in file.into_iter().chain(std::iter::once(cli)) {
            cfg.apply(layer);
        }
        cfg.validate()?;
        Ok(cfg)
    }

    fn apply(&mut self, a: &ConfigArgs) {
        macro_rules! set {
            ($($f:ident),*) => {$(if let Some(v) = &a.$f { self.$f = v.clone(); })*};
        }
        macro_rules! set_opt {
            ($($f:ident),*) => {$(if let Some(v) = &a.$f { self.$f = Some(v.clone()); })*};
        }
        set_opt!(corpus_path, topics_path, stats_cache_path);
        set!(window_size, epsilon, time_window, n_top, min_df, max_df, seed, output_dir, output_format);
    }

    pub fn validate(&self) -> Result<()> {
        if self.window_size == 0 {
            return Err(Error::invalid("window_size must be at least 1"));
        }
        if !(self.epsilon > 0.0 && self.epsilon.is_finite()) {
            return Err(Error::invalid("epsilon must be positive"));
        }
        if self.time_window < 2 {
            return Err(Error::invalid("time_window must be at least 2"));
        }
        if self.n_top == 0 {
            return Err(Error::invalid("n_top must be at least 1"));
        }
        if !(0.0..=1.0).contains(&self.min_df)
            || !(0.0..=1.0).contains(&self.max_df)
            || self.min_df > self.max_df
        {
            return Err(Error::invalid("need 0 ≤ min_df ≤ max_df ≤ 1"));
        }
        Ok(())
    }

    fn require<'a>(&self, value: &'a Option<PathBuf>, flag: &str) -> Result<&'a Path> {
        value
            .as_deref()
            .ok_or_else(|| Error::invalid(format!("--{flag} is required for this command")))
    }

    fn output(&self, name: &str) -> PathBuf {
        self.output_dir.join(name)
    }
}

/// Writes `path` via a temporary file in the same directory.
pub fn write_atomic<F>(path: &Path, fill: F) -> Result<()>
where
    F: FnOnce(&mut dyn Write) -> Result<()>,
{
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let tmp = tempfile::NamedTempFile::new_in(dir).map_err(|e| Error::io(dir, e))?;
    {
        let mut w = BufWriter::new(tmp.as_file());
        fill(&mut w)?;
        w.flush().map_err(|e| Error::io(path, e))?;
    }
    tmp.persist(path).map_err(|e| Error::io(path, e.error))?;
    Ok(())
}

fn open(path: &Path) -> Result<BufReader<File>> {
    File::open(path)
        .map(BufReader::new)
        .map_err(|e| Error::io(path, e))
}

fn with_path(path: &Path, e: Error) -> Error {
    match e {
        Error::Io { .. } => e,
        other => Error::Format {
            path: path.to_owned(),
            message: other.to_string(),
        },
    }
}

fn load_topics(cfg: &RunConfig) -> Result<DynamicTopics> {
    let path = cfg.require(&cfg.topics_path, "topics-path")?;
    let topics = read_topics(open(path)?).map_err(|e| with_path(path, e))?;
    if topics.n_top() != cfg.n_top {
        return Err(Error::invalid(format!(
            "topics file has n_top = {} but n_top = {} was requested",
            topics.n_top(),
            cfg.n_top
        )));
    }
    Ok(topics)
}

fn load_cache(cfg: &RunConfig) -> Result<StatsCache> {
    let path = cfg.require(&cfg.stats_cache_path, "stats-cache-path")?;
    read_stats_cache(open(path)?).map_err(|e| with_path(path, e))
}

fn write_json<T: Serialize + ?Sized>(path: &Path, value: &T) -> Result<()> {
    write_atomic(path, |w| {
        serde_json::to_writer_pretty(&mut *w, value)
            .map_err(|e| Error::invalid(format!("cannot serialize {}: {e}", path.display())))?;
        w.write_all(b"\n").map_err(|e| Error::io(path, e))
    })
}

/// Builds the co-occurrence cache of the configured corpus.
pub fn cmd_cooccur(cfg: &RunConfig, per_year: bool) -> Result<String> {
    let corpus_path = cfg.require(&cfg.corpus_path, "corpus-path")?;
    let cache_path = cfg.require(&cfg.stats_cache_path, "stats-cache-path")?;
    let corpus = load_corpus(open(corpus_path)?).map_err(|e| with_path(corpus_path, e))?;
    let corpus = prune_vocabulary(&corpus, cfg.min_df, cfg.max_df)?;
    let global = count_cooccurrences(&corpus, cfg.window_size)?;
    let per_year = if per_year {
        Some(
            corpus
                .timestamps()
                .iter()
                .map(|&t| Ok((t, count_cooccurrences(&corpus.year_slice(t), cfg.window_size)?)))
                .collect::<Result<BTreeMap<_, _>>>()?,
        )
    } else {
        None
    };
    let summary = format!(
        "V={}, windows={}, documents={}, skipped_empty={}",
        corpus.vocabulary().len(),
        global.total_windows(),
        corpus.len(),
        corpus.rejected_empty()
    );
    let cache = StatsCache {
        timestamps: corpus.timestamps().to_vec(),
        global,
        per_year,
    };
    write_atomic(cache_path, |w| write_stats_cache(&cache, w))?;
    Ok(summary)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum EvalMode {
    Yearwise,
    Temporal,
    All,
}

#[derive(Serialize)]
struct Envelope<'a, T> {
    config: &'a RunConfig,
    report: &'a T,
}

/// Evaluates a topics file against the cached reference statistics.
pub fn cmd_eval(cfg: &RunConfig, mode: EvalMode) -> Result<String> {
    let cache = load_cache(cfg)?;
    let topics = load_topics(cfg)?;
    if let Some(t) = topics
        .timestamps()
        .iter()
        .find(|t| cache.timestamps.binary_search(t).is_err())
    {
        return Err(Error::invalid(format!(
            "topics reference timestamp {t}, which does not occur in the corpus"
        )));
    }
    let reference = match &cache.per_year {
        Some(m) => ReferenceStats::PerYear(m),
        None => ReferenceStats::Global(&cache.global),
    };
    let yearwise = yearwise_report(&topics, reference, cfg.epsilon)?;
    let temporal = match mode {
        EvalMode::Yearwise => None,
        EvalMode::Temporal | EvalMode::All => Some(temporal_report_with(
            &cache.global,
            &topics,
            &yearwise,
            cfg.time_window,
            cfg.epsilon,
        )?),
    };

    let write_yearwise = mode != EvalMode::Temporal;
    match cfg.output_format {
        OutputFormat::Json => {
            if write_yearwise {
                write_json(&cfg.output("yearwise.json"), &Envelope { config: cfg, report: &yearwise })?;
            }
            if let Some(t) = &temporal {
                write_json(&cfg.output("temporal.json"), &Envelope { config: cfg, report: t })?;
            }
        }
        OutputFormat::Csv => {
            if write_yearwise {
                write_atomic(&cfg.output("yearwise.csv"), |w| yearwise.write_csv(w))?;
            }
            if let Some(t) = &temporal {
                write_atomic(&cfg.output("temporal_series.csv"), |w| t.write_series_csv(w))?;
                write_atomic(&cfg.output("temporal_topics.csv"), |w| t.write_topics_csv(w))?;
                write_atomic(&cfg.output("temporal_overall.csv"), |w| t.write_overall_csv(w))?;
            }
        }
    }
    if let Some(t) = &temporal {
        write_atomic(&cfg.output("topic_measures.csv"), |w| t.write_measures_csv(w))?;
    }
    Ok(summary_line(&yearwise, temporal.as_ref(), mode))
}

fn summary_line(y: &YearwiseReport, t: Option<&TemporalReport>, mode: EvalMode) -> String {
    let mut parts = Vec::new();
    if mode != EvalMode::Temporal {
        parts.push(format!("TC={:.4} TD={:.4} TQ={:.4}", y.mean_tc, y.mean_td, y.mean_tq));
    }
    if let Some(t) = t {
        parts.push(format!(
            "TTC={:.4} TTS={:.4} TTQ={:.4} DTQ={:.4}",
            t.mean_ttc, t.mean_tts, t.mean_ttq, t.dtq
        ));
    }
    parts.join(" ")
}

#[derive(Debug, Clone, Serialize)]
pub struct Provenance {
    pub kind: PerturbationKind,
    pub seed: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub chosen_topic: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub level: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub time_index: Option<usize>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub positions: Vec<usize>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub intruders: Vec<String>,
    pub config: RunConfig,
}

/// Writes a perturbed copy of the topics file to `perturbed_topics.json`.
///
/// For `collapse`, `intrude_target` selects the repeated topic (seeded
/// random choice when absent). For `intrude`, the single entry of
/// `intrude_levels` is the level.
pub fn cmd_perturb(cfg: &RunConfig, spec: &PerturbationSpec) -> Result<String> {
    let topics = load_topics(cfg)?;
    spec.validate(topics.n_topics(), topics.n_top())?;
    let mut prov = Provenance {
        kind: spec.kind,
        seed: spec.seed,
        chosen_topic: None,
        level: None,
        time_index: None,
        positions: Vec::new(),
        intruders: Vec::new(),
        config: cfg.clone(),
    };
    let out = match spec.kind {
        PerturbationKind::Shuffle => temporal_shuffle(&topics, spec.seed)?,
        PerturbationKind::Collapse => {
            let choice = match spec.intrude_target {
                Some(k) => CollapseChoice::Index(k),
                None => CollapseChoice::Random(spec.seed),
            };
            let (out, chosen) = collapse_repeat(&topics, choice)?;
            prov.chosen_topic = Some(chosen);
            out
        }
        PerturbationKind::Intrude => {
            let level = match spec.intrude_levels.as_slice() {
                [level] => *level,
                _ => return Err(Error::invalid("intrude needs exactly one --level")),
            };
            let target = spec
                .intrude_target
                .unwrap_or_else(|| ChaCha8Rng::seed_from_u64(spec.seed).gen_range(0..topics.n_topics()));
            let result = intrude(&topics, target, level, spec.seed)?;
            prov.chosen_topic = Some(target);
            prov.level = Some(level);
            prov.time_index = Some(result.time_index);
            prov.positions = result.positions;
            prov.intruders = result.intruders;
            result.topics
        }
    };
    let path = cfg.output("perturbed_topics.json");
    write_atomic(&path, |w| write_topics(&out, Some(&prov), w))?;
    Ok(format!(
        "{:?} perturbation written to {} (K={}, T={})",
        spec.kind,
        path.display(),
        out.n_topics(),
        out.n_timestamps()
    ))
}

#[derive(Debug, Clone, Serialize)]
struct IntrusionSummary<'a> {
    config: &'a RunConfig,
    target: usize,
    levels: &'a [usize],
    seeds: &'a [u64],
    correlations: &'a [CorrelationResult],
    skipped: &'a [String],
}

/// Spearman correlations of intrusion level against TTQ, TTC and TTS, per
/// seed and pooled over seeds. Level-0 reference rows are left out.
/// Pairings that cannot be computed are reported in the second vector.
pub fn sweep_correlations(rows: &[SweepRow], seeds: &[u64]) -> (Vec<CorrelationResult>, Vec<String>) {
    let mut results = Vec::new();
    let mut skipped = Vec::new();
    type Getter = fn(&SweepRow) -> f64;
    let measures: [(&str, Getter); 3] = [("ttq", |r| r.ttq), ("ttc", |r| r.ttc), ("tts", |r| r.tts)];
    let mut scopes: Vec<(String, Vec<&SweepRow>)> = seeds
        .iter()
        .map(|&s| {
            (
                format!("seed={s}"),
                rows.iter().filter(|r| r.seed == s && r.level > 0).collect(),
            )
        })
        .collect();
    scopes.push(("pooled".into(), rows.iter().filter(|r| r.level > 0).collect()));
    for (scope, subset) in scopes {
        let levels: Vec<f64> = subset.iter().map(|r| r.level as f64).collect();
        for (name, get) in measures {
            let values: Vec<f64> = subset.iter().map(|r| get(r)).collect();
            let pairing = format!("{scope}:level~{name}");
            match correlate(pairing.clone(), &levels, &values) {
                Ok(c) => results.push(c),
                Err(e) => skipped.push(format!("{pairing}: {e}")),
            }
        }
    }
    (results, skipped)
}

/// Runs the word-intrusion sweep on one target topic.
pub fn cmd_intrude(
    cfg: &RunConfig,
    target: Option<usize>,
    levels: &[usize],
    seeds: &[u64],
) -> Result<String> {
    let cache = load_cache(cfg)?;
    let topics = load_topics(cfg)?;
    if seeds.is_empty() || levels.is_empty() {
        return Err(Error::invalid("intrusion sweep needs at least one seed and one level"));
    }
    let target = target
        .unwrap_or_else(|| ChaCha8Rng::seed_from_u64(cfg.seed).gen_range(0..topics.n_topics()));
    PerturbationSpec {
        kind: PerturbationKind::Intrude,
        seed: cfg.seed,
        intrude_target: Some(target),
        intrude_levels: levels.to_vec(),
    }
    .validate(topics.n_topics(), topics.n_top())?;
    let rows = intrusion_sweep(
        &cache.global,
        &topics,
        target,
        levels,
        seeds,
        cfg.time_window,
        cfg.epsilon,
    )?;
    let (correlations, skipped) = sweep_correlations(&rows, seeds);

    let mut by_level: BTreeMap<usize, Vec<f64>> = BTreeMap::new();
    for r in &rows {
        by_level.entry(r.level).or_default().push(r.ttq);
    }

    write_atomic(&cfg.output("sweep.csv"), |w| write_sweep_csv(&rows, w))?;
    write_atomic(&cfg.output("plot.csv"), |w| {
        let mut out = csv::Writer::from_writer(w);
        let err = |e: csv::Error| Error::invalid(format!("cannot write plot CSV: {e}"));
        out.write_record(["level", "mean_ttq", "std_ttq"]).map_err(err)?;
        for (level, v) in &by_level {
            out.write_record([
                level.to_string(),
                mean(v).unwrap_or(0.0).to_string(),
                sample_std(v).to_string(),
            ])
            .map_err(err)?;
        }
        out.flush().map_err(|e| Error::io("plot.csv", e))
    })?;
    if !correlations.is_empty() {
        write_atomic(&cfg.output("correlation.csv"), |w| write_correlations_csv(&correlations, w))?;
    }
    write_json(
        &cfg.output("intrusion.json"),
        &IntrusionSummary {
            config: cfg,
            target,
            levels,
            seeds,
            correlations: &correlations,
            skipped: &skipped,
        },
    )?;

    let pooled = correlations
        .iter()
        .find(|c| c.pairing == "pooled:level~ttq")
        .map_or_else(
            || "pooled rho(level, TTQ) not computed (need at least 3 distinct levels)".to_owned(),
            |c| format!("pooled rho(level, TTQ)={:.4} p={:.3e} n={}", c.rho, c.p_value, c.n),
        );
    Ok(format!("target topic {target}: {} rows; {pooled}", rows.len()))
}

#[derive(Serialize)]
struct HumanSummary<'a> {
    config: &'a RunConfig,
    control_topic: &'a str,
    control_threshold: u8,
    duration_factor: f64,
    exclusions: &'a [crate::ratings::Exclusion],
    aggregates: &'a BTreeMap<String, TopicAggregate>,
    correlations: &'a [CorrelationResult],
}

/// Filters, aggregates and correlates human ratings with per-topic measures.
pub fn cmd_human(
    cfg: &RunConfig,
    ratings_path: &Path,
    control_topic: &str,
    measures_path: &Path,
    rules: FilterRules,
) -> Result<String> {
    let ratings = read_ratings(open(ratings_path)?).map_err(|e| with_path(ratings_path, e))?;
    let measures = read_measures(open(measures_path)?).map_err(|e| with_path(measures_path, e))?;
    let filtered = filter_respondents(&ratings, control_topic, rules)?;
    let aggregates = aggregate_ratings(&filtered.valid);
    let correlations = correlate_measures(&aggregates, &measures)?;

    write_atomic(&cfg.output("exclusions.csv"), |w| {
        write_exclusions_csv(&filtered.exclusions, w)
    })?;
    write_atomic(&cfg.output("aggregates.csv"), |w| write_aggregates_csv(&aggregates, w))?;
    write_atomic(&cfg.output("correlations.csv"), |w| {
        write_correlations_csv(&correlations, w)
    })?;
    write_json(
        &cfg.output("human.json"),
        &HumanSummary {
            config: cfg,
            control_topic,
            control_threshold: rules.control_threshold,
            duration_factor: rules.duration_factor,
            exclusions: &filtered.exclusions,
            aggregates: &aggregates,
            correlations: &correlations,
        },
    )?;
    let kept = filtered.valid.raters().len();
    let lines: Vec<String> = correlations
        .iter()
        .map(|c| format!("{} rho={:.4} p={:.3e}", c.pairing, c.rho, c.p_value))
        .collect();
    Ok(format!(
        "{kept} valid raters, {} excluded; {}",
        filtered.exclusions.len(),
        lines.join("; ")
    ))
}

/// Writes a drifting-chain corpus (`corpus.jsonl`) and its topics
/// (`topics.json`) to the output directory.
pub fn cmd_fixture(cfg: &RunConfig, chain: ChainConfig) -> Result<String> {
    let chain = ChainConfig {
        n_top: cfg.n_top,
        seed: cfg.seed,
        ..chain
    };
    let fixture = drifting_chains(&chain)?;
    write_atomic(&cfg.output("corpus.jsonl"), |w| fixture.write_corpus_jsonl(w))?;
    write_atomic(&cfg.output("topics.json"), |w| {
        write_topics(&fixture.topics, Some(&serde_json::json!({ "fixture": chain })), w)
    })?;
    Ok(format!(
        "{} documents, K={}, T={}, N={} written to {}",
        fixture.documents.len(),
        chain.n_topics,
        chain.n_timestamps,
        chain.n_top,
        cfg.output_dir.display()
    ))
}
