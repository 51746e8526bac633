//! Independent oracles and fixtures shared by the integration tests.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use dtm_eval::corpus::{count_cooccurrences, CooccurrenceStats, TimedCorpus};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Window counts enumerated directly from the token strings.
#[derive(Debug, Default, PartialEq, Eq)]
pub struct NaiveCounts {
    pub total: u64,
    pub words: BTreeMap<String, u64>,
    pub pairs: BTreeMap<(String, String), u64>,
}

pub fn naive_counts(docs: &[Vec<String>], window: usize) -> NaiveCounts {
    let mut out = NaiveCounts::default();
    for doc in docs {
        let starts = if doc.len() <= window { 1 } else { doc.len() - window + 1 };
        for s in 0..starts {
            let end = (s + window).min(doc.len());
            let seen: BTreeSet<&String> = doc[s..end].iter().collect();
            out.total += 1;
            for w in &seen {
                *out.words.entry((*w).clone()).or_default() += 1;
            }
            for a in &seen {
                for b in &seen {
                    if a < b {
                        *out.pairs.entry(((*a).clone(), (*b).clone())).or_default() += 1;
                    }
                }
            }
        }
    }
    out
}

/// Re-expresses library counts with string keys for comparison.
pub fn library_counts(stats: &CooccurrenceStats) -> NaiveCounts {
    let vocab = stats.vocabulary();
    let word = |id: u32| vocab.word(id).unwrap().to_owned();
    let mut out = NaiveCounts {
        total: stats.total_windows(),
        ..Default::default()
    };
    for id in 0..vocab.len() as u32 {
        let c = stats.word_count(id);
        if c > 0 {
            out.words.insert(word(id), c);
        }
    }
    for ((a, b), c) in stats.sorted_pairs() {
        let (a, b) = (word(a), word(b));
        let key = if a < b { (a, b) } else { (b, a) };
        out.pairs.insert(key, c);
    }
    out
}

/// Corpus of `n_docs` documents of 1..=`max_len` tokens over `vocab` words.
pub fn random_docs(rng: &mut ChaCha8Rng, n_docs: usize, max_len: usize, vocab: usize) -> Vec<Vec<String>> {
    (0..n_docs)
        .map(|_| {
            let len = rng.gen_range(1..=max_len);
            (0..len).map(|_| format!("w{}", rng.gen_range(0..vocab))).collect()
        })
        .collect()
}

pub fn corpus_of(docs: &[Vec<String>]) -> TimedCorpus {
    TimedCorpus::from_token_lists(docs.iter().enumerate().map(|(i, d)| (2000 + (i % 3) as i64, d.clone())))
        .unwrap()
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// The four-document reference corpus: {a b}, {a b}, {a c}, {d e}.
pub fn toy_stats() -> CooccurrenceStats {
    let corpus = TimedCorpus::from_token_lists(vec![
        (2000, vec!["a", "b"]),
        (2000, vec!["a", "b"]),
        (2001, vec!["a", "c"]),
        (2001, vec!["d", "e"]),
    ])
    .unwrap();
    count_cooccurrences(&corpus, 10).unwrap()
}

/// NPMI from raw window counts, written out independently of the library.
pub fn npmi_from_counts(n_a: f64, n_b: f64, n_ab: f64, total: f64, eps: f64) -> f64 {
    let (pa, pb, pab) = (n_a / total, n_b / total, n_ab / total + eps);
    if pab >= 1.0 {
        return 1.0;
    }
    ((pab / (pa * pb)).ln() / -(pab.ln())).clamp(-1.0, 1.0)
}

/// NPMI on the toy corpus, from counts enumerated by hand:
/// a in 3 windows, b in 2, c/d/e in 1; ab 2, ac 1, de 1.
pub fn toy_npmi(x: &str, y: &str) -> f64 {
    let single = |w: &str| match w {
        "a" => 3.0,
        "b" => 2.0,
        _ => 1.0,
    };
    let joint = |x: &str, y: &str| {
        if x == y {
            return single(x);
        }
        let mut k = [x, y];
        k.sort();
        match k {
            ["a", "b"] => 2.0,
            ["a", "c"] | ["d", "e"] => 1.0,
            _ => 0.0,
        }
    };
    npmi_from_counts(single(x), single(y), joint(x, y), 4.0, 1e-12)
}

/// Arithmetic mean in plain summation order.
pub fn plain_mean(v: &[f64]) -> f64 {
    v.iter().sum::<f64>() / v.len() as f64
}

/// Spearman written independently: ranks by counting, then textbook Pearson.
pub fn oracle_spearman(x: &[f64], y: &[f64]) -> f64 {
    fn ranks(v: &[f64]) -> Vec<f64> {
        v.iter()
            .map(|a| {
                let below = v.iter().filter(|b| *b < a).count() as f64;
                let equal = v.iter().filter(|b| *b == a).count() as f64;
                below + (equal + 1.0) / 2.0
            })
            .collect()
    }
    let (rx, ry) = (ranks(x), ranks(y));
    let n = x.len() as f64;
    let (mx, my) = (rx.iter().sum::<f64>() / n, ry.iter().sum::<f64>() / n);
    let cov: f64 = rx.iter().zip(&ry).map(|(a, b)| (a - mx) * (b - my)).sum();
    let vx: f64 = rx.iter().map(|a| (a - mx).powi(2)).sum();
    let vy: f64 = ry.iter().map(|b| (b - my).powi(2)).sum();
    cov / (vx * vy).sqrt()
}

/// Topic slices written as whitespace-separated word lists.
pub fn lists(rows: &[&str]) -> Vec<Vec<String>> {
    rows.iter()
        .map(|r| r.split_whitespace().map(str::to_owned).collect())
        .collect()
}

/// Ratings of 18 raters over topics T1..T5 plus control topic C.
///
/// Every rater spends 30 s per topic except r16 (5 s, a fast outlier);
/// r17 and r18 rate the control topic as related. Smoothness rises with
/// the topic number and relatedness falls, for every rater.
pub fn eighteen_raters() -> Vec<dtm_eval::ratings::Rating> {
    use dtm_eval::ratings::Rating;
    let mut rows = Vec::new();
    for i in 1..=18u32 {
        let rater = format!("r{i:02}");
        let seconds = if i == 16 { 5.0 } else { 30.0 };
        for j in 1..=5u32 {
            rows.push(Rating {
                rater_id: rater.clone(),
                topic_id: format!("T{j}"),
                relatedness: (1 + ((5 - j) + i % 3) / 3) as u8,
                smoothness: (1 + ((j - 1) + i % 4) / 3) as u8,
                familiarity: (1 + (i + j) % 3) as u8,
                duration_seconds: seconds,
                is_control: false,
            });
        }
        let failed = i >= 17;
        rows.push(Rating {
            rater_id: rater,
            topic_id: "C".into(),
            relatedness: if failed { 3 } else { 1 },
            smoothness: 1,
            familiarity: 1,
            duration_seconds: seconds,
            is_control: true,
        });
    }
    rows
}

/// Measures CSV for T1..T5: TTS follows the human smoothness order, B-TS
/// swaps T3 and T4; TTC follows relatedness, B-TC swaps T1 and T2.
pub const FIVE_TOPIC_MEASURES: &str = "topic_id,ttc,tts,btc,bts
T1,0.5,0.1,0.3,0.1
T2,0.4,0.2,0.4,0.2
T3,0.3,0.3,0.2,0.4
T4,0.2,0.4,0.1,0.3
T5,0.1,0.5,0.0,0.5
";

pub fn ratings_csv(rows: &[dtm_eval::ratings::Rating]) -> String {
    let mut out = String::from(
        "rater_id,topic_id,relatedness,smoothness,familiarity,duration_seconds,is_control\n",
    );
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            r.rater_id, r.topic_id, r.relatedness, r.smoothness, r.familiarity, r.duration_seconds, r.is_control
        ));
    }
    out
}
