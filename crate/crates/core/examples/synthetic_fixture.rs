// Generate a small drifting-chain corpus and show how its topics move.
//
// `cargo run --example synthetic_fixture`

use dtm_eval::corpus::{count_cooccurrences, read_stats_cache, write_stats_cache, StatsCache};
use dtm_eval::synthetic::{drifting_chains, ChainConfig};

pub fn run() -> dtm_eval::Result<()> {
    let config = ChainConfig {
        n_topics: 3,
        n_timestamps: 4,
        n_top: 5,
        docs_per_slice: 4,
        ..ChainConfig::default()
    };
    let fixture = drifting_chains(&config)?;
    for (k, topic) in fixture.topics.topics().iter().enumerate() {
        let years: Vec<String> = topic.slices.iter().map(|s| s.words().join(" ")).collect();
        println!("topic {k}: {}", years.join(" | "));
    }
    let mut jsonl = Vec::new();
    fixture.write_corpus_jsonl(&mut jsonl)?;
    println!("{} documents, first: {}", fixture.documents.len(), String::from_utf8_lossy(&jsonl).lines().next().unwrap_or(""));

    let corpus = fixture.corpus()?;
    let cache = StatsCache {
        timestamps: corpus.timestamps().to_vec(),
        global: count_cooccurrences(&corpus, 10)?,
        per_year: None,
    };
    let mut bytes = Vec::new();
    write_stats_cache(&cache, &mut bytes)?;
    let back = read_stats_cache(bytes.as_slice())?;
    println!(
        "cache: {} bytes, {} windows, round trip equal: {}",
        bytes.len(),
        back.global.total_windows(),
        back == cache
    );
    Ok(())
}

#[allow(dead_code)]
fn main() {
    if let Err(e) = run() {
        eprintln!("error: {e}");
        std::process::exit(e.exit_code());
    }
}
