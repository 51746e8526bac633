// Shuffling topics within each year leaves year-wise scores untouched but
// destroys temporal smoothness.
//
// `cargo run --example shuffle_experiment`

use dtm_eval::corpus::count_cooccurrences;
use dtm_eval::perturb::temporal_shuffle;
use dtm_eval::static_measures::{yearwise_report, ReferenceStats};
use dtm_eval::synthetic::{drifting_chains, ChainConfig};
use dtm_eval::temporal::temporal_report;

pub fn run() -> dtm_eval::Result<()> {
    let fixture = drifting_chains(&ChainConfig::default())?;
    let stats = count_cooccurrences(&fixture.corpus()?, 10)?;
    let eps = 1e-12;

    let before_y = yearwise_report(&fixture.topics, ReferenceStats::Global(&stats), eps)?;
    let before_t = temporal_report(&stats, &fixture.topics, 2, eps)?;
    println!("original: TQ {:.4} TTS {:.3} TTQ {:.4}", before_y.mean_tq, before_t.mean_tts, before_t.mean_ttq);
    for seed in 0..3 {
        let shuffled = temporal_shuffle(&fixture.topics, seed)?;
        let y = yearwise_report(&shuffled, ReferenceStats::Global(&stats), eps)?;
        let t = temporal_report(&stats, &shuffled, 2, eps)?;
        println!(
            "seed {seed}:  TQ {:.4} TTS {:.3} TTQ {:.4} (year-wise unchanged: {})",
            y.mean_tq,
            t.mean_tts,
            t.mean_ttq,
            y.years.iter().zip(&before_y.years).all(|(a, b)| (a.tc, a.td, a.tq) == (b.tc, b.td, b.tq))
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    if let Err(e) = run() {
        eprintln!("error: {e}");
        std::process::exit(e.exit_code());
    }
}
