// Repeating one topic in every slot: diversity and TQ fall to zero while
// each topic keeps the repeated topic's TTQ.
//
// `cargo run --example component_collapse`

use dtm_eval::corpus::count_cooccurrences;
use dtm_eval::perturb::{collapse_repeat, CollapseChoice};
use dtm_eval::static_measures::{yearwise_report, ReferenceStats};
use dtm_eval::synthetic::{drifting_chains, ChainConfig};
use dtm_eval::temporal::temporal_report;

pub fn run() -> dtm_eval::Result<()> {
    let fixture = drifting_chains(&ChainConfig::default())?;
    let stats = count_cooccurrences(&fixture.corpus()?, 10)?;
    let eps = 1e-12;
    let (collapsed, chosen) = collapse_repeat(&fixture.topics, CollapseChoice::Random(42))?;
    println!("repeating topic {chosen}");
    for (name, model) in [("original", &fixture.topics), ("collapsed", &collapsed)] {
        let y = yearwise_report(model, ReferenceStats::Global(&stats), eps)?;
        let t = temporal_report(&stats, model, 2, eps)?;
        println!(
            "{name:>9}: TC {:.4} TD {:.3} TQ {:.4} | TTC {:.4} TTS {:.3} TTQ {:.4} | DTQ {:.4}",
            y.mean_tc, y.mean_td, y.mean_tq, t.mean_ttc, t.mean_tts, t.mean_ttq, t.dtq
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
