// Word-intrusion sweep: replace 1..10 words of one slice with words from
// other topics and watch the target topic's TTQ fall.
//
// `cargo run --example intrusion_sweep`

use dtm_eval::correlation::correlate;
use dtm_eval::corpus::count_cooccurrences;
use dtm_eval::numeric::mean;
use dtm_eval::perturb::{intrude, intrusion_sweep};
use dtm_eval::synthetic::{drifting_chains, ChainConfig};

pub fn run() -> dtm_eval::Result<()> {
    let fixture = drifting_chains(&ChainConfig::default())?;
    let stats = count_cooccurrences(&fixture.corpus()?, 10)?;
    let target = 3;

    let one = intrude(&fixture.topics, target, 2, 7)?;
    println!(
        "seed 7, level 2: year index {} positions {:?} intruders {:?}",
        one.time_index, one.positions, one.intruders
    );

    let levels: Vec<usize> = (1..=10).collect();
    let seeds = [1, 2, 3, 4, 5];
    let rows = intrusion_sweep(&stats, &fixture.topics, target, &levels, &seeds, 2, 1e-12)?;
    for level in 0..=10 {
        let ttq: Vec<f64> = rows.iter().filter(|r| r.level == level).map(|r| r.ttq).collect();
        println!("level {level:>2}: mean TTQ {:.4}", mean(&ttq).unwrap_or(0.0));
    }
    let (x, y): (Vec<f64>, Vec<f64>) =
        rows.iter().filter(|r| r.level > 0).map(|r| (r.level as f64, r.ttq)).unzip();
    let c = correlate("level~ttq", &x, &y)?;
    println!("Spearman rho {:.4} (p = {:.2e}, n = {})", c.rho, c.p_value, c.n);
    Ok(())
}

#[allow(dead_code)]
fn main() {
    if let Err(e) = run() {
        eprintln!("error: {e}");
        std::process::exit(e.exit_code());
    }
}
