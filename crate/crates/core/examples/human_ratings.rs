// Filter respondents, average their ratings and correlate them with the
// automated measures.
//
// `cargo run --example human_ratings`

use std::fs::File;
use std::path::PathBuf;

use dtm_eval::ratings::{
    aggregate_ratings, correlate_measures, filter_respondents, read_measures, read_ratings,
    FilterRules,
};

fn open(name: &str) -> dtm_eval::Result<File> {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data").join(name);
    File::open(&path).map_err(|e| dtm_eval::Error::io(&path, e))
}

pub fn run() -> dtm_eval::Result<()> {
    let ratings = read_ratings(open("ratings.csv")?)?;
    let measures = read_measures(open("measures.csv")?)?;
    let filtered = filter_respondents(&ratings, "C", FilterRules::default())?;
    for e in &filtered.exclusions {
        println!("excluded {} ({})", e.rater_id, e.reason);
    }
    let aggregates = aggregate_ratings(&filtered.valid);
    for (topic, a) in &aggregates {
        println!(
            "{topic}: relatedness {:.3} smoothness {:.3} ({} raters)",
            a.relatedness, a.smoothness, a.respondents
        );
    }
    for c in correlate_measures(&aggregates, &measures)? {
        println!("{:<16} rho {:+.3} p {:.3}", c.pairing, c.rho, c.p_value);
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
