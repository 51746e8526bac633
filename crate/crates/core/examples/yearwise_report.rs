// Year-wise TC/TD/TQ of the bundled topics, printed as CSV.
//
// `cargo run --example yearwise_report`

use std::fs::File;
use std::io::BufReader;
use std::path::PathBuf;

use dtm_eval::corpus::{count_cooccurrences, load_corpus};
use dtm_eval::static_measures::{yearwise_report, ReferenceStats};
use dtm_eval::topics::read_topics;

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data").join(name)
}

fn open(name: &str) -> dtm_eval::Result<BufReader<File>> {
    let path = data(name);
    File::open(&path).map(BufReader::new).map_err(|e| dtm_eval::Error::io(&path, e))
}

pub fn run() -> dtm_eval::Result<()> {
    let corpus = load_corpus(open("corpus.jsonl")?)?;
    let topics = read_topics(open("topics.json")?)?;
    let stats = count_cooccurrences(&corpus, 10)?;
    let report = yearwise_report(&topics, ReferenceStats::Global(&stats), 1e-12)?;
    report.write_csv(std::io::stdout().lock())?;
    for row in &report.years {
        println!("{}: per-topic coherence {:?}", row.timestamp, row.coherence);
    }
    println!("mean TC {:.4}, TD {:.4}, TQ {:.4}", report.mean_tc, report.mean_td, report.mean_tq);
    Ok(())
}

#[allow(dead_code)]
fn main() {
    if let Err(e) = run() {
        eprintln!("error: {e}");
        std::process::exit(e.exit_code());
    }
}
