// TTC, TTS, TTQ, the two baselines and DTQ of the bundled topics, plus the
// smoothness of a published topic timeline.
//
// `cargo run --example temporal_measures`

use std::fs::File;
use std::io::BufReader;
use std::path::PathBuf;

use dtm_eval::corpus::{count_cooccurrences, load_corpus};
use dtm_eval::temporal::{bts, temporal_report, tts};
use dtm_eval::topics::{read_topics, DynamicTopics};

fn open(name: &str) -> dtm_eval::Result<BufReader<File>> {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data").join(name);
    File::open(&path).map(BufReader::new).map_err(|e| dtm_eval::Error::io(&path, e))
}

pub fn run() -> dtm_eval::Result<()> {
    let corpus = load_corpus(open("corpus.jsonl")?)?;
    let topics = read_topics(open("topics.json")?)?;
    let stats = count_cooccurrences(&corpus, 10)?;
    let report = temporal_report(&stats, &topics, 2, 1e-12)?;
    for t in &report.topics {
        println!(
            "topic {}: TTC {:?} TTS {:?} TTQ {:.4} B-TC {:.4} B-TS {:.4}",
            t.topic, t.ttc, t.tts, t.ttq, t.btc, t.bts
        );
    }
    println!("mean TQ {:.4}, mean TTQ {:.4}, DTQ {:.4}", report.mean_tq, report.mean_ttq, report.dtq);

    // a robotics topic from 1996 to 1999, ten words per year
    let timeline = DynamicTopics::from_grid(
        vec![1996, 1997, 1998, 1999],
        &[vec![
            "position hand task user location based object body target robot",
            "object position hand task robot user direction location right coordinates",
            "position hand human line movement direction motor task object location",
            "spatial localization location light position human temporal subjects robot subject",
        ]
        .into_iter()
        .map(|s| s.split_whitespace().collect::<Vec<_>>())
        .collect::<Vec<_>>()],
    )?;
    let slices = timeline.sequence(0);
    for (t, pair) in slices.windows(2).enumerate() {
        println!(
            "{} -> {}: TTS {:.1}",
            timeline.timestamps()[t],
            timeline.timestamps()[t + 1],
            tts(&[&pair[0], &pair[1]])?
        );
    }
    println!("B-TS over the whole timeline: {:.3}", bts(slices)?);
    Ok(())
}

#[allow(dead_code)]
fn main() {
    if let Err(e) = run() {
        eprintln!("error: {e}");
        std::process::exit(e.exit_code());
    }
}
