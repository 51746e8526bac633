// NPMI, coherence, diversity and quality of a handful of topics.
//
// `cargo run --example coherence`

use dtm_eval::corpus::{count_cooccurrences, TimedCorpus};
use dtm_eval::static_measures::{
    diversity_unique_fraction, npmi_pair, topic_coherence, topic_diversity, topic_quality,
};
use dtm_eval::topics::TopicWordList;

pub fn run() -> dtm_eval::Result<()> {
    let corpus = TimedCorpus::from_token_lists(vec![
        (2001, vec!["neural", "network", "training", "layer"]),
        (2001, vec!["network", "layer", "hidden", "training"]),
        (2001, vec!["robot", "arm", "motion", "control"]),
        (2001, vec!["robot", "control", "sensor", "motion"]),
        (2001, vec!["network", "robot", "control", "training"]),
    ])?;
    let stats = count_cooccurrences(&corpus, 10)?;
    let eps = 1e-12;

    println!("npmi(network, layer) = {:.4}", npmi_pair(&stats, "network", "layer", eps).unwrap_or(f64::NAN));
    println!("npmi(network, arm)   = {:.4}", npmi_pair(&stats, "network", "arm", eps).unwrap_or(f64::NAN));

    let topics = [
        TopicWordList::new(["network", "layer", "training"])?,
        TopicWordList::new(["robot", "motion", "control"])?,
        TopicWordList::new(["robot", "network", "hidden"])?,
    ];
    let mut phi = Vec::new();
    let mut div = Vec::new();
    for (k, topic) in topics.iter().enumerate() {
        let others: Vec<&TopicWordList> =
            topics.iter().enumerate().filter(|&(j, _)| j != k).map(|(_, t)| t).collect();
        let c = topic_coherence(&stats, topic, eps)?;
        let d = topic_diversity(topic, &others)?;
        println!("topic {k} {:?}: coherence {:.4}, diversity {:.3}", topic.words(), c.value, d);
        phi.push(c.value);
        div.push(d);
    }
    let refs: Vec<&TopicWordList> = topics.iter().collect();
    println!("unique-word diversity {:.3}", diversity_unique_fraction(&refs)?);
    println!("topic quality {:.4}", topic_quality(&phi, &div)?);
    Ok(())
}

#[allow(dead_code)]
fn main() {
    if let Err(e) = run() {
        eprintln!("error: {e}");
        std::process::exit(e.exit_code());
    }
}
