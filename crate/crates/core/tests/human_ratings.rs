mod common;

use std::collections::BTreeMap;

use common::{eighteen_raters, oracle_spearman, FIVE_TOPIC_MEASURES};
use dtm_eval::correlation::{average_ranks, spearman, spearman_pvalue};
use dtm_eval::ratings::{
    aggregate_ratings, correlate_measures, filter_respondents, read_measures, read_ratings,
    ExclusionReason, FilterRules, Rating, RatingsTable,
};
use proptest::prelude::*;

#[test]
fn eighteen_rater_filter_keeps_fifteen() {
    let table = RatingsTable::new(eighteen_raters()).unwrap();
    let out = filter_respondents(&table, "C", FilterRules::default()).unwrap();
    assert_eq!(out.valid.raters().len(), 15);
    let mut report: Vec<(String, ExclusionReason)> =
        out.exclusions.iter().map(|e| (e.rater_id.clone(), e.reason)).collect();
    report.sort();
    assert_eq!(
        report,
        vec![
            ("r16".into(), ExclusionReason::Duration),
            ("r17".into(), ExclusionReason::Control),
            ("r18".into(), ExclusionReason::Control),
        ]
    );
}

#[test]
fn aggregates_match_group_by() {
    let table = RatingsTable::new(eighteen_raters()).unwrap();
    let valid = filter_respondents(&table, "C", FilterRules::default()).unwrap().valid;
    let got = aggregate_ratings(&valid);

    let mut groups: BTreeMap<String, Vec<&Rating>> = BTreeMap::new();
    for r in valid.rows() {
        groups.entry(r.topic_id.clone()).or_default().push(r);
    }
    assert_eq!(got.len(), groups.len());
    for (topic, rows) in groups {
        let n = rows.len() as f64;
        let a = &got[&topic];
        assert_eq!(a.respondents, 15);
        assert!((a.relatedness - rows.iter().map(|r| r.relatedness as f64).sum::<f64>() / n).abs() < 1e-15);
        assert!((a.smoothness - rows.iter().map(|r| r.smoothness as f64).sum::<f64>() / n).abs() < 1e-15);
        assert!((a.familiarity - rows.iter().map(|r| r.familiarity as f64).sum::<f64>() / n).abs() < 1e-15);
    }
}

#[test]
fn smoothness_tracks_tts_better_than_baseline() {
    let table = RatingsTable::new(eighteen_raters()).unwrap();
    let valid = filter_respondents(&table, "C", FilterRules::default()).unwrap().valid;
    let measures = read_measures(FIVE_TOPIC_MEASURES.as_bytes()).unwrap();
    let results = correlate_measures(&aggregate_ratings(&valid), &measures).unwrap();
    let rho = |name: &str| results.iter().find(|c| c.pairing == name).unwrap().rho;
    // one adjacent swap among five ranks: 1 − 6·2/(5·24)
    assert_eq!(rho("smoothness~tts"), 1.0);
    assert!((rho("smoothness~bts") - 0.9).abs() < 1e-12);
    assert_eq!(rho("relatedness~ttc"), 1.0);
    assert!((rho("relatedness~btc") - 0.9).abs() < 1e-12);
    assert!(rho("smoothness~tts") > rho("smoothness~bts"));
}

#[test]
fn ratings_round_trip_through_csv() {
    let rows = eighteen_raters();
    let table = read_ratings(common::ratings_csv(&rows).as_bytes()).unwrap();
    assert_eq!(table.rows(), rows.as_slice());
}

#[test]
fn bad_ratings_report_their_line() {
    let csv = "rater_id,topic_id,relatedness,smoothness,familiarity,duration_seconds,is_control\n\
               r1,T1,1,1,1,10,false\n\
               r1,T2,x,1,1,10,false\n";
    match read_ratings(csv.as_bytes()) {
        Err(dtm_eval::Error::Parse { line, .. }) => assert_eq!(line, 3),
        other => panic!("{other:?}"),
    }
}

#[test]
fn tied_example_matches_oracle() {
    let x = [1.0, 2.0, 2.0, 4.0];
    let y = [1.0, 3.0, 2.0, 4.0];
    assert_eq!(average_ranks(&x), vec![1.0, 2.5, 2.5, 4.0]);
    assert!((spearman(&x, &y).unwrap() - oracle_spearman(&x, &y)).abs() < 1e-12);
}

/// Student t density with 8 degrees of freedom:
/// Γ(9/2) / (√(8π) Γ(4)) · (1 + t²/8)^(−9/2), Γ(9/2) = 105√π/16, Γ(4) = 6.
fn t8_pdf(t: f64) -> f64 {
    let norm = (105.0 * std::f64::consts::PI.sqrt() / 16.0) / ((8.0 * std::f64::consts::PI).sqrt() * 6.0);
    norm * (1.0 + t * t / 8.0).powf(-4.5)
}

#[test]
fn pvalue_matches_integrated_density() {
    let (rho, n) = (0.9, 10);
    let t = rho * (8.0f64 / (1.0 - rho * rho)).sqrt();
    // composite Simpson over [0, t]
    let m = 20_000;
    let h = t / m as f64;
    let mut s = t8_pdf(0.0) + t8_pdf(t);
    for i in 1..m {
        s += if i % 2 == 1 { 4.0 } else { 2.0 } * t8_pdf(i as f64 * h);
    }
    let central = s * h / 3.0;
    let oracle = 1.0 - 2.0 * central;
    let got = spearman_pvalue(rho, n).unwrap();
    assert!((got - oracle).abs() < 1e-9, "{got} vs {oracle}");
    assert!(got < 0.001 && got > 0.0001);
}

fn ratings_strategy() -> impl Strategy<Value = Vec<Rating>> {
    prop::collection::vec(
        (prop::collection::vec((1u8..=3, 1u8..=3, 1.0f64..100.0), 3), 1u8..=3, 1.0f64..100.0),
        3..14,
    )
    .prop_map(|raters| {
        let mut rows = Vec::new();
        for (i, (topics, control, control_time)) in raters.into_iter().enumerate() {
            for (j, (rel, smooth, dur)) in topics.into_iter().enumerate() {
                rows.push(Rating {
                    rater_id: format!("r{i}"),
                    topic_id: format!("T{j}"),
                    relatedness: rel,
                    smoothness: smooth,
                    familiarity: 2,
                    duration_seconds: dur,
                    is_control: false,
                });
            }
            rows.push(Rating {
                rater_id: format!("r{i}"),
                topic_id: "C".into(),
                relatedness: if control == 3 { 2 } else { 1 },
                smoothness: 1,
                familiarity: 1,
                duration_seconds: control_time,
                is_control: true,
            });
        }
        rows
    })
}

fn tied_vectors() -> impl Strategy<Value = (Vec<f64>, Vec<f64>)> {
    (3usize..40).prop_flat_map(|n| {
        (
            prop::collection::vec((0i32..8).prop_map(f64::from), n),
            prop::collection::vec(-50.0f64..50.0, n),
        )
    })
}

proptest! {
    #[test]
    fn filtering_is_idempotent(rows in ratings_strategy()) {
        let table = RatingsTable::new(rows).unwrap();
        if let Ok(once) = filter_respondents(&table, "C", FilterRules::default()) {
            let twice = filter_respondents(&once.valid, "C", FilterRules::default()).unwrap();
            prop_assert!(twice.exclusions.is_empty());
            prop_assert_eq!(twice.valid, once.valid);
        }
    }

    #[test]
    fn aggregation_ignores_row_order(rows in ratings_strategy(), seed in any::<u64>()) {
        use rand::seq::SliceRandom;
        let mut shuffled = rows.clone();
        shuffled.shuffle(&mut common::rng(seed));
        let a = aggregate_ratings(&RatingsTable::new(rows).unwrap());
        let b = aggregate_ratings(&RatingsTable::new(shuffled).unwrap());
        prop_assert_eq!(a, b);
    }

    #[test]
    fn spearman_invariances((x, y) in tied_vectors()) {
        let constant = |v: &[f64]| v.iter().all(|a| *a == v[0]);
        prop_assume!(!constant(&x) && !constant(&y));
        let rho = spearman(&x, &y).unwrap();
        prop_assert!((rho - oracle_spearman(&x, &y)).abs() < 1e-12);
        prop_assert_eq!(spearman(&y, &x).unwrap(), rho);
        let cubed: Vec<f64> = x.iter().map(|v| v.powi(3) + 7.0).collect();
        let exp: Vec<f64> = y.iter().map(|v| (v / 10.0).exp()).collect();
        prop_assert_eq!(spearman(&cubed, &exp).unwrap(), rho);
        let p = spearman_pvalue(rho, x.len()).unwrap();
        prop_assert!((0.0..=1.0).contains(&p));
    }
}
