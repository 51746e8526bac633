//! Spearman rank correlation with average ranks for ties.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, StudentsT};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorrelationResult {
    pub pairing: String,
    pub rho: f64,
    pub n: usize,
    pub p_value: f64,
}

/// 1-based ranks; tied values share the mean of the positions they span.
pub fn average_ranks(values: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    let mut ranks = vec![0.0; values.len()];
    let mut start = 0;
    while start < order.len() {
        let mut end = start + 1;
        while end < order.len() && values[order[end]] == values[order[start]] {
            end += 1;
        }
        // positions start+1 ..= end
        let rank = (start + 1 + end) as f64 / 2.0;
        for &i in &order[start..end] {
            ranks[i] = rank;
        }
        start = end;
    }
    ranks
}

fn pearson(x: &[f64], y: &[f64]) -> Result<f64> {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (a, b) in x.iter().zip(y) {
        let (dx, dy) = (a - mx, b - my);
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if sxx == 0.0 || syy == 0.0 {
        return Err(Error::invalid("zero rank variance: an input is constant"));
    }
    Ok((sxy / (sxx * syy).sqrt()).clamp(-1.0, 1.0))
}

/// Spearman's ρ: Pearson correlation of the average-rank transforms.
pub fn spearman(x: &[f64], y: &[f64]) -> Result<f64> {
    if x.len() != y.len() {
        return Err(Error::invalid(format!(
            "correlation inputs differ in length ({} vs {})",
            x.len(),
            y.len()
        )));
    }
    if x.len() < 3 {
        return Err(Error::invalid(format!(
            "correlation needs at least 3 observations, got {}",
            x.len()
        )));
    }
    if x.iter().chain(y).any(|v| v.is_nan()) {
        return Err(Error::invalid("correlation input contains NaN"));
    }
    pearson(&average_ranks(x), &average_ranks(y))
}

/// Two-sided p-value of ρ from the t approximation with `n − 2` degrees of
/// freedom. `|ρ| = 1` gives 0.
pub fn spearman_pvalue(rho: f64, n: usize) -> Result<f64> {
    if n < 3 {
        return Err(Error::invalid(format!("p-value needs n ≥ 3, got {n}")));
    }
    if !(-1.0..=1.0).contains(&rho) {
        return Err(Error::invalid(format!("rho {rho} outside [-1, 1]")));
    }
    if rho.abs() == 1.0 {
        return Ok(0.0);
    }
    let df = (n - 2) as f64;
    let t = rho * (df / (1.0 - rho * rho)).sqrt();
    let dist = StudentsT::new(0.0, 1.0, df).expect("df is positive");
    Ok((2.0 * dist.sf(t.abs())).clamp(0.0, 1.0))
}

/// Two-sided permutation p-value: share of `resamples` shuffles of `y`
/// whose |ρ| reaches the observed |ρ|, with the usual +1 correction.
pub fn spearman_permutation_pvalue(x: &[f64], y: &[f64], resamples: usize, seed: u64) -> Result<f64> {
    if resamples == 0 {
        return Err(Error::invalid("permutation test needs at least one resample"));
    }
    let observed = spearman(x, y)?.abs();
    let rx = average_ranks(x);
    let mut ry = average_ranks(y);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut hits = 0usize;
    for _ in 0..resamples {
        ry.shuffle(&mut rng);
        // tolerance keeps permutations that tie the observed value
        if pearson(&rx, &ry)?.abs() >= observed - 1e-12 {
            hits += 1;
        }
    }
    Ok((hits + 1) as f64 / (resamples + 1) as f64)
}

/// ρ and its t-approximation p-value, labelled.
pub fn correlate(pairing: impl Into<String>, x: &[f64], y: &[f64]) -> Result<CorrelationResult> {
    let rho = spearman(x, y)?;
    Ok(CorrelationResult {
        pairing: pairing.into(),
        rho,
        n: x.len(),
        p_value: spearman_pvalue(rho, x.len())?,
    })
}

pub fn write_correlations_csv<W: std::io::Write>(rows: &[CorrelationResult], writer: W) -> Result<()> {
    let mut out = csv::Writer::from_writer(writer);
    let err = |e: csv::Error| Error::invalid(format!("cannot write correlation CSV: {e}"));
    out.write_record(["pairing", "rho", "n", "p_value"]).map_err(err)?;
    for r in rows {
        out.write_record([
            r.pairing.clone(),
            r.rho.to_string(),
            r.n.to_string(),
            r.p_value.to_string(),
        ])
        .map_err(err)?;
    }
    out.flush().map_err(|e| Error::io("<correlation csv>", e))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranks_with_ties() {
        assert_eq!(average_ranks(&[10.0, 20.0, 20.0, 5.0]), vec![2.0, 3.5, 3.5, 1.0]);
        assert_eq!(average_ranks(&[1.0, 1.0, 1.0]), vec![2.0, 2.0, 2.0]);
    }

    #[test]
    fn perfect_monotone() {
        let x = [1.0, 2.0, 3.0, 4.0, 5.0];
        let up = [1.0, 4.0, 9.0, 16.0, 25.0];
        let down = [9.0, 7.0, 3.0, 0.0, -1.0];
        assert_eq!(spearman(&x, &up).unwrap(), 1.0);
        assert_eq!(spearman(&x, &down).unwrap(), -1.0);
    }

    #[test]
    fn degenerate_inputs() {
        assert!(spearman(&[1.0, 2.0], &[1.0, 2.0]).is_err());
        assert!(spearman(&[1.0, 2.0, 3.0], &[1.0, 1.0, 1.0]).is_err());
        assert!(spearman(&[1.0, 2.0, 3.0], &[1.0, 2.0]).is_err());
        assert!(spearman(&[1.0, f64::NAN, 3.0], &[1.0, 2.0, 3.0]).is_err());
    }

    #[test]
    fn pvalue_conventions() {
        assert_eq!(spearman_pvalue(0.0, 12).unwrap(), 1.0);
        assert_eq!(spearman_pvalue(1.0, 12).unwrap(), 0.0);
        assert_eq!(spearman_pvalue(-1.0, 5).unwrap(), 0.0);
        assert!(spearman_pvalue(0.5, 2).is_err());
        assert!(spearman_pvalue(1.5, 10).is_err());
        let p = spearman_pvalue(0.3, 10).unwrap();
        assert!(p > 0.3 && p < 0.5, "{p}");
        assert_eq!(p, spearman_pvalue(-0.3, 10).unwrap());
    }

    #[test]
    fn permutation_pvalue_is_small_for_strong_signal() {
        let x: Vec<f64> = (0..12).map(f64::from).collect();
        let y: Vec<f64> = x.iter().map(|v| v * 2.0 + 1.0).collect();
        let p = spearman_permutation_pvalue(&x, &y, 999, 4).unwrap();
        assert!(p < 0.01, "{p}");
        assert_eq!(p, spearman_permutation_pvalue(&x, &y, 999, 4).unwrap());
    }
}
