/// Arithmetic mean that does not depend on the order of `values`.
///
/// Values are accumulated in ascending order, so any permutation of the
/// same multiset yields a bit-identical result. The running-mean update
/// returns `c` exactly for a constant input. Empty input gives `None`.
pub fn order_free_mean(values: &[f64]) -> Option<f64> {
    if values.is_empty() {
        return None;
    }
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let mut m = 0.0;
    for (i, v) in sorted.iter().enumerate() {
        m += (v - m) / (i + 1) as f64;
    }
    Some(m)
}

pub fn mean(values: &[f64]) -> Option<f64> {
    if values.is_empty() {
        None
    } else {
        Some(values.iter().sum::<f64>() / values.len() as f64)
    }
}

/// Sample standard deviation (n − 1 denominator); 0 for fewer than two values.
pub fn sample_std(values: &[f64]) -> f64 {
    if values.len() < 2 {
        return 0.0;
    }
    let m = mean(values).unwrap_or(0.0);
    let ss: f64 = values.iter().map(|v| (v - m) * (v - m)).sum();
    (ss / (values.len() - 1) as f64).sqrt()
}
