//! Compensated accumulation helpers.

/// Neumaier-compensated sum of the terms in ascending order of magnitude.
pub(crate) fn sorted_sum(terms: &mut [f64]) -> f64 {
    terms.sort_by(|a, b| a.abs().total_cmp(&b.abs()));
    neumaier(terms.iter().copied())
}

pub(crate) fn neumaier(terms: impl IntoIterator<Item = f64>) -> f64 {
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    for t in terms {
        let s = sum + t;
        if sum.abs() >= t.abs() {
            comp += (sum - s) + t;
        } else {
            comp += (t - s) + sum;
        }
        sum = s;
    }
    sum + comp
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn compensation_recovers_small_terms() {
        let mut v = vec![1e16, 1.0, -1e16, 1.0];
        assert_eq!(sorted_sum(&mut v), 2.0);
    }
}
