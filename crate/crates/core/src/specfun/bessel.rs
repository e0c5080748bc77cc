//! Bessel function of the first kind, order zero.

/// J0(x), delegated to the libm implementation (Hart/Cody rational fits).
pub fn bessel_j0(x: f64) -> f64 {
    libm::j0(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    // Σ (−x²/4)^k / (k!)², summed with a running term.
    fn series(x: f64) -> f64 {
        let q = -x * x / 4.0;
        let mut term = 1.0;
        let mut sum = 1.0;
        for k in 1..200 {
            term *= q / (k as f64 * k as f64);
            sum += term;
            if term.abs() < 1e-18 * sum.abs().max(1e-300) && k > 5 {
                break;
            }
        }
        sum
    }

    #[test]
    fn known_values() {
        assert_eq!(bessel_j0(0.0), 1.0);
        assert!((bessel_j0(1.0) - 0.765_197_686_557_966_5).abs() < 1e-15);
        assert!((series(1.0) - 0.765_197_686_557_966_5).abs() < 1e-15);
    }

    #[test]
    fn matches_series_on_grid() {
        for i in 0..=400 {
            let x = -10.0 + 0.05 * i as f64;
            let d = (bessel_j0(x) - series(x)).abs();
            assert!(d < 1e-12, "x={x}: {d}");
            assert_eq!(bessel_j0(x), bessel_j0(-x));
        }
    }

    #[test]
    fn first_zero() {
        let (mut lo, mut hi) = (2.0, 3.0);
        for _ in 0..80 {
            let mid = 0.5 * (lo + hi);
            if series(mid) > 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        assert!((lo - 2.404_826).abs() < 1e-6);
        assert!(bessel_j0(2.404_826).abs() < 1e-6);
    }
}
