//! Complex log-gamma for Mellin–Barnes integrands.
//!
//! Only `exp` of sums of these logarithms is ever used, so the branch of the
//! imaginary part is irrelevant.

use num_complex::Complex64;
use std::f64::consts::PI;

const G: f64 = 607.0 / 128.0;
// Godfrey's coefficients for g = 607/128, n = 15.
const COEF: [f64; 15] = [
    0.999_999_999_999_997_1,
    57.156_235_665_862_92,
    -59.597_960_355_475_49,
    14.136_097_974_741_747,
    -0.491_913_816_097_620_2,
    0.339_946_499_848_118_9e-4,
    0.465_236_289_270_485_8e-4,
    -0.983_744_753_048_795_6e-4,
    0.158_088_703_224_912_5e-3,
    -0.210_264_441_724_104_9e-3,
    0.217_439_618_115_212_6e-3,
    -0.164_318_106_536_763_9e-3,
    0.844_182_239_838_527_4e-4,
    -0.261_908_384_015_814_1e-4,
    0.368_991_826_595_316_2e-5,
];
const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;

/// ln Γ(z) for complex z away from the non-positive integers.
pub fn ln_gamma_c(z: Complex64) -> Complex64 {
    if z.re < 0.5 {
        // Reflection: Γ(z)Γ(1−z) = π / sin(πz).
        Complex64::new(PI.ln(), 0.0) - ln_sin_pi(z) - ln_gamma_c(Complex64::new(1.0, 0.0) - z)
    } else {
        let z = z - 1.0;
        let mut x = Complex64::new(COEF[0], 0.0);
        for (i, &c) in COEF.iter().enumerate().skip(1) {
            x += c / (z + i as f64);
        }
        let t = z + G + 0.5;
        LN_SQRT_2PI + (z + 0.5) * t.ln() - t + x.ln()
    }
}

/// ln sin(πz), written to avoid overflow of cosh/sinh for large |Im z|.
fn ln_sin_pi(z: Complex64) -> Complex64 {
    let i = Complex64::i();
    if z.im.abs() < 1.0 {
        return (z * PI).sin().ln();
    }
    if z.im > 0.0 {
        // sin(πz) = e^{−iπz}(1 − e^{2iπz}) / (−2i)
        -i * PI * z + (1.0 - (2.0 * i * PI * z).exp()).ln() - Complex64::new(0.0, -2.0).ln()
    } else {
        // sin(πz) = e^{iπz}(1 − e^{−2iπz}) / (2i)
        i * PI * z + (1.0 - (-2.0 * i * PI * z).exp()).ln() - Complex64::new(0.0, 2.0).ln()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn real_axis_matches_libm() {
        for &x in &[0.1, 0.5, 1.0, 2.5, 7.3, 30.0, -0.5, -2.7, -10.3] {
            let (lg, sign) = libm::lgamma_r(x);
            let v = ln_gamma_c(c(x, 0.0)).exp();
            let expect = sign as f64 * lg.exp();
            assert!(((v.re - expect) / expect).abs() < 1e-13, "x={x}");
            assert!(v.im.abs() < 1e-12 * expect.abs());
        }
    }

    #[test]
    fn recurrence_and_modulus() {
        // Γ(z+1) = zΓ(z); |Γ(1/2 + iy)|² = π / cosh(πy).
        for &(re, im) in &[(0.3, 2.0), (-3.2, 5.0), (4.0, -12.0), (0.5, 40.0), (-1.5, -25.0)] {
            let z = c(re, im);
            let lhs = ln_gamma_c(z + 1.0).exp();
            let rhs = z * ln_gamma_c(z).exp();
            assert!((lhs - rhs).norm() < 1e-12 * rhs.norm(), "z={z}");
        }
        for &y in &[0.0, 1.0, 3.0, 20.0, 60.0] {
            let m2 = (2.0 * ln_gamma_c(c(0.5, y)).re).exp();
            let expect = PI / (PI * y).cosh();
            assert!(((m2 - expect) / expect).abs() < 1e-12, "y={y}");
        }
    }
}
