//! Mellin–Barnes contour integration for the Meijer G-function.
//!
//! The contour is the vertical line Re s = c inside the strip that separates
//! the poles of Γ(b_j − s), j ≤ m, from those of Γ(1 − a_j + s), j ≤ n.
//! For real parameters and z > 0 the integrand satisfies F(s̄) = conj F(s),
//! so G = (1/π) ∫_0^∞ Re F(c + it) dt.  The half-line integral is computed
//! with the trapezoid rule, halving the step until successive values agree.

use super::cgamma::ln_gamma_c;
use super::gamma::ln_gamma_signed;
use super::meijer::{GBackend, GValue, MeijerGSpec};
use crate::error::{domain, no_convergence, Result};
use num_complex::Complex64;
use std::f64::consts::PI;

/// Width of the c-search window when one side of the strip is unbounded.
const OPEN_WINDOW: f64 = 60.0;
const MAX_LEVELS: usize = 14;
const TAIL_REL: f64 = 1e-18;

/// ln of the gamma ratio at complex s (no z^s factor).
pub(crate) fn ln_kernel(spec: &MeijerGSpec, s: Complex64) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for (j, &bj) in spec.b.iter().enumerate() {
        if j < spec.m {
            acc += ln_gamma_c(bj - s);
        } else {
            acc -= ln_gamma_c(1.0 - bj + s);
        }
    }
    for (j, &aj) in spec.a.iter().enumerate() {
        if j < spec.n {
            acc += ln_gamma_c(1.0 - aj + s);
        } else {
            acc -= ln_gamma_c(aj - s);
        }
    }
    acc
}

/// Kernel value on the real axis; zero where a denominator gamma has a pole.
pub(crate) fn kernel_real(spec: &MeijerGSpec, c: f64) -> f64 {
    let mut ln = 0.0;
    let mut sign = 1.0;
    let num = |x: f64, ln: &mut f64, sign: &mut f64| {
        let (l, s) = ln_gamma_signed(x);
        *ln += l;
        *sign *= s;
    };
    for (j, &bj) in spec.b.iter().enumerate() {
        if j < spec.m {
            num(bj - c, &mut ln, &mut sign);
        } else {
            let x = 1.0 - bj + c;
            if x <= 0.0 && x == x.floor() {
                return 0.0;
            }
            let (l, s) = ln_gamma_signed(x);
            ln -= l;
            sign *= s;
        }
    }
    for (j, &aj) in spec.a.iter().enumerate() {
        if j < spec.n {
            num(1.0 - aj + c, &mut ln, &mut sign);
        } else {
            let x = aj - c;
            if x <= 0.0 && x == x.floor() {
                return 0.0;
            }
            let (l, s) = ln_gamma_signed(x);
            ln -= l;
            sign *= s;
        }
    }
    sign * ln.exp()
}

/// ln|kernel| on the real axis, used to place the contour.
pub(crate) fn ln_abs_kernel_real(spec: &MeijerGSpec, c: f64) -> f64 {
    let mut ln = 0.0;
    for (j, &bj) in spec.b.iter().enumerate() {
        if j < spec.m {
            ln += ln_gamma_signed(bj - c).0;
        } else {
            ln -= ln_gamma_signed(1.0 - bj + c).0;
        }
    }
    for (j, &aj) in spec.a.iter().enumerate() {
        if j < spec.n {
            ln += ln_gamma_signed(1.0 - aj + c).0;
        } else {
            ln -= ln_gamma_signed(aj - c).0;
        }
    }
    ln
}

/// The separating strip (lo, hi); either end may be infinite.
pub(crate) fn strip(spec: &MeijerGSpec) -> (f64, f64) {
    let lo = spec.a[..spec.n]
        .iter()
        .map(|&a| a - 1.0)
        .fold(f64::NEG_INFINITY, f64::max);
    let hi = spec.b[..spec.m].iter().copied().fold(f64::INFINITY, f64::min);
    (lo, hi)
}

/// Candidate abscissae inside the strip, kept away from its edges.
pub(crate) fn strip_grid(lo: f64, hi: f64, points: usize) -> Vec<f64> {
    let (lo, hi) = match (lo.is_finite(), hi.is_finite()) {
        (true, true) => (lo, hi),
        (true, false) => (lo, lo + OPEN_WINDOW),
        (false, true) => (hi - OPEN_WINDOW, hi),
        (false, false) => (-OPEN_WINDOW / 2.0, OPEN_WINDOW / 2.0),
    };
    let w = hi - lo;
    let margin = (0.01 * w).min(0.005);
    (0..points)
        .map(|i| lo + margin + (w - 2.0 * margin) * i as f64 / (points - 1) as f64)
        .collect()
}

/// Picks c in the strip minimising ln|kernel(c)| + c·ln z.
fn place_contour(spec: &MeijerGSpec, lnz: f64) -> Result<f64> {
    let (lo, hi) = strip(spec);
    if lo.is_finite() && hi.is_finite() && !(hi - lo > 1e-9) {
        return Err(domain(
            "meijer_g_contour",
            format!("no separating strip: left poles reach {lo}, right poles start at {hi}"),
        ));
    }
    if spec.m == 0 && spec.n == 0 {
        return Err(domain("meijer_g_contour", "m = n = 0 has no contour"));
    }
    let mut best = (f64::INFINITY, f64::NAN);
    for c in strip_grid(lo, hi, 600) {
        let v = ln_abs_kernel_real(spec, c) + c * lnz;
        if v < best.0 {
            best = (v, c);
        }
    }
    if !best.1.is_finite() {
        return Err(no_convergence("contour", "could not place contour"));
    }
    Ok(best.1)
}

pub(crate) fn meijer_g_contour_reduced(spec: &MeijerGSpec, z: f64) -> Result<GValue> {
    let lnz = z.ln();
    let c = place_contour(spec, lnz)?;
    let (lo, hi) = strip(spec);
    let dist = (c - lo).min(hi - c);
    let f = |t: f64| -> (f64, f64) {
        if t == 0.0 {
            let v = kernel_real(spec, c) * (c * lnz).exp();
            return (v, v.abs());
        }
        let s = Complex64::new(c, t);
        let w = (ln_kernel(spec, s) + s * lnz).exp();
        (w.re, w.norm())
    };
    let (value, abs_int, diff) = half_line_trapezoid(&f, (0.5 * dist).min(0.25))?;
    let value = value / PI;
    let abs_int = abs_int / PI;
    let err = diff / PI + 16.0 * f64::EPSILON * abs_int;
    let est = if value == 0.0 {
        f64::INFINITY
    } else {
        err / value.abs()
    };
    Ok(GValue {
        value,
        backend: GBackend::Contour,
        est_rel_err: est,
        perturbed: false,
    })
}

/// ∫_0^∞ f(t) dt for an exponentially decaying integrand returning (value, |value|).
/// Returns (integral, ∫|f|, last step difference).
pub(crate) fn half_line_trapezoid(f: &dyn Fn(f64) -> (f64, f64), h0: f64) -> Result<(f64, f64, f64)> {
    let (f0, a0) = f(0.0);
    let mut peak = a0;
    // Sum over t = offset + j·step, j ≥ 0, stopping once the tail is negligible.
    let sweep = |offset: f64, step: f64, peak: &mut f64| -> Result<(f64, f64)> {
        let mut s = 0.0;
        let mut sa = 0.0;
        let mut quiet = 0;
        let mut j = 0usize;
        loop {
            let t = offset + step * j as f64;
            let (v, a) = f(t);
            if !v.is_finite() {
                return Err(no_convergence("contour", format!("non-finite integrand at t={t}")));
            }
            s += v;
            sa += a;
            if a > *peak {
                *peak = a;
            }
            if a <= TAIL_REL * *peak && t > 1.0 {
                quiet += 1;
                if quiet >= 4 {
                    break;
                }
            } else {
                quiet = 0;
            }
            j += 1;
            if t > 1e4 {
                return Err(no_convergence("contour", "integrand does not decay along the line"));
            }
        }
        Ok((s, sa))
    };
    let mut h = h0;
    let (s1, a1) = sweep(h, h, &mut peak)?;
    let mut sum = 0.5 * f0 + s1;
    let mut asum = 0.5 * a0 + a1;
    let mut prev = sum * h;
    for _ in 0..MAX_LEVELS {
        let (sm, am) = sweep(0.5 * h, h, &mut peak)?;
        sum += sm;
        asum += am;
        h *= 0.5;
        let cur = sum * h;
        let diff = (cur - prev).abs();
        let aint = asum * h;
        if diff <= 1e-13 * cur.abs() || diff <= 1e-16 * aint {
            return Ok((cur, aint, diff));
        }
        prev = cur;
    }
    Err(no_convergence("contour", "trapezoid refinement did not settle"))
}
