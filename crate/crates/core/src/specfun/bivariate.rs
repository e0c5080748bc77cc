//! Bivariate Meijer G-function by double Mellin–Barnes integration.
//!
//! ```text
//! G2[x, y] = (2πi)^{-2} ∫∫ Γ(1 − e + s + t) · Φ1(s) · Φ2(t) · x^s · y^t ds dt
//! ```
//!
//! where Φ1, Φ2 are the gamma ratios of two univariate G instances.  This is
//! the object obtained from ∫_0^∞ u^{E−1} e^{−Ku} G1(x' u) G2(y' u) du with
//! e = 1 − E, x = x'/K, y = y'/K, which is how the third BER integral is
//! written in closed form.

use super::cgamma::ln_gamma_c;
use super::contour::{kernel_real, ln_abs_kernel_real, ln_kernel, strip, strip_grid};
use super::gamma::ln_gamma_signed;
use super::meijer::{GBackend, GValue, MeijerGSpec};
use crate::error::{domain, no_convergence, Result};
use num_complex::Complex64;
use std::f64::consts::PI;

const TAIL_REL: f64 = 1e-17;
const MIN_STEP: f64 = 0.02;

/// Outer parameter `e` plus the two inner univariate G instances.
#[derive(Debug, Clone, PartialEq)]
pub struct BivariateGSpec {
    pub e: f64,
    pub first: MeijerGSpec,
    pub second: MeijerGSpec,
}

impl BivariateGSpec {
    pub fn new(e: f64, first: MeijerGSpec, second: MeijerGSpec) -> Result<Self> {
        if !e.is_finite() {
            return Err(domain("BivariateGSpec::new", "outer parameter must be finite"));
        }
        Ok(Self {
            e,
            first: first.reduced(),
            second: second.reduced(),
        })
    }
}

/// Evaluates G2[x, y] to relative tolerance `tol` (the default callers use 1e-9).
pub fn meijer_g_bivariate(spec: &BivariateGSpec, x: f64, y: f64) -> Result<GValue> {
    meijer_g_bivariate_tol(spec, x, y, 1e-9)
}

pub fn meijer_g_bivariate_tol(spec: &BivariateGSpec, x: f64, y: f64, tol: f64) -> Result<GValue> {
    for (name, v) in [("x", x), ("y", y)] {
        if !(v > 0.0) || !v.is_finite() {
            return Err(domain("meijer_g_bivariate", format!("{name} must be positive, got {v}")));
        }
    }
    let (lx, ly) = (x.ln(), y.ln());
    let (c1, c2) = place(spec, lx, ly)?;
    let d1 = {
        let (lo, hi) = strip(&spec.first);
        (c1 - lo).min(hi - c1)
    };
    let d2 = {
        let (lo, hi) = strip(&spec.second);
        (c2 - lo).min(hi - c2)
    };
    let d3 = 1.0 - spec.e + c1 + c2;
    let mut h = (0.5 * d1.min(d2).min(d3)).min(0.4);

    let mut prev: Option<(f64, f64)> = None;
    while h >= MIN_STEP * 0.99 || prev.is_none() {
        let (v, a) = grid_sum(spec, c1, c2, lx, ly, h)?;
        if let Some((pv, _)) = prev {
            let diff = (v - pv).abs();
            if diff <= tol * v.abs() || diff <= 1e-15 * a {
                let err = diff + 32.0 * f64::EPSILON * a;
                return Ok(GValue {
                    value: v,
                    backend: GBackend::Contour,
                    est_rel_err: if v == 0.0 { f64::INFINITY } else { err / v.abs() },
                    perturbed: false,
                });
            }
        }
        prev = Some((v, a));
        h *= 0.5;
    }
    Err(no_convergence(
        "bivariate contour",
        format!("step refinement did not reach rel tol {tol:.0e} at x={x}, y={y}"),
    ))
}

/// Chooses (c1, c2) in the product of the two strips with Re(1 − e + s + t) > 0.
fn place(spec: &BivariateGSpec, lx: f64, ly: f64) -> Result<(f64, f64)> {
    let (lo1, hi1) = strip(&spec.first);
    let (lo2, hi2) = strip(&spec.second);
    if !(hi1 > lo1) || !(hi2 > lo2) {
        return Err(domain("meijer_g_bivariate", "an inner factor has no separating strip"));
    }
    let g1 = strip_grid(lo1, hi1, 80);
    let g2 = strip_grid(lo2, hi2, 80);
    let mut best = (f64::INFINITY, f64::NAN, f64::NAN);
    for &c1 in &g1 {
        let k1 = ln_abs_kernel_real(&spec.first, c1) + c1 * lx;
        for &c2 in &g2 {
            let w = 1.0 - spec.e + c1 + c2;
            if w < 0.05 {
                continue;
            }
            let v = k1 + ln_abs_kernel_real(&spec.second, c2) + c2 * ly + ln_gamma_signed(w).0;
            if v < best.0 {
                best = (v, c1, c2);
            }
        }
    }
    if !best.1.is_finite() {
        return Err(domain(
            "meijer_g_bivariate",
            "strips admit no contour with Re(1 − e + s + t) > 0",
        ));
    }
    Ok((best.1, best.2))
}

/// Tabulates one inner kernel (times its power of the argument) along t = k·h
/// for k ≥ 0 (and k < 0 when `both` is set), until it is negligible.
fn axis(spec: &MeijerGSpec, c: f64, lnarg: f64, h: f64, both: bool) -> (Vec<Complex64>, Vec<Complex64>) {
    let at = |t: f64| -> Complex64 {
        if t == 0.0 {
            Complex64::new(kernel_real(spec, c) * (c * lnarg).exp(), 0.0)
        } else {
            let s = Complex64::new(c, t);
            (ln_kernel(spec, s) + s * lnarg).exp()
        }
    };
    let run = |sign: f64, start: usize| -> Vec<Complex64> {
        let mut out = Vec::new();
        let mut peak = 0.0f64;
        let mut quiet = 0;
        let mut k = start;
        loop {
            let v = at(sign * k as f64 * h);
            peak = peak.max(v.norm());
            out.push(v);
            if v.norm() <= TAIL_REL * peak && k as f64 * h > 1.0 {
                quiet += 1;
                if quiet >= 3 {
                    break;
                }
            } else {
                quiet = 0;
            }
            k += 1;
            if k as f64 * h > 400.0 {
                break;
            }
        }
        out
    };
    let pos = run(1.0, 0);
    let neg = if both { run(-1.0, 1) } else { Vec::new() };
    (pos, neg)
}

/// Returns (G2 estimate, ∫∫|F| estimate) for step h.
fn grid_sum(
    spec: &BivariateGSpec,
    c1: f64,
    c2: f64,
    lx: f64,
    ly: f64,
    h: f64,
) -> Result<(f64, f64)> {
    let (p1, n1) = axis(&spec.first, c1, lx, h, true);
    let (p2, _) = axis(&spec.second, c2, ly, h, false);
    let w0 = 1.0 - spec.e + c1 + c2;
    let mut total = 0.0;
    let mut abs_total = 0.0;
    // t1 runs over both signs: index i ≥ 0 → t1 = i·h from p1, i < 0 → n1.
    let t1s: Vec<(f64, Complex64)> = p1
        .iter()
        .enumerate()
        .map(|(i, &v)| (i as f64 * h, v))
        .chain(n1.iter().enumerate().map(|(i, &v)| (-((i + 1) as f64) * h, v)))
        .collect();
    let peak1 = t1s.iter().map(|(_, v)| v.norm()).fold(0.0, f64::max);
    let peak2 = p2.iter().map(|v| v.norm()).fold(0.0, f64::max);
    let cut = TAIL_REL * peak1 * peak2;
    for (k2, &v2) in p2.iter().enumerate() {
        let t2 = k2 as f64 * h;
        let wt = if k2 == 0 { 0.5 } else { 1.0 };
        for &(t1, v1) in &t1s {
            let prod = v1 * v2;
            if prod.norm() < cut {
                continue;
            }
            let g = ln_gamma_c(Complex64::new(w0, t1 + t2)).exp();
            let f = g * prod;
            if !f.re.is_finite() {
                return Err(no_convergence("bivariate contour", "non-finite integrand"));
            }
            total += wt * f.re;
            abs_total += wt * f.norm();
        }
    }
    let scale = h * h / (2.0 * PI * PI);
    Ok((total * scale, abs_total * scale))
}

#[cfg(test)]
mod tests {
    use super::super::meijer::meijer_g;
    use super::*;

    #[test]
    fn exponential_second_factor_reduces_to_univariate() {
        // Φ2 = Γ(−t) ⇒ G2[x, y] = (1 + y)^{e−1} G^{1,2}_{2,2}(x/(1+y) | e, 1; τ, 0).
        let tau = 3.0;
        let a = 0.5;
        let e = 1.0 - a;
        let first = MeijerGSpec::new(1, 1, vec![1.0], vec![tau, 0.0]).unwrap();
        let second = MeijerGSpec::new(1, 0, vec![], vec![0.0]).unwrap();
        let spec = BivariateGSpec::new(e, first, second).unwrap();
        for &(x, y) in &[(0.7, 0.3), (2.0, 1.5)] {
            let got = meijer_g_bivariate_tol(&spec, x, y, 1e-11).unwrap();
            let uni = MeijerGSpec::new(1, 2, vec![e, 1.0], vec![tau, 0.0]).unwrap();
            let expect = (1.0 + y).powf(e - 1.0) * meijer_g(&uni, x / (1.0 + y)).unwrap();
            let rel = ((got.value - expect) / expect).abs();
            assert!(rel < 1e-8, "x={x} y={y}: {} vs {expect} ({rel:.2e})", got.value);
        }
    }
}
