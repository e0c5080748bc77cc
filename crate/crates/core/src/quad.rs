//! Adaptive Gauss–Kronrod (10/21-point) quadrature.
//!
//! Used as the independent reference for the closed forms: the SR-link CDF
//! double integral, the FSO CDF/PDF consistency check, and the BER
//! integrals.  Semi-infinite ranges go through x = a + s·t/(1 − t).

use crate::error::{no_convergence, Result};
use std::cmp::Ordering;
use std::collections::BinaryHeap;

// Kronrod abscissae (positive half, descending) and weights; every other
// abscissa starting at index 1 is a 10-point Gauss node.
const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689,
    0.973_906_528_517_171_720_077_964_012_084,
    0.930_157_491_355_708_226_001_207_180_060,
    0.865_063_366_688_984_510_732_096_688_423,
    0.780_817_726_586_416_897_063_717_578_345,
    0.679_409_568_299_024_406_234_327_365_115,
    0.562_757_134_668_604_683_339_000_099_273,
    0.433_395_394_129_247_190_799_265_943_166,
    0.294_392_862_701_460_198_131_126_603_104,
    0.148_874_338_981_631_210_884_826_001_130,
    0.0,
];
const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062,
    0.032_558_162_307_964_727_478_818_972_459,
    0.054_755_896_574_351_996_031_381_300_245,
    0.075_039_674_810_919_952_767_043_140_916,
    0.093_125_454_583_697_605_535_065_465_083,
    0.109_387_158_802_297_641_899_210_590_326,
    0.123_491_976_262_065_851_077_600_525_478,
    0.134_709_217_311_473_325_928_054_001_772,
    0.142_775_938_577_060_080_797_094_273_139,
    0.147_739_104_901_338_491_374_841_515_972,
    0.149_445_554_002_916_905_664_936_468_390,
];
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893,
    0.149_451_349_150_580_593_145_776_339_658,
    0.219_086_362_515_982_043_995_534_934_228,
    0.269_266_719_309_996_355_091_226_921_569,
    0.295_524_224_714_752_870_173_892_994_651,
];

/// Absolute/relative targets and the evaluation budget.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    pub abs: f64,
    pub rel: f64,
    pub max_evals: usize,
}

impl Default for Tolerance {
    fn default() -> Self {
        Self {
            abs: 1e-12,
            rel: 1e-9,
            max_evals: 1_000_000,
        }
    }
}

impl Tolerance {
    pub fn new(abs: f64, rel: f64) -> Self {
        Self {
            abs,
            rel,
            ..Self::default()
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult {
    pub value: f64,
    pub abs_err: f64,
    pub evals: usize,
}

struct Segment {
    a: f64,
    b: f64,
    value: f64,
    err: f64,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.err == other.err
    }
}
impl Eq for Segment {}
impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        self.err.total_cmp(&other.err)
    }
}

/// One 21-point Kronrod rule with the QUADPACK error heuristic.
fn qk21(f: &mut dyn FnMut(f64) -> f64, a: f64, b: f64) -> (f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut resg = 0.0;
    let mut resk = WGK[10] * fc;
    let mut resabs = resk.abs();
    let mut fv1 = [0.0; 10];
    let mut fv2 = [0.0; 10];
    for j in 0..10 {
        let dx = half * XGK[j];
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        fv1[j] = f1;
        fv2[j] = f2;
        resk += WGK[j] * (f1 + f2);
        resabs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            resg += WG[j / 2] * (f1 + f2);
        }
    }
    let mean = 0.5 * resk;
    let mut resasc = WGK[10] * (fc - mean).abs();
    for j in 0..10 {
        resasc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }
    let result = resk * half;
    let resabs = resabs * half.abs();
    let resasc = resasc * half.abs();
    let mut err = ((resk - resg) * half).abs();
    if resasc != 0.0 && err != 0.0 {
        err = resasc * (200.0 * err / resasc).powf(1.5).min(1.0);
    }
    if resabs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(50.0 * f64::EPSILON * resabs);
    }
    (result, err)
}

/// ∫_a^b f(x) dx over a finite interval.
pub fn integrate<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, tol: Tolerance) -> Result<QuadResult> {
    if a == b {
        return Ok(QuadResult { value: 0.0, abs_err: 0.0, evals: 0 });
    }
    let mut evals = 21;
    let (v, e) = qk21(&mut f, a, b);
    let mut heap = BinaryHeap::new();
    heap.push(Segment { a, b, value: v, err: e });
    let mut total = v;
    let mut total_err = e;
    loop {
        if !total.is_finite() {
            return Err(no_convergence("quadrature", format!("non-finite integrand on [{a}, {b}]")));
        }
        if total_err <= tol.abs.max(tol.rel * total.abs()) {
            break;
        }
        if evals + 42 > tol.max_evals {
            return Err(no_convergence(
                "quadrature",
                format!("budget of {} evaluations exhausted (value {total:.6e}, err {total_err:.1e})", tol.max_evals),
            ));
        }
        let seg = heap.pop().expect("heap never empties");
        let mid = 0.5 * (seg.a + seg.b);
        if !(mid > seg.a.min(seg.b) && mid < seg.a.max(seg.b)) {
            // Interval cannot be split further; accept what we have.
            heap.push(seg);
            break;
        }
        let (v1, e1) = qk21(&mut f, seg.a, mid);
        let (v2, e2) = qk21(&mut f, mid, seg.b);
        evals += 42;
        total += v1 + v2 - seg.value;
        total_err += e1 + e2 - seg.err;
        heap.push(Segment { a: seg.a, b: mid, value: v1, err: e1 });
        heap.push(Segment { a: mid, b: seg.b, value: v2, err: e2 });
        // Periodically resum to shed accumulated rounding in the running totals.
        if evals % (42 * 64) == 21 {
            total = heap.iter().map(|s| s.value).sum();
            total_err = heap.iter().map(|s| s.err).sum();
        }
    }
    let value: f64 = heap.iter().map(|s| s.value).sum();
    let abs_err: f64 = heap.iter().map(|s| s.err).sum();
    Ok(QuadResult { value, abs_err, evals })
}

/// ∫_a^∞ f(x) dx via x = a + scale·t/(1 − t), t ∈ [0, 1).
pub fn integrate_to_inf<F: FnMut(f64) -> f64>(
    mut f: F,
    a: f64,
    scale: f64,
    tol: Tolerance,
) -> Result<QuadResult> {
    let g = |t: f64| {
        let u = 1.0 - t;
        let x = a + scale * t / u;
        let v = f(x);
        if v == 0.0 {
            0.0
        } else {
            v * scale / (u * u)
        }
    };
    integrate(g, 0.0, 1.0, tol)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_exactness() {
        // 10-point Gauss is exact to degree 19, so degree-19 polynomials need no subdivision.
        let r = integrate(|x| x.powi(19) + 3.0 * x.powi(4), 0.0, 1.0, Tolerance::default()).unwrap();
        assert!((r.value - (1.0 / 20.0 + 3.0 / 5.0)).abs() < 1e-15);
        assert_eq!(r.evals, 21);
    }

    #[test]
    fn exponential_and_gaussian_tails() {
        let r = integrate_to_inf(|x| (-x).exp(), 0.0, 1.0, Tolerance::default()).unwrap();
        assert!((r.value - 1.0).abs() < 1e-12);
        let r = integrate_to_inf(|x| (-x * x).exp(), 0.0, 1.0, Tolerance::default()).unwrap();
        assert!((r.value - std::f64::consts::PI.sqrt() / 2.0).abs() < 1e-11);
    }

    #[test]
    fn endpoint_singularity() {
        let r = integrate(|x: f64| 1.0 / x.sqrt(), 0.0, 1.0, Tolerance::new(1e-12, 1e-10)).unwrap();
        assert!((r.value - 2.0).abs() < 1e-9);
    }

    #[test]
    fn budget_exhaustion_reported() {
        let tol = Tolerance { abs: 0.0, rel: 0.0, max_evals: 500 };
        assert!(integrate(|x: f64| (1.0 / x).sin(), 1e-6, 1.0, tol).is_err());
    }
}
