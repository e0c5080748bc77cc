//! Channel models: Jakes correlation, AR(1) MIMO evolution around the pilot,
//! Frobenius-gain sampling, and the FSO SNR law (Gamma-Gamma turbulence
//! with pointing errors, heterodyne or IM/DD detection).

use crate::error::{domain, no_convergence, Error, Result};
use crate::specfun::{bessel_j0, gamma, meijer_g, MeijerGSpec};
use num_complex::Complex64;
use rand::Rng;
use rand_distr::{Distribution, Gamma, StandardNormal};
use std::f64::consts::PI;

/// Speed of light used by the Jakes mapping, m/s.
pub const SPEED_OF_LIGHT: f64 = 2.998e8;

/// Parameters of the MIMO RF hops and their time-selective behaviour.
#[derive(Debug, Clone, PartialEq)]
pub struct RfLinkConfig {
    pub n_s: u32,
    pub n_r: u32,
    pub n_p: u32,
    /// True channel variance SU-TX → relay.
    pub delta2_sr: f64,
    /// True channel variance SU-TX → PU-RX.
    pub delta2_sp: f64,
    pub sigma2_eps_sr: f64,
    pub sigma2_eps_sp: f64,
    /// Per-entry variance of the AR(1) innovation.
    pub sigma2_innov: f64,
    pub rho_sr: f64,
    pub rho_sp: f64,
    /// Pilot codeword index, 1-based.
    pub pilot: u32,
    /// Codewords per frame.
    pub n_b: u32,
    /// Non-zero symbol transmissions per antenna per codeword.
    pub n_a: u32,
    /// Symbols per OSTBC block.
    pub block_symbols: u32,
    /// OSTBC block length in channel uses.
    pub block_length: u32,
}

impl RfLinkConfig {
    /// Reference link: N_S = 3, N_R = N_P = 2, unit variances, static,
    /// perfect CSI, preamble pilot, 50 codewords, rate-1/2 G3 code.
    pub fn reference() -> Self {
        Self {
            n_s: 3,
            n_r: 2,
            n_p: 2,
            delta2_sr: 1.0,
            delta2_sp: 1.0,
            sigma2_eps_sr: 0.0,
            sigma2_eps_sp: 0.0,
            sigma2_innov: 1.0,
            rho_sr: 1.0,
            rho_sp: 1.0,
            pilot: 1,
            n_b: 50,
            n_a: 3,
            block_symbols: 4,
            block_length: 8,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |what: &str| Err(Error::Config(what.to_string()));
        if self.n_s == 0 || self.n_r == 0 || self.n_p == 0 {
            return bad("antenna counts must be positive");
        }
        if self.tau1() > 64 || self.tau2() > 64 {
            return bad("N_S·N_R and N_S·N_P must not exceed 64");
        }
        if !(self.delta2_sr > 0.0) || !(self.delta2_sp > 0.0) {
            return bad("channel variances must be positive");
        }
        if !(self.sigma2_eps_sr >= 0.0) || !(self.sigma2_eps_sp >= 0.0) {
            return bad("estimation-error variances must be non-negative");
        }
        if !(self.sigma2_innov > 0.0) {
            return bad("innovation variance must be positive");
        }
        if !(self.rho_sr.abs() <= 1.0) || !(self.rho_sp.abs() <= 1.0) {
            return bad("correlation coefficients must lie in [-1, 1]");
        }
        if self.n_b == 0 || self.pilot == 0 || self.pilot > self.n_b {
            return bad("pilot index must satisfy 1 <= L <= N_b");
        }
        if self.n_a == 0 || self.block_symbols == 0 || self.block_symbols > self.block_length {
            return bad("OSTBC geometry must satisfy 0 < B <= T and N_a > 0");
        }
        Ok(())
    }

    pub fn tau1(&self) -> u32 {
        self.n_s * self.n_r
    }

    pub fn tau2(&self) -> u32 {
        self.n_s * self.n_p
    }

    /// Code rate R_c = B/T.
    pub fn code_rate(&self) -> f64 {
        f64::from(self.block_symbols) / f64::from(self.block_length)
    }

    /// Variance of the estimated SU-TX → relay gain entries.
    pub fn delta2_sr_eff(&self) -> f64 {
        self.delta2_sr + self.sigma2_eps_sr
    }

    /// Variance of the predicted cross-gain entries at codeword k.
    pub fn delta2_sp_eff(&self, k: u32) -> f64 {
        predict_cross_gain(self.delta2_sp + self.sigma2_eps_sp, self.rho_sp, k)
    }

    /// Distance |k − L| from the pilot codeword.
    pub fn pilot_distance(&self, k: u32) -> Result<u32> {
        self.check_index(k)?;
        Ok(k.abs_diff(self.pilot))
    }

    fn check_index(&self, k: u32) -> Result<()> {
        if k == 0 || k > self.n_b {
            return Err(Error::Index(format!("codeword {k} outside 1..={}", self.n_b)));
        }
        Ok(())
    }
}

/// Dense complex matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct CMatrix {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<Complex64>,
}

impl CMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![Complex64::new(0.0, 0.0); rows * cols],
        }
    }

    /// I.i.d. circularly-symmetric complex Gaussian entries with variance `var`.
    pub fn gaussian<R: Rng + ?Sized>(rows: usize, cols: usize, var: f64, rng: &mut R) -> Self {
        let sd = (0.5 * var).sqrt();
        let data = (0..rows * cols)
            .map(|_| {
                let re: f64 = rng.sample(StandardNormal);
                let im: f64 = rng.sample(StandardNormal);
                Complex64::new(sd * re, sd * im)
            })
            .collect();
        Self { rows, cols, data }
    }

    pub fn get(&self, r: usize, c: usize) -> Complex64 {
        self.data[r * self.cols + c]
    }

    /// Squared Frobenius norm.
    pub fn frobenius2(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum()
    }
}

/// Per-sample correlation from the Jakes model, ρ = J0(2π f_c v / (R_s c)).
pub fn jakes_rho(speed: f64, f_c: f64, r_s: f64) -> Result<f64> {
    if !speed.is_finite() || !f_c.is_finite() || !r_s.is_finite() {
        return Err(domain("jakes_rho", "arguments must be finite"));
    }
    if speed < 0.0 || !(f_c > 0.0) || !(r_s > 0.0) {
        return Err(domain("jakes_rho", "speed must be >= 0 and f_c, R_s positive"));
    }
    Ok(bessel_j0(2.0 * PI * f_c * speed / (r_s * SPEED_OF_LIGHT)))
}

/// Draws H[k] given H[L] under the AR(1) recursion run outward from the pilot:
/// H[k] = ρ^i H[L] + √(1−ρ²) Σ_{j<i} ρ^j E_j with i = |k − L|.
pub fn ar1_evolve<R: Rng + ?Sized>(h_pilot: &CMatrix, k: u32, cfg: &RfLinkConfig, rng: &mut R) -> Result<CMatrix> {
    let i = cfg.pilot_distance(k)?;
    if h_pilot.rows != cfg.n_r as usize || h_pilot.cols != cfg.n_s as usize {
        return Err(domain("ar1_evolve", "pilot matrix must be N_R x N_S"));
    }
    let rho = cfg.rho_sr;
    let w = (1.0 - rho * rho).max(0.0).sqrt();
    let mut h = h_pilot.clone();
    if w == 0.0 {
        for z in &mut h.data {
            *z *= rho.powi(i as i32);
        }
        return Ok(h);
    }
    for _ in 0..i {
        let e = CMatrix::gaussian(h.rows, h.cols, cfg.sigma2_innov, rng);
        for (z, ez) in h.data.iter_mut().zip(&e.data) {
            *z = rho * *z + w * ez;
        }
    }
    Ok(h)
}

/// Squared Frobenius norm of a `dim`-entry complex Gaussian matrix: Gamma(dim, var).
pub fn sample_estimated_gain<R: Rng + ?Sized>(dim: u32, var: f64, rng: &mut R) -> f64 {
    Gamma::new(f64::from(dim), var)
        .expect("shape and scale are positive")
        .sample(rng)
}

/// Cross gain predicted k − 1 codewords after the first: ρ^{2(k−1)} G1.
pub fn predict_cross_gain(g1: f64, rho_sp: f64, k: u32) -> f64 {
    let k = k.max(1);
    g1 * rho_sp.powi(2 * (k as i32 - 1))
}

/// Unit-mean Gamma-Gamma irradiance.
pub fn gamma_gamma_sample<R: Rng + ?Sized>(alpha: f64, beta: f64, rng: &mut R) -> f64 {
    let x: f64 = Gamma::new(alpha, 1.0 / alpha).expect("alpha > 0").sample(rng);
    let y: f64 = Gamma::new(beta, 1.0 / beta).expect("beta > 0").sample(rng);
    x * y
}

/// Gamma-Gamma turbulence, pointing error and detection mode of the FSO hop.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FsoParams {
    pub alpha: f64,
    pub beta: f64,
    /// Equivalent beam radius to jitter ratio w_e / 2σ_s.
    pub xi: f64,
    /// Deterministic path loss; carried as metadata, the SNR law is normalised by μ.
    pub h_l: f64,
    /// 1 = heterodyne, 2 = IM/DD.
    pub theta: u8,
    /// Average electrical SNR (linear).
    pub mu: f64,
}

impl FsoParams {
    pub fn moderate(mu: f64) -> Self {
        Self {
            alpha: 5.4181,
            beta: 3.7916,
            xi: 1.6758,
            h_l: 0.9033,
            theta: 1,
            mu,
        }
    }

    pub fn strong(mu: f64) -> Self {
        Self {
            alpha: 5.0711,
            beta: 1.1547,
            xi: 1.6885,
            h_l: 0.8159,
            theta: 1,
            mu,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.alpha > 0.0 && self.beta > 0.0 && self.xi > 0.0 && self.mu > 0.0) {
            return Err(Error::Config("FSO alpha, beta, xi and mu must be positive".into()));
        }
        if !(self.h_l > 0.0 && self.h_l <= 1.0) {
            return Err(Error::Config("FSO path loss H_l must lie in (0, 1]".into()));
        }
        if self.theta != 1 && self.theta != 2 {
            return Err(Error::Config("FSO detection mode theta must be 1 or 2".into()));
        }
        Ok(())
    }

    fn xi2(&self) -> f64 {
        self.xi * self.xi
    }

    /// Θ1 and Θ2 of the CDF.
    pub fn cdf_constants(&self) -> (f64, f64) {
        let (a, b, x2) = (self.alpha, self.beta, self.xi2());
        if self.theta == 1 {
            (x2 / (gamma(a) * gamma(b)), a * b)
        } else {
            (
                2f64.powf(a + b - 2.0) * x2 / (2.0 * PI * gamma(a) * gamma(b)),
                (a * b).powi(2) / 16.0,
            )
        }
    }

    /// Θ3 (upper parameters after the leading 1) and Θ4 (lower parameters before the trailing 0).
    pub fn theta34(&self) -> (Vec<f64>, Vec<f64>) {
        let (a, b, x2) = (self.alpha, self.beta, self.xi2());
        if self.theta == 1 {
            (vec![x2 + 1.0], vec![x2, a, b])
        } else {
            (
                vec![(x2 + 1.0) / 2.0, (x2 + 2.0) / 2.0],
                vec![x2 / 2.0, (x2 + 1.0) / 2.0, a / 2.0, (a + 1.0) / 2.0, b / 2.0, (b + 1.0) / 2.0],
            )
        }
    }

    /// G^{3θ,1}_{θ+1,3θ+1}( · | 1, Θ3; Θ4, 0) — the CDF kernel, argument Θ2 x/μ.
    pub fn cdf_kernel(&self) -> MeijerGSpec {
        let (t3, t4) = self.theta34();
        let m = t4.len();
        let mut a = vec![1.0];
        a.extend(t3);
        let mut b = t4;
        b.push(0.0);
        MeijerGSpec { m, n: 1, a, b }
    }

    /// G^{3,0}_{1,3}( · | ξ²+1; ξ², α, β) — the PDF kernel, argument αβ (x/μ)^{1/θ}.
    pub fn pdf_kernel(&self) -> MeijerGSpec {
        let x2 = self.xi2();
        MeijerGSpec {
            m: 3,
            n: 0,
            a: vec![x2 + 1.0],
            b: vec![x2, self.alpha, self.beta],
        }
    }
}

/// Density of the FSO electrical SNR.
pub fn fso_snr_pdf(p: &FsoParams, x: f64) -> Result<f64> {
    if !(x > 0.0) {
        return Err(domain("fso_snr_pdf", format!("x must be positive, got {x}")));
    }
    let th = f64::from(p.theta);
    let arg = p.alpha * p.beta * (x / p.mu).powf(1.0 / th);
    let g = meijer_g(&p.pdf_kernel(), arg)?;
    Ok((p.xi2() / (th * x * gamma(p.alpha) * gamma(p.beta)) * g).max(0.0))
}

/// Distribution function of the FSO electrical SNR.
pub fn fso_snr_cdf(p: &FsoParams, x: f64) -> Result<f64> {
    if !(x >= 0.0) {
        return Err(domain("fso_snr_cdf", format!("x must be non-negative, got {x}")));
    }
    if x == 0.0 {
        return Ok(0.0);
    }
    if x.is_infinite() {
        return Ok(1.0);
    }
    let (t1, t2) = p.cdf_constants();
    let g = meijer_g(&p.cdf_kernel(), t2 * x / p.mu)?;
    Ok((t1 * g).clamp(0.0, 1.0))
}

/// x with F(x) = u, by bisection in ln x to relative tolerance 1e-10.
pub fn fso_snr_quantile(p: &FsoParams, u: f64) -> Result<f64> {
    if !(u > 0.0 && u < 1.0) {
        return Err(domain("fso_snr_quantile", format!("u must lie in (0, 1), got {u}")));
    }
    let mut lo = p.mu * 1e-3;
    let mut hi = p.mu * 1e-3;
    let mut n = 0;
    while fso_snr_cdf(p, lo)? > u {
        lo *= 1e-2;
        n += 1;
        if n > 200 {
            return Err(no_convergence("fso_snr_quantile", "lower bracket not found"));
        }
    }
    while fso_snr_cdf(p, hi)? < u {
        hi *= 10.0;
        n += 1;
        if n > 400 {
            return Err(no_convergence("fso_snr_quantile", "upper bracket not found"));
        }
    }
    let (mut a, mut b) = (lo.ln(), hi.ln());
    while b - a > 1e-11 {
        let mid = 0.5 * (a + b);
        if fso_snr_cdf(p, mid.exp())? < u {
            a = mid;
        } else {
            b = mid;
        }
    }
    Ok((0.5 * (a + b)).exp())
}

/// Inverse-transform sample of the FSO SNR.
pub fn fso_snr_sample<R: Rng + ?Sized>(p: &FsoParams, rng: &mut R) -> Result<f64> {
    let u: f64 = rng.random_range(f64::MIN_POSITIVE..1.0);
    fso_snr_quantile(p, u)
}

/// Tabulated inverse CDF for bulk sampling.
///
/// The law depends on x only through x/μ, so the table is built once per
/// (α, β, ξ, θ) on a log grid and interpolated with a monotone cubic in
/// (logit F, ln x).  Probabilities outside the tabulated range fall back to
/// exact bisection.
#[derive(Debug, Clone)]
pub struct FsoSampler {
    params: FsoParams,
    y: Vec<f64>,
    lnx: Vec<f64>,
    slope: Vec<f64>,
}

fn logit(u: f64) -> f64 {
    (u / (1.0 - u)).ln()
}

impl FsoSampler {
    pub fn new(p: &FsoParams) -> Result<Self> {
        p.validate()?;
        let unit = FsoParams { mu: 1.0, ..*p };
        // Bracket the probabilities [1e-13, 1 − 1e-9].
        let mut lo = 1e-2;
        while fso_snr_cdf(&unit, lo)? > 1e-13 {
            lo *= 0.1;
            if lo < 1e-300 {
                return Err(no_convergence("FsoSampler", "lower table end not found"));
            }
        }
        let mut hi = 10.0;
        while fso_snr_cdf(&unit, hi)? < 1.0 - 1e-9 {
            hi *= 2.0;
            if hi > 1e300 {
                return Err(no_convergence("FsoSampler", "upper table end not found"));
            }
        }
        let nodes = 2048;
        let (l0, l1) = (lo.ln(), hi.ln());
        let mut y = Vec::with_capacity(nodes);
        let mut lnx = Vec::with_capacity(nodes);
        for i in 0..nodes {
            let lx = l0 + (l1 - l0) * i as f64 / (nodes - 1) as f64;
            let f = fso_snr_cdf(&unit, lx.exp())?;
            if f <= 0.0 || f >= 1.0 {
                continue;
            }
            let yi = logit(f);
            if let Some(&last) = y.last() {
                if yi <= last {
                    continue;
                }
            }
            y.push(yi);
            lnx.push(lx);
        }
        if y.len() < 16 {
            return Err(no_convergence("FsoSampler", "too few usable table nodes"));
        }
        let slope = pchip_slopes(&y, &lnx);
        Ok(Self {
            params: *p,
            y,
            lnx,
            slope,
        })
    }

    pub fn params(&self) -> &FsoParams {
        &self.params
    }

    /// Quantile for u ∈ (0, 1).
    pub fn quantile(&self, u: f64) -> Result<f64> {
        let t = logit(u);
        let n = self.y.len();
        if !(t >= self.y[0] && t <= self.y[n - 1]) {
            return fso_snr_quantile(&self.params, u);
        }
        let i = match self.y.partition_point(|&v| v <= t) {
            0 => 0,
            j if j >= n => n - 2,
            j => j - 1,
        };
        let (y0, y1) = (self.y[i], self.y[i + 1]);
        let hh = y1 - y0;
        let s = (t - y0) / hh;
        let (h00, h10, h01, h11) = (
            (1.0 + 2.0 * s) * (1.0 - s) * (1.0 - s),
            s * (1.0 - s) * (1.0 - s),
            s * s * (3.0 - 2.0 * s),
            s * s * (s - 1.0),
        );
        let v = h00 * self.lnx[i] + h10 * hh * self.slope[i] + h01 * self.lnx[i + 1] + h11 * hh * self.slope[i + 1];
        Ok(self.params.mu * v.exp())
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        let u: f64 = rng.random_range(f64::MIN_POSITIVE..1.0);
        self.quantile(u).unwrap_or(f64::NAN)
    }
}

/// Fritsch–Carlson slopes for monotone cubic Hermite interpolation.
fn pchip_slopes(x: &[f64], y: &[f64]) -> Vec<f64> {
    let n = x.len();
    let d: Vec<f64> = (0..n - 1).map(|i| (y[i + 1] - y[i]) / (x[i + 1] - x[i])).collect();
    let mut m = vec![0.0; n];
    m[0] = d[0];
    m[n - 1] = d[n - 2];
    for i in 1..n - 1 {
        if d[i - 1] * d[i] <= 0.0 {
            m[i] = 0.0;
        } else {
            let h0 = x[i] - x[i - 1];
            let h1 = x[i + 1] - x[i];
            let w1 = 2.0 * h1 + h0;
            let w2 = h1 + 2.0 * h0;
            m[i] = (w1 + w2) / (w1 / d[i - 1] + w2 / d[i]);
        }
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn jakes_examples() {
        assert_eq!(jakes_rho(0.0, 5.9e9, 9500.0).unwrap(), 1.0);
        let v = 17.0 * crate::MPS_PER_MPH;
        let r = jakes_rho(v, 5.9e9, 9500.0).unwrap();
        assert!((r - 0.99756).abs() < 2e-5, "{r}");
        // speed that puts the argument at the first Bessel zero
        let v0 = 2.404_825_557_695_773 * 9500.0 * SPEED_OF_LIGHT / (2.0 * PI * 5.9e9);
        assert!(jakes_rho(v0, 5.9e9, 9500.0).unwrap().abs() < 1e-6);
        assert!(jakes_rho(f64::NAN, 5.9e9, 9500.0).is_err());
        assert!(jakes_rho(-1.0, 5.9e9, 9500.0).is_err());
    }

    #[test]
    fn predict_cross_gain_examples() {
        assert_eq!(predict_cross_gain(2.0, 1.0, 40), 2.0);
        assert_eq!(predict_cross_gain(2.0, 0.5, 2), 0.5);
        let rho: f64 = 0.99756;
        let v = predict_cross_gain(1.0, rho, 50);
        assert!((v - (98.0 * rho.ln()).exp()).abs() < 1e-13);
        assert!((v - 0.787).abs() < 1e-3);
    }

    #[test]
    fn effective_cross_variance_is_prediction_of_first() {
        let mut cfg = RfLinkConfig::reference();
        cfg.rho_sp = 0.97;
        cfg.sigma2_eps_sp = 0.05;
        let d1 = cfg.delta2_sp_eff(1);
        for k in 1..=cfg.n_b {
            assert_eq!(cfg.delta2_sp_eff(k), predict_cross_gain(d1, cfg.rho_sp, k));
        }
    }

    #[test]
    fn ar1_trivial_cases() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let mut cfg = RfLinkConfig::reference();
        cfg.pilot = 10;
        let h = CMatrix::gaussian(2, 3, 1.0, &mut rng);
        assert_eq!(ar1_evolve(&h, 10, &cfg, &mut rng).unwrap(), h);
        assert_eq!(ar1_evolve(&h, 37, &cfg, &mut rng).unwrap(), h); // ρ = 1
        assert!(ar1_evolve(&h, 0, &cfg, &mut rng).is_err());
        assert!(ar1_evolve(&h, 51, &cfg, &mut rng).is_err());
        cfg.rho_sr = 0.0;
        let e = ar1_evolve(&h, 11, &cfg, &mut rng).unwrap();
        assert_ne!(e, h);
    }

    #[test]
    fn cdf_edges() {
        let p = FsoParams::moderate(100.0);
        assert_eq!(fso_snr_cdf(&p, 0.0).unwrap(), 0.0);
        assert!(fso_snr_cdf(&p, 1e6).unwrap() > 1.0 - 1e-9);
        assert!(fso_snr_cdf(&p, -1.0).is_err());
        assert!(fso_snr_pdf(&p, 0.0).is_err());
    }

    #[test]
    fn cdf_against_arbitrary_precision_reference() {
        // Reference values from an independent 30-digit Meijer G evaluation.
        let cases: [(FsoParams, [f64; 4]); 4] = [
            (FsoParams::moderate(100.0), [1.0893310190388435e-5, 4.6986695279958427e-4, 0.41962716643758876, 0.99851317011968093]),
            (FsoParams::strong(100.0), [5.2937720622692327e-3, 2.5357154841018252e-2, 0.5322441624904385, 0.98837016612937804]),
            (FsoParams { theta: 2, ..FsoParams::moderate(100.0) }, [1.1344378465140529e-2, 5.2580289145890588e-2, 0.59662855169340795, 0.96176579641004073]),
            (FsoParams { theta: 2, ..FsoParams::strong(100.0) }, [9.8592825905677693e-2, 0.19479863408721288, 0.64920410445418208, 0.92382722617983194]),
        ];
        for (p, want) in cases {
            for (x, w) in [0.5, 2.0, 50.0, 400.0].into_iter().zip(want) {
                let got = fso_snr_cdf(&p, x).unwrap();
                assert!(((got - w) / w).abs() < 1e-9, "theta={} x={x}: {got} vs {w}", p.theta);
            }
        }
    }

    #[test]
    fn quantile_round_trip() {
        let p = FsoParams::strong(100.0);
        for &u in &[0.01, 0.5, 0.99] {
            let x = fso_snr_quantile(&p, u).unwrap();
            assert!((fso_snr_cdf(&p, x).unwrap() - u).abs() < 1e-9);
        }
    }

    #[test]
    fn table_sampler_matches_exact_quantile() {
        for p in [FsoParams::moderate(100.0), FsoParams { theta: 2, ..FsoParams::strong(10.0) }] {
            let s = FsoSampler::new(&p).unwrap();
            for &u in &[1e-6, 1e-3, 0.1, 0.5, 0.9, 0.999] {
                let a = s.quantile(u).unwrap();
                let b = fso_snr_quantile(&p, u).unwrap();
                assert!(((a - b) / b).abs() < 1e-6, "u={u}: {a} vs {b}");
            }
        }
    }
}
