//! SU-TX → relay link statistics under the composite interference constraint.
//!
//! With imperfect, outdated CSI the effective SNR of codeword k is
//!
//! ```text
//! γ_SR = α1 Ĝ_SR                       if Ĝ_SP,k ≤ P_A/P_M
//!      = α2 Ĝ_SR / (Ĝ_SP,k + α3)        otherwise
//! ```
//!
//! with Ĝ_SR ~ Gamma(τ1, δ̃²_SR) and Ĝ_SP,k ~ Gamma(τ2, δ̃²_SP,k).  The closed
//! form CDF expands the second branch into finite sums of truncated gamma
//! integrals J(a; b); every term is formed in log space and the sums are
//! accumulated in ascending magnitude.

use crate::channels::RfLinkConfig;
use crate::error::{domain, Error, Result};
use crate::quad::{integrate, integrate_to_inf, Tolerance};
use crate::specfun::{inc_gamma_pair, ln_binomial, ln_gamma, ln_j_func, reg_lower_gamma};
use crate::sum::sorted_sum;

/// Transmit power under the composite constraint: min(P_M, P_A/Ĝ), with the
/// boundary Ĝ = P_A/P_M assigned to the peak-power branch.
pub fn transmit_power(g_hat: f64, p_a: f64, p_m: f64) -> Result<f64> {
    if !(g_hat > 0.0 && p_a > 0.0 && p_m > 0.0) {
        return Err(domain("transmit_power", "gain and powers must be positive"));
    }
    if g_hat <= p_a / p_m {
        Ok(p_m)
    } else {
        Ok(p_a / g_hat)
    }
}

/// (α1, α2, α3, i) for codeword k.
pub fn alpha_coeffs(cfg: &RfLinkConfig, p_a: f64, p_m: f64, eta0: f64, k: u32) -> Result<(f64, f64, f64, u32)> {
    let i = cfg.pilot_distance(k)?;
    let r2i = cfg.rho_sr.powi(2 * i as i32);
    let na = f64::from(cfg.n_a);
    let s_eps = na * cfg.sigma2_eps_sr;
    let s_inn = na * cfg.sigma2_innov;
    let base = cfg.code_rate() * f64::from(cfg.n_s) * eta0;
    let a1 = p_m * r2i / (base + p_m * r2i * s_eps + p_m * (1.0 - r2i) * s_inn);
    let a2 = p_a * r2i / base;
    let a3 = (p_a * r2i * s_eps + p_a * (1.0 - r2i) * s_inn) / base;
    Ok((a1, a2, a3, i))
}

/// Everything the SR-link CDF/PDF needs for one codeword.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SrSnrModel {
    pub alpha1: f64,
    pub alpha2: f64,
    pub alpha3: f64,
    pub tau1: u32,
    pub tau2: u32,
    /// δ̃²_SR
    pub delta2_sr: f64,
    /// δ̃²_SP,k
    pub delta2_sp: f64,
    pub p_a: f64,
    pub p_m: f64,
    pub k: u32,
    pub i: u32,
}

impl SrSnrModel {
    pub fn new(cfg: &RfLinkConfig, p_a: f64, p_m: f64, eta0: f64, k: u32) -> Result<Self> {
        cfg.validate()?;
        if !(p_a > 0.0 && p_m > 0.0 && eta0 > 0.0) {
            return Err(Error::Config("P_A, P_M and eta0 must be positive".into()));
        }
        let (alpha1, alpha2, alpha3, i) = alpha_coeffs(cfg, p_a, p_m, eta0, k)?;
        let m = Self {
            alpha1,
            alpha2,
            alpha3,
            tau1: cfg.tau1(),
            tau2: cfg.tau2(),
            delta2_sr: cfg.delta2_sr_eff(),
            delta2_sp: cfg.delta2_sp_eff(k),
            p_a,
            p_m,
            k,
            i,
        };
        if !(m.delta2_sp > 0.0) || !(m.alpha1 > 0.0) || !(m.alpha2 > 0.0) {
            return Err(Error::Config(format!(
                "degenerate SR model at k={k}: alpha1={}, alpha2={}, cross variance={}",
                m.alpha1, m.alpha2, m.delta2_sp
            )));
        }
        Ok(m)
    }

    /// P_A/P_M.
    pub fn ratio(&self) -> f64 {
        self.p_a / self.p_m
    }

    /// Scale of α1 Ĝ_SR.
    pub fn a1(&self) -> f64 {
        self.alpha1 * self.delta2_sr
    }

    /// Scale of α2 Ĝ_SR.
    pub fn b(&self) -> f64 {
        self.alpha2 * self.delta2_sr
    }

    /// (P(τ2, r/δ̃²_SP), Q(τ2, r/δ̃²_SP)): probabilities of the peak-power and
    /// interference-limited branches.
    pub fn branch_weights(&self) -> Result<(f64, f64)> {
        inc_gamma_pair(f64::from(self.tau2), self.ratio() / self.delta2_sp)
    }

    /// Effective SNR for given estimated gains.
    pub fn snr(&self, g_sr: f64, g_sp: f64) -> f64 {
        if g_sp <= self.ratio() {
            self.alpha1 * g_sr
        } else {
            self.alpha2 * g_sr / (g_sp + self.alpha3)
        }
    }
}

fn check_x(func: &'static str, x: f64) -> Result<()> {
    if !(x >= 0.0) {
        return Err(domain(func, format!("x must be non-negative, got {x}")));
    }
    Ok(())
}

/// Closed-form CDF of γ_SR.
pub fn sr_snr_cdf(m: &SrSnrModel, x: f64) -> Result<f64> {
    check_x("sr_snr_cdf", x)?;
    if x == 0.0 {
        return Ok(0.0);
    }
    if x.is_infinite() {
        return Ok(1.0);
    }
    let (t1, t2) = (m.tau1, m.tau2);
    let r = m.ratio();
    let dsp = m.delta2_sp;
    let bb = m.b();
    let (p2, q2) = m.branch_weights()?;
    let mut terms = Vec::with_capacity(2 + (t1 * (t1 + 1) / 2) as usize);
    terms.push(p2 * reg_lower_gamma(f64::from(t1), x / m.a1())?);
    terms.push(q2);
    let beta_x = 1.0 / dsp + x / bb;
    let common = -ln_gamma(f64::from(t2)) - f64::from(t2) * dsp.ln() - x * m.alpha3 / bb;
    let (lx, lb) = (x.ln(), bb.ln());
    let la3 = m.alpha3.ln();
    for mm in 0..t1 {
        let mf = f64::from(mm);
        let lm = common + mf * (lx - lb) - ln_gamma(mf + 1.0);
        for c in 0..=mm {
            if m.alpha3 == 0.0 && c < mm {
                continue;
            }
            let pow = if c == mm { 0.0 } else { f64::from(mm - c) * la3 };
            let lt = lm + ln_binomial(mm, c) + pow + ln_j_func(t2 + c, beta_x, r)?;
            terms.push(-lt.exp());
        }
    }
    Ok(sorted_sum(&mut terms).clamp(0.0, 1.0))
}

/// Closed-form PDF of γ_SR.
pub fn sr_snr_pdf(m: &SrSnrModel, x: f64) -> Result<f64> {
    if !(x > 0.0) {
        return Err(domain("sr_snr_pdf", format!("x must be positive, got {x}")));
    }
    let (t1, t2) = (m.tau1, m.tau2);
    let (t1f, t2f) = (f64::from(t1), f64::from(t2));
    let a1 = m.a1();
    let bb = m.b();
    let dsp = m.delta2_sp;
    let (p2, _) = m.branch_weights()?;
    let lx = x.ln();
    let head = -ln_gamma(t1f) + (t1f - 1.0) * lx;
    let mut terms = Vec::with_capacity(t1 as usize + 2);
    if p2 > 0.0 {
        terms.push((head + p2.ln() - x / a1 - t1f * a1.ln()).exp());
    }
    let beta_x = 1.0 / dsp + x / bb;
    let second = head - x * m.alpha3 / bb - t1f * bb.ln() - ln_gamma(t2f) - t2f * dsp.ln();
    for c in 0..=t1 {
        if m.alpha3 == 0.0 && c < t1 {
            continue;
        }
        let pow = if c == t1 { 0.0 } else { f64::from(t1 - c) * m.alpha3.ln() };
        let lt = second + ln_binomial(t1, c) + pow + ln_j_func(t2 + c, beta_x, m.ratio())?;
        terms.push(lt.exp());
    }
    Ok(sorted_sum(&mut terms))
}

/// CDF in the P_A → ∞ limit: every codeword transmits at P_M.
pub fn sr_snr_cdf_pa_inf(m: &SrSnrModel, x: f64) -> Result<f64> {
    check_x("sr_snr_cdf_pa_inf", x)?;
    if x.is_infinite() {
        return Ok(1.0);
    }
    reg_lower_gamma(f64::from(m.tau1), x / m.a1())
}

/// CDF by direct quadrature over the cross-gain density, split at P_A/P_M.
pub fn sr_snr_cdf_oracle(m: &SrSnrModel, x: f64) -> Result<f64> {
    check_x("sr_snr_cdf_oracle", x)?;
    if x == 0.0 {
        return Ok(0.0);
    }
    let t1 = f64::from(m.tau1);
    let t2 = f64::from(m.tau2);
    let dsp = m.delta2_sp;
    let r = m.ratio();
    let lnorm = -ln_gamma(t2) - t2 * dsp.ln();
    let f_sp = move |z: f64| -> f64 {
        if z <= 0.0 {
            return 0.0;
        }
        (lnorm + (t2 - 1.0) * z.ln() - z / dsp).exp()
    };
    let tol = Tolerance::new(1e-13, 1e-11);
    let p_peak = reg_lower_gamma(t1, x / m.a1())?;
    let first = integrate(f_sp, 0.0, r, tol)?.value * p_peak;
    let bb = m.b();
    let a3 = m.alpha3;
    let inner = |z: f64| -> f64 {
        let w = f_sp(z);
        if w == 0.0 {
            return 0.0;
        }
        w * reg_lower_gamma(t1, x * (z + a3) / bb).unwrap_or(f64::NAN)
    };
    let second = integrate_to_inf(inner, r, dsp * t2, tol)?.value;
    Ok((first + second).clamp(0.0, 1.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channels::jakes_rho;
    use crate::{db_to_linear, MPS_PER_MPH};

    fn mobile_cfg() -> RfLinkConfig {
        let rho = jakes_rho(17.0 * MPS_PER_MPH, 5.9e9, 9500.0).unwrap();
        RfLinkConfig {
            rho_sr: rho,
            rho_sp: rho,
            sigma2_eps_sr: 0.1,
            sigma2_eps_sp: 0.1,
            ..RfLinkConfig::reference()
        }
    }

    #[test]
    fn transmit_power_examples() {
        assert_eq!(transmit_power(0.5, 10.0, 10.0).unwrap(), 10.0);
        assert_eq!(transmit_power(2.0, 10.0, 10.0).unwrap(), 5.0);
        assert_eq!(transmit_power(1.0, 10.0, 10.0).unwrap(), 10.0);
        assert!(transmit_power(0.0, 1.0, 1.0).is_err());
        assert!(transmit_power(1.0, -1.0, 1.0).is_err());
    }

    #[test]
    fn alpha_perfect_static() {
        let cfg = RfLinkConfig {
            sigma2_eps_sr: 0.0,
            ..RfLinkConfig::reference()
        };
        let pm = db_to_linear(27.0);
        let (a1, _, a3, _) = alpha_coeffs(&cfg, 10.0, pm, 1.0, 30).unwrap();
        assert!((a1 - pm / 1.5).abs() < 1e-12 * a1);
        assert_eq!(a3, 0.0);
    }

    #[test]
    fn alpha_pilot_codeword_ignores_rho() {
        let mut cfg = mobile_cfg();
        cfg.pilot = 7;
        let (_, _, _, i) = alpha_coeffs(&cfg, 10.0, 500.0, 1.0, 7).unwrap();
        assert_eq!(i, 0);
        let (a1, a2, a3, _) = alpha_coeffs(&cfg, 10.0, 500.0, 1.0, 7).unwrap();
        let (b1, b2, b3, _) = alpha_coeffs(&RfLinkConfig { rho_sr: 1.0, ..cfg.clone() }, 10.0, 500.0, 1.0, 7).unwrap();
        assert_eq!((a1, a2, a3), (b1, b2, b3));
        let (_, _, _, i) = alpha_coeffs(&cfg, 10.0, 500.0, 1.0, 3).unwrap();
        assert_eq!(i, 4);
        assert!(alpha_coeffs(&cfg, 10.0, 500.0, 1.0, 51).is_err());
    }

    #[test]
    fn alpha_duplicate_path() {
        let cfg = mobile_cfg();
        let pm = 10f64.powf(2.7);
        let pa = 10.0;
        let (a1, a2, a3, i) = alpha_coeffs(&cfg, pa, pm, 1.0, 50).unwrap();
        assert_eq!(i, 49);
        // Spelled out term by term.
        let g = cfg.rho_sr.powf(98.0);
        let noise = 0.5 * 3.0 * 1.0;
        let e = 3.0 * 0.1;
        let v = 3.0 * 1.0;
        let w1 = pm * g / (noise + pm * g * e + pm * (1.0 - g) * v);
        let w2 = pa * g / noise;
        let w3 = (pa * g * e + pa * (1.0 - g) * v) / noise;
        for (got, want) in [(a1, w1), (a2, w2), (a3, w3)] {
            assert!(((got - want) / want).abs() < 1e-12);
        }
    }

    #[test]
    fn cdf_limits_and_oracle() {
        let cfg = mobile_cfg();
        for &k in &[1u32, 25, 50] {
            let m = SrSnrModel::new(&cfg, 10.0, 10f64.powf(2.7), 1.0, k).unwrap();
            assert_eq!(sr_snr_cdf(&m, 0.0).unwrap(), 0.0);
            assert!((sr_snr_cdf(&m, 1e6 * m.a1()).unwrap() - 1.0).abs() < 1e-9);
            for &x in &[0.05, 0.5, 2.0, 10.0, 100.0] {
                let a = sr_snr_cdf(&m, x).unwrap();
                let b = sr_snr_cdf_oracle(&m, x).unwrap();
                assert!((a - b).abs() < 1e-8, "k={k} x={x}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn pdf_integrates_to_one_and_matches_difference() {
        let cfg = mobile_cfg();
        let m = SrSnrModel::new(&cfg, 10.0, 10f64.powf(2.7), 1.0, 25).unwrap();
        let tot = integrate_to_inf(|x| sr_snr_pdf(&m, x).unwrap(), 0.0, m.a1(), Tolerance::default()).unwrap();
        assert!((tot.value - 1.0).abs() < 1e-7, "{}", tot.value);
        for &x in &[0.3, 1.0, 3.0, 12.0] {
            let h = 1e-4 * x;
            let fd = (sr_snr_cdf(&m, x + h).unwrap() - sr_snr_cdf(&m, x - h).unwrap()) / (2.0 * h);
            let p = sr_snr_pdf(&m, x).unwrap();
            assert!(((fd - p) / p).abs() < 1e-5, "x={x}: {fd} vs {p}");
        }
    }

    #[test]
    fn pa_inf_limit() {
        let cfg = mobile_cfg();
        let pm = 10f64.powf(2.7);
        let m = SrSnrModel::new(&cfg, 1e9 * pm, pm, 1.0, 10).unwrap();
        for &x in &[0.5, 2.0, 8.0] {
            let d = (sr_snr_cdf(&m, x).unwrap() - sr_snr_cdf_pa_inf(&m, x).unwrap()).abs();
            assert!(d < 1e-6, "x={x}: {d}");
        }
        let x = 3.5 * m.a1();
        assert!((sr_snr_cdf_pa_inf(&m, x).unwrap() - 0.142_386_446_904_221_75).abs() < 1e-13);
    }

    #[test]
    fn oracle_without_peak_branch() {
        let cfg = mobile_cfg();
        let m = SrSnrModel::new(&cfg, 1e-9, 10f64.powf(2.7), 1.0, 5).unwrap();
        let x = 1e-9;
        let a = sr_snr_cdf(&m, x).unwrap();
        let b = sr_snr_cdf_oracle(&m, x).unwrap();
        assert!((a - b).abs() < 1e-8);
    }
}
