//! End-to-end outage and bit-error probability, with their asymptotic floors.
//!
//! The DF end-to-end SNR is min(γ_SR, γ_RD), so its CDF is
//! 1 − (1 − F_SR)(1 − F_RD).  The symbol error probability follows by
//! integrating the conditional error probability Γ(a, bγ)/(2Γ(a)) against
//! that CDF:
//!
//! ```text
//! P_e = b^a / (2Γ(a)) · (L1 + L2 − L3),
//! L1 = ∫ x^{a−1} e^{−bx} F_SR,  L2 = ∫ x^{a−1} e^{−bx} F_RD,  L3 = ∫ x^{a−1} e^{−bx} F_SR F_RD.
//! ```
//!
//! Scenario averages run over SU-TX j, codeword k and OSTBC block n.  The SNR
//! does not depend on n, so n only contributes a multiplicity weight.

use crate::channels::{fso_snr_cdf, FsoParams, RfLinkConfig};
use crate::error::{domain, Error, Result};
use crate::linkstats::{sr_snr_cdf, sr_snr_cdf_pa_inf, SrSnrModel};
use crate::quad::{integrate_to_inf, Tolerance};
use crate::specfun::{
    gamma, ln_binomial, ln_gamma, meijer_g, meijer_g_bivariate_tol, upper_gamma, BivariateGSpec, MeijerGSpec,
};
use crate::sum::{neumaier, sorted_sum};
use rayon::prelude::*;

/// (a, b) of the conditional error probability Γ(a, bγ)/(2Γ(a)).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModulationConstants {
    pub a: f64,
    pub b: f64,
}

impl ModulationConstants {
    pub const BPSK: Self = Self { a: 0.5, b: 1.0 };
    pub const BFSK: Self = Self { a: 0.5, b: 0.5 };
    pub const DBPSK: Self = Self { a: 1.0, b: 1.0 };
    pub const NCBFSK: Self = Self { a: 1.0, b: 0.5 };

    pub fn by_name(name: &str) -> Option<Self> {
        match name.to_ascii_lowercase().as_str() {
            "bpsk" => Some(Self::BPSK),
            "bfsk" => Some(Self::BFSK),
            "dbpsk" => Some(Self::DBPSK),
            "ncbfsk" => Some(Self::NCBFSK),
            _ => None,
        }
    }

    pub fn name(&self) -> &'static str {
        match (self.a, self.b) {
            (a, b) if a == 0.5 && b == 1.0 => "bpsk",
            (a, b) if a == 0.5 && b == 0.5 => "bfsk",
            (a, b) if a == 1.0 && b == 1.0 => "dbpsk",
            (a, b) if a == 1.0 && b == 0.5 => "ncbfsk",
            _ => "custom",
        }
    }

    /// b^a / (2Γ(a)).
    pub fn prefactor(&self) -> f64 {
        self.b.powf(self.a) / (2.0 * gamma(self.a))
    }
}

/// One secondary transmitter: its RF links and power limits.
#[derive(Debug, Clone, PartialEq)]
pub struct SuLink {
    pub rf: RfLinkConfig,
    /// Peak interference power at the PU-RX (linear).
    pub p_a: f64,
    /// Peak transmit power (linear).
    pub p_m: f64,
}

/// All SU-TXs sharing the relay, the FSO hop, and the outage threshold.
#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioSet {
    pub links: Vec<SuLink>,
    pub fso: FsoParams,
    pub eta0: f64,
    /// Outage threshold (linear).
    pub gamma_th: f64,
}

impl ScenarioSet {
    pub fn validate(&self) -> Result<()> {
        if self.links.is_empty() {
            return Err(Error::Config("at least one SU-TX is required".into()));
        }
        for (j, l) in self.links.iter().enumerate() {
            l.rf.validate()
                .map_err(|e| Error::Config(format!("SU-TX {}: {e}", j + 1)))?;
            if !(l.p_a > 0.0 && l.p_m > 0.0) {
                return Err(Error::Config(format!("SU-TX {}: P_A and P_M must be positive", j + 1)));
            }
        }
        self.fso.validate()?;
        if !(self.eta0 > 0.0) || !(self.gamma_th > 0.0) {
            return Err(Error::Config("eta0 and gamma_th must be positive".into()));
        }
        Ok(())
    }

    /// Distinct SR models with their (j,k,n) multiplicity, in index order.
    pub fn weighted_models(&self) -> Result<Vec<(SrSnrModel, f64)>> {
        self.validate()?;
        let mut out: Vec<(SrSnrModel, f64)> = Vec::new();
        for l in &self.links {
            let w = f64::from(l.rf.block_symbols);
            for k in 1..=l.rf.n_b {
                let m = SrSnrModel::new(&l.rf, l.p_a, l.p_m, self.eta0, k)?;
                match out.iter_mut().find(|(o, _)| same_law(o, &m)) {
                    Some(slot) => slot.1 += w,
                    None => out.push((m, w)),
                }
            }
        }
        Ok(out)
    }

    /// Total (j,k,n) count.
    pub fn symbol_count(&self) -> f64 {
        self.links
            .iter()
            .map(|l| f64::from(l.rf.n_b) * f64::from(l.rf.block_symbols))
            .sum()
    }
}

/// Two models with the same SNR law (codeword labels aside).
fn same_law(a: &SrSnrModel, b: &SrSnrModel) -> bool {
    a.alpha1 == b.alpha1
        && a.alpha2 == b.alpha2
        && a.alpha3 == b.alpha3
        && a.tau1 == b.tau1
        && a.tau2 == b.tau2
        && a.delta2_sr == b.delta2_sr
        && a.delta2_sp == b.delta2_sp
        && a.p_a == b.p_a
        && a.p_m == b.p_m
}

/// Weighted average of a per-model quantity, evaluated in parallel and reduced in index order.
fn average<F>(s: &ScenarioSet, f: F) -> Result<f64>
where
    F: Fn(&SrSnrModel) -> Result<f64> + Sync,
{
    let models = s.weighted_models()?;
    let vals: Vec<Result<f64>> = models.par_iter().map(|(m, _)| f(m)).collect();
    let mut acc = Vec::with_capacity(vals.len());
    for ((_, w), v) in models.iter().zip(vals) {
        acc.push(w * v?);
    }
    Ok(neumaier(acc) / s.symbol_count())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FloorKind {
    /// μ_θ → ∞: the RF hop alone limits performance.
    MuInf,
    /// P_A → ∞: every SU-TX runs at P_M.
    PaInf,
}

/// 1 − (1 − F_SR)(1 − F_RD) at γ_th.
pub fn e2e_outage_cdf(gamma_th: f64, m: &SrSnrModel, p: &FsoParams) -> Result<f64> {
    if !(gamma_th > 0.0) {
        return Err(domain("e2e_outage_cdf", "threshold must be positive"));
    }
    let fsr = sr_snr_cdf(m, gamma_th)?;
    let frd = fso_snr_cdf(p, gamma_th)?;
    Ok(combine(fsr, frd))
}

fn combine(fsr: f64, frd: f64) -> f64 {
    // 1 − (1−a)(1−b) = a + b − ab, written without forming 1 − small.
    (fsr + frd - fsr * frd).clamp(0.0, 1.0)
}

/// Net outage probability averaged over (j, k, n).
pub fn outage_avg(s: &ScenarioSet) -> Result<f64> {
    let frd = fso_snr_cdf(&s.fso, s.gamma_th)?;
    average(s, |m| Ok(combine(sr_snr_cdf(m, s.gamma_th)?, frd)))
}

/// Outage floor in the μ_θ → ∞ or P_A → ∞ limit.
pub fn outage_floor(s: &ScenarioSet, kind: FloorKind) -> Result<f64> {
    match kind {
        FloorKind::MuInf => average(s, |m| sr_snr_cdf(m, s.gamma_th)),
        FloorKind::PaInf => {
            let frd = fso_snr_cdf(&s.fso, s.gamma_th)?;
            average(s, |m| Ok(combine(sr_snr_cdf_pa_inf(m, s.gamma_th)?, frd)))
        }
    }
}

/// Conditional bit error probability Γ(a, bγ)/(2Γ(a)).
pub fn cond_ber(gamma_snr: f64, mc: &ModulationConstants) -> f64 {
    let x = (mc.b * gamma_snr).max(0.0);
    if mc.a == 1.0 {
        0.5 * (-x).exp()
    } else if mc.a == 0.5 {
        0.5 * libm::erfc(x.sqrt())
    } else {
        0.5 * upper_gamma(mc.a, x).unwrap_or(0.0) / gamma(mc.a)
    }
}

/// How the three BER integrals are evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BerMethod {
    /// L1 and L2 in closed form, L3 by quadrature.
    Closed,
    /// As `Closed`, but L3 through the bivariate G-function, falling back to
    /// quadrature when the double contour does not converge.
    ClosedBivariate,
    /// All three integrals by adaptive quadrature.
    Quadrature,
}

/// Per-symbol BER and its ingredients.
#[derive(Debug, Clone, PartialEq)]
pub struct BerSymbol {
    pub value: f64,
    pub l1: f64,
    pub l2: f64,
    pub l3: f64,
    /// Set when the bivariate L3 path fell back to quadrature.
    pub fallback: Option<String>,
}

/// An average together with any backend fallbacks that occurred.
#[derive(Debug, Clone, PartialEq)]
pub struct AvgResult {
    pub value: f64,
    pub fallbacks: Vec<String>,
}

fn ber_tol() -> Tolerance {
    Tolerance::new(1e-15, 1e-10)
}

/// ∫_0^∞ x^{a−1} e^{−bx} g(x) dx.
fn weighted_integral(mc: &ModulationConstants, g: impl Fn(f64) -> Result<f64>) -> Result<f64> {
    let mut failure: Option<Error> = None;
    let integrand = |x: f64| -> f64 {
        if x <= 0.0 {
            return 0.0;
        }
        let w = ((mc.a - 1.0) * x.ln() - mc.b * x).exp();
        if w == 0.0 {
            return 0.0;
        }
        match g(x) {
            Ok(v) => w * v,
            Err(e) => {
                failure.get_or_insert(e);
                0.0
            }
        }
    };
    let r = integrate_to_inf(integrand, 0.0, 1.0 / mc.b, ber_tol())?;
    match failure {
        Some(e) => Err(e),
        None => Ok(r.value),
    }
}

pub fn l1_quadrature(m: &SrSnrModel, mc: &ModulationConstants) -> Result<f64> {
    weighted_integral(mc, |x| sr_snr_cdf(m, x))
}

pub fn l2_quadrature(p: &FsoParams, mc: &ModulationConstants) -> Result<f64> {
    weighted_integral(mc, |x| fso_snr_cdf(p, x))
}

pub fn l3_quadrature(m: &SrSnrModel, p: &FsoParams, mc: &ModulationConstants) -> Result<f64> {
    weighted_integral(mc, |x| Ok(sr_snr_cdf(m, x)? * fso_snr_cdf(p, x)?))
}

/// L2 = Θ1 b^{−a} G^{3θ,2}_{θ+2,3θ+1}(Θ2/(μb) | 1−a, 1, Θ3; Θ4, 0).
pub fn l2_closed(p: &FsoParams, mc: &ModulationConstants) -> Result<f64> {
    fso_moment(p, mc.a, mc.b)
}

/// ∫ x^{E−1} e^{−Kx} F_RD(x) dx = Θ1 K^{−E} G^{3θ,2}(Θ2/(μK) | 1−E, 1, Θ3; Θ4, 0).
fn fso_moment(p: &FsoParams, e: f64, k: f64) -> Result<f64> {
    let (t1, t2) = p.cdf_constants();
    let kern = p.cdf_kernel();
    let mut a = vec![1.0 - e];
    a.extend(kern.a);
    let spec = MeijerGSpec::new(kern.m, 2, a, kern.b)?;
    Ok(t1 * k.powf(-e) * meijer_g(&spec, t2 / (p.mu * k))?)
}

/// Coefficients and kernel arguments of the third (interference-limited) part of L1.
struct ThirdPart {
    /// ln of every factor except the kernel integral, per (m, β).
    terms: Vec<(u32, u32, f64)>,
    /// K = b + (α3 + r)/B.
    k: f64,
    /// D = δ̃²_SP,k / B.
    d: f64,
}

fn third_part(m: &SrSnrModel, mc: &ModulationConstants) -> ThirdPart {
    let (t1, t2) = (m.tau1, m.tau2);
    let r = m.ratio();
    let dsp = m.delta2_sp;
    let bb = m.b();
    let k = mc.b + (m.alpha3 + r) / bb;
    let d = dsp / bb;
    let mut terms = Vec::new();
    let base = -ln_gamma(f64::from(t2)) - r / dsp;
    for mm in 0..t1 {
        let mf = f64::from(mm);
        let lm = base - mf * bb.ln() - ln_gamma(mf + 1.0);
        for c in 0..=mm {
            if m.alpha3 == 0.0 && c < mm {
                continue;
            }
            let pow = if c == mm { 0.0 } else { f64::from(mm - c) * m.alpha3.ln() };
            let lc = lm + ln_binomial(mm, c) + pow + ln_gamma(f64::from(t2 + c));
            for l in 0..(t2 + c) {
                let beta = t2 + c - l;
                let lf = f64::from(l);
                let lt = lc + lf * r.ln() - ln_gamma(lf + 1.0) + (f64::from(c) - lf) * dsp.ln()
                    - ln_gamma(f64::from(beta));
                terms.push((mm, beta, lt));
            }
        }
    }
    ThirdPart { terms, k, d }
}

/// Sums the third part given the kernel integral for each (m, β), cached.
fn sum_third(tp: &ThirdPart, mut kernel: impl FnMut(u32, u32) -> Result<f64>) -> Result<f64> {
    let mut cache: Vec<((u32, u32), f64)> = Vec::new();
    let mut acc = Vec::with_capacity(tp.terms.len());
    for &(mm, beta, lt) in &tp.terms {
        let g = match cache.iter().find(|(key, _)| *key == (mm, beta)) {
            Some(&(_, v)) => v,
            None => {
                let v = kernel(mm, beta)?;
                cache.push(((mm, beta), v));
                v
            }
        };
        acc.push(lt.exp() * g);
    }
    Ok(sorted_sum(&mut acc))
}

/// L1 in closed form.
pub fn l1_closed(m: &SrSnrModel, mc: &ModulationConstants) -> Result<f64> {
    let (a, b) = (mc.a, mc.b);
    let (p2, q2) = m.branch_weights()?;
    let t1 = f64::from(m.tau1);
    let g_first = MeijerGSpec::new(1, 2, vec![1.0 - a, 1.0], vec![t1, 0.0])?;
    let first = if p2 > 0.0 {
        p2 / gamma(t1) * b.powf(-a) * meijer_g(&g_first, 1.0 / (m.a1() * b))?
    } else {
        0.0
    };
    let second = q2 * gamma(a) * b.powf(-a);
    let tp = third_part(m, mc);
    let third = sum_third(&tp, |mm, beta| {
        let e = a + f64::from(mm);
        let spec = MeijerGSpec::new(1, 2, vec![1.0 - e, 1.0 - f64::from(beta)], vec![0.0])?;
        Ok(tp.k.powf(-e) * meijer_g(&spec, tp.d / tp.k)?)
    })?;
    Ok(first + second - third)
}

/// L3 through the bivariate G-function.
pub fn l3_bivariate(m: &SrSnrModel, p: &FsoParams, mc: &ModulationConstants, l2: f64) -> Result<f64> {
    let (a, b) = (mc.a, mc.b);
    let (p2, q2) = m.branch_weights()?;
    let t1 = f64::from(m.tau1);
    let (th1, th2) = p.cdf_constants();
    let fso = p.cdf_kernel();
    let tol = 1e-9;
    let term_a = if p2 > 0.0 {
        let first = MeijerGSpec::new(1, 1, vec![1.0], vec![t1, 0.0])?;
        let spec = BivariateGSpec::new(1.0 - a, first, fso.clone())?;
        let g = meijer_g_bivariate_tol(&spec, 1.0 / (m.a1() * b), th2 / (p.mu * b), tol)?;
        p2 * th1 / gamma(t1) * b.powf(-a) * g.value
    } else {
        0.0
    };
    let tp = third_part(m, mc);
    let third = sum_third(&tp, |mm, beta| {
        let e = a + f64::from(mm);
        let first = MeijerGSpec::new(1, 1, vec![1.0 - f64::from(beta)], vec![0.0])?;
        let spec = BivariateGSpec::new(1.0 - e, first, fso.clone())?;
        let g = meijer_g_bivariate_tol(&spec, tp.d / tp.k, th2 / (p.mu * tp.k), tol)?;
        Ok(th1 * tp.k.powf(-e) * g.value)
    })?;
    Ok(term_a + q2 * l2 - third)
}

/// BER for one codeword.
pub fn ber_symbol(m: &SrSnrModel, p: &FsoParams, mc: &ModulationConstants, method: BerMethod) -> Result<BerSymbol> {
    let l2 = match method {
        BerMethod::Quadrature => l2_quadrature(p, mc)?,
        _ => l2_closed(p, mc)?,
    };
    ber_symbol_with_l2(m, p, mc, method, l2)
}

fn ber_symbol_with_l2(
    m: &SrSnrModel,
    p: &FsoParams,
    mc: &ModulationConstants,
    method: BerMethod,
    l2: f64,
) -> Result<BerSymbol> {
    let (l1, l3, fallback) = match method {
        BerMethod::Quadrature => (l1_quadrature(m, mc)?, l3_quadrature(m, p, mc)?, None),
        BerMethod::Closed => (l1_closed(m, mc)?, l3_quadrature(m, p, mc)?, None),
        BerMethod::ClosedBivariate => {
            let l1 = l1_closed(m, mc)?;
            match l3_bivariate(m, p, mc, l2) {
                Ok(v) => (l1, v, None),
                Err(e) => (
                    l1,
                    l3_quadrature(m, p, mc)?,
                    Some(format!("k={}: bivariate L3 fell back to quadrature ({e})", m.k)),
                ),
            }
        }
    };
    let value = (mc.prefactor() * (l1 + l2 - l3)).clamp(0.0, 0.5);
    Ok(BerSymbol { value, l1, l2, l3, fallback })
}

/// BER averaged over (j, k, n).
pub fn ber_avg(s: &ScenarioSet, mc: &ModulationConstants, method: BerMethod) -> Result<AvgResult> {
    let l2 = match method {
        BerMethod::Quadrature => l2_quadrature(&s.fso, mc)?,
        _ => l2_closed(&s.fso, mc)?,
    };
    let models = s.weighted_models()?;
    let vals: Vec<Result<BerSymbol>> = models
        .par_iter()
        .map(|(m, _)| ber_symbol_with_l2(m, &s.fso, mc, method, l2))
        .collect();
    let mut acc = Vec::with_capacity(vals.len());
    let mut fallbacks = Vec::new();
    for ((_, w), v) in models.iter().zip(vals) {
        let v = v?;
        acc.push(w * v.value);
        fallbacks.extend(v.fallback);
    }
    Ok(AvgResult {
        value: neumaier(acc) / s.symbol_count(),
        fallbacks,
    })
}

/// Error floor in the μ_θ → ∞ or P_A → ∞ limit.
pub fn ber_floor(s: &ScenarioSet, mc: &ModulationConstants, kind: FloorKind) -> Result<f64> {
    let pre = mc.prefactor();
    match kind {
        FloorKind::MuInf => average(s, |m| Ok(pre * l1_closed(m, mc)?)),
        FloorKind::PaInf => average(s, |m| Ok(pre * pa_inf_integral(m, &s.fso, mc)?)),
    }
}

/// Γ(a) b^{−a} − Σ_{l<τ1} A1^{−l}/l! κ^{−a−l} [Γ(a+l) − Θ1 G^{3θ,2}(Θ2/(μκ) | 1−a−l, 1, Θ3; Θ4, 0)].
fn pa_inf_integral(m: &SrSnrModel, p: &FsoParams, mc: &ModulationConstants) -> Result<f64> {
    let (a, b) = (mc.a, mc.b);
    let a1 = m.a1();
    let kappa = b + 1.0 / a1;
    let mut terms = vec![gamma(a) * b.powf(-a)];
    for l in 0..m.tau1 {
        let lf = f64::from(l);
        let e = a + lf;
        let lead = -lf * a1.ln() - ln_gamma(lf + 1.0);
        let g_part = fso_moment(p, e, kappa)?;
        terms.push(-(lead + ln_gamma(e) - e * kappa.ln()).exp());
        terms.push(lead.exp() * g_part);
    }
    Ok(sorted_sum(&mut terms))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channels::jakes_rho;
    use crate::MPS_PER_MPH;

    fn scenario(mu: f64, p_a: f64) -> ScenarioSet {
        let rho = jakes_rho(25.0 * MPS_PER_MPH, 5.9e9, 9500.0).unwrap();
        let rf = RfLinkConfig {
            rho_sr: rho,
            sigma2_eps_sr: 0.05,
            sigma2_eps_sp: 0.05,
            n_b: 6,
            ..RfLinkConfig::reference()
        };
        ScenarioSet {
            links: vec![SuLink { rf, p_a, p_m: 10f64.powf(2.7) }],
            fso: FsoParams::moderate(mu),
            eta0: 1.0,
            gamma_th: 2.0,
        }
    }

    #[test]
    fn cond_ber_examples() {
        assert_eq!(cond_ber(0.0, &ModulationConstants::BPSK), 0.5);
        assert!((cond_ber(1.0, &ModulationConstants::DBPSK) - 0.5 * (-1.0f64).exp()).abs() < 1e-16);
        assert!((cond_ber(1.0, &ModulationConstants::BPSK) - 0.078_649_603_525_143_19).abs() < 1e-15);
        let generic = ModulationConstants { a: 0.7, b: 1.3 };
        let expect = 0.5 * upper_gamma(0.7, 1.3 * 2.0).unwrap() / gamma(0.7);
        assert!((cond_ber(2.0, &generic) - expect).abs() < 1e-15);
    }

    #[test]
    fn outage_bounds() {
        let s = scenario(100.0, 10.0);
        let m = SrSnrModel::new(&s.links[0].rf, 10.0, 500.0, 1.0, 3).unwrap();
        let fsr = sr_snr_cdf(&m, 2.0).unwrap();
        let frd = fso_snr_cdf(&s.fso, 2.0).unwrap();
        let o = e2e_outage_cdf(2.0, &m, &s.fso).unwrap();
        assert!(o >= fsr.max(frd) && o <= fsr + frd);
        assert!(e2e_outage_cdf(1e300, &m, &s.fso).unwrap() > 1.0 - 1e-15);
    }

    #[test]
    fn single_codeword_average_is_one_cdf() {
        let mut s = scenario(100.0, 10.0);
        s.links[0].rf.n_b = 1;
        let m = SrSnrModel::new(&s.links[0].rf, 10.0, s.links[0].p_m, 1.0, 1).unwrap();
        assert_eq!(outage_avg(&s).unwrap(), e2e_outage_cdf(2.0, &m, &s.fso).unwrap());
    }

    #[test]
    fn l1_l2_closed_match_quadrature() {
        let s = scenario(100.0, 10.0);
        for mc in [ModulationConstants::BPSK, ModulationConstants::DBPSK, ModulationConstants::NCBFSK] {
            for k in [1, 6] {
                let m = SrSnrModel::new(&s.links[0].rf, 10.0, s.links[0].p_m, 1.0, k).unwrap();
                let c = l1_closed(&m, &mc).unwrap();
                let q = l1_quadrature(&m, &mc).unwrap();
                assert!(((c - q) / q).abs() < 1e-6, "{} k={k}: {c} vs {q}", mc.name());
            }
            let c = l2_closed(&s.fso, &mc).unwrap();
            let q = l2_quadrature(&s.fso, &mc).unwrap();
            assert!(((c - q) / q).abs() < 1e-6, "{}: {c} vs {q}", mc.name());
        }
    }

    #[test]
    fn pa_inf_integral_matches_quadrature() {
        let s = scenario(100.0, 10.0);
        let m = SrSnrModel::new(&s.links[0].rf, 10.0, s.links[0].p_m, 1.0, 4).unwrap();
        for mc in [ModulationConstants::BPSK, ModulationConstants::DBPSK] {
            let c = pa_inf_integral(&m, &s.fso, &mc).unwrap();
            let q = weighted_integral(&mc, |x| {
                let f = sr_snr_cdf_pa_inf(&m, x)?;
                Ok(combine(f, fso_snr_cdf(&s.fso, x)?))
            })
            .unwrap();
            assert!(((c - q) / q).abs() < 1e-7, "{c} vs {q}");
        }
    }
}
