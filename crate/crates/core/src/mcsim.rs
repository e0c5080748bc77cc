//! Frame-level Monte Carlo.
//!
//! Each frame draws, per SU-TX, the estimated cross gain at the first
//! codeword and the estimated SU → relay gain at the pilot, predicts the cross
//! gain forward, applies the composite power constraint and forms the
//! effective SNR of every codeword.  The FSO SNR is drawn independently per
//! codeword.
//!
//! Frames are processed in blocks of 4096.  Block b, transmitter j uses the
//! ChaCha8 stream b·J + j of the run seed, so results do not depend on how
//! blocks are scheduled across threads; block statistics are merged in
//! block order.

use crate::channels::{predict_cross_gain, CMatrix, FsoSampler, RfLinkConfig};
use crate::error::{domain, Error, Result};
use crate::perf::{cond_ber, ModulationConstants, ScenarioSet};
use crate::specfun::reg_lower_gamma;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Gamma};
use rayon::prelude::*;

pub const BLOCK_FRAMES: u64 = 4096;

#[derive(Debug, Clone, PartialEq)]
pub struct McResult {
    pub estimate: f64,
    /// Standard error of the mean of the per-frame averages.
    pub std_error: f64,
    pub frames: u64,
    pub seed: u64,
    /// Estimate restricted to codeword k (index k − 1).
    pub per_k: Vec<f64>,
    /// Fraction of draws on the peak-power branch, per codeword.
    pub pm_branch: Vec<f64>,
}

fn stream(seed: u64, id: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(id);
    rng
}

fn check_frames(frames: u64) -> Result<()> {
    if frames == 0 {
        return Err(domain("mcsim", "frames must be at least 1"));
    }
    Ok(())
}

/// Running statistics of one block for `m` metrics sharing the same draws
/// (Chan et al. pairwise merge).
#[derive(Debug, Clone)]
struct BlockStats {
    n: f64,
    mean: Vec<f64>,
    m2: Vec<f64>,
    /// Per-codeword sums, metric-major.
    per_k: Vec<Vec<f64>>,
    pm: Vec<f64>,
}

impl BlockStats {
    fn new(m: usize, nk: usize) -> Self {
        Self { n: 0.0, mean: vec![0.0; m], m2: vec![0.0; m], per_k: vec![vec![0.0; nk]; m], pm: vec![0.0; nk] }
    }

    fn push(&mut self, v: &[f64]) {
        self.n += 1.0;
        for ((mean, m2), &x) in self.mean.iter_mut().zip(&mut self.m2).zip(v) {
            let d = x - *mean;
            *mean += d / self.n;
            *m2 += d * (x - *mean);
        }
    }

    fn merge(&mut self, o: &BlockStats) {
        if o.n == 0.0 {
            return;
        }
        let n = self.n + o.n;
        for i in 0..self.mean.len() {
            let d = o.mean[i] - self.mean[i];
            self.mean[i] += d * o.n / n;
            self.m2[i] += o.m2[i] + d * d * self.n * o.n / n;
            for (a, b) in self.per_k[i].iter_mut().zip(&o.per_k[i]) {
                *a += b;
            }
        }
        self.n = n;
        for (a, b) in self.pm.iter_mut().zip(&o.pm) {
            *a += b;
        }
    }
}

fn run_blocks<F>(frames: u64, seed: u64, m: usize, nk: usize, pm_den: f64, block: F) -> Result<Vec<McResult>>
where
    F: Fn(u64, u64) -> Result<BlockStats> + Sync,
{
    check_frames(frames)?;
    let nblocks = frames.div_ceil(BLOCK_FRAMES);
    let stats: Vec<Result<BlockStats>> = (0..nblocks)
        .into_par_iter()
        .map(|b| {
            let n = BLOCK_FRAMES.min(frames - b * BLOCK_FRAMES);
            block(b, n)
        })
        .collect();
    let mut total = BlockStats::new(m, nk);
    for s in stats {
        total.merge(&s?);
    }
    let f = frames as f64;
    let pm_branch: Vec<f64> = total.pm.iter().map(|v| v / (f * pm_den)).collect();
    Ok((0..m)
        .map(|i| {
            let var = if total.n > 1.0 { total.m2[i] / (total.n - 1.0) } else { 0.0 };
            McResult {
                estimate: total.mean[i],
                std_error: (var / f).sqrt(),
                frames,
                seed,
                per_k: total.per_k[i].iter().map(|v| v / f).collect(),
                pm_branch: pm_branch.clone(),
            }
        })
        .collect())
}

/// Per-codeword constants of the effective SNR: numerator and noise factors.
#[derive(Debug, Clone)]
struct LinkConsts {
    tau1: f64,
    tau2: f64,
    scale_sr: f64,
    scale_sp1: f64,
    p_a: f64,
    p_m: f64,
    base: f64,
    /// ρ^{2i} per codeword.
    gain: Vec<f64>,
    /// ρ^{2i} σ̄²_ε + (1 − ρ^{2i}) σ̄²_innov per codeword.
    noise: Vec<f64>,
    /// ρ_SP^{2(k−1)} per codeword.
    predict: Vec<f64>,
    weight: f64,
}

impl LinkConsts {
    fn new(cfg: &RfLinkConfig, p_a: f64, p_m: f64, eta0: f64) -> Result<Self> {
        cfg.validate()?;
        let na = f64::from(cfg.n_a);
        let mut gain = Vec::new();
        let mut noise = Vec::new();
        let mut predict = Vec::new();
        for k in 1..=cfg.n_b {
            let i = cfg.pilot_distance(k)?;
            let r2i = cfg.rho_sr.powi(2 * i as i32);
            gain.push(r2i);
            noise.push(r2i * na * cfg.sigma2_eps_sr + (1.0 - r2i) * na * cfg.sigma2_innov);
            predict.push(predict_cross_gain(1.0, cfg.rho_sp, k));
        }
        Ok(Self {
            tau1: f64::from(cfg.tau1()),
            tau2: f64::from(cfg.tau2()),
            scale_sr: cfg.delta2_sr_eff(),
            scale_sp1: cfg.delta2_sp + cfg.sigma2_eps_sp,
            p_a,
            p_m,
            base: cfg.code_rate() * f64::from(cfg.n_s) * eta0,
            gain,
            noise,
            predict,
            weight: f64::from(cfg.block_symbols),
        })
    }

    /// Effective SNR at the relay for transmit power p_s.
    #[inline]
    fn snr(&self, k: usize, p_s: f64, g_sr: f64) -> f64 {
        p_s * self.gain[k] * g_sr / (self.base + p_s * self.noise[k])
    }

    /// min(P_M, P_A/Ĝ) with the tie on the P_M branch.
    #[inline]
    fn power(&self, g_sp: f64) -> (f64, bool) {
        if g_sp * self.p_m <= self.p_a {
            (self.p_m, true)
        } else {
            (self.p_a / g_sp, false)
        }
    }
}

fn scenario_consts(s: &ScenarioSet) -> Result<Vec<LinkConsts>> {
    s.validate()?;
    s.links
        .iter()
        .map(|l| LinkConsts::new(&l.rf, l.p_a, l.p_m, s.eta0))
        .collect()
}

/// Shared frame loop: `metric` maps each codeword's end-to-end SNR to one
/// contribution per output, so several metrics see the same draws.
fn simulate<M>(s: &ScenarioSet, frames: u64, seed: u64, m: usize, metric: M) -> Result<Vec<McResult>>
where
    M: Fn(f64, &mut [f64]) + Sync,
{
    let links = scenario_consts(s)?;
    let sampler = FsoSampler::new(&s.fso)?;
    let nk = links.iter().map(|l| l.gain.len()).max().unwrap_or(0);
    let total_w: f64 = links.iter().map(|l| l.weight * l.gain.len() as f64).sum();
    let jn = links.len() as u64;
    let dists: Vec<(Gamma<f64>, Gamma<f64>)> = links
        .iter()
        .map(|l| {
            Ok((
                Gamma::new(l.tau1, l.scale_sr).map_err(|e| Error::Config(e.to_string()))?,
                Gamma::new(l.tau2, l.scale_sp1).map_err(|e| Error::Config(e.to_string()))?,
            ))
        })
        .collect::<Result<_>>()?;
    // Count of SU-TXs active at each codeword, for the per-k breakdown.
    let mut active = vec![0.0; nk];
    for l in &links {
        for a in active.iter_mut().take(l.gain.len()) {
            *a += 1.0;
        }
    }
    run_blocks(frames, seed, m, nk, 1.0, |b, n| {
        let mut st = BlockStats::new(m, nk);
        let mut rngs: Vec<ChaCha8Rng> = (0..jn).map(|j| stream(seed, b * jn + j)).collect();
        let mut frame_k = vec![vec![0.0; nk]; m];
        let mut acc = vec![0.0; m];
        let mut sum_j = vec![0.0; m];
        let mut v = vec![0.0; m];
        for _ in 0..n {
            acc.iter_mut().for_each(|x| *x = 0.0);
            frame_k.iter_mut().flatten().for_each(|x| *x = 0.0);
            for (j, l) in links.iter().enumerate() {
                let rng = &mut rngs[j];
                let g_sr = dists[j].0.sample(rng);
                let g_sp1 = dists[j].1.sample(rng);
                sum_j.iter_mut().for_each(|x| *x = 0.0);
                for k in 0..l.gain.len() {
                    let (p_s, on_pm) = l.power(g_sp1 * l.predict[k]);
                    if on_pm {
                        st.pm[k] += 1.0 / active[k];
                    }
                    let g_rd = sampler.sample(rng);
                    metric(l.snr(k, p_s, g_sr).min(g_rd), &mut v);
                    for i in 0..m {
                        sum_j[i] += v[i];
                        frame_k[i][k] += v[i] / active[k];
                    }
                }
                for i in 0..m {
                    acc[i] += l.weight * sum_j[i];
                }
            }
            acc.iter_mut().for_each(|x| *x /= total_w);
            st.push(&acc);
            for (dst, src) in st.per_k.iter_mut().zip(&frame_k) {
                for (a, b) in dst.iter_mut().zip(src) {
                    *a += b;
                }
            }
        }
        Ok(st)
    })
}

fn single(r: Result<Vec<McResult>>) -> Result<McResult> {
    r.map(|mut v| v.swap_remove(0))
}

/// Empirical net outage probability.
pub fn mc_outage(s: &ScenarioSet, frames: u64, seed: u64) -> Result<McResult> {
    let th = s.gamma_th;
    single(simulate(s, frames, seed, 1, |g, out| out[0] = if g < th { 1.0 } else { 0.0 }))
}

/// Semi-analytic BER: the conditional error probability averaged over sampled SNRs.
pub fn mc_ber(s: &ScenarioSet, mc: &ModulationConstants, frames: u64, seed: u64) -> Result<McResult> {
    single(mc_ber_many(s, std::slice::from_ref(mc), frames, seed))
}

/// [`mc_ber`] for several modulations over one set of draws; each result
/// equals the single-modulation run with the same seed.
pub fn mc_ber_many(s: &ScenarioSet, mcs: &[ModulationConstants], frames: u64, seed: u64) -> Result<Vec<McResult>> {
    if mcs.is_empty() {
        return Err(domain("mc_ber_many", "no modulation given"));
    }
    simulate(s, frames, seed, mcs.len(), |g, out| {
        for (o, mc) in out.iter_mut().zip(mcs) {
            *o = cond_ber(g, mc);
        }
    })
}

/// Raw draws of the SU → relay SNR at codeword k.
pub fn mc_sr_snr_samples(
    cfg: &RfLinkConfig,
    p_a: f64,
    p_m: f64,
    eta0: f64,
    k: u32,
    count: usize,
    seed: u64,
) -> Result<Vec<f64>> {
    if count == 0 {
        return Err(domain("mc_sr_snr_samples", "count must be at least 1"));
    }
    let l = LinkConsts::new(cfg, p_a, p_m, eta0)?;
    cfg.pilot_distance(k)?;
    let ki = (k - 1) as usize;
    let d_sr = Gamma::new(l.tau1, l.scale_sr).map_err(|e| Error::Config(e.to_string()))?;
    let d_sp = Gamma::new(l.tau2, l.scale_sp1).map_err(|e| Error::Config(e.to_string()))?;
    let nblocks = (count as u64).div_ceil(BLOCK_FRAMES);
    let parts: Vec<Vec<f64>> = (0..nblocks)
        .into_par_iter()
        .map(|b| {
            let n = BLOCK_FRAMES.min(count as u64 - b * BLOCK_FRAMES);
            let mut rng = stream(seed, b);
            (0..n)
                .map(|_| {
                    let g_sr = d_sr.sample(&mut rng);
                    let g_sp = d_sp.sample(&mut rng) * l.predict[ki];
                    l.snr(ki, l.power(g_sp).0, g_sr)
                })
                .collect()
        })
        .collect();
    Ok(parts.concat())
}

/// Interference constraint applied by the secondary transmitters.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PowerConstraint {
    /// min(P_M, P_A/Ĝ).
    Composite,
    /// P_A/Ĝ with no peak-power cap.
    FixedOnly,
}

/// Primary link used for the interference study: fixed-power Alamouti over
/// n_tx × n_rx Rayleigh fading, outage when log2(1 + P_U G/(n_tx (η + I))) < rate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PrimaryConfig {
    pub p_u: f64,
    pub n_tx: u32,
    pub n_rx: u32,
    pub eta: f64,
    /// Target rate, bits/s/Hz.
    pub rate: f64,
}

impl PrimaryConfig {
    /// 2×2 link whose interference-free outage equals `target`.
    pub fn calibrated(p_u: f64, eta: f64, target: f64) -> Result<Self> {
        if !(target > 0.0 && target < 1.0) || !(p_u > 0.0) || !(eta > 0.0) {
            return Err(domain("PrimaryConfig::calibrated", "need P_U, eta > 0 and target in (0, 1)"));
        }
        let (n_tx, n_rx) = (2, 2);
        let g = gamma_quantile(f64::from(n_tx * n_rx), target)?;
        let rate = (1.0 + p_u * g / (f64::from(n_tx) * eta)).log2();
        Ok(Self { p_u, n_tx, n_rx, eta, rate })
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.p_u > 0.0 && self.eta > 0.0 && self.rate > 0.0) || self.n_tx == 0 || self.n_rx == 0 {
            return Err(Error::Config("primary link parameters must be positive".into()));
        }
        Ok(())
    }

    /// Outage without secondary interference.
    pub fn interference_free_outage(&self) -> Result<f64> {
        let g = (2f64.powf(self.rate) - 1.0) * f64::from(self.n_tx) * self.eta / self.p_u;
        reg_lower_gamma(f64::from(self.n_tx * self.n_rx), g)
    }
}

/// Unit-scale Gamma(shape) quantile by bisection in ln x.
fn gamma_quantile(shape: f64, u: f64) -> Result<f64> {
    let (mut lo, mut hi) = (-60.0f64, 10.0f64);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if reg_lower_gamma(shape, mid.exp())? < u {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok((0.5 * (lo + hi)).exp())
}

/// Empirical outage of the primary link under secondary interference.
///
/// The true cross channel at the first codeword is H = Ĥ − E, with the
/// estimate Ĥ of variance δ²_SP + σ²_ε,SP and the error E of variance
/// σ²_ε,SP; it then evolves as an AR(1) process with ρ_SP.  The draws do not
/// depend on `constraint`, so two constraints run with the same seed share
/// random numbers.
pub fn mc_primary_outage(
    pc: &PrimaryConfig,
    s: &ScenarioSet,
    constraint: PowerConstraint,
    frames: u64,
    seed: u64,
) -> Result<McResult> {
    pc.validate()?;
    let links = scenario_consts(s)?;
    let nk = links.iter().map(|l| l.gain.len()).max().unwrap_or(0);
    let jn = links.len() as u64;
    let g_pp = Gamma::new(f64::from(pc.n_tx * pc.n_rx), 1.0).map_err(|e| Error::Config(e.to_string()))?;
    let thresh = (2f64.powf(pc.rate) - 1.0) * f64::from(pc.n_tx) / pc.p_u;
    single(run_blocks(frames, seed, 1, nk, jn as f64, |b, n| {
        let mut st = BlockStats::new(1, nk);
        let mut rngs: Vec<ChaCha8Rng> = (0..=jn).map(|j| stream(seed, b * (jn + 1) + j)).collect();
        let mut interference = vec![0.0; nk];
        for _ in 0..n {
            interference.iter_mut().for_each(|v| *v = 0.0);
            for (j, (l, link)) in links.iter().zip(&s.links).enumerate() {
                let rf = &link.rf;
                let rng = &mut rngs[j];
                let (rows, cols) = (rf.n_p as usize, rf.n_s as usize);
                let h_true = CMatrix::gaussian(rows, cols, rf.delta2_sp, rng);
                let mut h_hat = h_true.clone();
                if rf.sigma2_eps_sp > 0.0 {
                    let e = CMatrix::gaussian(rows, cols, rf.sigma2_eps_sp, rng);
                    for (z, ez) in h_hat.data.iter_mut().zip(&e.data) {
                        *z += ez;
                    }
                }
                let g_hat1 = h_hat.frobenius2();
                let mut h = h_true;
                let w = (1.0 - rf.rho_sp * rf.rho_sp).max(0.0).sqrt();
                for k in 0..l.gain.len() {
                    if k > 0 && rf.rho_sp != 1.0 {
                        let innov = CMatrix::gaussian(rows, cols, rf.delta2_sp, rng);
                        for (z, ez) in h.data.iter_mut().zip(&innov.data) {
                            *z = rf.rho_sp * *z + w * ez;
                        }
                    }
                    let g_pred = g_hat1 * l.predict[k];
                    let (p_s, on_pm) = match constraint {
                        PowerConstraint::Composite => l.power(g_pred),
                        PowerConstraint::FixedOnly => (l.p_a / g_pred, false),
                    };
                    if on_pm {
                        st.pm[k] += 1.0;
                    }
                    interference[k] += p_s * h.frobenius2();
                }
            }
            let rng = &mut rngs[jn as usize];
            let mut out = 0.0;
            for (k, i) in interference.iter().enumerate() {
                let g: f64 = g_pp.sample(rng);
                let v = if g < thresh * (pc.eta + i) { 1.0 } else { 0.0 };
                st.per_k[0][k] += v;
                out += v;
            }
            st.push(&[out / nk as f64]);
        }
        Ok(st)
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channels::FsoParams;
    use crate::perf::{outage_avg, SuLink};

    fn small(gamma_th: f64) -> ScenarioSet {
        let rf = RfLinkConfig { n_b: 4, ..RfLinkConfig::reference() };
        ScenarioSet {
            links: vec![SuLink { rf: rf.clone(), p_a: 10.0, p_m: 500.0 }, SuLink { rf, p_a: 5.0, p_m: 500.0 }],
            fso: FsoParams::moderate(100.0),
            eta0: 1.0,
            gamma_th,
        }
    }

    #[test]
    fn shared_draws_match_single_runs() {
        let s = small(2.0);
        let mods = [ModulationConstants::BPSK, ModulationConstants::DBPSK];
        let many = mc_ber_many(&s, &mods, 9000, 11).unwrap();
        for (mc, r) in mods.iter().zip(&many) {
            assert_eq!(*r, mc_ber(&s, mc, 9000, 11).unwrap());
        }
    }

    #[test]
    fn zero_frames_rejected() {
        assert!(mc_outage(&small(2.0), 0, 1).is_err());
    }

    #[test]
    fn trivial_thresholds() {
        assert_eq!(mc_outage(&small(1e-300), 5000, 3).unwrap().estimate, 0.0);
        assert_eq!(mc_outage(&small(1e12), 5000, 3).unwrap().estimate, 1.0);
    }

    #[test]
    fn deterministic_and_thread_independent() {
        let s = small(2.0);
        let a = mc_outage(&s, 10_000, 42).unwrap();
        let pool = rayon::ThreadPoolBuilder::new().num_threads(3).build().unwrap();
        let b = pool.install(|| mc_outage(&s, 10_000, 42).unwrap());
        assert_eq!(a, b);
        let c = mc_outage(&s, 10_000, 43).unwrap();
        assert_ne!(a.estimate, c.estimate);
    }

    #[test]
    fn agrees_with_analytic_outage() {
        let s = small(20.0);
        let r = mc_outage(&s, 100_000, 9).unwrap();
        let a = outage_avg(&s).unwrap();
        assert!((r.estimate - a).abs() < 4.0 * r.std_error, "{} ± {} vs {a}", r.estimate, r.std_error);
    }

    #[test]
    fn calibrated_primary() {
        let pc = PrimaryConfig::calibrated(100.0, 1.0, 1e-3).unwrap();
        assert!((pc.interference_free_outage().unwrap() - 1e-3).abs() < 1e-12);
    }
}
