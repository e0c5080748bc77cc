//! Named figure presets.
//!
//! Every preset is a list of curve variants sharing one sweep axis.  Common
//! defaults: J = 5 SU-TXs, N_S = 3, N_R = N_P = 2, unit channel variances,
//! γ_th = 3 dB, N_b = 50 codewords, P_M = 27 dBW, η0 = 1, the rate-1/2 G3
//! code (B = 4 symbols over T = 8 channel uses, N_a = 3 non-zero entries per
//! antenna), f_c = 5.9 GHz, R_s = 9.5 kbaud, γ̄_RD = 20 dB, heterodyne
//! detection and moderate turbulence.
//!
//! Doppler is attributed per link: ρ_SR follows the SU-TX speed, ρ_SP the
//! PU-RX speed.

use crate::channels::{jakes_rho, FsoParams, RfLinkConfig};
use crate::error::{Error, Result};
use crate::mcsim::{PowerConstraint, PrimaryConfig};
use crate::perf::{ModulationConstants, ScenarioSet, SuLink};
use crate::{db_to_linear, MPS_PER_MPH};

pub const CARRIER_HZ: f64 = 5.9e9;
pub const SYMBOL_RATE: f64 = 9500.0;
pub const PATH_LOSS_EXPONENT: f64 = 2.5;
pub const DEFAULT_J: usize = 5;
pub const DEFAULT_P_M_DBW: f64 = 27.0;
pub const DEFAULT_GAMMA_TH_DB: f64 = 3.0;
pub const DEFAULT_MU_DB: f64 = 20.0;

/// Correlation for a speed in mph.
pub fn rho_mph(mph: f64) -> f64 {
    jakes_rho(mph * MPS_PER_MPH, CARRIER_HZ, SYMBOL_RATE).expect("speeds in presets are valid")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepAxis {
    /// Peak interference power, dB relative to η0.
    PaDb,
    /// Average FSO SNR, dB.
    MuDb,
    /// Relay antennas.
    NR,
    /// SU-TX → relay distance (δ²_SR = d^{−2.5}).
    DSr,
    /// SU-TX → PU-RX distance (δ²_SP = d^{−2.5}).
    DSp,
    /// Pointing-error ratio ξ.
    Xi,
}

impl SweepAxis {
    pub const ALL: [SweepAxis; 6] = [Self::PaDb, Self::MuDb, Self::NR, Self::DSr, Self::DSp, Self::Xi];

    /// Column / config name.
    pub fn name(&self) -> &'static str {
        match self {
            Self::PaDb => "P_A_dB",
            Self::MuDb => "mu_dB",
            Self::NR => "N_R",
            Self::DSr => "d_SR",
            Self::DSp => "d_SP",
            Self::Xi => "xi",
        }
    }

    pub fn by_name(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|a| a.name().eq_ignore_ascii_case(s))
    }

    /// Sets the swept quantity on every SU-TX / the FSO hop.
    pub fn apply(&self, s: &mut ScenarioSet, v: f64) -> Result<()> {
        if !v.is_finite() {
            return Err(Error::Config(format!("{} value must be finite", self.name())));
        }
        match self {
            Self::PaDb => s.links.iter_mut().for_each(|l| l.p_a = db_to_linear(v) * s.eta0),
            Self::MuDb => s.fso.mu = db_to_linear(v),
            Self::NR => {
                if v < 1.0 || v.fract() != 0.0 {
                    return Err(Error::Config(format!("N_R must be a positive integer, got {v}")));
                }
                s.links.iter_mut().for_each(|l| l.rf.n_r = v as u32);
            }
            Self::DSr | Self::DSp => {
                if !(v > 0.0) {
                    return Err(Error::Config(format!("{} must be positive", self.name())));
                }
                let g = v.powf(-PATH_LOSS_EXPONENT);
                for l in &mut s.links {
                    if *self == Self::DSr {
                        l.rf.delta2_sr = g;
                        l.rf.sigma2_innov = g;
                    } else {
                        l.rf.delta2_sp = g;
                    }
                }
            }
            Self::Xi => s.fso.xi = v,
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Sweep {
    pub axis: SweepAxis,
    pub values: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Metric {
    Outage,
    Ber(Vec<ModulationConstants>),
    /// Outage of the primary link under secondary interference.
    PrimaryOutage(PrimaryConfig),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Variant {
    pub label: String,
    pub scenario: ScenarioSet,
    pub constraint: PowerConstraint,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FigurePreset {
    pub id: &'static str,
    pub description: &'static str,
    pub metric: Metric,
    pub sweep: Sweep,
    pub variants: Vec<Variant>,
    /// Whether floors are reported next to finite-parameter values.
    pub floors: bool,
    /// Physical parameters behind fitted values, for the output header.
    pub notes: Vec<(&'static str, String)>,
}

impl FigurePreset {
    pub fn variant(&self, label: &str) -> Result<&Variant> {
        self.variants.iter().find(|v| v.label == label).ok_or_else(|| {
            let valid: Vec<&str> = self.variants.iter().map(|v| v.label.as_str()).collect();
            Error::Config(format!("preset {} has no variant {label:?} (valid: {})", self.id, valid.join(", ")))
        })
    }

    /// Scenario of one variant at one sweep point.
    pub fn scenario_at(&self, variant: &Variant, v: f64) -> Result<ScenarioSet> {
        let mut s = variant.scenario.clone();
        self.sweep.axis.apply(&mut s, v)?;
        s.validate()?;
        Ok(s)
    }
}

pub const PRESET_IDS: [&str; 8] = ["fig2a", "fig2b", "fig3", "fig4", "fig5", "fig6", "fig7", "fig8"];

/// Knobs for building a homogeneous scenario.
#[derive(Debug, Clone, Copy)]
struct Knobs {
    j: usize,
    su_mph: f64,
    pu_mph: f64,
    eps_sr: f64,
    eps_sp: f64,
    pilot: u32,
    p_a_db: f64,
    p_m_dbw: f64,
    fso: FsoParams,
}

impl Default for Knobs {
    fn default() -> Self {
        Self {
            j: DEFAULT_J,
            su_mph: 0.0,
            pu_mph: 0.0,
            eps_sr: 0.0,
            eps_sp: 0.0,
            pilot: 1,
            p_a_db: 10.0,
            p_m_dbw: DEFAULT_P_M_DBW,
            fso: FsoParams::moderate(db_to_linear(DEFAULT_MU_DB)),
        }
    }
}

fn build(k: Knobs, rf: RfLinkConfig) -> ScenarioSet {
    let rf = RfLinkConfig {
        rho_sr: rho_mph(k.su_mph),
        rho_sp: rho_mph(k.pu_mph),
        sigma2_eps_sr: k.eps_sr,
        sigma2_eps_sp: k.eps_sp,
        pilot: k.pilot,
        ..rf
    };
    let link = SuLink {
        rf,
        p_a: db_to_linear(k.p_a_db),
        p_m: db_to_linear(k.p_m_dbw),
    };
    ScenarioSet {
        links: vec![link; k.j],
        fso: k.fso,
        eta0: 1.0,
        gamma_th: db_to_linear(DEFAULT_GAMMA_TH_DB),
    }
}

fn variant(label: &str, k: Knobs) -> Variant {
    variant_rf(label, k, RfLinkConfig::reference())
}

fn variant_rf(label: &str, k: Knobs, rf: RfLinkConfig) -> Variant {
    Variant {
        label: label.to_string(),
        scenario: build(k, rf),
        constraint: PowerConstraint::Composite,
    }
}

fn grid(lo: f64, hi: f64, step: f64) -> Vec<f64> {
    let n = ((hi - lo) / step).round() as usize;
    (0..=n).map(|i| lo + step * i as f64).collect()
}

fn turbulence_notes() -> Vec<(&'static str, String)> {
    vec![
        ("Cn2_m^-2/3", "3e-14 (moderate), 1e-13 (strong)".into()),
        ("link_length_km", "1 (moderate), 2 (strong)".into()),
        ("aperture_radius_m", "0.1".into()),
        ("wavelength_m", "1.55e-6".into()),
    ]
}

/// Looks up a preset by id.
pub fn preset(id: &str) -> Result<FigurePreset> {
    let pa_sweep = Sweep { axis: SweepAxis::PaDb, values: grid(0.0, 40.0, 2.5) };
    let base = Knobs::default();
    let p = match id {
        "fig2a" => FigurePreset {
            id: "fig2a",
            description: "Outage vs P_A for static, SU-mobile and PU-mobile nodes, perfect CSI",
            metric: Metric::Outage,
            sweep: pa_sweep,
            variants: vec![
                variant("static", base),
                variant("su17", Knobs { su_mph: 17.0, ..base }),
                variant("su45", Knobs { su_mph: 45.0, ..base }),
                variant("pu45", Knobs { pu_mph: 45.0, ..base }),
            ],
            floors: true,
            notes: turbulence_notes(),
        },
        "fig2b" => FigurePreset {
            id: "fig2b",
            description: "Outage vs P_A with imperfect CSI at the relay and at the SU-TXs, preamble",
            metric: Metric::Outage,
            sweep: pa_sweep,
            variants: vec![
                variant("su17_eps_sr0", Knobs { su_mph: 17.0, ..base }),
                variant("su17_eps_sr0.05", Knobs { su_mph: 17.0, eps_sr: 0.05, ..base }),
                variant("pu45_eps_sp0", Knobs { pu_mph: 45.0, ..base }),
                variant("pu45_eps_sp0.05", Knobs { pu_mph: 45.0, eps_sp: 0.05, ..base }),
            ],
            floors: true,
            notes: turbulence_notes(),
        },
        "fig3" => {
            let su = Knobs { su_mph: 17.0, ..base };
            let strong = FsoParams::strong(db_to_linear(DEFAULT_MU_DB));
            FigurePreset {
                id: "fig3",
                description: "Preamble (L=1) vs midamble (L=25), SU-TXs at 17 mph, moderate and strong turbulence",
                metric: Metric::Outage,
                sweep: pa_sweep,
                variants: vec![
                    variant("L1_moderate", su),
                    variant("L25_moderate", Knobs { pilot: 25, ..su }),
                    variant("L1_strong", Knobs { fso: strong, ..su }),
                    variant("L25_strong", Knobs { pilot: 25, fso: strong, ..su }),
                ],
                floors: true,
                notes: turbulence_notes(),
            }
        }
        "fig4" => {
            let rf = RfLinkConfig { n_s: 3, n_r: 3, n_p: 2, ..RfLinkConfig::reference() };
            let k = Knobs { j: 1, p_a_db: 15.0, ..base };
            let mut near = variant_rf("d_SP1", k, rf.clone());
            let mut far = variant_rf("d_SP5", k, rf);
            SweepAxis::DSp.apply(&mut near.scenario, 1.0)?;
            SweepAxis::DSp.apply(&mut far.scenario, 5.0)?;
            FigurePreset {
                id: "fig4",
                description: "Outage vs SU-TX/relay distance for two SU-TX/PU-RX distances, single SU-TX, P_A = 15 dB",
                metric: Metric::Outage,
                sweep: Sweep { axis: SweepAxis::DSr, values: grid(1.0, 16.0, 0.5) },
                variants: vec![near, far],
                floors: false,
                notes: vec![("path_loss_exponent", PATH_LOSS_EXPONENT.to_string())],
            }
        }
        "fig5" => {
            let k = Knobs { su_mph: 17.0, pu_mph: 17.0, eps_sr: 0.1, eps_sp: 0.1, ..base };
            FigurePreset {
                id: "fig5",
                description: "Outage vs relay antennas N_R, all nodes at 17 mph, sigma2_eps = 0.1",
                metric: Metric::Outage,
                sweep: Sweep { axis: SweepAxis::NR, values: grid(2.0, 8.0, 1.0) },
                variants: vec![
                    variant("pa5", Knobs { p_a_db: 5.0, ..k }),
                    variant("pa10", Knobs { p_a_db: 10.0, ..k }),
                    variant("pa15", Knobs { p_a_db: 15.0, ..k }),
                ],
                floors: false,
                notes: turbulence_notes(),
            }
        }
        "fig6" => {
            let k = Knobs { eps_sr: 0.05, eps_sp: 0.05, ..base };
            FigurePreset {
                id: "fig6",
                description: "BER vs P_A under node mobility, sigma2_eps = 0.05, preamble",
                metric: Metric::Ber(vec![ModulationConstants::BPSK, ModulationConstants::DBPSK]),
                sweep: pa_sweep,
                variants: vec![
                    variant("static", k),
                    variant("pu45", Knobs { pu_mph: 45.0, ..k }),
                    variant("su25", Knobs { su_mph: 25.0, ..k }),
                    variant("su45", Knobs { su_mph: 45.0, ..k }),
                ],
                floors: true,
                notes: turbulence_notes(),
            }
        }
        "fig7" => {
            let k = Knobs {
                su_mph: 40.0,
                eps_sr: 0.05,
                eps_sp: 0.05,
                p_a_db: 20.0,
                fso: FsoParams::strong(db_to_linear(20.0)),
                ..base
            };
            FigurePreset {
                id: "fig7",
                description: "BER vs pointing-error ratio xi = w_e/(2 sigma_s), strong turbulence, SU-TXs at 40 mph",
                metric: Metric::Ber(vec![ModulationConstants::BPSK, ModulationConstants::DBPSK]),
                sweep: Sweep { axis: SweepAxis::Xi, values: grid(0.5, 4.0, 0.25) },
                variants: vec![variant("strong_su40", k)],
                floors: true,
                notes: turbulence_notes(),
            }
        }
        "fig8" => {
            let k = Knobs { p_m_dbw: 10.0, ..base };
            let primary = PrimaryConfig::calibrated(db_to_linear(20.0), 1.0, 1e-3)?;
            let mut fixed = variant("fixed_only", k);
            fixed.constraint = PowerConstraint::FixedOnly;
            FigurePreset {
                id: "fig8",
                description: "Primary 2x2 Alamouti outage vs P_A, composite vs fixed-only interference constraint",
                metric: Metric::PrimaryOutage(primary),
                sweep: Sweep { axis: SweepAxis::PaDb, values: grid(0.0, 30.0, 2.5) },
                variants: vec![variant("composite", k), fixed],
                floors: false,
                notes: vec![
                    ("P_U_dBW", "20".into()),
                    ("primary_target_outage", "1e-3 without interference".into()),
                ],
            }
        }
        _ => {
            return Err(Error::UnknownPreset {
                id: id.to_string(),
                valid: PRESET_IDS.join(", "),
            })
        }
    };
    Ok(p)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_presets_validate() {
        for id in PRESET_IDS {
            let p = preset(id).unwrap();
            assert!(!p.variants.is_empty());
            for v in &p.variants {
                for &x in &p.sweep.values {
                    p.scenario_at(v, x).unwrap();
                }
            }
        }
    }

    #[test]
    fn unknown_preset_lists_ids() {
        let e = preset("fig9").unwrap_err().to_string();
        assert!(e.contains("fig2a") && e.contains("fig8"), "{e}");
    }

    #[test]
    fn fig4_geometry() {
        let p = preset("fig4").unwrap();
        let s = p.scenario_at(&p.variants[1], 2.0).unwrap();
        assert_eq!(s.links.len(), 1);
        let rf = &s.links[0].rf;
        assert_eq!((rf.n_s, rf.n_r, rf.n_p, rf.pilot), (3, 3, 2, 1));
        assert!((rf.delta2_sr - 2f64.powf(-2.5)).abs() < 1e-15);
        assert!((rf.delta2_sp - 5f64.powf(-2.5)).abs() < 1e-15);
        assert!((s.links[0].p_a - db_to_linear(15.0)).abs() < 1e-12);
    }

    #[test]
    fn speed_mapping() {
        assert_eq!(rho_mph(0.0), 1.0);
        assert!((rho_mph(17.0) - 0.997_555_3).abs() < 1e-6);
        let p = preset("fig2a").unwrap();
        let pu = &p.variant("pu45").unwrap().scenario.links[0].rf;
        assert_eq!(pu.rho_sr, 1.0);
        assert!(pu.rho_sp < 1.0);
    }
}
