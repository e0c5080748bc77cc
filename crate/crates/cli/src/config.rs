//! Scenario config files.
//!
//! Line-oriented `key = value` pairs grouped under `[system]`, `[rf]`,
//! `[fso]`, `[sweep]` and `[mc]` headers.  `#` starts a comment.  Numbers
//! may carry a unit suffix where the key allows one:
//!
//! | suffix | meaning                                   |
//! |--------|-------------------------------------------|
//! | `dB`   | power ratio; `p_a` in dB is relative to η0 |
//! | `dBW`  | absolute power                            |
//! | `mph`, `mps` | node speed, mapped to ρ by Jakes' model |
//!
//! Values without a suffix are linear.  Lists are comma separated.

use cogrelay::channels::{jakes_rho, FsoParams, RfLinkConfig};
use cogrelay::mcsim::{PowerConstraint, PrimaryConfig};
use cogrelay::perf::{ModulationConstants, ScenarioSet, SuLink};
use cogrelay::scenarios::{FigurePreset, Metric, Sweep, SweepAxis, Variant, CARRIER_HZ, SYMBOL_RATE};
use cogrelay::{db_to_linear, MPS_PER_MPH};
use std::collections::BTreeMap;
use std::fmt::Write as _;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ConfigError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("line {line}: unknown key `{key}` in [{section}]")]
    UnknownKey { line: usize, section: String, key: String },
    #[error("line {line}: duplicate key `{key}` in [{section}]")]
    Duplicate { line: usize, section: String, key: String },
    #[error("line {line}: key `{key}`: {msg}")]
    Value { line: usize, key: String, msg: String },
    #[error("missing required key `{key}` in [{section}]")]
    Missing { section: String, key: String },
    #[error("invalid scenario: {0}")]
    Invalid(String),
}

type CResult<T> = std::result::Result<T, ConfigError>;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Kind {
    Count,
    Real,
    /// Linear, or dB.
    Ratio,
    /// Linear, dB or dBW.
    Power,
    /// mph or mps.
    Speed,
    Text,
    List,
}

const SECTIONS: [&str; 5] = ["system", "rf", "fso", "sweep", "mc"];

fn key_kind(section: &str, key: &str) -> Option<Kind> {
    use Kind::*;
    let k = match (section, key) {
        ("system", "j") => Count,
        ("system", "eta0") => Real,
        ("system", "gamma_th") => Ratio,
        ("system", "p_a" | "p_m" | "p_u") => Power,
        ("system", "metric" | "constraint" | "floors") => Text,
        ("system", "modulation") => List,
        ("system", "primary_eta" | "primary_rate" | "primary_target_outage") => Real,
        ("rf", "n_s" | "n_r" | "n_p" | "pilot" | "n_b" | "n_a" | "block_symbols" | "block_length") => Count,
        ("rf", "delta2_sr" | "delta2_sp" | "sigma2_eps_sr" | "sigma2_eps_sp" | "sigma2_innov") => Real,
        ("rf", "rho_sr" | "rho_sp" | "carrier_hz" | "symbol_rate") => Real,
        ("rf", "speed_su" | "speed_pu") => Speed,
        ("fso", "turbulence") => Text,
        ("fso", "alpha" | "beta" | "xi" | "h_l") => Real,
        ("fso", "theta") => Count,
        ("fso", "mu") => Ratio,
        ("sweep", "axis") => Text,
        ("sweep", "values") => List,
        ("mc", "frames") => Real,
        ("mc", "seed") => Count,
        _ => return None,
    };
    Some(k)
}

/// Monte Carlo settings carried by a config.
#[derive(Debug, Clone, PartialEq)]
pub struct McSettings {
    pub frames: Option<u64>,
    pub seed: u64,
}

/// Everything a config file describes.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub scenario: ScenarioSet,
    pub metric: Metric,
    pub constraint: PowerConstraint,
    pub sweep: Option<Sweep>,
    pub floors: bool,
    pub mc: McSettings,
}

impl RunConfig {
    /// Config equivalent of one preset variant.
    pub fn from_preset(p: &FigurePreset, v: &Variant) -> Self {
        Self {
            scenario: v.scenario.clone(),
            metric: p.metric.clone(),
            constraint: v.constraint,
            sweep: Some(p.sweep.clone()),
            floors: p.floors,
            mc: McSettings { frames: None, seed: 1 },
        }
    }
}

#[derive(Debug, Clone)]
struct Entry {
    line: usize,
    number: Option<f64>,
    unit: Option<String>,
    text: String,
}

struct Table {
    entries: BTreeMap<(String, String), Entry>,
}

impl Table {
    fn get(&self, section: &str, key: &str) -> Option<&Entry> {
        self.entries.get(&(section.to_string(), key.to_string()))
    }

    fn err(&self, section: &str, key: &str, msg: impl Into<String>) -> ConfigError {
        match self.get(section, key) {
            Some(e) => ConfigError::Value { line: e.line, key: key.into(), msg: msg.into() },
            None => ConfigError::Invalid(format!("{section}.{key}: {}", msg.into())),
        }
    }

    fn number(&self, section: &str, key: &str) -> CResult<Option<f64>> {
        Ok(self.get(section, key).and_then(|e| e.number))
    }

    fn count(&self, section: &str, key: &str, default: u32) -> CResult<u32> {
        match self.number(section, key)? {
            None => Ok(default),
            Some(v) if v >= 0.0 && v.fract() == 0.0 && v <= f64::from(u32::MAX) => Ok(v as u32),
            Some(v) => Err(self.err(section, key, format!("expected a non-negative integer, got {v}"))),
        }
    }

    fn real(&self, section: &str, key: &str, default: f64) -> CResult<f64> {
        Ok(self.number(section, key)?.unwrap_or(default))
    }

    fn required(&self, section: &str, key: &str) -> CResult<f64> {
        self.number(section, key)?.ok_or_else(|| ConfigError::Missing {
            section: section.into(),
            key: key.into(),
        })
    }

    fn text(&self, section: &str, key: &str) -> Option<&str> {
        self.get(section, key).map(|e| e.text.as_str())
    }
}

fn split_unit(raw: &str) -> (&str, Option<&str>) {
    let raw = raw.trim();
    for unit in ["dBW", "dB", "mph", "mps"] {
        if let Some(num) = raw.strip_suffix(unit) {
            let num = num.trim_end();
            if !num.is_empty() {
                return (num, Some(unit));
            }
        }
    }
    (raw, None)
}

fn tokenize(text: &str) -> CResult<Table> {
    let mut section: Option<String> = None;
    let mut entries = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        if let Some(rest) = content.strip_prefix('[') {
            let name = rest
                .strip_suffix(']')
                .ok_or_else(|| ConfigError::Syntax { line, msg: "unterminated section header".into() })?
                .trim();
            if !SECTIONS.contains(&name) {
                return Err(ConfigError::Syntax {
                    line,
                    msg: format!("unknown section [{name}] (expected one of {})", SECTIONS.join(", ")),
                });
            }
            section = Some(name.to_string());
            continue;
        }
        let (key, value) = content
            .split_once('=')
            .ok_or_else(|| ConfigError::Syntax { line, msg: format!("expected `key = value`, got `{content}`") })?;
        let key = key.trim().to_string();
        let value = value.trim();
        let sec = section
            .clone()
            .ok_or_else(|| ConfigError::Syntax { line, msg: format!("key `{key}` appears before any section header") })?;
        let kind = key_kind(&sec, &key).ok_or_else(|| ConfigError::UnknownKey {
            line,
            section: sec.clone(),
            key: key.clone(),
        })?;
        if value.is_empty() {
            return Err(ConfigError::Value { line, key, msg: "empty value".into() });
        }
        let entry = parse_value(line, &key, kind, value)?;
        if entries.insert((sec.clone(), key.clone()), entry).is_some() {
            return Err(ConfigError::Duplicate { line, section: sec, key });
        }
    }
    Ok(Table { entries })
}

fn parse_value(line: usize, key: &str, kind: Kind, value: &str) -> CResult<Entry> {
    let bad = |msg: String| ConfigError::Value { line, key: key.to_string(), msg };
    let mut entry = Entry { line, number: None, unit: None, text: value.to_string() };
    match kind {
        Kind::Text | Kind::List => {}
        _ => {
            let (num, unit) = split_unit(value);
            let x: f64 = num
                .parse()
                .map_err(|_| bad(format!("`{value}` is not a number")))?;
            if !x.is_finite() {
                return Err(bad("value must be finite".into()));
            }
            let allowed: &[&str] = match kind {
                Kind::Ratio => &["dB"],
                Kind::Power => &["dB", "dBW"],
                Kind::Speed => &["mph", "mps"],
                _ => &[],
            };
            match unit {
                Some(u) if !allowed.contains(&u) => {
                    return Err(bad(if allowed.is_empty() {
                        format!("unit `{u}` not accepted here; give a plain number")
                    } else {
                        format!("unit `{u}` not accepted here (allowed: {})", allowed.join(", "))
                    }))
                }
                None if kind == Kind::Speed => {
                    return Err(bad("speed needs a unit (mph or mps)".into()));
                }
                _ => {}
            }
            entry.number = Some(match (kind, unit) {
                (Kind::Speed, Some("mph")) => x * MPS_PER_MPH,
                (_, Some("dB" | "dBW")) => db_to_linear(x),
                _ => x,
            });
            entry.unit = unit.map(str::to_string);
        }
    }
    Ok(entry)
}

fn parse_list(t: &Table, section: &str, key: &str) -> CResult<Option<Vec<String>>> {
    Ok(t.text(section, key).map(|s| {
        s.split(',')
            .map(|x| x.trim().to_string())
            .filter(|x| !x.is_empty())
            .collect()
    }))
}

/// Parses a config file.
pub fn parse_config(text: &str) -> CResult<RunConfig> {
    let t = tokenize(text)?;

    // [system]
    let j = t.count("system", "j", 5)?;
    if j == 0 {
        return Err(t.err("system", "j", "at least one SU-TX is required"));
    }
    let eta0 = t.real("system", "eta0", 1.0)?;
    if !(eta0 > 0.0) {
        return Err(t.err("system", "eta0", "must be positive"));
    }
    let gamma_th = t.required("system", "gamma_th")?;
    let mut p_a = t.required("system", "p_a")?;
    if t.get("system", "p_a").and_then(|e| e.unit.as_deref()) == Some("dB") {
        p_a *= eta0;
    }
    let p_m = t.required("system", "p_m")?;

    let metric_name = t.text("system", "metric").unwrap_or("outage");
    let metric = match metric_name {
        "outage" => Metric::Outage,
        "ber" => {
            let names = parse_list(&t, "system", "modulation")?.unwrap_or_else(|| vec!["bpsk".into()]);
            let mut mods = Vec::new();
            for n in names {
                mods.push(ModulationConstants::by_name(&n).ok_or_else(|| {
                    t.err("system", "modulation", format!("unknown modulation `{n}` (bpsk, bfsk, dbpsk, ncbfsk)"))
                })?);
            }
            if mods.is_empty() {
                return Err(t.err("system", "modulation", "empty list"));
            }
            Metric::Ber(mods)
        }
        "primary_outage" => {
            let p_u = t.real("system", "p_u", db_to_linear(20.0))?;
            let eta = t.real("system", "primary_eta", 1.0)?;
            let pc = match t.number("system", "primary_rate")? {
                Some(rate) => PrimaryConfig { p_u, n_tx: 2, n_rx: 2, eta, rate },
                None => {
                    let target = t.real("system", "primary_target_outage", 1e-3)?;
                    PrimaryConfig::calibrated(p_u, eta, target)
                        .map_err(|e| t.err("system", "primary_target_outage", e.to_string()))?
                }
            };
            pc.validate().map_err(|e| t.err("system", "p_u", e.to_string()))?;
            Metric::PrimaryOutage(pc)
        }
        other => {
            return Err(t.err("system", "metric", format!("unknown metric `{other}` (outage, ber, primary_outage)")))
        }
    };
    let constraint = match t.text("system", "constraint").unwrap_or("composite") {
        "composite" => PowerConstraint::Composite,
        "fixed_only" => PowerConstraint::FixedOnly,
        other => return Err(t.err("system", "constraint", format!("unknown constraint `{other}`"))),
    };
    let floors = match t.text("system", "floors").unwrap_or("true") {
        "true" => true,
        "false" => false,
        other => return Err(t.err("system", "floors", format!("expected true or false, got `{other}`"))),
    };

    // [rf]
    let r = RfLinkConfig::reference();
    let carrier = t.real("rf", "carrier_hz", CARRIER_HZ)?;
    let symbol_rate = t.real("rf", "symbol_rate", SYMBOL_RATE)?;
    let rho = |rho_key: &str, speed_key: &str| -> CResult<f64> {
        match (t.number("rf", rho_key)?, t.number("rf", speed_key)?) {
            (Some(_), Some(_)) => Err(t.err("rf", speed_key, format!("give either `{rho_key}` or `{speed_key}`, not both"))),
            (Some(v), None) => Ok(v),
            (None, Some(v)) => {
                jakes_rho(v, carrier, symbol_rate).map_err(|e| t.err("rf", speed_key, e.to_string()))
            }
            (None, None) => Ok(1.0),
        }
    };
    let delta2_sr = t.real("rf", "delta2_sr", r.delta2_sr)?;
    let rf = RfLinkConfig {
        n_s: t.count("rf", "n_s", r.n_s)?,
        n_r: t.count("rf", "n_r", r.n_r)?,
        n_p: t.count("rf", "n_p", r.n_p)?,
        delta2_sr,
        delta2_sp: t.real("rf", "delta2_sp", r.delta2_sp)?,
        sigma2_eps_sr: t.real("rf", "sigma2_eps_sr", 0.0)?,
        sigma2_eps_sp: t.real("rf", "sigma2_eps_sp", 0.0)?,
        sigma2_innov: t.real("rf", "sigma2_innov", delta2_sr)?,
        rho_sr: rho("rho_sr", "speed_su")?,
        rho_sp: rho("rho_sp", "speed_pu")?,
        pilot: t.count("rf", "pilot", r.pilot)?,
        n_b: t.count("rf", "n_b", r.n_b)?,
        n_a: t.count("rf", "n_a", r.n_a)?,
        block_symbols: t.count("rf", "block_symbols", r.block_symbols)?,
        block_length: t.count("rf", "block_length", r.block_length)?,
    };

    // [fso]
    let mu = t.required("fso", "mu")?;
    let mut fso = match t.text("fso", "turbulence").unwrap_or("moderate") {
        "moderate" => FsoParams::moderate(mu),
        "strong" => FsoParams::strong(mu),
        other => return Err(t.err("fso", "turbulence", format!("unknown turbulence `{other}` (moderate, strong)"))),
    };
    fso.alpha = t.real("fso", "alpha", fso.alpha)?;
    fso.beta = t.real("fso", "beta", fso.beta)?;
    fso.xi = t.real("fso", "xi", fso.xi)?;
    fso.h_l = t.real("fso", "h_l", fso.h_l)?;
    let theta = t.count("fso", "theta", 1)?;
    if theta != 1 && theta != 2 {
        return Err(t.err("fso", "theta", "must be 1 (heterodyne) or 2 (IM/DD)"));
    }
    fso.theta = theta as u8;

    // [sweep]
    let sweep = match (t.text("sweep", "axis"), parse_list(&t, "sweep", "values")?) {
        (None, None) => None,
        (Some(_), None) => return Err(ConfigError::Missing { section: "sweep".into(), key: "values".into() }),
        (None, Some(_)) => return Err(ConfigError::Missing { section: "sweep".into(), key: "axis".into() }),
        (Some(a), Some(vs)) => {
            let axis = SweepAxis::by_name(a).ok_or_else(|| {
                let names: Vec<&str> = SweepAxis::ALL.iter().map(|x| x.name()).collect();
                t.err("sweep", "axis", format!("unknown axis `{a}` ({})", names.join(", ")))
            })?;
            let mut values = Vec::with_capacity(vs.len());
            for v in vs {
                values.push(
                    v.parse::<f64>()
                        .ok()
                        .filter(|x| x.is_finite())
                        .ok_or_else(|| t.err("sweep", "values", format!("`{v}` is not a number")))?,
                );
            }
            if values.is_empty() {
                return Err(t.err("sweep", "values", "empty list"));
            }
            Some(Sweep { axis, values })
        }
    };

    // [mc]
    let frames = match t.number("mc", "frames")? {
        None => None,
        Some(f) if f >= 1.0 && f.fract() == 0.0 && f <= 1e15 => Some(f as u64),
        Some(f) => return Err(t.err("mc", "frames", format!("must be a positive integer, got {f}"))),
    };
    let seed = match t.number("mc", "seed")? {
        None => 1,
        Some(s) if s >= 0.0 && s.fract() == 0.0 && s < 9.007_199_254_740_992e15 => s as u64,
        Some(s) => return Err(t.err("mc", "seed", format!("must be a non-negative integer below 2^53, got {s}"))),
    };

    let scenario = ScenarioSet {
        links: vec![SuLink { rf, p_a, p_m }; j as usize],
        fso,
        eta0,
        gamma_th,
    };
    scenario.validate().map_err(|e| ConfigError::Invalid(e.to_string()))?;
    if let Some(sw) = &sweep {
        for &v in &sw.values {
            let mut s = scenario.clone();
            sw.axis
                .apply(&mut s, v)
                .and_then(|_| s.validate())
                .map_err(|e| t.err("sweep", "values", format!("at {v}: {e}")))?;
        }
    }
    Ok(RunConfig {
        scenario,
        metric,
        constraint,
        sweep,
        floors,
        mc: McSettings { frames, seed },
    })
}

/// Writes a config that parses back to an equal [`RunConfig`].  All values
/// are written linear with shortest round-trip formatting.
pub fn serialize_config(c: &RunConfig) -> std::result::Result<String, ConfigError> {
    let s = &c.scenario;
    let first = s
        .links
        .first()
        .ok_or_else(|| ConfigError::Invalid("scenario has no SU-TX".into()))?;
    if s.links.iter().any(|l| l != first) {
        return Err(ConfigError::Invalid(
            "config files describe identical SU-TXs; this scenario has heterogeneous links".into(),
        ));
    }
    let rf = &first.rf;
    let mut o = String::new();
    let w = &mut o;
    let _ = writeln!(w, "[system]");
    let _ = writeln!(w, "j = {}", s.links.len());
    let _ = writeln!(w, "eta0 = {:?}", s.eta0);
    let _ = writeln!(w, "gamma_th = {:?}", s.gamma_th);
    let _ = writeln!(w, "p_a = {:?}", first.p_a);
    let _ = writeln!(w, "p_m = {:?}", first.p_m);
    match &c.metric {
        Metric::Outage => {
            let _ = writeln!(w, "metric = outage");
        }
        Metric::Ber(mods) => {
            let names: Vec<&str> = mods.iter().map(|m| m.name()).collect();
            if names.contains(&"custom") {
                return Err(ConfigError::Invalid("custom modulation constants cannot be written".into()));
            }
            let _ = writeln!(w, "metric = ber");
            let _ = writeln!(w, "modulation = {}", names.join(", "));
        }
        Metric::PrimaryOutage(pc) => {
            if (pc.n_tx, pc.n_rx) != (2, 2) {
                return Err(ConfigError::Invalid("only the 2x2 primary link is configurable".into()));
            }
            let _ = writeln!(w, "metric = primary_outage");
            let _ = writeln!(w, "p_u = {:?}", pc.p_u);
            let _ = writeln!(w, "primary_eta = {:?}", pc.eta);
            let _ = writeln!(w, "primary_rate = {:?}", pc.rate);
        }
    }
    let _ = writeln!(
        w,
        "constraint = {}",
        match c.constraint {
            PowerConstraint::Composite => "composite",
            PowerConstraint::FixedOnly => "fixed_only",
        }
    );
    let _ = writeln!(w, "floors = {}", c.floors);

    let _ = writeln!(w, "\n[rf]");
    let _ = writeln!(w, "n_s = {}\nn_r = {}\nn_p = {}", rf.n_s, rf.n_r, rf.n_p);
    let _ = writeln!(w, "delta2_sr = {:?}\ndelta2_sp = {:?}", rf.delta2_sr, rf.delta2_sp);
    let _ = writeln!(w, "sigma2_eps_sr = {:?}\nsigma2_eps_sp = {:?}", rf.sigma2_eps_sr, rf.sigma2_eps_sp);
    let _ = writeln!(w, "sigma2_innov = {:?}", rf.sigma2_innov);
    let _ = writeln!(w, "rho_sr = {:?}\nrho_sp = {:?}", rf.rho_sr, rf.rho_sp);
    let _ = writeln!(w, "pilot = {}\nn_b = {}\nn_a = {}", rf.pilot, rf.n_b, rf.n_a);
    let _ = writeln!(w, "block_symbols = {}\nblock_length = {}", rf.block_symbols, rf.block_length);

    let f = &s.fso;
    let _ = writeln!(w, "\n[fso]");
    let _ = writeln!(w, "alpha = {:?}\nbeta = {:?}\nxi = {:?}\nh_l = {:?}", f.alpha, f.beta, f.xi, f.h_l);
    let _ = writeln!(w, "theta = {}\nmu = {:?}", f.theta, f.mu);

    if let Some(sw) = &c.sweep {
        let vals: Vec<String> = sw.values.iter().map(|v| format!("{v:?}")).collect();
        let _ = writeln!(w, "\n[sweep]\naxis = {}\nvalues = {}", sw.axis.name(), vals.join(", "));
    }
    let _ = writeln!(w, "\n[mc]");
    if let Some(fr) = c.mc.frames {
        let _ = writeln!(w, "frames = {fr}");
    }
    let _ = writeln!(w, "seed = {}", c.mc.seed);
    Ok(o)
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = "[system]\ngamma_th = 3 dB\np_a = 10 dB\np_m = 27 dBW\n[fso]\nmu = 20 dB\n";

    #[test]
    fn units() {
        let c = parse_config(MINIMAL).unwrap();
        assert!((c.scenario.links[0].p_m - 10f64.powf(2.7)).abs() < 1e-12);
        assert_eq!(c.scenario.links.len(), 5);
        let c = parse_config(&format!("{MINIMAL}[rf]\nspeed_su = 17 mph\n")).unwrap();
        let v = 17.0 * MPS_PER_MPH;
        assert!((v - 7.59968).abs() < 1e-12);
        let expect = jakes_rho(v, CARRIER_HZ, SYMBOL_RATE).unwrap();
        assert_eq!(c.scenario.links[0].rf.rho_sr, expect);
    }

    #[test]
    fn unknown_key_reports_line() {
        let e = parse_config(&format!("{MINIMAL}[rf]\nspeeed = 17 mph\n")).unwrap_err();
        assert_eq!(
            e,
            ConfigError::UnknownKey { line: 8, section: "rf".into(), key: "speeed".into() }
        );
        assert!(e.to_string().contains("line 8") && e.to_string().contains("speeed"));
    }

    #[test]
    fn duplicate_missing_and_units_rejected() {
        assert!(matches!(
            parse_config(&format!("{MINIMAL}[system]\np_m = 3\n")),
            Err(ConfigError::Duplicate { line: 8, .. })
        ));
        assert!(matches!(
            parse_config("[system]\ngamma_th = 2\np_a = 1\n[fso]\nmu = 100\n"),
            Err(ConfigError::Missing { .. })
        ));
        assert!(matches!(
            parse_config(&format!("{MINIMAL}[rf]\nn_r = 4 dB\n")),
            Err(ConfigError::Value { line: 8, .. })
        ));
        assert!(matches!(
            parse_config(&format!("{MINIMAL}[rf]\nspeed_pu = 3 dBW\n")),
            Err(ConfigError::Value { .. })
        ));
    }

    #[test]
    fn round_trip() {
        let text = format!(
            "{MINIMAL}[system]\nmetric = ber\nmodulation = bpsk, dbpsk\n[rf]\nspeed_su = 25 mph\nsigma2_eps_sr = 0.05\n\
             [sweep]\naxis = P_A_dB\nvalues = 0, 2.5, 5\n[mc]\nframes = 1e5\nseed = 9\n"
        );
        let c = parse_config(&text).unwrap();
        let again = parse_config(&serialize_config(&c).unwrap()).unwrap();
        assert_eq!(c, again);
    }
}
