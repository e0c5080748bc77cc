//! Sweep execution and CSV output.

use crate::config::{parse_config, ConfigError, RunConfig};
use cogrelay::channels::fso_snr_cdf;
use cogrelay::linkstats::sr_snr_cdf_oracle;
use cogrelay::mcsim::{mc_ber_many, mc_outage, mc_primary_outage, PowerConstraint};
use cogrelay::perf::{
    ber_avg, ber_floor, outage_avg, outage_floor, BerMethod, FloorKind, ScenarioSet,
};
use cogrelay::scenarios::{preset, Metric, Sweep, SweepAxis};
use cogrelay::{linear_to_db, Error as CoreError};
use std::fmt::Write as _;
use std::path::PathBuf;

pub const DEFAULT_FRAMES: u64 = 100_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Method {
    Closed,
    Quadrature,
    /// Closed form with the bivariate G-function for L3 (BER only).
    Bivariate,
    Mc,
}

impl Method {
    pub fn name(&self) -> &'static str {
        match self {
            Self::Closed => "closed",
            Self::Quadrature => "quadrature",
            Self::Bivariate => "bivariate",
            Self::Mc => "mc",
        }
    }

    pub fn parse_list(s: &str) -> Result<Vec<Method>, RunError> {
        let mut out = Vec::new();
        for t in s.split(',').map(str::trim).filter(|t| !t.is_empty()) {
            let m = match t {
                "closed" => Self::Closed,
                "quadrature" => Self::Quadrature,
                "bivariate" => Self::Bivariate,
                "mc" => Self::Mc,
                other => {
                    return Err(RunError::Config(format!(
                        "unknown method `{other}` (closed, quadrature, bivariate, mc)"
                    )))
                }
            };
            if !out.contains(&m) {
                out.push(m);
            }
        }
        out.sort();
        Ok(out)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Source {
    Preset { id: String, variant: Option<String> },
    Config { path: PathBuf, text: String },
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunSpec {
    pub source: Source,
    pub methods: Vec<Method>,
    pub frames: Option<u64>,
    pub seed: Option<u64>,
    /// Replaces the sweep values of the preset or config.
    pub values: Option<Vec<f64>>,
    pub tolerance_report: bool,
}

#[derive(Debug, thiserror::Error)]
pub enum RunError {
    #[error("{0}")]
    Config(String),
    #[error("config: {0}")]
    Parse(#[from] ConfigError),
    #[error("every requested point failed; see the diagnostics in the output")]
    AllFailed { csv: String },
}

impl RunError {
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Config(_) | Self::Parse(_) => 2,
            Self::AllFailed { .. } => 3,
        }
    }
}

impl From<CoreError> for RunError {
    fn from(e: CoreError) -> Self {
        Self::Config(e.to_string())
    }
}

#[derive(Debug, Clone)]
pub struct RunOutput {
    pub csv: String,
    pub warnings: Vec<String>,
    /// Sweep axis name and column names, for plotting.
    pub axis: String,
    pub columns: Vec<String>,
    pub variants: Vec<String>,
}

struct Job {
    label: String,
    base: ScenarioSet,
    constraint: PowerConstraint,
}

struct Plan {
    source_line: String,
    metric: Metric,
    sweep: Sweep,
    floors: bool,
    jobs: Vec<Job>,
    notes: Vec<(String, String)>,
    seed: u64,
    frames: Option<u64>,
}

fn plan(spec: &RunSpec, warnings: &mut Vec<String>) -> Result<Plan, RunError> {
    if spec.methods.is_empty() {
        return Err(RunError::Config("at least one method is required".into()));
    }
    let mc = spec.methods.contains(&Method::Mc);
    let mut p = match &spec.source {
        Source::Preset { id, variant } => {
            let pr = preset(id)?;
            let chosen: Vec<_> = match variant {
                Some(v) => vec![pr.variant(v)?.clone()],
                None => pr.variants.clone(),
            };
            Plan {
                source_line: format!("preset {id}"),
                metric: pr.metric.clone(),
                sweep: pr.sweep.clone(),
                floors: pr.floors,
                jobs: chosen
                    .into_iter()
                    .map(|v| Job { label: v.label, base: v.scenario, constraint: v.constraint })
                    .collect(),
                notes: pr.notes.iter().map(|(k, v)| (k.to_string(), v.clone())).collect(),
                seed: 1,
                frames: None,
            }
        }
        Source::Config { path, text } => {
            let c: RunConfig = parse_config(text)?;
            let sweep = c.sweep.clone().unwrap_or_else(|| Sweep {
                axis: SweepAxis::PaDb,
                values: vec![linear_to_db(c.scenario.links[0].p_a / c.scenario.eta0)],
            });
            Plan {
                source_line: format!("config {}", path.display()),
                metric: c.metric,
                sweep,
                floors: c.floors,
                jobs: vec![Job { label: "config".into(), base: c.scenario, constraint: c.constraint }],
                notes: Vec::new(),
                seed: c.mc.seed,
                frames: c.mc.frames,
            }
        }
    };
    if let Some(v) = &spec.values {
        if v.is_empty() {
            return Err(RunError::Config("--values needs at least one value".into()));
        }
        p.sweep.values = v.clone();
    }
    if let Some(s) = spec.seed {
        p.seed = s;
    }
    if spec.frames.is_some() {
        p.frames = spec.frames;
    }
    match (mc, p.frames) {
        (false, Some(_)) if spec.frames.is_some() => {
            return Err(RunError::Config("--frames is only meaningful with the mc method".into()))
        }
        (true, None) => {
            warnings.push(format!(
                "no frame count given; using {DEFAULT_FRAMES}. Figure-grade accuracy needs at least 1e6 frames"
            ));
            p.frames = Some(DEFAULT_FRAMES);
        }
        (true, Some(f)) if f < 1_000_000 => {
            warnings.push(format!("{f} frames; figure-grade accuracy needs at least 1e6"));
        }
        _ => {}
    }
    for job in &p.jobs {
        for &x in &p.sweep.values {
            let mut s = job.base.clone();
            p.sweep
                .axis
                .apply(&mut s, x)
                .and_then(|_| s.validate())
                .map_err(|e| RunError::Config(format!("{} at {} = {x}: {e}", job.label, p.sweep.axis.name())))?;
        }
    }
    Ok(p)
}

/// Cell value or failure message.
type Cell = Result<f64, String>;

#[derive(Default)]
struct Diagnostics {
    lines: Vec<String>,
}

impl Diagnostics {
    fn push(&mut self, s: String) {
        self.lines.push(s);
    }
}

fn core<T>(r: cogrelay::Result<T>) -> Result<T, String> {
    r.map_err(|e| e.to_string())
}

fn outage_quadrature(s: &ScenarioSet) -> Cell {
    let frd = core(fso_snr_cdf(&s.fso, s.gamma_th))?;
    let models = core(s.weighted_models())?;
    let mut acc = 0.0;
    for (m, w) in &models {
        let fsr = core(sr_snr_cdf_oracle(m, s.gamma_th))?;
        acc += w * (fsr + frd - fsr * frd);
    }
    Ok(acc / s.symbol_count())
}

/// Column names for a metric and method set.
fn columns(metric: &Metric, methods: &[Method], floors: bool) -> Vec<String> {
    let analytic = methods.iter().any(|m| matches!(m, Method::Closed | Method::Quadrature | Method::Bivariate));
    let mut cols = Vec::new();
    let mut block = |prefix: &str, allow_bivariate: bool| {
        for m in methods {
            match m {
                Method::Bivariate if !allow_bivariate => {}
                Method::Mc => {
                    cols.push(format!("{prefix}_mc"));
                    cols.push(format!("{prefix}_mc_stderr"));
                }
                _ => cols.push(format!("{prefix}_{}", m.name())),
            }
        }
        if floors && analytic {
            cols.push(format!("{prefix}_floor_mu"));
            cols.push(format!("{prefix}_floor_pa"));
        }
    };
    match metric {
        Metric::Outage => block("outage", false),
        Metric::Ber(mods) => {
            for mc in mods {
                block(&format!("ber_{}", mc.name()), true);
            }
        }
        Metric::PrimaryOutage(_) => {
            if methods.contains(&Method::Mc) {
                cols.push("primary_outage_mc".into());
                cols.push("primary_outage_mc_stderr".into());
            }
        }
    }
    cols
}

fn evaluate(
    p: &Plan,
    methods: &[Method],
    s: &ScenarioSet,
    constraint: PowerConstraint,
    diag: &mut Diagnostics,
    tag: &str,
) -> Vec<Cell> {
    let frames = p.frames.unwrap_or(DEFAULT_FRAMES);
    let analytic = methods.iter().any(|m| matches!(m, Method::Closed | Method::Quadrature | Method::Bivariate));
    let mut cells = Vec::new();
    match &p.metric {
        Metric::Outage => {
            for m in methods {
                match m {
                    Method::Closed => cells.push(core(outage_avg(s))),
                    Method::Quadrature => cells.push(outage_quadrature(s)),
                    Method::Bivariate => {}
                    Method::Mc => match mc_outage(s, frames, p.seed) {
                        Ok(r) => {
                            cells.push(Ok(r.estimate));
                            cells.push(Ok(r.std_error));
                        }
                        Err(e) => {
                            cells.push(Err(e.to_string()));
                            cells.push(Err(e.to_string()));
                        }
                    },
                }
            }
            if p.floors && analytic {
                cells.push(core(outage_floor(s, FloorKind::MuInf)));
                cells.push(core(outage_floor(s, FloorKind::PaInf)));
            }
        }
        Metric::Ber(mods) => {
            let mc_runs = methods
                .contains(&Method::Mc)
                .then(|| mc_ber_many(s, mods, frames, p.seed).map_err(|e| e.to_string()));
            for (mi, mc) in mods.iter().enumerate() {
                for m in methods {
                    let method = match m {
                        Method::Closed => BerMethod::Closed,
                        Method::Quadrature => BerMethod::Quadrature,
                        Method::Bivariate => BerMethod::ClosedBivariate,
                        Method::Mc => {
                            match mc_runs.as_ref().expect("mc runs computed") {
                                Ok(r) => {
                                    cells.push(Ok(r[mi].estimate));
                                    cells.push(Ok(r[mi].std_error));
                                }
                                Err(e) => {
                                    cells.push(Err(e.clone()));
                                    cells.push(Err(e.clone()));
                                }
                            }
                            continue;
                        }
                    };
                    cells.push(match ber_avg(s, mc, method) {
                        Ok(r) => {
                            for f in r.fallbacks {
                                diag.push(format!("fallback {tag} ber_{}: {f}", mc.name()));
                            }
                            Ok(r.value)
                        }
                        Err(e) => Err(e.to_string()),
                    });
                }
                if p.floors && analytic {
                    cells.push(core(ber_floor(s, mc, FloorKind::MuInf)));
                    cells.push(core(ber_floor(s, mc, FloorKind::PaInf)));
                }
            }
        }
        Metric::PrimaryOutage(pc) => {
            if methods.contains(&Method::Mc) {
                match mc_primary_outage(pc, s, constraint, frames, p.seed) {
                    Ok(r) => {
                        cells.push(Ok(r.estimate));
                        cells.push(Ok(r.std_error));
                    }
                    Err(e) => {
                        cells.push(Err(e.to_string()));
                        cells.push(Err(e.to_string()));
                    }
                }
            }
        }
    }
    cells
}

fn fmt_num(v: f64) -> String {
    format!("{v:e}")
}

/// Executes a run and renders the CSV.  `progress` receives (done, total).
pub fn run(spec: &RunSpec, progress: &mut dyn FnMut(usize, usize)) -> Result<RunOutput, RunError> {
    let mut warnings = Vec::new();
    let p = plan(spec, &mut warnings)?;
    let methods = &spec.methods;
    let cols = columns(&p.metric, methods, p.floors);
    match &p.metric {
        Metric::Outage if methods.contains(&Method::Bivariate) => {
            warnings.push("the bivariate method applies to BER only; ignored for outage".into())
        }
        Metric::PrimaryOutage(_) if methods.iter().any(|m| *m != Method::Mc) => {
            warnings.push("primary outage has no closed form; only the mc method is evaluated".into())
        }
        _ => {}
    }
    if cols.is_empty() {
        return Err(RunError::Config("no requested method applies to this metric".into()));
    }

    let mut diag = Diagnostics::default();
    let total = p.sweep.values.len() * p.jobs.len();
    let mut rows = Vec::new();
    let mut failed_points = 0;
    let mut done = 0;
    // Closed vs quadrature agreement for the tolerance report.
    let mut max_rel: Vec<(String, f64)> = Vec::new();
    for &x in &p.sweep.values {
        for job in &p.jobs {
            let mut s = job.base.clone();
            let cells: Vec<Cell> = match p.sweep.axis.apply(&mut s, x) {
                Ok(()) => evaluate(&p, methods, &s, job.constraint, &mut diag, &format!("{}={x:?}/{}", p.sweep.axis.name(), job.label)),
                Err(e) => vec![Err(e.to_string()); cols.len()],
            };
            if cells.iter().all(|c| c.is_err()) {
                failed_points += 1;
            }
            let mut row = vec![format!("{x:?}"), job.label.clone()];
            for (c, name) in cells.iter().zip(&cols) {
                match c {
                    Ok(v) => row.push(fmt_num(*v)),
                    Err(e) => {
                        diag.push(format!("failed {}={x:?} {} {name}: {e}", p.sweep.axis.name(), job.label));
                        row.push(String::new());
                    }
                }
            }
            for (i, name) in cols.iter().enumerate() {
                if let Some(stem) = name.strip_suffix("_closed") {
                    if let Some(j) = cols.iter().position(|c| *c == format!("{stem}_quadrature")) {
                        if let (Ok(a), Ok(b)) = (&cells[i], &cells[j]) {
                            let r = if *b != 0.0 { ((a - b) / b).abs() } else { (a - b).abs() };
                            match max_rel.iter_mut().find(|(n, _)| n == stem) {
                                Some(e) => e.1 = e.1.max(r),
                                None => max_rel.push((stem.to_string(), r)),
                            }
                        }
                    }
                }
            }
            rows.push(row.join(","));
            done += 1;
            progress(done, total);
        }
    }

    let mut out = String::new();
    let _ = writeln!(out, "# cogrelay {}", env!("CARGO_PKG_VERSION"));
    let _ = writeln!(out, "# source: {}", p.source_line);
    let metric = match &p.metric {
        Metric::Outage => "outage".to_string(),
        Metric::Ber(m) => format!("ber ({})", m.iter().map(|x| x.name()).collect::<Vec<_>>().join(", ")),
        Metric::PrimaryOutage(pc) => format!(
            "primary_outage (P_U {:?}, eta {:?}, rate {:?} bit/s/Hz)",
            pc.p_u, pc.eta, pc.rate
        ),
    };
    let _ = writeln!(out, "# metric: {metric}");
    let _ = writeln!(out, "# methods: {}", methods.iter().map(|m| m.name()).collect::<Vec<_>>().join(","));
    if methods.contains(&Method::Mc) {
        let _ = writeln!(out, "# seed: {}", p.seed);
        let _ = writeln!(out, "# frames: {}", p.frames.unwrap_or(DEFAULT_FRAMES));
    }
    let _ = writeln!(
        out,
        "# tolerances: quadrature abs 1e-15 rel 1e-10 (BER), abs 1e-13 rel 1e-11 (SR CDF); Meijer-G residue accept 1e-10, contour rel 1e-13; bivariate 1e-9"
    );
    for (k, v) in &p.notes {
        let _ = writeln!(out, "# {k}: {v}");
    }
    if spec.tolerance_report {
        if max_rel.is_empty() {
            let _ = writeln!(out, "# tolerance-report: needs both closed and quadrature methods");
        }
        for (stem, r) in &max_rel {
            let _ = writeln!(out, "# tolerance-report: {stem} max |closed - quadrature|/quadrature = {r:.3e}");
        }
    }
    for d in &diag.lines {
        let _ = writeln!(out, "# {d}");
    }
    let _ = writeln!(out, "{},variant,{}", p.sweep.axis.name(), cols.join(","));
    for r in rows {
        let _ = writeln!(out, "{r}");
    }
    if total > 0 && failed_points == total {
        return Err(RunError::AllFailed { csv: out });
    }
    Ok(RunOutput {
        csv: out,
        warnings,
        axis: p.sweep.axis.name().to_string(),
        columns: cols,
        variants: p.jobs.iter().map(|j| j.label.clone()).collect(),
    })
}

/// A gnuplot script plotting every column of `csv_name` against the sweep variable.
pub fn gnuplot_stub(o: &RunOutput, csv_name: &str) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "set datafile separator ','");
    let _ = writeln!(s, "set datafile missing ''");
    let _ = writeln!(s, "set logscale y");
    let _ = writeln!(s, "set grid");
    let _ = writeln!(s, "set key outside");
    let _ = writeln!(s, "set xlabel '{}'", o.axis);
    let mut plots = Vec::new();
    for v in &o.variants {
        for (i, c) in o.columns.iter().enumerate() {
            if c.ends_with("_stderr") {
                continue;
            }
            plots.push(format!(
                "'{csv_name}' using 1:(strcol(2) eq '{v}' ? ${} : 1/0) with linespoints title '{v} {c}'",
                i + 3
            ));
        }
    }
    let _ = writeln!(s, "plot {}", plots.join(", \\\n     "));
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use cogrelay::perf::ModulationConstants;

    #[test]
    fn method_list() {
        assert_eq!(Method::parse_list("mc,closed,mc").unwrap(), vec![Method::Closed, Method::Mc]);
        assert!(Method::parse_list("closed,fast").is_err());
    }

    #[test]
    fn column_layout() {
        let c = columns(&Metric::Outage, &[Method::Closed, Method::Mc], false);
        assert_eq!(c, ["outage_closed", "outage_mc", "outage_mc_stderr"]);
        let c = columns(&Metric::Ber(vec![ModulationConstants::BPSK]), &[Method::Closed], true);
        assert_eq!(c, ["ber_bpsk_closed", "ber_bpsk_floor_mu", "ber_bpsk_floor_pa"]);
    }
}
