use clap::{Parser, Subcommand};
use cogrelay::scenarios::{preset, PRESET_IDS};
use cogrelay_cli::{gnuplot_stub, run, serialize_config, Method, RunConfig, RunError, RunSpec, Source};
use std::io::{IsTerminal, Write};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "cogrelay", version, about = "Outage and error-rate analysis for cognitive MIMO-RF/FSO relaying")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// List the figure presets and their variants.
    ListPresets,
    /// Print one preset variant as a config file.
    ShowPreset {
        id: String,
        #[arg(long)]
        variant: Option<String>,
    },
    /// Evaluate a sweep and write a CSV.
    Run(RunArgs),
}

#[derive(clap::Args)]
struct RunArgs {
    /// Preset id (see list-presets).
    #[arg(long, conflicts_with = "config", required_unless_present = "config")]
    preset: Option<String>,
    /// Restrict a preset to one variant.
    #[arg(long, requires = "preset")]
    variant: Option<String>,
    /// Scenario config file.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Comma-separated subset of closed, quadrature, bivariate, mc.
    #[arg(long, default_value = "closed")]
    methods: String,
    /// Monte Carlo frames per point; scientific notation accepted.
    #[arg(long, value_parser = parse_frames)]
    frames: Option<u64>,
    #[arg(long)]
    seed: Option<u64>,
    /// Comma-separated sweep values replacing the preset/config grid.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    values: Option<Vec<f64>>,
    /// Output CSV path; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also write a gnuplot script next to the CSV.
    #[arg(long, requires = "out")]
    gnuplot_stub: bool,
    /// Add closed-vs-quadrature agreement lines to the header.
    #[arg(long)]
    tolerance_report: bool,
}

fn parse_frames(s: &str) -> Result<u64, String> {
    let v: f64 = s.trim().parse().map_err(|_| format!("`{s}` is not a number"))?;
    if !(v >= 1.0) || v.fract() != 0.0 || v > 1e15 {
        return Err(format!("frames must be a positive integer, got {s}"));
    }
    Ok(v as u64)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.cmd {
        Cmd::ListPresets => {
            for id in PRESET_IDS {
                let p = preset(id).expect("built-in preset");
                let labels: Vec<&str> = p.variants.iter().map(|v| v.label.as_str()).collect();
                println!("{id:<6} {}", p.description);
                println!("       sweep {} ({} points); variants: {}", p.sweep.axis.name(), p.sweep.values.len(), labels.join(", "));
            }
            ExitCode::SUCCESS
        }
        Cmd::ShowPreset { id, variant } => {
            let p = match preset(&id) {
                Ok(p) => p,
                Err(e) => {
                    eprintln!("error: {e}");
                    return ExitCode::from(2);
                }
            };
            let v = match variant {
                Some(l) => p.variant(&l).cloned(),
                None => Ok(p.variants[0].clone()),
            };
            match v.map_err(|e| e.to_string()).and_then(|v| {
                serialize_config(&RunConfig::from_preset(&p, &v)).map_err(|e| e.to_string())
            }) {
                Ok(text) => {
                    print!("{text}");
                    ExitCode::SUCCESS
                }
                Err(e) => {
                    eprintln!("error: {e}");
                    ExitCode::from(2)
                }
            }
        }
        Cmd::Run(a) => run_cmd(a),
    }
}

fn run_cmd(a: RunArgs) -> ExitCode {
    let fail = |e: &RunError| {
        eprintln!("error: {e}");
        ExitCode::from(e.exit_code() as u8)
    };
    let methods = match Method::parse_list(&a.methods) {
        Ok(m) => m,
        Err(e) => return fail(&e),
    };
    let source = match (a.preset, a.config) {
        (Some(id), _) => Source::Preset { id, variant: a.variant },
        (None, Some(path)) => match std::fs::read_to_string(&path) {
            Ok(text) => Source::Config { path, text },
            Err(e) => {
                eprintln!("error: cannot read {}: {e}", path.display());
                return ExitCode::from(2);
            }
        },
        (None, None) => unreachable!("clap enforces a source"),
    };
    let spec = RunSpec {
        source,
        methods,
        frames: a.frames,
        seed: a.seed,
        values: a.values,
        tolerance_report: a.tolerance_report,
    };
    let tty = std::io::stderr().is_terminal();
    let mut progress = |done: usize, total: usize| {
        if tty {
            eprint!("\r[{done}/{total}] points");
            if done == total {
                eprintln!();
            }
        }
    };
    let (out, code) = match run(&spec, &mut progress) {
        Ok(o) => (o, ExitCode::SUCCESS),
        Err(RunError::AllFailed { csv }) => {
            eprintln!("error: every requested point failed");
            let _ = emit(&a.out, &csv);
            return ExitCode::from(3);
        }
        Err(e) => return fail(&e),
    };
    for w in &out.warnings {
        eprintln!("warning: {w}");
    }
    if let Err(e) = emit(&a.out, &out.csv) {
        eprintln!("error: {e}");
        return ExitCode::from(1);
    }
    if a.gnuplot_stub {
        if let Some(path) = &a.out {
            let name = path.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
            let gp = path.with_extension("gp");
            if let Err(e) = std::fs::write(&gp, gnuplot_stub(&out, &name)) {
                eprintln!("error: cannot write {}: {e}", gp.display());
                return ExitCode::from(1);
            }
        }
    }
    code
}

fn emit(path: &Option<PathBuf>, csv: &str) -> std::io::Result<()> {
    match path {
        Some(p) => std::fs::write(p, csv),
        None => std::io::stdout().write_all(csv.as_bytes()),
    }
}
