use cogrelay::scenarios::{preset, PRESET_IDS};
use cogrelay_cli::{parse_config, serialize_config, RunConfig};
use proptest::prelude::*;
use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_cogrelay"))
}

fn tmp(name: &str) -> std::path::PathBuf {
    let dir = std::env::temp_dir().join(format!("cogrelay-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn every_preset_variant_round_trips() {
    for id in PRESET_IDS {
        let p = preset(id).unwrap();
        for v in &p.variants {
            let c = RunConfig::from_preset(&p, v);
            let text = serialize_config(&c).unwrap();
            let back = parse_config(&text).unwrap_or_else(|e| panic!("{id}/{}: {e}\n{text}", v.label));
            assert_eq!(c, back, "{id}/{}", v.label);
        }
    }
}

#[test]
fn show_preset_output_parses() {
    let out = bin().args(["show-preset", "fig6", "--variant", "su25"]).output().unwrap();
    assert!(out.status.success());
    let c = parse_config(std::str::from_utf8(&out.stdout).unwrap()).unwrap();
    let p = preset("fig6").unwrap();
    assert_eq!(c, RunConfig::from_preset(&p, p.variant("su25").unwrap()));
}

#[test]
fn misspelled_key_is_rejected_with_line() {
    let good = bin().args(["show-preset", "fig2a"]).output().unwrap();
    let text = String::from_utf8(good.stdout).unwrap();
    let line = text.lines().position(|l| l.starts_with("rho_sr")).unwrap() + 1;
    let bad = text.replace("rho_sr =", "speeed =");
    let path = tmp("bad.cfg");
    std::fs::write(&path, bad).unwrap();
    let out = bin().args(["run", "--config"]).arg(&path).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("speeed"), "{err}");
    assert!(err.contains(&format!("line {line}")), "{err}");
}

#[test]
fn same_seed_same_bytes() {
    let run = |name: &str| {
        let path = tmp(name);
        let st = bin()
            .args(["run", "--preset", "fig2a", "--variant", "su17", "--methods", "closed,mc"])
            .args(["--frames", "2e4", "--seed", "7", "--values", "5,10", "--out"])
            .arg(&path)
            .status()
            .unwrap();
        assert!(st.success());
        std::fs::read(&path).unwrap()
    };
    let a = run("a.csv");
    let b = run("b.csv");
    assert_eq!(a, b);
    let text = String::from_utf8(a).unwrap();
    assert!(text.contains("# seed: 7"));
    assert!(text.contains("# frames: 20000"));
}

#[test]
fn fig5_columns() {
    let path = tmp("fig5.csv");
    let st = bin()
        .args(["run", "--preset", "fig5", "--methods", "closed,quadrature", "--gnuplot-stub", "--out"])
        .arg(&path)
        .status()
        .unwrap();
    assert!(st.success());
    let text = std::fs::read_to_string(&path).unwrap();
    let header = text.lines().find(|l| !l.starts_with('#')).unwrap();
    assert_eq!(header, "N_R,variant,outage_closed,outage_quadrature");
    let rows: Vec<_> = text.lines().filter(|l| !l.starts_with('#')).skip(1).collect();
    assert_eq!(rows.len(), 21);
    for r in rows {
        let f: Vec<_> = r.split(',').collect();
        let (a, b): (f64, f64) = (f[2].parse().unwrap(), f[3].parse().unwrap());
        assert!(((a - b) / b).abs() < 1e-6, "{r}");
    }
    assert!(path.with_extension("gp").exists());
}

#[test]
fn frames_without_mc_is_a_config_error() {
    let out = bin().args(["run", "--preset", "fig5", "--frames", "1e6"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn unknown_preset_lists_ids() {
    let out = bin().args(["run", "--preset", "fig9"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8(out.stderr).unwrap().contains("fig2a"));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]
    #[test]
    fn perturbed_configs_round_trip(
        n_r in 1u32..9,
        d2 in 0.05f64..20.0,
        eps in 0.0f64..0.5,
        pa_db in -10.0f64..60.0,
        xi in 0.3f64..5.0,
    ) {
        let p = preset("fig3").unwrap();
        let mut c = RunConfig::from_preset(&p, &p.variants[0]);
        for l in &mut c.scenario.links {
            l.rf.n_r = n_r;
            l.rf.delta2_sr = d2;
            l.rf.sigma2_eps_sr = eps;
            l.p_a = 10f64.powf(pa_db / 10.0) * c.scenario.eta0;
        }
        c.scenario.fso.xi = xi;
        let back = parse_config(&serialize_config(&c).unwrap()).unwrap();
        prop_assert_eq!(c, back);
    }
}
