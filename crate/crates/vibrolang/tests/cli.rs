use std::fs;
use std::path::Path;
use std::process::Command as Proc;

use serde_json::{json, Value};
use vibrolang::config::{load, Command};
use vibrolang::run::{run, sha256_hex, Options};
use vibrolang::table::Table;
use vibrolang::Format;

fn bin() -> Proc {
    Proc::new(env!("CARGO_BIN_EXE_vibrolang"))
}

fn absorption_config() -> Value {
    json!({
        "command": "absorption",
        "parameters": {
            "molecule": { "gamma": 0.05, "nu": 1.0, "lambda": 0.7 },
            "bath": { "gamma_m": 0.1, "omega_max": 1.3 },
            "thermal": { "nbar": 0.5 },
            "detuning": { "min": -3.0, "max": 4.0, "step": 0.01 },
            "correlation": { "t_max": 30.0, "samples": 301 },
            "emission": true
        }
    })
}

fn opts(dir: &Path) -> Options {
    Options { out: dir.to_path_buf(), format: Format::CsvSvg, seed: 0, threads: Some(2) }
}

fn files(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut out = Vec::new();
    let mut stack = vec![dir.to_path_buf()];
    while let Some(d) = stack.pop() {
        for e in fs::read_dir(&d).unwrap() {
            let p = e.unwrap().path();
            if p.is_dir() {
                stack.push(p);
            } else {
                out.push((p.strip_prefix(dir).unwrap().display().to_string(), fs::read(&p).unwrap()));
            }
        }
    }
    out.sort();
    out
}

#[test]
fn csv_round_trips_through_schema() {
    let tmp = tempfile::tempdir().unwrap();
    for (i, (cmd, text)) in [
        (Command::Absorption, absorption_config().to_string()),
        (Command::Preset, r#"{"preset": "fig6c"}"#.to_string()),
        (Command::Preset, r#"{"preset": "fig3"}"#.to_string()),
        (Command::Preset, r#"{"preset": "fig5c"}"#.to_string()),
    ]
    .into_iter()
    .enumerate()
    {
        let dir = tmp.path().join(i.to_string());
        let cfg = load(cmd, Some(&text), None).unwrap();
        run(&cfg, &opts(&dir)).unwrap();
        let mut n = 0;
        for (name, bytes) in files(&dir).into_iter().filter(|(n, _)| n.ends_with(".csv")) {
            let t = Table::parse_csv(&name, &bytes).unwrap();
            assert!(!t.rows.is_empty());
            assert_eq!(t.to_csv(), bytes, "{name}");
            n += 1;
        }
        assert!(n >= 1);
    }
}

#[test]
fn documented_headers() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = load(Command::Absorption, Some(&absorption_config().to_string()), None).unwrap();
    run(&cfg, &opts(tmp.path())).unwrap();
    let head = |f: &str| fs::read_to_string(tmp.path().join(f)).unwrap().lines().next().unwrap().to_string();
    assert_eq!(head("spectrum.csv"), "detuning,value");
    assert_eq!(head("correlation.csv"), "tau,re_corr,im_corr");
    assert_eq!(head("emission.csv"), "detuning,value");

    let cfg = load(Command::Preset, None, Some("fig6c")).unwrap();
    run(&cfg, &opts(&tmp.path().join("c"))).unwrap();
    assert_eq!(
        fs::read_to_string(tmp.path().join("c/transmission.csv")).unwrap().lines().next().unwrap(),
        "detuning,re_T,im_T,abs_T2"
    );
}

#[test]
fn manifest_matches_written_files() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = load(Command::Absorption, Some(&absorption_config().to_string()), None).unwrap();
    let m = run(&cfg, &opts(tmp.path())).unwrap();
    let on_disk: Value = serde_json::from_slice(&fs::read(tmp.path().join("manifest.json")).unwrap()).unwrap();
    assert_eq!(m, on_disk);
    let listed = m["files"].as_array().unwrap();
    assert_eq!(listed.len() + 1, files(tmp.path()).len());
    for f in listed {
        let bytes = fs::read(tmp.path().join(f["file"].as_str().unwrap())).unwrap();
        assert_eq!(f["sha256"], sha256_hex(&bytes));
        if let Some(rows) = f["rows"].as_u64() {
            assert_eq!(rows as usize + 1, bytes.iter().filter(|&&b| b == b'\n').count());
        }
    }
    assert_eq!(m["parameters"]["molecule"]["lambda"], 0.7);
    assert_eq!(m["parameters"]["method"], "lines");
}

#[test]
fn repeated_runs_are_byte_identical() {
    let tmp = tempfile::tempdir().unwrap();
    let text = json!({
        "command": "relaxation",
        "seed": 11,
        "parameters": {
            "nu": 1.0,
            "chain": { "continuum": { "n": 60, "omega_max": 4.0, "gamma_m": 0.05, "qfactor": 50.0 } },
            "t_max": 20.0,
            "phonons": { "thermal": { "temperature": 0.3 } }
        }
    })
    .to_string();
    let cfg = load(Command::Relaxation, Some(&text), None).unwrap();
    let a = tmp.path().join("a");
    let b = tmp.path().join("b");
    run(&cfg, &Options::resolve(&cfg, Some(a.clone()), None, None, Some(1))).unwrap();
    run(&cfg, &Options::resolve(&cfg, Some(b.clone()), None, None, Some(4))).unwrap();
    assert_eq!(files(&a), files(&b));

    let c = tmp.path().join("c");
    run(&cfg, &Options::resolve(&cfg, Some(c.clone()), None, Some(12), None)).unwrap();
    assert_ne!(
        fs::read(a.join("trajectory.csv")).unwrap(),
        fs::read(c.join("trajectory.csv")).unwrap()
    );
}

#[test]
fn sweep_is_deterministic_across_thread_counts() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = load(Command::Preset, None, Some("fig6a")).unwrap();
    let mut o = opts(&tmp.path().join("1"));
    o.threads = Some(1);
    run(&cfg, &o).unwrap();
    o.out = tmp.path().join("4");
    o.threads = Some(4);
    run(&cfg, &o).unwrap();
    assert_eq!(files(&tmp.path().join("1")), files(&tmp.path().join("4")));
}

#[test]
fn single_value_sweep_equals_run() {
    let tmp = tempfile::tempdir().unwrap();
    let base = absorption_config();
    let cfg = load(Command::Absorption, Some(&base.to_string()), None).unwrap();
    let r = tmp.path().join("run");
    run(&cfg, &opts(&r)).unwrap();

    let sweep = json!({ "command": "sweep", "base": base, "axis": "thermal.nbar", "values": [0.5] }).to_string();
    let cfg = load(Command::Sweep, Some(&sweep), None).unwrap();
    let s = tmp.path().join("sweep");
    let m = run(&cfg, &opts(&s)).unwrap();
    let run_files: Vec<_> = files(&r).into_iter().filter(|(n, _)| n != "manifest.json").collect();
    let point_files: Vec<_> = files(&s.join("point_000"));
    assert_eq!(run_files, point_files);
    let run_m: Value = serde_json::from_slice(&fs::read(r.join("manifest.json")).unwrap()).unwrap();
    assert_eq!(m["points"][0]["parameters"], run_m["parameters"]);
    assert_eq!(m["points"][0]["summary"], run_m["summary"]);
}

#[test]
fn sweep_manifest_follows_input_order() {
    let tmp = tempfile::tempdir().unwrap();
    let sweep = json!({
        "command": "sweep",
        "base": absorption_config(),
        "axis": "parameters.molecule.lambda",
        "values": [0.9, 0.1, 0.5]
    })
    .to_string();
    let cfg = load(Command::Sweep, Some(&sweep), None).unwrap();
    let m = run(&cfg, &opts(tmp.path())).unwrap();
    let pts = m["points"].as_array().unwrap();
    let lam: Vec<f64> = pts.iter().map(|p| p["parameters"]["molecule"]["lambda"].as_f64().unwrap()).collect();
    assert_eq!(lam, vec![0.9, 0.1, 0.5]);
    for (i, p) in pts.iter().enumerate() {
        assert_eq!(p["directory"], format!("point_{i:03}"));
        let ffc = p["summary"]["f_fc"].as_f64().unwrap();
        assert!((ffc - (-lam[i] * lam[i] * 2.0f64).exp()).abs() < 1e-12);
    }
}

#[test]
fn non_scalar_axis_is_rejected() {
    for axis in ["molecule", "detuning", "no.such.key"] {
        let sweep = json!({ "command": "sweep", "base": absorption_config(), "axis": axis, "values": [1.0] }).to_string();
        let e = load(Command::Sweep, Some(&sweep), None).unwrap_err();
        assert_eq!(e.exit_code(), 2, "{axis}");
    }
}

#[test]
fn sweep_over_preset_base() {
    let sweep = json!({ "command": "sweep", "base": "fig6c", "axis": "thermal.kelvin", "values": [4.0, 10.0] }).to_string();
    let cfg = load(Command::Sweep, Some(&sweep), None).unwrap();
    let tmp = tempfile::tempdir().unwrap();
    let m = run(&cfg, &opts(tmp.path())).unwrap();
    let fdw: Vec<f64> = m["points"].as_array().unwrap().iter().map(|p| p["summary"]["f_dw"].as_f64().unwrap()).collect();
    assert!(fdw[0] > fdw[1]);
}

#[test]
fn theory_overlay_is_markovian_decay() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = load(Command::Preset, None, Some("fig2c")).unwrap();
    let m = run(&cfg, &opts(tmp.path())).unwrap();
    let t = Table::parse_csv("theory.csv", &fs::read(tmp.path().join("theory.csv")).unwrap()).unwrap();
    assert_eq!(t.header, vec!["t", "E_theory"]);
    let gm = m["summary"]["gamma_m"].as_f64().unwrap();
    assert_eq!(gm, 0.05);
    for r in &t.rows {
        assert!((r[1] - 0.5 * (-gm * r[0]).exp()).abs() < 1e-12);
    }
    let tr = Table::parse_csv("trajectory.csv", &fs::read(tmp.path().join("trajectory.csv")).unwrap()).unwrap();
    assert_eq!(tr.header, vec!["t", "Q1", "P1", "E1"]);
    assert_eq!(tr.column(0), t.column(0));
}

#[test]
fn every_preset_loads() {
    for (name, _) in vibrolang::config::PRESETS {
        load(Command::Preset, None, Some(name)).unwrap_or_else(|e| panic!("{name}: {e}"));
    }
    assert_eq!(load(Command::Preset, None, Some("fig9")).unwrap_err().exit_code(), 2);
}

fn cli(args: &[&str], config: Option<&str>) -> (i32, String, tempfile::TempDir) {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("out");
    let mut cmd = bin();
    cmd.args(args).arg("--out").arg(&out);
    if let Some(c) = config {
        let p = tmp.path().join("cfg.json");
        fs::write(&p, c).unwrap();
        cmd.arg("--config").arg(p);
    }
    let o = cmd.output().unwrap();
    (o.status.code().unwrap(), String::from_utf8_lossy(&o.stderr).into_owned(), tmp)
}

#[test]
fn bad_configs_exit_2_without_files() {
    let mut unknown = absorption_config();
    unknown["parameters"]["molecule"]["mass"] = json!(1.0);
    let mut negative = absorption_config();
    negative["parameters"]["molecule"]["gamma"] = json!(-1.0);
    let mut mismatch = absorption_config();
    mismatch["command"] = json!("cavity");
    let cases = [
        ("", "config"),
        ("{", "config"),
        ("[]", "config"),
        ("{}", "parameters"),
        (&unknown.to_string(), "parameters.molecule"),
        (&negative.to_string(), "parameters.molecule.gamma"),
        (&mismatch.to_string(), "command"),
    ];
    for (text, path) in cases {
        let (code, err, tmp) = cli(&["absorption"], Some(text));
        assert_eq!(code, 2, "{text}: {err}");
        assert!(err.contains(path), "{err}");
        assert!(!tmp.path().join("out").exists());
    }
    let (code, _, tmp) = cli(&["absorption"], None);
    assert_eq!(code, 2);
    assert!(!tmp.path().join("out").exists());
}

#[test]
fn numeric_failure_exits_1_without_files() {
    let mut c = absorption_config();
    c["parameters"]["molecule"]["lambda"] = json!(2.0);
    c["parameters"]["n_max"] = json!(2);
    let (code, err, tmp) = cli(&["absorption"], Some(&c.to_string()));
    assert_eq!(code, 1, "{err}");
    assert!(err.contains("truncation"), "{err}");
    assert!(!tmp.path().join("out").exists());
}

#[test]
fn binary_runs_preset_with_thread_env() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("p");
    let o = bin()
        .args(["preset", "fig6c", "--format", "csv+svg", "--seed", "3", "--out"])
        .arg(&out)
        .env("VIBROLANG_THREADS", "2")
        .output()
        .unwrap();
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let m: Value = serde_json::from_slice(&fs::read(out.join("manifest.json")).unwrap()).unwrap();
    assert_eq!(m["preset"], "fig6c");
    assert_eq!(m["seed"], 3);
    assert_eq!(m["format"], "csv+svg");
    let svg = fs::read_to_string(out.join("transmission.svg")).unwrap();
    assert!(svg.starts_with("<svg") && svg.contains("<path"));
}

#[test]
fn threads_flag_parse_error_is_usage_error() {
    let (code, _, tmp) = cli(&["preset", "fig6c", "--threads", "many"], None);
    assert_eq!(code, 2);
    assert!(!tmp.path().join("out").exists());
}
