use std::path::Path;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_helix-otto"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).env_remove("HELIX_OTTO_THREADS").output().unwrap()
}

fn stdout(out: &Output) -> String {
    assert!(
        out.status.success(),
        "exit {:?}: {}",
        out.status.code(),
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn csv_rows(text: &str) -> (Vec<String>, Vec<Vec<String>>) {
    let mut lines = text.lines();
    let header = lines.next().unwrap().split(',').map(str::to_string).collect();
    let rows = lines.map(|l| l.split(',').map(str::to_string).collect()).collect();
    (header, rows)
}

fn json(text: &str) -> serde_json::Value {
    serde_json::from_str(text).unwrap()
}

#[test]
fn spectrum_csv_gap() {
    let out = stdout(&run(&[
        "spectrum", "--xi-max", "0.5", "--l-max", "1", "--count", "2", "--format", "csv",
    ]));
    let (header, rows) = csv_rows(&out);
    assert_eq!(header, ["xi_max", "l", "n", "epsilon"]);
    assert_eq!(rows.len(), 4);
    let eps = |l: &str, n: &str| -> f64 {
        rows.iter().find(|r| r[1] == l && r[2] == n).unwrap()[3]
            .parse()
            .unwrap()
    };
    let gap = eps("1", "1") - eps("0", "1");
    assert!((gap - 0.93).abs() <= 0.01, "{gap}");
}

#[test]
fn spectrum_single_row() {
    let (_, rows) = csv_rows(&stdout(&run(&[
        "spectrum", "--xi-max", "1", "--l-max", "0", "--count", "1",
    ])));
    assert_eq!(rows.len(), 1);
}

#[test]
fn spectrum_json_is_flat_rows() {
    let v = json(&stdout(&run(&[
        "spectrum", "--xi-max", "1", "--count", "2", "--format", "json",
    ])));
    let rows = v.as_array().unwrap();
    assert_eq!(rows.len(), 2);
    for key in ["xi_max", "l", "n", "epsilon"] {
        assert!(rows[0].get(key).is_some(), "{key}");
    }
}

#[test]
fn usage_errors_exit_2() {
    for args in [
        &["spectrum", "--xi-max", "-1"][..],
        &["spectrum", "--xi-max", "nan"],
        &["spectrum", "--xi-max", "1", "--count", "0"],
        &["spectrum"],
        &["sweep", "--preset", "flat", "--r", "1:2"],
        &["sweep", "--flat"],
        &["sweep", "--preset", "flat", "--flat", "--r", "1:2:1"],
        &["sweep", "--xi-cold", "0.5", "--r", "1:2:1"],
        &["cycle", "--preset", "flat", "--r", "0"],
        &["cycle", "--preset", "flat", "--r", "1", "--theta", "-2"],
        &["geometry", "--radius", "1"],
        &["geometry", "--omega", "-1"],
        &["frobnicate"],
    ] {
        let out = run(args);
        assert_eq!(
            out.status.code(),
            Some(2),
            "{args:?}: {}",
            String::from_utf8_lossy(&out.stderr)
        );
    }
}

#[test]
fn numerical_failure_exits_1() {
    // four flat levels contain a degenerate pair
    let out = run(&["cycle", "--flat", "--r", "1", "--level-count", "4"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(!out.stderr.is_empty());
}

#[test]
fn sweep_single_point_is_an_engine() {
    let (header, rows) = csv_rows(&stdout(&run(&["sweep", "--preset", "flat", "--r", "2:2:1"])));
    assert_eq!(header, ["r", "q_cold", "q_hot", "work", "eta_norm", "cop_norm", "mode"]);
    assert_eq!(rows.len(), 1);
    let work: f64 = rows[0][3].parse().unwrap();
    assert!(work > 0.0);
    assert_eq!(rows[0][6], "engine");
    assert!(rows[0][5].is_empty());
}

fn transitions(rows: &[Vec<String>]) -> Vec<(f64, String)> {
    let mut out = Vec::new();
    for w in rows.windows(2) {
        if w[0][6] != w[1][6] {
            out.push((w[1][0].parse().unwrap(), w[1][6].clone()));
        }
    }
    out
}

#[test]
fn flat_sweep_mode_transitions() {
    let (_, rows) = csv_rows(&stdout(&run(&["sweep", "--preset", "flat", "--r", "0.2:8:0.01"])));
    assert_eq!(rows.len(), 781);
    let t = transitions(&rows);
    assert_eq!(t.len(), 2, "{t:?}");
    assert!((t[0].0 - 1.0).abs() <= 0.011 && t[0].1 == "engine");
    assert!((t[1].0 - 3.464).abs() <= 0.011 && t[1].1 == "refrigerator");
}

#[test]
fn curved_up_engine_window() {
    let (_, rows) = csv_rows(&stdout(&run(&["sweep", "--preset", "curved-up", "--r", "0.3:3:0.01"])));
    let engine: Vec<f64> = rows
        .iter()
        .filter(|r| r[6] == "engine")
        .map(|r| r[0].parse().unwrap())
        .collect();
    let (lo, hi) = (engine[0], *engine.last().unwrap());
    assert!((lo - 0.54).abs() <= 0.011, "{lo}");
    assert!((hi - 1.878).abs() <= 0.011, "{hi}");
}

#[test]
fn sweep_gates_normalised_columns_by_mode() {
    let (_, rows) = csv_rows(&stdout(&run(&["sweep", "--preset", "curved-down"])));
    for r in &rows {
        assert_eq!(!r[4].is_empty(), r[6] == "engine", "{r:?}");
        assert_eq!(!r[5].is_empty(), r[6] == "refrigerator", "{r:?}");
    }
}

#[test]
fn csv_is_bit_stable() {
    let args = ["sweep", "--preset", "curved-up", "--r", "0.3:3:0.05"];
    let a = stdout(&run(&args));
    let b = stdout(&bin().args(args).env("HELIX_OTTO_THREADS", "1").output().unwrap());
    assert_eq!(a, b);
}

#[test]
fn bad_thread_cap_is_usage_error() {
    let out = bin()
        .args(["sweep", "--flat", "--r", "1:2:1"])
        .env("HELIX_OTTO_THREADS", "many")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn cycle_reports() {
    let v = json(&stdout(&run(&["cycle", "--preset", "curved-up", "--r", "1"])));
    assert_eq!(v["mode"], "engine");
    assert!((v["alpha_min"].as_f64().unwrap() - 1.18).abs() <= 0.02);
    assert!(v["warning"].is_null());
    for key in [
        "q_cold",
        "q_hot",
        "work",
        "efficiency",
        "cop",
        "alpha",
        "cold_levels",
        "hot_levels",
    ] {
        assert!(v.get(key).is_some(), "{key}");
    }
    let w = v["work"].as_f64().unwrap();
    let sum = v["q_hot"].as_f64().unwrap() + v["q_cold"].as_f64().unwrap();
    // the JSON parser may be off by an ulp
    assert!((w - sum).abs() <= 4.0 * f64::EPSILON * w.abs());

    let v = json(&stdout(&run(&["cycle", "--preset", "flat", "--r", "0.5"])));
    assert_eq!(v["mode"], "heater");

    let v = json(&stdout(&run(&["cycle", "--flat", "--r", "1", "--theta", "1"])));
    for key in ["q_cold", "q_hot", "work"] {
        assert_eq!(v[key].as_f64().unwrap(), 0.0, "{key}");
    }
}

#[test]
fn cycle_warns_below_alpha_bound() {
    let v = json(&stdout(&run(&[
        "cycle",
        "--xi-cold",
        "0.5",
        "--xi-hot",
        "1",
        "--r",
        "0.5",
    ])));
    assert!(v["alpha"].as_f64().unwrap() <= v["alpha_min"].as_f64().unwrap());
    assert!(v["warning"].is_string());
    assert_ne!(v["mode"], "engine");
}

#[test]
fn geometry_height_ratio() {
    let v = json(&stdout(&run(&["geometry", "--omega-r", "1", "--omega-r2", "0.5"])));
    let ratio = v["height_ratio"].as_f64().unwrap();
    assert!((ratio.max(1.0 / ratio) - 1.10).abs() <= 0.01, "{ratio}");
    for s in v["samples"].as_array().unwrap() {
        assert_eq!(s["mean"].as_f64().unwrap(), 0.0);
    }
}

#[test]
fn geometry_flat_limit() {
    let v = json(&stdout(&run(&[
        "geometry", "--omega", "0", "--radius", "2", "--height", "3",
    ])));
    assert_eq!(v["area"].as_f64().unwrap(), 6.0);
    let (header, rows) = csv_rows(&stdout(&run(&["geometry", "--omega", "0", "--format", "csv"])));
    assert_eq!(header, ["rho", "kappa1", "kappa2", "mean", "gaussian", "v_geom"]);
    for r in rows {
        assert!(r[1..].iter().all(|v| v == "0"), "{r:?}");
    }
}

#[test]
fn geometry_mean_curvature_always_zero() {
    for omega in ["0.3", "2", "17.5"] {
        let (_, rows) = csv_rows(&stdout(&run(&[
            "geometry",
            "--omega",
            omega,
            "--radius",
            "3",
            "--samples",
            "50",
            "--format",
            "csv",
        ])));
        assert!(rows.iter().all(|r| r[3] == "0"));
    }
}

fn svg_checks(path: &Path, polylines_at_least: usize) -> String {
    let text = std::fs::read_to_string(path).unwrap();
    assert!(text.starts_with("<?xml"));
    assert!(text.contains(r#"version="1.1""#));
    assert!(text.matches("<polyline").count() >= polylines_at_least);
    assert!(text.trim_end().ends_with("</svg>"));
    text
}

#[test]
fn svg_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("spectrum.svg");
    stdout(&run(&[
        "spectrum",
        "--xi-max",
        "0.5",
        "--l-max",
        "1",
        "--count",
        "2",
        "--format",
        "svg",
        "--samples",
        "100",
        "-o",
        p.to_str().unwrap(),
    ]));
    let text = svg_checks(&p, 2);
    assert_eq!(text.matches(r#"class="marker""#).count(), 4);

    for (kind, label) in [("heats", "W~"), ("efficiency", "eta"), ("cop", "COP")] {
        let p = dir.path().join(format!("{kind}.svg"));
        stdout(&run(&[
            "sweep",
            "--preset",
            "flat",
            "--format",
            "svg",
            "--plot",
            kind,
            "--output",
            p.to_str().unwrap(),
        ]));
        let text = svg_checks(&p, 1);
        assert!(text.contains(label), "{kind}");
        assert!(text.contains("r = rho_c / rho_h"));
    }
}

#[test]
fn output_file_replaces_atomically() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("out.csv");
    std::fs::write(&p, "stale").unwrap();
    let out = run(&["spectrum", "--xi-max", "1", "-o", p.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    assert!(std::fs::read_to_string(&p).unwrap().starts_with("xi_max,l,n,epsilon\n"));
    assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 1);

    let out = run(&[
        "spectrum",
        "--xi-max",
        "1",
        "-o",
        dir.path().join("missing/x.csv").to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn config_file_with_overrides() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.json");
    std::fs::write(&cfg, r#"{"xi_max": 0.5, "l_max": 1, "count": 3}"#).unwrap();
    let (_, rows) = csv_rows(&stdout(&run(&["spectrum", "--config", cfg.to_str().unwrap()])));
    assert_eq!(rows.len(), 6);
    let (_, rows) = csv_rows(&stdout(&run(&[
        "--config",
        cfg.to_str().unwrap(),
        "spectrum",
        "--count",
        "1",
    ])));
    assert_eq!(rows.len(), 2);

    std::fs::write(&cfg, r#"{"preset": "curved-up", "r": 1}"#).unwrap();
    let v = json(&stdout(&run(&["cycle", "--config", cfg.to_str().unwrap()])));
    assert_eq!(v["mode"], "engine");

    std::fs::write(&cfg, r#"{"xi_max": 1, "colour": "red"}"#).unwrap();
    assert_eq!(
        run(&["spectrum", "--config", cfg.to_str().unwrap()]).status.code(),
        Some(2)
    );
    std::fs::write(&cfg, "not json").unwrap();
    assert_eq!(
        run(&["spectrum", "--config", cfg.to_str().unwrap()]).status.code(),
        Some(2)
    );
    assert_eq!(
        run(&["spectrum", "--config", dir.path().join("none.json").to_str().unwrap()])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn help_exits_cleanly() {
    let out = run(&["--help"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).contains("sweep"));
}
