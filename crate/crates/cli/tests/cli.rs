use std::path::Path;
use std::process::{Command, Output};

use sdym_chain::field::{ComplexField, ScalarField};
use sdym_chain::grid::Grid2;
use sdym_chain::io::{read_field, write_field, AnyField};
use sdym_chain::Complex64;
use serde_json::Value;

fn cli(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sdym-chain")).args(args).output().expect("binary runs")
}

fn report(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("report is JSON")
}

fn check<'a>(r: &'a Value, name: &str) -> &'a Value {
    r["checks"].as_array().unwrap().iter().find(|c| c["name"] == name).unwrap_or_else(|| panic!("no check {name}"))
}

#[test]
fn kp_suite_passes() {
    let out = cli(&["run", "--suite", "kp"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let r = report(&out);
    assert_eq!(r["schema"], "report_v1");
    assert_eq!(r["pass"], true);
    let c = check(&r, "kdv-soliton");
    assert_eq!(c["pass"], true);
    assert!(c["linf"].as_f64().unwrap() < 1e-6);
    for c in r["checks"].as_array().unwrap() {
        assert!(!c["anchor"].as_str().unwrap().is_empty());
        assert_eq!(c["pass"].as_bool().unwrap(), c["linf"].as_f64().unwrap() <= c["tolerance"].as_f64().unwrap());
    }
    assert!(!r["conventions"].as_str().unwrap().is_empty());
}

#[test]
fn bogomolny_collapse_is_exact() {
    let out = cli(&["run", "--suite", "bogomolny"]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert_eq!(check(&r, "collapse")["linf"].as_f64(), Some(0.0));
}

#[test]
fn corrupted_m3_fails_all() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    std::fs::write(&cfg, "# ten percent\ncorrupt_m3 = 0.1\n").unwrap();
    let out = cli(&["run", "--suite", "all", "--config", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let r = report(&out);
    let failed: Vec<&str> = r["failed"].as_array().unwrap().iter().map(|v| v.as_str().unwrap()).collect();
    assert!(failed.contains(&"kp.kdv-soliton"), "{failed:?}");
    assert!(failed.contains(&"ishimori-ds.ds-modulus-hyperbolic"), "{failed:?}");
    assert!(String::from_utf8_lossy(&out.stderr).contains("FAIL kp.kdv-soliton"));
}

#[test]
fn reports_are_deterministic() {
    let strip = |o: &Output| {
        let mut r = report(o);
        r["wall_time_s"] = Value::Null;
        r.to_string()
    };
    let a = cli(&["run", "--suite", "frames-1p1"]);
    let b = cli(&["run", "--suite", "frames-1p1"]);
    assert_eq!(strip(&a), strip(&b));
}

#[test]
fn tolerance_override_and_out_dir() {
    let dir = tempfile::tempdir().unwrap();
    let out = cli(&["run", "--suite", "surface", "--tol", "cylinder-flat=0", "--out", dir.path().to_str().unwrap(), "--fields", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    let r: Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join("report.json")).unwrap()).unwrap();
    assert_eq!(check(&r, "cylinder-flat")["tolerance"].as_f64(), Some(0.0));
    assert!(dir.path().join("fields").join("surface_sphere_gauss_curvature.csv").exists());
    assert_eq!(r["settings"]["tol.cylinder-flat"], "0e0");
}

#[test]
fn config_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.cfg");
    std::fs::write(&cfg, "resolution = 64\n").unwrap();
    assert_eq!(cli(&["run", "--suite", "kp", "--config", cfg.to_str().unwrap()]).status.code(), Some(2));
    assert_eq!(cli(&["run", "--suite", "nope"]).status.code(), Some(2));
    assert_eq!(cli(&["run", "--suite", "kp", "--grid", "15"]).status.code(), Some(2));
    assert_eq!(cli(&["run", "--suite", "surface", "--tol", "unknown-check=1"]).status.code(), Some(2));
    assert_eq!(cli(&["run", "--suite", "kp", "--config", "/nonexistent.cfg"]).status.code(), Some(2));
    assert_eq!(cli(&["info", "/nonexistent"]).status.code(), Some(2));
}

fn sample_fields(dir: &Path) -> (std::path::PathBuf, std::path::PathBuf) {
    let g = Grid2::new(64, 64, 4.0, 6.0).unwrap();
    let real = ScalarField::from_fn(g, |x, y| (x * y).sin() / 3.0);
    let cplx = ComplexField::from_fn(g, |x, y| Complex64::new(x.cos(), y.sin() * 1e-300));
    let (r, c) = (dir.join("real"), dir.join("cplx"));
    write_field(&r, "real", &AnyField::Real(real)).unwrap();
    write_field(&c, "cplx", &AnyField::Complex(cplx)).unwrap();
    (r, c)
}

#[test]
fn info_reports_header() {
    let dir = tempfile::tempdir().unwrap();
    let (r, _) = sample_fields(dir.path());
    let out = cli(&["info", r.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["header"]["nx"], 64);
    assert_eq!(v["header"]["ny"], 64);
    assert_eq!(v["header"]["kind"], "real");
    assert_eq!(v["header"]["Lx"], 4.0);
}

#[test]
fn dump_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let (r, c) = sample_fields(dir.path());
    let copy = dir.path().join("copy");
    let out = cli(&["dump", c.to_str().unwrap(), "--format", "binary", "--out", copy.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(std::fs::read(c.with_extension("bin")).unwrap(), std::fs::read(copy.with_extension("bin")).unwrap());
    assert_eq!(read_field(&c).unwrap().1, read_field(&copy).unwrap().1);

    let out = cli(&["dump", c.to_str().unwrap(), "--format", "csv"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().next(), Some("x,y,re,im"));
    assert_eq!(text.lines().count(), 64 * 64 + 1);
    let out = cli(&["dump", r.to_str().unwrap()]);
    assert_eq!(String::from_utf8(out.stdout).unwrap().lines().next(), Some("x,y,value"));
}

#[test]
fn malformed_field_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let (r, _) = sample_fields(dir.path());
    std::fs::write(r.with_extension("bin"), [0u8; 13]).unwrap();
    assert_eq!(cli(&["dump", r.to_str().unwrap()]).status.code(), Some(2));
    std::fs::write(r.with_extension("json"), "{not json").unwrap();
    assert_eq!(cli(&["info", r.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn catalog_writes_fields() {
    let dir = tempfile::tempdir().unwrap();
    let out = cli(&["catalog", "kdv-soliton", "--param", "kappa=0.5", "--grid", "32", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let (h, _) = read_field(&dir.path().join("k")).unwrap();
    assert_eq!(h.nx, 32);
    assert_eq!(cli(&["catalog", "nope", "--out", dir.path().to_str().unwrap()]).status.code(), Some(2));
}
