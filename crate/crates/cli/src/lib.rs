//! Verification suites behind the `sdym-chain` binary, the versioned JSON
//! report they produce, and the flat `key = value` run configuration.

pub mod suites;

use serde::Serialize;
use std::collections::{BTreeMap, BTreeSet};
use std::path::PathBuf;
use std::time::Instant;

use sdym_chain::io::{write_field, AnyField};
use sdym_chain::ResidualReport;

pub const REPORT_SCHEMA: &str = "report_v1";

/// Process exit codes.
pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_INTERNAL: i32 = 3;

#[derive(Debug)]
pub enum CliError {
    /// Bad flags, config or input files.
    Config(String),
    /// A library call failed while running a suite.
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => EXIT_CONFIG,
            CliError::Internal(_) => EXIT_INTERNAL,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Config(m) => write!(f, "configuration error: {m}"),
            CliError::Internal(m) => write!(f, "internal error: {m}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<sdym_chain::Error> for CliError {
    fn from(e: sdym_chain::Error) -> Self {
        CliError::Internal(e.to_string())
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

/// One row of the report.
#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct Check {
    pub suite: String,
    pub name: String,
    /// The identity or equation the check exercises.
    pub anchor: String,
    pub linf: f64,
    pub l2: f64,
    pub tolerance: f64,
    pub pass: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub schema: &'static str,
    pub suite: String,
    pub conventions: &'static str,
    pub paper_literal: bool,
    pub settings: BTreeMap<String, String>,
    pub checks: Vec<Check>,
    pub failed: Vec<String>,
    pub pass: bool,
    pub wall_time_s: f64,
}

impl Report {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

pub const SUITES: [&str; 9] = ["surface", "frames-1p1", "mmlxii", "ishimori-ds", "kp", "mkp-miura", "m0-spin", "sdym-embed", "bogomolny"];

/// Settings recognized in a `--config` file.
pub const CONFIG_KEYS: [&str; 4] = ["grid", "seed", "corrupt_m3", "paper_literal"];

/// Everything a suite may consult while running.
#[derive(Clone, Debug, Default)]
pub struct RunOptions {
    pub grid: Option<usize>,
    pub paper_literal: bool,
    pub seed: u64,
    /// Relative size of the perturbation added to every `m3` handed to a
    /// residual; zero leaves fixtures intact.
    pub corrupt_m3: f64,
    pub tolerances: BTreeMap<String, f64>,
    pub out: Option<PathBuf>,
    pub fields: Option<FieldFormat>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FieldFormat {
    Binary,
    Csv,
}

impl std::str::FromStr for FieldFormat {
    type Err = CliError;

    fn from_str(s: &str) -> CliResult<Self> {
        match s {
            "binary" => Ok(FieldFormat::Binary),
            "csv" => Ok(FieldFormat::Csv),
            other => Err(CliError::Config(format!("unknown format '{other}' (binary, csv)"))),
        }
    }
}

/// Parses flat `key = value` text; `#` starts a comment.
pub fn parse_kv(text: &str) -> CliResult<BTreeMap<String, String>> {
    let mut map = BTreeMap::new();
    for (no, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line.split_once('=').ok_or_else(|| CliError::Config(format!("line {}: expected key = value", no + 1)))?;
        map.insert(k.trim().to_string(), v.trim().to_string());
    }
    Ok(map)
}

fn parse_value<T: std::str::FromStr>(key: &str, v: &str) -> CliResult<T> {
    v.parse().map_err(|_| CliError::Config(format!("bad value for {key}: '{v}'")))
}

impl RunOptions {
    /// Applies config-file settings; flags given on the command line win,
    /// so this is called before flag overrides.
    pub fn apply_config(&mut self, map: &BTreeMap<String, String>) -> CliResult<()> {
        for (k, v) in map {
            match k.as_str() {
                "grid" => self.grid = Some(parse_value(k, v)?),
                "seed" => self.seed = parse_value(k, v)?,
                "corrupt_m3" => self.corrupt_m3 = parse_value(k, v)?,
                "paper_literal" => self.paper_literal = parse_value(k, v)?,
                other => return Err(CliError::Config(format!("unknown config key '{other}' (known: {})", CONFIG_KEYS.join(", ")))),
            }
        }
        self.validate()
    }

    pub fn validate(&self) -> CliResult<()> {
        if let Some(n) = self.grid {
            if n < 16 || n % 2 != 0 {
                return Err(CliError::Config(format!("--grid must be even and at least 16, got {n}")));
            }
        }
        if !(self.corrupt_m3.is_finite() && self.corrupt_m3 >= 0.0) {
            return Err(CliError::Config(format!("corrupt_m3 must be non-negative, got {}", self.corrupt_m3)));
        }
        Ok(())
    }

    pub fn settings(&self) -> BTreeMap<String, String> {
        let mut s = BTreeMap::new();
        s.insert("grid".into(), self.grid.map_or("default".into(), |n| n.to_string()));
        s.insert("seed".into(), self.seed.to_string());
        s.insert("corrupt_m3".into(), self.corrupt_m3.to_string());
        for (k, v) in &self.tolerances {
            s.insert(format!("tol.{k}"), format!("{v:e}"));
        }
        s
    }
}

/// Parses a `KEY=VAL` tolerance override.
pub fn parse_tol(s: &str) -> CliResult<(String, f64)> {
    let (k, v) = s.split_once('=').ok_or_else(|| CliError::Config(format!("--tol expects KEY=VAL, got '{s}'")))?;
    let v: f64 = parse_value(k, v)?;
    if !(v >= 0.0) {
        return Err(CliError::Config(format!("tolerance for {k} must be non-negative")));
    }
    Ok((k.trim().to_string(), v))
}

/// Collects checks and field dumps for one suite.
pub struct Recorder<'a> {
    pub suite: &'static str,
    pub opts: &'a RunOptions,
    pub checks: Vec<Check>,
    pub fields: Vec<(String, AnyField)>,
}

impl<'a> Recorder<'a> {
    pub fn new(suite: &'static str, opts: &'a RunOptions) -> Self {
        Self { suite, opts, checks: Vec::new(), fields: Vec::new() }
    }

    /// Grid size with the `--grid` override applied.
    pub fn n(&self, default: usize) -> usize {
        self.opts.grid.unwrap_or(default)
    }

    fn tolerance(&self, name: &str, default: f64) -> f64 {
        let full = format!("{}.{name}", self.suite);
        self.opts.tolerances.get(&full).or_else(|| self.opts.tolerances.get(name)).copied().unwrap_or(default)
    }

    pub fn value(&mut self, name: &str, anchor: &str, linf: f64, l2: f64, tol: f64) {
        let tolerance = self.tolerance(name, tol);
        let pass = linf <= tolerance;
        self.checks.push(Check { suite: self.suite.into(), name: name.into(), anchor: anchor.into(), linf, l2, tolerance, pass });
    }

    pub fn scalar(&mut self, name: &str, anchor: &str, v: f64, tol: f64) {
        self.value(name, anchor, v, v, tol);
    }

    pub fn report(&mut self, name: &str, anchor: &str, r: &ResidualReport, tol: f64) {
        self.value(name, anchor, r.linf, r.l2, tol);
    }

    /// Several reports under one check: largest `linf`, root-sum-square `l2`.
    pub fn reports(&mut self, name: &str, anchor: &str, rs: &[ResidualReport], tol: f64) {
        let linf = rs.iter().map(|r| r.linf).fold(0.0, f64::max);
        let l2 = rs.iter().map(|r| r.l2 * r.l2).sum::<f64>().sqrt();
        self.value(name, anchor, linf, l2, tol);
    }

    pub fn field(&mut self, name: &str, f: impl Into<AnyField>) {
        if self.opts.fields.is_some() {
            self.fields.push((format!("{}_{name}", self.suite), f.into()));
        }
    }
}

/// Runs `suite` (or every suite for `all`) and assembles the report.
pub fn run(suite: &str, opts: &RunOptions) -> CliResult<Report> {
    opts.validate()?;
    let names: Vec<&'static str> = if suite == "all" {
        SUITES.to_vec()
    } else {
        vec![*SUITES.iter().find(|s| **s == suite).ok_or_else(|| CliError::Config(format!("unknown suite '{suite}' (known: {}, all)", SUITES.join(", "))))?]
    };
    let start = Instant::now();
    let mut checks = Vec::new();
    let mut fields = Vec::new();
    for name in names {
        let mut rec = Recorder::new(name, opts);
        suites::run_suite(&mut rec)?;
        checks.append(&mut rec.checks);
        fields.append(&mut rec.fields);
    }
    let known: BTreeSet<String> = checks.iter().flat_map(|c| [c.name.clone(), format!("{}.{}", c.suite, c.name)]).collect();
    if let Some(bad) = opts.tolerances.keys().find(|k| !known.contains(*k)) {
        return Err(CliError::Config(format!("--tol names no check of this run: '{bad}'")));
    }
    if let Some(dir) = &opts.out {
        write_fields(dir, &fields, opts.fields)?;
    }
    let failed: Vec<String> = checks.iter().filter(|c| !c.pass).map(|c| format!("{}.{}", c.suite, c.name)).collect();
    Ok(Report {
        schema: REPORT_SCHEMA,
        suite: suite.to_string(),
        conventions: sdym_chain::sdym::CONVENTIONS,
        paper_literal: opts.paper_literal,
        settings: opts.settings(),
        pass: failed.is_empty(),
        failed,
        checks,
        wall_time_s: start.elapsed().as_secs_f64(),
    })
}

fn write_fields(dir: &std::path::Path, fields: &[(String, AnyField)], format: Option<FieldFormat>) -> CliResult<()> {
    let Some(format) = format else { return Ok(()) };
    let dir = dir.join("fields");
    std::fs::create_dir_all(&dir).map_err(|e| CliError::Config(format!("{}: {e}", dir.display())))?;
    for (name, f) in fields {
        match format {
            FieldFormat::Binary => write_field(&dir.join(name), name, f)?,
            FieldFormat::Csv => std::fs::write(dir.join(format!("{name}.csv")), sdym_chain::io::to_csv(f)).map_err(|e| CliError::Internal(e.to_string()))?,
        }
    }
    Ok(())
}
