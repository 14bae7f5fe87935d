use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use sdym_chain::grid::Grid2;
use sdym_chain::io::{read_field, to_csv, write_field};
use sdym_chain::solvers::exact_catalog;
use sdym_chain_cli::{parse_kv, parse_tol, run, CliError, CliResult, FieldFormat, RunOptions, EXIT_CHECK_FAILED, EXIT_OK};

#[derive(Parser)]
#[command(name = "sdym-chain", version, about = "Residual checks for the self-dual Yang-Mills reduction chain")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run a verification suite (or `all`) and print the JSON report.
    Run {
        #[arg(long)]
        suite: String,
        /// Flat `key = value` file (grid, seed, corrupt_m3, paper_literal).
        #[arg(long)]
        config: Option<PathBuf>,
        /// Directory for report.json and dumped fields.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Tolerance override `NAME=VAL` or `SUITE.NAME=VAL`.
        #[arg(long = "tol")]
        tol: Vec<String>,
        /// Use the sign conventions as printed instead of the corrected ones.
        #[arg(long)]
        paper_literal: bool,
        #[arg(long)]
        grid: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        /// Dump suite fields under OUT/fields.
        #[arg(long)]
        fields: Option<FieldFormat>,
    },
    /// Convert a binary field to CSV or copy it to another binary path.
    Dump {
        file: PathBuf,
        #[arg(long, default_value = "csv")]
        format: FieldFormat,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print the header and simple statistics of a binary field.
    Info { file: PathBuf },
    /// Write the fields of a closed-form solution.
    Catalog {
        name: String,
        #[arg(long = "param")]
        param: Vec<String>,
        #[arg(long, default_value_t = 64)]
        grid: usize,
        #[arg(long)]
        out: PathBuf,
    },
}

fn input_error(path: &Path, e: sdym_chain::Error) -> CliError {
    CliError::Config(format!("{}: {e}", path.display()))
}

fn write_text(path: &Path, text: &str) -> CliResult<()> {
    std::fs::write(path, text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
}

fn execute(cmd: Cmd) -> CliResult<i32> {
    match cmd {
        Cmd::Run { suite, config, out, tol, paper_literal, grid, seed, fields } => {
            let mut opts = RunOptions::default();
            if let Some(path) = &config {
                let text = std::fs::read_to_string(path).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
                opts.apply_config(&parse_kv(&text)?)?;
            }
            opts.paper_literal |= paper_literal;
            if grid.is_some() {
                opts.grid = grid;
            }
            if let Some(s) = seed {
                opts.seed = s;
            }
            for t in &tol {
                let (k, v) = parse_tol(t)?;
                opts.tolerances.insert(k, v);
            }
            if fields.is_some() && out.is_none() {
                return Err(CliError::Config("--fields needs --out".into()));
            }
            opts.fields = fields;
            opts.out = out.clone();
            let report = run(&suite, &opts)?;
            let json = report.to_json();
            match &out {
                Some(dir) => {
                    std::fs::create_dir_all(dir).map_err(|e| CliError::Config(format!("{}: {e}", dir.display())))?;
                    write_text(&dir.join("report.json"), &json)?;
                }
                None => println!("{json}"),
            }
            for c in report.checks.iter().filter(|c| !c.pass) {
                eprintln!("FAIL {}.{}: linf {:.3e} > tol {:.1e} ({})", c.suite, c.name, c.linf, c.tolerance, c.anchor);
            }
            Ok(if report.pass { EXIT_OK } else { EXIT_CHECK_FAILED })
        }
        Cmd::Dump { file, format, out } => {
            let (header, field) = read_field(&file).map_err(|e| input_error(&file, e))?;
            match (format, out) {
                (FieldFormat::Csv, Some(p)) => write_text(&p, &to_csv(&field))?,
                (FieldFormat::Csv, None) => print!("{}", to_csv(&field)),
                (FieldFormat::Binary, Some(p)) => write_field(&p, &header.name, &field).map_err(|e| input_error(&p, e))?,
                (FieldFormat::Binary, None) => return Err(CliError::Config("binary dump needs --out".into())),
            }
            Ok(EXIT_OK)
        }
        Cmd::Info { file } => {
            let (header, field) = read_field(&file).map_err(|e| input_error(&file, e))?;
            let values = field.values();
            let max_abs = values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
            let finite = values.iter().all(|v| v.is_finite());
            let info = serde_json::json!({ "header": header, "values": values.len(), "max_abs": max_abs, "finite": finite });
            println!("{}", serde_json::to_string_pretty(&info).expect("info serializes"));
            Ok(EXIT_OK)
        }
        Cmd::Catalog { name, param, grid, out } => {
            let mut params = BTreeMap::new();
            for p in &param {
                let (k, v) = parse_tol(p)?;
                params.insert(k, v);
            }
            let g = Grid2::new(grid, grid, 2.0 * std::f64::consts::PI, 2.0 * std::f64::consts::PI).map_err(|e| CliError::Config(e.to_string()))?;
            let entry = exact_catalog(&name, &params, g).map_err(|e| CliError::Config(e.to_string()))?;
            std::fs::create_dir_all(&out).map_err(|e| CliError::Config(format!("{}: {e}", out.display())))?;
            for (fname, f) in &entry.fields {
                write_field(&out.join(fname), fname, f)?;
            }
            println!("{}", entry.note);
            Ok(EXIT_OK)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli.cmd) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
