//! Command-line front end: flag and config-file parsing, dispatch, rendering.
//!
//! [`run`] is pure apart from reading and appending the scan output file, so
//! it can be driven from tests; `main` only maps the outcome to a process exit.

mod scan;
mod verify;

pub use scan::{scan, ScanCheck, ScanRecord, ScanSummary};
pub use verify::{verify, VerifyRecord, VerifyReport, VerifySummary};

use std::fs;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};

use crate::counting::{CapVector, NumberCache};
use crate::ehrhart::{
    brute_count, ehrhart_formula, fat_brute_count, fat_to_thin, normalized_volume, volume, FatSliceSpec, SliceSpec,
};
use crate::error::Error;
use crate::flag::{flag_eulerian_convolution, flag_eulerian_distribution, flag_eulerian_via_volume};
use crate::hstar::hstar_series;
use crate::polyarith::{format_rational, IntPoly, RatPoly};
use crate::weighted_perms::{w_count_enum, w_count_formula};

pub const EXIT_OK: i32 = 0;
pub const EXIT_MODEL_VIOLATION: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_IO: i32 = 3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Command {
    Count,
    Ehrhart,
    Hstar,
    Volume,
    Flag,
    Wperm,
    Verify,
    Scan,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum OutputFormat {
    #[default]
    Json,
    Csv,
    Text,
}

fn default_tol() -> f64 {
    1e-9
}

/// One job. The JSON config file uses exactly these field names.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JobConfig {
    pub command: Command,
    #[serde(default)]
    pub k: Option<u64>,
    #[serde(default)]
    pub c: Option<CapVector>,
    #[serde(default)]
    pub a: Option<u64>,
    #[serde(default)]
    pub b: Option<u64>,
    #[serde(default)]
    pub n: Option<usize>,
    #[serde(default)]
    pub m: Option<usize>,
    /// Dilation factor for `count`.
    #[serde(default)]
    pub t: Option<u64>,
    #[serde(default)]
    pub output: OutputFormat,
    #[serde(default = "default_tol")]
    pub tol: f64,
    #[serde(default)]
    pub max_n: Option<usize>,
    #[serde(default)]
    pub max_c: Option<u64>,
    #[serde(default)]
    pub out: Option<PathBuf>,
    /// Scan target; all three when absent.
    #[serde(default)]
    pub check: Option<ScanCheck>,
}

impl JobConfig {
    pub fn new(command: Command) -> Self {
        JobConfig {
            command,
            k: None,
            c: None,
            a: None,
            b: None,
            n: None,
            m: None,
            t: None,
            output: OutputFormat::Json,
            tol: default_tol(),
            max_n: None,
            max_c: None,
            out: None,
            check: None,
        }
    }

    pub fn validate(&self) -> Result<(), CliError> {
        if !(self.tol.is_finite() && self.tol > 0.0) {
            return Err(CliError::Usage(format!("--tol must be a positive number, got {}", self.tol)));
        }
        Ok(())
    }
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Io(_) => EXIT_IO,
        }
    }
}

/// What a job printed and how it ended.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Outcome { stdout, stderr: String::new(), code: EXIT_OK }
    }
}

#[derive(Debug, Parser)]
#[command(name = "prism", version, about = "Ehrhart polynomials, h*-polynomials and volumes of prism slices")]
pub struct Cli {
    #[command(subcommand)]
    pub command: CliCommand,
}

#[derive(Debug, Subcommand)]
pub enum CliCommand {
    /// Lattice points in the t-th dilate of a thin (--k) or fat (--a, --b) slice
    Count(Params),
    /// Ehrhart polynomial of a slice
    Ehrhart(Params),
    /// h*-polynomial of a slice
    Hstar(Params),
    /// Normalized and relative volume of a slice
    Volume(Params),
    /// Flag Eulerian numbers by enumeration, convolution and slice volume
    Flag(Params),
    /// W-numbers of c-compatible weighted permutations with --m cycles
    Wperm(Params),
    /// Cross-check every identity on a grid
    Verify(Params),
    /// Conjecture scan over a grid, as JSONL
    Scan(Params),
    /// Run a job from a JSON config file
    Run {
        #[arg(long)]
        config: PathBuf,
    },
}

#[derive(Debug, Clone, Args)]
pub struct Params {
    #[arg(long)]
    pub k: Option<u64>,
    /// Comma-separated caps, e.g. 6,3,4
    #[arg(long)]
    pub c: Option<CapVector>,
    #[arg(long)]
    pub a: Option<u64>,
    #[arg(long)]
    pub b: Option<u64>,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub m: Option<usize>,
    #[arg(long)]
    pub t: Option<u64>,
    #[arg(long = "max-n")]
    pub max_n: Option<usize>,
    #[arg(long = "max-c")]
    pub max_c: Option<u64>,
    #[arg(long, default_value_t = 1e-9)]
    pub tol: f64,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = OutputFormat::Json)]
    pub format: OutputFormat,
    #[arg(long, value_enum)]
    pub check: Option<ScanCheck>,
}

impl Params {
    fn into_config(self, command: Command) -> JobConfig {
        JobConfig {
            command,
            k: self.k,
            c: self.c,
            a: self.a,
            b: self.b,
            n: self.n,
            m: self.m,
            t: self.t,
            output: self.format,
            tol: self.tol,
            max_n: self.max_n,
            max_c: self.max_c,
            out: self.out,
            check: self.check,
        }
    }
}

impl Cli {
    pub fn into_config(self) -> Result<JobConfig, CliError> {
        let (command, params) = match self.command {
            CliCommand::Count(p) => (Command::Count, p),
            CliCommand::Ehrhart(p) => (Command::Ehrhart, p),
            CliCommand::Hstar(p) => (Command::Hstar, p),
            CliCommand::Volume(p) => (Command::Volume, p),
            CliCommand::Flag(p) => (Command::Flag, p),
            CliCommand::Wperm(p) => (Command::Wperm, p),
            CliCommand::Verify(p) => (Command::Verify, p),
            CliCommand::Scan(p) => (Command::Scan, p),
            CliCommand::Run { config } => {
                let text = fs::read_to_string(&config)?;
                return serde_json::from_str(&text)
                    .map_err(|e| CliError::Usage(format!("config {}: {e}", config.display())));
            }
        };
        Ok(params.into_config(command))
    }
}

/// Exact integer as a JSON number.
pub(crate) fn int_value(x: &BigInt) -> Value {
    serde_json::from_str(&x.to_string()).expect("integer literal is valid JSON")
}

pub(crate) fn int_poly_value(p: &IntPoly) -> Value {
    Value::Array(p.coeffs().iter().map(int_value).collect())
}

fn rat_poly_value(p: &RatPoly) -> Value {
    Value::Array(p.coeffs().iter().map(|q| Value::String(format_rational(q))).collect())
}

fn ints_value<'a>(xs: impl IntoIterator<Item = &'a BigInt>) -> Value {
    Value::Array(xs.into_iter().map(int_value).collect())
}

fn library(e: Error) -> CliError {
    CliError::Usage(e.to_string())
}

fn require<T: Clone>(v: &Option<T>, flag: &str, command: &str) -> Result<T, CliError> {
    v.clone().ok_or_else(|| CliError::Usage(format!("{command} requires --{flag}")))
}

/// The slice named by `--k --c`, or the thin equivalent of `--a --b --c`.
fn slice_of(cfg: &JobConfig, command: &str) -> Result<(SliceSpec, Map<String, Value>), CliError> {
    let c = require(&cfg.c, "c", command)?;
    let mut inst = Map::new();
    let s = match (cfg.k, cfg.a, cfg.b) {
        (Some(k), None, None) => {
            inst.insert("k".into(), json!(k));
            SliceSpec::new(k, c.clone()).map_err(library)?
        }
        (None, Some(a), Some(b)) => {
            inst.insert("a".into(), json!(a));
            inst.insert("b".into(), json!(b));
            fat_to_thin(&FatSliceSpec::new(a, b, c.clone()).map_err(library)?)
        }
        _ => return Err(CliError::Usage(format!("{command} requires either --k or both --a and --b, with --c"))),
    };
    inst.insert("c".into(), json!(c));
    Ok((s, inst))
}

fn tabulate(value: &Value, text: String, format: OutputFormat) -> String {
    match format {
        OutputFormat::Json => format!("{}\n", serde_json::to_string_pretty(value).expect("values serialize")),
        OutputFormat::Text => text,
        OutputFormat::Csv => to_csv(value),
    }
}

fn csv_cell(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => String::new(),
        other => other.to_string(),
    }
}

/// Top-level fields become columns; a `records` array becomes the rows.
fn to_csv(value: &Value) -> String {
    let rows: Vec<&Map<String, Value>> = match value.get("records") {
        Some(Value::Array(rs)) => rs.iter().filter_map(Value::as_object).collect(),
        _ => value.as_object().into_iter().collect(),
    };
    let Some(first) = rows.first() else {
        return String::new();
    };
    let header: Vec<&String> = first.keys().collect();
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(&header).expect("in-memory write");
    for row in rows {
        w.write_record(header.iter().map(|h| csv_cell(row.get(*h).unwrap_or(&Value::Null)))).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("cells are UTF-8")
}

fn join_ints(xs: &[BigInt]) -> String {
    xs.iter().map(BigInt::to_string).collect::<Vec<_>>().join(", ")
}

/// Caps for `wperm`: `--c`, or `n` ones from `--n`.
fn caps_or_ones(cfg: &JobConfig) -> Result<CapVector, CliError> {
    match (&cfg.c, cfg.n) {
        (Some(c), None) => Ok(c.clone()),
        (None, Some(n)) if n > 0 => Ok(CapVector::ones(n)),
        (Some(c), Some(n)) if c.len() == n => Ok(c.clone()),
        (Some(c), Some(n)) => Err(CliError::Usage(format!("--n {n} disagrees with --c of length {}", c.len()))),
        _ => Err(CliError::Usage("wperm requires --c or a positive --n".into())),
    }
}

fn thread_pool() -> rayon::ThreadPool {
    let threads = std::env::var("PRISM_THREADS").ok().and_then(|v| v.trim().parse::<usize>().ok()).unwrap_or(0);
    rayon::ThreadPoolBuilder::new().num_threads(threads).build().expect("thread pool starts")
}

/// Executes one job.
pub fn run(cfg: &JobConfig) -> Result<Outcome, CliError> {
    cfg.validate()?;
    let fmt = cfg.output;
    match cfg.command {
        Command::Count => {
            let c = require(&cfg.c, "c", "count")?;
            let t = cfg.t.unwrap_or(1);
            let (count, mut inst) = match (cfg.k, cfg.a, cfg.b) {
                (Some(_), None, None) => {
                    let (s, inst) = slice_of(cfg, "count")?;
                    (brute_count(&s, t), inst)
                }
                (None, Some(a), Some(b)) => {
                    let f = FatSliceSpec::new(a, b, c.clone()).map_err(library)?;
                    let (_, inst) = slice_of(cfg, "count")?;
                    (BigInt::from(fat_brute_count(&f, t)), inst)
                }
                _ => return Err(CliError::Usage("count requires either --k or both --a and --b".into())),
            };
            inst.insert("t".into(), json!(t));
            inst.insert("count".into(), int_value(&count));
            let text = format!("{count}\n");
            Ok(Outcome::ok(tabulate(&Value::Object(inst), text, fmt)))
        }
        Command::Ehrhart => {
            let (s, mut inst) = slice_of(cfg, "ehrhart")?;
            let p = ehrhart_formula(&s);
            inst.insert("ehrhart".into(), rat_poly_value(&p));
            let text = format!("{p}\n");
            Ok(Outcome::ok(tabulate(&Value::Object(inst), text, fmt)))
        }
        Command::Hstar => {
            let (s, mut inst) = slice_of(cfg, "hstar")?;
            let h = hstar_series(&s).map_err(library)?;
            inst.insert("hstar".into(), int_poly_value(&h));
            let text = format!("[{}]\n", join_ints(h.coeffs()));
            Ok(Outcome::ok(tabulate(&Value::Object(inst), text, fmt)))
        }
        Command::Volume => {
            let (s, mut inst) = slice_of(cfg, "volume")?;
            let nv = normalized_volume(&s).map_err(library)?;
            let v = volume(&s).map_err(library)?;
            inst.insert("normalized_volume".into(), int_value(&nv));
            inst.insert("volume".into(), Value::String(format_rational(&v)));
            let text = format!("normalized volume {nv}\nvolume {}\n", format_rational(&v));
            Ok(Outcome::ok(tabulate(&Value::Object(inst), text, fmt)))
        }
        Command::Flag => run_flag(cfg),
        Command::Wperm => run_wperm(cfg),
        Command::Verify => {
            let max_n = cfg.max_n.unwrap_or(4);
            let max_c = cfg.max_c.unwrap_or(3);
            let report = thread_pool().install(|| verify(max_n, max_c));
            let value = serde_json::to_value(&report).expect("report serializes");
            let out = tabulate(&value, report.to_text(), fmt);
            let code = if report.summary.failed == 0 { EXIT_OK } else { EXIT_MODEL_VIOLATION };
            Ok(Outcome { stdout: out, stderr: String::new(), code })
        }
        Command::Scan => run_scan(cfg),
    }
}

fn run_flag(cfg: &JobConfig) -> Result<Outcome, CliError> {
    let c = require(&cfg.c, "c", "flag")?;
    let total = c.total();
    let levels: Vec<u64> = match cfg.k {
        Some(k) if k < total => vec![k],
        Some(k) => return Err(CliError::Usage(format!("--k must be below Σc = {total}, got {k}"))),
        None => (0..total).collect(),
    };
    let dist = flag_eulerian_distribution(&c);
    let enumeration: Vec<BigInt> = levels.iter().map(|&k| BigInt::from(dist.get(k as usize).copied().unwrap_or(0))).collect();
    let convolution: Vec<BigInt> = levels.iter().map(|&k| flag_eulerian_convolution(k, &c)).collect();
    let via_volume = levels
        .iter()
        .map(|&k| flag_eulerian_via_volume(k, &c))
        .collect::<Result<Vec<BigInt>, Error>>()
        .map_err(library)?;
    let pass = enumeration == convolution && convolution == via_volume;
    let value = json!({
        "c": c,
        "k": levels,
        "enumeration": ints_value(&enumeration),
        "convolution": ints_value(&convolution),
        "via_volume": ints_value(&via_volume),
        "pass": pass,
    });
    let text = format!(
        "enumeration [{}]\nconvolution [{}]\nvia volume  [{}]\n",
        join_ints(&enumeration),
        join_ints(&convolution),
        join_ints(&via_volume)
    );
    Ok(violation_unless(pass, tabulate(&value, text, cfg.output), &value))
}

fn run_wperm(cfg: &JobConfig) -> Result<Outcome, CliError> {
    let c = caps_or_ones(cfg)?;
    let m = require(&cfg.m, "m", "wperm")?;
    if m == 0 || m > c.len() {
        return Err(CliError::Usage(format!("--m must be in 1..={}, got {m}", c.len())));
    }
    let mut cache = NumberCache::new();
    let formula: Vec<BigInt> = (0..c.total()).map(|l| w_count_formula(l, m - 1, &c, &mut cache)).collect();
    let enumeration: Vec<BigInt> = (0..c.total()).map(|l| BigInt::from(w_count_enum(l, m, &c))).collect();
    let pass = formula == enumeration;
    let value = json!({
        "n": c.len(),
        "m": m,
        "c": c,
        "formula": ints_value(&formula),
        "enumeration": ints_value(&enumeration),
        "pass": pass,
    });
    let text = format!("formula     [{}]\nenumeration [{}]\n", join_ints(&formula), join_ints(&enumeration));
    Ok(violation_unless(pass, tabulate(&value, text, cfg.output), &value))
}

fn violation_unless(pass: bool, stdout: String, instance: &Value) -> Outcome {
    if pass {
        return Outcome::ok(stdout);
    }
    Outcome { stdout, stderr: format!("identity failed: {instance}\n"), code: EXIT_MODEL_VIOLATION }
}

fn run_scan(cfg: &JobConfig) -> Result<Outcome, CliError> {
    let max_n = require(&cfg.max_n, "max-n", "scan")?;
    let max_c = require(&cfg.max_c, "max-c", "scan")?;
    let checks: Vec<ScanCheck> = match cfg.check {
        Some(c) => vec![c],
        None => vec![ScanCheck::UnitCircle, ScanCheck::RealRooted, ScanCheck::Interlace],
    };
    let pool = thread_pool();
    let (records, summary) = match &cfg.out {
        Some(path) => {
            let existing = match fs::read_to_string(path) {
                Ok(s) => s,
                Err(e) if e.kind() == std::io::ErrorKind::NotFound => String::new(),
                Err(e) => return Err(e.into()),
            };
            let mut file = fs::OpenOptions::new().create(true).append(true).open(path)?;
            let summary = pool.install(|| scan(&checks, max_n, max_c, cfg.tol, &existing, &mut file))?;
            (String::new(), summary)
        }
        None => {
            let mut buf: Vec<u8> = Vec::new();
            let summary = pool.install(|| scan(&checks, max_n, max_c, cfg.tol, "", &mut buf))?;
            (String::from_utf8(buf).expect("records are UTF-8"), summary)
        }
    };
    let summary_text = match cfg.output {
        OutputFormat::Text => summary.to_text(),
        _ => format!("{}\n", serde_json::to_string(&summary).expect("summary serializes")),
    };
    let code = if summary.failures.is_empty() { EXIT_OK } else { EXIT_MODEL_VIOLATION };
    // records own stdout when no file is given, so the summary moves to stderr
    let (stdout, stderr) = if cfg.out.is_some() { (summary_text, String::new()) } else { (records, summary_text) };
    Ok(Outcome { stdout, stderr, code })
}
