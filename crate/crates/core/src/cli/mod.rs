//! Command-line front end: `sample`, `orbit` and `experiment`.
//!
//! Exit codes are 0 on success, 1 when an experiment misses a threshold and 2
//! for usage, configuration, input and I/O errors.

mod config;

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;
use serde_json::{json, Map, Value};

pub use config::{parse_config, ConfigError, CONFIG_KEYS};

use crate::error::Error;
use crate::fiber::{RepPoint, FIBER_TOL};
use crate::flows::{random_flow_walk, DEFAULT_MAX_TIME};
use crate::lab::{fiber_start, parse_real_list, run_experiment, FiberSpec, DEFAULT_WARMUP};
use crate::mcg::{apply_word, random_word};
use crate::rng::stream;
use crate::su3::haar_random;
use crate::trace::{character, character_columns};

pub const VERSION: &str = concat!("su3lab ", env!("CARGO_PKG_VERSION"));

#[derive(Debug, Parser)]
#[command(name = "su3lab", version, about = "Dehn twist and twist flow experiments on SU(3) character varieties of the punctured torus")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args, Clone)]
pub struct Common {
    /// Seed of the random stream.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Output file; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Character coordinates of Haar-random pairs, or of flow-walk samples on a fiber.
    Sample {
        #[command(flatten)]
        common: Common,
        /// Number of rows.
        #[arg(long)]
        count: usize,
        /// Trace `re,im` of the fiber label; Haar pairs when absent.
        #[arg(long, allow_hyphen_values = true)]
        trace: Option<String>,
        /// Flow steps between fiber samples.
        #[arg(long, default_value_t = 20)]
        spacing: usize,
        /// Flow steps before the first fiber sample.
        #[arg(long, default_value_t = DEFAULT_WARMUP)]
        warmup: usize,
    },
    /// Trajectory under random twist words: row k+1 is a random word applied to row k.
    Orbit {
        #[command(flatten)]
        common: Common,
        /// Fiber label: `trace=re,im`, `angles=t1,t2`, `haar` or `central=k`.
        #[arg(long = "c-spec", default_value = "haar", allow_hyphen_values = true)]
        c_spec: String,
        /// Letters per word.
        #[arg(long = "word-length", default_value_t = 200)]
        word_length: usize,
        /// Number of rows.
        #[arg(short = 'N', long = "count")]
        n: usize,
        /// Flow steps from the base point to the start.
        #[arg(long, default_value_t = DEFAULT_WARMUP)]
        warmup: usize,
    },
    /// Runs an experiment described by a key-value config file.
    Experiment {
        #[command(flatten)]
        common: Common,
        /// Config file path.
        config: PathBuf,
    },
}

/// Failure of a CLI run, with its exit code.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Config(ConfigError),
    Io { path: String, message: String },
    Run(Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        2
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage error: {m}"),
            CliError::Config(e) => write!(f, "config error: {e}"),
            CliError::Io { path, message } => write!(f, "cannot write {path}: {message}"),
            CliError::Run(e) => write!(f, "{e}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Run(e)
    }
}

impl From<ConfigError> for CliError {
    fn from(e: ConfigError) -> Self {
        CliError::Config(e)
    }
}

/// What a successful run produced.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    /// Whether every threshold passed (always true for CSV commands).
    pub passed: bool,
    pub outputs: Vec<PathBuf>,
}

impl Outcome {
    pub fn exit_code(&self) -> i32 {
        if self.passed {
            0
        } else {
            1
        }
    }
}

fn now_unix() -> f64 {
    SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs_f64())
        .unwrap_or(0.0)
}

fn io_err(path: &Path, e: impl std::fmt::Display) -> CliError {
    CliError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    }
}

fn required_seed(common: &Common) -> Result<u64, CliError> {
    common
        .seed
        .ok_or_else(|| CliError::Usage("--seed <u64> is required".into()))
}

/// Floats are written with 17 significant digits so they round-trip.
pub fn format_real(v: f64) -> String {
    format!("{v:.16e}")
}

/// Header of the `sample` and `orbit` CSV files.
pub fn csv_header() -> Vec<String> {
    let mut h = vec!["index".to_string()];
    h.extend(character_columns());
    h.push("residual".to_string());
    h
}

fn csv_row(index: usize, p: &RepPoint) -> Vec<String> {
    let mut row = vec![index.to_string()];
    row.extend(character(p).to_reals().iter().map(|v| format_real(*v)));
    row.push(format_real(p.residual()));
    row
}

fn write_csv(out: Option<&Path>, rows: &[Vec<String>]) -> Result<(), CliError> {
    let sink: Box<dyn Write> = match out {
        Some(path) => Box::new(File::create(path).map_err(|e| io_err(path, e))?),
        None => Box::new(io::stdout().lock()),
    };
    let name = out.map(|p| p.display().to_string()).unwrap_or_else(|| "stdout".into());
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(sink);
    let fail = |e: csv::Error| CliError::Io {
        path: name.clone(),
        message: e.to_string(),
    };
    w.write_record(csv_header()).map_err(fail)?;
    for r in rows {
        w.write_record(r).map_err(fail)?;
    }
    w.flush().map_err(|e| CliError::Io {
        path: name.clone(),
        message: e.to_string(),
    })
}

/// Path of the manifest written next to a CSV output.
pub fn manifest_path(out: &Path) -> PathBuf {
    let mut s = out.as_os_str().to_owned();
    s.push(".manifest.json");
    PathBuf::from(s)
}

fn manifest(command: &str, config: Map<String, Value>, seed: u64, started: f64, outputs: &[PathBuf]) -> Value {
    json!({
        "command": command,
        "config": config,
        "seed": seed,
        "version": VERSION,
        "started_unix": started,
        "finished_unix": now_unix(),
        "outputs": outputs.iter().map(|p| p.display().to_string()).collect::<Vec<_>>(),
    })
}

fn write_json(path: &Path, value: &Value) -> Result<(), CliError> {
    let mut text = serde_json::to_string_pretty(value).map_err(|e| io_err(path, e))?;
    text.push('\n');
    std::fs::write(path, text).map_err(|e| io_err(path, e))
}

fn finish_csv(
    command: &str,
    common: &Common,
    seed: u64,
    config: Map<String, Value>,
    started: f64,
    rows: &[Vec<String>],
) -> Result<Outcome, CliError> {
    write_csv(common.out.as_deref(), rows)?;
    let mut outputs = Vec::new();
    if let Some(out) = &common.out {
        let mpath = manifest_path(out);
        outputs.push(out.clone());
        let m = manifest(command, config, seed, started, &outputs);
        write_json(&mpath, &m)?;
        outputs.push(mpath);
    }
    Ok(Outcome {
        passed: true,
        outputs,
    })
}

fn cmd_sample(
    common: &Common,
    count: usize,
    trace: Option<&str>,
    spacing: usize,
    warmup: usize,
) -> Result<Outcome, CliError> {
    let started = now_unix();
    let seed = required_seed(common)?;
    let mut rng = stream(seed);
    let mut rows = Vec::with_capacity(count);
    let mut config = Map::new();
    config.insert("count".into(), json!(count));
    match trace {
        None => {
            config.insert("sampler".into(), json!("haar"));
            for i in 0..count {
                let a = haar_random(&mut rng);
                let b = haar_random(&mut rng);
                rows.push(csv_row(i, &RepPoint::new(a, b)));
            }
        }
        Some(t) => {
            let [re, im] = parse_real_list::<2>(t, "--trace").map_err(CliError::Run)?;
            let c = FiberSpec::Trace(Complex64::new(re, im)).resolve(&mut rng)?;
            config.insert("sampler".into(), json!("flow_walk"));
            config.insert("trace".into(), json!([re, im]));
            config.insert("spacing".into(), json!(spacing));
            config.insert("warmup".into(), json!(warmup));
            if count > 0 {
                let mut q = fiber_start(&c, warmup, &mut rng)?;
                for i in 0..count {
                    if i > 0 {
                        q = random_flow_walk(&q, spacing, DEFAULT_MAX_TIME, &mut rng)?
                            .renormalized()?;
                    }
                    rows.push(csv_row(i, &q));
                }
            }
        }
    }
    finish_csv("sample", common, seed, config, started, &rows)
}

fn cmd_orbit(
    common: &Common,
    c_spec: &str,
    word_length: usize,
    n: usize,
    warmup: usize,
) -> Result<Outcome, CliError> {
    let started = now_unix();
    let seed = required_seed(common)?;
    let spec: FiberSpec = c_spec.parse().map_err(CliError::Run)?;
    if n == 0 {
        return Err(CliError::Usage("-N must be at least 1".into()));
    }
    let mut rng = stream(seed);
    let c = spec.resolve(&mut rng)?;
    if c.is_central(FIBER_TOL) {
        return Err(CliError::Run(Error::CentralFiber));
    }
    let mut q = fiber_start(&c, warmup, &mut rng)?;
    let mut rows = Vec::with_capacity(n);
    for k in 0..n {
        if k > 0 {
            q = apply_word(&random_word(word_length, &mut rng), &q)?.renormalized()?;
        }
        rows.push(csv_row(k, &q));
    }
    let mut config = Map::new();
    config.insert("c_spec".into(), json!(spec.to_string()));
    config.insert("word_length".into(), json!(word_length));
    config.insert("N".into(), json!(n));
    config.insert("warmup".into(), json!(warmup));
    finish_csv("orbit", common, seed, config, started, &rows)
}

fn cmd_experiment(common: &Common, path: &Path) -> Result<Outcome, CliError> {
    let started = now_unix();
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
    let mut cfg = parse_config(&text, common.seed)?;
    if let Some(out) = &common.out {
        cfg.out = Some(out.clone());
    }
    let report = run_experiment(&cfg)?;
    let mut value = report.to_json();
    let outputs: Vec<PathBuf> = cfg.out.iter().cloned().collect();
    let config: Map<String, Value> = cfg
        .entries()
        .into_iter()
        .map(|(k, v)| (k.to_string(), Value::from(v)))
        .collect();
    let m = manifest("experiment", config, cfg.seed, started, &outputs);
    if let Value::Object(obj) = &mut value {
        obj.insert("manifest".into(), m);
    }
    match &cfg.out {
        Some(out) => write_json(out, &value)?,
        None => {
            let text = serde_json::to_string_pretty(&value).map_err(|e| CliError::Usage(e.to_string()))?;
            println!("{text}");
        }
    }
    Ok(Outcome {
        passed: report.passed(),
        outputs,
    })
}

/// Runs a parsed command line.
pub fn execute(cli: &Cli) -> Result<Outcome, CliError> {
    match &cli.command {
        Command::Sample {
            common,
            count,
            trace,
            spacing,
            warmup,
        } => cmd_sample(common, *count, trace.as_deref(), *spacing, *warmup),
        Command::Orbit {
            common,
            c_spec,
            word_length,
            n,
            warmup,
        } => cmd_orbit(common, c_spec, *word_length, *n, *warmup),
        Command::Experiment { common, config } => cmd_experiment(common, config),
    }
}

/// Parses `args` (program name first), runs the command, reports errors on
/// standard error and returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match execute(&cli) {
        Ok(outcome) => outcome.exit_code(),
        Err(e) => {
            eprintln!("su3lab: {e}");
            e.exit_code()
        }
    }
}
