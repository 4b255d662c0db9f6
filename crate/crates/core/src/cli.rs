//! The `qrf` command-line front end.
//!
//! Every command writes data only: JSON for states and reports, CSV or JSON
//! for sweeps, JSON lines for sampled batches. Failures print
//! `{"error":{"kind":..,"message":..}}` to stderr and exit with
//!
//! | code | kind |
//! |------|------|
//! | 0 | success |
//! | 2 | `io` |
//! | 3 | `shape` |
//! | 4 | `domain`, `config` |
//! | 5 | `numeric` |

use std::ffi::OsString;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use crate::error::{QrfError, Result};
use crate::measures::MeasurePair;
use crate::perspective::{assign_perspective, PerspectiveLabel};
use crate::qstate::{PureState, NORM_TOL};
use crate::rindler::{self, linear_grid, AccelerationParameter};
use crate::transference::sampling::{random_parity_state, sample_rng};
use crate::transference::{
    check_corollary, check_transference, parity_class, ConstraintReport, ParityClass, SATISFACTION_TOL,
};

#[derive(Debug, Parser)]
#[command(name = "qrf", version, about = "Perspectival quantum reference frame toolkit")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Describe a state from the perspective of one of its qubits.
    Perspective(PerspectiveArgs),
    /// Parity class plus transference and corollary reports for a 3-qubit state.
    Check(CheckArgs),
    /// Degradation sweep of the Rindler family over a grid of r.
    Sweep(SweepArgs),
    /// Transference checks on a reproducible batch of random states.
    Sample(SampleArgs),
}

#[derive(Debug, Args)]
pub struct Common {
    /// Satisfaction tolerance for constraint residuals.
    #[arg(long, env = "QRF_TOL", default_value_t = SATISFACTION_TOL)]
    pub tol: f64,
    /// Output file; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct PerspectiveArgs {
    /// State file path or builtin such as `rindler:0.5`.
    #[arg(long)]
    pub state: String,
    /// Qubit index, or A, R, Rbar for the Rindler labels.
    #[arg(long)]
    pub perspective: String,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct CheckArgs {
    #[arg(long)]
    pub state: String,
    #[arg(long, value_enum, default_value_t = Measures::Both)]
    pub measures: Measures,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    /// `start:stop:count` or a comma-separated list; `pi` is understood.
    #[arg(long, default_value = "0:pi/4:201", allow_hyphen_values = true)]
    pub grid: String,
    #[arg(long, value_enum, default_value_t = Measures::Both)]
    pub measures: Measures,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct SampleArgs {
    #[arg(long)]
    pub count: usize,
    #[arg(long, default_value = "even")]
    pub class: String,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_enum, default_value_t = Measures::Both)]
    pub measures: Measures,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Measures {
    Entropy,
    Linear,
    Both,
}

impl Measures {
    pub fn pairs(self) -> &'static [MeasurePair] {
        match self {
            Measures::Entropy => &[MeasurePair::Entropy],
            Measures::Linear => &[MeasurePair::Linear],
            Measures::Both => &MeasurePair::ALL,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

/// Parses and runs one invocation, returning the process exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = write!(stdout, "{e}");
            return 0;
        }
        Err(e) => return report(&QrfError::Config(e.kind().to_string() + ": " + &first_line(&e)), stderr),
    };
    match execute(&cli.command, stdout) {
        Ok(()) => 0,
        Err(e) => report(&e, stderr),
    }
}

fn first_line(e: &clap::Error) -> String {
    e.to_string().lines().next().unwrap_or_default().trim_start_matches("error: ").to_string()
}

fn report(e: &QrfError, stderr: &mut dyn Write) -> i32 {
    let kind = match e {
        QrfError::Config(_) => "config",
        other => other.kind().as_str(),
    };
    let body = json!({ "error": { "kind": kind, "message": e.to_string() } });
    let _ = writeln!(stderr, "{body}");
    e.kind().exit_code()
}

pub fn execute(command: &Command, stdout: &mut dyn Write) -> Result<()> {
    match command {
        Command::Perspective(a) => cmd_perspective(a, stdout),
        Command::Check(a) => cmd_check(a, stdout),
        Command::Sweep(a) => cmd_sweep(a, stdout),
        Command::Sample(a) => cmd_sample(a, stdout),
    }
}

fn check_tol(tol: f64) -> Result<()> {
    if !(tol.is_finite() && tol > 0.0) {
        return Err(QrfError::Config(format!("tolerance must be positive, got {tol}")));
    }
    Ok(())
}

fn json_only(format: Format, command: &str) -> Result<()> {
    match format {
        Format::Json => Ok(()),
        Format::Csv => Err(QrfError::Config(format!("`{command}` only emits JSON"))),
    }
}

/// Sends `body` to `--out` if given, otherwise to stdout.
fn emit(out: Option<&Path>, stdout: &mut dyn Write, body: impl FnOnce(&mut dyn Write) -> Result<()>) -> Result<()> {
    match out {
        Some(path) => {
            let mut w = BufWriter::new(File::create(path)?);
            body(&mut w)?;
            w.flush()?;
        }
        None => {
            body(stdout)?;
            stdout.flush()?;
        }
    }
    Ok(())
}

fn cmd_perspective(a: &PerspectiveArgs, stdout: &mut dyn Write) -> Result<()> {
    json_only(a.format, "perspective")?;
    check_tol(a.common.tol)?;
    let psi = load_state(&a.state)?;
    let label = parse_perspective(&a.perspective)?;
    let seen = assign_perspective(&psi, label)?;
    let file = seen.to_state_file(Some(label.target()));
    emit(a.common.out.as_deref(), stdout, |w| {
        serde_json::to_writer(&mut *w, &file)?;
        writeln!(w)?;
        Ok(())
    })
}

#[derive(Serialize)]
struct MeasureReports {
    measures: MeasurePair,
    transference: [ConstraintReport; 3],
    corollary: [ConstraintReport; 3],
}

#[derive(Serialize)]
struct CheckReport {
    parity: ParityClass,
    tol: f64,
    results: Vec<MeasureReports>,
}

fn cmd_check(a: &CheckArgs, stdout: &mut dyn Write) -> Result<()> {
    json_only(a.format, "check")?;
    check_tol(a.common.tol)?;
    let psi = load_state(&a.state)?;
    let parity = parity_class(&psi)?;
    let results = a
        .measures
        .pairs()
        .iter()
        .map(|&m| {
            Ok(MeasureReports {
                measures: m,
                transference: check_transference(&psi, m, a.common.tol)?,
                corollary: check_corollary(&psi, m, a.common.tol)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let report = CheckReport { parity, tol: a.common.tol, results };
    emit(a.common.out.as_deref(), stdout, |w| {
        serde_json::to_writer_pretty(&mut *w, &report)?;
        writeln!(w)?;
        Ok(())
    })
}

fn cmd_sweep(a: &SweepArgs, stdout: &mut dyn Write) -> Result<()> {
    check_tol(a.common.tol)?;
    let grid = parse_grid(&a.grid)?;
    let mut records = Vec::new();
    for &m in a.measures.pairs() {
        records.extend(rindler::sweep(&grid, m)?);
    }
    emit(a.common.out.as_deref(), stdout, |w| match a.format {
        Format::Csv => rindler::write_sweep_csv(&records, w),
        Format::Json => {
            serde_json::to_writer_pretty(&mut *w, &records)?;
            writeln!(w)?;
            Ok(())
        }
    })
}

fn cmd_sample(a: &SampleArgs, stdout: &mut dyn Write) -> Result<()> {
    json_only(a.format, "sample")?;
    check_tol(a.common.tol)?;
    if a.count == 0 {
        return Err(QrfError::Config("--count must be at least 1".into()));
    }
    let class: ParityClass = a.class.parse()?;
    let pairs = a.measures.pairs();
    let lines = (0..a.count as u64)
        .into_par_iter()
        .map(|i| {
            let psi = random_parity_state(class, &mut sample_rng(a.seed, i))?;
            let mut results = serde_json::Map::new();
            let mut passed = Vec::with_capacity(pairs.len());
            for &m in pairs {
                let reports = check_transference(&psi, m, a.common.tol)?;
                passed.push(reports.iter().all(|r| r.satisfied));
                results.insert(m.as_str().into(), serde_json::to_value(reports)?);
            }
            let line = json!({ "sample": i, "parity": parity_class(&psi)?, "transference": results });
            Ok((line, passed))
        })
        .collect::<Result<Vec<_>>>()?;

    let mut pass_counts = serde_json::Map::new();
    for (k, &m) in pairs.iter().enumerate() {
        let n = lines.iter().filter(|(_, passed)| passed[k]).count();
        pass_counts.insert(m.as_str().into(), n.into());
    }
    let summary = json!({ "summary": {
        "count": a.count,
        "class": class,
        "seed": a.seed,
        "tol": a.common.tol,
        "passed": pass_counts,
    }});
    emit(a.common.out.as_deref(), stdout, |w| {
        for (line, _) in &lines {
            writeln!(w, "{line}")?;
        }
        writeln!(w, "{summary}")?;
        Ok(())
    })
}

/// Accepts `0`, `1`, ... or the Rindler labels `A`, `R`, `Rbar`.
pub fn parse_perspective(s: &str) -> Result<PerspectiveLabel> {
    let index = match s {
        "A" => 0,
        "R" => 1,
        "Rbar" => 2,
        _ => s.parse().map_err(|_| QrfError::Config(format!("unknown perspective `{s}`")))?,
    };
    Ok(PerspectiveLabel::new(index))
}

/// A real number, optionally written with `pi`: `0.3`, `pi/4`, `3pi/8`, `0.5*pi`.
pub fn parse_real(token: &str) -> Result<f64> {
    let bad = || QrfError::Config(format!("cannot parse number `{token}`"));
    let t = token.trim();
    let (num, den) = match t.split_once('/') {
        Some((n, d)) => (n, d.trim().parse::<f64>().map_err(|_| bad())?),
        None => (t, 1.0),
    };
    let num = num.trim();
    let value = match num.strip_suffix("pi") {
        Some(coef) => {
            let coef = coef.trim().trim_end_matches('*').trim();
            let c = match coef {
                "" => 1.0,
                "-" => -1.0,
                c => c.parse::<f64>().map_err(|_| bad())?,
            };
            c * std::f64::consts::PI
        }
        None => num.parse::<f64>().map_err(|_| bad())?,
    };
    let value = value / den;
    if !value.is_finite() {
        return Err(bad());
    }
    Ok(value)
}

/// `start:stop:count` or an explicit comma-separated list.
pub fn parse_grid(s: &str) -> Result<Vec<f64>> {
    let s = s.trim();
    if s.is_empty() {
        return Err(QrfError::GridOutOfDomain("grid is empty".into()));
    }
    let parts: Vec<&str> = s.split(':').collect();
    match parts.as_slice() {
        [start, stop, count] => {
            let count = count
                .trim()
                .parse::<usize>()
                .map_err(|_| QrfError::Config(format!("grid count `{count}` is not a nonnegative integer")))?;
            linear_grid(parse_real(start)?, parse_real(stop)?, count)
        }
        [_] => s.split(',').map(parse_real).collect(),
        _ => Err(QrfError::Config(format!("grid `{s}` is neither start:stop:count nor a list"))),
    }
}

fn parse_list(args: &str, expected: usize, name: &str) -> Result<Vec<f64>> {
    let values: Vec<f64> = args.split(',').map(parse_real).collect::<Result<_>>()?;
    if values.len() != expected {
        return Err(QrfError::Config(format!("`{name}` takes {expected} parameter(s), got {}", values.len())));
    }
    Ok(values)
}

fn weighted(support: [usize; 3], weights: Option<&str>, name: &str) -> Result<PureState> {
    let w = match weights {
        Some(args) => parse_list(args, 3, name)?,
        None => vec![1.0; 3],
    };
    let norm_sq: f64 = w.iter().map(|x| x * x).sum();
    if norm_sq == 0.0 {
        return Err(QrfError::Config(format!("`{name}` weights are all zero")));
    }
    let mut amps = vec![0.0; 8];
    for (&idx, &x) in support.iter().zip(&w) {
        amps[idx] = x / norm_sq.sqrt();
    }
    PureState::from_real(&amps, NORM_TOL)
}

/// Named example states, so every example runs without a state file.
///
/// * `rindler:<r>`: the accelerated-observer state at `r ∈ [0, π/4]`
/// * `ghz:<g>`: `g|000⟩ + √(1−g²)|111⟩`
/// * `w-odd[:w1,w2,w3]`: weights on `|100⟩, |010⟩, |001⟩`, normalized
/// * `w-even[:w1,w2,w3]`: weights on `|011⟩, |101⟩, |110⟩`, normalized
/// * `sep-counterexample`: `|0⟩|+⟩|+⟩`
/// * `mixed-parity:<q>`: `√(½−q²)|000⟩ + q|001⟩ − q|010⟩ + √(½−q²)|011⟩`, `|q| < 1/√2`
/// * `worked-example`: `½(|000⟩ + |001⟩ + |010⟩ + |111⟩)`
///
/// Returns `None` when `source` does not name a builtin.
pub fn builtin_state(source: &str) -> Result<Option<PureState>> {
    let (name, args) = match source.split_once(':') {
        Some((n, a)) => (n, Some(a)),
        None => (source, None),
    };
    let need = || args.ok_or_else(|| QrfError::Config(format!("`{name}` needs a parameter")));
    let state = match name {
        "rindler" => {
            let r = parse_list(need()?, 1, name)?[0];
            rindler::global_state(AccelerationParameter::new(r)?)
        }
        "ghz" => {
            let g = parse_list(need()?, 1, name)?[0];
            if g.abs() > 1.0 {
                return Err(QrfError::Config(format!("ghz weight {g} outside [-1, 1]")));
            }
            let mut amps = vec![0.0; 8];
            amps[0] = g;
            amps[7] = (1.0 - g * g).sqrt();
            PureState::from_real(&amps, NORM_TOL)?
        }
        "w-odd" => weighted([4, 2, 1], args, name)?,
        "w-even" => weighted([3, 5, 6], args, name)?,
        "mixed-parity" => {
            let q = parse_list(need()?, 1, name)?[0];
            if !(q * q < 0.5) {
                return Err(QrfError::Config(format!("mixed-parity needs |q| < 1/√2, got {q}")));
            }
            let s = (0.5 - q * q).sqrt();
            PureState::from_real(&[s, q, -q, s, 0.0, 0.0, 0.0, 0.0], NORM_TOL)?
        }
        "sep-counterexample" | "worked-example" if args.is_some() => {
            return Err(QrfError::Config(format!("`{name}` takes no parameters")))
        }
        "sep-counterexample" => PureState::from_real(&[0.5, 0.5, 0.5, 0.5, 0.0, 0.0, 0.0, 0.0], NORM_TOL)?,
        "worked-example" => PureState::from_real(&[0.5, 0.5, 0.5, 0.0, 0.0, 0.0, 0.0, 0.5], NORM_TOL)?,
        _ => return Ok(None),
    };
    Ok(Some(state))
}

/// A builtin name or a path to a JSON state file.
pub fn load_state(source: &str) -> Result<PureState> {
    if let Some(state) = builtin_state(source)? {
        return Ok(state);
    }
    let text = std::fs::read_to_string(source)?;
    PureState::from_json(&text, NORM_TOL)
}
