//! Command-line front end: `estimate`, `verify` and `bound`.
//!
//! Exit codes: 0 success, 2 usage or file errors, 3 a state file that fails
//! density-matrix validation. Diagnostics are one line on the error stream.
//!
//! # File formats
//!
//! State file (JSON), either a density matrix given as 16 row-major
//! `[re, im]` entries or a pure state given as 4 amplitudes:
//!
//! ```json
//! {"format": "density", "entries": [[0.5, 0.0], [0.0, 0.0], ...]}
//! {"format": "pure", "amplitudes": [[0.7071067811865476, 0.0], ...]}
//! ```
//!
//! Settings file (JSON), two unit vectors per party in pair mode or three in
//! triad mode:
//!
//! ```json
//! {"mode": "pair", "a": [[0, 0, 1], [1, 0, 0]], "b": [[0, 0, 1], [1, 0, 0]]}
//! {"mode": "triad", "a": [[1, 0, 0], [0, 1, 0], [0, 0, 1]], "b": [...]}
//! ```
//!
//! Numbers are written in the shortest form that parses back to the same
//! `f64`, so files written by the tool round-trip exactly.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::bell::{
    bell_family36, bell_family4, classify, expectation, horodecki_max, max_over_orthogonal_settings,
    negativity_bound, BellOperator, OptimizerBudget, SettingsPair, Triad, Verdict, CIRELSON_BOUND,
};
use crate::linalg::{c, CMat4, Complex};
use crate::montecarlo::{run, Ensemble, ExperimentConfig, Statistic, TallyResult};
use crate::qstate::{fully_entangled_fraction, negativity, DensityMatrix, PureState};
use crate::sampling::DEFAULT_SEPARABLE_TERMS;
use crate::Error;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_INVALID_STATE: i32 = 3;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "format", rename_all = "lowercase")]
pub enum StateFile {
    Density { entries: [[f64; 2]; 16] },
    Pure { amplitudes: [[f64; 2]; 4] },
}

fn pair_of(z: Complex) -> [f64; 2] {
    [z.re, z.im]
}

impl StateFile {
    pub fn from_density(rho: &DensityMatrix) -> Self {
        let m = rho.mat();
        StateFile::Density { entries: std::array::from_fn(|k| pair_of(m[(k / 4, k % 4)])) }
    }

    pub fn from_pure(psi: &PureState) -> Self {
        StateFile::Pure { amplitudes: psi.amplitudes().map(pair_of) }
    }

    /// Validated density matrix (a pure state becomes its projector).
    pub fn to_density(&self) -> crate::Result<DensityMatrix> {
        match self {
            StateFile::Density { entries } => {
                DensityMatrix::new(CMat4::from_fn(|i, j| {
                    let [r, im] = entries[4 * i + j];
                    c(r, im)
                }))
            }
            StateFile::Pure { amplitudes } => {
                let psi = PureState::new(amplitudes.map(|[r, im]| c(r, im)))?;
                Ok(DensityMatrix::from_pure(&psi))
            }
        }
    }

    /// The stored matrix without validation.
    pub fn raw_matrix(&self) -> CMat4 {
        match self {
            StateFile::Density { entries } => CMat4::from_fn(|i, j| {
                let [r, im] = entries[4 * i + j];
                c(r, im)
            }),
            StateFile::Pure { amplitudes } => {
                let a = amplitudes.map(|[r, im]| c(r, im));
                CMat4::from_fn(|i, j| a[i] * a[j].conj())
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "lowercase")]
pub enum SettingsFile {
    Pair { a: crate::bell::OrthogonalPair, b: crate::bell::OrthogonalPair },
    Triad { a: Triad, b: Triad },
}

impl SettingsFile {
    /// The operators this file selects: 4 in pair mode, 36 in triad mode.
    pub fn operators(&self) -> Vec<BellOperator> {
        match self {
            SettingsFile::Pair { a, b } => bell_family4(&SettingsPair::new(*a, *b)).to_vec(),
            SettingsFile::Triad { a, b } => bell_family36(a, b),
        }
    }
}

impl Default for SettingsFile {
    fn default() -> Self {
        let s = SettingsPair::axes();
        SettingsFile::Pair { a: s.a, b: s.b }
    }
}

#[derive(Debug, Parser)]
#[command(name = "bellcheck", version, about = "Two-qubit entanglement verification with orthogonal Bell-CHSH operators")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Estimate entanglement and violation fractions over a random ensemble.
    Estimate(EstimateArgs),
    /// Evaluate the Bell operators of a settings file on one state.
    Verify(VerifyArgs),
    /// Report negativity, fully entangled fraction, optimized Bell value and bound slacks.
    Bound(BoundArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Debug, Args)]
struct Common {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Output path (standard output when absent).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum EnsembleArg {
    Mixed,
    PureHaar,
    Separable,
}

#[derive(Debug, Args)]
struct EstimateArgs {
    #[arg(long, value_enum)]
    ensemble: EnsembleArg,
    /// Statistics to report (repeat or comma-separate; default all).
    #[arg(long = "statistic", value_delimiter = ',', value_parser = parse_statistic)]
    statistics: Vec<Statistic>,
    #[arg(long)]
    samples: u64,
    #[arg(long, default_value_t = 1)]
    shards: u64,
    /// Product terms per separable mixture.
    #[arg(long, default_value_t = DEFAULT_SEPARABLE_TERMS)]
    terms: usize,
    /// Pair-mode file sets the 4-operator settings; triad-mode file the 36-operator triads.
    #[arg(long)]
    settings: Option<PathBuf>,
    #[command(flatten)]
    common: Common,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    #[arg(long)]
    state: PathBuf,
    /// Defaults to z, x for both parties.
    #[arg(long)]
    settings: Option<PathBuf>,
    #[command(flatten)]
    common: Common,
}

#[derive(Debug, Args)]
struct BoundArgs {
    #[arg(long)]
    state: PathBuf,
    #[arg(long, default_value_t = OptimizerBudget::default().restarts)]
    restarts: usize,
    /// Coordinate sweeps per restart.
    #[arg(long, default_value_t = OptimizerBudget::default().iterations)]
    iterations: usize,
    #[command(flatten)]
    common: Common,
}

fn parse_statistic(s: &str) -> Result<Statistic, String> {
    s.parse::<Statistic>().map_err(|e| e.to_string())
}

/// Failure of a command, mapped to an exit code.
#[derive(Debug)]
struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Self { code: EXIT_USAGE, message: message.into() }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = if e.is_invalid_state() { EXIT_INVALID_STATE } else { EXIT_USAGE };
        Self { code, message: e.to_string() }
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run_cli<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(stdout, "{e}");
                return EXIT_OK;
            }
            let rendered = e.to_string();
            let line = rendered.lines().next().unwrap_or("invalid arguments");
            let _ = writeln!(stderr, "{line}");
            return EXIT_USAGE;
        }
    };
    let (common, result) = match &cli.command {
        Command::Estimate(a) => (&a.common, estimate(a)),
        Command::Verify(a) => (&a.common, verify(a)),
        Command::Bound(a) => (&a.common, bound(a)),
    };
    let text = match result {
        Ok(text) => text,
        Err(f) => {
            let _ = writeln!(stderr, "error: {}", f.message);
            return f.code;
        }
    };
    let written = match &common.out {
        Some(path) => fs::write(path, text.as_bytes()).map_err(|e| format!("{}: {e}", path.display())),
        None => stdout.write_all(text.as_bytes()).map_err(|e| e.to_string()),
    };
    match written {
        Ok(()) => EXIT_OK,
        Err(msg) => {
            let _ = writeln!(stderr, "error: {msg}");
            EXIT_USAGE
        }
    }
}

fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable output");
    s.push('\n');
    s
}

fn estimate(args: &EstimateArgs) -> Result<String, Failure> {
    let ensemble = match args.ensemble {
        EnsembleArg::Mixed => Ensemble::Mixed,
        EnsembleArg::PureHaar => Ensemble::PureHaar,
        EnsembleArg::Separable => Ensemble::Separable(args.terms),
    };
    let mut config = ExperimentConfig::new(ensemble, args.samples, args.common.seed).with_shards(args.shards);
    if !args.statistics.is_empty() {
        config = config.with_statistics(&args.statistics);
    }
    if let Some(path) = &args.settings {
        match read_json::<SettingsFile>(path)? {
            SettingsFile::Pair { a, b } => config.pair = SettingsPair::new(a, b),
            SettingsFile::Triad { a, b } => config.triads = (a, b),
        }
    }
    let tallies = run(&config)?;
    Ok(match args.common.format {
        Format::Json => to_json(&tallies),
        Format::Csv => tallies_csv(&tallies),
    })
}

fn opt_csv<T: ToString>(v: Option<T>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

fn tallies_csv(tallies: &[TallyResult]) -> String {
    let mut s = String::from("hits,trials,fraction,stderr,ci95_lo,ci95_hi,statistic,seed,minimum\n");
    for t in tallies {
        s.push_str(&format!(
            "{},{},{},{},{},{},{},{},{}\n",
            t.hits,
            t.trials,
            t.fraction,
            t.stderr,
            t.ci95.0,
            t.ci95.1,
            t.statistic,
            t.seed,
            opt_csv(t.minimum)
        ));
    }
    s
}

fn load_state(path: &Path) -> Result<DensityMatrix, Failure> {
    let file: StateFile = read_json(path)?;
    Ok(file.to_density()?)
}

/// One evaluated operator in a `verify` report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OperatorReport {
    /// 1-based position in the family.
    pub index: usize,
    /// Pair index within each party's triad (0 in pair mode).
    pub a_pair: usize,
    pub b_pair: usize,
    pub variant: u8,
    #[serde(flatten)]
    pub verdict: Verdict,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub negativity: f64,
    pub max_abs_value: f64,
    /// Largest negativity lower bound over all operators.
    pub negativity_lower_bound: f64,
    pub any_chsh_violation: bool,
    pub any_rus_violation: bool,
    pub operators: Vec<OperatorReport>,
}

pub fn verify_report(rho: &DensityMatrix, settings: &SettingsFile) -> VerifyReport {
    let n = negativity(rho).value();
    let per_b = match settings {
        SettingsFile::Pair { .. } => 1,
        SettingsFile::Triad { .. } => 3,
    };
    let operators: Vec<OperatorReport> = settings
        .operators()
        .iter()
        .enumerate()
        .map(|(k, op)| OperatorReport {
            index: k + 1,
            a_pair: k / 4 / per_b,
            b_pair: k / 4 % per_b,
            variant: op.variant.index(),
            verdict: classify(expectation(op, rho), Some(n)),
        })
        .collect();
    let max_abs_value = operators.iter().map(|o| o.verdict.value.abs()).fold(0.0, f64::max);
    VerifyReport {
        negativity: n,
        max_abs_value,
        negativity_lower_bound: classify(max_abs_value, None).negativity_lower_bound,
        any_chsh_violation: operators.iter().any(|o| o.verdict.violates_chsh),
        any_rus_violation: operators.iter().any(|o| o.verdict.violates_rus),
        operators,
    }
}

fn verify(args: &VerifyArgs) -> Result<String, Failure> {
    let rho = load_state(&args.state)?;
    let settings = match &args.settings {
        Some(path) => read_json::<SettingsFile>(path)?,
        None => SettingsFile::default(),
    };
    let report = verify_report(&rho, &settings);
    Ok(match args.common.format {
        Format::Json => to_json(&report),
        Format::Csv => {
            let mut s = String::from(
                "index,a_pair,b_pair,variant,value,violates_chsh,violates_rus,within_cirelson,negativity_lower_bound,within_negativity_bound,negativity\n",
            );
            for o in &report.operators {
                let v = &o.verdict;
                s.push_str(&format!(
                    "{},{},{},{},{},{},{},{},{},{},{}\n",
                    o.index,
                    o.a_pair,
                    o.b_pair,
                    o.variant,
                    v.value,
                    v.violates_chsh,
                    v.violates_rus,
                    v.within_cirelson,
                    v.negativity_lower_bound,
                    opt_csv(v.within_negativity_bound),
                    report.negativity
                ));
            }
            s
        }
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub negativity: f64,
    pub fully_entangled_fraction: f64,
    pub optimizer_max: f64,
    pub horodecki_max: f64,
    /// `2√2·F − max`
    pub fidelity_bound_slack: f64,
    /// `(1 + N)/2 − F`
    pub fidelity_negativity_slack: f64,
    /// `√2(1 + N) − max`
    pub negativity_bound_slack: f64,
    /// `horodecki − max`
    pub horodecki_slack: f64,
    pub argmax: SettingsPair,
}

pub fn bound_report(rho: &DensityMatrix, budget: OptimizerBudget, seed: u64) -> BoundReport {
    let n = negativity(rho).value();
    let f = fully_entangled_fraction(rho).value();
    let opt = max_over_orthogonal_settings(rho, budget, seed);
    let h = horodecki_max(rho);
    BoundReport {
        negativity: n,
        fully_entangled_fraction: f,
        optimizer_max: opt.value,
        horodecki_max: h,
        fidelity_bound_slack: CIRELSON_BOUND * f - opt.value,
        fidelity_negativity_slack: (1.0 + n) / 2.0 - f,
        negativity_bound_slack: negativity_bound(n) - opt.value,
        horodecki_slack: h - opt.value,
        argmax: opt.settings,
    }
}

fn bound(args: &BoundArgs) -> Result<String, Failure> {
    let rho = load_state(&args.state)?;
    if args.restarts < 1 {
        return Err(Failure::usage("restarts must be ≥ 1"));
    }
    let budget = OptimizerBudget { restarts: args.restarts, iterations: args.iterations };
    let r = bound_report(&rho, budget, args.common.seed);
    Ok(match args.common.format {
        Format::Json => to_json(&r),
        Format::Csv => format!(
            "negativity,fully_entangled_fraction,optimizer_max,horodecki_max,fidelity_bound_slack,fidelity_negativity_slack,negativity_bound_slack,horodecki_slack\n{},{},{},{},{},{},{},{}\n",
            r.negativity,
            r.fully_entangled_fraction,
            r.optimizer_max,
            r.horodecki_max,
            r.fidelity_bound_slack,
            r.fidelity_negativity_slack,
            r.negativity_bound_slack,
            r.horodecki_slack
        ),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run_cli(std::iter::once("bellcheck").chain(args.iter().copied()), &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn zero_samples_is_usage_error() {
        let (code, out, err) = run_args(&["estimate", "--ensemble", "mixed", "--samples", "0"]);
        assert_eq!(code, EXIT_USAGE);
        assert!(out.is_empty());
        assert_eq!(err.trim_end(), "error: samples must be ≥ 1");
        assert_eq!(err.lines().count(), 1);
    }

    #[test]
    fn unknown_flag_is_usage_error() {
        let (code, _, err) = run_args(&["estimate", "--bogus"]);
        assert_eq!(code, EXIT_USAGE);
        assert_eq!(err.lines().count(), 1);
        let (code, _, _) = run_args(&["estimate", "--ensemble", "mixed", "--samples", "5", "--statistic", "nope"]);
        assert_eq!(code, EXIT_USAGE);
    }

    #[test]
    fn help_exits_zero() {
        let (code, out, _) = run_args(&["--help"]);
        assert_eq!(code, EXIT_OK);
        assert!(out.contains("estimate"));
    }

    #[test]
    fn settings_file_rejects_non_orthogonal() {
        let bad = r#"{"mode": "pair", "a": [[0,0,1],[0.6,0,0.8]], "b": [[0,0,1],[1,0,0]]}"#;
        assert!(serde_json::from_str::<SettingsFile>(bad).is_err());
        let bad = r#"{"mode": "pair", "a": [[0,0,2],[1,0,0]], "b": [[0,0,1],[1,0,0]]}"#;
        assert!(serde_json::from_str::<SettingsFile>(bad).is_err());
        let good = r#"{"mode": "triad", "a": [[1,0,0],[0,1,0],[0,0,1]], "b": [[1,0,0],[0,1,0],[0,0,1]]}"#;
        let s: SettingsFile = serde_json::from_str(good).unwrap();
        assert_eq!(s.operators().len(), 36);
    }

    #[test]
    fn state_file_validation() {
        let mut entries = [[0.0; 2]; 16];
        entries[0] = [1.0, 0.0];
        entries[5] = [1.0, 0.0];
        let e = StateFile::Density { entries }.to_density().unwrap_err();
        assert!(e.is_invalid_state());
        let p = StateFile::Pure { amplitudes: [[1.0, 0.0], [1.0, 0.0], [0.0, 0.0], [0.0, 0.0]] };
        assert!(p.to_density().unwrap_err().is_invalid_state());
    }
}
