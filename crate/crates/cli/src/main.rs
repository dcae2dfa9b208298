//! `genwitness` command-line front end.
//!
//! Exit codes: 0 satisfied / ok, 1 violated (entanglement certified),
//! 2 input error, 3 coverage gap, 4 quadrature failure.

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use genwitness::criteria::{
    analyze_coverage, bipartite_test, genuine_multi_pair, genuine_single_pair_named,
    CriterionKind, CriterionReport,
};
use genwitness::entropy::QuadratureConfig;
use genwitness::error::Error;
use genwitness::io::{parse_pairs, parse_state};
use genwitness::modes::{class_counts, enumerate_bipartitions, Bipartition};
use genwitness::search::{grid_search, SearchSpec};
use genwitness::sweep::{run_sweep, SweepConfig};
use genwitness::{NamedPair, State};

mod output;

const EXIT_OK: u8 = 0;
const EXIT_VIOLATED: u8 = 1;
const EXIT_INPUT: u8 = 2;
const EXIT_GAP: u8 = 3;
const EXIT_QUADRATURE: u8 = 4;

const QUAD_TOL_ENV: &str = "GENWITNESS_QUAD_TOL";

#[derive(Parser)]
#[command(name = "genwitness", version, about = "Continuous-variable entanglement witnesses from uncertainty relations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// List every bipartition of n modes, grouped by class.
    Enumerate {
        #[arg(short = 'n')]
        n: usize,
    },
    /// Report commutators and bipartition coverage of an operator set.
    CheckPairs {
        #[arg(long)]
        ops: PathBuf,
        /// Print the analysis as JSON instead of a table.
        #[arg(long)]
        json: bool,
    },
    /// Evaluate a criterion on a state and print the report as JSON.
    Evaluate {
        #[arg(long)]
        state: PathBuf,
        #[arg(long)]
        ops: PathBuf,
        /// linear, product, entropic or renyi:ALPHA
        #[arg(long)]
        criterion: String,
        /// bipartite:LABEL (e.g. bipartite:13|24), genuine-single or genuine-multi
        #[arg(long)]
        mode: String,
        /// Pair to use in bipartite and genuine-single modes (label or 1-based index).
        #[arg(long)]
        pair: Option<String>,
        /// Also write the report to this file.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Margins of the example criteria along the vacuum-mixing line, as CSV.
    Sweep {
        #[arg(long)]
        r: f64,
        /// LO:HI:STEPS
        #[arg(long = "b-range", default_value = "0:1:101")]
        b_range: String,
        #[arg(long)]
        out: PathBuf,
        /// Also draw an SVG chart (defaults to the CSV path with .svg).
        #[arg(long, num_args = 0..=1)]
        plot: Option<Option<PathBuf>>,
    },
    /// Grid (and optionally simplex) search for a genuine single-pair witness.
    Search {
        #[arg(long)]
        state: PathBuf,
        /// Search specification JSON.
        #[arg(long)]
        spec: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// A failure with its exit code.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn input(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_INPUT,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::CoverageGap { .. } | Error::NoCandidate => EXIT_GAP,
            Error::NumericFailure { .. } => EXIT_QUADRATURE,
            _ => EXIT_INPUT,
        };
        Self {
            code,
            message: e.to_string(),
        }
    }
}

type CmdResult = Result<u8, Failure>;

fn main() -> ExitCode {
    ExitCode::from(execute(std::env::args_os(), std::env::var(QUAD_TOL_ENV).ok()))
}

/// Parses `args`, runs the command and returns the process exit code.
fn execute<I, A>(args: I, quad_tol: Option<String>) -> u8
where
    I: IntoIterator<Item = A>,
    A: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            if !cfg!(test) {
                let _ = e.print();
            }
            return if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
        }
    };
    match quad_config(quad_tol).and_then(|quad| run(cli.command, &quad)) {
        Ok(code) => code,
        Err(f) => {
            eprintln!("error: {}", f.message);
            f.code
        }
    }
}

fn quad_config(override_tol: Option<String>) -> Result<QuadratureConfig, Failure> {
    let cfg = QuadratureConfig::default();
    let Some(v) = override_tol else {
        return Ok(cfg);
    };
    let tol: f64 = v
        .trim()
        .parse()
        .map_err(|_| Failure::input(format!("{QUAD_TOL_ENV}='{v}' is not a number")))?;
    let cfg = cfg.with_abs_tol(tol);
    cfg.validate()?;
    Ok(cfg)
}

fn run(cmd: Command, quad: &QuadratureConfig) -> CmdResult {
    match cmd {
        Command::Enumerate { n } => enumerate(n),
        Command::CheckPairs { ops, json } => check_pairs(&ops, json),
        Command::Evaluate {
            state,
            ops,
            criterion,
            mode,
            pair,
            out,
        } => evaluate(&state, &ops, &criterion, &mode, pair.as_deref(), out.as_deref(), quad),
        Command::Sweep {
            r,
            b_range,
            out,
            plot,
        } => sweep(r, &b_range, &out, plot, quad),
        Command::Search { state, spec, out } => search(&state, &spec, out.as_deref(), quad),
    }
}

/// Prints to stdout, ignoring a closed pipe (e.g. output piped into `head`).
fn say(text: &str) {
    use std::io::Write;
    if cfg!(test) {
        // Keeps unit-test output inside the harness capture.
        print!("{text}");
        return;
    }
    let mut out = std::io::stdout().lock();
    let _ = out.write_all(text.as_bytes()).and_then(|()| out.flush());
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::input(format!("cannot read {}: {e}", path.display())))
}

fn write(path: &Path, contents: &[u8]) -> Result<(), Failure> {
    fs::write(path, contents).map_err(|e| Failure::input(format!("cannot write {}: {e}", path.display())))
}

fn load_state(path: &Path) -> Result<State, Failure> {
    Ok(parse_state(&read(path)?)?)
}

fn load_pairs(path: &Path) -> Result<Vec<NamedPair>, Failure> {
    Ok(parse_pairs(&read(path)?)?)
}

fn enumerate(n: usize) -> CmdResult {
    let bps = enumerate_bipartitions(n)?;
    let classes = class_counts(n)?;
    let mut text = format!("n={n}\nclasses={}\nL={}\n", classes.len(), bps.len());
    for (n_a, count) in &classes {
        text.push_str(&format!("class ({n_a},{}): {count}\n", n - n_a));
    }
    for bp in &bps {
        text.push_str(&format!("{bp}\n"));
    }
    say(&text);
    Ok(EXIT_OK)
}

fn check_pairs(ops: &Path, json: bool) -> CmdResult {
    let pairs = load_pairs(ops)?;
    let cov = analyze_coverage(&pairs)?;
    if json {
        say(&format!("{}\n", serde_json::to_string_pretty(&cov).expect("serializable")));
    } else {
        say(&output::coverage_table(&cov));
    }
    Ok(if cov.is_complete() { EXIT_OK } else { EXIT_GAP })
}

fn select_pair<'a>(pairs: &'a [NamedPair], which: Option<&str>) -> Result<&'a NamedPair, Failure> {
    match which {
        None if pairs.len() == 1 => Ok(&pairs[0]),
        None => Err(Failure::input(format!(
            "the operator file has {} pairs; choose one with --pair",
            pairs.len()
        ))),
        Some(key) => pairs
            .iter()
            .find(|p| p.label == key)
            .or_else(|| {
                key.parse::<usize>()
                    .ok()
                    .and_then(|i| i.checked_sub(1))
                    .and_then(|i| pairs.get(i))
            })
            .ok_or_else(|| Failure::input(format!("no pair named or numbered '{key}'"))),
    }
}

fn emit_report(report: &CriterionReport, out: Option<&Path>) -> CmdResult {
    let text = serde_json::to_string_pretty(report).expect("serializable");
    say(&format!("{text}\n"));
    if let Some(path) = out {
        write(path, text.as_bytes())?;
    }
    Ok(if report.is_violated() { EXIT_VIOLATED } else { EXIT_OK })
}

fn evaluate(
    state: &Path,
    ops: &Path,
    criterion: &str,
    mode: &str,
    pair: Option<&str>,
    out: Option<&Path>,
    quad: &QuadratureConfig,
) -> CmdResult {
    let kind: CriterionKind = criterion.parse()?;
    let state = load_state(state)?;
    let pairs = load_pairs(ops)?;
    let report = if let Some(label) = mode.strip_prefix("bipartite:") {
        let bp = Bipartition::parse_for(state.n(), label)?;
        let lp = select_pair(&pairs, pair)?;
        bipartite_test(&state, &lp.pair, &bp, kind, quad)?
    } else {
        match mode {
            "genuine-single" => {
                let lp = select_pair(&pairs, pair)?;
                genuine_single_pair_named(&state, &lp.label, &lp.pair, kind, quad)?
            }
            "genuine-multi" => genuine_multi_pair(&state, &pairs, kind, quad)?,
            other => {
                return Err(Failure::input(format!(
                    "unknown mode '{other}' (expected bipartite:LABEL, genuine-single or genuine-multi)"
                )))
            }
        }
    };
    emit_report(&report, out)
}

fn parse_b_range(s: &str) -> Result<(f64, f64, usize), Failure> {
    let parts: Vec<&str> = s.split(':').collect();
    let bad = || Failure::input(format!("--b-range '{s}' is not LO:HI:STEPS"));
    if parts.len() != 3 {
        return Err(bad());
    }
    let lo = parts[0].trim().parse().map_err(|_| bad())?;
    let hi = parts[1].trim().parse().map_err(|_| bad())?;
    let steps = parts[2].trim().parse().map_err(|_| bad())?;
    Ok((lo, hi, steps))
}

fn sweep(r: f64, b_range: &str, out: &Path, plot: Option<Option<PathBuf>>, quad: &QuadratureConfig) -> CmdResult {
    let (lo, hi, steps) = parse_b_range(b_range)?;
    let cfg = SweepConfig::new(r, lo, hi, steps)?;
    let result = run_sweep(&cfg, quad)?;
    let mut csv = Vec::new();
    result
        .write_csv(&mut csv)
        .map_err(|e| Failure::input(format!("cannot format CSV: {e}")))?;
    write(out, &csv)?;
    if let Some(p) = plot {
        let path = p.unwrap_or_else(|| out.with_extension("svg"));
        write(&path, result.to_svg().as_bytes())?;
    }
    for &kind in &cfg.criteria {
        match result.last_negative(kind) {
            Some(b) => say(&format!("{kind}: negative up to b = {b}\n")),
            None => say(&format!("{kind}: never negative\n")),
        }
    }
    if result.failures.is_empty() {
        Ok(EXIT_OK)
    } else {
        for f in &result.failures {
            eprintln!("quadrature failure: {f}");
        }
        Ok(EXIT_QUADRATURE)
    }
}

fn search(state: &Path, spec: &Path, out: Option<&Path>, quad: &QuadratureConfig) -> CmdResult {
    let state = load_state(state)?;
    let spec: SearchSpec = serde_json::from_str(&read(spec)?)
        .map_err(|e| Failure::input(format!("malformed search spec: {e}")))?;
    let result = grid_search(&state, &spec, quad)?;
    let text = serde_json::to_string_pretty(&result).expect("serializable");
    say(&format!("{text}\n"));
    if let Some(path) = out {
        write(path, text.as_bytes())?;
    }
    Ok(if result.report.is_violated() {
        EXIT_VIOLATED
    } else {
        EXIT_OK
    })
}
