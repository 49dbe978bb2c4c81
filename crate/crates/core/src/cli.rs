//! The `seqdct` command line.
//!
//! Exit codes: 0 on success or a clean verification, 1 on classification
//! failures or property violations, 2 on usage and input errors.

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use crate::alphabet::{alphabet_cardinality, enumerate_alphabet, Alphabet, Symbol};
use crate::engine::{run, OutcomeKind, Ring, RunOptions, RunReport};
use crate::multidim::{parse_grid, run_d, Cuboid, SelectionMode};
use crate::oracle::{majority_of, Verdict};
use crate::trace::{emit_records, render_panels, render_spacetime, render_spacetime_aligned};
use crate::verifier::{
    check_properties, compare_modes, verify_exhaustive, verify_exhaustive_d, SampleSpec, VerifyOptions,
};

#[derive(Debug, Parser)]
#[command(name = "seqdct", version, about = "Sequential density classification automaton")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TraceFormat {
    /// One line per sweep, single-space separated.
    Spacetime,
    /// Like spacetime, columns padded to equal width.
    Aligned,
    /// One grid per sweep.
    Panels,
    /// One JSON object per cell update.
    Records,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    CounterFiltered,
    PaperLiteral,
}

impl From<ModeArg> for SelectionMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::CounterFiltered => SelectionMode::CounterFiltered,
            ModeArg::PaperLiteral => SelectionMode::PaperLiteral,
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run one configuration on a ring, cells read left to right.
    Run {
        /// Digits, cell 0 first, e.g. 0001010.
        input: String,
        /// Alphabet size.
        #[arg(long, default_value_t = 2)]
        k: usize,
        /// Sweep budget [default: n + 4].
        #[arg(long)]
        max_sweeps: Option<usize>,
        /// Print the execution before the outcome.
        #[arg(long)]
        trace: bool,
        #[arg(long, value_enum, default_value_t = TraceFormat::Spacetime)]
        format: TraceFormat,
    },
    /// Run one grid on a torus.
    RunD {
        /// Rows separated by '/', e.g. 010/122/220 (two dimensions).
        grid: Option<String>,
        /// Grid file with `dims:` and `alphabet:` headers.
        #[arg(long, conflicts_with = "grid")]
        file: Option<PathBuf>,
        /// Alphabet size for an inline grid.
        #[arg(long, default_value_t = 2)]
        k: usize,
        #[arg(long, value_enum, default_value_t = ModeArg::CounterFiltered)]
        mode: ModeArg,
        /// Sweep budget [default: cells + 4].
        #[arg(long)]
        max_sweeps: Option<usize>,
        #[arg(long)]
        trace: bool,
        #[arg(long, value_enum, default_value_t = TraceFormat::Panels)]
        format: TraceFormat,
    },
    /// Check every ring in a size range against the majority oracle.
    Verify {
        /// A size or an inclusive range, e.g. 12 or 1..14.
        #[arg(long, value_parser = parse_range)]
        n: (usize, usize),
        #[arg(long, default_value_t = 2)]
        k: usize,
        #[arg(long, default_value_t = 1)]
        workers: usize,
        /// Also write the report as JSON.
        #[arg(long)]
        report: Option<PathBuf>,
        #[arg(long)]
        max_sweeps: Option<usize>,
        /// Lift the enumeration cap.
        #[arg(long)]
        allow_large: bool,
    },
    /// Check every grid of one shape against the majority oracle.
    VerifyD {
        /// Side lengths, e.g. 3x3.
        #[arg(long, value_parser = parse_dims)]
        dims: Dims,
        #[arg(long, default_value_t = 2)]
        k: usize,
        #[arg(long, value_enum, default_value_t = ModeArg::CounterFiltered)]
        mode: ModeArg,
        /// Run both selection modes and report where they differ.
        #[arg(long)]
        compare: bool,
        #[arg(long, default_value_t = 1)]
        workers: usize,
        #[arg(long)]
        report: Option<PathBuf>,
        #[arg(long)]
        allow_large: bool,
    },
    /// Conservation and phase-count checks on instrumented runs.
    Props {
        /// Check all inputs of size 1..=N.
        #[arg(long, default_value_t = 12)]
        n: usize,
        /// Sizes for random sampling, comma separated.
        #[arg(long, value_delimiter = ',')]
        sizes: Vec<usize>,
        /// Random inputs per sampled size.
        #[arg(long, default_value_t = 0)]
        samples: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 2)]
        k: usize,
        #[arg(long, default_value_t = 1)]
        workers: usize,
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// List every symbol of the alphabet over k input symbols.
    Alphabet {
        #[arg(long, default_value_t = 2)]
        k: usize,
    },
}

fn parse_range(s: &str) -> Result<(usize, usize), String> {
    let bad = || format!("expected N or A..B, got {s:?}");
    let (a, b) = match s.split_once("..") {
        Some((a, b)) => (a, b.strip_prefix('=').unwrap_or(b)),
        None => (s, s),
    };
    let a: usize = a.trim().parse().map_err(|_| bad())?;
    let b: usize = b.trim().parse().map_err(|_| bad())?;
    if a == 0 || a > b {
        return Err(bad());
    }
    Ok((a, b))
}

/// Side lengths of a grid, parsed from `3x3`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dims(pub Vec<usize>);

fn parse_dims(s: &str) -> Result<Dims, String> {
    s.split(['x', 'X', ','])
        .map(|p| p.trim().parse::<usize>().ok().filter(|&n| n > 0))
        .collect::<Option<Vec<_>>>()
        .map(Dims)
        .ok_or_else(|| format!("expected side lengths like 3x3, got {s:?}"))
}

/// A failure with its exit code.
struct Fail(u8, String);

fn usage(e: impl std::fmt::Display) -> Fail {
    Fail(2, e.to_string())
}

fn alphabet(k: usize) -> Result<Alphabet, Fail> {
    Alphabet::new(k).map_err(usage)
}

fn write_json(path: &Option<PathBuf>, json: String) -> Result<(), Fail> {
    if let Some(p) = path {
        std::fs::write(p, json + "\n").map_err(|e| usage(format!("cannot write {}: {e}", p.display())))?;
    }
    Ok(())
}

fn render(report: &RunReport, format: TraceFormat) -> String {
    let trace = report.trace.as_ref().expect("trace requested");
    match format {
        TraceFormat::Spacetime => render_spacetime(trace).unwrap_or_else(|_| render_panels(trace)),
        TraceFormat::Aligned => render_spacetime_aligned(trace).unwrap_or_else(|_| render_panels(trace)),
        TraceFormat::Panels => render_panels(trace),
        TraceFormat::Records => emit_records(trace),
    }
}

/// Exit status for a single run: anything other than the oracle's answer
/// on a majority input is a failure.
fn agrees(cells: &[Symbol], alphabet: Alphabet, kind: OutcomeKind) -> bool {
    match majority_of(cells, alphabet).map(|v| v.verdict) {
        Ok(Verdict::Majority(b)) => kind == OutcomeKind::Classified(b),
        _ => true,
    }
}

fn execute(cli: Cli, out: &mut dyn Write) -> Result<u8, Fail> {
    let io = |e: std::io::Error| Fail(2, e.to_string());
    match cli.command {
        Command::Run {
            input,
            k,
            max_sweeps,
            trace,
            format,
        } => {
            let alphabet = alphabet(k)?;
            let ring = Ring::from_digits(&input, alphabet).map_err(usage)?;
            let opts = RunOptions {
                max_sweeps,
                capture_trace: trace,
            };
            let report = run(&ring, opts).map_err(usage)?;
            if trace {
                write!(out, "{}", render(&report, format)).map_err(io)?;
            }
            writeln!(out, "{}", report.outcome).map_err(io)?;
            Ok(u8::from(!agrees(ring.cells(), alphabet, report.outcome.kind)))
        }
        Command::RunD {
            grid,
            file,
            k,
            mode,
            max_sweeps,
            trace,
            format,
        } => {
            let cuboid = match (grid, file) {
                (_, Some(path)) => {
                    let text = std::fs::read_to_string(&path)
                        .map_err(|e| usage(format!("cannot read {}: {e}", path.display())))?;
                    parse_grid(&text).map_err(usage)?
                }
                (Some(g), None) => {
                    let rows: Vec<&str> = g.split('/').map(str::trim).collect();
                    let dims = [rows[0].chars().count(), rows.len()];
                    Cuboid::from_rows(&dims, &rows, alphabet(k)?).map_err(usage)?
                }
                (None, None) => return Err(usage("run-d needs a grid or --file")),
            };
            let opts = RunOptions {
                max_sweeps,
                capture_trace: trace,
            };
            let report = match run_d(&cuboid, opts, mode.into()) {
                Ok(r) => r,
                Err(crate::multidim::RunDError::Fault(f)) => {
                    writeln!(out, "FAULT {f}").map_err(io)?;
                    return Ok(1);
                }
                Err(e) => return Err(usage(e)),
            };
            if trace {
                write!(out, "{}", render(&report, format)).map_err(io)?;
            }
            writeln!(out, "{}", report.outcome).map_err(io)?;
            Ok(u8::from(!agrees(
                cuboid.cells(),
                cuboid.alphabet(),
                report.outcome.kind,
            )))
        }
        Command::Verify {
            n,
            k,
            workers,
            report,
            max_sweeps,
            allow_large,
        } => {
            let opts = VerifyOptions {
                alphabet: alphabet(k)?,
                max_sweeps,
                max_configurations: allow_large.then_some(u64::MAX),
                ..Default::default()
            };
            let r = verify_exhaustive(n.0, n.1, workers, &opts).map_err(usage)?;
            writeln!(out, "{r}").map_err(io)?;
            write_json(&report, r.to_json())?;
            Ok(u8::from(!r.is_clean()))
        }
        Command::VerifyD {
            dims: Dims(dims),
            k,
            mode,
            compare,
            workers,
            report,
            allow_large,
        } => {
            let opts = VerifyOptions {
                alphabet: alphabet(k)?,
                max_configurations: allow_large.then_some(u64::MAX),
                ..Default::default()
            };
            if compare {
                let c = compare_modes(&dims, workers, &opts).map_err(usage)?;
                writeln!(out, "checked: {}", c.checked).map_err(io)?;
                writeln!(out, "discrepancies: {}", c.discrepancy_count).map_err(io)?;
                writeln!(out, "incomparable_memories: {}", c.incomparable_memories).map_err(io)?;
                for d in &c.discrepancies {
                    writeln!(
                        out,
                        "  {}: counter-filtered {}, paper-literal {}",
                        d.input, d.counter_filtered, d.paper_literal
                    )
                    .map_err(io)?;
                }
                write_json(&report, serde_json::to_string_pretty(&c).expect("serializes"))?;
                return Ok(u8::from(!c.counter_filtered.is_clean()));
            }
            let r = verify_exhaustive_d(&dims, mode.into(), workers, &opts).map_err(usage)?;
            writeln!(out, "{r}").map_err(io)?;
            write_json(&report, r.to_json())?;
            Ok(u8::from(!r.is_clean()))
        }
        Command::Props {
            n,
            sizes,
            samples,
            seed,
            k,
            workers,
            report,
        } => {
            let spec = SampleSpec {
                alphabet: alphabet(k)?,
                sizes,
                samples,
                seed,
            };
            let r = check_properties(n, &spec, workers).map_err(usage)?;
            writeln!(out, "{r}").map_err(io)?;
            write_json(&report, serde_json::to_string_pretty(&r).expect("serializes"))?;
            Ok(u8::from(!r.is_clean()))
        }
        Command::Alphabet { k } => {
            let alphabet = alphabet(k)?;
            let symbols = enumerate_alphabet(alphabet);
            let base = symbols.iter().filter(|s| s.is_base()).count();
            writeln!(
                out,
                "k={k}: {} symbols ({base} base, {} intermediate)",
                alphabet_cardinality(alphabet),
                symbols.len() - base
            )
            .map_err(io)?;
            for (i, s) in symbols.iter().enumerate() {
                writeln!(out, "{i:>4}  {s}").map_err(io)?;
            }
            Ok(0)
        }
    }
}

/// Parses `args` (program name first) and runs the command, writing normal
/// output to `out` and diagnostics to `err`. Returns the exit code.
pub fn run_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            if e.use_stderr() {
                let _ = write!(err, "{e}");
                return 2;
            }
            let _ = write!(out, "{e}");
            return 0;
        }
    };
    match execute(cli, out) {
        Ok(code) => code,
        Err(Fail(code, msg)) => {
            let _ = writeln!(err, "error: {msg}");
            code
        }
    }
}

pub fn main() -> ExitCode {
    let code = run_with(
        std::env::args_os(),
        &mut std::io::stdout().lock(),
        &mut std::io::stderr().lock(),
    );
    ExitCode::from(code)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str]) -> (u8, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run_with(
            std::iter::once("seqdct").chain(args.iter().copied()),
            &mut out,
            &mut err,
        );
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn run_seven_cell_ring() {
        let (code, out, _) = call(&["run", "0001010"]);
        assert_eq!(code, 0);
        assert_eq!(out, "CLASSIFIED 0, sweeps=5, phases=3\n");
        let (_, out, _) = call(&["run", "0001010", "--trace"]);
        assert_eq!(out.lines().count(), 7);
    }

    #[test]
    fn run_rejects_bad_digits() {
        let (code, _, err) = call(&["run", "0121"]);
        assert_eq!(code, 2);
        assert!(err.contains("position 2"));
        assert_eq!(call(&["run", "01x"]).0, 2);
        assert_eq!(call(&["run", "0000", "--max-sweeps", "0"]).0, 2);
    }

    #[test]
    fn budget_exceeded_fails() {
        let (code, out, _) = call(&["run", "0001010", "--max-sweeps", "2"]);
        assert_eq!(code, 1);
        assert!(out.starts_with("BUDGET_EXCEEDED"));
    }

    #[test]
    fn unknown_option_is_usage_error() {
        assert_eq!(call(&["run", "01", "--bogus"]).0, 2);
        assert_eq!(call(&["verify", "--n", "3..2"]).0, 2);
        assert_eq!(call(&["frobnicate"]).0, 2);
    }

    #[test]
    fn verify_two() {
        let (code, out, _) = call(&["verify", "--n", "2"]);
        assert_eq!(code, 0);
        assert!(out.contains("classified_correct: 2"));
        assert!(out.contains("ties_seen: 2"));
        assert_eq!(call(&["verify", "--n", "1..30"]).0, 2);
    }

    #[test]
    fn run_d_inline() {
        let (code, out, _) = call(&["run-d", "010/122/220", "--k", "3"]);
        assert_eq!(code, 0);
        assert_eq!(out, "CLASSIFIED 2, sweeps=6, phases=4\n");
        let (code, out, _) = call(&["run-d", "01/10"]);
        assert_eq!(code, 0);
        assert!(out.starts_with("TIE"));
    }

    #[test]
    fn alphabet_table() {
        let (code, out, _) = call(&["alphabet", "--k", "2"]);
        assert_eq!(code, 0);
        assert_eq!(out.lines().count(), 19);
        assert!(out.starts_with("k=2: 18 symbols (2 base, 16 intermediate)"));
        assert_eq!(call(&["alphabet", "--k", "1"]).0, 2);
    }

    #[test]
    fn ranges_and_dims() {
        assert_eq!(parse_range("1..14"), Ok((1, 14)));
        assert_eq!(parse_range("1..=14"), Ok((1, 14)));
        assert_eq!(parse_range("7"), Ok((7, 7)));
        assert!(parse_range("0..3").is_err());
        assert_eq!(parse_dims("3x4"), Ok(Dims(vec![3, 4])));
        assert!(parse_dims("3x0").is_err());
    }
}
