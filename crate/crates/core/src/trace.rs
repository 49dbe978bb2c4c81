//! Execution traces and their text renderings.
//!
//! A 1-D run renders as a space-time diagram: one line per configuration,
//! the input first, then the state after each sweep. A 2-D run renders as
//! a sequence of grid panels, one per sweep. Cells use the compact symbol
//! notation separated by single spaces, which keeps goldens diff-friendly.
//!
//! Runs that end in a tie get a final line (or panel header) saying so.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::alphabet::Symbol;
use crate::engine::{format_cells, Observer, OutcomeKind, Ring, RunOutcome, Step};
use crate::rule::RuleCase;

/// One cell update.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceRecord {
    pub sweep: usize,
    pub cell: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coord: Option<Vec<usize>>,
    pub case: RuleCase,
    pub before: Symbol,
    pub after: Symbol,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Trace {
    /// `[n]` for a ring, `[n1, .., nd]` for a cuboid.
    pub dims: Vec<usize>,
    pub initial: Vec<Symbol>,
    /// State after each sweep; a tie adds the state at which it halted.
    pub snapshots: Vec<Vec<Symbol>>,
    pub records: Vec<TraceRecord>,
    pub outcome: RunOutcome,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TraceError {
    #[error("space-time diagrams need a one-dimensional trace, got {0} dimensions")]
    NotOneDimensional(usize),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("record {index}: {message}")]
    Replay { index: usize, message: String },
}

/// Records a run through the [`Observer`] hooks.
#[derive(Debug)]
pub struct Recorder {
    dims: Vec<usize>,
    initial: Vec<Symbol>,
    snapshots: Vec<Vec<Symbol>>,
    records: Vec<TraceRecord>,
}

impl Recorder {
    pub fn ring(ring: &Ring) -> Recorder {
        Recorder::new(vec![ring.len()], ring.cells().to_vec())
    }

    pub fn new(dims: Vec<usize>, initial: Vec<Symbol>) -> Recorder {
        Recorder {
            dims,
            initial,
            snapshots: Vec::new(),
            records: Vec::new(),
        }
    }

    pub fn finish(mut self, outcome: RunOutcome, final_cells: &[Symbol]) -> Trace {
        if outcome.kind == OutcomeKind::Tie {
            self.snapshots.push(final_cells.to_vec());
        }
        Trace {
            dims: self.dims,
            initial: self.initial,
            snapshots: self.snapshots,
            records: self.records,
            outcome,
        }
    }
}

impl Observer for Recorder {
    fn on_step(&mut self, step: &Step, _cells: &[Symbol]) {
        let u = &step.update;
        let coord = (self.dims.len() > 1).then(|| coordinates(u.cell, &self.dims));
        self.records.push(TraceRecord {
            sweep: step.sweep,
            cell: u.cell,
            coord,
            case: u.case,
            before: u.before,
            after: u.after,
        });
    }

    fn on_sweep(&mut self, _sweep: usize, cells: &[Symbol]) {
        self.snapshots.push(cells.to_vec());
    }
}

/// Linear index to coordinates, first coordinate fastest.
pub fn coordinates(mut index: usize, dims: &[usize]) -> Vec<usize> {
    dims.iter()
        .map(|&n| {
            let x = index % n;
            index /= n;
            x
        })
        .collect()
}

fn tie_line(trace: &Trace) -> Option<String> {
    if trace.outcome.kind != OutcomeKind::Tie {
        return None;
    }
    let last = trace.records.last()?;
    Some(match &last.coord {
        Some(c) => format!("TIE at sweep {}, cell {:?}", last.sweep, c),
        None => format!("TIE at sweep {}, cell {}", last.sweep, last.cell),
    })
}

pub fn render_spacetime(trace: &Trace) -> Result<String, TraceError> {
    if trace.dims.len() != 1 {
        return Err(TraceError::NotOneDimensional(trace.dims.len()));
    }
    let mut out = String::new();
    for row in std::iter::once(&trace.initial).chain(&trace.snapshots) {
        out.push_str(&format_cells(row));
        out.push('\n');
    }
    if let Some(line) = tie_line(trace) {
        out.push_str(&line);
        out.push('\n');
    }
    Ok(out)
}

/// Space-time diagram with every column padded to its widest cell.
pub fn render_spacetime_aligned(trace: &Trace) -> Result<String, TraceError> {
    if trace.dims.len() != 1 {
        return Err(TraceError::NotOneDimensional(trace.dims.len()));
    }
    let rows: Vec<Vec<String>> = std::iter::once(&trace.initial)
        .chain(&trace.snapshots)
        .map(|r| r.iter().map(Symbol::to_string).collect())
        .collect();
    let n = trace.dims[0];
    let widths: Vec<usize> = (0..n)
        .map(|c| rows.iter().map(|r| r[c].len()).max().unwrap_or(1))
        .collect();
    let mut out = String::new();
    for row in &rows {
        let line: Vec<String> = row.iter().zip(&widths).map(|(s, &w)| format!("{s:<w$}")).collect();
        out.push_str(line.join(" ").trim_end());
        out.push('\n');
    }
    if let Some(line) = tie_line(trace) {
        out.push_str(&line);
        out.push('\n');
    }
    Ok(out)
}

/// Panels for 1-D and 2-D traces: rows are indexed by the second
/// coordinate, columns by the first. Higher dimensions fall back to the
/// record stream.
pub fn render_panels(trace: &Trace) -> String {
    if trace.dims.len() > 2 {
        return emit_records(trace);
    }
    let width = trace.dims[0];
    let tied = trace.outcome.kind == OutcomeKind::Tie;
    let mut out = String::new();
    let panels: Vec<&Vec<Symbol>> = std::iter::once(&trace.initial).chain(&trace.snapshots).collect();
    for (k, panel) in panels.iter().enumerate() {
        if k > 0 {
            out.push('\n');
        }
        if tied && k == panels.len() - 1 {
            let _ = writeln!(out, "sweep {k} (TIE)");
        } else {
            let _ = writeln!(out, "sweep {k}");
        }
        for row in panel.chunks(width) {
            out.push_str(&format_cells(row));
            out.push('\n');
        }
    }
    out
}

/// One JSON object per cell update, fields in a fixed order.
pub fn emit_records(trace: &Trace) -> String {
    let mut out = String::new();
    for r in &trace.records {
        out.push_str(&serde_json::to_string(r).expect("records serialize"));
        out.push('\n');
    }
    out
}

pub fn parse_records(text: &str) -> Result<Vec<TraceRecord>, TraceError> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| {
            serde_json::from_str(l).map_err(|e| TraceError::Parse {
                line: i + 1,
                message: e.to_string(),
            })
        })
        .collect()
}

/// Applies the `after` symbols of `records` to `initial`, checking each
/// `before` along the way.
pub fn replay(initial: &[Symbol], records: &[TraceRecord]) -> Result<Vec<Symbol>, TraceError> {
    let mut cells = initial.to_vec();
    for (index, r) in records.iter().enumerate() {
        let slot = cells.get_mut(r.cell).ok_or_else(|| TraceError::Replay {
            index,
            message: format!("cell {} out of range", r.cell),
        })?;
        if *slot != r.before {
            return Err(TraceError::Replay {
                index,
                message: format!("expected {} before, found {}", r.before, slot),
            });
        }
        *slot = r.after;
    }
    Ok(cells)
}

/// Reads a space-time diagram back into rows of symbols. Trailing status
/// lines are skipped.
pub fn parse_spacetime(text: &str) -> Result<Vec<Vec<Symbol>>, TraceError> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty() && !l.starts_with("TIE"))
        .map(|(i, l)| {
            l.split_whitespace()
                .map(|tok| {
                    tok.parse::<Symbol>().map_err(|e| TraceError::Parse {
                        line: i + 1,
                        message: e.to_string(),
                    })
                })
                .collect()
        })
        .collect()
}
