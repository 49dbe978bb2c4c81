//! Sequential left-to-right execution on a cyclic configuration.
//!
//! Cells are updated in place, one at a time, from cell 0 to cell n−1; the
//! left neighbour of cell 0 is cell n−1. An update is visible to the next
//! cell of the same sweep. A full sweep is one application of the global
//! map; [`Engine`] additionally exposes the partial states between sweeps.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::alphabet::{Alphabet, AlphabetError, BaseSymbol, Memory, Symbol};
use crate::rule::{transition, LocalResult, RuleCase};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ConfigError {
    #[error("empty configuration")]
    Empty,
    #[error("character {found:?} at position {position} is not a digit of the alphabet")]
    NotADigit { position: usize, found: char },
    #[error("digit {found:?} at position {position} is not below the alphabet size {size}")]
    DigitOutOfRange { position: usize, found: char, size: usize },
    #[error("cell {0} holds an intermediate symbol; inputs must contain only base symbols")]
    IntermediateInput(usize),
    #[error("cell {cell}: {source}")]
    InvalidCell {
        cell: usize,
        #[source]
        source: AlphabetError,
    },
    #[error("cannot parse cell {cell}: {source}")]
    Parse {
        cell: usize,
        #[source]
        source: crate::alphabet::SymbolParseError,
    },
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EngineError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("max_sweeps must be at least 1")]
    ZeroBudget,
    #[error("cursor ({sweeps}, {cell}) out of range for a ring of {len} cells")]
    CursorOutOfRange { sweeps: usize, cell: usize, len: usize },
}

/// Parses a digit string into base symbols, checking the alphabet.
pub fn parse_digits(s: &str, alphabet: Alphabet) -> Result<Vec<Symbol>, ConfigError> {
    let cells = s
        .chars()
        .enumerate()
        .map(|(position, c)| {
            let b = BaseSymbol::from_digit(c).ok_or(ConfigError::NotADigit { position, found: c })?;
            if alphabet.contains(b) {
                Ok(Symbol::Base(b))
            } else {
                Err(ConfigError::DigitOutOfRange {
                    position,
                    found: c,
                    size: alphabet.size(),
                })
            }
        })
        .collect::<Result<Vec<_>, _>>()?;
    if cells.is_empty() {
        return Err(ConfigError::Empty);
    }
    Ok(cells)
}

/// Decodes configuration number `index` of length `n`: cell 0 is the least
/// significant base-`k` digit.
pub fn decode_index(mut index: u64, n: usize, alphabet: Alphabet) -> Vec<Symbol> {
    let k = alphabet.size() as u64;
    (0..n)
        .map(|_| {
            let d = index % k;
            index /= k;
            Symbol::base(d as u8)
        })
        .collect()
}

pub fn encode_index(cells: &[Symbol], alphabet: Alphabet) -> Option<u64> {
    let k = alphabet.size() as u64;
    cells.iter().rev().try_fold(0u64, |acc, s| {
        let b = s.as_base()?;
        acc.checked_mul(k)?.checked_add(b.0 as u64)
    })
}

/// `Some(b)` iff every cell is the base symbol `b`.
pub fn uniform_base(cells: &[Symbol]) -> Option<BaseSymbol> {
    let first = cells.first()?.as_base()?;
    cells.iter().all(|&s| s == Symbol::Base(first)).then_some(first)
}

/// Writes cells separated by single spaces.
pub fn format_cells(cells: &[Symbol]) -> String {
    let mut out = String::new();
    for (i, s) in cells.iter().enumerate() {
        if i > 0 {
            out.push(' ');
        }
        out.push_str(&s.to_string());
    }
    out
}

/// A cyclic configuration.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Ring {
    alphabet: Alphabet,
    cells: Vec<Symbol>,
}

impl Ring {
    /// Any valid symbols are accepted, so partial states can be built.
    pub fn new(cells: Vec<Symbol>, alphabet: Alphabet) -> Result<Ring, ConfigError> {
        if cells.is_empty() {
            return Err(ConfigError::Empty);
        }
        for (cell, &s) in cells.iter().enumerate() {
            alphabet
                .check(s)
                .map_err(|source| ConfigError::InvalidCell { cell, source })?;
        }
        Ok(Ring { alphabet, cells })
    }

    pub fn from_digits(s: &str, alphabet: Alphabet) -> Result<Ring, ConfigError> {
        Ok(Ring {
            alphabet,
            cells: parse_digits(s, alphabet)?,
        })
    }

    pub fn from_index(index: u64, n: usize, alphabet: Alphabet) -> Ring {
        assert!(n >= 1);
        Ring {
            alphabet,
            cells: decode_index(index, n, alphabet),
        }
    }

    /// Parses whitespace-separated cells in compact notation.
    pub fn parse(s: &str, alphabet: Alphabet) -> Result<Ring, ConfigError> {
        let cells = s
            .split_whitespace()
            .enumerate()
            .map(|(cell, tok)| tok.parse().map_err(|source| ConfigError::Parse { cell, source }))
            .collect::<Result<Vec<_>, _>>()?;
        Ring::new(cells, alphabet)
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn cells(&self) -> &[Symbol] {
        &self.cells
    }

    pub fn into_cells(self) -> Vec<Symbol> {
        self.cells
    }

    pub fn uniform_base(&self) -> Option<BaseSymbol> {
        uniform_base(&self.cells)
    }

    pub fn left_of(&self, i: usize) -> usize {
        if i == 0 {
            self.cells.len() - 1
        } else {
            i - 1
        }
    }

    /// Applies the local rule to cell `i` in place. A tie leaves the cell as
    /// it was.
    pub fn step_cell(&mut self, i: usize) -> CellUpdate {
        let before = self.cells[i];
        let tr = transition(self.cells[self.left_of(i)], before);
        let after = match tr.result {
            LocalResult::Symbol(s) => s,
            LocalResult::Tie => before,
        };
        self.cells[i] = after;
        CellUpdate {
            cell: i,
            case: tr.case,
            before,
            after,
        }
    }

    /// One application of the global map. Stops early at a tie.
    pub fn sweep(&mut self) -> SweepResult {
        let mut result = SweepResult::default();
        for i in 0..self.cells.len() {
            let u = self.step_cell(i);
            result.changed |= u.before != u.after;
            if u.event().is_some() {
                result.events.push(u);
            }
            if u.case == RuleCase::SwapTie {
                result.tie_at = Some(i);
                break;
            }
        }
        result
    }

    /// The state after `k` full sweeps followed by updates of cells
    /// `0..i`. `i` may equal `n`.
    pub fn partial(&self, k: usize, i: usize) -> Result<Ring, EngineError> {
        let mut engine = Engine::new(self.clone());
        engine.advance_to(Cursor {
            sweeps_done: k,
            next_cell: i,
        })?;
        Ok(engine.into_ring())
    }
}

impl fmt::Display for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_cells(&self.cells))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CellUpdate {
    pub cell: usize,
    pub case: RuleCase,
    pub before: Symbol,
    pub after: Symbol,
}

impl CellUpdate {
    pub fn event(&self) -> Option<PhaseEventKind> {
        PhaseEventKind::from_case(self.case)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SweepResult {
    pub changed: bool,
    pub events: Vec<CellUpdate>,
    pub tie_at: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum PhaseEventKind {
    Kickstart,
    SwapReset,
    SwapConverge,
    Tie,
}

impl PhaseEventKind {
    pub fn from_case(case: RuleCase) -> Option<PhaseEventKind> {
        match case {
            RuleCase::Kickstart => Some(PhaseEventKind::Kickstart),
            RuleCase::SwapReset => Some(PhaseEventKind::SwapReset),
            RuleCase::SwapConverge => Some(PhaseEventKind::SwapConverge),
            RuleCase::SwapTie => Some(PhaseEventKind::Tie),
            _ => None,
        }
    }

    /// Kickstart and memory resets each open a propagation phase.
    pub fn starts_phase(self) -> bool {
        matches!(self, PhaseEventKind::Kickstart | PhaseEventKind::SwapReset)
    }
}

/// `sweep` is 1-based: the sweep during which the event happened.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PhaseEvent {
    pub kind: PhaseEventKind,
    pub sweep: usize,
    pub cell: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub coord: Option<Vec<usize>>,
    pub detail: Option<Symbol>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", content = "symbol", rename_all = "SCREAMING_SNAKE_CASE")]
pub enum OutcomeKind {
    Classified(BaseSymbol),
    Tie,
    BudgetExceeded,
}

impl fmt::Display for OutcomeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OutcomeKind::Classified(b) => write!(f, "CLASSIFIED {b}"),
            OutcomeKind::Tie => f.write_str("TIE"),
            OutcomeKind::BudgetExceeded => f.write_str("BUDGET_EXCEEDED"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunOutcome {
    pub kind: OutcomeKind,
    /// Sweeps started, including a partial sweep cut short by a tie.
    pub sweeps_used: usize,
    pub propagation_phases: usize,
}

impl fmt::Display for RunOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}, sweeps={}, phases={}",
            self.kind, self.sweeps_used, self.propagation_phases
        )
    }
}

/// Sequential-update position: `sweeps_done` full sweeps, then cells
/// `0..next_cell` of the next one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize)]
pub struct Cursor {
    pub sweeps_done: usize,
    pub next_cell: usize,
}

/// One cell update inside a run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Step {
    /// 1-based sweep the update belongs to.
    pub sweep: usize,
    /// Position after the update. A tie leaves the cursor on the tied cell.
    pub cursor: Cursor,
    pub update: CellUpdate,
}

/// Hook for instrumenting a run.
pub trait Observer {
    /// Called after each cell update with the configuration at that point.
    fn on_step(&mut self, _step: &Step, _cells: &[Symbol]) {}
    /// Called after each completed sweep (1-based).
    fn on_sweep(&mut self, _sweep: usize, _cells: &[Symbol]) {}
}

impl Observer for () {}

/// A ring plus its sequential-update cursor.
#[derive(Debug, Clone)]
pub struct Engine {
    ring: Ring,
    cursor: Cursor,
    tied: bool,
}

impl Engine {
    pub fn new(ring: Ring) -> Engine {
        Engine {
            ring,
            cursor: Cursor::default(),
            tied: false,
        }
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn into_ring(self) -> Ring {
        self.ring
    }

    pub fn cursor(&self) -> Cursor {
        self.cursor
    }

    pub fn is_tied(&self) -> bool {
        self.tied
    }

    /// The most recently updated cell (the left neighbour of the next cell
    /// to update).
    pub fn active_cell(&self) -> usize {
        self.ring.left_of(self.cursor.next_cell)
    }

    pub fn active_memory(&self) -> Memory {
        self.ring.cells[self.active_cell()].memory()
    }

    /// Updates the next cell. Returns `None` once a tie has halted the run.
    pub fn step(&mut self) -> Option<CellUpdate> {
        if self.tied {
            return None;
        }
        let u = self.ring.step_cell(self.cursor.next_cell);
        if u.case == RuleCase::SwapTie {
            self.tied = true;
            return Some(u);
        }
        self.cursor.next_cell += 1;
        if self.cursor.next_cell == self.ring.len() {
            self.cursor.next_cell = 0;
            self.cursor.sweeps_done += 1;
        }
        Some(u)
    }

    /// Steps until the cursor reaches `target`; stops early on a tie.
    pub fn advance_to(&mut self, mut target: Cursor) -> Result<(), EngineError> {
        let n = self.ring.len();
        if target.next_cell > n {
            return Err(EngineError::CursorOutOfRange {
                sweeps: target.sweeps_done,
                cell: target.next_cell,
                len: n,
            });
        }
        if target.next_cell == n {
            target = Cursor {
                sweeps_done: target.sweeps_done + 1,
                next_cell: 0,
            };
        }
        if target < self.cursor {
            return Err(EngineError::CursorOutOfRange {
                sweeps: target.sweeps_done,
                cell: target.next_cell,
                len: n,
            });
        }
        while self.cursor < target && self.step().is_some() {}
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct RunOptions {
    /// Defaults to `n + 4`.
    pub max_sweeps: Option<usize>,
    pub capture_trace: bool,
}

pub fn default_budget(cells: usize) -> usize {
    cells + 4
}

#[derive(Debug, Clone)]
pub struct RunReport {
    pub outcome: RunOutcome,
    pub events: Vec<PhaseEvent>,
    pub final_cells: Vec<Symbol>,
    pub trace: Option<crate::trace::Trace>,
}

/// Runs sweeps until the configuration is a uniform base configuration,
/// a tie is hit, or `max_sweeps` is spent. Uniform inputs take one sweep.
///
/// This is the hot loop used by the verifier; `cells` must hold valid
/// symbols.
pub fn drive<O: Observer>(cells: &mut [Symbol], max_sweeps: usize, obs: &mut O) -> RunOutcome {
    let n = cells.len();
    let mut phases = 0;
    for sweep in 1..=max_sweeps {
        let mut left = cells[n - 1];
        for i in 0..n {
            let before = cells[i];
            let tr = transition(left, before);
            let after = match tr.result {
                LocalResult::Symbol(s) => s,
                LocalResult::Tie => before,
            };
            cells[i] = after;
            left = after;
            if matches!(tr.case, RuleCase::Kickstart | RuleCase::SwapReset) {
                phases += 1;
            }
            let tied = tr.case == RuleCase::SwapTie;
            let cursor = if tied || i + 1 < n {
                Cursor {
                    sweeps_done: sweep - 1,
                    next_cell: if tied { i } else { i + 1 },
                }
            } else {
                Cursor {
                    sweeps_done: sweep,
                    next_cell: 0,
                }
            };
            let step = Step {
                sweep,
                cursor,
                update: CellUpdate {
                    cell: i,
                    case: tr.case,
                    before,
                    after,
                },
            };
            obs.on_step(&step, cells);
            if tied {
                return RunOutcome {
                    kind: OutcomeKind::Tie,
                    sweeps_used: sweep,
                    propagation_phases: phases,
                };
            }
        }
        obs.on_sweep(sweep, cells);
        if let Some(b) = uniform_base(cells) {
            return RunOutcome {
                kind: OutcomeKind::Classified(b),
                sweeps_used: sweep,
                propagation_phases: phases,
            };
        }
    }
    RunOutcome {
        kind: OutcomeKind::BudgetExceeded,
        sweeps_used: max_sweeps,
        propagation_phases: phases,
    }
}

struct EventLog(Vec<PhaseEvent>);

impl Observer for EventLog {
    fn on_step(&mut self, step: &Step, _cells: &[Symbol]) {
        let u = &step.update;
        if let Some(kind) = u.event() {
            self.0.push(PhaseEvent {
                kind,
                sweep: step.sweep,
                cell: u.cell,
                coord: None,
                detail: (kind != PhaseEventKind::Tie).then_some(u.after),
            });
        }
    }
}

/// Fans one run out to two observers.
pub struct Both<'a, A, B>(pub &'a mut A, pub &'a mut B);

impl<A: Observer, B: Observer> Observer for Both<'_, A, B> {
    fn on_step(&mut self, step: &Step, cells: &[Symbol]) {
        self.0.on_step(step, cells);
        self.1.on_step(step, cells);
    }
    fn on_sweep(&mut self, sweep: usize, cells: &[Symbol]) {
        self.0.on_sweep(sweep, cells);
        self.1.on_sweep(sweep, cells);
    }
}

/// Runs a base-only input to an outcome, collecting phase events and,
/// optionally, a full trace.
pub fn run(ring: &Ring, options: RunOptions) -> Result<RunReport, EngineError> {
    if let Some(i) = ring.cells.iter().position(|s| !s.is_base()) {
        return Err(ConfigError::IntermediateInput(i).into());
    }
    let budget = options.max_sweeps.unwrap_or_else(|| default_budget(ring.len()));
    if budget == 0 {
        return Err(EngineError::ZeroBudget);
    }
    let mut cells = ring.cells.clone();
    let mut log = EventLog(Vec::new());
    let (outcome, trace) = if options.capture_trace {
        let mut rec = crate::trace::Recorder::ring(ring);
        let outcome = drive(&mut cells, budget, &mut Both(&mut log, &mut rec));
        (outcome, Some(rec.finish(outcome, &cells)))
    } else {
        (drive(&mut cells, budget, &mut log), None)
    };
    Ok(RunReport {
        outcome,
        events: log.0,
        final_cells: cells,
        trace,
    })
}
