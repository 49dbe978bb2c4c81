//! The automaton on d-dimensional tori.
//!
//! Cells are scanned in row-major order with the first coordinate varying
//! fastest. The neighbourhood of `(x1, .., xd)` is the corner chain
//! `(x1−1, x2, ..)`, `(x1−1, x2−1, x3, ..)`, .., `(x1−1, .., xd−1)` plus the
//! cell itself, all indices taken modulo the side lengths. The scan-order
//! predecessor of every cell is in that chain, so the head can always be
//! located: its memory is recovered from the intermediate neighbours.
//!
//! Two ways of recovering it are offered. [`SelectionMode::PaperLiteral`]
//! takes the inclusion-largest memory among all intermediate neighbours.
//! Just after a memory reset that can pick up a stale memory from the
//! previous lap, so [`SelectionMode::CounterFiltered`] (the default) only
//! looks at neighbours whose counter differs from the cell being updated,
//! i.e. those already written during the current lap.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::alphabet::{Alphabet, BaseSymbol, Counter, Memory, Symbol, Tape, Triplet};
use crate::engine::{
    default_budget, uniform_base, Both, CellUpdate, ConfigError, Cursor, Observer, OutcomeKind, PhaseEvent,
    PhaseEventKind, RunOptions, RunOutcome, RunReport, Step,
};
use crate::rule::{self, kickstart_symbol, LocalResult, RuleCase, Transition};
use crate::trace::{coordinates, Recorder};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SelectionMode {
    #[default]
    CounterFiltered,
    PaperLiteral,
}

impl fmt::Display for SelectionMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SelectionMode::CounterFiltered => "counter-filtered",
            SelectionMode::PaperLiteral => "paper-literal",
        })
    }
}

impl FromStr for SelectionMode {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "counter-filtered" => Ok(SelectionMode::CounterFiltered),
            "paper-literal" => Ok(SelectionMode::PaperLiteral),
            _ => Err(format!(
                "unknown mode {s:?} (expected counter-filtered or paper-literal)"
            )),
        }
    }
}

/// States on which the d-dimensional rule is not defined.
#[derive(Debug, Error, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum FaultKind {
    #[error("candidate memories are not ordered by inclusion")]
    IncomparableMemories,
    #[error("base neighbours disagree during convergence")]
    InconsistentConvergence,
    #[error("intermediate neighbours of a base cell carry different counters")]
    CounterConflict,
    #[error("no neighbour carries an active memory")]
    NoActiveMemory,
}

#[derive(Debug, Error, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[error("{kind} at sweep {sweep}, cell {coord:?}")]
pub struct RuleFault {
    pub kind: FaultKind,
    pub sweep: usize,
    pub cell: usize,
    pub coord: Vec<usize>,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LocalRuleError {
    #[error("invalid symbol: {0}")]
    InvalidSymbol(#[from] crate::alphabet::AlphabetError),
    #[error(transparent)]
    Fault(#[from] FaultKind),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RunDError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("dimension list must be non-empty with every side at least 1")]
    BadDims,
    #[error("max_sweeps must be at least 1")]
    ZeroBudget,
    #[error("rule fault: {0}")]
    Fault(#[from] RuleFault),
}

pub fn cell_count(dims: &[usize]) -> usize {
    dims.iter().product()
}

pub fn index_of(coord: &[usize], dims: &[usize]) -> usize {
    coord.iter().zip(dims).rev().fold(0, |acc, (&x, &n)| acc * n + x)
}

/// Every coordinate in update order.
pub fn scan_order(dims: &[usize]) -> Vec<Vec<usize>> {
    (0..cell_count(dims)).map(|i| coordinates(i, dims)).collect()
}

/// The `d` corner-chain neighbours of `coord`, followed by `coord` itself.
pub fn neighbors(coord: &[usize], dims: &[usize]) -> Vec<Vec<usize>> {
    let d = dims.len();
    let mut out = Vec::with_capacity(d + 1);
    let mut c = coord.to_vec();
    for j in 0..d {
        c[j] = (c[j] + dims[j] - 1) % dims[j];
        out.push(c.clone());
    }
    out.push(coord.to_vec());
    out
}

/// Flattened neighbour indices: entry `i*d + j` is the `j`-th neighbour
/// of cell `i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NeighborTable {
    d: usize,
    table: Vec<usize>,
}

impl NeighborTable {
    pub fn new(dims: &[usize]) -> NeighborTable {
        let d = dims.len();
        let mut table = Vec::with_capacity(cell_count(dims) * d);
        for i in 0..cell_count(dims) {
            let c = coordinates(i, dims);
            for nb in &neighbors(&c, dims)[..d] {
                table.push(index_of(nb, dims));
            }
        }
        NeighborTable { d, table }
    }

    pub fn of(&self, i: usize) -> &[usize] {
        &self.table[i * self.d..(i + 1) * self.d]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ActiveMemory {
    pub counter: Counter,
    pub memory: Memory,
}

impl ActiveMemory {
    fn head(self) -> Triplet {
        Triplet::new(self.counter, Tape::Removed, self.memory)
    }
}

fn inclusion_max<I: Iterator<Item = Memory> + Clone>(mems: I) -> Option<Memory> {
    let union = mems.clone().fold(Memory::EMPTY, |a, m| Memory(a.0 | m.0));
    mems.clone().any(|m| m == union).then_some(union)
}

fn is_chain(mems: &[Memory]) -> bool {
    let mut sorted = mems.to_vec();
    sorted.sort_by_key(|m| m.len());
    sorted.windows(2).all(|w| w[0].is_subset(w[1]))
}

/// Recovers the head's counter and memory from the neighbours (self
/// excluded). `Ok(None)` when no neighbour qualifies.
pub fn select_active_memory(
    self_sym: Symbol,
    neighbor_syms: &[Symbol],
    mode: SelectionMode,
) -> Result<Option<ActiveMemory>, FaultKind> {
    let intermediate = neighbor_syms.iter().filter_map(|s| s.as_triplet());
    let candidates: Vec<Triplet> = match (mode, self_sym) {
        (SelectionMode::CounterFiltered, Symbol::Triplet(me)) => {
            intermediate.filter(|t| t.counter != me.counter).collect()
        }
        _ => intermediate.collect(),
    };
    let Some(first) = candidates.first() else {
        return Ok(None);
    };
    let memories: Vec<Memory> = candidates.iter().map(|t| t.memory).collect();
    let max = inclusion_max(memories.iter().copied()).ok_or(FaultKind::IncomparableMemories)?;
    let counter = match mode {
        SelectionMode::CounterFiltered => {
            if candidates.iter().any(|t| t.counter != first.counter) {
                return Err(FaultKind::CounterConflict);
            }
            if !is_chain(&memories) {
                return Err(FaultKind::IncomparableMemories);
            }
            first.counter
        }
        SelectionMode::PaperLiteral => {
            candidates
                .iter()
                .find(|t| t.memory == max)
                .expect("maximum is attained")
                .counter
        }
    };
    Ok(Some(ActiveMemory { counter, memory: max }))
}

/// Unchecked d-dimensional dispatch; `neighbor_syms` excludes self.
pub fn transition_d(self_sym: Symbol, neighbor_syms: &[Symbol], mode: SelectionMode) -> Result<Transition, FaultKind> {
    let all_base = self_sym.is_base() && neighbor_syms.iter().all(|s| s.is_base());
    if all_base {
        return Ok(if neighbor_syms.iter().all(|&s| s == self_sym) {
            Transition {
                case: RuleCase::FixedPoint,
                result: LocalResult::Symbol(self_sym),
            }
        } else {
            Transition {
                case: RuleCase::Kickstart,
                result: LocalResult::Symbol(kickstart_symbol(self_sym.as_base().expect("base"))),
            }
        });
    }
    if let Symbol::Triplet(me) = self_sym {
        let mut bases = neighbor_syms.iter().filter_map(|s| s.as_base());
        if let Some(b) = bases.next() {
            if bases.any(|o| o != b) {
                return Err(FaultKind::InconsistentConvergence);
            }
            return Ok(Transition {
                case: RuleCase::Convergence,
                result: LocalResult::Symbol(Symbol::Base(b)),
            });
        }
        let uniform_counter = neighbor_syms
            .iter()
            .all(|s| s.as_triplet().is_some_and(|t| t.counter == me.counter));
        if uniform_counter {
            let memory =
                inclusion_max(neighbor_syms.iter().map(|s| s.memory())).ok_or(FaultKind::IncomparableMemories)?;
            return Ok(rule::swap(Triplet::new(me.counter, Tape::Removed, memory)));
        }
    }
    let head = select_active_memory(self_sym, neighbor_syms, mode)?.ok_or(FaultKind::NoActiveMemory)?;
    Ok(match mode {
        SelectionMode::CounterFiltered => rule::propagate(head.head(), self_sym),
        SelectionMode::PaperLiteral => rule::transition(Symbol::Triplet(head.head()), self_sym),
    })
}

/// Checked form of [`transition_d`].
pub fn apply_local_d(
    self_sym: Symbol,
    neighbor_syms: &[Symbol],
    alphabet: Alphabet,
    mode: SelectionMode,
) -> Result<LocalResult, LocalRuleError> {
    alphabet.check(self_sym)?;
    for &s in neighbor_syms {
        alphabet.check(s)?;
    }
    Ok(transition_d(self_sym, neighbor_syms, mode)?.result)
}

/// A configuration on a d-dimensional torus.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Cuboid {
    dims: Vec<usize>,
    alphabet: Alphabet,
    cells: Vec<Symbol>,
}

fn check_dims(dims: &[usize]) -> Result<(), RunDError> {
    if dims.is_empty() || dims.contains(&0) {
        Err(RunDError::BadDims)
    } else {
        Ok(())
    }
}

impl Cuboid {
    pub fn new(dims: Vec<usize>, cells: Vec<Symbol>, alphabet: Alphabet) -> Result<Cuboid, RunDError> {
        check_dims(&dims)?;
        if cells.len() != cell_count(&dims) {
            return Err(RunDError::BadDims);
        }
        for (cell, &s) in cells.iter().enumerate() {
            alphabet
                .check(s)
                .map_err(|source| ConfigError::InvalidCell { cell, source })?;
        }
        Ok(Cuboid { dims, alphabet, cells })
    }

    /// Grid number `index`, cell 0 least significant.
    pub fn from_index(index: u64, dims: &[usize], alphabet: Alphabet) -> Cuboid {
        Cuboid {
            dims: dims.to_vec(),
            alphabet,
            cells: crate::engine::decode_index(index, cell_count(dims), alphabet),
        }
    }

    /// Builds a grid from rows of digits, each row one scan-order slice of
    /// length `dims[0]`.
    pub fn from_rows(dims: &[usize], rows: &[&str], alphabet: Alphabet) -> Result<Cuboid, RunDError> {
        let cells = crate::engine::parse_digits(&rows.concat(), alphabet)?;
        Cuboid::new(dims.to_vec(), cells, alphabet)
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    pub fn cells(&self) -> &[Symbol] {
        &self.cells
    }

    pub fn get(&self, coord: &[usize]) -> Symbol {
        self.cells[index_of(coord, &self.dims)]
    }

    /// Serializes to the grid file format (base cells only).
    pub fn to_grid_file(&self) -> String {
        let dims: Vec<String> = self.dims.iter().map(usize::to_string).collect();
        let mut out = format!("dims: {}\nalphabet: {}\n", dims.join(" x "), self.alphabet);
        for row in self.cells.chunks(self.dims[0]) {
            for s in row {
                out.push_str(&s.to_string());
            }
            out.push('\n');
        }
        out
    }
}

impl fmt::Display for Cuboid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, row) in self.cells.chunks(self.dims[0]).enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            f.write_str(&crate::engine::format_cells(row))?;
        }
        Ok(())
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("grid file line {line}, column {column}: {message}")]
pub struct GridParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

/// Splits `key: value`, returning the line number, the 1-based column of
/// the value and the value itself.
fn header<'a>(line: Option<(usize, &'a str)>, key: &str) -> Result<(usize, usize, &'a str), GridParseError> {
    let (no, l) = line.ok_or_else(|| GridParseError {
        line: 0,
        column: 0,
        message: format!("missing `{key}:` line"),
    })?;
    let col = l.len() - l.trim_start().len() + 1;
    let rest = l
        .trim_start()
        .strip_prefix(key)
        .and_then(|r| r.trim_start().strip_prefix(':'))
        .ok_or_else(|| GridParseError {
            line: no,
            column: col,
            message: format!("expected `{key}:`"),
        })?;
    Ok((no, l.len() - rest.len() + 1, rest))
}

/// Parses a grid file:
///
/// ```text
/// dims: 3 x 3
/// alphabet: 3
/// 010
/// 122
/// 220
/// ```
///
/// Blank lines are ignored and digits within a row may be spaced out.
pub fn parse_grid(text: &str) -> Result<Cuboid, GridParseError> {
    let err = |line: usize, column: usize, message: String| GridParseError { line, column, message };
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l))
        .filter(|(_, l)| !l.trim().is_empty());

    let (dims_line, dims_col, rest) = header(lines.next(), "dims")?;
    let mut dims = Vec::new();
    let mut offset = dims_col;
    for part in rest.split(['x', 'X']) {
        let lead = part.len() - part.trim_start().len();
        let tok = part.trim();
        let n: usize = tok
            .parse()
            .ok()
            .filter(|&n| n >= 1)
            .ok_or_else(|| err(dims_line, offset + lead, format!("bad side length {tok:?}")))?;
        dims.push(n);
        offset += part.len() + 1;
    }

    let (k_line, k_col, rest) = header(lines.next(), "alphabet")?;
    let lead = rest.len() - rest.trim_start().len();
    let k: usize = rest
        .trim()
        .parse()
        .map_err(|_| err(k_line, k_col + lead, format!("bad alphabet size {:?}", rest.trim())))?;
    let alphabet = Alphabet::new(k).map_err(|e| err(k_line, k_col + lead, e.to_string()))?;

    let width = dims[0];
    let rows_needed = cell_count(&dims) / width;
    let mut cells = Vec::with_capacity(cell_count(&dims));
    let mut rows = 0;
    let mut last_line = k_line;
    for (no, l) in lines {
        last_line = no;
        if rows == rows_needed {
            return Err(err(no, 1, format!("expected {rows_needed} rows, found more")));
        }
        let mut row = 0;
        for (ci, ch) in l.char_indices() {
            if ch.is_whitespace() {
                continue;
            }
            let b = BaseSymbol::from_digit(ch)
                .filter(|&b| alphabet.contains(b))
                .ok_or_else(|| err(no, ci + 1, format!("{ch:?} is not a digit below {k}")))?;
            if row == width {
                return Err(err(no, ci + 1, format!("row longer than {width}")));
            }
            cells.push(Symbol::Base(b));
            row += 1;
        }
        if row != width {
            return Err(err(no, l.len() + 1, format!("row has {row} cells, expected {width}")));
        }
        rows += 1;
    }
    if rows != rows_needed {
        return Err(err(
            last_line + 1,
            1,
            format!("expected {rows_needed} rows, found {rows}"),
        ));
    }
    Ok(Cuboid { dims, alphabet, cells })
}

/// Hot loop for d-dimensional runs. Same termination rules as the ring.
pub fn drive_d<O: Observer>(
    cells: &mut [Symbol],
    dims: &[usize],
    table: &NeighborTable,
    max_sweeps: usize,
    mode: SelectionMode,
    obs: &mut O,
) -> Result<RunOutcome, RuleFault> {
    let n = cells.len();
    let mut phases = 0;
    let mut buf: Vec<Symbol> = Vec::with_capacity(dims.len());
    for sweep in 1..=max_sweeps {
        for i in 0..n {
            buf.clear();
            buf.extend(table.of(i).iter().map(|&j| cells[j]));
            let before = cells[i];
            let tr = transition_d(before, &buf, mode).map_err(|kind| RuleFault {
                kind,
                sweep,
                cell: i,
                coord: coordinates(i, dims),
            })?;
            let after = tr.result.symbol().unwrap_or(before);
            cells[i] = after;
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
                return Ok(RunOutcome {
                    kind: OutcomeKind::Tie,
                    sweeps_used: sweep,
                    propagation_phases: phases,
                });
            }
        }
        obs.on_sweep(sweep, cells);
        if let Some(b) = uniform_base(cells) {
            return Ok(RunOutcome {
                kind: OutcomeKind::Classified(b),
                sweeps_used: sweep,
                propagation_phases: phases,
            });
        }
    }
    Ok(RunOutcome {
        kind: OutcomeKind::BudgetExceeded,
        sweeps_used: max_sweeps,
        propagation_phases: phases,
    })
}

struct EventLogD<'a> {
    dims: &'a [usize],
    events: Vec<PhaseEvent>,
}

impl Observer for EventLogD<'_> {
    fn on_step(&mut self, step: &Step, _cells: &[Symbol]) {
        let u = &step.update;
        if let Some(kind) = u.event() {
            self.events.push(PhaseEvent {
                kind,
                sweep: step.sweep,
                cell: u.cell,
                coord: Some(coordinates(u.cell, self.dims)),
                detail: (kind != PhaseEventKind::Tie).then_some(u.after),
            });
        }
    }
}

/// Runs a base-only grid. The default budget is `N + 4` sweeps for `N`
/// cells.
pub fn run_d(grid: &Cuboid, options: RunOptions, mode: SelectionMode) -> Result<RunReport, RunDError> {
    if let Some(i) = grid.cells.iter().position(|s| !s.is_base()) {
        return Err(ConfigError::IntermediateInput(i).into());
    }
    let budget = options.max_sweeps.unwrap_or_else(|| default_budget(grid.cells.len()));
    if budget == 0 {
        return Err(RunDError::ZeroBudget);
    }
    let table = NeighborTable::new(&grid.dims);
    let mut cells = grid.cells.clone();
    let mut log = EventLogD {
        dims: &grid.dims,
        events: Vec::new(),
    };
    let (outcome, trace) = if options.capture_trace {
        let mut rec = Recorder::new(grid.dims.clone(), grid.cells.clone());
        let outcome = drive_d(
            &mut cells,
            &grid.dims,
            &table,
            budget,
            mode,
            &mut Both(&mut log, &mut rec),
        )?;
        (outcome, Some(rec.finish(outcome, &cells)))
    } else {
        (drive_d(&mut cells, &grid.dims, &table, budget, mode, &mut log)?, None)
    };
    Ok(RunReport {
        outcome,
        events: log.events,
        final_cells: cells,
        trace,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(c: Counter, tape: Option<u8>, mem: &[u8]) -> Symbol {
        let tape = tape.map_or(Tape::Removed, |b| Tape::Symbol(BaseSymbol(b)));
        Symbol::triplet(c, tape, Memory::from_symbols(mem.iter().copied()))
    }
    use Counter::{Even as E, Odd as O};
    const X: Option<u8> = None;

    #[test]
    fn scan_order_3x3() {
        let order = scan_order(&[3, 3]);
        let expect: Vec<Vec<usize>> = vec![
            vec![0, 0],
            vec![1, 0],
            vec![2, 0],
            vec![0, 1],
            vec![1, 1],
            vec![2, 1],
            vec![0, 2],
            vec![1, 2],
            vec![2, 2],
        ];
        assert_eq!(order, expect);
    }

    #[test]
    fn neighbor_examples() {
        assert_eq!(neighbors(&[0, 0], &[3, 3]), vec![vec![2, 0], vec![2, 2], vec![0, 0]]);
        assert_eq!(neighbors(&[1, 1], &[3, 3]), vec![vec![0, 1], vec![0, 0], vec![1, 1]]);
        assert_eq!(
            neighbors(&[0, 0, 0], &[2, 2, 2]),
            vec![vec![1, 0, 0], vec![1, 1, 0], vec![1, 1, 1], vec![0, 0, 0]]
        );
    }

    #[test]
    fn predecessor_is_always_a_neighbor() {
        for dims in [
            vec![3, 3],
            vec![2, 3, 4],
            vec![1, 4],
            vec![4, 1],
            vec![5],
            vec![2, 2, 2, 2],
        ] {
            let table = NeighborTable::new(&dims);
            let n = cell_count(&dims);
            for i in 0..n {
                let pred = (i + n - 1) % n;
                assert!(table.of(i).contains(&pred), "{dims:?} cell {i}");
            }
        }
    }

    #[test]
    fn selection_examples() {
        let sel = select_active_memory(
            Symbol::base(0),
            &[t(O, X, &[1]), Symbol::base(2)],
            SelectionMode::default(),
        )
        .unwrap()
        .unwrap();
        assert_eq!(
            sel,
            ActiveMemory {
                counter: O,
                memory: Memory::from_symbols([1])
            }
        );

        let me = t(O, X, &[0, 1]);
        let nb = [t(E, X, &[]), t(O, Some(1), &[0, 1])];
        let sel = select_active_memory(me, &nb, SelectionMode::CounterFiltered)
            .unwrap()
            .unwrap();
        assert_eq!(
            sel,
            ActiveMemory {
                counter: E,
                memory: Memory::EMPTY
            }
        );
        let lit = select_active_memory(me, &nb, SelectionMode::PaperLiteral)
            .unwrap()
            .unwrap();
        assert_eq!(
            lit,
            ActiveMemory {
                counter: O,
                memory: Memory::from_symbols([0, 1])
            }
        );

        assert_eq!(
            select_active_memory(
                Symbol::base(0),
                &[Symbol::base(0), Symbol::base(0)],
                SelectionMode::default()
            ),
            Ok(None)
        );
    }

    #[test]
    fn selection_faults() {
        let nb = [t(O, X, &[0]), t(O, X, &[1])];
        for mode in [SelectionMode::CounterFiltered, SelectionMode::PaperLiteral] {
            assert_eq!(
                select_active_memory(Symbol::base(2), &nb, mode),
                Err(FaultKind::IncomparableMemories)
            );
        }
        let mixed = [t(O, X, &[0]), t(E, X, &[0, 1])];
        assert_eq!(
            select_active_memory(Symbol::base(2), &mixed, SelectionMode::CounterFiltered),
            Err(FaultKind::CounterConflict)
        );
        // has a maximum but not a chain
        let three = [t(O, X, &[0]), t(O, X, &[1]), t(O, X, &[0, 1])];
        assert_eq!(
            select_active_memory(Symbol::base(2), &three, SelectionMode::CounterFiltered),
            Err(FaultKind::IncomparableMemories)
        );
        assert!(select_active_memory(Symbol::base(2), &three, SelectionMode::PaperLiteral).is_ok());
    }

    #[test]
    fn grid3x3_first_updates() {
        let three = Alphabet::new(3).unwrap();
        let mode = SelectionMode::default();
        // (1,0): neighbours (0,0)=0 and (0,2)=2
        assert_eq!(
            apply_local_d(Symbol::base(1), &[Symbol::base(0), Symbol::base(2)], three, mode).unwrap(),
            LocalResult::Symbol(t(O, X, &[1]))
        );
        // (0,1): neighbours (2,1)=2 and the freshly written (2,0)
        assert_eq!(
            apply_local_d(Symbol::base(1), &[Symbol::base(2), t(O, X, &[0, 1])], three, mode).unwrap(),
            LocalResult::Symbol(t(O, Some(1), &[0, 1]))
        );
        // (0,0) unchanged
        assert_eq!(
            apply_local_d(Symbol::base(0), &[Symbol::base(0), Symbol::base(0)], three, mode).unwrap(),
            LocalResult::Symbol(Symbol::base(0))
        );
    }

    #[test]
    fn inconsistent_convergence_is_a_fault() {
        assert_eq!(
            transition_d(
                t(O, X, &[]),
                &[Symbol::base(0), Symbol::base(1)],
                SelectionMode::default()
            ),
            Err(FaultKind::InconsistentConvergence)
        );
    }

    #[test]
    fn grid_runs() {
        let three = Alphabet::new(3).unwrap();
        let g = Cuboid::from_rows(&[3, 3], &["010", "122", "220"], three).unwrap();
        let rep = run_d(&g, RunOptions::default(), SelectionMode::default()).unwrap();
        assert_eq!(rep.outcome.kind, OutcomeKind::Classified(BaseSymbol(2)));

        let ones = Cuboid::from_rows(&[4, 4], &["1111"; 4], Alphabet::BINARY).unwrap();
        let rep = run_d(&ones, RunOptions::default(), SelectionMode::default()).unwrap();
        assert_eq!(rep.outcome.kind, OutcomeKind::Classified(BaseSymbol(1)));
        assert_eq!(rep.outcome.sweeps_used, 1);

        let tie = Cuboid::from_rows(&[2, 2], &["01", "10"], Alphabet::BINARY).unwrap();
        let rep = run_d(&tie, RunOptions::default(), SelectionMode::default()).unwrap();
        assert_eq!(rep.outcome.kind, OutcomeKind::Tie);
    }

    #[test]
    fn grid_file_parsing() {
        let g = parse_grid("dims: 3 x 3\nalphabet: 3\n010\n1 2 2\n\n220\n").unwrap();
        assert_eq!(g.dims(), &[3, 3]);
        assert_eq!(g.get(&[1, 0]), Symbol::base(1));
        assert_eq!(g.get(&[0, 2]), Symbol::base(2));
        assert_eq!(parse_grid(&g.to_grid_file()).unwrap(), g);

        let e = parse_grid("dims: 3 x 3\nalphabet: 2\n010\n122\n220\n").unwrap_err();
        assert_eq!((e.line, e.column), (4, 2));
        let e = parse_grid("dims: 3 x 0\nalphabet: 2\n").unwrap_err();
        assert_eq!(e.line, 1);
        let e = parse_grid("dims: 2 x 2\nalphabet: 2\n01\n").unwrap_err();
        assert_eq!(e.line, 4);
        let e = parse_grid("dim: 2\n").unwrap_err();
        assert_eq!((e.line, e.column), (1, 1));
        let e = parse_grid("dims: 2\nalphabet: 2\n011\n").unwrap_err();
        assert_eq!((e.line, e.column), (3, 3));
        let e = parse_grid("dims: 2 x 2 x 2\nalphabet: 2\n01\n01\n01\n").unwrap_err();
        assert!(e.message.contains("expected 4 rows"));
    }
}
