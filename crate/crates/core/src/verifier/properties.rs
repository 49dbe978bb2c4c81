//! Instrumented runs checking conservation, residual counts and the phase count.
//!
//! For each base symbol `b` let `q_b` be the number of cells whose tape
//! holds `b` plus one if `b` is in the active memory (the memory of the
//! most recently updated cell). Up to the first memory swap that starts
//! convergence:
//!
//! * every update other than a memory reset leaves `q` unchanged;
//! * after `p` resets, `q_b = max(|x|_b − p, 0)`.
//!
//! On an input with a strict majority the run has exactly one kickstart
//! (none if the input is uniform) and `s + 1` propagation phases, `s`
//! being the second largest symbol count. In the binary case `s` is
//! `min(|x|_0, |x|_1)`.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::alphabet::{Alphabet, BaseSymbol, Memory, Symbol};
use crate::compiled::CompiledRule;
use crate::engine::{decode_index, default_budget, drive, Observer, OutcomeKind, RunOutcome, Step};
use crate::oracle::{count_symbols, verdict_from_counts, Verdict};
use crate::rule::RuleCase;

use super::{digits, pool, space_size, VerifyError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Property {
    /// `q` is unchanged by every update except a memory reset.
    Conservation,
    /// `q_b = max(|x|_b − p, 0)` after `p` resets.
    ResidualCounts,
    /// Phase count equals second-largest count plus one.
    PhaseCount,
    /// Exactly one kickstart on non-uniform inputs, none on uniform ones.
    Kickstart,
    /// The run classifies the majority symbol.
    Classification,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub property: Property,
    pub size: usize,
    pub index: u64,
    pub input: String,
    /// 1-based sweep and cell of the offending update, when there is one.
    pub sweep: Option<usize>,
    pub cell: Option<usize>,
    pub detail: String,
}

/// Phase count predicted from symbol counts.
pub fn predicted_phases(counts: &[usize]) -> usize {
    let mut sorted: Vec<usize> = counts.iter().copied().filter(|&c| c > 0).collect();
    if sorted.len() < 2 {
        return 0;
    }
    sorted.sort_unstable_by(|a, b| b.cmp(a));
    sorted[1] + 1
}

/// Packs per-symbol counts of at most 3 into two bits each.
fn packed(tape: Option<BaseSymbol>, active: Memory) -> u64 {
    let mut x = active.0 as u64;
    x = (x | x << 16) & 0x0000_ffff_0000_ffff;
    x = (x | x << 8) & 0x00ff_00ff_00ff_00ff;
    x = (x | x << 4) & 0x0f0f_0f0f_0f0f_0f0f;
    x = (x | x << 2) & 0x3333_3333_3333_3333;
    x = (x | x << 1) & 0x5555_5555_5555_5555;
    x + tape.map_or(0, |b| 1 << (2 * b.0))
}

/// Whether updating `current` next to `left` conserves `q`. The active
/// memory before the update is the left neighbour's.
fn conserves(left: Symbol, current: Symbol, after: Symbol) -> bool {
    packed(current.tape_symbol(), left.memory()) == packed(after.tape_symbol(), after.memory())
}

/// Per-run bookkeeping shared by both instrumented engines.
struct Tracker<'a> {
    input: &'a [Symbol],
    index: u64,
    counts: Vec<usize>,
    resets: usize,
    kickstarts: usize,
    converged: bool,
    steps: u64,
    violations: Vec<Violation>,
}

impl<'a> Tracker<'a> {
    fn new(input: &'a [Symbol], index: u64, counts: Vec<usize>) -> Self {
        Tracker {
            input,
            index,
            counts,
            resets: 0,
            kickstarts: 0,
            converged: false,
            steps: 0,
            violations: Vec::new(),
        }
    }

    fn violate(&mut self, property: Property, at: Option<(usize, usize)>, detail: impl FnOnce() -> String) {
        if self.violations.iter().any(|v| v.property == property) {
            return;
        }
        self.violations.push(Violation {
            property,
            size: self.input.len(),
            index: self.index,
            input: digits(self.input),
            sweep: at.map(|a| a.0),
            cell: at.map(|a| a.1),
            detail: detail(),
        });
    }

    /// Compares `q` against the residual counts. Conservation is checked on
    /// every update, so doing this at the start and after each reset covers
    /// every step.
    fn check_residual(&mut self, q: Vec<usize>, at: Option<(usize, usize)>) {
        let resets = self.resets;
        if q.iter().zip(&self.counts).any(|(&q, &x)| q != x.saturating_sub(resets)) {
            let counts = self.counts.clone();
            self.violate(Property::ResidualCounts, at, || {
                format!("q={q:?} after {resets} resets, counts {counts:?}")
            });
        }
    }

    /// Returns whether the update is still covered by the conservation check.
    fn begin(&mut self, case: RuleCase) -> bool {
        self.steps += 1;
        self.kickstarts += usize::from(case == RuleCase::Kickstart);
        !(self.converged || case == RuleCase::SwapTie)
    }

    fn finish(mut self, outcome: RunOutcome) -> InputCheck {
        let counts = self.counts.clone();
        let uniform = counts.iter().filter(|&&c| c > 0).count() == 1;
        if self.kickstarts != usize::from(!uniform) {
            let k = self.kickstarts;
            self.violate(Property::Kickstart, None, || format!("{k} kickstarts"));
        }
        if let Verdict::Majority(b) = verdict_from_counts(counts.clone()).verdict {
            let predicted = predicted_phases(&counts);
            if outcome.propagation_phases != predicted {
                let p = outcome.propagation_phases;
                self.violate(Property::PhaseCount, None, || {
                    format!("{p} phases, predicted {predicted}")
                });
            }
            if outcome.kind != OutcomeKind::Classified(b) {
                self.violate(Property::Classification, None, || {
                    format!("{}, majority {b}", outcome.kind)
                });
            }
        }
        InputCheck {
            outcome,
            steps: self.steps,
            violations: self.violations,
        }
    }
}

fn q_of(cells: &[Symbol], active: Memory, k: usize) -> Vec<usize> {
    let mut q = vec![0; k];
    for b in cells.iter().filter_map(|s| s.tape_symbol()).chain(active.iter()) {
        q[b.0 as usize] += 1;
    }
    q
}

/// Reference instrumentation through the engine's observer hook.
struct PropertyObserver<'a> {
    t: Tracker<'a>,
    k: usize,
}

impl Observer for PropertyObserver<'_> {
    fn on_step(&mut self, step: &Step, cells: &[Symbol]) {
        let u = step.update;
        if !self.t.begin(u.case) {
            return;
        }
        let at = Some((step.sweep, u.cell));
        // On a single cell the left neighbour is the cell itself.
        let left = if cells.len() == 1 {
            u.before
        } else {
            cells[(u.cell + cells.len() - 1) % cells.len()]
        };
        match u.case {
            RuleCase::SwapReset => {
                self.t.resets += 1;
                self.t.check_residual(q_of(cells, u.after.memory(), self.k), at);
            }
            _ if !conserves(left, u.before, u.after) => {
                self.t.violate(Property::Conservation, at, || {
                    format!("{} turned {left} {} into {}", u.case, u.before, u.after)
                });
            }
            RuleCase::SwapConverge => self.t.converged = true,
            _ => {}
        }
    }
}

/// Result of one instrumented run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InputCheck {
    pub outcome: RunOutcome,
    pub steps: u64,
    pub violations: Vec<Violation>,
}

/// Runs inputs with the property instrumentation, through a compiled rule
/// table when the alphabet is small enough.
#[derive(Debug, Clone)]
pub struct Checker {
    alphabet: Alphabet,
    compiled: Option<Compiled>,
}

#[derive(Debug, Clone)]
struct Compiled {
    rule: CompiledRule,
    /// Per pair: [`SPECIAL`] and [`LEAKS`] bits, zero for ordinary updates.
    flags: Vec<u8>,
    tape: Vec<Option<BaseSymbol>>,
}

/// Pair flag: a case the tracker counts.
const SPECIAL: u8 = 1;
/// Pair flag: a non-reset update that changes `q`.
const LEAKS: u8 = 2;

impl Checker {
    pub fn new(alphabet: Alphabet) -> Checker {
        let compiled = CompiledRule::new(alphabet).map(|rule| {
            let m = rule.symbols().len();
            let flags = (0..m * m)
                .map(|pair| {
                    let (l, c) = rule.unpair(pair);
                    let (after, case) = rule.lookup(pair);
                    let special = matches!(
                        case,
                        RuleCase::Kickstart | RuleCase::SwapReset | RuleCase::SwapConverge | RuleCase::SwapTie
                    );
                    let leaks = case != RuleCase::SwapReset && !conserves(l, c, rule.decode(after));
                    (u8::from(special) * SPECIAL) | (u8::from(leaks) * LEAKS)
                })
                .collect();
            let tape = rule.symbols().iter().map(|s| s.tape_symbol()).collect();
            Compiled { rule, flags, tape }
        });
        Checker { alphabet, compiled }
    }

    /// Instrumented run of a base-only input. `index` only labels
    /// violations.
    pub fn check(&self, input: &[Symbol], index: u64) -> InputCheck {
        match &self.compiled {
            Some(c) => self.check_compiled(c, input, index),
            None => self.check_stepwise(input, index),
        }
    }

    /// Same as [`Checker::check`] through the observer hook of the
    /// symbolic engine.
    pub fn check_stepwise(&self, input: &[Symbol], index: u64) -> InputCheck {
        let k = self.alphabet.size();
        let mut obs = PropertyObserver {
            t: self.tracker(input, index),
            k,
        };
        obs.t.check_residual(q_of(input, Memory::EMPTY, k), None);
        let mut cells = input.to_vec();
        let outcome = drive(&mut cells, default_budget(input.len()), &mut obs);
        obs.t.finish(outcome)
    }

    fn tracker<'a>(&self, input: &'a [Symbol], index: u64) -> Tracker<'a> {
        let base: Vec<_> = input.iter().map(|s| s.as_base().expect("base input")).collect();
        Tracker::new(input, index, count_symbols(&base, self.alphabet))
    }

    fn check_compiled(&self, c: &Compiled, input: &[Symbol], index: u64) -> InputCheck {
        let k = self.alphabet.size();
        let mut t = self.tracker(input, index);
        t.check_residual(q_of(input, Memory::EMPTY, k), None);
        let mut ids: Vec<u16> = input.iter().map(|&s| c.rule.encode(s).expect("valid input")).collect();
        let outcome = c.rule.drive(&mut ids, default_budget(input.len()), &mut |st, cells| {
            let flags = c.flags[st.pair];
            if flags == 0 {
                t.steps += 1;
                return;
            }
            if !t.begin(st.case) {
                return;
            }
            let at = Some((st.sweep, st.cell));
            if st.case == RuleCase::SwapReset {
                t.resets += 1;
                let mut q = vec![0; k];
                for b in cells.iter().filter_map(|&id| c.tape[id as usize]) {
                    q[b.0 as usize] += 1;
                }
                t.check_residual(q, at);
            } else if flags & LEAKS != 0 {
                let (l, cur) = c.rule.unpair(st.pair);
                t.violate(Property::Conservation, at, || {
                    format!("{} turned {l} {cur} into {}", st.case, c.rule.decode(cells[st.cell]))
                });
            }
            t.converged = st.case == RuleCase::SwapConverge;
        });
        t.finish(outcome)
    }
}

/// Instrumented run of a base-only input. `index` only labels violations.
pub fn check_input(input: &[Symbol], index: u64, alphabet: Alphabet) -> InputCheck {
    Checker::new(alphabet).check(input, index)
}

/// The `i`-th random input of size `n` for a given seed. Independent of
/// the order in which inputs are drawn.
pub fn sample_input(seed: u64, n: usize, i: u64, alphabet: Alphabet) -> Vec<Symbol> {
    let mut key = [0u8; 32];
    key[..8].copy_from_slice(&seed.to_le_bytes());
    key[8..16].copy_from_slice(&(n as u64).to_le_bytes());
    key[16..24].copy_from_slice(&i.to_le_bytes());
    let mut rng = ChaCha8Rng::from_seed(key);
    let k = alphabet.size() as u8;
    (0..n).map(|_| Symbol::base(rng.gen_range(0..k))).collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SampleSpec {
    pub alphabet: Alphabet,
    pub sizes: Vec<usize>,
    pub samples: u64,
    pub seed: u64,
}

impl Default for SampleSpec {
    fn default() -> Self {
        SampleSpec {
            alphabet: Alphabet::BINARY,
            sizes: Vec::new(),
            samples: 0,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SizeProperties {
    pub exhaustive: bool,
    pub inputs: u64,
    pub ties: u64,
    pub steps: u64,
    pub violations: u64,
    pub max_phases: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PropertyReport {
    pub alphabet: usize,
    pub seed: u64,
    pub exhaustive_n_max: usize,
    pub samples_per_size: u64,
    pub inputs_checked: u64,
    pub violation_count: u64,
    pub per_size: BTreeMap<usize, SizeProperties>,
    /// The first violations in (size, index) order.
    pub violations: Vec<Violation>,
}

const VIOLATION_LIMIT: usize = 100;

impl PropertyReport {
    pub fn is_clean(&self) -> bool {
        self.violation_count == 0
    }

    fn empty(spec: &SampleSpec, n_max: usize) -> PropertyReport {
        PropertyReport {
            alphabet: spec.alphabet.size(),
            seed: spec.seed,
            exhaustive_n_max: n_max,
            samples_per_size: spec.samples,
            inputs_checked: 0,
            violation_count: 0,
            per_size: BTreeMap::new(),
            violations: Vec::new(),
        }
    }

    fn add(&mut self, exhaustive: bool, input: &[Symbol], check: InputCheck) {
        let s = self.per_size.entry(input.len()).or_default();
        s.exhaustive = exhaustive;
        s.inputs += 1;
        s.steps += check.steps;
        if check.outcome.kind == OutcomeKind::Tie {
            s.ties += 1;
        } else {
            s.max_phases = s.max_phases.max(check.outcome.propagation_phases);
        }
        s.violations += check.violations.len() as u64;
        self.inputs_checked += 1;
        self.violation_count += check.violations.len() as u64;
        self.violations.extend(check.violations);
        self.trim();
    }

    fn trim(&mut self) {
        self.violations.sort_by_key(|v| (v.size, v.index, v.property));
        self.violations.truncate(VIOLATION_LIMIT);
    }

    fn merge(mut self, o: PropertyReport) -> PropertyReport {
        self.inputs_checked += o.inputs_checked;
        self.violation_count += o.violation_count;
        for (n, s) in o.per_size {
            let e = self.per_size.entry(n).or_default();
            e.exhaustive |= s.exhaustive;
            e.inputs += s.inputs;
            e.ties += s.ties;
            e.steps += s.steps;
            e.violations += s.violations;
            e.max_phases = e.max_phases.max(s.max_phases);
        }
        self.violations.extend(o.violations);
        self.trim();
        self
    }
}

impl std::fmt::Display for PropertyReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "alphabet: {}, seed: {}", self.alphabet, self.seed)?;
        writeln!(
            f,
            "{:>6} {:>5} {:>8} {:>7} {:>13} {:>10}",
            "size", "mode", "inputs", "ties", "steps", "violations"
        )?;
        for (n, s) in &self.per_size {
            let mode = if s.exhaustive { "all" } else { "rand" };
            writeln!(
                f,
                "{n:>6} {mode:>5} {:>8} {:>7} {:>13} {:>10}",
                s.inputs, s.ties, s.steps, s.violations
            )?;
        }
        for v in &self.violations {
            let at = match (v.sweep, v.cell) {
                (Some(s), Some(c)) => format!(" at sweep {s}, cell {c}"),
                _ => String::new(),
            };
            writeln!(f, "VIOLATION {:?} on {}{at}: {}", v.property, v.input, v.detail)?;
        }
        write!(
            f,
            "inputs: {}, violations: {}",
            self.inputs_checked, self.violation_count
        )
    }
}

/// Every input of size `1..=n_max_exhaustive`, then `spec.samples` random
/// inputs of each size in `spec.sizes`.
pub fn check_properties(
    n_max_exhaustive: usize,
    spec: &SampleSpec,
    workers: usize,
) -> Result<PropertyReport, VerifyError> {
    let alphabet = spec.alphabet;
    let mut tasks: Vec<(bool, usize, u64, u64)> = Vec::new();
    const CHUNK: u64 = 1 << 10;
    for n in 1..=n_max_exhaustive {
        let total = space_size(alphabet.size(), n)
            .filter(|&t| t <= super::DEFAULT_RING_CAP)
            .ok_or(VerifyError::SpaceTooLarge {
                size: format!("{}^{n}", alphabet.size()),
                cap: super::DEFAULT_RING_CAP,
            })?;
        tasks.extend(
            (0..total)
                .step_by(CHUNK as usize)
                .map(|lo| (true, n, lo, (lo + CHUNK).min(total))),
        );
    }
    for &n in &spec.sizes {
        let chunk = (CHUNK / n.max(1) as u64).max(1);
        tasks.extend(
            (0..spec.samples)
                .step_by(chunk as usize)
                .map(|lo| (false, n, lo, (lo + chunk).min(spec.samples))),
        );
    }
    let report = pool(workers)?.install(|| {
        tasks
            .par_iter()
            .map(|&(exhaustive, n, lo, hi)| {
                let mut r = PropertyReport::empty(spec, n_max_exhaustive);
                let checker = Checker::new(alphabet);
                for i in lo..hi {
                    let input = if exhaustive {
                        decode_index(i, n, alphabet)
                    } else {
                        sample_input(spec.seed, n, i, alphabet)
                    };
                    let check = checker.check(&input, i);
                    r.add(exhaustive, &input, check);
                }
                r
            })
            .reduce(|| PropertyReport::empty(spec, n_max_exhaustive), PropertyReport::merge)
    });
    Ok(report)
}
