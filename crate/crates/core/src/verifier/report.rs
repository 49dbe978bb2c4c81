//! Verification reports and their associative merge.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::engine::OutcomeKind;
use crate::multidim::{FaultKind, SelectionMode};
use crate::oracle::Verdict;

/// What the automaton did on one input.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Observed {
    Outcome(OutcomeKind),
    Fault(FaultKind),
}

impl fmt::Display for Observed {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Observed::Outcome(k) => write!(f, "{k}"),
            Observed::Fault(k) => write!(f, "FAULT {}", serde_json::to_string(k).unwrap().trim_matches('"')),
        }
    }
}

/// A counterexample.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Failure {
    /// Number of cells.
    pub size: usize,
    pub index: u64,
    /// Cells 0..n as digits; grid rows are separated by `/`.
    pub input: String,
    pub expected: Verdict,
    pub observed: Observed,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SizeStats {
    pub checked: u64,
    pub classified_correct: u64,
    pub classified_wrong: u64,
    pub ties_seen: u64,
    pub budget_exceeded: u64,
    pub max_sweeps: usize,
    /// Over inputs with a strict majority.
    pub max_phases: usize,
}

impl SizeStats {
    fn merge(&mut self, o: &SizeStats) {
        self.checked += o.checked;
        self.classified_correct += o.classified_correct;
        self.classified_wrong += o.classified_wrong;
        self.ties_seen += o.ties_seen;
        self.budget_exceeded += o.budget_exceeded;
        self.max_sweeps = self.max_sweeps.max(o.max_sweeps);
        self.max_phases = self.max_phases.max(o.max_phases);
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Space {
    Ring {
        n_min: usize,
        n_max: usize,
        alphabet: usize,
    },
    Grid {
        dims: Vec<usize>,
        alphabet: usize,
        mode: SelectionMode,
    },
}

impl fmt::Display for Space {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Space::Ring { n_min, n_max, alphabet } => write!(f, "rings n={n_min}..{n_max}, |S|={alphabet}"),
            Space::Grid { dims, alphabet, mode } => {
                let d: Vec<String> = dims.iter().map(usize::to_string).collect();
                write!(f, "grids {}, |S|={alphabet}, {mode}", d.join("x"))
            }
        }
    }
}

/// Counters for a set of inputs. Merging is associative and commutative,
/// so shards can be combined in any order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Tally {
    pub checked: u64,
    pub classified_correct: u64,
    pub classified_wrong: u64,
    pub ties_seen: u64,
    /// Keyed by the observed outcome on tie inputs.
    pub tie_outcomes: BTreeMap<String, u64>,
    pub budget_exceeded: u64,
    pub rule_faults: BTreeMap<FaultKind, u64>,
    pub max_sweeps_observed: usize,
    pub max_phase_count_observed: usize,
    pub per_size: BTreeMap<usize, SizeStats>,
    pub failures: Vec<Failure>,
    pub failure_limit: usize,
}

impl Tally {
    pub fn new(failure_limit: usize) -> Tally {
        Tally {
            checked: 0,
            classified_correct: 0,
            classified_wrong: 0,
            ties_seen: 0,
            tie_outcomes: BTreeMap::new(),
            budget_exceeded: 0,
            rule_faults: BTreeMap::new(),
            max_sweeps_observed: 0,
            max_phase_count_observed: 0,
            per_size: BTreeMap::new(),
            failures: Vec::new(),
            failure_limit,
        }
    }

    /// Books one input. `render` is only called for failures.
    #[allow(clippy::too_many_arguments)]
    pub fn record(
        &mut self,
        size: usize,
        index: u64,
        expected: &Verdict,
        observed: Observed,
        sweeps: usize,
        phases: usize,
        render: impl FnOnce() -> String,
    ) {
        let stats = self.per_size.entry(size).or_default();
        self.checked += 1;
        stats.checked += 1;
        stats.max_sweeps = stats.max_sweeps.max(sweeps);
        self.max_sweeps_observed = self.max_sweeps_observed.max(sweeps);
        if let Observed::Fault(kind) = observed {
            *self.rule_faults.entry(kind).or_default() += 1;
        }
        let wrong = match expected {
            Verdict::Tie => {
                self.ties_seen += 1;
                stats.ties_seen += 1;
                *self.tie_outcomes.entry(observed.to_string()).or_default() += 1;
                false
            }
            Verdict::Majority(b) => {
                stats.max_phases = stats.max_phases.max(phases);
                self.max_phase_count_observed = self.max_phase_count_observed.max(phases);
                match observed {
                    Observed::Outcome(OutcomeKind::Classified(c)) if c == *b => {
                        self.classified_correct += 1;
                        stats.classified_correct += 1;
                        false
                    }
                    Observed::Outcome(OutcomeKind::BudgetExceeded) => {
                        self.budget_exceeded += 1;
                        stats.budget_exceeded += 1;
                        true
                    }
                    _ => {
                        self.classified_wrong += 1;
                        stats.classified_wrong += 1;
                        true
                    }
                }
            }
        };
        if wrong
            && (self.failures.len() < self.failure_limit
                || self.failures.last().is_some_and(|f| (size, index) < (f.size, f.index)))
        {
            self.failures.push(Failure {
                size,
                index,
                input: render(),
                expected: expected.clone(),
                observed,
            });
            self.trim_failures();
        }
    }

    fn trim_failures(&mut self) {
        self.failures.sort_by_key(|f| (f.size, f.index));
        self.failures.truncate(self.failure_limit);
    }

    pub fn merge(mut self, o: Tally) -> Tally {
        self.checked += o.checked;
        self.classified_correct += o.classified_correct;
        self.classified_wrong += o.classified_wrong;
        self.ties_seen += o.ties_seen;
        for (k, v) in o.tie_outcomes {
            *self.tie_outcomes.entry(k).or_default() += v;
        }
        self.budget_exceeded += o.budget_exceeded;
        for (k, v) in o.rule_faults {
            *self.rule_faults.entry(k).or_default() += v;
        }
        self.max_sweeps_observed = self.max_sweeps_observed.max(o.max_sweeps_observed);
        self.max_phase_count_observed = self.max_phase_count_observed.max(o.max_phase_count_observed);
        for (n, s) in o.per_size {
            self.per_size.entry(n).or_default().merge(&s);
        }
        self.failure_limit = self.failure_limit.max(o.failure_limit);
        self.failures.extend(o.failures);
        self.trim_failures();
        self
    }

    pub fn is_clean(&self) -> bool {
        self.classified_wrong == 0 && self.budget_exceeded == 0
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub space: Space,
    #[serde(flatten)]
    pub tally: Tally,
}

impl VerificationReport {
    pub fn is_clean(&self) -> bool {
        self.tally.is_clean()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let t = &self.tally;
        writeln!(f, "space: {}", self.space)?;
        writeln!(f, "checked: {}", t.checked)?;
        writeln!(f, "classified_correct: {}", t.classified_correct)?;
        writeln!(f, "classified_wrong: {}", t.classified_wrong)?;
        writeln!(f, "ties_seen: {}", t.ties_seen)?;
        for (k, v) in &t.tie_outcomes {
            writeln!(f, "  tie -> {k}: {v}")?;
        }
        writeln!(f, "budget_exceeded: {}", t.budget_exceeded)?;
        for (k, v) in &t.rule_faults {
            writeln!(f, "rule fault {}: {v}", Observed::Fault(*k))?;
        }
        writeln!(f, "max_sweeps_observed: {}", t.max_sweeps_observed)?;
        writeln!(f, "max_phase_count_observed: {}", t.max_phase_count_observed)?;
        if self.tally.per_size.len() > 1 {
            writeln!(
                f,
                "{:>6} {:>10} {:>10} {:>6} {:>8} {:>7} {:>7}",
                "size", "checked", "correct", "wrong", "ties", "sweeps", "phases"
            )?;
            for (n, s) in &t.per_size {
                writeln!(
                    f,
                    "{n:>6} {:>10} {:>10} {:>6} {:>8} {:>7} {:>7}",
                    s.checked, s.classified_correct, s.classified_wrong, s.ties_seen, s.max_sweeps, s.max_phases
                )?;
            }
        }
        for fail in &t.failures {
            writeln!(
                f,
                "FAIL {} expected {}, got {}",
                fail.input, fail.expected, fail.observed
            )?;
        }
        write!(f, "{}", if t.is_clean() { "result: OK" } else { "result: FAILED" })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::alphabet::BaseSymbol;

    fn tally(entries: &[(usize, u64, bool)]) -> Tally {
        let mut t = Tally::new(2);
        for &(n, i, ok) in entries {
            let obs = if ok {
                Observed::Outcome(OutcomeKind::Classified(BaseSymbol(0)))
            } else {
                Observed::Outcome(OutcomeKind::Tie)
            };
            t.record(n, i, &Verdict::Majority(BaseSymbol(0)), obs, 3, 2, || {
                format!("{n}:{i}")
            });
        }
        t
    }

    #[test]
    fn invariant_and_truncation() {
        let t = tally(&[(3, 5, false), (3, 1, false), (2, 9, false), (3, 0, true)]);
        assert_eq!(
            t.checked,
            t.classified_correct + t.classified_wrong + t.ties_seen + t.budget_exceeded
        );
        let keys: Vec<_> = t.failures.iter().map(|f| (f.size, f.index)).collect();
        assert_eq!(keys, vec![(2, 9), (3, 1)]);
    }

    #[test]
    fn merge_is_order_independent() {
        let a = tally(&[(3, 5, false), (3, 0, true)]);
        let b = tally(&[(2, 9, false)]);
        let c = tally(&[(3, 1, false), (4, 2, true)]);
        let left = a.clone().merge(b.clone()).merge(c.clone());
        let right = c.merge(a.merge(b));
        assert_eq!(left, right);
        assert_eq!(left.failures.len(), 2);
    }

    #[test]
    fn ties_are_never_wrong() {
        let mut t = Tally::new(10);
        t.record(
            2,
            1,
            &Verdict::Tie,
            Observed::Outcome(OutcomeKind::Tie),
            3,
            1,
            String::new,
        );
        t.record(
            2,
            2,
            &Verdict::Tie,
            Observed::Fault(FaultKind::IncomparableMemories),
            1,
            0,
            String::new,
        );
        assert_eq!(t.ties_seen, 2);
        assert_eq!(t.classified_wrong, 0);
        assert_eq!(t.tie_outcomes["TIE"], 1);
        assert_eq!(t.tie_outcomes["FAULT INCOMPARABLE_MEMORIES"], 1);
        assert_eq!(t.rule_faults[&FaultKind::IncomparableMemories], 1);
        assert_eq!(t.max_phase_count_observed, 0);
    }
}
