//! Engine-versus-oracle verification.
//!
//! Configurations of length `n` over `k` symbols are numbered
//! `0..k^n`, cell 0 being the least significant digit. A [`Shard`] is a
//! half-open range of such numbers. Shards are checked independently on a
//! worker pool and their tallies merged, so a report does not depend on
//! the worker count or the shard size. No symmetry reduction is applied:
//! the head always starts at cell 0, so rotations are distinct cases.

mod properties;
mod report;

pub use properties::{
    check_input, check_properties, sample_input, Checker, InputCheck, Property, PropertyReport, SampleSpec,
    SizeProperties, Violation,
};
pub use report::{Failure, Observed, SizeStats, Space, Tally, VerificationReport};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::alphabet::{Alphabet, Symbol};
use crate::engine::{decode_index, default_budget, drive};
use crate::multidim::{cell_count, drive_d, FaultKind, NeighborTable, SelectionMode};
use crate::oracle::{majority_of, Verdict};

/// Largest 1-D space enumerated without an explicit override.
pub const DEFAULT_RING_CAP: u64 = 1 << 24;
/// Largest d-dimensional space enumerated without an explicit override.
pub const DEFAULT_GRID_CAP: u64 = 1 << 20;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum VerifyError {
    #[error("space of {size} configurations exceeds the cap of {cap}")]
    SpaceTooLarge { size: String, cap: u64 },
    #[error("invalid size range {0}..{1}")]
    BadRange(usize, usize),
    #[error("dimension list must be non-empty with every side at least 1")]
    BadDims,
    #[error("worker pool: {0}")]
    Pool(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Shard {
    pub lo: u64,
    pub hi: u64,
}

impl Shard {
    /// Splits `0..total` into consecutive shards of at most `size` indices.
    pub fn partition(total: u64, size: u64) -> Vec<Shard> {
        let size = size.max(1);
        (0..total.div_ceil(size))
            .map(|i| Shard {
                lo: i * size,
                hi: ((i + 1) * size).min(total),
            })
            .collect()
    }

    pub fn len(&self) -> u64 {
        self.hi - self.lo
    }

    pub fn is_empty(&self) -> bool {
        self.hi <= self.lo
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VerifyOptions {
    pub alphabet: Alphabet,
    /// Per-run sweep budget; defaults to cells + 4.
    pub max_sweeps: Option<usize>,
    pub failure_limit: usize,
    pub shard_size: u64,
    /// Overrides [`DEFAULT_RING_CAP`] or [`DEFAULT_GRID_CAP`].
    pub max_configurations: Option<u64>,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            alphabet: Alphabet::BINARY,
            max_sweeps: None,
            failure_limit: 100,
            shard_size: 1 << 12,
            max_configurations: None,
        }
    }
}

/// `k^n`, or `None` on overflow.
pub fn space_size(k: usize, n: usize) -> Option<u64> {
    (k as u64).checked_pow(u32::try_from(n).ok()?)
}

fn check_cap(k: usize, n: usize, cap: u64) -> Result<u64, VerifyError> {
    match space_size(k, n) {
        Some(s) if s <= cap => Ok(s),
        _ => Err(VerifyError::SpaceTooLarge {
            size: format!("{k}^{n}"),
            cap,
        }),
    }
}

fn pool(workers: usize) -> Result<rayon::ThreadPool, VerifyError> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|e| VerifyError::Pool(e.to_string()))
}

pub fn digits(cells: &[Symbol]) -> String {
    cells.iter().map(Symbol::to_string).collect()
}

/// Checks every ring of length `n` with index in `shard`.
pub fn verify_shard(n: usize, shard: Shard, options: &VerifyOptions) -> Tally {
    let alphabet = options.alphabet;
    let budget = options.max_sweeps.unwrap_or_else(|| default_budget(n));
    let mut tally = Tally::new(options.failure_limit);
    let mut cells = Vec::with_capacity(n);
    for index in shard.lo..shard.hi {
        let input = decode_index(index, n, alphabet);
        let verdict = majority_of(&input, alphabet)
            .expect("decoded inputs are base symbols")
            .verdict;
        cells.clear();
        cells.extend_from_slice(&input);
        let out = drive(&mut cells, budget, &mut ());
        tally.record(
            n,
            index,
            &verdict,
            Observed::Outcome(out.kind),
            out.sweeps_used,
            out.propagation_phases,
            || digits(&input),
        );
    }
    tally
}

/// Checks every ring of every length in `n_min..=n_max`.
pub fn verify_exhaustive(
    n_min: usize,
    n_max: usize,
    workers: usize,
    options: &VerifyOptions,
) -> Result<VerificationReport, VerifyError> {
    if n_min == 0 || n_min > n_max {
        return Err(VerifyError::BadRange(n_min, n_max));
    }
    let k = options.alphabet.size();
    let cap = options.max_configurations.unwrap_or(DEFAULT_RING_CAP);
    let mut tasks = Vec::new();
    for n in n_min..=n_max {
        let total = check_cap(k, n, cap)?;
        tasks.extend(Shard::partition(total, options.shard_size).into_iter().map(|s| (n, s)));
    }
    let tally = pool(workers)?.install(|| {
        tasks
            .par_iter()
            .map(|&(n, s)| verify_shard(n, s, options))
            .reduce(|| Tally::new(options.failure_limit), Tally::merge)
    });
    Ok(VerificationReport {
        space: Space::Ring {
            n_min,
            n_max,
            alphabet: k,
        },
        tally,
    })
}

/// Checks rings drawn uniformly at random, `samples` per size.
pub fn verify_sampled(
    sizes: &[usize],
    samples: usize,
    seed: u64,
    workers: usize,
    options: &VerifyOptions,
) -> Result<VerificationReport, VerifyError> {
    let alphabet = options.alphabet;
    let tally = pool(workers)?.install(|| {
        sizes
            .iter()
            .flat_map(|&n| (0..samples as u64).map(move |i| (n, i)))
            .collect::<Vec<_>>()
            .par_chunks(256)
            .map(|chunk| {
                let mut t = Tally::new(options.failure_limit);
                for &(n, i) in chunk {
                    let input = properties::sample_input(seed, n, i, alphabet);
                    let verdict = majority_of(&input, alphabet).expect("base input").verdict;
                    let mut cells = input.clone();
                    let out = drive(
                        &mut cells,
                        options.max_sweeps.unwrap_or_else(|| default_budget(n)),
                        &mut (),
                    );
                    t.record(
                        n,
                        i,
                        &verdict,
                        Observed::Outcome(out.kind),
                        out.sweeps_used,
                        out.propagation_phases,
                        || digits(&input),
                    );
                }
                t
            })
            .reduce(|| Tally::new(options.failure_limit), Tally::merge)
    });
    let n_min = sizes.iter().copied().min().unwrap_or(0);
    let n_max = sizes.iter().copied().max().unwrap_or(0);
    Ok(VerificationReport {
        space: Space::Ring {
            n_min,
            n_max,
            alphabet: alphabet.size(),
        },
        tally,
    })
}

fn grid_digits(cells: &[Symbol], width: usize) -> String {
    cells.chunks(width).map(digits).collect::<Vec<_>>().join("/")
}

fn run_grid(
    input: &[Symbol],
    cells: &mut Vec<Symbol>,
    dims: &[usize],
    table: &NeighborTable,
    budget: usize,
    mode: SelectionMode,
) -> (Observed, usize, usize) {
    cells.clear();
    cells.extend_from_slice(input);
    match drive_d(cells, dims, table, budget, mode, &mut ()) {
        Ok(out) => (Observed::Outcome(out.kind), out.sweeps_used, out.propagation_phases),
        Err(fault) => (Observed::Fault(fault.kind), fault.sweep, 0),
    }
}

fn grid_space(dims: &[usize], options: &VerifyOptions) -> Result<u64, VerifyError> {
    if dims.is_empty() || dims.contains(&0) {
        return Err(VerifyError::BadDims);
    }
    let cap = options.max_configurations.unwrap_or(DEFAULT_GRID_CAP);
    let n = dims
        .iter()
        .try_fold(1usize, |a, &d| a.checked_mul(d))
        .ok_or(VerifyError::SpaceTooLarge {
            size: format!("{:?}", dims),
            cap,
        })?;
    check_cap(options.alphabet.size(), n, cap)
}

/// Checks every grid of the given shape.
pub fn verify_exhaustive_d(
    dims: &[usize],
    mode: SelectionMode,
    workers: usize,
    options: &VerifyOptions,
) -> Result<VerificationReport, VerifyError> {
    let total = grid_space(dims, options)?;
    let alphabet = options.alphabet;
    let n = cell_count(dims);
    let table = NeighborTable::new(dims);
    let budget = options.max_sweeps.unwrap_or_else(|| default_budget(n));
    let tally = pool(workers)?.install(|| {
        Shard::partition(total, options.shard_size)
            .par_iter()
            .map(|s| {
                let mut t = Tally::new(options.failure_limit);
                let mut cells = Vec::with_capacity(n);
                for index in s.lo..s.hi {
                    let input = decode_index(index, n, alphabet);
                    let verdict = majority_of(&input, alphabet).expect("base input").verdict;
                    let (obs, sweeps, phases) = run_grid(&input, &mut cells, dims, &table, budget, mode);
                    t.record(n, index, &verdict, obs, sweeps, phases, || grid_digits(&input, dims[0]));
                }
                t
            })
            .reduce(|| Tally::new(options.failure_limit), Tally::merge)
    });
    Ok(VerificationReport {
        space: Space::Grid {
            dims: dims.to_vec(),
            alphabet: alphabet.size(),
            mode,
        },
        tally,
    })
}

/// A grid on which the two selection modes behave differently.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Discrepancy {
    pub index: u64,
    pub input: String,
    pub expected: Verdict,
    pub counter_filtered: Observed,
    pub paper_literal: Observed,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModeComparison {
    pub dims: Vec<usize>,
    pub alphabet: usize,
    pub checked: u64,
    pub discrepancy_count: u64,
    /// The first discrepancies in index order.
    pub discrepancies: Vec<Discrepancy>,
    /// Runs in paper-literal mode halted by incomparable memories.
    pub incomparable_memories: u64,
    pub counter_filtered: Tally,
    pub paper_literal: Tally,
}

#[derive(Debug, Clone)]
struct ComparePart {
    count: u64,
    discrepancies: Vec<Discrepancy>,
    filtered: Tally,
    literal: Tally,
}

impl ComparePart {
    fn merge(mut self, o: ComparePart, limit: usize) -> ComparePart {
        self.count += o.count;
        self.discrepancies.extend(o.discrepancies);
        self.discrepancies.sort_by_key(|d| d.index);
        self.discrepancies.truncate(limit);
        self.filtered = self.filtered.merge(o.filtered);
        self.literal = self.literal.merge(o.literal);
        self
    }
}

/// Runs every grid of the given shape under both selection modes.
pub fn compare_modes(dims: &[usize], workers: usize, options: &VerifyOptions) -> Result<ModeComparison, VerifyError> {
    let total = grid_space(dims, options)?;
    let alphabet = options.alphabet;
    let n = cell_count(dims);
    let table = NeighborTable::new(dims);
    let budget = options.max_sweeps.unwrap_or_else(|| default_budget(n));
    let limit = options.failure_limit;
    let empty = || ComparePart {
        count: 0,
        discrepancies: Vec::new(),
        filtered: Tally::new(limit),
        literal: Tally::new(limit),
    };
    let part = pool(workers)?.install(|| {
        Shard::partition(total, options.shard_size)
            .par_iter()
            .map(|s| {
                let mut p = empty();
                let mut cells = Vec::with_capacity(n);
                for index in s.lo..s.hi {
                    let input = decode_index(index, n, alphabet);
                    let verdict = majority_of(&input, alphabet).expect("base input").verdict;
                    let render = || grid_digits(&input, dims[0]);
                    let (f, fs, fp) =
                        run_grid(&input, &mut cells, dims, &table, budget, SelectionMode::CounterFiltered);
                    let (l, ls, lp) = run_grid(&input, &mut cells, dims, &table, budget, SelectionMode::PaperLiteral);
                    p.filtered.record(n, index, &verdict, f, fs, fp, render);
                    p.literal.record(n, index, &verdict, l, ls, lp, render);
                    if f != l {
                        p.count += 1;
                        if p.discrepancies.len() < limit {
                            p.discrepancies.push(Discrepancy {
                                index,
                                input: render(),
                                expected: verdict.clone(),
                                counter_filtered: f,
                                paper_literal: l,
                            });
                        }
                    }
                }
                p
            })
            .reduce(empty, |a, b| a.merge(b, limit))
    });
    Ok(ModeComparison {
        dims: dims.to_vec(),
        alphabet: alphabet.size(),
        checked: total,
        discrepancy_count: part.count,
        discrepancies: part.discrepancies,
        incomparable_memories: part
            .literal
            .rule_faults
            .get(&FaultKind::IncomparableMemories)
            .copied()
            .unwrap_or(0),
        counter_filtered: part.filtered,
        paper_literal: part.literal,
    })
}

/// Ground truth for the largest phase count at size `n` over inputs with a
/// strict majority, assuming the phase count formula.
pub fn expected_max_phases(n: usize, alphabet: Alphabet) -> usize {
    let mut best = 0;
    let total = space_size(alphabet.size(), n).expect("small n");
    for index in 0..total {
        let input = decode_index(index, n, alphabet);
        let v = majority_of(&input, alphabet).expect("base input");
        if let Verdict::Majority(_) = v.verdict {
            best = best.max(properties::predicted_phases(&v.counts));
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::{encode_index, Ring};

    #[test]
    fn partition_covers_range() {
        let shards = Shard::partition(10, 3);
        assert_eq!(shards.len(), 4);
        assert_eq!(shards.iter().map(Shard::len).sum::<u64>(), 10);
        assert!(shards.windows(2).all(|w| w[0].hi == w[1].lo));
        assert_eq!(Shard::partition(0, 3), vec![]);
    }

    #[test]
    fn size_seven_has_no_ties() {
        let t = verify_shard(7, Shard { lo: 0, hi: 128 }, &VerifyOptions::default());
        assert_eq!((t.checked, t.classified_correct, t.ties_seen), (128, 128, 0));
    }

    #[test]
    fn size_two() {
        let r = verify_exhaustive(2, 2, 1, &VerifyOptions::default()).unwrap();
        assert_eq!(
            (r.tally.checked, r.tally.classified_correct, r.tally.ties_seen),
            (4, 2, 2)
        );
        assert!(r.is_clean());
    }

    #[test]
    fn thirteen_cell_index() {
        let ring = Ring::from_digits("0001011011010", Alphabet::BINARY).unwrap();
        let idx = encode_index(ring.cells(), Alphabet::BINARY).unwrap();
        let t = verify_shard(13, Shard { lo: idx, hi: idx + 1 }, &VerifyOptions::default());
        assert_eq!(t.classified_correct, 1);
        assert_eq!(t.max_phase_count_observed, 7);
    }

    #[test]
    fn worker_and_shard_independence() {
        let a = verify_exhaustive(1, 10, 1, &VerifyOptions::default()).unwrap();
        let opts = VerifyOptions {
            shard_size: 7,
            ..Default::default()
        };
        let b = verify_exhaustive(1, 10, 3, &opts).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn failures_are_reported() {
        let opts = VerifyOptions {
            max_sweeps: Some(1),
            failure_limit: 3,
            ..Default::default()
        };
        let r = verify_exhaustive(3, 3, 1, &opts).unwrap();
        assert_eq!(r.tally.budget_exceeded, 6);
        assert_eq!(r.tally.failures.len(), 3);
        assert_eq!(r.tally.failures[0].input, "100");
        assert!(!r.is_clean());
    }

    #[test]
    fn caps_and_ranges() {
        assert!(matches!(
            verify_exhaustive(1, 25, 1, &VerifyOptions::default()),
            Err(VerifyError::SpaceTooLarge { .. })
        ));
        assert_eq!(
            verify_exhaustive(3, 2, 1, &VerifyOptions::default()),
            Err(VerifyError::BadRange(3, 2))
        );
        assert!(matches!(
            verify_exhaustive_d(&[5, 5], SelectionMode::default(), 1, &VerifyOptions::default()),
            Err(VerifyError::SpaceTooLarge { .. })
        ));
    }

    #[test]
    fn small_grids() {
        let r = verify_exhaustive_d(&[2, 2], SelectionMode::default(), 1, &VerifyOptions::default()).unwrap();
        assert_eq!(r.tally.checked, 16);
        assert_eq!(r.tally.ties_seen, 6);
        assert!(r.is_clean());
        let r = verify_exhaustive_d(&[3, 3], SelectionMode::default(), 2, &VerifyOptions::default()).unwrap();
        assert_eq!((r.tally.checked, r.tally.classified_wrong), (512, 0));
    }

    #[test]
    fn one_dimensional_grids_match_rings() {
        for n in 1..=8 {
            let opts = VerifyOptions::default();
            let ring = verify_exhaustive(n, n, 1, &opts).unwrap();
            let grid = verify_exhaustive_d(&[n], SelectionMode::default(), 1, &opts).unwrap();
            assert_eq!(ring.tally, grid.tally, "n={n}");
        }
    }

    #[test]
    fn mode_comparison_runs() {
        let c = compare_modes(&[2, 2], 1, &VerifyOptions::default()).unwrap();
        assert_eq!(c.checked, 16);
        assert_eq!(c.counter_filtered.checked, 16);
        assert!(c.discrepancy_count as usize >= c.discrepancies.len());
    }

    #[test]
    fn sampled_is_deterministic() {
        let a = verify_sampled(&[31], 50, 7, 1, &VerifyOptions::default()).unwrap();
        let b = verify_sampled(&[31], 50, 7, 2, &VerifyOptions::default()).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.tally.checked, 50);
        assert!(a.is_clean());
    }
}
