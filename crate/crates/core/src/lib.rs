//! A sequential cellular automaton of radius ½ that solves the density
//! classification task by way of an intermediate alphabet.
//!
//! An implicit head travels left to right around the configuration. On each
//! lap it removes one occurrence of every symbol it still finds, keeps them
//! in a memory carried by the cells it writes, and discards the collection
//! when it returns to where the lap began. When a lap ends holding a single
//! symbol, that symbol was the strict majority and the head floods the
//! configuration with it, leaving a clean uniform fixed point.
//!
//! Modules:
//! - [`alphabet`]: base symbols, `(counter, tape, memory)` triplets, notation.
//! - [`rule`]: the 1-D local rule and its case dispatch.
//! - [`engine`]: sequential sweeps over a ring, partial states, runs.
//! - [`compiled`]: lookup-table form of the 1-D rule for small alphabets.
//! - [`multidim`]: the same automaton on d-dimensional tori.
//! - [`oracle`]: brute-force majority.
//! - [`verifier`]: exhaustive and sampled checks against the oracle, plus
//!   the conservation and phase-count property suites.
//! - [`trace`]: space-time diagrams, grid panels, JSONL records.
//! - [`cli`]: the `seqdct` command line.

pub mod alphabet;
pub mod cli;
pub mod compiled;
pub mod engine;
pub mod multidim;
pub mod oracle;
pub mod rule;
pub mod trace;
pub mod verifier;

pub use alphabet::{Alphabet, BaseSymbol, Counter, Memory, Symbol, Tape, Triplet};
pub use engine::{run, Engine, OutcomeKind, Ring, RunOptions, RunOutcome};
pub use multidim::{run_d, Cuboid, SelectionMode};
pub use oracle::{majority, DensityVerdict, Verdict};
pub use rule::{apply_local, classify_case, LocalResult, RuleCase};
