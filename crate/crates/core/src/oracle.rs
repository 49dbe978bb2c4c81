//! Brute-force ground truth: count symbols, find the strict majority.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::alphabet::{Alphabet, BaseSymbol, Symbol};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    Majority(BaseSymbol),
    Tie,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Verdict::Majority(b) => write!(f, "majority {b}"),
            Verdict::Tie => f.write_str("tie"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DensityVerdict {
    pub verdict: Verdict,
    pub counts: Vec<usize>,
}

impl DensityVerdict {
    pub fn majority(&self) -> Option<BaseSymbol> {
        match self.verdict {
            Verdict::Majority(b) => Some(b),
            Verdict::Tie => None,
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("empty configuration")]
    Empty,
    #[error("cell {0} is not an input symbol of the alphabet")]
    NotInput(usize),
}

pub fn count_symbols(cells: &[BaseSymbol], alphabet: Alphabet) -> Vec<usize> {
    let mut counts = vec![0; alphabet.size()];
    for b in cells {
        counts[b.0 as usize] += 1;
    }
    counts
}

/// Majority of a sequence of input symbols.
pub fn majority(cells: &[BaseSymbol], alphabet: Alphabet) -> Result<DensityVerdict, OracleError> {
    if cells.is_empty() {
        return Err(OracleError::Empty);
    }
    if let Some(i) = cells.iter().position(|&b| !alphabet.contains(b)) {
        return Err(OracleError::NotInput(i));
    }
    let counts = count_symbols(cells, alphabet);
    Ok(verdict_from_counts(counts))
}

/// Same as [`majority`], for a configuration given as cell symbols.
pub fn majority_of(cells: &[Symbol], alphabet: Alphabet) -> Result<DensityVerdict, OracleError> {
    let base = cells
        .iter()
        .enumerate()
        .map(|(i, s)| s.as_base().ok_or(OracleError::NotInput(i)))
        .collect::<Result<Vec<_>, _>>()?;
    majority(&base, alphabet)
}

pub fn verdict_from_counts(counts: Vec<usize>) -> DensityVerdict {
    let max = counts.iter().copied().max().unwrap_or(0);
    let mut winners = counts.iter().enumerate().filter(|&(_, &c)| c == max);
    let verdict = match (winners.next(), winners.next()) {
        (Some((b, _)), None) => Verdict::Majority(BaseSymbol(b as u8)),
        _ => Verdict::Tie,
    };
    DensityVerdict { verdict, counts }
}
