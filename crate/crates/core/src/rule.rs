//! The radius-½ local rule: case dispatch over a (left, current) pair.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::alphabet::{Alphabet, AlphabetError, BaseSymbol, Counter, Memory, Symbol, Tape, Triplet};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum RuleCase {
    FixedPoint,
    Kickstart,
    PropFirstTake,
    PropFirstKeep,
    PropTake,
    PropKeep,
    SwapReset,
    SwapConverge,
    SwapTie,
    Convergence,
    /// Never produced by the dispatch; kept so totality can be asserted.
    Unreachable,
}

impl RuleCase {
    pub const ALL: [RuleCase; 11] = [
        RuleCase::FixedPoint,
        RuleCase::Kickstart,
        RuleCase::PropFirstTake,
        RuleCase::PropFirstKeep,
        RuleCase::PropTake,
        RuleCase::PropKeep,
        RuleCase::SwapReset,
        RuleCase::SwapConverge,
        RuleCase::SwapTie,
        RuleCase::Convergence,
        RuleCase::Unreachable,
    ];

    pub fn name(self) -> &'static str {
        match self {
            RuleCase::FixedPoint => "FIXED_POINT",
            RuleCase::Kickstart => "KICKSTART",
            RuleCase::PropFirstTake => "PROP_FIRST_TAKE",
            RuleCase::PropFirstKeep => "PROP_FIRST_KEEP",
            RuleCase::PropTake => "PROP_TAKE",
            RuleCase::PropKeep => "PROP_KEEP",
            RuleCase::SwapReset => "SWAP_RESET",
            RuleCase::SwapConverge => "SWAP_CONVERGE",
            RuleCase::SwapTie => "SWAP_TIE",
            RuleCase::Convergence => "CONVERGENCE",
            RuleCase::Unreachable => "UNREACHABLE",
        }
    }

    pub fn is_propagation(self) -> bool {
        matches!(
            self,
            RuleCase::PropFirstTake | RuleCase::PropFirstKeep | RuleCase::PropTake | RuleCase::PropKeep
        )
    }

    pub fn takes_symbol(self) -> bool {
        matches!(self, RuleCase::PropFirstTake | RuleCase::PropTake)
    }
}

impl fmt::Display for RuleCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Output of one local-rule application.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LocalResult {
    Symbol(Symbol),
    /// Swap reached with an empty active memory: balanced input.
    Tie,
}

impl LocalResult {
    pub fn symbol(self) -> Option<Symbol> {
        match self {
            LocalResult::Symbol(s) => Some(s),
            LocalResult::Tie => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Transition {
    pub case: RuleCase,
    pub result: LocalResult,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RuleError {
    #[error("invalid {role} symbol: {source}")]
    InvalidSymbol {
        role: &'static str,
        #[source]
        source: AlphabetError,
    },
}

fn check_pair(left: Symbol, current: Symbol, alphabet: Alphabet) -> Result<(), RuleError> {
    alphabet
        .check(left)
        .map_err(|source| RuleError::InvalidSymbol { role: "left", source })?;
    alphabet.check(current).map_err(|source| RuleError::InvalidSymbol {
        role: "current",
        source,
    })?;
    Ok(())
}

pub fn classify_case(left: Symbol, current: Symbol, alphabet: Alphabet) -> Result<RuleCase, RuleError> {
    check_pair(left, current, alphabet)?;
    Ok(transition(left, current).case)
}

pub fn apply_local(left: Symbol, current: Symbol, alphabet: Alphabet) -> Result<LocalResult, RuleError> {
    check_pair(left, current, alphabet)?;
    Ok(transition(left, current).result)
}

/// Propagation step as seen by a cell whose effective left neighbour is a
/// head carrying `counter` and `memory`. The left tape is never consulted.
#[inline]
pub(crate) fn propagate(head: Triplet, current: Symbol) -> Transition {
    let (first, tape) = match current {
        Symbol::Base(b) => (true, Tape::Symbol(b)),
        Symbol::Triplet(r) => (false, r.tape),
    };
    let (case, tape, memory) = match tape {
        Tape::Symbol(b) if !head.memory.contains(b) => (
            if first {
                RuleCase::PropFirstTake
            } else {
                RuleCase::PropTake
            },
            Tape::Removed,
            head.memory.with(b),
        ),
        _ => (
            if first {
                RuleCase::PropFirstKeep
            } else {
                RuleCase::PropKeep
            },
            tape,
            head.memory,
        ),
    };
    Transition {
        case,
        result: LocalResult::Symbol(Symbol::triplet(head.counter, tape, memory)),
    }
}

/// `(◦, X, {b})`: the first intermediate symbol, holding the symbol it removed.
pub fn kickstart_symbol(b: BaseSymbol) -> Symbol {
    Symbol::triplet(Counter::Odd, Tape::Removed, Memory::singleton(b))
}

/// Swap at a phase boundary, given the active memory.
#[inline]
pub(crate) fn swap(head: Triplet) -> Transition {
    let memory = head.memory;
    match memory.len() {
        0 => Transition {
            case: RuleCase::SwapTie,
            result: LocalResult::Tie,
        },
        1 => Transition {
            case: RuleCase::SwapConverge,
            result: LocalResult::Symbol(Symbol::Base(memory.only().expect("singleton"))),
        },
        _ => Transition {
            case: RuleCase::SwapReset,
            result: LocalResult::Symbol(Symbol::triplet(head.counter.flip(), Tape::Removed, Memory::EMPTY)),
        },
    }
}

/// Unchecked dispatch. Callers guarantee both symbols are valid.
#[inline]
pub fn transition(left: Symbol, current: Symbol) -> Transition {
    match (left, current) {
        (Symbol::Base(l), Symbol::Base(c)) => {
            if l == c {
                Transition {
                    case: RuleCase::FixedPoint,
                    result: LocalResult::Symbol(current),
                }
            } else {
                Transition {
                    case: RuleCase::Kickstart,
                    result: LocalResult::Symbol(kickstart_symbol(c)),
                }
            }
        }
        (Symbol::Base(l), Symbol::Triplet(_)) => Transition {
            case: RuleCase::Convergence,
            result: LocalResult::Symbol(Symbol::Base(l)),
        },
        (Symbol::Triplet(l), Symbol::Base(_)) => propagate(l, current),
        (Symbol::Triplet(l), Symbol::Triplet(r)) => {
            if l.counter == r.counter {
                swap(l)
            } else {
                propagate(l, current)
            }
        }
    }
}
