//! Table-driven form of the 1-D rule for small alphabets.
//!
//! Symbols are numbered by their canonical order, so base symbol `b` has
//! id `b`. The table is filled by evaluating [`crate::rule::transition`] on
//! every ordered pair; runs then cost one lookup per update.

use crate::alphabet::{alphabet_cardinality, enumerate_alphabet, Alphabet, BaseSymbol, Symbol};
use crate::engine::{OutcomeKind, RunOutcome};
use crate::rule::{transition, LocalResult, RuleCase};

/// Alphabets with more symbols than this are not compiled.
pub const MAX_COMPILED_SYMBOLS: u128 = 1024;

#[derive(Debug, Clone)]
pub struct CompiledRule {
    alphabet: Alphabet,
    symbols: Vec<Symbol>,
    /// Entry for `(left, current)` at `left * m + current`: the output id
    /// in bits 0..16, the output's row offset `id * m` in bits 16..48, the
    /// case index in bits 48..56 and a phase-start bit at 56. Carrying the
    /// row offset keeps the next index one addition away.
    table: Vec<u64>,
}

const ID_MASK: u64 = 0xffff;
const PHASE_BIT: u64 = 1 << 56;

/// One update, as seen by the hook of [`CompiledRule::drive`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CompiledStep {
    pub sweep: usize,
    pub cell: usize,
    /// Index of `(left, current)` in the table.
    pub pair: usize,
    pub case: RuleCase,
}

impl CompiledRule {
    /// `None` when the alphabet is too large to tabulate.
    pub fn new(alphabet: Alphabet) -> Option<CompiledRule> {
        if alphabet_cardinality(alphabet) > MAX_COMPILED_SYMBOLS {
            return None;
        }
        let symbols = enumerate_alphabet(alphabet);
        let mut table = Vec::with_capacity(symbols.len() * symbols.len());
        for &l in &symbols {
            for &c in &symbols {
                let tr = transition(l, c);
                let after = match tr.result {
                    LocalResult::Symbol(s) => s,
                    LocalResult::Tie => c,
                };
                let id = symbols.binary_search(&after).expect("rule output is a valid symbol") as u64;
                let case = RuleCase::ALL.iter().position(|&c| c == tr.case).expect("known case") as u64;
                let phase = matches!(tr.case, RuleCase::Kickstart | RuleCase::SwapReset);
                table.push(id | ((id * symbols.len() as u64) << 16) | (case << 48) | (u64::from(phase) * PHASE_BIT));
            }
        }
        Some(CompiledRule {
            alphabet,
            symbols,
            table,
        })
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.symbols
    }

    pub fn encode(&self, s: Symbol) -> Option<u16> {
        self.symbols.binary_search(&s).ok().map(|i| i as u16)
    }

    pub fn decode(&self, id: u16) -> Symbol {
        self.symbols[id as usize]
    }

    pub fn pair(&self, left: u16, current: u16) -> usize {
        left as usize * self.symbols.len() + current as usize
    }

    /// Decodes a pair index into `(left, current)`.
    pub fn unpair(&self, pair: usize) -> (Symbol, Symbol) {
        let m = self.symbols.len();
        (self.symbols[pair / m], self.symbols[pair % m])
    }

    pub fn lookup(&self, pair: usize) -> (u16, RuleCase) {
        let e = self.table[pair];
        ((e & ID_MASK) as u16, RuleCase::ALL[(e >> 48 & 0xff) as usize])
    }

    /// Same semantics as [`crate::engine::drive`] on encoded cells. `hook`
    /// sees each update after it is written.
    pub fn drive<H: FnMut(&CompiledStep, &[u16])>(
        &self,
        cells: &mut [u16],
        max_sweeps: usize,
        hook: &mut H,
    ) -> RunOutcome {
        let n = cells.len();
        let m = self.symbols.len();
        let k = self.alphabet.size() as u16;
        let mut phases = 0;
        for sweep in 1..=max_sweeps {
            let mut row = cells[n - 1] as usize * m;
            for cell in 0..n {
                let pair = row + cells[cell] as usize;
                let e = self.table[pair];
                cells[cell] = (e & ID_MASK) as u16;
                row = (e >> 16 & 0xffff_ffff) as usize;
                phases += usize::from(e & PHASE_BIT != 0);
                let case = RuleCase::ALL[(e >> 48 & 0xff) as usize];
                hook(
                    &CompiledStep {
                        sweep,
                        cell,
                        pair,
                        case,
                    },
                    cells,
                );
                if case == RuleCase::SwapTie {
                    return RunOutcome {
                        kind: OutcomeKind::Tie,
                        sweeps_used: sweep,
                        propagation_phases: phases,
                    };
                }
            }
            let first = cells[0];
            if first < k && cells.iter().all(|&c| c == first) {
                return RunOutcome {
                    kind: OutcomeKind::Classified(BaseSymbol(first as u8)),
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
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::{decode_index, default_budget, drive};

    #[test]
    fn base_ids_are_values() {
        let r = CompiledRule::new(Alphabet::new(3).unwrap()).unwrap();
        assert_eq!(r.symbols().len(), 43);
        for b in 0..3 {
            assert_eq!(r.encode(Symbol::base(b)), Some(b as u16));
        }
        assert!(CompiledRule::new(Alphabet::new(12).unwrap()).is_none());
    }

    #[test]
    fn matches_engine() {
        for k in [2usize, 3] {
            let a = Alphabet::new(k).unwrap();
            let r = CompiledRule::new(a).unwrap();
            for n in 1..=7 {
                for idx in 0..(k as u64).pow(n as u32) {
                    let mut cells = decode_index(idx, n, a);
                    let mut ids: Vec<u16> = cells.iter().map(|&s| r.encode(s).unwrap()).collect();
                    let budget = default_budget(n);
                    let expect = drive(&mut cells, budget, &mut ());
                    let got = r.drive(&mut ids, budget, &mut |_, _| {});
                    assert_eq!(got, expect);
                    assert!(ids.iter().zip(&cells).all(|(&i, &s)| r.decode(i) == s));
                }
            }
        }
    }
}
