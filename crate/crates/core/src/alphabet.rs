//! Base symbols, intermediate triplets, and their textual notation.
//!
//! An input alphabet `S` of size `k` (2 ≤ k ≤ 32) is extended with triplets
//! `(counter, tape, memory)`: the counter alternates between `◦` and `•`
//! from one cycle of the head to the next, the tape holds either the
//! original symbol or the removed-marker `X`, and the memory is a subset of
//! `S` stored as a bit-mask.
//!
//! Notation used everywhere text is produced or parsed: a base symbol is its
//! digit, a triplet is `(c|t|M)` with `c` one of `o` (◦) or `*` (•), `t` a
//! digit or `X`, and `M` the ascending digit string of the memory or `-`
//! when empty. Digits past 9 continue with `a`..`v`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub const MAX_ALPHABET_SIZE: u8 = 32;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AlphabetError {
    #[error("alphabet size {0} out of range (expected 2..=32)")]
    SizeOutOfRange(usize),
    #[error("symbol {symbol} is not valid for an alphabet of size {size}")]
    InvalidSymbol { symbol: String, size: u8 },
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("cannot parse symbol {input:?}: {reason}")]
pub struct SymbolParseError {
    pub input: String,
    pub reason: &'static str,
}

/// Size of the input alphabet `S`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "u8", into = "u8")]
pub struct Alphabet(u8);

impl Alphabet {
    pub const BINARY: Alphabet = Alphabet(2);

    pub fn new(size: usize) -> Result<Self, AlphabetError> {
        if (2..=MAX_ALPHABET_SIZE as usize).contains(&size) {
            Ok(Alphabet(size as u8))
        } else {
            Err(AlphabetError::SizeOutOfRange(size))
        }
    }

    pub fn size(self) -> usize {
        self.0 as usize
    }

    pub fn symbols(self) -> impl Iterator<Item = BaseSymbol> {
        (0..self.0).map(BaseSymbol)
    }

    /// The whole of `S` as a memory.
    pub fn full_memory(self) -> Memory {
        Memory(if self.0 == 32 { u32::MAX } else { (1u32 << self.0) - 1 })
    }

    pub fn contains(self, b: BaseSymbol) -> bool {
        b.0 < self.0
    }

    pub fn base(self, value: u8) -> Result<BaseSymbol, AlphabetError> {
        let b = BaseSymbol(value);
        if self.contains(b) {
            Ok(b)
        } else {
            Err(AlphabetError::InvalidSymbol {
                symbol: value.to_string(),
                size: self.0,
            })
        }
    }

    pub fn is_valid(self, sym: Symbol) -> bool {
        is_valid(sym, self)
    }

    pub fn check(self, sym: Symbol) -> Result<Symbol, AlphabetError> {
        if self.is_valid(sym) {
            Ok(sym)
        } else {
            Err(AlphabetError::InvalidSymbol {
                symbol: sym.to_string(),
                size: self.0,
            })
        }
    }
}

impl TryFrom<u8> for Alphabet {
    type Error = AlphabetError;
    fn try_from(v: u8) -> Result<Self, Self::Error> {
        Alphabet::new(v as usize)
    }
}

impl From<Alphabet> for u8 {
    fn from(a: Alphabet) -> u8 {
        a.0
    }
}

impl fmt::Display for Alphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// An element of the input alphabet, as an index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct BaseSymbol(pub u8);

impl BaseSymbol {
    pub fn value(self) -> u8 {
        self.0
    }

    pub fn digit(self) -> char {
        std::char::from_digit(self.0 as u32, 36).expect("base symbol below 36")
    }

    pub fn from_digit(c: char) -> Option<Self> {
        if c.is_ascii_uppercase() {
            return None;
        }
        c.to_digit(36)
            .filter(|&d| d < MAX_ALPHABET_SIZE as u32)
            .map(|d| BaseSymbol(d as u8))
    }
}

impl fmt::Display for BaseSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.digit())
    }
}

/// Cycle parity. `Odd` is rendered `◦`/`o`, `Even` is `•`/`*`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Counter {
    Odd,
    Even,
}

impl Counter {
    pub fn flip(self) -> Counter {
        match self {
            Counter::Odd => Counter::Even,
            Counter::Even => Counter::Odd,
        }
    }

    pub fn glyph(self) -> char {
        match self {
            Counter::Odd => 'o',
            Counter::Even => '*',
        }
    }
}

pub fn flip_counter(c: Counter) -> Counter {
    c.flip()
}

/// Middle layer of a triplet.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Tape {
    Symbol(BaseSymbol),
    Removed,
}

impl Tape {
    pub fn symbol(self) -> Option<BaseSymbol> {
        match self {
            Tape::Symbol(b) => Some(b),
            Tape::Removed => None,
        }
    }
}

/// A subset of the input alphabet.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
pub struct Memory(pub u32);

impl Memory {
    pub const EMPTY: Memory = Memory(0);

    pub fn singleton(b: BaseSymbol) -> Memory {
        Memory(1 << b.0)
    }

    pub fn from_symbols<I: IntoIterator<Item = u8>>(symbols: I) -> Memory {
        Memory(symbols.into_iter().fold(0, |m, s| m | (1 << s)))
    }

    pub fn contains(self, b: BaseSymbol) -> bool {
        self.0 >> b.0 & 1 == 1
    }

    pub fn with(self, b: BaseSymbol) -> Memory {
        Memory(self.0 | 1 << b.0)
    }

    pub fn len(self) -> u32 {
        self.0.count_ones()
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn is_subset(self, other: Memory) -> bool {
        self.0 & !other.0 == 0
    }

    /// The single element, if this is a singleton.
    pub fn only(self) -> Option<BaseSymbol> {
        (self.len() == 1).then(|| BaseSymbol(self.0.trailing_zeros() as u8))
    }

    pub fn iter(self) -> impl Iterator<Item = BaseSymbol> {
        (0..32u8).filter(move |&b| self.0 >> b & 1 == 1).map(BaseSymbol)
    }
}

impl fmt::Display for Memory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return f.write_str("-");
        }
        for b in self.iter() {
            write!(f, "{b}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Triplet {
    pub counter: Counter,
    pub tape: Tape,
    pub memory: Memory,
}

impl Triplet {
    pub fn new(counter: Counter, tape: Tape, memory: Memory) -> Self {
        Triplet { counter, tape, memory }
    }
}

/// A cell value: either an input symbol or an intermediate triplet.
///
/// The derived ordering is the canonical one used by [`enumerate_alphabet`]:
/// base symbols first, then triplets by counter, tape, memory mask.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Symbol {
    Base(BaseSymbol),
    Triplet(Triplet),
}

impl Symbol {
    pub fn base(v: u8) -> Symbol {
        Symbol::Base(BaseSymbol(v))
    }

    pub fn triplet(counter: Counter, tape: Tape, memory: Memory) -> Symbol {
        Symbol::Triplet(Triplet::new(counter, tape, memory))
    }

    pub fn as_base(self) -> Option<BaseSymbol> {
        match self {
            Symbol::Base(b) => Some(b),
            Symbol::Triplet(_) => None,
        }
    }

    pub fn as_triplet(self) -> Option<Triplet> {
        match self {
            Symbol::Triplet(t) => Some(t),
            Symbol::Base(_) => None,
        }
    }

    pub fn is_base(self) -> bool {
        matches!(self, Symbol::Base(_))
    }

    /// What this cell contributes to the configuration's symbol count.
    pub fn tape_symbol(self) -> Option<BaseSymbol> {
        match self {
            Symbol::Base(b) => Some(b),
            Symbol::Triplet(t) => t.tape.symbol(),
        }
    }

    /// Memory carried by this cell; base cells carry none.
    pub fn memory(self) -> Memory {
        match self {
            Symbol::Base(_) => Memory::EMPTY,
            Symbol::Triplet(t) => t.memory,
        }
    }
}

impl From<BaseSymbol> for Symbol {
    fn from(b: BaseSymbol) -> Self {
        Symbol::Base(b)
    }
}

impl From<Triplet> for Symbol {
    fn from(t: Triplet) -> Self {
        Symbol::Triplet(t)
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Symbol::Base(b) => write!(f, "{b}"),
            Symbol::Triplet(t) => {
                let tape = match t.tape {
                    Tape::Symbol(b) => b.digit(),
                    Tape::Removed => 'X',
                };
                write!(f, "({}|{}|{})", t.counter.glyph(), tape, t.memory)
            }
        }
    }
}

impl FromStr for Symbol {
    type Err = SymbolParseError;

    /// Parses the compact notation. Only syntax is checked here; validity
    /// against an alphabet is the caller's business.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = |reason| SymbolParseError {
            input: s.to_string(),
            reason,
        };
        let mut chars = s.chars();
        match (chars.next(), chars.next()) {
            (Some(c), None) => {
                return BaseSymbol::from_digit(c)
                    .map(Symbol::Base)
                    .ok_or_else(|| err("not a digit"))
            }
            (None, _) => return Err(err("empty")),
            _ => {}
        }
        let inner = s
            .strip_prefix('(')
            .and_then(|r| r.strip_suffix(')'))
            .ok_or_else(|| err("expected (c|t|M)"))?;
        let mut parts = inner.split('|');
        let (Some(c), Some(t), Some(m), None) = (parts.next(), parts.next(), parts.next(), parts.next()) else {
            return Err(err("expected three |-separated fields"));
        };
        let counter = match c {
            "o" => Counter::Odd,
            "*" => Counter::Even,
            _ => return Err(err("counter must be o or *")),
        };
        let tape = match t {
            "X" => Tape::Removed,
            _ => {
                let mut tc = t.chars();
                match (tc.next().and_then(BaseSymbol::from_digit), tc.next()) {
                    (Some(b), None) => Tape::Symbol(b),
                    _ => return Err(err("tape must be a digit or X")),
                }
            }
        };
        let memory = if m == "-" {
            Memory::EMPTY
        } else {
            let mut mask = 0u32;
            let mut last: Option<u8> = None;
            for ch in m.chars() {
                let b = BaseSymbol::from_digit(ch).ok_or_else(|| err("memory must be digits or -"))?;
                if last.is_some_and(|l| l >= b.0) {
                    return Err(err("memory digits must be strictly ascending"));
                }
                last = Some(b.0);
                mask |= 1 << b.0;
            }
            if mask == 0 {
                return Err(err("empty memory must be written -"));
            }
            Memory(mask)
        };
        Ok(Symbol::triplet(counter, tape, memory))
    }
}

impl Serialize for Symbol {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Symbol {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Validity: components in range, and a tape symbol must be in its memory.
pub fn is_valid(sym: Symbol, alphabet: Alphabet) -> bool {
    match sym {
        Symbol::Base(b) => alphabet.contains(b),
        Symbol::Triplet(t) => {
            t.memory.is_subset(alphabet.full_memory())
                && match t.tape {
                    Tape::Removed => true,
                    Tape::Symbol(b) => alphabet.contains(b) && t.memory.contains(b),
                }
        }
    }
}

/// Number of valid symbols: `k + 2·(k·2^(k−1) + 2^k)`.
pub fn alphabet_cardinality(alphabet: Alphabet) -> u128 {
    let k = alphabet.size() as u128;
    k + 2 * (k * (1u128 << (k - 1)) + (1u128 << k))
}

/// Every valid symbol, in canonical order. Exponential in `k`; meant for
/// small alphabets.
pub fn enumerate_alphabet(alphabet: Alphabet) -> Vec<Symbol> {
    let mut out: Vec<Symbol> = alphabet.symbols().map(Symbol::Base).collect();
    let masks = 0..=alphabet.full_memory().0;
    for counter in [Counter::Odd, Counter::Even] {
        let tapes = alphabet.symbols().map(Tape::Symbol).chain([Tape::Removed]);
        for tape in tapes {
            for mask in masks.clone() {
                let sym = Symbol::triplet(counter, tape, Memory(mask));
                if is_valid(sym, alphabet) {
                    out.push(sym);
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(c: Counter, tape: Tape, mem: &[u8]) -> Symbol {
        Symbol::triplet(c, tape, Memory::from_symbols(mem.iter().copied()))
    }

    const B0: Tape = Tape::Symbol(BaseSymbol(0));
    const B1: Tape = Tape::Symbol(BaseSymbol(1));

    #[test]
    fn listed_triplets_are_valid() {
        let bin = Alphabet::BINARY;
        assert!(is_valid(t(Counter::Odd, B0, &[0]), bin));
        assert!(is_valid(t(Counter::Even, Tape::Removed, &[]), bin));
        assert!(!is_valid(t(Counter::Odd, B0, &[]), bin));
    }

    #[test]
    fn the_eight_unused_triplets_are_rejected() {
        let bin = Alphabet::BINARY;
        for c in [Counter::Odd, Counter::Even] {
            for (tape, mem) in [(B0, &[][..]), (B0, &[1][..]), (B1, &[][..]), (B1, &[0][..])] {
                assert!(!is_valid(t(c, tape, mem), bin));
            }
        }
    }

    #[test]
    fn out_of_range_components() {
        let bin = Alphabet::BINARY;
        assert!(!is_valid(Symbol::base(2), bin));
        assert!(!is_valid(t(Counter::Odd, Tape::Removed, &[2]), bin));
        assert!(!is_valid(t(Counter::Odd, Tape::Symbol(BaseSymbol(2)), &[0, 1, 2]), bin));
        assert!(is_valid(
            t(Counter::Odd, Tape::Symbol(BaseSymbol(2)), &[2]),
            Alphabet::new(3).unwrap()
        ));
    }

    #[test]
    fn cardinalities() {
        let two = enumerate_alphabet(Alphabet::BINARY);
        assert_eq!(two.len(), 18);
        assert_eq!(two.iter().filter(|s| !s.is_base()).count(), 16);
        let three = enumerate_alphabet(Alphabet::new(3).unwrap());
        assert_eq!(three.len(), 43);
        for k in 2..=8 {
            let a = Alphabet::new(k).unwrap();
            assert_eq!(enumerate_alphabet(a).len() as u128, alphabet_cardinality(a));
        }
    }

    #[test]
    fn enumeration_is_sorted_and_unique() {
        let syms = enumerate_alphabet(Alphabet::new(3).unwrap());
        assert!(syms.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn size_bounds() {
        assert!(Alphabet::new(1).is_err());
        assert!(Alphabet::new(33).is_err());
        assert_eq!(Alphabet::new(32).unwrap().full_memory(), Memory(u32::MAX));
    }

    #[test]
    fn counter_flip() {
        assert_eq!(flip_counter(Counter::Odd), Counter::Even);
        assert_eq!(flip_counter(Counter::Even), Counter::Odd);
        assert_eq!(Counter::Odd.flip().flip(), Counter::Odd);
    }

    #[test]
    fn notation() {
        assert_eq!(t(Counter::Odd, Tape::Removed, &[0, 1]).to_string(), "(o|X|01)");
        assert_eq!(t(Counter::Even, B0, &[0]).to_string(), "(*|0|0)");
        assert_eq!(t(Counter::Even, Tape::Removed, &[]).to_string(), "(*|X|-)");
        assert_eq!(
            "(o|X|01)".parse::<Symbol>().unwrap(),
            t(Counter::Odd, Tape::Removed, &[0, 1])
        );
        assert_eq!("7".parse::<Symbol>().unwrap(), Symbol::base(7));
        assert_eq!(Symbol::base(31).to_string(), "v");
        for bad in ["", "X", "(o|X)", "(x|X|0)", "(o|X|10)", "(o|X|)", "(o|XX|0)", "01"] {
            assert!(bad.parse::<Symbol>().is_err(), "{bad}");
        }
    }

    #[test]
    fn round_trip_all_small_alphabets() {
        for k in 2..=5 {
            for s in enumerate_alphabet(Alphabet::new(k).unwrap()) {
                assert_eq!(s.to_string().parse::<Symbol>().unwrap(), s);
            }
        }
    }
}
