//! The extended alphabet for two and three base symbols, with the
//! combinations that validity rules out.

use seqdct::alphabet::{alphabet_cardinality, enumerate_alphabet};
use seqdct::{Alphabet, Counter, Memory, Symbol, Tape};

fn main() {
    for k in [2, 3] {
        let a = Alphabet::new(k).unwrap();
        let symbols = enumerate_alphabet(a);
        assert_eq!(symbols.len() as u128, alphabet_cardinality(a));
        let list: Vec<String> = symbols.iter().map(Symbol::to_string).collect();
        println!("k={k}: {} symbols\n  {}", symbols.len(), list.join(" "));
    }
    let a = Alphabet::BINARY;
    let mut rejected = Vec::new();
    for counter in [Counter::Odd, Counter::Even] {
        for b in a.symbols() {
            for mask in 0..4 {
                let s = Symbol::triplet(counter, Tape::Symbol(b), Memory(mask));
                if !a.is_valid(s) {
                    rejected.push(s.to_string());
                }
            }
        }
    }
    println!("not symbols: {}", rejected.join(" "));
}
