//! Conservation, residual-count and phase-count checks: all inputs up to
//! length 10, plus seeded random rings of length 64 and 256.

use seqdct::verifier::{check_properties, expected_max_phases, SampleSpec};
use seqdct::Alphabet;

fn main() {
    let spec = SampleSpec {
        alphabet: Alphabet::BINARY,
        sizes: vec![64, 256],
        samples: 500,
        seed: 1,
    };
    let report = check_properties(10, &spec, 1).unwrap();
    println!("{report}");
    for n in 1..=10 {
        println!(
            "n={n:>2}: largest phase count {}",
            expected_max_phases(n, Alphabet::BINARY)
        );
    }
}
