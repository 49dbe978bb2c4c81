//! Random rings over five symbols, checked against the majority oracle.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use seqdct::oracle::majority_of;
use seqdct::{run, Alphabet, Ring, RunOptions, Symbol};

fn main() {
    let alphabet = Alphabet::new(5).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..8 {
        let n = rng.gen_range(8..=24);
        let cells: Vec<Symbol> = (0..n).map(|_| Symbol::base(rng.gen_range(0..5))).collect();
        let ring = Ring::new(cells.clone(), alphabet).unwrap();
        let outcome = run(&ring, RunOptions::default()).unwrap().outcome;
        let verdict = majority_of(&cells, alphabet).unwrap();
        println!("{ring:<50} counts {:?}  {outcome}", verdict.counts);
    }
}
