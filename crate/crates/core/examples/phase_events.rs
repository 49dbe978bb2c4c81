//! Lists the kickstart, reset and convergence events of a 13-cell run.

use seqdct::{run, Alphabet, Ring, RunOptions};

fn main() {
    let input = std::env::args().nth(1).unwrap_or_else(|| "0001011011010".to_owned());
    let ring = Ring::from_digits(&input, Alphabet::BINARY).expect("binary digits");
    let report = run(&ring, RunOptions::default()).expect("valid run");
    for e in &report.events {
        let symbol = e.detail.map(|s| s.to_string()).unwrap_or_default();
        println!("sweep {:>2}  cell {:>2}  {:?} {symbol}", e.sweep, e.cell, e.kind);
    }
    println!("{}", report.outcome);
}
