//! Space-time diagram of a 7-cell binary ring, plain and column-aligned.

use seqdct::trace::{render_spacetime, render_spacetime_aligned};
use seqdct::{run, Alphabet, Ring, RunOptions};

fn main() {
    let ring = Ring::from_digits("0001010", Alphabet::BINARY).expect("binary digits");
    let report = run(
        &ring,
        RunOptions {
            capture_trace: true,
            ..Default::default()
        },
    )
    .expect("valid run");
    let trace = report.trace.expect("trace requested");
    print!("{}", render_spacetime(&trace).unwrap());
    println!();
    print!("{}", render_spacetime_aligned(&trace).unwrap());
    println!("{}", report.outcome);
}
