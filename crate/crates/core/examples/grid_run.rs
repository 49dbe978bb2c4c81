//! A 3x3 torus over {0, 1, 2}, printed as one panel per sweep.

use seqdct::multidim::{run_d, Cuboid, SelectionMode};
use seqdct::trace::render_panels;
use seqdct::{Alphabet, RunOptions};

fn main() {
    let grid = Cuboid::from_rows(&[3, 3], &["010", "122", "220"], Alphabet::new(3).unwrap()).unwrap();
    let options = RunOptions {
        capture_trace: true,
        ..Default::default()
    };
    let report = run_d(&grid, options, SelectionMode::CounterFiltered).expect("no rule fault");
    print!("{}", render_panels(report.trace.as_ref().unwrap()));
    println!("{}", report.outcome);
}
