//! Runs every binary 3x3 torus under both memory-selection modes and lists
//! where they disagree. Pass a path to also write the JSON report.

use seqdct::verifier::{compare_modes, VerifyOptions};

fn main() {
    let c = compare_modes(&[3, 3], 1, &VerifyOptions::default()).unwrap();
    println!(
        "{} grids, {} discrepancies, {} incomparable-memory faults in paper-literal mode",
        c.checked, c.discrepancy_count, c.incomparable_memories
    );
    for d in c.discrepancies.iter().take(10) {
        println!(
            "  {} ({}): {} vs {}",
            d.input, d.expected, d.counter_filtered, d.paper_literal
        );
    }
    if let Some(path) = std::env::args().nth(1) {
        std::fs::write(&path, serde_json::to_string_pretty(&c).unwrap()).unwrap();
        println!("wrote {path}");
    }
}
