//! Writes a run as JSON lines, reads it back and replays it.

use seqdct::trace::{emit_records, parse_records, replay};
use seqdct::{run, Alphabet, Ring, RunOptions};

fn main() {
    let ring = Ring::from_digits("110100111", Alphabet::BINARY).unwrap();
    let report = run(
        &ring,
        RunOptions {
            capture_trace: true,
            ..Default::default()
        },
    )
    .unwrap();
    let trace = report.trace.unwrap();
    let text = emit_records(&trace);
    for line in text.lines().take(5) {
        println!("{line}");
    }
    println!("... {} records", trace.records.len());
    let records = parse_records(&text).unwrap();
    let end = replay(ring.cells(), &records).unwrap();
    assert_eq!(end, report.final_cells);
    println!("replayed to {}", seqdct::engine::format_cells(&end));
}
