use std::fs;
use std::path::PathBuf;

use seqdct::engine::{run, Ring, RunOptions};
use seqdct::multidim::{parse_grid, run_d, SelectionMode};
use seqdct::trace::{parse_spacetime, render_panels, render_spacetime};
use seqdct::{Alphabet, BaseSymbol, OutcomeKind, Symbol};

fn golden(name: &str) -> String {
    let path: PathBuf = [env!("CARGO_MANIFEST_DIR"), "tests", "golden", name].iter().collect();
    fs::read_to_string(path).unwrap()
}

fn traced_ring(digits: &str) -> (seqdct::RunOutcome, String) {
    let ring = Ring::from_digits(digits, Alphabet::BINARY).unwrap();
    let report = run(
        &ring,
        RunOptions {
            capture_trace: true,
            ..Default::default()
        },
    )
    .unwrap();
    (
        report.outcome,
        render_spacetime(report.trace.as_ref().unwrap()).unwrap(),
    )
}

#[test]
fn ring_seven() {
    let (outcome, text) = traced_ring("0001010");
    assert_eq!(text, golden("ring7.txt"));
    assert_eq!(outcome.kind, OutcomeKind::Classified(BaseSymbol(0)));
    assert_eq!(outcome.propagation_phases, 3);
}

#[test]
fn ring_thirteen() {
    let (outcome, text) = traced_ring("0001011011010");
    assert_eq!(text, golden("ring13.txt"));
    assert_eq!(outcome.kind, OutcomeKind::Classified(BaseSymbol(0)));
    assert_eq!(outcome.propagation_phases, 7);
    let rows = parse_spacetime(&text).unwrap();
    assert!(rows.last().unwrap().iter().all(|&s| s == Symbol::base(0)));
}

#[test]
fn grid_three() {
    let grid = parse_grid(&golden("grid3x3.grid")).unwrap();
    assert_eq!(grid.alphabet(), Alphabet::new(3).unwrap());
    let report = run_d(
        &grid,
        RunOptions {
            capture_trace: true,
            ..Default::default()
        },
        SelectionMode::CounterFiltered,
    )
    .unwrap();
    assert_eq!(report.outcome.kind, OutcomeKind::Classified(BaseSymbol(2)));
    assert_eq!(render_panels(report.trace.as_ref().unwrap()), golden("grid3x3.txt"));
    // kickstart at (1,0) takes {1}
    let first = &report.trace.unwrap().snapshots[0];
    assert_eq!(first[1].to_string(), "(o|X|1)");
}

#[test]
fn grid_file_round_trip() {
    let text = golden("grid3x3.grid");
    assert_eq!(parse_grid(&text).unwrap().to_grid_file(), text);
}
