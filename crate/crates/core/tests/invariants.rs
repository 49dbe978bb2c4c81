use proptest::prelude::*;

use seqdct::compiled::CompiledRule;
use seqdct::engine::{default_budget, drive, parse_digits};
use seqdct::multidim::{run_d, Cuboid, SelectionMode};
use seqdct::oracle::majority_of;
use seqdct::trace::{emit_records, parse_records, parse_spacetime, render_spacetime, replay};
use seqdct::verifier::{verify_exhaustive, VerifyOptions};
use seqdct::{run, Alphabet, OutcomeKind, Ring, RunOptions, Symbol, Verdict};

fn ring_strategy(max_k: usize, max_n: usize) -> impl Strategy<Value = (Alphabet, Vec<Symbol>)> {
    (2..=max_k).prop_flat_map(move |k| {
        prop::collection::vec(0..k as u8, 1..=max_n)
            .prop_map(move |v| (Alphabet::new(k).unwrap(), v.into_iter().map(Symbol::base).collect()))
    })
}

fn traced(a: Alphabet, cells: &[Symbol]) -> seqdct::engine::RunReport {
    let ring = Ring::new(cells.to_vec(), a).unwrap();
    run(
        &ring,
        RunOptions {
            capture_trace: true,
            ..Default::default()
        },
    )
    .unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn outcome_agrees_with_majority((a, cells) in ring_strategy(4, 60)) {
        let report = run(&Ring::new(cells.clone(), a).unwrap(), RunOptions::default()).unwrap();
        match majority_of(&cells, a).unwrap().verdict {
            Verdict::Majority(b) => prop_assert_eq!(report.outcome.kind, OutcomeKind::Classified(b)),
            Verdict::Tie => prop_assert_eq!(report.outcome.kind, OutcomeKind::Tie),
        }
    }

    #[test]
    fn every_written_symbol_is_valid((a, cells) in ring_strategy(4, 24)) {
        let trace = traced(a, &cells).trace.unwrap();
        for r in &trace.records {
            prop_assert!(a.is_valid(r.after), "{} at sweep {}", r.after, r.sweep);
        }
    }

    #[test]
    fn records_replay_to_final_cells((a, cells) in ring_strategy(3, 24)) {
        let report = traced(a, &cells);
        let trace = report.trace.unwrap();
        let parsed = parse_records(&emit_records(&trace)).unwrap();
        prop_assert_eq!(&parsed, &trace.records);
        prop_assert_eq!(replay(&cells, &parsed).unwrap(), report.final_cells);
    }

    #[test]
    fn spacetime_parses_back((a, cells) in ring_strategy(3, 24)) {
        let trace = traced(a, &cells).trace.unwrap();
        let rows = parse_spacetime(&render_spacetime(&trace).unwrap()).unwrap();
        prop_assert_eq!(&rows[0], &trace.initial);
        prop_assert_eq!(&rows[1..], &trace.snapshots[..]);
    }

    #[test]
    fn compiled_matches_symbolic((a, cells) in ring_strategy(3, 80)) {
        let rule = CompiledRule::new(a).unwrap();
        let mut ids: Vec<u16> = cells.iter().map(|&s| rule.encode(s).unwrap()).collect();
        let mut sym = cells.clone();
        let budget = default_budget(cells.len());
        let expect = drive(&mut sym, budget, &mut ());
        prop_assert_eq!(rule.drive(&mut ids, budget, &mut |_, _| {}), expect);
        prop_assert!(ids.iter().zip(&sym).all(|(&i, &s)| rule.decode(i) == s));
    }

    #[test]
    fn line_grid_is_a_ring((a, cells) in ring_strategy(3, 30)) {
        let ring = traced(a, &cells);
        let grid = Cuboid::new(vec![cells.len()], cells.clone(), a).unwrap();
        let line = run_d(&grid, RunOptions { capture_trace: true, ..Default::default() }, SelectionMode::CounterFiltered).unwrap();
        prop_assert_eq!(line.outcome, ring.outcome);
        prop_assert_eq!(line.trace.unwrap().records, ring.trace.unwrap().records);
    }
}

#[test]
fn report_independent_of_workers_and_shards() {
    let base = VerifyOptions::default();
    let a = verify_exhaustive(1, 14, 1, &base).unwrap();
    for (workers, shard_size) in [(4, 1 << 12), (3, 97), (8, 1)] {
        let opts = VerifyOptions { shard_size, ..base };
        let b = verify_exhaustive(1, 14, workers, &opts).unwrap();
        assert_eq!(a.to_json(), b.to_json(), "workers={workers} shard={shard_size}");
    }
}

#[test]
fn ternary_rings_classify() {
    let a = Alphabet::new(3).unwrap();
    let opts = VerifyOptions {
        alphabet: a,
        ..Default::default()
    };
    let r = verify_exhaustive(1, 9, 1, &opts).unwrap();
    assert!(r.is_clean(), "{r}");
    assert_eq!(r.tally.checked, (1..=9).map(|n| 3u64.pow(n)).sum::<u64>());
    let x = parse_digits("2101202", a).unwrap();
    assert_eq!(
        majority_of(&x, a).unwrap().verdict,
        Verdict::Majority(seqdct::BaseSymbol(2))
    );
}
