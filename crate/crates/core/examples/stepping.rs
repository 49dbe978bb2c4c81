//! Drives the sequential update one cell at a time and shows the active
//! memory carried by the head.

use seqdct::engine::Cursor;
use seqdct::{Alphabet, Engine, Ring};

fn main() {
    let ring = Ring::from_digits("0001010", Alphabet::BINARY).unwrap();
    let mut engine = Engine::new(ring);
    for _ in 0..10 {
        let Some(u) = engine.step() else { break };
        println!(
            "cell {}  {:<10} -> {:<10} {:<16} active memory {}",
            u.cell,
            u.before.to_string(),
            u.after.to_string(),
            u.case.name(),
            engine.active_memory()
        );
    }
    // Jump to the state after two full sweeps and three more cells.
    engine
        .advance_to(Cursor {
            sweeps_done: 2,
            next_cell: 3,
        })
        .unwrap();
    println!("at {:?}: {}", engine.cursor(), engine.ring());
}
