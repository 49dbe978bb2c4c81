//! Every binary ring of length 1 to 16 against the majority oracle.

use seqdct::verifier::{verify_exhaustive, VerifyOptions};

fn main() {
    let workers = std::thread::available_parallelism().map_or(1, |n| n.get());
    let report = verify_exhaustive(1, 16, workers, &VerifyOptions::default()).unwrap();
    println!("{report}");
}
