//! Cross-checks the joint optimizer against the brute-force grid oracle on
//! seeded random instances.
//!
//! cargo run --release --example oracle_check -- [seed] [count]

use hcbf::cli::{cmd_oracle_check, DEFAULT_ORACLE_SEED};

fn main() {
    let mut args = std::env::args().skip(1);
    let seed = args.next().map_or(DEFAULT_ORACLE_SEED, |s| s.parse().expect("seed must be an integer"));
    let count = args.next().map_or(25, |s| s.parse().expect("count must be an integer"));
    let report = cmd_oracle_check(seed, count);
    println!("{report}");
    if !report.passed() {
        std::process::exit(3);
    }
}
