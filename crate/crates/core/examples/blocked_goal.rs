//! A disc sits between the agent and its goal, slightly off the line.
//!
//! Writes the comparison table, both trajectory CSVs and overlay plots.
//!
//! cargo run --release --example blocked_goal -- [out_dir]

use std::path::{Path, PathBuf};

use hcbf::cli::{cmd_compare, default_out_dir};

fn main() {
    let out = std::env::args().nth(1).map_or_else(default_out_dir, PathBuf::from);
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("scenarios/blocked_goal.json");
    match cmd_compare(&path, &out, true) {
        Ok(c) => {
            print!("{}", c.table);
            let (lr, or) = (&c.least_restrictive.metrics, &c.orthogonal.metrics);
            if let (Some(a), Some(b)) = (lr.time_to_goal, or.time_to_goal) {
                println!("least-restrictive arrives {:.1}% sooner", 100.0 * (1.0 - a / b));
            }
            println!("artifacts in {}", out.display());
        }
        Err(e) => {
            eprintln!("{e}");
            std::process::exit(e.exit_code());
        }
    }
}
