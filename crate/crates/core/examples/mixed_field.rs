//! Two static polygons, one of them with a Fourier support model, and an
//! ellipse crossing the path at constant velocity. Writes plan-view SVGs
//! with time-faded snapshots of the agent and the moving ellipse.
//!
//! cargo run --release --example mixed_field -- [out_dir]

use std::path::{Path, PathBuf};

use hcbf::cli::{cmd_run, default_out_dir, RunOptions};

fn main() {
    let out = std::env::args().nth(1).map_or_else(default_out_dir, PathBuf::from);
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("scenarios/mixed_field.json");
    for mode in ["orthogonal", "least-restrictive"] {
        let opts = RunOptions {
            mode: Some(mode.into()),
            ..RunOptions::new(&out)
        };
        let a = cmd_run(&path, &opts).unwrap_or_else(|e| {
            eprintln!("{e}");
            std::process::exit(e.exit_code())
        });
        let worst = a.metrics.min_clearance.iter().copied().fold(f64::INFINITY, f64::min);
        println!(
            "{mode:<18} {}  min clearance {worst:.4} m  ∫|u-u_des|dt = {:.3}",
            a.outcome.as_str(),
            a.metrics.intervention_integral
        );
        for p in &a.svgs {
            println!("  {}", p.display());
        }
    }
}
