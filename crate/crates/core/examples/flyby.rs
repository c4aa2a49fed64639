//! Straight-line pass beside a disc.
//!
//! The least-restrictive filter never touches the control because a
//! hyperplane parallel to the path is always admissible. The orthogonal
//! filter starts braking sideways well before the closest approach.
//!
//! cargo run --release --example flyby

use std::path::Path;

use hcbf::cli::ScenarioFile;
use hcbf::filter::FilterMode;
use hcbf::sim::{metrics, run_scenario};

fn main() {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("scenarios/flyby.json");
    let scenario = ScenarioFile::load(&path).unwrap().to_scenario().unwrap();

    for mode in [FilterMode::LeastRestrictive, FilterMode::Orthogonal] {
        let s = scenario.clone().with_mode(mode);
        let log = run_scenario(&s).unwrap();
        let m = metrics(&log, &s);
        println!(
            "{:<18} ∫|u-u_des|dt = {:.4}  first intervention {:>7}  min clearance {:.4} at t = {:.2} s",
            m.mode,
            m.intervention_integral,
            m.first_intervention.map_or("-".into(), |t| format!("{t:.3} s")),
            m.min_clearance[0],
            m.min_clearance_time[0],
        );
    }
}
