//! Builds a scenario in code, runs it and writes the trajectory CSV and the
//! scenario file it corresponds to.
//!
//! cargo run --release --example custom_scenario -- [out_dir]

use std::path::PathBuf;

use hcbf::barrier::AgentState;
use hcbf::cli::{csv::to_csv, default_out_dir, write_atomic, ScenarioFile};
use hcbf::geometry::ObstacleShape;
use hcbf::sim::{metrics, run_scenario, ObstacleSpec, Scenario, SupportSetting};
use hcbf::Vec2;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let out = std::env::args().nth(1).map_or_else(default_out_dir, PathBuf::from);

    let mut s = Scenario::new(AgentState::at_rest(Vec2::new(0.0, 0.0)), Vec2::new(12.0, 2.0));
    s.agent_radius = 0.25;
    s.dt = 1e-3;
    s.duration = 15.0;
    s.obstacles = vec![
        ObstacleSpec::stationary(ObstacleShape::rectangle(1.0, 3.0)?, Vec2::new(4.0, 0.5)),
        ObstacleSpec::stationary(ObstacleShape::ellipse(1.0, 0.6, 1.0)?, Vec2::new(8.0, 2.0))
            .with_support(SupportSetting::Fourier { n_terms: 12 }),
        ObstacleSpec::moving(ObstacleShape::disc(0.5)?, Vec2::new(10.0, -4.0), Vec2::new(0.0, 0.5)),
    ];

    let log = run_scenario(&s)?;
    let m = metrics(&log, &s);
    println!("{}", serde_json::to_string_pretty(&m)?);

    write_atomic(&out.join("custom.json"), ScenarioFile::from_scenario(&s).to_json().as_bytes())?;
    write_atomic(&out.join("custom-least-restrictive.csv"), to_csv(&log).as_bytes())?;
    println!("wrote {}", out.display());
    Ok(())
}
