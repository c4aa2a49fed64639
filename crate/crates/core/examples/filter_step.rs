//! One safety-filter step for an agent heading straight at a disc.
//!
//! The orthogonal hyperplane faces the agent and forces braking, while the
//! least-restrictive filter tilts the hyperplane so that the desired control
//! can be kept for longer.
//!
//! cargo run --example filter_step

use hcbf::barrier::{h_value, AgentState, Limits, Obstacle, ObstacleState};
use hcbf::filter::{optimize, orthogonal_assignment, solve_fixed_theta, FilterConfig};
use hcbf::geometry::ObstacleShape;
use hcbf::Vec2;

fn main() {
    let agent = AgentState::new(Vec2::new(-3.0, 0.4), Vec2::new(1.5, 0.0));
    let disc = ObstacleShape::disc(1.0).unwrap();
    let obstacles = [Obstacle::exact(ObstacleState::stationary(disc, Vec2::zeros()), 0.2)];
    let limits = Limits::new(1.0);
    let config = FilterConfig::default();
    let u_des = Vec2::new(0.5, 0.0);

    let orth_theta = orthogonal_assignment(&agent, &obstacles).expect("agent outside the disc");
    let orth = solve_fixed_theta(&agent, &obstacles, &orth_theta, &u_des, &config, &limits);
    let lr = optimize(&agent, &obstacles, &u_des, &config, &limits, None);

    for (name, r) in [("orthogonal", &orth), ("least-restrictive", &lr)] {
        let theta = r.thetas.thetas[0];
        let o = &obstacles[0];
        println!(
            "{name:<18} θ = {:>7.2}°  h = {:.4}  u = ({:+.4}, {:+.4})  cost {:.5}  [{}]",
            theta.to_degrees(),
            h_value(theta, &agent, &o.state, &o.support, &limits),
            r.u.x,
            r.u.y,
            r.objective,
            r.status.as_str()
        );
    }
}
