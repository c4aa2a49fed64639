use super::{Scenario, ScenarioError};
use crate::barrier::{cbf_constraint, h_value, AgentState, Obstacle};
use crate::filter::{
    optimize, orthogonal_assignment, solve_fixed_theta, FilterMode, FilterResult, FilterStatus, ThetaAssignment,
};
use crate::geometry::signed_distance;
use crate::Vec2;

/// Clearance below `−CLEARANCE_TOL` counts as a collision.
pub const CLEARANCE_TOL: f64 = 1e-6;

/// `u_des = k_p (goal − p) − k_d v`, not clamped.
pub fn pd_control(agent: &AgentState, goal: &Vec2, kp: f64, kd: f64) -> Vec2 {
    (goal - agent.position) * kp - agent.velocity * kd
}

/// Zero-order-hold step of `ṗ = v, v̇ = u`; exact for constant `u`.
pub fn step_exact(agent: &AgentState, u: &Vec2, dt: f64) -> AgentState {
    AgentState::new(
        agent.position + agent.velocity * dt + u * (0.5 * dt * dt),
        agent.velocity + u * dt,
    )
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ObstacleRecord {
    pub theta: f64,
    pub h: f64,
    /// `ḣ + α(h)` at the applied control.
    pub constraint: f64,
    /// Distance from the agent centre to the hull, minus the agent radius.
    pub clearance: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LogRow {
    pub t: f64,
    pub position: Vec2,
    pub velocity: Vec2,
    pub u_des: Vec2,
    pub u: Vec2,
    pub obstacles: Vec<ObstacleRecord>,
    pub status: FilterStatus,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RunOutcome {
    Completed,
    /// Clearance fell below `−CLEARANCE_TOL` at this row.
    Collision { row: usize, obstacle: usize },
    /// The filter had no feasible control at this row; the agent braked.
    Infeasible { row: usize },
}

impl RunOutcome {
    pub fn is_success(&self) -> bool {
        matches!(self, RunOutcome::Completed)
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            RunOutcome::Completed => "completed",
            RunOutcome::Collision { .. } => "collision",
            RunOutcome::Infeasible { .. } => "infeasible",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrajectoryLog {
    pub mode: FilterMode,
    pub obstacle_count: usize,
    pub rows: Vec<LogRow>,
    pub outcome: RunOutcome,
}

impl TrajectoryLog {
    pub fn last(&self) -> &LogRow {
        self.rows.last().expect("a log always has its initial row")
    }
}

/// Simulates the scenario with its configured filter mode.
///
/// One row is logged per step, including the final state, so a completed run
/// has `steps + 1` rows. Row `k` holds the state at `t = k·Δt` and the control
/// applied over `[t, t + Δt)`. The run stops early on a collision or when the
/// filter is infeasible; in the latter case the logged control is full braking.
pub fn run_scenario(scenario: &Scenario) -> Result<TrajectoryLog, ScenarioError> {
    let mut obstacles = scenario.validate_inner()?;
    let config = &scenario.filter;
    let limits = &scenario.limits;
    let steps = scenario.steps();
    let mut agent = scenario.agent;
    let mut warm: Option<ThetaAssignment> = None;
    let mut rows = Vec::with_capacity(steps + 1);
    let mut outcome = RunOutcome::Completed;

    for k in 0..=steps {
        let t = k as f64 * scenario.dt;
        let clearances: Vec<f64> = obstacles
            .iter()
            .map(|o| signed_distance(&o.state.shape, &o.state.position, &agent.position) - scenario.agent_radius)
            .collect();
        let u_des = pd_control(&agent, &scenario.goal, scenario.gains.kp, scenario.gains.kd);

        let collided = clearances.iter().position(|c| *c < -CLEARANCE_TOL);
        let result = match collided {
            Some(_) => None,
            None => Some(filter_step(scenario, &agent, &obstacles, &u_des, k, warm.as_ref())),
        };

        let (u, thetas, status) = match &result {
            Some(r) if r.status != FilterStatus::Infeasible => (r.u, r.thetas.thetas.clone(), r.status),
            other => {
                let thetas = other
                    .as_ref()
                    .map(|r| r.thetas.thetas.clone())
                    .unwrap_or_else(|| vec![f64::NAN; obstacles.len()]);
                (brake(&agent, limits.u_max), thetas, FilterStatus::Infeasible)
            }
        };

        let records = obstacles
            .iter()
            .zip(&thetas)
            .zip(&clearances)
            .map(|((o, &theta), &clearance)| {
                let (h, constraint) = if theta.is_finite() {
                    let c = cbf_constraint(theta, &agent, &o.state, &o.support, &config.alpha, limits);
                    (h_value(theta, &agent, &o.state, &o.support, limits), c.value(&u))
                } else {
                    (f64::NAN, f64::NAN)
                };
                ObstacleRecord {
                    theta,
                    h,
                    constraint,
                    clearance,
                }
            })
            .collect();
        rows.push(LogRow {
            t,
            position: agent.position,
            velocity: agent.velocity,
            u_des,
            u,
            obstacles: records,
            status,
        });

        if let Some(obstacle) = collided {
            outcome = RunOutcome::Collision { row: k, obstacle };
            break;
        }
        if status == FilterStatus::Infeasible {
            outcome = RunOutcome::Infeasible { row: k };
            break;
        }
        if k == steps {
            break;
        }

        warm = result.map(|r| r.thetas);
        agent = step_exact(&agent, &u, scenario.dt);
        for o in &mut obstacles {
            o.state.position += o.state.velocity * scenario.dt;
        }
    }

    Ok(TrajectoryLog {
        mode: config.mode.clone(),
        obstacle_count: obstacles.len(),
        rows,
        outcome,
    })
}

fn filter_step(
    scenario: &Scenario,
    agent: &AgentState,
    obstacles: &[Obstacle],
    u_des: &Vec2,
    step: usize,
    warm: Option<&ThetaAssignment>,
) -> FilterResult {
    let config = &scenario.filter;
    let limits = &scenario.limits;
    match &config.mode {
        FilterMode::Orthogonal => match orthogonal_assignment(agent, obstacles) {
            Some(thetas) => solve_fixed_theta(agent, obstacles, &thetas, u_des, config, limits),
            // centre inside a hull; the clearance check normally catches this first
            None => optimize(agent, obstacles, u_des, config, limits, warm),
        },
        FilterMode::FixedTheta(thetas) => solve_fixed_theta(agent, obstacles, thetas, u_des, config, limits),
        FilterMode::LeastRestrictive => {
            let reoptimize = step.is_multiple_of(scenario.theta_update_every);
            match warm {
                Some(w) if !reoptimize => {
                    let r = solve_fixed_theta(agent, obstacles, &w.thetas, u_des, config, limits);
                    if r.status == FilterStatus::Optimal && r.thetas.all_feasible() {
                        r
                    } else {
                        optimize(agent, obstacles, u_des, config, limits, Some(w))
                    }
                }
                _ => optimize(agent, obstacles, u_des, config, limits, warm),
            }
        }
    }
}

fn brake(agent: &AgentState, u_max: f64) -> Vec2 {
    let speed = agent.velocity.norm();
    if speed > 0.0 {
        agent.velocity * (-u_max / speed)
    } else {
        Vec2::zeros()
    }
}
