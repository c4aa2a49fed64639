//! Closed-loop simulation of a double-integrator agent among obstacles.
//!
//! A [`Scenario`] describes the agent, its goal, the obstacles and the
//! filter. [`run_scenario`] steps it with a PD reference controller passed
//! through the safety filter and returns a [`TrajectoryLog`]; [`metrics`]
//! condenses a log into the numbers used to compare filter modes.

mod metrics;
mod run;

pub use metrics::{metrics, Metrics, GOAL_RADIUS, INTERVENTION_THRESHOLD};
pub use run::{pd_control, CLEARANCE_TOL, run_scenario, step_exact, LogRow, ObstacleRecord, RunOutcome, TrajectoryLog};

use std::f64::consts::TAU;

use crate::barrier::{h_value, AgentState, Limits, Obstacle, ObstacleState};
use crate::filter::{FilterConfig, FilterMode};
use crate::geometry::{fit_fourier, GeometryError, ObstacleShape, SupportModel, DEFAULT_FIT_GRID};
use crate::Vec2;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PdGains {
    pub kp: f64,
    pub kd: f64,
}

impl Default for PdGains {
    fn default() -> Self {
        Self { kp: 1.0, kd: 2.0 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub enum SupportSetting {
    #[default]
    Exact,
    Fourier {
        n_terms: usize,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct ObstacleSpec {
    pub shape: ObstacleShape,
    /// World position of the shape's reference point.
    pub position: Vec2,
    pub velocity: Vec2,
    pub support: SupportSetting,
}

impl ObstacleSpec {
    pub fn stationary(shape: ObstacleShape, position: Vec2) -> Self {
        Self {
            shape,
            position,
            velocity: Vec2::zeros(),
            support: SupportSetting::Exact,
        }
    }

    pub fn moving(shape: ObstacleShape, position: Vec2, velocity: Vec2) -> Self {
        Self {
            velocity,
            ..Self::stationary(shape, position)
        }
    }

    pub fn with_support(mut self, support: SupportSetting) -> Self {
        self.support = support;
        self
    }

    /// Support model including the agent radius. Fourier models are fitted on
    /// the default grid.
    pub fn support_model(&self, agent_radius: f64) -> Result<SupportModel, GeometryError> {
        let model = match self.support {
            SupportSetting::Exact => SupportModel::exact(&self.shape),
            SupportSetting::Fourier { n_terms } => fit_fourier(&self.shape, n_terms, DEFAULT_FIT_GRID)?,
        };
        Ok(model.with_agent_radius(agent_radius))
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("{field}: {message}")]
pub struct ScenarioError {
    /// Dotted path of the offending field, e.g. `limits.u_max`.
    pub field: String,
    pub message: String,
}

impl ScenarioError {
    pub fn new(field: impl Into<String>, message: impl Into<String>) -> Self {
        Self {
            field: field.into(),
            message: message.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub agent: AgentState,
    pub agent_radius: f64,
    pub goal: Vec2,
    pub gains: PdGains,
    pub limits: Limits,
    /// Step length in seconds.
    pub dt: f64,
    pub duration: f64,
    pub obstacles: Vec<ObstacleSpec>,
    pub filter: FilterConfig,
    /// Least-restrictive mode re-optimizes θ every this many steps and solves
    /// the fixed-θ problem in between.
    pub theta_update_every: usize,
}

impl Scenario {
    pub fn new(agent: AgentState, goal: Vec2) -> Self {
        Self {
            agent,
            agent_radius: 0.0,
            goal,
            gains: PdGains::default(),
            limits: Limits::new(1.0),
            dt: 0.01,
            duration: 10.0,
            obstacles: Vec::new(),
            filter: FilterConfig::default(),
            theta_update_every: 1,
        }
    }

    pub fn with_mode(mut self, mode: FilterMode) -> Self {
        self.filter.mode = mode;
        self
    }

    /// Number of steps; the log holds one more row than this.
    pub fn steps(&self) -> usize {
        (self.duration / self.dt).round() as usize
    }

    /// Obstacles with their support models, in their initial state.
    pub fn build_obstacles(&self) -> Result<Vec<Obstacle>, ScenarioError> {
        self.obstacles
            .iter()
            .enumerate()
            .map(|(k, spec)| {
                let support = spec
                    .support_model(self.agent_radius)
                    .map_err(|e| ScenarioError::new(format!("obstacles[{k}].support"), e.to_string()))?;
                Ok(Obstacle::new(
                    ObstacleState::new(spec.shape.clone(), spec.position, spec.velocity),
                    support,
                ))
            })
            .collect()
    }

    pub fn validate(&self) -> Result<(), ScenarioError> {
        self.validate_inner().map(|_| ())
    }

    pub(crate) fn validate_inner(&self) -> Result<Vec<Obstacle>, ScenarioError> {
        let finite2 = |v: &Vec2| v.iter().all(|c| c.is_finite());
        if !finite2(&self.agent.position) {
            return Err(ScenarioError::new("agent.p", "must be finite"));
        }
        if !finite2(&self.agent.velocity) {
            return Err(ScenarioError::new("agent.v", "must be finite"));
        }
        if !(self.agent_radius.is_finite() && self.agent_radius >= 0.0) {
            return Err(ScenarioError::new("agent.radius", format!("must be non-negative, got {}", self.agent_radius)));
        }
        if !finite2(&self.goal) {
            return Err(ScenarioError::new("goal", "must be finite"));
        }
        if !(self.gains.kp.is_finite() && self.gains.kp >= 0.0) {
            return Err(ScenarioError::new("gains.kp", format!("must be non-negative, got {}", self.gains.kp)));
        }
        if !(self.gains.kd.is_finite() && self.gains.kd >= 0.0) {
            return Err(ScenarioError::new("gains.kd", format!("must be non-negative, got {}", self.gains.kd)));
        }
        if !(self.limits.u_max.is_finite() && self.limits.u_max > 0.0) {
            return Err(ScenarioError::new("limits.u_max", format!("must be positive, got {}", self.limits.u_max)));
        }
        if !(self.dt.is_finite() && self.dt > 0.0) {
            return Err(ScenarioError::new("sim.dt", format!("must be positive, got {}", self.dt)));
        }
        if !(self.duration.is_finite() && self.duration > 0.0) {
            return Err(ScenarioError::new("sim.duration", format!("must be positive, got {}", self.duration)));
        }
        if self.steps() == 0 {
            return Err(ScenarioError::new("sim.duration", "shorter than one step"));
        }
        if self.theta_update_every == 0 {
            return Err(ScenarioError::new("sim.theta_update_every", "must be at least 1"));
        }
        self.filter
            .validate()
            .map_err(|(field, msg)| ScenarioError::new(format!("filter.{field}"), msg))?;
        if let FilterMode::FixedTheta(v) = &self.filter.mode {
            if v.len() != self.obstacles.len() {
                return Err(ScenarioError::new(
                    "filter.fixed_theta",
                    format!("expected {} angles, got {}", self.obstacles.len(), v.len()),
                ));
            }
        }
        for (k, spec) in self.obstacles.iter().enumerate() {
            if !finite2(&spec.position) {
                return Err(ScenarioError::new(format!("obstacles[{k}].position"), "must be finite"));
            }
            if !finite2(&spec.velocity) {
                return Err(ScenarioError::new(format!("obstacles[{k}].velocity"), "must be finite"));
            }
        }

        let obstacles = self.build_obstacles()?;
        let grid = self.filter.theta_grid;
        for (k, o) in obstacles.iter().enumerate() {
            let admissible = (0..grid).any(|i| {
                let theta = TAU * i as f64 / grid as f64;
                h_value(theta, &self.agent, &o.state, &o.support, &self.limits) >= 0.0
            });
            if !admissible {
                return Err(ScenarioError::new(
                    format!("obstacles[{k}]"),
                    "no hyperplane orientation is safe at the initial state",
                ));
            }
        }
        Ok(obstacles)
    }
}
