//! The θ-parameterized hyperplane barrier for a double-integrator agent.
//!
//! For a normal `n̂(θ) = [cos θ, sin θ]` the barrier protecting agent `i` from
//! obstacle `j` is
//!
//! ```text
//! h(x, θ) = n̂ᵀ(p_i − p_j) − δ_ij(θ) − b_ij(θ)
//! b_ij(θ) = (n̂ᵀ(v_i − v_j))² / (2 u_max)   if n̂ᵀ(v_i − v_j) < 0, else 0
//! ```
//!
//! and the barrier condition `ḣ ≥ −α(h)` is affine in the control `u` once θ
//! is fixed.

use crate::geometry::{self, closest_point, GeometryError, ObstacleShape, SupportModel};
use crate::Vec2;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AgentState {
    pub position: Vec2,
    pub velocity: Vec2,
}

impl AgentState {
    pub fn new(position: Vec2, velocity: Vec2) -> Self {
        Self { position, velocity }
    }

    pub fn at_rest(position: Vec2) -> Self {
        Self::new(position, Vec2::zeros())
    }

    pub fn is_finite(&self) -> bool {
        self.position.iter().chain(self.velocity.iter()).all(|c| c.is_finite())
    }
}

/// An obstacle's shape, the world position of its reference point, and its
/// constant velocity.
#[derive(Debug, Clone, PartialEq)]
pub struct ObstacleState {
    pub shape: ObstacleShape,
    pub position: Vec2,
    pub velocity: Vec2,
}

impl ObstacleState {
    pub fn new(shape: ObstacleShape, position: Vec2, velocity: Vec2) -> Self {
        Self {
            shape,
            position,
            velocity,
        }
    }

    pub fn stationary(shape: ObstacleShape, position: Vec2) -> Self {
        Self::new(shape, position, Vec2::zeros())
    }
}

/// An obstacle paired with the support model the barrier uses for it.
#[derive(Debug, Clone, PartialEq)]
pub struct Obstacle {
    pub state: ObstacleState,
    pub support: SupportModel,
}

impl Obstacle {
    pub fn new(state: ObstacleState, support: SupportModel) -> Self {
        Self { state, support }
    }

    /// Exact support distance, inflated by the agent radius.
    pub fn exact(state: ObstacleState, agent_radius: f64) -> Self {
        let support = SupportModel::exact(&state.shape).with_agent_radius(agent_radius);
        Self { state, support }
    }
}

/// Control limits: `‖u‖ ≤ u_max`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Limits {
    pub u_max: f64,
}

impl Limits {
    pub fn new(u_max: f64) -> Self {
        Self { u_max }
    }
}

/// Linear extended class-K∞ function `α(h) = gain · h`, `gain > 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AlphaFunction {
    pub gain: f64,
}

impl AlphaFunction {
    pub fn new(gain: f64) -> Self {
        Self { gain }
    }

    #[inline]
    pub fn apply(&self, h: f64) -> f64 {
        self.gain * h
    }
}

impl Default for AlphaFunction {
    fn default() -> Self {
        Self { gain: 1.0 }
    }
}

/// Half-plane `coeffᵀu + offset ≥ 0` in control space.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AffineConstraint {
    pub coeff: Vec2,
    pub offset: f64,
}

impl AffineConstraint {
    pub fn new(coeff: Vec2, offset: f64) -> Self {
        Self { coeff, offset }
    }

    #[inline]
    pub fn value(&self, u: &Vec2) -> f64 {
        self.coeff.dot(u) + self.offset
    }

    #[inline]
    pub fn is_satisfied(&self, u: &Vec2, tol: f64) -> bool {
        self.value(u) >= -tol
    }
}

/// `[cos θ, sin θ]`.
#[inline]
pub fn unit_normal(theta: f64) -> Vec2 {
    geometry::direction(theta)
}

/// `n̂(θ)ᵀ(v_i − v_j)`; negative while the pair is closing along the normal.
#[inline]
pub fn normal_speed(theta: f64, agent: &AgentState, obstacle: &ObstacleState) -> f64 {
    unit_normal(theta).dot(&(agent.velocity - obstacle.velocity))
}

pub fn braking_distance(
    theta: f64,
    agent: &AgentState,
    obstacle: &ObstacleState,
    limits: &Limits,
) -> f64 {
    let s = normal_speed(theta, agent, obstacle);
    if s < 0.0 {
        s * s / (2.0 * limits.u_max)
    } else {
        0.0
    }
}

/// Barrier value `h(x, θ)`.
pub fn h_value(
    theta: f64,
    agent: &AgentState,
    obstacle: &ObstacleState,
    support: &SupportModel,
    limits: &Limits,
) -> f64 {
    let n = unit_normal(theta);
    n.dot(&(agent.position - obstacle.position))
        - support.safety_distance(theta)
        - braking_distance(theta, agent, obstacle, limits)
}

/// The condition `ḣ + α(h) ≥ 0` as an affine constraint on `u`.
///
/// While closing (`s = n̂ᵀ(v_i − v_j) < 0`) the braking term contributes
/// `−s (n̂ᵀu) / u_max` to `ḣ`; otherwise `ḣ = s` does not depend on `u`.
pub fn cbf_constraint(
    theta: f64,
    agent: &AgentState,
    obstacle: &ObstacleState,
    support: &SupportModel,
    alpha: &AlphaFunction,
    limits: &Limits,
) -> AffineConstraint {
    let n = unit_normal(theta);
    let s = n.dot(&(agent.velocity - obstacle.velocity));
    let h = h_value(theta, agent, obstacle, support, limits);
    let coeff = if s < 0.0 {
        n * (-s / limits.u_max)
    } else {
        Vec2::zeros()
    };
    AffineConstraint::new(coeff, s + alpha.apply(h))
}

/// Normal direction of the orthogonal baseline: from the obstacle's closest
/// hull point towards the agent centre.
pub fn orthogonal_theta(agent: &AgentState, obstacle: &ObstacleState) -> Result<f64, GeometryError> {
    let q = closest_point(&obstacle.shape, &obstacle.position, &agent.position)?;
    let d = agent.position - q;
    Ok(d.y.atan2(d.x))
}
