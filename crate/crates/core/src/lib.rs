//! Least-restrictive hyperplane control barrier functions.
//!
//! A safety filter for 2D double-integrator agents that picks, at every
//! control step, both the orientation of a separating hyperplane per obstacle
//! and the control input, so that the safe control is as close as possible to
//! the desired one. The obstacle family covers discs, ellipses, convex
//! polygons and sampled radial outlines (convexified), static or moving at
//! constant velocity.
//!
//! Module map:
//!
//! - [`geometry`]: obstacle shapes, convex hulls, support distances and their
//!   smooth Fourier approximation, closest-point queries.
//! - [`barrier`]: the hyperplane barrier `h(x, θ)`, braking distance, and the
//!   barrier condition reduced to an affine constraint on the control.
//! - [`filter`]: the exact fixed-θ QP, the joint (u, θ) optimizer and a
//!   brute-force grid oracle.
//! - [`sim`]: PD-driven double-integrator simulation, trajectory logs, metrics.
//! - [`cli`]: scenario files, CSV/SVG/JSON artifacts and the command
//!   implementations behind the `hcbf` binary.
//!
//! See `examples/` for one runnable program per capability.

pub mod barrier;
pub mod cli;
pub mod filter;
pub mod geometry;
pub mod search;
pub mod sim;

/// 2D column vector used for positions, velocities and controls.
pub type Vec2 = nalgebra::Vector2<f64>;

/// 2x2 matrix, used for the QP weight.
pub type Mat2 = nalgebra::Matrix2<f64>;

pub use barrier::{AffineConstraint, AgentState, AlphaFunction, Limits, Obstacle, ObstacleState};
pub use filter::{FilterConfig, FilterMode, FilterResult, FilterStatus, ThetaAssignment};
pub use geometry::{GeometryError, ObstacleShape, ShapeKind, SupportModel};
pub use sim::{Scenario, TrajectoryLog};
