//! Obstacle geometry.
//!
//! Shapes are stored in a body frame whose origin is the shape's reference
//! point `p_o`, so every query here is expressed relative to it. The world
//! position of an obstacle is the world position of `p_o`.

mod closest;
mod fourier;
mod hull;
mod shape;
mod support;

use thiserror::Error;

pub use closest::{closest_point, signed_distance};
pub use fourier::{fit_fourier, fit_fourier_with, FourierSeries};
pub use hull::convex_hull;
pub use shape::{ObstacleShape, ShapeKind};
pub use support::{ellipse_support, SupportKind, SupportModel};

use crate::Vec2;

/// Default number of Fourier terms for smooth support models.
pub const DEFAULT_FOURIER_TERMS: usize = 16;
/// Default number of uniform samples the Fourier projection is computed from.
pub const DEFAULT_FIT_GRID: usize = 720;
/// Verification grid size relative to the fit grid.
pub const VERIFY_GRID_FACTOR: usize = 10;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeometryError {
    #[error("degenerate point set: {0}")]
    Degenerate(String),
    #[error("invalid shape: {0}")]
    InvalidShape(String),
    #[error("point ({x}, {y}) lies inside the obstacle hull")]
    InsideHull { x: f64, y: f64 },
    #[error("fit grid of {grid} points is too coarse for {terms} Fourier terms (need at least {needed})")]
    GridTooCoarse {
        grid: usize,
        terms: usize,
        needed: usize,
    },
}

/// Unit vector `[cos θ, sin θ]`.
#[inline]
pub fn direction(theta: f64) -> Vec2 {
    let (s, c) = theta.sin_cos();
    Vec2::new(c, s)
}

#[inline]
pub(crate) fn cross(a: &Vec2, b: &Vec2) -> f64 {
    a.x * b.y - a.y * b.x
}

/// Rotates `v` by `angle` radians counter-clockwise.
#[inline]
pub(crate) fn rotate(v: &Vec2, angle: f64) -> Vec2 {
    let (s, c) = angle.sin_cos();
    Vec2::new(c * v.x - s * v.y, s * v.x + c * v.y)
}
