use std::f64::consts::TAU;

use super::{rotate, GeometryError, ObstacleShape, ShapeKind};
use crate::search::golden_section_min;
use crate::Vec2;

const COARSE_SAMPLES: usize = 1024;
const PARAM_TOL: f64 = 1e-10;

/// Nearest point of the obstacle hull to `p`, for an obstacle whose
/// reference point sits at `position` in the world frame.
///
/// Fails with [`GeometryError::InsideHull`] when `p` is not strictly outside.
pub fn closest_point(shape: &ObstacleShape, position: &Vec2, p: &Vec2) -> Result<Vec2, GeometryError> {
    let q = p - position;
    if shape.contains(&q) {
        return Err(GeometryError::InsideHull { x: p.x, y: p.y });
    }
    let local = match shape.kind() {
        ShapeKind::Disc { radius } => q * (*radius / q.norm()),
        ShapeKind::Ellipse { a, b, rotation } => nearest_on_ellipse(*a, *b, *rotation, &q),
        _ => nearest_on_polygon(shape.hull_offsets().unwrap_or(&[]), &q),
    };
    Ok(position + local)
}

/// Euclidean distance from `p` to the hull, negative (penetration depth)
/// when `p` is inside.
pub fn signed_distance(shape: &ObstacleShape, position: &Vec2, p: &Vec2) -> f64 {
    let q = p - position;
    let inside = shape.contains(&q);
    let dist = match shape.kind() {
        ShapeKind::Disc { radius } => return q.norm() - radius,
        ShapeKind::Ellipse { a, b, rotation } => (nearest_on_ellipse(*a, *b, *rotation, &q) - q).norm(),
        _ => (nearest_on_polygon(shape.hull_offsets().unwrap_or(&[]), &q) - q).norm(),
    };
    if inside {
        -dist
    } else {
        dist
    }
}

fn nearest_on_polygon(hull: &[Vec2], q: &Vec2) -> Vec2 {
    let n = hull.len();
    let mut best = hull[0];
    let mut best_d2 = f64::INFINITY;
    for i in 0..n {
        let (a, b) = (hull[i], hull[(i + 1) % n]);
        let e = b - a;
        let t = ((q - a).dot(&e) / e.norm_squared()).clamp(0.0, 1.0);
        let c = a + e * t;
        let d2 = (q - c).norm_squared();
        if d2 < best_d2 {
            best_d2 = d2;
            best = c;
        }
    }
    best
}

/// Boundary point of the rotated ellipse nearest to `q` (body frame):
/// coarse sweep of the eccentric anomaly, golden-section refinement on the
/// best cell, then a few guarded Newton steps on the stationarity condition.
fn nearest_on_ellipse(a: f64, b: f64, rotation: f64, q: &Vec2) -> Vec2 {
    let local = rotate(q, -rotation);
    let dist2 = |g: f64| {
        let (s, c) = g.sin_cos();
        (a * c - local.x).powi(2) + (b * s - local.y).powi(2)
    };

    let step = TAU / COARSE_SAMPLES as f64;
    let (mut best_g, mut best_f) = (0.0, f64::INFINITY);
    for k in 0..COARSE_SAMPLES {
        let g = step * k as f64;
        let f = dist2(g);
        if f < best_f {
            best_f = f;
            best_g = g;
        }
    }
    let (mut g, mut f) = golden_section_min(dist2, best_g - step, best_g + step, PARAM_TOL);

    for _ in 0..4 {
        let (s, c) = g.sin_cos();
        let dx = a * c - local.x;
        let dy = b * s - local.y;
        let grad = -dx * a * s + dy * b * c;
        let hess = a * a * s * s - dx * a * c + b * b * c * c - dy * b * s;
        if hess <= 0.0 {
            break;
        }
        let candidate = g - grad / hess;
        let fc = dist2(candidate);
        if fc <= f {
            g = candidate;
            f = fc;
        } else {
            break;
        }
    }

    rotate(&Vec2::new(a * g.cos(), b * g.sin()), rotation)
}
