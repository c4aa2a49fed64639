//! Exact minimization of `(u − u_des)ᵀQ(u − u_des)` over the disc
//! `‖u‖ ≤ u_max` intersected with a handful of half-planes.
//!
//! The feasible set is convex and two-dimensional, so the minimizer is the
//! KKT point of one of a small number of active sets: none, one line, two
//! lines, the circle, or the circle and one line. Each active set yields at
//! most two candidate points in closed form; the best feasible candidate is
//! the optimum.

use crate::barrier::AffineConstraint;
use crate::{Mat2, Vec2};

/// Slack allowed when testing candidates for feasibility.
pub const FEASIBILITY_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QpSolution {
    pub u: Vec2,
    pub objective: f64,
}

#[inline]
pub fn quadratic_cost(weight: &Mat2, u: &Vec2, u_des: &Vec2) -> f64 {
    let e = u - u_des;
    e.dot(&(weight * e))
}

/// Returns `None` when the feasible set is empty.
pub fn solve_qp(
    constraints: &[AffineConstraint],
    u_des: &Vec2,
    weight: &Mat2,
    u_max: f64,
) -> Option<QpSolution> {
    let mut lines: Vec<&AffineConstraint> = Vec::with_capacity(constraints.len());
    for c in constraints {
        if c.coeff.norm_squared() <= 1e-28 {
            if c.offset < -FEASIBILITY_TOL {
                return None;
            }
        } else {
            lines.push(c);
        }
    }

    let feasible = |u: &Vec2| {
        u.norm() <= u_max + FEASIBILITY_TOL && lines.iter().all(|c| c.is_satisfied(u, FEASIBILITY_TOL))
    };

    if feasible(u_des) {
        return Some(QpSolution {
            u: *u_des,
            objective: 0.0,
        });
    }

    let mut best: Option<QpSolution> = None;
    let mut consider = |u: Vec2| {
        if !u.iter().all(|c| c.is_finite()) || !feasible(&u) {
            return;
        }
        let objective = quadratic_cost(weight, &u, u_des);
        if best.is_none_or(|b| objective < b.objective) {
            best = Some(QpSolution { u, objective });
        }
    };

    let weight_inv = weight.try_inverse()?;
    for c in &lines {
        let w = weight_inv * c.coeff;
        let denom = c.coeff.dot(&w);
        if denom > 0.0 {
            consider(u_des - w * (c.value(u_des) / denom));
        }
    }

    for (i, a) in lines.iter().enumerate() {
        for b in &lines[i + 1..] {
            let det = a.coeff.x * b.coeff.y - a.coeff.y * b.coeff.x;
            if det.abs() <= 1e-14 * a.coeff.norm() * b.coeff.norm() {
                continue;
            }
            let x = (-a.offset * b.coeff.y + b.offset * a.coeff.y) / det;
            let y = (-b.offset * a.coeff.x + a.offset * b.coeff.x) / det;
            consider(Vec2::new(x, y));
        }
    }

    if u_des.norm() > u_max {
        if let Some(u) = nearest_on_circle(weight, u_des, u_max) {
            consider(u);
        }
    }

    for c in &lines {
        let nn = c.coeff.norm_squared();
        let foot = c.coeff * (-c.offset / nn);
        let rem = u_max * u_max - foot.norm_squared();
        // a tangent line can miss the circle by rounding alone
        if rem < -1e-12 * u_max * u_max {
            continue;
        }
        let t = rem.max(0.0).sqrt();
        let along = Vec2::new(-c.coeff.y, c.coeff.x) / nn.sqrt();
        consider(foot + along * t);
        consider(foot - along * t);
    }

    best
}

/// Minimizer of the weighted cost on the circle `‖u‖ = r` for `u_des`
/// outside it: `u = (Q + μI)⁻¹ Q u_des` with `μ ≥ 0` chosen so that `‖u‖ = r`.
fn nearest_on_circle(weight: &Mat2, u_des: &Vec2, r: f64) -> Option<Vec2> {
    let d_norm = u_des.norm();
    let off_diag = weight[(0, 1)].abs().max(weight[(1, 0)].abs());
    if off_diag == 0.0 && weight[(0, 0)] == weight[(1, 1)] {
        return Some(u_des * (r / d_norm));
    }
    let eig = weight.symmetric_eigen();
    let lambda = eig.eigenvalues;
    if lambda.iter().any(|l| *l <= 0.0) {
        return None;
    }
    let basis = eig.eigenvectors;
    let d = basis.transpose() * u_des;
    let at = |mu: f64| Vec2::new(lambda[0] * d[0] / (lambda[0] + mu), lambda[1] * d[1] / (lambda[1] + mu));

    let (mut lo, mut hi) = (0.0, lambda.max() * d_norm / r);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if at(mid).norm() > r {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let u_local = at(hi);
    let u = basis * u_local;
    Some(u * (r / u.norm()))
}
