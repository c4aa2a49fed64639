//! Dense grid reference solutions.
//!
//! Controls are restricted to a uniform `n × n` grid over `[−u_max, u_max]²`
//! (points outside the disc discarded) and orientations to a uniform grid on
//! `[0, 2π)`. The search is exhaustive over grid points; within one grid row
//! the cost is a convex quadratic in `u_x` and the feasible set an interval,
//! so only the grid points bracketing the clamped row minimizer need to be
//! evaluated.
//!
//! Orientations are visited in order of a relaxation lower bound: the
//! smallest eigenvalue of `Q` times the squared Euclidean distance from
//! `u_des` to the intersection of the disc with each half-plane, floored at
//! the unconstrained grid minimum. Once that bound reaches the incumbent no remaining
//! orientation can improve on it, so the result equals the full scan.

use std::f64::consts::TAU;

use super::{assignment, FilterConfig, FilterResult, FilterStatus, QpSolution};
use crate::barrier::{cbf_constraint, h_value, AffineConstraint, AgentState, Limits, Obstacle};
use crate::{Mat2, Vec2};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleGrid {
    /// Grid points per control axis.
    pub u_points: usize,
    /// Orientation grid points per obstacle.
    pub theta_points: usize,
}

impl Default for OracleGrid {
    fn default() -> Self {
        Self {
            u_points: 20001,
            theta_points: 3600,
        }
    }
}

/// Best feasible grid control for a fixed set of constraints.
pub fn grid_minimum(
    constraints: &[AffineConstraint],
    u_des: &Vec2,
    weight: &Mat2,
    u_max: f64,
    u_points: usize,
) -> Option<QpSolution> {
    assert!(u_points >= 2, "grid needs at least two points per axis");
    let h = 2.0 * u_max / (u_points - 1) as f64;
    let last = (u_points - 1) as i64;
    let coord = |i: i64| -u_max + i as f64 * h;
    let r2 = u_max * u_max;
    let feasible = |u: &Vec2| u.norm_squared() <= r2 && constraints.iter().all(|c| c.value(u) >= 0.0);
    let (q00, q01) = (weight[(0, 0)], 0.5 * (weight[(0, 1)] + weight[(1, 0)]));

    let mut best: Option<QpSolution> = None;
    'rows: for j in 0..=last {
        let y = coord(j);
        let rem = r2 - y * y;
        if rem < 0.0 {
            continue;
        }
        let (mut lo, mut hi) = (-rem.sqrt(), rem.sqrt());
        for c in constraints {
            let rhs = c.coeff.y * y + c.offset;
            if c.coeff.x > 0.0 {
                lo = lo.max(-rhs / c.coeff.x);
            } else if c.coeff.x < 0.0 {
                hi = hi.min(-rhs / c.coeff.x);
            } else if rhs < 0.0 {
                continue 'rows;
            }
        }
        if lo > hi {
            continue;
        }
        let i_lo = (((lo + u_max) / h).ceil() as i64).clamp(0, last);
        let i_hi = (((hi + u_max) / h).floor() as i64).clamp(0, last);
        let x_star = (u_des.x - q01 / q00 * (y - u_des.y)).clamp(lo, hi);
        let i0 = ((x_star + u_max) / h).floor() as i64;
        for i in [i0, i0 + 1, i_lo - 1, i_lo, i_lo + 1, i_hi - 1, i_hi, i_hi + 1] {
            if i < 0 || i > last {
                continue;
            }
            let u = Vec2::new(coord(i), y);
            if !feasible(&u) {
                continue;
            }
            let objective = super::quadratic_cost(weight, &u, u_des);
            if best.is_none_or(|b| objective < b.objective) {
                best = Some(QpSolution { u, objective });
            }
        }
    }
    best
}

/// Exhaustive search over the control grid and the orientation grid of every
/// obstacle. Cost grows as `theta_points^k`, so at most two obstacles are
/// accepted.
///
/// # Panics
///
/// With more than two obstacles.
pub fn brute_force_oracle(
    agent: &AgentState,
    obstacles: &[Obstacle],
    u_des: &Vec2,
    config: &FilterConfig,
    limits: &Limits,
    grid: &OracleGrid,
) -> FilterResult {
    assert!(obstacles.len() <= 2, "the oracle handles at most two obstacles");
    let step = TAU / grid.theta_points as f64;
    let tables: Vec<Vec<(f64, AffineConstraint)>> = obstacles
        .iter()
        .map(|o| {
            (0..grid.theta_points)
                .map(|k| step * k as f64)
                .filter(|t| h_value(*t, agent, &o.state, &o.support, limits) >= 0.0)
                .map(|t| (t, cbf_constraint(t, agent, &o.state, &o.support, &config.alpha, limits)))
                .collect()
        })
        .collect();

    let solve = |cons: &[AffineConstraint]| grid_minimum(cons, u_des, &config.weight, limits.u_max, grid.u_points);
    let lambda_min = config.weight.symmetric_eigen().eigenvalues.min();
    // dropping every constraint can only lower the grid minimum
    let floor = solve(&[]).map_or(f64::INFINITY, |s| s.objective);
    let bound = |c: &AffineConstraint| (lambda_min * disc_halfplane_distance2(c, u_des, limits.u_max)).max(floor);
    let tables: Vec<Vec<(f64, AffineConstraint, f64)>> = tables
        .into_iter()
        .map(|t| {
            let mut t: Vec<_> = t.into_iter().map(|(th, c)| (th, c, bound(&c))).collect();
            t.sort_by(|a, b| a.2.total_cmp(&b.2));
            t
        })
        .collect();

    let mut best: Option<(Vec<f64>, QpSolution)> = None;
    let incumbent = |best: &Option<(Vec<f64>, QpSolution)>| best.as_ref().map_or(f64::INFINITY, |(_, b)| b.objective);
    let keep = |best: &mut Option<(Vec<f64>, QpSolution)>, thetas: Vec<f64>, sol: Option<QpSolution>| {
        if let Some(sol) = sol {
            if best.as_ref().is_none_or(|(_, b)| sol.objective < b.objective) {
                *best = Some((thetas, sol));
            }
        }
    };

    match tables.as_slice() {
        [] => keep(&mut best, Vec::new(), solve(&[])),
        [a] => {
            for (t, c, lb) in a {
                if *lb >= incumbent(&best) {
                    break;
                }
                keep(&mut best, vec![*t], solve(&[*c]));
            }
        }
        [a, b] => {
            for (ta, ca, la) in a {
                if *la >= incumbent(&best) {
                    break;
                }
                for (tb, cb, lb) in b {
                    if *lb >= incumbent(&best) {
                        break;
                    }
                    keep(&mut best, vec![*ta, *tb], solve(&[*ca, *cb]));
                }
            }
        }
        _ => unreachable!(),
    }

    match best {
        Some((thetas, sol)) => FilterResult {
            u: sol.u,
            thetas: assignment(agent, obstacles, limits, thetas),
            objective: sol.objective,
            status: FilterStatus::Optimal,
        },
        None => FilterResult::infeasible(assignment(
            agent,
            obstacles,
            limits,
            vec![0.0; obstacles.len()],
        )),
    }
}

/// Squared Euclidean distance from `p` to `{‖u‖ ≤ r, c(u) ≥ 0}`, infinite
/// when that set is empty.
fn disc_halfplane_distance2(c: &AffineConstraint, p: &Vec2, r: f64) -> f64 {
    let nn = c.coeff.norm_squared();
    if nn == 0.0 {
        return if c.offset < 0.0 {
            f64::INFINITY
        } else {
            (p.norm() - r).max(0.0).powi(2)
        };
    }
    let n = c.coeff / nn.sqrt();
    // signed distance of the origin to the line, positive on the feasible side
    let s0 = c.offset / nn.sqrt();
    if s0 < -r {
        return f64::INFINITY;
    }
    let radial = if p.norm() > r { p * (r / p.norm()) } else { *p };
    if c.value(&radial) >= 0.0 {
        return (p - radial).norm_squared();
    }
    let onto_line = p - n * (c.value(p) / nn.sqrt());
    if onto_line.norm() <= r {
        return (p - onto_line).norm_squared();
    }
    // nearest endpoint of the chord
    let foot = -n * s0;
    let half = (r * r - s0 * s0).max(0.0).sqrt();
    let along = Vec2::new(-n.y, n.x) * half;
    (p - (foot + along)).norm_squared().min((p - (foot - along)).norm_squared())
}
