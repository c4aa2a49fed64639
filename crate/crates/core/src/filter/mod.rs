//! Safety filters built on the hyperplane barrier.
//!
//! [`solve_fixed_theta`] is the classic barrier QP with every hyperplane
//! orientation given. [`optimize`] additionally chooses one orientation per
//! obstacle, which makes the problem non-convex in θ; it is solved by a grid
//! sweep per obstacle inside coordinate descent, with golden-section
//! refinement around the best grid cell. [`brute_force_oracle`] is the dense
//! reference used to check both.

pub mod instances;
mod oracle;
mod qp;

use std::f64::consts::{PI, TAU};

pub use oracle::{brute_force_oracle, grid_minimum, OracleGrid};
pub use qp::{quadratic_cost, solve_qp, QpSolution, FEASIBILITY_TOL};

use crate::barrier::{
    cbf_constraint, h_value, orthogonal_theta, AffineConstraint, AgentState, AlphaFunction, Limits,
    Obstacle,
};
use crate::search::golden_section_min;
use crate::{Mat2, Vec2};

#[derive(Debug, Clone, PartialEq)]
pub enum FilterMode {
    /// Normal from the closest obstacle point towards the agent.
    Orthogonal,
    /// Joint optimization over control and hyperplane orientations.
    LeastRestrictive,
    /// Given orientation per obstacle.
    FixedTheta(Vec<f64>),
}

impl FilterMode {
    pub fn name(&self) -> &'static str {
        match self {
            FilterMode::Orthogonal => "orthogonal",
            FilterMode::LeastRestrictive => "least-restrictive",
            FilterMode::FixedTheta(_) => "fixed-theta",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FilterConfig {
    /// Symmetric positive-definite weight `Q` of the control deviation.
    pub weight: Mat2,
    pub alpha: AlphaFunction,
    /// Orientation grid points per obstacle.
    pub theta_grid: usize,
    /// Golden-section bracket width at which refinement stops (radians).
    pub refine_tol: f64,
    /// Coordinate-descent sweeps over the obstacles.
    pub max_sweeps: usize,
    pub mode: FilterMode,
}

impl Default for FilterConfig {
    fn default() -> Self {
        Self {
            weight: Mat2::identity(),
            alpha: AlphaFunction::default(),
            theta_grid: 360,
            refine_tol: 1e-6,
            max_sweeps: 5,
            mode: FilterMode::LeastRestrictive,
        }
    }
}

impl FilterConfig {
    pub fn with_mode(mut self, mode: FilterMode) -> Self {
        self.mode = mode;
        self
    }

    /// Checks the invariants; the error names the offending field.
    pub fn validate(&self) -> Result<(), (&'static str, String)> {
        let q = &self.weight;
        if !q.iter().all(|v| v.is_finite()) {
            return Err(("q", "weight must be finite".into()));
        }
        if (q[(0, 1)] - q[(1, 0)]).abs() > 1e-12 * q.abs().max().max(1.0) {
            return Err(("q", "weight must be symmetric".into()));
        }
        if !(q[(0, 0)] > 0.0 && q.determinant() > 0.0) {
            return Err(("q", "weight must be positive definite".into()));
        }
        if !(self.alpha.gain.is_finite() && self.alpha.gain > 0.0) {
            return Err(("alpha_gain", format!("must be positive, got {}", self.alpha.gain)));
        }
        if self.theta_grid < 8 {
            return Err(("theta_grid", format!("must be at least 8, got {}", self.theta_grid)));
        }
        if !(self.refine_tol.is_finite() && self.refine_tol > 0.0) {
            return Err(("refine_tol", format!("must be positive, got {}", self.refine_tol)));
        }
        if let FilterMode::FixedTheta(v) = &self.mode {
            if v.iter().any(|t| !t.is_finite()) {
                return Err(("fixed_theta", "angles must be finite".into()));
            }
        }
        Ok(())
    }
}

/// One hyperplane orientation per obstacle.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ThetaAssignment {
    pub thetas: Vec<f64>,
    /// Whether `h(x, θ) ≥ 0` holds for the matching orientation.
    pub feasible: Vec<bool>,
}

impl ThetaAssignment {
    pub fn all_feasible(&self) -> bool {
        self.feasible.iter().all(|f| *f)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FilterStatus {
    Optimal,
    /// No orientation grid point was admissible for some obstacle; the
    /// previous orientations were kept.
    FallbackPreviousTheta,
    Infeasible,
}

impl FilterStatus {
    pub fn as_str(&self) -> &'static str {
        match self {
            FilterStatus::Optimal => "optimal",
            FilterStatus::FallbackPreviousTheta => "fallback",
            FilterStatus::Infeasible => "infeasible",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "optimal" => Some(FilterStatus::Optimal),
            "fallback" => Some(FilterStatus::FallbackPreviousTheta),
            "infeasible" => Some(FilterStatus::Infeasible),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FilterResult {
    /// Safe control; zero when infeasible.
    pub u: Vec2,
    pub thetas: ThetaAssignment,
    /// `(u − u_des)ᵀQ(u − u_des)`; infinite when infeasible.
    pub objective: f64,
    pub status: FilterStatus,
}

impl FilterResult {
    fn infeasible(thetas: ThetaAssignment) -> Self {
        Self {
            u: Vec2::zeros(),
            thetas,
            objective: f64::INFINITY,
            status: FilterStatus::Infeasible,
        }
    }
}

fn assignment(agent: &AgentState, obstacles: &[Obstacle], limits: &Limits, thetas: Vec<f64>) -> ThetaAssignment {
    let feasible = obstacles
        .iter()
        .zip(&thetas)
        .map(|(o, t)| h_value(*t, agent, &o.state, &o.support, limits) >= 0.0)
        .collect();
    ThetaAssignment { thetas, feasible }
}

fn constraints_for(
    agent: &AgentState,
    obstacles: &[Obstacle],
    thetas: &[f64],
    config: &FilterConfig,
    limits: &Limits,
) -> Vec<AffineConstraint> {
    obstacles
        .iter()
        .zip(thetas)
        .map(|(o, t)| cbf_constraint(*t, agent, &o.state, &o.support, &config.alpha, limits))
        .collect()
}

/// Barrier QP with every orientation fixed.
///
/// Orientations violating `h ≥ 0` are still imposed; they are only flagged
/// in the returned assignment.
pub fn solve_fixed_theta(
    agent: &AgentState,
    obstacles: &[Obstacle],
    thetas: &[f64],
    u_des: &Vec2,
    config: &FilterConfig,
    limits: &Limits,
) -> FilterResult {
    assert_eq!(obstacles.len(), thetas.len(), "one orientation per obstacle");
    let constraints = constraints_for(agent, obstacles, thetas, config, limits);
    let assigned = assignment(agent, obstacles, limits, thetas.to_vec());
    match solve_qp(&constraints, u_des, &config.weight, limits.u_max) {
        Some(sol) => FilterResult {
            u: sol.u,
            thetas: assigned,
            objective: sol.objective,
            status: FilterStatus::Optimal,
        },
        None => FilterResult::infeasible(assigned),
    }
}

/// Orthogonal orientation for every obstacle, or `None` if the agent centre
/// is inside some hull.
pub fn orthogonal_assignment(agent: &AgentState, obstacles: &[Obstacle]) -> Option<Vec<f64>> {
    obstacles
        .iter()
        .map(|o| orthogonal_theta(agent, &o.state).ok())
        .collect()
}

/// Absolute angle between two orientations, in `[0, π]`.
pub fn angular_distance(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(TAU);
    d.min(TAU - d)
}

/// Joint minimization over the control and one orientation per obstacle,
/// subject to `h(x, θ_j) ≥ 0` for every obstacle.
///
/// The warm-start assignment and the orthogonal assignment seed the
/// incumbent, so the result is never worse than either when they are
/// admissible. Among grid orientations of equal cost the one closest to the
/// warm start wins.
pub fn optimize(
    agent: &AgentState,
    obstacles: &[Obstacle],
    u_des: &Vec2,
    config: &FilterConfig,
    limits: &Limits,
    warm: Option<&ThetaAssignment>,
) -> FilterResult {
    let n = obstacles.len();
    let u_max = limits.u_max;
    if n == 0 {
        return solve_fixed_theta(agent, obstacles, &[], u_des, config, limits);
    }

    let admissible = |j: usize, theta: f64| {
        let o = &obstacles[j];
        h_value(theta, agent, &o.state, &o.support, limits) >= 0.0
    };
    let constraint = |j: usize, theta: f64| {
        let o = &obstacles[j];
        cbf_constraint(theta, agent, &o.state, &o.support, &config.alpha, limits)
    };
    let evaluate = |thetas: &[f64]| -> Option<QpSolution> {
        if !(0..n).all(|j| admissible(j, thetas[j])) {
            return None;
        }
        let cons: Vec<AffineConstraint> = (0..n).map(|j| constraint(j, thetas[j])).collect();
        solve_qp(&cons, u_des, &config.weight, u_max)
    };

    let m = config.theta_grid.max(8);
    let step = TAU / m as f64;
    let tables: Vec<Vec<(f64, AffineConstraint)>> = (0..n)
        .map(|j| {
            let o = &obstacles[j];
            let h_at = |t: f64| h_value(t, agent, &o.state, &o.support, limits);
            let mut table = Vec::new();
            let (mut peak, mut peak_h) = (0.0, f64::NEG_INFINITY);
            for k in 0..m {
                let t = step * k as f64;
                let h = h_at(t);
                if h >= 0.0 {
                    table.push((t, constraint(j, t)));
                }
                if h > peak_h {
                    (peak, peak_h) = (t, h);
                }
            }
            // the admissible set can be narrower than one grid cell
            if table.is_empty() {
                let (t, neg_h) = golden_section_min(|t| -h_at(t), peak - step, peak + step, config.refine_tol);
                if -neg_h >= 0.0 {
                    let t = t.rem_euclid(TAU);
                    table.push((t, constraint(j, t)));
                }
            }
            table
        })
        .collect();
    let grid_gap = tables.iter().any(|t| t.is_empty());

    let warm_thetas = warm.filter(|w| w.thetas.len() == n).map(|w| w.thetas.clone());
    let orthogonal = orthogonal_assignment(agent, obstacles);

    let mut thetas: Option<Vec<f64>> = None;
    let mut best: Option<QpSolution> = None;
    for seed in [&warm_thetas, &orthogonal].into_iter().flatten() {
        if let Some(sol) = evaluate(seed) {
            if best.is_none_or(|b| sol.objective < b.objective) {
                best = Some(sol);
                thetas = Some(seed.clone());
            }
        }
    }

    let mut thetas = match thetas {
        Some(t) => t,
        None => {
            if grid_gap {
                if let Some(w) = warm_thetas {
                    return slip_recovery(agent, obstacles, &w, u_des, config, limits);
                }
                let fallback = orthogonal.unwrap_or_else(|| vec![0.0; n]);
                return FilterResult::infeasible(assignment(agent, obstacles, limits, fallback));
            }
            // most admissible grid orientation per obstacle
            (0..n)
                .map(|j| {
                    let o = &obstacles[j];
                    tables[j]
                        .iter()
                        .map(|(t, _)| (*t, h_value(*t, agent, &o.state, &o.support, limits)))
                        .fold((0.0, f64::NEG_INFINITY), |acc, x| if x.1 > acc.1 { x } else { acc })
                        .0
                })
                .collect()
        }
    };
    if best.is_none() {
        best = evaluate(&thetas);
    }
    let reference = warm_thetas.clone().unwrap_or_else(|| thetas.clone());

    let mut best_obj = best.map_or(f64::INFINITY, |b| b.objective);
    let mut best_u = best.map(|b| b.u);

    for _ in 0..config.max_sweeps {
        if best_obj <= 0.0 {
            break;
        }
        let mut improved = false;
        for j in 0..n {
            if tables[j].is_empty() {
                continue;
            }
            let mut cons: Vec<AffineConstraint> = (0..n)
                .filter(|k| *k != j)
                .map(|k| constraint(k, thetas[k]))
                .collect();
            cons.push(tables[j][0].1);
            let last = cons.len() - 1;

            let mut cand: Option<(f64, QpSolution)> = None;
            for (t, c) in &tables[j] {
                cons[last] = *c;
                let Some(sol) = solve_qp(&cons, u_des, &config.weight, u_max) else {
                    continue;
                };
                let better = match &cand {
                    None => true,
                    Some((ct, cs)) => {
                        sol.objective < cs.objective
                            || (sol.objective == cs.objective
                                && angular_distance(*t, reference[j])
                                    < angular_distance(*ct, reference[j]))
                    }
                };
                if better {
                    cand = Some((*t, sol));
                }
            }
            let Some((grid_theta, mut sol)) = cand else {
                continue;
            };
            let mut theta = grid_theta;

            if sol.objective > 0.0 {
                let mut cost = |t: f64| {
                    if !admissible(j, t) {
                        return f64::INFINITY;
                    }
                    cons[last] = constraint(j, t);
                    solve_qp(&cons, u_des, &config.weight, u_max).map_or(f64::INFINITY, |s| s.objective)
                };
                let (t_ref, f_ref) =
                    golden_section_min(&mut cost, grid_theta - step, grid_theta + step, config.refine_tol);
                if f_ref < sol.objective {
                    cons[last] = constraint(j, t_ref);
                    if let Some(s) = solve_qp(&cons, u_des, &config.weight, u_max) {
                        sol = s;
                        theta = t_ref.rem_euclid(TAU);
                    }
                }
            }

            if sol.objective < best_obj {
                thetas[j] = theta;
                best_obj = sol.objective;
                best_u = Some(sol.u);
                improved = true;
            }
        }
        if !improved {
            break;
        }
    }

    let assigned = assignment(agent, obstacles, limits, thetas);
    match best_u {
        Some(u) => FilterResult {
            u,
            thetas: assigned,
            objective: best_obj,
            status: if grid_gap {
                FilterStatus::FallbackPreviousTheta
            } else {
                FilterStatus::Optimal
            },
        },
        None => FilterResult::infeasible(assigned),
    }
}

/// How far `h` may fall below zero at a kept orientation before the filter
/// gives up. A held control can overshoot the barrier by `O(u_max Δt²)`
/// between samples.
pub const SLIP_TOLERANCE: f64 = 1e-3;

/// Keeps the previous orientations when no admissible one is left. Where a
/// held control has pushed `h` slightly below zero, `ḣ ≥ −α(h)` may be
/// unsatisfiable inside the control disc, so `ḣ ≥ 0` is imposed instead.
fn slip_recovery(
    agent: &AgentState,
    obstacles: &[Obstacle],
    thetas: &[f64],
    u_des: &Vec2,
    config: &FilterConfig,
    limits: &Limits,
) -> FilterResult {
    let assigned = assignment(agent, obstacles, limits, thetas.to_vec());
    let mut constraints = Vec::with_capacity(obstacles.len());
    for (o, &t) in obstacles.iter().zip(thetas) {
        let h = h_value(t, agent, &o.state, &o.support, limits);
        if h < -SLIP_TOLERANCE {
            return FilterResult::infeasible(assigned);
        }
        let mut c = cbf_constraint(t, agent, &o.state, &o.support, &config.alpha, limits);
        if h < 0.0 {
            c.offset -= config.alpha.apply(h);
        }
        constraints.push(c);
    }
    match solve_qp(&constraints, u_des, &config.weight, limits.u_max) {
        Some(sol) => FilterResult {
            u: sol.u,
            thetas: assigned,
            objective: sol.objective,
            status: FilterStatus::FallbackPreviousTheta,
        },
        None => FilterResult::infeasible(assigned),
    }
}

/// Normalizes an angle into `(−π, π]`.
pub fn wrap_angle(theta: f64) -> f64 {
    let t = (theta + PI).rem_euclid(TAU) - PI;
    if t == -PI {
        PI
    } else {
        t
    }
}

#[cfg(test)]
mod tests;
