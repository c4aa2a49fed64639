use serde::Serialize;

use super::{Scenario, TrajectoryLog};

/// Distance to the goal that counts as arrival, in metres.
pub const GOAL_RADIUS: f64 = 1.0;
/// `‖u − u_des‖` above this counts as an intervention.
pub const INTERVENTION_THRESHOLD: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Metrics {
    pub mode: String,
    pub outcome: String,
    pub final_time: f64,
    pub min_clearance: Vec<f64>,
    /// Time of the smallest clearance, per obstacle.
    pub min_clearance_time: Vec<f64>,
    pub time_to_goal: Option<f64>,
    /// `∫‖u − u_des‖ dt` by the trapezoid rule.
    pub intervention_integral: f64,
    /// Total time with `‖u − u_des‖` above the threshold.
    pub intervention_duration: f64,
    pub first_intervention: Option<f64>,
    pub min_h: Option<f64>,
}

/// Summary of a run. Each row's control is held until the next row, so the
/// intervention duration counts every row but the last.
pub fn metrics(log: &TrajectoryLog, scenario: &Scenario) -> Metrics {
    let rows = &log.rows;
    let deviation: Vec<f64> = rows.iter().map(|r| (r.u - r.u_des).norm()).collect();

    let mut min_clearance = vec![f64::INFINITY; log.obstacle_count];
    let mut min_clearance_time = vec![0.0; log.obstacle_count];
    let mut min_h: Option<f64> = None;
    for r in rows {
        for (k, o) in r.obstacles.iter().enumerate() {
            if o.clearance < min_clearance[k] {
                min_clearance[k] = o.clearance;
                min_clearance_time[k] = r.t;
            }
            if o.h.is_finite() {
                min_h = Some(min_h.map_or(o.h, |m| m.min(o.h)));
            }
        }
    }

    let intervention_integral = rows
        .windows(2)
        .zip(deviation.windows(2))
        .fold(0.0, |acc, (r, d)| acc + 0.5 * (r[1].t - r[0].t) * (d[0] + d[1]));
    let intervention_duration = rows
        .windows(2)
        .zip(&deviation)
        .filter(|(_, d)| **d > INTERVENTION_THRESHOLD)
        .fold(0.0, |acc, (r, _)| acc + (r[1].t - r[0].t));
    let first_intervention = rows
        .iter()
        .zip(&deviation)
        .find(|(_, d)| **d > INTERVENTION_THRESHOLD)
        .map(|(r, _)| r.t);
    let time_to_goal = rows
        .iter()
        .find(|r| (r.position - scenario.goal).norm() <= GOAL_RADIUS)
        .map(|r| r.t);

    Metrics {
        mode: log.mode.name().to_string(),
        outcome: log.outcome.as_str().to_string(),
        final_time: log.last().t,
        min_clearance,
        min_clearance_time,
        time_to_goal,
        intervention_integral,
        intervention_duration,
        first_intervention,
        min_h,
    }
}
