//! Trajectory CSV.
//!
//! Columns: `t,px,py,vx,vy,udx,udy,ux,uy`, then `theta_k,h_k,cons_k,clear_k`
//! for each obstacle `k`, then `status`. Numbers carry 17 significant digits
//! so that parsing reproduces the log bit for bit; undefined values are `NaN`.

use std::fmt::Write;

use crate::filter::FilterStatus;
use crate::sim::{LogRow, ObstacleRecord, TrajectoryLog};
use crate::Vec2;

const AGENT_COLUMNS: [&str; 9] = ["t", "px", "py", "vx", "vy", "udx", "udy", "ux", "uy"];

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("line {line}: {message}")]
pub struct CsvError {
    pub line: usize,
    pub message: String,
}

pub fn header(obstacle_count: usize) -> String {
    let mut cols: Vec<String> = AGENT_COLUMNS.iter().map(|s| s.to_string()).collect();
    for k in 0..obstacle_count {
        for name in ["theta", "h", "cons", "clear"] {
            cols.push(format!("{name}_{k}"));
        }
    }
    cols.push("status".into());
    cols.join(",")
}

pub fn to_csv(log: &TrajectoryLog) -> String {
    let mut out = header(log.obstacle_count);
    out.push('\n');
    for r in &log.rows {
        let vals = [
            r.t,
            r.position.x,
            r.position.y,
            r.velocity.x,
            r.velocity.y,
            r.u_des.x,
            r.u_des.y,
            r.u.x,
            r.u.y,
        ];
        for v in vals {
            write!(out, "{v:.16e},").unwrap();
        }
        for o in &r.obstacles {
            write!(out, "{:.16e},{:.16e},{:.16e},{:.16e},", o.theta, o.h, o.constraint, o.clearance).unwrap();
        }
        out.push_str(r.status.as_str());
        out.push('\n');
    }
    out
}

/// Parses text produced by [`to_csv`]; returns the obstacle count and rows.
pub fn parse_csv(text: &str) -> Result<(usize, Vec<LogRow>), CsvError> {
    let mut lines = text.lines().enumerate();
    let (_, head) = lines.next().ok_or(CsvError {
        line: 1,
        message: "missing header".into(),
    })?;
    let width = head.split(',').count();
    if width < AGENT_COLUMNS.len() + 1 || !(width - AGENT_COLUMNS.len() - 1).is_multiple_of(4) {
        return Err(CsvError {
            line: 1,
            message: format!("unexpected column count {width}"),
        });
    }
    let count = (width - AGENT_COLUMNS.len() - 1) / 4;
    if head != header(count) {
        return Err(CsvError {
            line: 1,
            message: "header does not match the trajectory layout".into(),
        });
    }

    let mut rows = Vec::new();
    for (i, line) in lines {
        let err = |message: String| CsvError { line: i + 1, message };
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != width {
            return Err(err(format!("expected {width} fields, got {}", fields.len())));
        }
        let nums = fields[..width - 1]
            .iter()
            .map(|f| f.parse::<f64>().map_err(|e| err(format!("`{f}`: {e}"))))
            .collect::<Result<Vec<f64>, _>>()?;
        let status = FilterStatus::parse(fields[width - 1])
            .ok_or_else(|| err(format!("unknown status `{}`", fields[width - 1])))?;
        rows.push(LogRow {
            t: nums[0],
            position: Vec2::new(nums[1], nums[2]),
            velocity: Vec2::new(nums[3], nums[4]),
            u_des: Vec2::new(nums[5], nums[6]),
            u: Vec2::new(nums[7], nums[8]),
            obstacles: nums[9..]
                .chunks(4)
                .map(|c| ObstacleRecord {
                    theta: c[0],
                    h: c[1],
                    constraint: c[2],
                    clearance: c[3],
                })
                .collect(),
            status,
        });
    }
    Ok((count, rows))
}
