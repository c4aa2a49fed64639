//! Static SVG plots: plan view with agent snapshots, time series, and a polar
//! support-distance plot. Every plot uses a fixed 800×600 viewBox.

use std::f64::consts::TAU;
use std::fmt::Write;

use crate::geometry::{direction, ObstacleShape};
use crate::sim::{Scenario, TrajectoryLog};
use crate::Vec2;

const WIDTH: f64 = 800.0;
const HEIGHT: f64 = 600.0;
const MARGIN: f64 = 50.0;
const SNAPSHOTS: usize = 10;

pub const PALETTE: [&str; 4] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd"];

/// World-to-canvas map with equal axis scales and y pointing up.
struct Frame {
    origin: Vec2,
    scale: f64,
    x0: f64,
    y0: f64,
}

impl Frame {
    fn fit(points: impl IntoIterator<Item = Vec2>) -> Self {
        let (mut lo, mut hi) = (Vec2::repeat(f64::INFINITY), Vec2::repeat(f64::NEG_INFINITY));
        for p in points.into_iter().filter(|p| p.iter().all(|c| c.is_finite())) {
            lo = lo.inf(&p);
            hi = hi.sup(&p);
        }
        if !lo.x.is_finite() {
            lo = Vec2::repeat(-1.0);
            hi = Vec2::repeat(1.0);
        }
        let span = (hi - lo).map(|s| s.max(1e-9));
        let scale = ((WIDTH - 2.0 * MARGIN) / span.x).min((HEIGHT - 2.0 * MARGIN) / span.y);
        Self {
            origin: lo,
            scale,
            x0: 0.5 * (WIDTH - scale * span.x),
            y0: 0.5 * (HEIGHT + scale * span.y),
        }
    }

    fn map(&self, p: &Vec2) -> (f64, f64) {
        let d = p - self.origin;
        (self.x0 + self.scale * d.x, self.y0 - self.scale * d.y)
    }
}

fn open(out: &mut String, title: &str) {
    writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {WIDTH} {HEIGHT}" width="{WIDTH}" height="{HEIGHT}" font-family="sans-serif" font-size="12">"#
    )
    .unwrap();
    writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#).unwrap();
    writeln!(out, r#"<text x="{}" y="24" text-anchor="middle" font-size="16">{}</text>"#, WIDTH / 2.0, escape(title)).unwrap();
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

fn path_data(points: impl IntoIterator<Item = (f64, f64)>, close: bool) -> String {
    let mut d = String::new();
    let mut pen_up = true;
    for (x, y) in points {
        if !(x.is_finite() && y.is_finite()) {
            pen_up = true;
            continue;
        }
        write!(d, "{}{x:.2},{y:.2} ", if pen_up { "M" } else { "L" }).unwrap();
        pen_up = false;
    }
    if close {
        d.push('Z');
    }
    d
}

fn outline(shape: &ObstacleShape, position: &Vec2) -> Vec<Vec2> {
    shape.boundary_samples(16).into_iter().map(|o| position + o).collect()
}

fn legend(out: &mut String, entries: &[(&str, &str)]) {
    for (i, (label, colour)) in entries.iter().enumerate() {
        let y = 44.0 + 18.0 * i as f64;
        writeln!(
            out,
            r#"<line x1="{x1}" y1="{y}" x2="{x2}" y2="{y}" stroke="{colour}" stroke-width="2"/><text x="{tx}" y="{ty}">{label}</text>"#,
            x1 = WIDTH - 190.0,
            x2 = WIDTH - 165.0,
            tx = WIDTH - 158.0,
            ty = y + 4.0,
            label = escape(label),
        )
        .unwrap();
    }
}

/// Plan view of one or more runs of the same scenario. Obstacles and agents
/// are drawn at evenly spaced snapshot times, older snapshots fainter.
pub fn plan_view(scenario: &Scenario, runs: &[(&TrajectoryLog, &str)], title: &str) -> String {
    let t_end = runs.iter().map(|(l, _)| l.last().t).fold(0.0, f64::max);
    let times: Vec<f64> = (0..SNAPSHOTS).map(|i| t_end * i as f64 / (SNAPSHOTS - 1) as f64).collect();
    let at = |p: &Vec2, v: &Vec2, t: f64| p + v * t;

    let mut extent: Vec<Vec2> = vec![scenario.goal, scenario.agent.position];
    for o in &scenario.obstacles {
        extent.extend(outline(&o.shape, &o.position));
        extent.extend(outline(&o.shape, &at(&o.position, &o.velocity, t_end)));
    }
    for (log, _) in runs {
        extent.extend(log.rows.iter().map(|r| r.position));
    }
    let frame = Frame::fit(extent);

    let mut out = String::new();
    open(&mut out, title);
    for o in &scenario.obstacles {
        let moving = o.velocity.norm() > 0.0;
        let shown: &[f64] = if moving { &times } else { &times[..1] };
        for (i, &t) in shown.iter().enumerate() {
            let opacity = if moving { 0.1 + 0.5 * (i + 1) as f64 / shown.len() as f64 } else { 0.6 };
            let pts = outline(&o.shape, &at(&o.position, &o.velocity, t));
            writeln!(
                out,
                r##"<path d="{}" fill="#7f7f7f" fill-opacity="{opacity:.3}" stroke="#404040" stroke-opacity="{opacity:.3}"/>"##,
                path_data(pts.iter().map(|p| frame.map(p)), true)
            )
            .unwrap();
        }
    }

    let radius_px = (scenario.agent_radius * frame.scale).max(4.0);
    for (log, colour) in runs {
        writeln!(
            out,
            r#"<path d="{}" fill="none" stroke="{colour}" stroke-width="1.5"/>"#,
            path_data(log.rows.iter().map(|r| frame.map(&r.position)), false)
        )
        .unwrap();
        for (i, &t) in times.iter().enumerate() {
            let k = log.rows.partition_point(|r| r.t < t - 1e-12).min(log.rows.len() - 1);
            let (x, y) = frame.map(&log.rows[k].position);
            let opacity = 0.1 + 0.9 * (i + 1) as f64 / SNAPSHOTS as f64;
            writeln!(
                out,
                r#"<circle cx="{x:.2}" cy="{y:.2}" r="{radius_px:.2}" fill="{colour}" fill-opacity="{opacity:.3}"/>"#
            )
            .unwrap();
        }
    }

    let (gx, gy) = frame.map(&scenario.goal);
    writeln!(
        out,
        r#"<path d="M{:.2},{gy:.2} L{:.2},{gy:.2} M{gx:.2},{:.2} L{gx:.2},{:.2}" stroke="black" stroke-width="2"/>"#,
        gx - 6.0,
        gx + 6.0,
        gy - 6.0,
        gy + 6.0
    )
    .unwrap();
    let entries: Vec<(&str, &str)> = runs.iter().map(|(l, c)| (l.mode.name(), *c)).collect();
    legend(&mut out, &entries);
    out.push_str("</svg>\n");
    out
}

pub struct Series {
    pub label: String,
    pub colour: &'static str,
    pub points: Vec<(f64, f64)>,
}

fn nice_step(range: f64) -> f64 {
    let raw = range / 5.0;
    let mag = 10f64.powf(raw.log10().floor());
    let norm = raw / mag;
    let step = if norm < 1.5 {
        1.0
    } else if norm < 3.0 {
        2.0
    } else if norm < 7.0 {
        5.0
    } else {
        10.0
    };
    step * mag
}

fn ticks(lo: f64, hi: f64) -> Vec<f64> {
    let step = nice_step(hi - lo);
    let first = (lo / step).ceil() as i64;
    let last = (hi / step).floor() as i64;
    (first..=last).map(|k| k as f64 * step).collect()
}

/// Line chart against time. Non-finite samples break the line.
pub fn time_series(title: &str, y_label: &str, series: &[Series]) -> String {
    let finite = series
        .iter()
        .flat_map(|s| s.points.iter())
        .filter(|(x, y)| x.is_finite() && y.is_finite());
    let (mut x_lo, mut x_hi, mut y_lo, mut y_hi) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
    for &(x, y) in finite {
        x_lo = x_lo.min(x);
        x_hi = x_hi.max(x);
        y_lo = y_lo.min(y);
        y_hi = y_hi.max(y);
    }
    if !x_lo.is_finite() {
        (x_lo, x_hi, y_lo, y_hi) = (0.0, 1.0, 0.0, 1.0);
    }
    y_lo = y_lo.min(0.0);
    y_hi = y_hi.max(0.0);
    if x_hi - x_lo < 1e-12 {
        x_hi = x_lo + 1.0;
    }
    if y_hi - y_lo < 1e-12 {
        y_hi = y_lo + 1.0;
    }
    let pad = 0.05 * (y_hi - y_lo);
    let (y_lo, y_hi) = (y_lo - pad, y_hi + pad);

    let left = 80.0;
    let right = WIDTH - 30.0;
    let (top, bottom) = (40.0, HEIGHT - 50.0);
    let sx = |x: f64| left + (x - x_lo) / (x_hi - x_lo) * (right - left);
    let sy = |y: f64| bottom - (y - y_lo) / (y_hi - y_lo) * (bottom - top);

    let mut out = String::new();
    open(&mut out, title);
    writeln!(
        out,
        r#"<rect x="{left}" y="{top}" width="{}" height="{}" fill="none" stroke="black"/>"#,
        right - left,
        bottom - top
    )
    .unwrap();
    for x in ticks(x_lo, x_hi) {
        let px = sx(x);
        writeln!(
            out,
            r##"<line x1="{px:.2}" y1="{top}" x2="{px:.2}" y2="{bottom}" stroke="#e0e0e0"/><text x="{px:.2}" y="{}" text-anchor="middle">{}</text>"##,
            bottom + 16.0,
            format_tick(x)
        )
        .unwrap();
    }
    for y in ticks(y_lo, y_hi) {
        let py = sy(y);
        writeln!(
            out,
            r##"<line x1="{left}" y1="{py:.2}" x2="{right}" y2="{py:.2}" stroke="#e0e0e0"/><text x="{}" y="{:.2}" text-anchor="end">{}</text>"##,
            left - 6.0,
            py + 4.0,
            format_tick(y)
        )
        .unwrap();
    }
    writeln!(
        out,
        r#"<line x1="{left}" y1="{z:.2}" x2="{right}" y2="{z:.2}" stroke="black" stroke-dasharray="4 3"/>"#,
        z = sy(0.0)
    )
    .unwrap();
    writeln!(
        out,
        r#"<text x="{}" y="{}" text-anchor="middle">t [s]</text><text x="18" y="{}" text-anchor="middle" transform="rotate(-90 18 {})">{}</text>"#,
        0.5 * (left + right),
        HEIGHT - 12.0,
        0.5 * (top + bottom),
        0.5 * (top + bottom),
        escape(y_label)
    )
    .unwrap();
    for s in series {
        writeln!(
            out,
            r#"<path d="{}" fill="none" stroke="{}" stroke-width="1.5"/>"#,
            path_data(s.points.iter().map(|&(x, y)| (sx(x), sy(y))), false),
            s.colour
        )
        .unwrap();
    }
    let entries: Vec<(&str, &str)> = series.iter().map(|s| (s.label.as_str(), s.colour)).collect();
    legend(&mut out, &entries);
    out.push_str("</svg>\n");
    out
}

fn format_tick(v: f64) -> String {
    let s = format!("{v:.6}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" { "0".into() } else { s.to_string() }
}

/// Barrier constraint `ḣ + α(h)` at the applied control, one line per obstacle.
pub fn constraint_plot(log: &TrajectoryLog) -> String {
    let series: Vec<Series> = (0..log.obstacle_count)
        .map(|k| Series {
            label: format!("obstacle {k}"),
            colour: PALETTE[k % PALETTE.len()],
            points: log.rows.iter().map(|r| (r.t, r.obstacles[k].constraint)).collect(),
        })
        .collect();
    time_series("Barrier constraint", "dh/dt + alpha(h)", &series)
}

pub fn intervention_plot(runs: &[(&TrajectoryLog, &'static str)]) -> String {
    let series: Vec<Series> = runs
        .iter()
        .map(|(log, colour)| Series {
            label: log.mode.name().into(),
            colour,
            points: log.rows.iter().map(|r| (r.t, (r.u - r.u_des).norm())).collect(),
        })
        .collect();
    time_series("Filter intervention", "|u - u_des| [m/s²]", &series)
}

pub fn goal_distance_plot(runs: &[(&TrajectoryLog, &'static str)], goal: &Vec2) -> String {
    let series: Vec<Series> = runs
        .iter()
        .map(|(log, colour)| Series {
            label: log.mode.name().into(),
            colour,
            points: log.rows.iter().map(|r| (r.t, (r.position - goal).norm())).collect(),
        })
        .collect();
    time_series("Distance to goal", "distance [m]", &series)
}

/// Polar plot of the exact support distance and its conservative
/// approximation, each drawn as the curve `δ(θ)·[cos θ, sin θ]`.
pub fn support_polar(exact: impl Fn(f64) -> f64, approx: impl Fn(f64) -> f64, title: &str) -> String {
    let n = 720;
    let curve = |f: &dyn Fn(f64) -> f64| -> Vec<Vec2> {
        (0..n)
            .map(|k| {
                let t = TAU * k as f64 / n as f64;
                direction(t) * f(t)
            })
            .collect()
    };
    let a = curve(&exact);
    let b = curve(&approx);
    let frame = Frame::fit(a.iter().chain(&b).copied().chain([Vec2::zeros()]));
    let mut out = String::new();
    open(&mut out, title);
    let (cx, cy) = frame.map(&Vec2::zeros());
    writeln!(out, r#"<circle cx="{cx:.2}" cy="{cy:.2}" r="3" fill="black"/>"#).unwrap();
    for (pts, colour) in [(&a, PALETTE[0]), (&b, PALETTE[1])] {
        writeln!(
            out,
            r#"<path d="{}" fill="none" stroke="{colour}" stroke-width="1.5"/>"#,
            path_data(pts.iter().map(|p| frame.map(p)), true)
        )
        .unwrap();
    }
    legend(&mut out, &[("exact support", PALETTE[0]), ("fit + margin", PALETTE[1])]);
    out.push_str("</svg>\n");
    out
}
