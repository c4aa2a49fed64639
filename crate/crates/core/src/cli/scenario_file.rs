//! JSON scenario files.
//!
//! All quantities are SI: metres, seconds, radians, m/s, m/s². Unknown keys
//! are rejected at every level. Sections other than `agent` and `goal` may be
//! omitted and take the library defaults.
//!
//! ```json
//! {
//!   "agent": { "p": [-8.0, 1.5], "v": [2.0, 0.0], "radius": 0.0 },
//!   "goal": [8.0, 1.5],
//!   "gains": { "kp": 0.0, "kd": 0.0 },
//!   "limits": { "u_max": 1.0 },
//!   "sim": { "dt": 0.001, "duration": 8.0, "theta_update_every": 1 },
//!   "filter": { "mode": "least-restrictive", "alpha_gain": 1.0 },
//!   "obstacles": [
//!     { "shape": { "type": "disc", "radius": 1.0 }, "position": [0.0, 0.0] }
//!   ]
//! }
//! ```
//!
//! An obstacle `position` is the world position of the shape's reference
//! point: the centre for discs and ellipses, the centroid of the hull
//! vertices for polygons and radial outlines.

use std::path::Path;

use serde::{Deserialize, Serialize};

use super::CliError;
use crate::barrier::{AgentState, AlphaFunction, Limits};
use crate::filter::{FilterConfig, FilterMode};
use crate::geometry::{ObstacleShape, ShapeKind, DEFAULT_FOURIER_TERMS};
use crate::sim::{ObstacleSpec, PdGains, Scenario, ScenarioError, SupportSetting};
use crate::{Mat2, Vec2};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    pub agent: AgentSection,
    pub goal: [f64; 2],
    #[serde(default)]
    pub gains: GainsSection,
    #[serde(default)]
    pub limits: LimitsSection,
    #[serde(default)]
    pub sim: SimSection,
    #[serde(default)]
    pub filter: FilterSection,
    #[serde(default)]
    pub obstacles: Vec<ObstacleEntry>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AgentSection {
    pub p: [f64; 2],
    #[serde(default)]
    pub v: [f64; 2],
    #[serde(default)]
    pub radius: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GainsSection {
    pub kp: f64,
    pub kd: f64,
}

impl Default for GainsSection {
    fn default() -> Self {
        let g = PdGains::default();
        Self { kp: g.kp, kd: g.kd }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LimitsSection {
    pub u_max: f64,
}

impl Default for LimitsSection {
    fn default() -> Self {
        Self { u_max: 1.0 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SimSection {
    pub dt: f64,
    pub duration: f64,
    pub theta_update_every: usize,
}

impl Default for SimSection {
    fn default() -> Self {
        Self {
            dt: 0.01,
            duration: 10.0,
            theta_update_every: 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct FilterSection {
    /// `orthogonal`, `least-restrictive` or `fixed-theta`.
    pub mode: String,
    /// One angle per obstacle; required by `fixed-theta`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fixed_theta: Option<Vec<f64>>,
    pub alpha_gain: f64,
    /// Row-major QP weight.
    pub q: [[f64; 2]; 2],
    pub theta_grid: usize,
    pub refine_tol: f64,
    pub max_sweeps: usize,
}

impl Default for FilterSection {
    fn default() -> Self {
        let c = FilterConfig::default();
        Self {
            mode: c.mode.name().to_string(),
            fixed_theta: None,
            alpha_gain: c.alpha.gain,
            q: [[c.weight[(0, 0)], c.weight[(0, 1)]], [c.weight[(1, 0)], c.weight[(1, 1)]]],
            theta_grid: c.theta_grid,
            refine_tol: c.refine_tol,
            max_sweeps: c.max_sweeps,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ObstacleEntry {
    pub shape: ShapeEntry,
    pub position: [f64; 2],
    #[serde(default)]
    pub velocity: [f64; 2],
    #[serde(default)]
    pub support: SupportEntry,
}

/// Shape in its body frame.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case", deny_unknown_fields)]
pub enum ShapeEntry {
    Disc {
        radius: f64,
    },
    Ellipse {
        a: f64,
        b: f64,
        #[serde(default)]
        rotation: f64,
    },
    Polygon {
        vertices: Vec<[f64; 2]>,
    },
    /// `[φ, r(φ)]` pairs.
    Radial {
        samples: Vec<[f64; 2]>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, Default)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum SupportEntry {
    #[default]
    Exact,
    Fourier {
        #[serde(default = "default_terms")]
        n_terms: usize,
    },
}

fn default_terms() -> usize {
    DEFAULT_FOURIER_TERMS
}

fn vec2(a: [f64; 2]) -> Vec2 {
    Vec2::new(a[0], a[1])
}

fn arr(v: &Vec2) -> [f64; 2] {
    [v.x, v.y]
}

/// Parses a mode name. `fixed-theta` takes its angles from `fixed_theta`.
pub fn parse_mode(name: &str, fixed_theta: Option<&[f64]>) -> Result<FilterMode, ScenarioError> {
    match name {
        "orthogonal" => Ok(FilterMode::Orthogonal),
        "least-restrictive" => Ok(FilterMode::LeastRestrictive),
        "fixed-theta" => fixed_theta
            .map(|t| FilterMode::FixedTheta(t.to_vec()))
            .ok_or_else(|| ScenarioError::new("filter.fixed_theta", "required by mode fixed-theta")),
        other => Err(ScenarioError::new(
            "filter.mode",
            format!("unknown mode `{other}`, expected orthogonal, least-restrictive or fixed-theta"),
        )),
    }
}

impl ShapeEntry {
    pub fn to_shape(&self) -> Result<ObstacleShape, crate::geometry::GeometryError> {
        match self {
            ShapeEntry::Disc { radius } => ObstacleShape::disc(*radius),
            ShapeEntry::Ellipse { a, b, rotation } => ObstacleShape::ellipse(*a, *b, *rotation),
            ShapeEntry::Polygon { vertices } => ObstacleShape::polygon(vertices.iter().map(|v| vec2(*v)).collect()),
            ShapeEntry::Radial { samples } => ObstacleShape::radial(samples.iter().map(|s| (s[0], s[1])).collect()),
        }
    }

    pub fn from_shape(shape: &ObstacleShape) -> Self {
        match shape.kind() {
            ShapeKind::Disc { radius } => ShapeEntry::Disc { radius: *radius },
            ShapeKind::Ellipse { a, b, rotation } => ShapeEntry::Ellipse {
                a: *a,
                b: *b,
                rotation: *rotation,
            },
            ShapeKind::Polygon { vertices } => ShapeEntry::Polygon {
                vertices: vertices.iter().map(arr).collect(),
            },
            ShapeKind::GeneralRadial { samples } => ShapeEntry::Radial {
                samples: samples.iter().map(|&(p, r)| [p, r]).collect(),
            },
        }
    }
}

impl ScenarioFile {
    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("scenario files always serialize")
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        Self::from_json(&text).map_err(|e| CliError::parse(path, &e))
    }

    /// Builds the in-memory scenario. Only shape construction is checked
    /// here; everything else is left to [`Scenario::validate`].
    pub fn to_scenario(&self) -> Result<Scenario, ScenarioError> {
        let f = &self.filter;
        let filter = FilterConfig {
            weight: Mat2::new(f.q[0][0], f.q[0][1], f.q[1][0], f.q[1][1]),
            alpha: AlphaFunction::new(f.alpha_gain),
            theta_grid: f.theta_grid,
            refine_tol: f.refine_tol,
            max_sweeps: f.max_sweeps,
            mode: parse_mode(&f.mode, f.fixed_theta.as_deref())?,
        };
        let obstacles = self
            .obstacles
            .iter()
            .enumerate()
            .map(|(k, o)| {
                let shape = o
                    .shape
                    .to_shape()
                    .map_err(|e| ScenarioError::new(format!("obstacles[{k}].shape"), e.to_string()))?;
                let support = match o.support {
                    SupportEntry::Exact => SupportSetting::Exact,
                    SupportEntry::Fourier { n_terms } => SupportSetting::Fourier { n_terms },
                };
                Ok(ObstacleSpec::moving(shape, vec2(o.position), vec2(o.velocity)).with_support(support))
            })
            .collect::<Result<Vec<_>, ScenarioError>>()?;
        Ok(Scenario {
            agent: AgentState::new(vec2(self.agent.p), vec2(self.agent.v)),
            agent_radius: self.agent.radius,
            goal: vec2(self.goal),
            gains: PdGains {
                kp: self.gains.kp,
                kd: self.gains.kd,
            },
            limits: Limits::new(self.limits.u_max),
            dt: self.sim.dt,
            duration: self.sim.duration,
            obstacles,
            filter,
            theta_update_every: self.sim.theta_update_every,
        })
    }

    pub fn from_scenario(s: &Scenario) -> Self {
        let w = &s.filter.weight;
        let fixed_theta = match &s.filter.mode {
            FilterMode::FixedTheta(t) => Some(t.clone()),
            _ => None,
        };
        Self {
            agent: AgentSection {
                p: arr(&s.agent.position),
                v: arr(&s.agent.velocity),
                radius: s.agent_radius,
            },
            goal: arr(&s.goal),
            gains: GainsSection {
                kp: s.gains.kp,
                kd: s.gains.kd,
            },
            limits: LimitsSection { u_max: s.limits.u_max },
            sim: SimSection {
                dt: s.dt,
                duration: s.duration,
                theta_update_every: s.theta_update_every,
            },
            filter: FilterSection {
                mode: s.filter.mode.name().to_string(),
                fixed_theta,
                alpha_gain: s.filter.alpha.gain,
                q: [[w[(0, 0)], w[(0, 1)]], [w[(1, 0)], w[(1, 1)]]],
                theta_grid: s.filter.theta_grid,
                refine_tol: s.filter.refine_tol,
                max_sweeps: s.filter.max_sweeps,
            },
            obstacles: s
                .obstacles
                .iter()
                .map(|o| ObstacleEntry {
                    shape: ShapeEntry::from_shape(&o.shape),
                    position: arr(&o.position),
                    velocity: arr(&o.velocity),
                    support: match o.support {
                        SupportSetting::Exact => SupportEntry::Exact,
                        SupportSetting::Fourier { n_terms } => SupportEntry::Fourier { n_terms },
                    },
                })
                .collect(),
        }
    }
}
