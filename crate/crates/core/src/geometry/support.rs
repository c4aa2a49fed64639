use super::{direction, FourierSeries, ObstacleShape, ShapeKind};
use crate::Vec2;

/// Support distance of a centred ellipse with semi-axes `a`, `b` whose major
/// axis is rotated by `rotation`, along direction `theta`.
///
/// The maximizing boundary parameter (eccentric anomaly) is
/// `γ = atan2(b sin t, a cos t)` with `t = θ - rotation`.
pub fn ellipse_support(a: f64, b: f64, rotation: f64, theta: f64) -> f64 {
    let (st, ct) = (theta - rotation).sin_cos();
    let gamma = (b * st).atan2(a * ct);
    let (sg, cg) = gamma.sin_cos();
    a * ct * cg + b * st * sg
}

fn polygon_support(offsets: &[Vec2], theta: f64) -> f64 {
    let n = direction(theta);
    offsets
        .iter()
        .map(|v| n.dot(v))
        .fold(f64::NEG_INFINITY, f64::max)
}

impl ObstacleShape {
    /// How far the hull extends beyond the line through the reference point
    /// with normal `[cos θ, sin θ]`.
    pub fn support_distance(&self, theta: f64) -> f64 {
        match self.kind() {
            ShapeKind::Disc { radius } => *radius,
            ShapeKind::Ellipse { a, b, rotation } => ellipse_support(*a, *b, *rotation, theta),
            _ => polygon_support(self.hull_offsets().unwrap_or(&[]), theta),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum SupportKind {
    ExactDisc {
        radius: f64,
    },
    ExactEllipse {
        a: f64,
        b: f64,
        rotation: f64,
    },
    /// Hull offsets from the reference point.
    ExactPolygon {
        vertices: Vec<Vec2>,
    },
    /// Truncated Fourier series plus the margin that makes it conservative.
    Fourier {
        series: FourierSeries,
        margin: f64,
        /// Largest `|δ - δ̃|` seen on the verification grid.
        max_residual: f64,
    },
}

/// Angle-dependent safety distance `δ_ij(θ) = r_i + δ_j(θ)` used by the
/// barrier, either exact or a smooth conservative approximation.
#[derive(Debug, Clone, PartialEq)]
pub struct SupportModel {
    kind: SupportKind,
    agent_radius: f64,
}

impl SupportModel {
    pub(crate) fn from_kind(kind: SupportKind) -> Self {
        Self {
            kind,
            agent_radius: 0.0,
        }
    }

    /// Exact support distance of `shape`. Radial shapes use their polygonal hull.
    pub fn exact(shape: &ObstacleShape) -> Self {
        let kind = match shape.kind() {
            ShapeKind::Disc { radius } => SupportKind::ExactDisc { radius: *radius },
            ShapeKind::Ellipse { a, b, rotation } => SupportKind::ExactEllipse {
                a: *a,
                b: *b,
                rotation: *rotation,
            },
            _ => SupportKind::ExactPolygon {
                vertices: shape.hull_offsets().unwrap_or(&[]).to_vec(),
            },
        };
        Self::from_kind(kind)
    }

    pub fn with_agent_radius(mut self, agent_radius: f64) -> Self {
        self.agent_radius = agent_radius;
        self
    }

    pub fn kind(&self) -> &SupportKind {
        &self.kind
    }

    pub fn agent_radius(&self) -> f64 {
        self.agent_radius
    }

    /// Conservativeness margin of a Fourier model.
    pub fn margin(&self) -> Option<f64> {
        match self.kind {
            SupportKind::Fourier { margin, .. } => Some(margin),
            _ => None,
        }
    }

    pub fn is_exact(&self) -> bool {
        !matches!(self.kind, SupportKind::Fourier { .. })
    }

    /// Obstacle part of the safety distance at `theta` (margin included).
    pub fn obstacle_extent(&self, theta: f64) -> f64 {
        match &self.kind {
            SupportKind::ExactDisc { radius } => *radius,
            SupportKind::ExactEllipse { a, b, rotation } => ellipse_support(*a, *b, *rotation, theta),
            SupportKind::ExactPolygon { vertices } => polygon_support(vertices, theta),
            SupportKind::Fourier { series, margin, .. } => series.eval(theta) + margin,
        }
    }

    /// Total distance `r_i + δ_j(θ)` required between the agent centre and the
    /// obstacle reference point along the normal.
    pub fn safety_distance(&self, theta: f64) -> f64 {
        self.agent_radius + self.obstacle_extent(theta)
    }
}
