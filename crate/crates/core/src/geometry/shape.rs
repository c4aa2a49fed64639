use std::f64::consts::TAU;

use super::{convex_hull, cross, direction, rotate, GeometryError};
use crate::Vec2;

/// Geometric description of an obstacle, in its own body frame.
#[derive(Debug, Clone, PartialEq)]
pub enum ShapeKind {
    /// Disc centred on the body origin.
    Disc { radius: f64 },
    /// Ellipse centred on the body origin with semi-axes `a >= b`, the major
    /// axis rotated by `rotation` radians.
    Ellipse { a: f64, b: f64, rotation: f64 },
    /// Polygon vertices in the body frame. Non-convex input is convexified.
    Polygon { vertices: Vec<Vec2> },
    /// Radial outline `(φ, r(φ))` around the body origin. Convexified.
    GeneralRadial { samples: Vec<(f64, f64)> },
}

/// A validated obstacle shape together with its reference point.
///
/// Polygon and radial shapes keep their convex hull, translated so that the
/// reference point (the centroid of the hull vertices) is the origin.
#[derive(Debug, Clone, PartialEq)]
pub struct ObstacleShape {
    kind: ShapeKind,
    reference: Vec2,
    hull: Vec<Vec2>,
}

impl ObstacleShape {
    pub fn new(kind: ShapeKind) -> Result<Self, GeometryError> {
        match &kind {
            ShapeKind::Disc { radius } => {
                if !(radius.is_finite() && *radius > 0.0) {
                    return Err(GeometryError::InvalidShape(format!(
                        "disc radius must be positive, got {radius}"
                    )));
                }
                Ok(Self {
                    kind,
                    reference: Vec2::zeros(),
                    hull: Vec::new(),
                })
            }
            ShapeKind::Ellipse { a, b, rotation } => {
                if !(a.is_finite() && b.is_finite() && rotation.is_finite()) {
                    return Err(GeometryError::InvalidShape("non-finite ellipse parameter".into()));
                }
                if !(*b > 0.0 && a >= b) {
                    return Err(GeometryError::InvalidShape(format!(
                        "ellipse needs a >= b > 0, got a = {a}, b = {b}"
                    )));
                }
                Ok(Self {
                    kind,
                    reference: Vec2::zeros(),
                    hull: Vec::new(),
                })
            }
            ShapeKind::Polygon { vertices } => {
                let hull = convex_hull(vertices)?;
                Ok(Self::from_hull(kind, hull))
            }
            ShapeKind::GeneralRadial { samples } => {
                validate_radial(samples)?;
                let pts: Vec<Vec2> = samples.iter().map(|&(phi, r)| direction(phi) * r).collect();
                let hull = convex_hull(&pts)?;
                Ok(Self::from_hull(kind, hull))
            }
        }
    }

    pub fn disc(radius: f64) -> Result<Self, GeometryError> {
        Self::new(ShapeKind::Disc { radius })
    }

    pub fn ellipse(a: f64, b: f64, rotation: f64) -> Result<Self, GeometryError> {
        Self::new(ShapeKind::Ellipse { a, b, rotation })
    }

    pub fn polygon(vertices: Vec<Vec2>) -> Result<Self, GeometryError> {
        Self::new(ShapeKind::Polygon { vertices })
    }

    pub fn radial(samples: Vec<(f64, f64)>) -> Result<Self, GeometryError> {
        Self::new(ShapeKind::GeneralRadial { samples })
    }

    /// Axis-aligned rectangle centred on the body origin.
    pub fn rectangle(width: f64, height: f64) -> Result<Self, GeometryError> {
        let (hw, hh) = (0.5 * width, 0.5 * height);
        Self::polygon(vec![
            Vec2::new(-hw, -hh),
            Vec2::new(hw, -hh),
            Vec2::new(hw, hh),
            Vec2::new(-hw, hh),
        ])
    }

    fn from_hull(kind: ShapeKind, hull: Vec<Vec2>) -> Self {
        let reference = hull.iter().sum::<Vec2>() / hull.len() as f64;
        let hull = hull.into_iter().map(|v| v - reference).collect();
        Self {
            kind,
            reference,
            hull,
        }
    }

    pub fn kind(&self) -> &ShapeKind {
        &self.kind
    }

    /// Reference point `p_o` in the frame the shape was specified in.
    pub fn reference_point(&self) -> Vec2 {
        self.reference
    }

    /// Hull vertices relative to the reference point (CCW), for polygon and
    /// radial shapes.
    pub fn hull_offsets(&self) -> Option<&[Vec2]> {
        match self.kind {
            ShapeKind::Polygon { .. } | ShapeKind::GeneralRadial { .. } => Some(&self.hull),
            _ => None,
        }
    }

    /// Points on the hull boundary relative to the reference point. Polygonal
    /// hulls contribute their vertices plus `per_edge - 1` interior points per
    /// edge; smooth shapes are sampled at `per_edge * 4` parameter values.
    pub fn boundary_samples(&self, per_edge: usize) -> Vec<Vec2> {
        let per_edge = per_edge.max(1);
        match &self.kind {
            ShapeKind::Disc { radius } => (0..4 * per_edge)
                .map(|k| direction(TAU * k as f64 / (4 * per_edge) as f64) * *radius)
                .collect(),
            ShapeKind::Ellipse { a, b, rotation } => (0..4 * per_edge)
                .map(|k| {
                    let g = TAU * k as f64 / (4 * per_edge) as f64;
                    rotate(&Vec2::new(a * g.cos(), b * g.sin()), *rotation)
                })
                .collect(),
            _ => {
                let n = self.hull.len();
                let mut out = Vec::with_capacity(n * per_edge);
                for i in 0..n {
                    let (p, q) = (self.hull[i], self.hull[(i + 1) % n]);
                    for k in 0..per_edge {
                        out.push(p + (q - p) * (k as f64 / per_edge as f64));
                    }
                }
                out
            }
        }
    }

    /// Whether `offset` (relative to the reference point) lies in the closed hull.
    pub fn contains(&self, offset: &Vec2) -> bool {
        match &self.kind {
            ShapeKind::Disc { radius } => offset.norm() <= *radius,
            ShapeKind::Ellipse { a, b, rotation } => {
                let q = rotate(offset, -rotation);
                (q.x / a).powi(2) + (q.y / b).powi(2) <= 1.0
            }
            _ => {
                let n = self.hull.len();
                (0..n).all(|i| {
                    let e = self.hull[(i + 1) % n] - self.hull[i];
                    cross(&e, &(offset - self.hull[i])) >= 0.0
                })
            }
        }
    }

    /// Largest distance from the reference point to the hull.
    pub fn bounding_radius(&self) -> f64 {
        match &self.kind {
            ShapeKind::Disc { radius } => *radius,
            ShapeKind::Ellipse { a, .. } => *a,
            _ => self.hull.iter().map(|v| v.norm()).fold(0.0, f64::max),
        }
    }
}

fn validate_radial(samples: &[(f64, f64)]) -> Result<(), GeometryError> {
    if samples.len() < 8 {
        return Err(GeometryError::InvalidShape(format!(
            "radial outline needs at least 8 samples, got {}",
            samples.len()
        )));
    }
    for (k, &(phi, r)) in samples.iter().enumerate() {
        if !(phi.is_finite() && r.is_finite()) {
            return Err(GeometryError::InvalidShape(format!("sample {k} is not finite")));
        }
        if r <= 0.0 {
            return Err(GeometryError::InvalidShape(format!(
                "sample {k} has non-positive radius {r}"
            )));
        }
        if !(0.0..TAU).contains(&phi) {
            return Err(GeometryError::InvalidShape(format!(
                "sample {k} angle {phi} outside [0, 2π)"
            )));
        }
        if k > 0 && phi <= samples[k - 1].0 {
            return Err(GeometryError::InvalidShape(format!(
                "sample angles must be strictly increasing (sample {k})"
            )));
        }
    }
    Ok(())
}
