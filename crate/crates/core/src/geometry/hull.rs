use std::cmp::Ordering;

use super::{cross, GeometryError};
use crate::Vec2;

/// Convex hull by Andrew's monotone chain.
///
/// Returns the hull vertices in counter-clockwise order starting from the
/// lexicographically smallest point (x first, ties by y). Points lying on a
/// hull edge are dropped.
pub fn convex_hull(points: &[Vec2]) -> Result<Vec<Vec2>, GeometryError> {
    if points.len() < 3 {
        return Err(GeometryError::Degenerate(format!(
            "need at least 3 points, got {}",
            points.len()
        )));
    }
    if points.iter().any(|p| !p.x.is_finite() || !p.y.is_finite()) {
        return Err(GeometryError::Degenerate("non-finite coordinate".into()));
    }

    let mut pts: Vec<Vec2> = points.to_vec();
    pts.sort_by(|a, b| match a.x.total_cmp(&b.x) {
        Ordering::Equal => a.y.total_cmp(&b.y),
        o => o,
    });
    pts.dedup();

    let turn = |o: &Vec2, a: &Vec2, b: &Vec2| cross(&(a - o), &(b - o));

    let mut hull: Vec<Vec2> = Vec::with_capacity(2 * pts.len());
    for p in &pts {
        while hull.len() >= 2 && turn(&hull[hull.len() - 2], &hull[hull.len() - 1], p) <= 0.0 {
            hull.pop();
        }
        hull.push(*p);
    }
    let lower_len = hull.len() + 1;
    for p in pts.iter().rev().skip(1) {
        while hull.len() >= lower_len && turn(&hull[hull.len() - 2], &hull[hull.len() - 1], p) <= 0.0
        {
            hull.pop();
        }
        hull.push(*p);
    }
    hull.pop();

    if hull.len() < 3 {
        return Err(GeometryError::Degenerate("points are collinear".into()));
    }
    Ok(hull)
}

/// Twice the signed area of a closed polygon (positive when CCW).
#[cfg(test)]
fn signed_area2(poly: &[Vec2]) -> f64 {
    let n = poly.len();
    (0..n).map(|i| cross(&poly[i], &poly[(i + 1) % n])).sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    /// Hull vertex set by testing every ordered pair as a candidate edge.
    fn pairwise_halfplane_hull(points: &[Vec2]) -> Vec<Vec2> {
        let mut out: Vec<Vec2> = Vec::new();
        for (i, a) in points.iter().enumerate() {
            for (j, b) in points.iter().enumerate() {
                if i == j {
                    continue;
                }
                let edge = b - a;
                let all_left = points
                    .iter()
                    .enumerate()
                    .filter(|(k, _)| *k != i && *k != j)
                    .all(|(_, p)| cross(&edge, &(p - a)) > 0.0);
                if all_left {
                    for v in [a, b] {
                        if !out.contains(v) {
                            out.push(*v);
                        }
                    }
                }
            }
        }
        out
    }

    fn same_set(a: &[Vec2], b: &[Vec2]) -> bool {
        a.len() == b.len() && a.iter().all(|p| b.contains(p))
    }

    #[test]
    fn square_with_center_drops_interior_point() {
        let pts = [
            Vec2::new(0.0, 0.0),
            Vec2::new(1.0, 0.0),
            Vec2::new(1.0, 1.0),
            Vec2::new(0.0, 1.0),
            Vec2::new(0.5, 0.5),
        ];
        let hull = convex_hull(&pts).unwrap();
        assert_eq!(hull.len(), 4);
        assert!(same_set(&hull, &pts[..4]));
        assert!(signed_area2(&hull) > 0.0);
    }

    #[test]
    fn triangle_is_returned_ccw() {
        let pts = [Vec2::new(0.0, 0.0), Vec2::new(0.0, 1.0), Vec2::new(1.0, 0.0)];
        let hull = convex_hull(&pts).unwrap();
        assert_eq!(
            hull,
            vec![Vec2::new(0.0, 0.0), Vec2::new(1.0, 0.0), Vec2::new(0.0, 1.0)]
        );
    }

    #[test]
    fn collinear_and_short_inputs_are_rejected() {
        let line = [Vec2::new(0.0, 0.0), Vec2::new(1.0, 1.0), Vec2::new(2.0, 2.0)];
        assert!(matches!(convex_hull(&line), Err(GeometryError::Degenerate(_))));
        let two = [Vec2::new(0.0, 0.0), Vec2::new(1.0, 1.0)];
        assert!(convex_hull(&two).is_err());
        let dup = [Vec2::new(1.0, 1.0); 5];
        assert!(convex_hull(&dup).is_err());
    }

    #[test]
    fn edge_midpoints_are_dropped() {
        let pts = [
            Vec2::new(0.0, 0.0),
            Vec2::new(1.0, 0.0),
            Vec2::new(2.0, 0.0),
            Vec2::new(2.0, 2.0),
            Vec2::new(0.0, 2.0),
        ];
        assert_eq!(convex_hull(&pts).unwrap().len(), 4);
    }

    #[test]
    fn random_disc_points_match_pairwise_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20 {
            let pts: Vec<Vec2> = (0..50)
                .map(|_| {
                    let r: f64 = rng.gen::<f64>().sqrt();
                    let a: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
                    Vec2::new(r * a.cos(), r * a.sin())
                })
                .collect();
            let hull = convex_hull(&pts).unwrap();
            let oracle = pairwise_halfplane_hull(&pts);
            assert!(same_set(&hull, &oracle), "hull {hull:?} oracle {oracle:?}");
            // every input point inside or on the hull
            let n = hull.len();
            for p in &pts {
                for i in 0..n {
                    let e = hull[(i + 1) % n] - hull[i];
                    assert!(cross(&e, &(p - hull[i])) >= -1e-12);
                }
            }
        }
    }
}
