//! Smooth conservative support model of a polygon.
//!
//! The truncated series alone undercuts the true support distance near the
//! hull corners; the margin lifts it until it bounds the support from above
//! on the verification grid.
//!
//! cargo run --example fourier_support

use std::f64::consts::TAU;

use hcbf::geometry::{fit_fourier, ObstacleShape, SupportKind, DEFAULT_FIT_GRID};
use hcbf::Vec2;

fn main() -> Result<(), hcbf::GeometryError> {
    let triangle = ObstacleShape::polygon(vec![Vec2::new(-1.0, -0.7), Vec2::new(1.0, -0.9), Vec2::new(0.2, 1.1)])?;

    for n in [4, 8, 16, 32] {
        let model = fit_fourier(&triangle, n, DEFAULT_FIT_GRID)?;
        let SupportKind::Fourier { margin, max_residual, .. } = model.kind() else { unreachable!() };
        let worst = (0..7200)
            .map(|k| TAU * k as f64 / 7200.0)
            .map(|t| model.obstacle_extent(t) - triangle.support_distance(t))
            .fold(f64::INFINITY, f64::min);
        println!("N = {n:>2}: margin {margin:.5}, max residual {max_residual:.5}, min slack {worst:+.2e}");
    }

    // a fit grid below 4N + 4 points cannot resolve N harmonics
    match fit_fourier(&triangle, 200, DEFAULT_FIT_GRID) {
        Err(e) => println!("N = 200: {e}"),
        Ok(_) => unreachable!(),
    }
    Ok(())
}
