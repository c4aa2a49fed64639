//! Obstacle shapes, their support distances and closest-point queries.
//!
//! cargo run --example shapes_and_support

use std::f64::consts::FRAC_PI_4;

use hcbf::geometry::{closest_point, signed_distance, ObstacleShape};
use hcbf::Vec2;

fn main() -> Result<(), hcbf::GeometryError> {
    let shapes = [
        ("disc r=1", ObstacleShape::disc(1.0)?),
        ("ellipse 1.5x0.5 @30deg", ObstacleShape::ellipse(1.5, 0.5, 30f64.to_radians())?),
        ("rectangle 2x1", ObstacleShape::rectangle(2.0, 1.0)?),
        (
            "L-shape (convexified)",
            ObstacleShape::polygon(vec![
                Vec2::new(0.0, 0.0),
                Vec2::new(2.0, 0.0),
                Vec2::new(2.0, 0.5),
                Vec2::new(0.5, 0.5),
                Vec2::new(0.5, 2.0),
                Vec2::new(0.0, 2.0),
            ])?,
        ),
    ];

    let position = Vec2::new(3.0, 1.0);
    let probe = Vec2::new(0.0, 0.0);
    println!("{:<24}{:>10}{:>10}{:>10}{:>12}", "shape", "δ(0)", "δ(π/4)", "δ(π/2)", "distance");
    for (name, shape) in &shapes {
        println!(
            "{name:<24}{:>10.4}{:>10.4}{:>10.4}{:>12.4}",
            shape.support_distance(0.0),
            shape.support_distance(FRAC_PI_4),
            shape.support_distance(2.0 * FRAC_PI_4),
            signed_distance(shape, &position, &probe),
        );
    }

    let (_, ellipse) = &shapes[1];
    let q = closest_point(ellipse, &position, &probe)?;
    println!("closest ellipse point to the origin: ({:.4}, {:.4})", q.x, q.y);
    Ok(())
}
