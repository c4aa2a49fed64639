//! Seeded random filter instances for oracle cross-checks.
//!
//! Instance `i` of a run with seed `s` draws from a ChaCha8 stream seeded
//! with `s + i · 0x9E3779B97F4A7C15` (wrapping), so single instances can be
//! regenerated in isolation.

use std::f64::consts::TAU;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::barrier::{h_value, AgentState, Limits, Obstacle, ObstacleState};
use crate::geometry::{fit_fourier, ObstacleShape, SupportModel, DEFAULT_FIT_GRID};
use crate::Vec2;

const SEED_STRIDE: u64 = 0x9E37_79B9_7F4A_7C15;

#[derive(Debug, Clone)]
pub struct FilterInstance {
    pub agent: AgentState,
    pub obstacles: Vec<Obstacle>,
    pub u_des: Vec2,
    pub limits: Limits,
}

pub fn instance_rng(seed: u64, index: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed.wrapping_add(index.wrapping_mul(SEED_STRIDE)))
}

fn random_shape(rng: &mut ChaCha8Rng) -> ObstacleShape {
    match rng.gen_range(0..3) {
        0 => ObstacleShape::disc(rng.gen_range(0.3..1.2)).expect("valid disc"),
        1 => {
            let b = rng.gen_range(0.3..1.0);
            let a = b + rng.gen_range(0.0..1.0);
            ObstacleShape::ellipse(a, b, rng.gen_range(0.0..TAU)).expect("valid ellipse")
        }
        _ => loop {
            let count = rng.gen_range(5..10);
            let pts: Vec<Vec2> = (0..count)
                .map(|_| {
                    let r = rng.gen_range(0.4..1.2);
                    let a: f64 = rng.gen_range(0.0..TAU);
                    Vec2::new(r * a.cos(), r * a.sin())
                })
                .collect();
            if let Ok(shape) = ObstacleShape::polygon(pts) {
                break shape;
            }
        },
    }
}

/// Agent at the origin, one obstacle whose reference point is uniform in an
/// annulus around it. Redrawn until some orientation on a 360-point grid
/// satisfies `h ≥ 0`.
pub fn random_single_obstacle(seed: u64, index: u64) -> FilterInstance {
    let mut rng = instance_rng(seed, index);
    loop {
        let limits = Limits::new(rng.gen_range(0.5..2.0));
        let agent_radius = rng.gen_range(0.1..0.5);
        let va: f64 = rng.gen_range(0.0..TAU);
        let agent = AgentState::new(Vec2::zeros(), Vec2::new(va.cos(), va.sin()) * rng.gen_range(0.0..1.5));

        let shape = random_shape(&mut rng);
        let inner = shape.bounding_radius() + agent_radius + 0.2;
        let dist = rng.gen_range(inner..inner + 4.0);
        let pa: f64 = rng.gen_range(0.0..TAU);
        let velocity = if rng.gen_bool(0.5) {
            Vec2::zeros()
        } else {
            let a: f64 = rng.gen_range(0.0..TAU);
            Vec2::new(a.cos(), a.sin()) * rng.gen_range(0.0..0.6)
        };
        let support = if rng.gen_bool(0.25) {
            fit_fourier(&shape, 16, DEFAULT_FIT_GRID).expect("grid large enough")
        } else {
            SupportModel::exact(&shape)
        }
        .with_agent_radius(agent_radius);
        let state = ObstacleState::new(shape, Vec2::new(pa.cos(), pa.sin()) * dist, velocity);

        let ua: f64 = rng.gen_range(0.0..TAU);
        let u_des = Vec2::new(ua.cos(), ua.sin()) * rng.gen_range(0.0..2.0 * limits.u_max);

        let admissible = (0..360).any(|k| {
            h_value(TAU * k as f64 / 360.0, &agent, &state, &support, &limits) >= 0.0
        });
        if admissible {
            return FilterInstance {
                agent,
                obstacles: vec![Obstacle::new(state, support)],
                u_des,
                limits,
            };
        }
    }
}
