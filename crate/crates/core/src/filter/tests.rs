use std::f64::consts::TAU;

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::instances::random_single_obstacle;
use super::*;
use crate::barrier::{cbf_constraint, h_value, AgentState, Limits, Obstacle, ObstacleState};
use crate::geometry::ObstacleShape;

fn disc_at(radius: f64, at: Vec2, agent_radius: f64) -> Obstacle {
    Obstacle::exact(
        ObstacleState::stationary(ObstacleShape::disc(radius).unwrap(), at),
        agent_radius,
    )
}

fn naive_grid_minimum(
    cons: &[AffineConstraint],
    d: &Vec2,
    q: &Mat2,
    u_max: f64,
    n: usize,
) -> Option<f64> {
    let h = 2.0 * u_max / (n - 1) as f64;
    let mut best: Option<f64> = None;
    for j in 0..n {
        for i in 0..n {
            let u = Vec2::new(-u_max + i as f64 * h, -u_max + j as f64 * h);
            if u.norm_squared() > u_max * u_max || cons.iter().any(|c| c.value(&u) < 0.0) {
                continue;
            }
            let f = quadratic_cost(q, &u, d);
            if best.is_none_or(|b| f < b) {
                best = Some(f);
            }
        }
    }
    best
}

fn random_constraints(rng: &mut ChaCha8Rng, count: usize, u_max: f64) -> Vec<AffineConstraint> {
    (0..count)
        .map(|_| {
            let a: f64 = rng.gen_range(0.0..TAU);
            let scale = rng.gen_range(0.2..3.0);
            AffineConstraint::new(
                Vec2::new(a.cos(), a.sin()) * scale,
                rng.gen_range(-0.9..0.9) * u_max * scale,
            )
        })
        .collect()
}

fn random_weight(rng: &mut ChaCha8Rng) -> Mat2 {
    let l = nalgebra::Matrix2::new(
        rng.gen_range(0.5..2.0),
        0.0,
        rng.gen_range(-1.0..1.0),
        rng.gen_range(0.5..2.0),
    );
    l * l.transpose()
}

#[test]
fn row_reduction_matches_full_grid_scan() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for _ in 0..200 {
        let u_max = rng.gen_range(0.5..2.0);
        let k = rng.gen_range(0..5);
        let cons = random_constraints(&mut rng, k, u_max);
        let q = random_weight(&mut rng);
        let d = Vec2::new(rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0));
        let fast = grid_minimum(&cons, &d, &q, u_max, 101).map(|s| s.objective);
        let slow = naive_grid_minimum(&cons, &d, &q, u_max, 101);
        match (fast, slow) {
            (Some(a), Some(b)) => assert!((a - b).abs() <= 1e-12 * b.max(1.0), "{a} vs {b}"),
            (None, None) => {}
            other => panic!("mismatch {other:?}"),
        }
    }
}

#[test]
fn pruned_oracle_matches_exhaustive_scan() {
    let config = FilterConfig {
        weight: Mat2::new(2.0, 0.4, 0.4, 0.8),
        ..FilterConfig::default()
    };
    let grid = OracleGrid {
        u_points: 61,
        theta_points: 90,
    };
    for i in 0..20 {
        let inst = random_single_obstacle(3, i);
        let o = &inst.obstacles[0];
        let mut full = f64::INFINITY;
        for k in 0..grid.theta_points {
            let t = TAU * k as f64 / grid.theta_points as f64;
            if h_value(t, &inst.agent, &o.state, &o.support, &inst.limits) < 0.0 {
                continue;
            }
            let c = cbf_constraint(t, &inst.agent, &o.state, &o.support, &config.alpha, &inst.limits);
            if let Some(s) = grid_minimum(&[c], &inst.u_des, &config.weight, inst.limits.u_max, grid.u_points) {
                full = full.min(s.objective);
            }
        }
        let r = brute_force_oracle(&inst.agent, &inst.obstacles, &inst.u_des, &config, &inst.limits, &grid);
        assert_eq!(r.objective, full, "instance {i}");
    }
}

#[test]
fn no_obstacles_passes_desired_control() {
    let agent = AgentState::new(Vec2::new(1.0, 2.0), Vec2::new(0.5, 0.0));
    let limits = Limits::new(1.0);
    let config = FilterConfig::default();
    let r = optimize(&agent, &[], &Vec2::new(0.2, -0.3), &config, &limits, None);
    assert_eq!(r.u, Vec2::new(0.2, -0.3));
    assert_eq!(r.objective, 0.0);
    assert_eq!(r.status, FilterStatus::Optimal);
}

#[test]
fn oracle_without_obstacles_snaps_to_grid() {
    let agent = AgentState::at_rest(Vec2::zeros());
    let limits = Limits::new(1.0);
    let grid = OracleGrid {
        u_points: 11,
        theta_points: 8,
    };
    let r = brute_force_oracle(&agent, &[], &Vec2::new(0.33, -0.41), &FilterConfig::default(), &limits, &grid);
    assert!((r.u - Vec2::new(0.4, -0.4)).norm() < 1e-12);
}

#[test]
fn fixed_theta_matches_dense_grid() {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let mut gaps = Vec::new();
    for _ in 0..100 {
        let u_max = rng.gen_range(0.5..2.0);
        let k = rng.gen_range(0..5);
        let cons = random_constraints(&mut rng, k, u_max);
        let q = random_weight(&mut rng);
        let d = Vec2::new(rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0));
        let exact = solve_qp(&cons, &d, &q, u_max);
        let grid = grid_minimum(&cons, &d, &q, u_max, 801);
        match (exact, grid) {
            (Some(e), Some(g)) => {
                assert!(e.objective <= g.objective + 1e-9);
                gaps.push(g.objective - e.objective);
                assert!(e.u.norm() <= u_max + 1e-9);
                assert!(cons.iter().all(|c| c.value(&e.u) >= -1e-9));
            }
            (Some(_), None) => {} // sliver thinner than the grid
            (None, Some(g)) => panic!("solver missed feasible point {:?}", g.u),
            (None, None) => {}
        }
    }
    gaps.sort_by(f64::total_cmp);
    assert!(gaps[gaps.len() / 2] < 5e-3, "median grid gap {}", gaps[gaps.len() / 2]);
}

#[test]
fn agent_far_from_obstacles_is_not_restricted() {
    let agent = AgentState::new(Vec2::new(-20.0, 0.0), Vec2::new(0.1, 0.0));
    let obstacles = vec![disc_at(1.0, Vec2::new(10.0, 0.0), 0.3), disc_at(0.5, Vec2::new(0.0, 12.0), 0.3)];
    let limits = Limits::new(1.0);
    let u_des = Vec2::new(0.5, 0.5);
    let r = optimize(&agent, &obstacles, &u_des, &FilterConfig::default(), &limits, None);
    assert_eq!(r.u, u_des);
    assert_eq!(r.objective, 0.0);
    assert!(r.thetas.all_feasible());
}

#[test]
fn least_restrictive_admits_straight_flyby() {
    // passing 1.5 m to the side of a disc at 2 m/s with u_des = 0
    let obstacles = vec![disc_at(0.5, Vec2::zeros(), 0.5)];
    let limits = Limits::new(1.0);
    let config = FilterConfig::default();
    let agent = AgentState::new(Vec2::new(-3.0, 1.5), Vec2::new(2.0, 0.0));
    let lr = optimize(&agent, &obstacles, &Vec2::zeros(), &config, &limits, None);
    assert_eq!(lr.objective, 0.0);
    let orth = orthogonal_assignment(&agent, &obstacles).unwrap();
    let fixed = solve_fixed_theta(&agent, &obstacles, &orth, &Vec2::zeros(), &config, &limits);
    assert!(fixed.objective > 0.0);
}

#[test]
fn infeasible_when_collision_is_unavoidable() {
    let obstacles = vec![disc_at(0.5, Vec2::zeros(), 0.5)];
    let limits = Limits::new(1.0);
    let agent = AgentState::new(Vec2::new(1.2, 0.0), Vec2::new(-3.0, 0.0));
    let r = optimize(&agent, &obstacles, &Vec2::zeros(), &FilterConfig::default(), &limits, None);
    assert_eq!(r.status, FilterStatus::Infeasible);
    assert!(r.objective.is_infinite());
}

#[test]
fn admissible_orientation_between_grid_points_is_found() {
    // agent at rest just outside the disc, direction between grid points
    let obstacles = vec![disc_at(1.0, Vec2::zeros(), 0.0)];
    let limits = Limits::new(1.0);
    let dir = 0.5_f64.to_radians();
    let agent = AgentState::at_rest(Vec2::new(dir.cos(), dir.sin()) * (1.0 + 1e-6));
    let config = FilterConfig::default();
    let r = optimize(&agent, &obstacles, &Vec2::new(0.1, 0.0), &config, &limits, None);
    assert_eq!(r.status, FilterStatus::Optimal);
    assert!(r.thetas.all_feasible());
    assert!(angular_distance(r.thetas.thetas[0], dir) < 2e-3);
}

#[test]
fn slipped_state_keeps_previous_orientation() {
    let obstacles = vec![disc_at(1.0, Vec2::zeros(), 0.0)];
    let limits = Limits::new(1.0);
    let config = FilterConfig::default();
    let warm = ThetaAssignment {
        thetas: vec![0.0],
        feasible: vec![true],
    };
    // closing slowly, slightly inside the braking margin for every θ
    let agent = AgentState::new(Vec2::new(1.0 - 2e-5, 0.0), Vec2::new(-0.01, 0.0));
    let r = optimize(&agent, &obstacles, &Vec2::new(-1.0, 0.0), &config, &limits, Some(&warm));
    assert_eq!(r.status, FilterStatus::FallbackPreviousTheta);
    assert_eq!(r.thetas.thetas, vec![0.0]);
    let o = &obstacles[0];
    let c = cbf_constraint(0.0, &agent, &o.state, &o.support, &config.alpha, &limits);
    // ḣ ≥ 0 at the kept orientation
    assert!(c.value(&r.u) - config.alpha.apply(h_value(0.0, &agent, &o.state, &o.support, &limits)) >= -1e-9);
    assert!(r.u.norm() <= 1.0 + 1e-9);

    let deep = AgentState::new(Vec2::new(1.0 - 2e-3, 0.0), Vec2::new(-0.01, 0.0));
    let r = optimize(&deep, &obstacles, &Vec2::new(-1.0, 0.0), &config, &limits, Some(&warm));
    assert_eq!(r.status, FilterStatus::Infeasible);
    let r = optimize(&agent, &obstacles, &Vec2::new(-1.0, 0.0), &config, &limits, None);
    assert_eq!(r.status, FilterStatus::Infeasible);
}

#[test]
fn fixed_theta_infeasible_is_reported() {
    let obstacles = vec![disc_at(0.5, Vec2::zeros(), 0.5)];
    let limits = Limits::new(1.0);
    let agent = AgentState::new(Vec2::new(2.0, 0.0), Vec2::new(-3.0, 0.0));
    let r = solve_fixed_theta(&agent, &obstacles, &[0.0], &Vec2::zeros(), &FilterConfig::default(), &limits);
    assert_eq!(r.status, FilterStatus::Infeasible);
    assert!(!r.thetas.feasible[0]);
}

#[test]
fn optimize_agrees_with_coarse_joint_oracle() {
    let config = FilterConfig::default();
    let grid = OracleGrid {
        u_points: 801,
        theta_points: 720,
    };
    for i in 0..10 {
        let inst = random_single_obstacle(2024, i);
        let opt = optimize(&inst.agent, &inst.obstacles, &inst.u_des, &config, &inst.limits, None);
        let orc = brute_force_oracle(&inst.agent, &inst.obstacles, &inst.u_des, &config, &inst.limits, &grid);
        assert_eq!(opt.status == FilterStatus::Infeasible, orc.status == FilterStatus::Infeasible);
        if orc.status == FilterStatus::Optimal {
            assert!(opt.objective <= orc.objective + 1e-9, "instance {i}");
            assert!(orc.objective - opt.objective < 0.03, "instance {i}: {} vs {}", opt.objective, orc.objective);
        }
    }
}

#[test]
fn angle_helpers() {
    assert!((angular_distance(0.1, TAU - 0.1) - 0.2).abs() < 1e-12);
    assert!((angular_distance(3.0, -3.0) - (TAU - 6.0)).abs() < 1e-12);
    assert!((wrap_angle(3.0 * std::f64::consts::PI) - std::f64::consts::PI).abs() < 1e-12);
    assert!((wrap_angle(-0.5 - TAU) + 0.5).abs() < 1e-12);
}

#[test]
fn config_validation_names_fields() {
    let mut c = FilterConfig::default();
    assert!(c.validate().is_ok());
    c.weight = Mat2::new(1.0, 2.0, 2.0, 1.0);
    assert_eq!(c.validate().unwrap_err().0, "q");
    c.weight = Mat2::new(1.0, 0.1, 0.0, 1.0);
    assert_eq!(c.validate().unwrap_err().0, "q");
    c = FilterConfig {
        theta_grid: 4,
        ..FilterConfig::default()
    };
    assert_eq!(c.validate().unwrap_err().0, "theta_grid");
}

fn arb_state() -> impl Strategy<Value = (u64, f64, f64)> {
    (any::<u64>(), -1.0..1.0f64, 0.1..5.0f64)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn output_is_feasible_and_dominates_orthogonal((seed, _, _) in arb_state()) {
        let inst = random_single_obstacle(seed, 0);
        let config = FilterConfig::default();
        let r = optimize(&inst.agent, &inst.obstacles, &inst.u_des, &config, &inst.limits, None);
        if r.status != FilterStatus::Infeasible {
            prop_assert!(r.u.norm() <= inst.limits.u_max + 1e-9);
            prop_assert!(r.thetas.all_feasible());
            let cons = constraints_for(&inst.agent, &inst.obstacles, &r.thetas.thetas, &config, &inst.limits);
            for c in &cons {
                prop_assert!(c.value(&r.u) >= -1e-9);
            }
            let obj = quadratic_cost(&config.weight, &r.u, &inst.u_des);
            prop_assert!((obj - r.objective).abs() < 1e-12);
        }
        if let Some(orth) = orthogonal_assignment(&inst.agent, &inst.obstacles) {
            let fixed = solve_fixed_theta(&inst.agent, &inst.obstacles, &orth, &inst.u_des, &config, &inst.limits);
            if fixed.thetas.all_feasible() && fixed.status == FilterStatus::Optimal {
                prop_assert!(r.objective <= fixed.objective + 1e-9);
            }
        }
    }

    #[test]
    fn warm_start_never_gets_worse((seed, warm_theta, _) in arb_state()) {
        let inst = random_single_obstacle(seed, 1);
        let config = FilterConfig::default();
        let warm_theta = warm_theta * std::f64::consts::PI;
        let at_warm = solve_fixed_theta(&inst.agent, &inst.obstacles, &[warm_theta], &inst.u_des, &config, &inst.limits);
        let warm = at_warm.thetas.clone();
        let r = optimize(&inst.agent, &inst.obstacles, &inst.u_des, &config, &inst.limits, Some(&warm));
        if warm.all_feasible() && at_warm.status == FilterStatus::Optimal {
            prop_assert!(r.objective <= at_warm.objective + 1e-9);
        }
    }

    #[test]
    fn weight_scaling_keeps_control((seed, _, scale) in arb_state()) {
        let inst = random_single_obstacle(seed, 2);
        let base = FilterConfig::default();
        let scaled = FilterConfig { weight: base.weight * scale, ..base.clone() };
        let orth = orthogonal_assignment(&inst.agent, &inst.obstacles).unwrap();
        let a = solve_fixed_theta(&inst.agent, &inst.obstacles, &orth, &inst.u_des, &base, &inst.limits);
        let b = solve_fixed_theta(&inst.agent, &inst.obstacles, &orth, &inst.u_des, &scaled, &inst.limits);
        prop_assert_eq!(a.status, b.status);
        prop_assert!((a.u - b.u).norm() < 1e-9);
    }
}
