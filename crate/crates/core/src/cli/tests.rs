use std::path::Path;

use proptest::prelude::*;

use super::csv::{header, parse_csv, to_csv};
use super::scenario_file::*;
use super::*;
use crate::barrier::AgentState;
use crate::filter::FilterMode;
use crate::sim::{ObstacleSpec, Scenario};
use crate::{ObstacleShape, Vec2};

fn bundled(name: &str) -> std::path::PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("scenarios").join(name)
}

fn small_scenario() -> Scenario {
    let mut s = Scenario::new(AgentState::at_rest(Vec2::zeros()), Vec2::new(4.0, 0.0));
    s.duration = 3.0;
    s.dt = 0.05;
    s.obstacles.push(ObstacleSpec::stationary(ObstacleShape::disc(0.5).unwrap(), Vec2::new(2.0, 0.1)));
    s.obstacles.push(ObstacleSpec::moving(
        ObstacleShape::ellipse(0.6, 0.3, 0.4).unwrap(),
        Vec2::new(3.0, 3.0),
        Vec2::new(0.0, -0.5),
    ));
    s
}

#[test]
fn bundled_scenarios_round_trip() {
    for name in ["flyby.json", "blocked_goal.json", "mixed_field.json"] {
        let file = ScenarioFile::load(&bundled(name)).unwrap();
        assert_eq!(ScenarioFile::from_json(&file.to_json()).unwrap(), file);
        let scenario = file.to_scenario().unwrap();
        scenario.validate().unwrap();
        assert_eq!(ScenarioFile::from_scenario(&scenario), file);
    }
}

#[test]
fn omitted_sections_take_defaults() {
    let file = ScenarioFile::from_json(r#"{"agent": {"p": [1, 2]}, "goal": [3, 4]}"#).unwrap();
    let s = file.to_scenario().unwrap();
    let d = Scenario::new(AgentState::at_rest(Vec2::new(1.0, 2.0)), Vec2::new(3.0, 4.0));
    assert_eq!(s, d);
}

#[test]
fn unknown_keys_are_rejected_with_a_position() {
    let text = "{\n  \"agent\": {\"p\": [0, 0]},\n  \"goal\": [1, 0],\n  \"limits\": {\"u_max\": 1, \"v_max\": 2}\n}";
    let err = ScenarioFile::from_json(text).unwrap_err();
    assert_eq!(err.line(), 4);
    assert!(err.to_string().contains("v_max"));

    let shape = r#"{"agent": {"p": [0, 0]}, "goal": [1, 0],
        "obstacles": [{"shape": {"type": "disc", "radius": 1, "colour": 3}, "position": [3, 0]}]}"#;
    assert!(ScenarioFile::from_json(shape).unwrap_err().to_string().contains("colour"));
}

#[test]
fn mode_names() {
    assert_eq!(parse_mode("orthogonal", None).unwrap(), FilterMode::Orthogonal);
    assert_eq!(parse_mode("least-restrictive", None).unwrap(), FilterMode::LeastRestrictive);
    assert_eq!(parse_mode("fixed-theta", Some(&[0.5])).unwrap(), FilterMode::FixedTheta(vec![0.5]));
    assert_eq!(parse_mode("fixed-theta", None).unwrap_err().field, "filter.fixed_theta");
    assert_eq!(parse_mode("greedy", None).unwrap_err().field, "filter.mode");
}

#[test]
fn invalid_values_name_their_field() {
    let mut file = ScenarioFile::load(&bundled("flyby.json")).unwrap();
    file.limits.u_max = -1.0;
    let err = file.to_scenario().unwrap().validate().unwrap_err();
    assert_eq!(err.field, "limits.u_max");
    assert_eq!(CliError::from(err).exit_code(), EXIT_VALIDATION);

    let mut file = ScenarioFile::load(&bundled("flyby.json")).unwrap();
    file.obstacles[0].shape = ShapeEntry::Ellipse {
        a: 0.5,
        b: 1.0,
        rotation: 0.0,
    };
    assert_eq!(file.to_scenario().unwrap_err().field, "obstacles[0].shape");
}

fn arb_shape() -> impl Strategy<Value = ShapeEntry> {
    prop_oneof![
        (0.1..3.0f64).prop_map(|radius| ShapeEntry::Disc { radius }),
        (0.1..1.0f64, 0.0..1.0f64, -3.0..3.0f64).prop_map(|(b, extra, rotation)| ShapeEntry::Ellipse {
            a: b + extra,
            b,
            rotation
        }),
        (0.2..2.0f64, 0.2..2.0f64).prop_map(|(w, h)| ShapeEntry::Polygon {
            vertices: vec![[-w, -h], [w, -h], [w, h], [-w, h]]
        }),
    ]
}

prop_compose! {
    fn arb_file()(
        p in prop::array::uniform2(-10.0..10.0f64),
        v in prop::array::uniform2(-2.0..2.0f64),
        radius in 0.0..0.5f64,
        goal in prop::array::uniform2(-10.0..10.0f64),
        kp in 0.0..3.0f64, kd in 0.0..3.0f64, u_max in 0.1..3.0f64,
        dt in 1e-3..0.1f64, duration in 0.5..20.0f64, every in 1usize..5,
        alpha_gain in 0.1..5.0f64,
        shapes in prop::collection::vec((arb_shape(), prop::array::uniform2(-5.0..5.0f64), any::<bool>()), 0..3),
    ) -> ScenarioFile {
        ScenarioFile {
            agent: AgentSection { p, v, radius },
            goal,
            gains: GainsSection { kp, kd },
            limits: LimitsSection { u_max },
            sim: SimSection { dt, duration, theta_update_every: every },
            filter: FilterSection { alpha_gain, ..FilterSection::default() },
            obstacles: shapes
                .into_iter()
                .map(|(shape, position, fourier)| ObstacleEntry {
                    shape,
                    position,
                    velocity: [0.0, -0.25],
                    support: if fourier { SupportEntry::Fourier { n_terms: 12 } } else { SupportEntry::Exact },
                })
                .collect(),
        }
    }
}

proptest! {
    #[test]
    fn scenario_files_round_trip(file in arb_file()) {
        prop_assert_eq!(&ScenarioFile::from_json(&file.to_json()).unwrap(), &file);
        let scenario = file.to_scenario().unwrap();
        prop_assert_eq!(&ScenarioFile::from_scenario(&scenario), &file);
    }
}

#[test]
fn csv_header_layout() {
    assert_eq!(header(0), "t,px,py,vx,vy,udx,udy,ux,uy,status");
    assert_eq!(
        header(2),
        "t,px,py,vx,vy,udx,udy,ux,uy,theta_0,h_0,cons_0,clear_0,theta_1,h_1,cons_1,clear_1,status"
    );
}

fn same_bits(a: f64, b: f64) -> bool {
    a.to_bits() == b.to_bits()
}

#[test]
fn csv_round_trip_is_exact() {
    for mode in [FilterMode::LeastRestrictive, FilterMode::Orthogonal] {
        let log = run_scenario(&small_scenario().with_mode(mode)).unwrap();
        let (count, rows) = parse_csv(&to_csv(&log)).unwrap();
        assert_eq!(count, 2);
        assert_eq!(rows, log.rows);
    }

    // NaN survives as NaN; compare bit patterns
    let mut log = run_scenario(&small_scenario()).unwrap();
    log.rows[0].obstacles[1].h = f64::NAN;
    log.rows[1].u.x = -0.0;
    log.rows[2].t = 1.0 / 3.0;
    let (_, rows) = parse_csv(&to_csv(&log)).unwrap();
    assert!(rows[0].obstacles[1].h.is_nan());
    assert!(same_bits(rows[1].u.x, -0.0));
    assert!(same_bits(rows[2].t, 1.0 / 3.0));
}

#[test]
fn malformed_csv_is_reported_by_line() {
    let log = run_scenario(&small_scenario()).unwrap();
    let text = to_csv(&log);
    let mut lines: Vec<String> = text.lines().map(String::from).collect();
    lines[3] = lines[3].replacen(',', ",x", 1);
    assert_eq!(parse_csv(&lines.join("\n")).unwrap_err().line, 4);
    assert_eq!(parse_csv("a,b\n").unwrap_err().line, 1);
    assert!(parse_csv("").is_err());
    let bad_status = text.replace("optimal", "fine");
    assert_eq!(parse_csv(&bad_status).unwrap_err().line, 2);
}

#[test]
fn atomic_write_creates_and_replaces() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("a/b/c.txt");
    write_atomic(&p, b"first").unwrap();
    write_atomic(&p, b"second").unwrap();
    assert_eq!(std::fs::read_to_string(&p).unwrap(), "second");
    assert_eq!(std::fs::read_dir(p.parent().unwrap()).unwrap().count(), 1);
}

#[test]
fn run_writes_requested_artifacts() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("small.json");
    std::fs::write(&path, ScenarioFile::from_scenario(&small_scenario()).to_json()).unwrap();

    let mut opts = RunOptions::new(dir.path().join("out"));
    opts.svg = false;
    let a = cmd_run(&path, &opts).unwrap();
    assert!(a.svgs.is_empty());
    assert!(a.csv.ends_with("small-least-restrictive.csv"));
    a.check().unwrap();

    opts.svg = true;
    opts.mode = Some("orthogonal".into());
    let b = cmd_run(&path, &opts).unwrap();
    assert_eq!(b.svgs.len(), 4);
    for p in &b.svgs {
        let text = std::fs::read_to_string(p).unwrap();
        assert!(text.starts_with("<svg") && text.trim_end().ends_with("</svg>"));
        assert!(text.contains(r#"viewBox="0 0 800 600""#));
        assert!(!text.contains("NaN") && !text.contains("inf"));
    }
    let json: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&b.metrics_json).unwrap()).unwrap();
    assert_eq!(json["mode"], "orthogonal");
}

#[test]
fn zero_obstacle_comparison_is_symmetric() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("empty.json");
    let mut s = small_scenario();
    s.obstacles.clear();
    std::fs::write(&path, ScenarioFile::from_scenario(&s).to_json()).unwrap();
    let c = cmd_compare(&path, dir.path(), false).unwrap();
    let (mut a, b) = (c.orthogonal.metrics.clone(), c.least_restrictive.metrics.clone());
    a.mode = b.mode.clone();
    assert_eq!(a, b);
    assert!(c.svgs.is_empty());
    let lines: Vec<&str> = c.table.lines().collect();
    assert_eq!(lines.len(), 7);
    for line in &lines[1..] {
        let cells: Vec<&str> = line.split_whitespace().collect();
        assert_eq!(cells[cells.len() - 1], cells[cells.len() - 2], "{line}");
    }
}

#[test]
fn fit_support_reports() {
    let (disc, _, _) = fit_support_report(&ShapeEntry::Disc { radius: 0.8 }, 16).unwrap();
    assert!((disc.a0 / 2.0 - 0.8).abs() < 1e-12);
    assert!(disc.cos.iter().chain(&disc.sin).all(|c| c.abs() < 1e-9));
    assert!(disc.margin.abs() < 1e-9 && disc.conservative);

    let square = ShapeEntry::Polygon {
        vertices: vec![[-0.5, -0.5], [0.5, -0.5], [0.5, 0.5], [-0.5, 0.5]],
    };
    let (r, _, _) = fit_support_report(&square, 16).unwrap();
    assert!(r.max_residual < 0.02);
    assert!(r.conservative);
    assert!(r.off_grid_deficit < 1e-6);

    let err = fit_support_report(&square, 400).unwrap_err();
    assert!(matches!(err, CliError::Shape(GeometryError::GridTooCoarse { .. })));
    assert_eq!(err.exit_code(), EXIT_VALIDATION);
}

#[test]
fn oracle_check_reports() {
    let empty = cmd_oracle_check(DEFAULT_ORACLE_SEED, 0);
    assert!(empty.passed() && empty.worst_index.is_none());
    empty.check().unwrap();

    let r = cmd_oracle_check(DEFAULT_ORACLE_SEED, 5);
    assert!(r.passed(), "{r}");
    assert!(r.to_string().ends_with("PASS"));

    let failing = OracleReport {
        max_gap: 0.5,
        worst_index: Some(3),
        ..r
    };
    assert_eq!(failing.check().unwrap_err().exit_code(), EXIT_ORACLE_GAP);
}

#[test]
fn out_dir_defaults_to_the_fallback() {
    // the variable is not set under `cargo test`
    if std::env::var_os(OUT_DIR_ENV).is_none() {
        assert_eq!(default_out_dir(), Path::new(DEFAULT_OUT_DIR));
    }
}
