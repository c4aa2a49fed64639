//! Command implementations behind the `hcbf` binary.
//!
//! Every command reads its inputs, does its work in memory and only then
//! writes artifacts, each one atomically (temporary file in the target
//! directory, then rename). Errors map onto process exit codes through
//! [`CliError::exit_code`].

pub mod csv;
pub mod scenario_file;
pub mod svg;

#[cfg(test)]
mod tests;

use std::f64::consts::TAU;
use std::fmt::Write as _;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::filter::{brute_force_oracle, instances::random_single_obstacle, optimize, FilterConfig, OracleGrid};
use crate::geometry::{fit_fourier, GeometryError, SupportKind, DEFAULT_FIT_GRID, VERIFY_GRID_FACTOR};
use crate::sim::{metrics, run_scenario, Metrics, RunOutcome, Scenario, ScenarioError, TrajectoryLog};

pub use scenario_file::{parse_mode, ScenarioFile, ShapeEntry};

/// Environment variable holding the default output directory.
pub const OUT_DIR_ENV: &str = "HCBF_OUT_DIR";
pub const DEFAULT_OUT_DIR: &str = "hcbf-out";
/// Largest optimizer-minus-oracle objective gap accepted by `oracle-check`.
pub const ORACLE_GAP_TOL: f64 = 1e-3;
pub const DEFAULT_ORACLE_SEED: u64 = 2024;

pub const EXIT_OK: i32 = 0;
pub const EXIT_VALIDATION: i32 = 1;
pub const EXIT_RUN_FAILURE: i32 = 2;
pub const EXIT_ORACLE_GAP: i32 = 3;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("cannot read {}: {source}", path.display())]
    Read { path: PathBuf, source: std::io::Error },
    #[error("cannot write {}: {source}", path.display())]
    Write { path: PathBuf, source: std::io::Error },
    #[error("{}:{line}:{column}: {message}", path.display())]
    Parse {
        path: PathBuf,
        line: usize,
        column: usize,
        message: String,
    },
    #[error("invalid scenario: {0}")]
    Validation(#[from] ScenarioError),
    #[error("invalid shape: {0}")]
    Shape(#[from] GeometryError),
    #[error("run ended with {outcome} at t = {time} s")]
    RunFailed { outcome: &'static str, time: f64 },
    #[error("oracle gap {gap:.3e} at instance {index} exceeds {ORACLE_GAP_TOL:e}")]
    OracleGap { gap: f64, index: u64 },
}

impl CliError {
    pub(crate) fn io(path: &Path, source: std::io::Error) -> Self {
        CliError::Read {
            path: path.to_path_buf(),
            source,
        }
    }

    pub(crate) fn parse(path: &Path, e: &serde_json::Error) -> Self {
        CliError::Parse {
            path: path.to_path_buf(),
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Read { .. } | CliError::Parse { .. } | CliError::Validation(_) | CliError::Shape(_) => {
                EXIT_VALIDATION
            }
            CliError::Write { .. } | CliError::RunFailed { .. } => EXIT_RUN_FAILURE,
            CliError::OracleGap { .. } => EXIT_ORACLE_GAP,
        }
    }
}

/// `$HCBF_OUT_DIR` if set and non-empty, else `hcbf-out`.
pub fn default_out_dir() -> PathBuf {
    std::env::var_os(OUT_DIR_ENV)
        .filter(|v| !v.is_empty())
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(DEFAULT_OUT_DIR))
}

/// Writes `contents` to `path` through a temporary file in the same directory.
pub fn write_atomic(path: &Path, contents: &[u8]) -> Result<(), CliError> {
    let err = |source| CliError::Write {
        path: path.to_path_buf(),
        source,
    };
    let dir = path.parent().filter(|d| !d.as_os_str().is_empty()).unwrap_or(Path::new("."));
    std::fs::create_dir_all(dir).map_err(err)?;
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(err)?;
    tmp.write_all(contents).map_err(err)?;
    tmp.persist(path).map_err(|e| err(e.error))?;
    Ok(())
}

#[derive(Debug, Clone)]
pub struct RunOptions {
    /// Overrides the mode in the scenario file.
    pub mode: Option<String>,
    pub out_dir: PathBuf,
    pub svg: bool,
}

impl RunOptions {
    pub fn new(out_dir: impl Into<PathBuf>) -> Self {
        Self {
            mode: None,
            out_dir: out_dir.into(),
            svg: true,
        }
    }
}

#[derive(Debug, Clone)]
pub struct RunArtifacts {
    pub csv: PathBuf,
    pub metrics_json: PathBuf,
    /// Plan view, constraint, intervention and goal-distance plots.
    pub svgs: Vec<PathBuf>,
    pub metrics: Metrics,
    pub outcome: RunOutcome,
}

impl RunArtifacts {
    /// `RunFailed` unless the run completed.
    pub fn check(&self) -> Result<(), CliError> {
        if self.outcome.is_success() {
            Ok(())
        } else {
            Err(CliError::RunFailed {
                outcome: self.outcome.as_str(),
                time: self.metrics.final_time,
            })
        }
    }
}

fn file_stem(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "scenario".into())
}

/// Reads a scenario file and applies an optional mode override.
pub fn load_scenario(path: &Path, mode: Option<&str>) -> Result<Scenario, CliError> {
    let file = ScenarioFile::load(path)?;
    let mut scenario = file.to_scenario()?;
    if let Some(name) = mode {
        scenario.filter.mode = parse_mode(name, file.filter.fixed_theta.as_deref())?;
    }
    Ok(scenario)
}

pub fn metrics_json(m: &Metrics) -> String {
    let mut s = serde_json::to_string_pretty(m).expect("metrics always serialize");
    s.push('\n');
    s
}

fn write_run(stem: &str, scenario: &Scenario, log: &TrajectoryLog, out: &Path, svg: bool) -> Result<RunArtifacts, CliError> {
    let base = format!("{stem}-{}", log.mode.name());
    let m = metrics(log, scenario);
    let csv_path = out.join(format!("{base}.csv"));
    let json_path = out.join(format!("{base}.json"));
    write_atomic(&csv_path, csv::to_csv(log).as_bytes())?;
    write_atomic(&json_path, metrics_json(&m).as_bytes())?;

    let mut svgs = Vec::new();
    if svg {
        let colour = svg::PALETTE[0];
        let runs = [(log, colour)];
        let plots = [
            ("plan", svg::plan_view(scenario, &runs, &format!("{stem}: {}", log.mode.name()))),
            ("constraint", svg::constraint_plot(log)),
            ("intervention", svg::intervention_plot(&runs)),
            ("goal", svg::goal_distance_plot(&runs, &scenario.goal)),
        ];
        for (name, body) in plots {
            let p = out.join(format!("{base}-{name}.svg"));
            write_atomic(&p, body.as_bytes())?;
            svgs.push(p);
        }
    }
    Ok(RunArtifacts {
        csv: csv_path,
        metrics_json: json_path,
        svgs,
        metrics: m,
        outcome: log.outcome,
    })
}

/// Runs one scenario file and writes its CSV, metrics JSON and plots.
///
/// Artifacts are written for failed runs too; see [`RunArtifacts::check`].
pub fn cmd_run(path: &Path, opts: &RunOptions) -> Result<RunArtifacts, CliError> {
    let scenario = load_scenario(path, opts.mode.as_deref())?;
    let log = run_scenario(&scenario)?;
    write_run(&file_stem(path), &scenario, &log, &opts.out_dir, opts.svg)
}

#[derive(Debug, Clone)]
pub struct Comparison {
    pub orthogonal: RunArtifacts,
    pub least_restrictive: RunArtifacts,
    pub table: String,
    pub table_path: PathBuf,
    /// Overlay plots; empty without `svg`.
    pub svgs: Vec<PathBuf>,
}

impl Comparison {
    pub fn check(&self) -> Result<(), CliError> {
        self.orthogonal.check()?;
        self.least_restrictive.check()
    }
}

fn cell(v: Option<f64>) -> String {
    v.map_or_else(|| "-".into(), |x| format!("{x:.4}"))
}

/// Side-by-side metrics of two runs.
pub fn comparison_table(a: &Metrics, b: &Metrics) -> String {
    let min_clear = |m: &Metrics| m.min_clearance.iter().copied().reduce(f64::min);
    let rows: [(&str, String, String); 6] = [
        ("outcome", a.outcome.clone(), b.outcome.clone()),
        ("time to goal [s]", cell(a.time_to_goal), cell(b.time_to_goal)),
        ("min clearance [m]", cell(min_clear(a)), cell(min_clear(b))),
        ("intervention [m/s]", cell(Some(a.intervention_integral)), cell(Some(b.intervention_integral))),
        ("intervening time [s]", cell(Some(a.intervention_duration)), cell(Some(b.intervention_duration))),
        ("first intervention [s]", cell(a.first_intervention), cell(b.first_intervention)),
    ];
    let mut out = String::new();
    writeln!(out, "{:<24}{:>20}{:>20}", "metric", a.mode, b.mode).unwrap();
    for (name, x, y) in rows {
        writeln!(out, "{name:<24}{x:>20}{y:>20}").unwrap();
    }
    out
}

/// Runs the scenario in orthogonal and least-restrictive mode concurrently.
pub fn cmd_compare(path: &Path, out_dir: &Path, svg: bool) -> Result<Comparison, CliError> {
    use crate::filter::FilterMode;
    let scenario = load_scenario(path, None)?;
    let orth = scenario.clone().with_mode(FilterMode::Orthogonal);
    let lr = scenario.clone().with_mode(FilterMode::LeastRestrictive);
    orth.validate()?;
    let (a, b) = std::thread::scope(|s| {
        let ha = s.spawn(|| run_scenario(&orth));
        let hb = s.spawn(|| run_scenario(&lr));
        (ha.join().expect("run thread panicked"), hb.join().expect("run thread panicked"))
    });
    let (a, b) = (a?, b?);

    let stem = file_stem(path);
    let orthogonal = write_run(&stem, &orth, &a, out_dir, svg)?;
    let least_restrictive = write_run(&stem, &lr, &b, out_dir, svg)?;
    let table = comparison_table(&orthogonal.metrics, &least_restrictive.metrics);
    let table_path = out_dir.join(format!("{stem}-compare.txt"));
    write_atomic(&table_path, table.as_bytes())?;

    let mut svgs = Vec::new();
    if svg {
        let runs = [(&a, svg::PALETTE[0]), (&b, svg::PALETTE[1])];
        let plots = [
            ("plan", svg::plan_view(&scenario, &runs, &format!("{stem}: comparison"))),
            ("intervention", svg::intervention_plot(&runs)),
            ("goal", svg::goal_distance_plot(&runs, &scenario.goal)),
        ];
        for (name, body) in plots {
            let p = out_dir.join(format!("{stem}-compare-{name}.svg"));
            write_atomic(&p, body.as_bytes())?;
            svgs.push(p);
        }
    }
    Ok(Comparison {
        orthogonal,
        least_restrictive,
        table,
        table_path,
        svgs,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SupportReport {
    pub n_terms: usize,
    pub fit_grid: usize,
    pub verify_grid: usize,
    pub a0: f64,
    pub cos: Vec<f64>,
    pub sin: Vec<f64>,
    /// Offset added to the series so that it bounds the support from above.
    pub margin: f64,
    pub max_residual: f64,
    /// Whether series plus margin is at least the support, within 1e-9, on
    /// the verification grid.
    pub conservative: bool,
    /// Grid four times finer than `verify_grid`.
    pub check_grid: usize,
    /// Largest shortfall of series plus margin below the support on the
    /// check grid; zero if there is none. The margin is only guaranteed on
    /// the verification grid, so kinks of the support can poke through
    /// between its points.
    pub off_grid_deficit: f64,
}

/// Fits a Fourier support model to the shape and reports it.
pub fn fit_support_report(shape: &ShapeEntry, n_terms: usize) -> Result<(SupportReport, crate::geometry::ObstacleShape, crate::geometry::SupportModel), CliError> {
    let shape = shape.to_shape()?;
    let model = fit_fourier(&shape, n_terms, DEFAULT_FIT_GRID)?;
    let SupportKind::Fourier {
        series,
        margin,
        max_residual,
    } = model.kind()
    else {
        unreachable!("fit_fourier returns a Fourier model")
    };
    let verify_grid = DEFAULT_FIT_GRID * VERIFY_GRID_FACTOR;
    let shortfall = |grid: usize| {
        (0..grid)
            .map(|k| {
                let t = TAU * k as f64 / grid as f64;
                shape.support_distance(t) - model.obstacle_extent(t)
            })
            .fold(0.0, f64::max)
    };
    let check_grid = 4 * verify_grid;
    let report = SupportReport {
        n_terms,
        fit_grid: DEFAULT_FIT_GRID,
        verify_grid,
        a0: series.a0(),
        cos: series.cos_coefficients().to_vec(),
        sin: series.sin_coefficients().to_vec(),
        margin: *margin,
        max_residual: *max_residual,
        conservative: shortfall(verify_grid) <= 1e-9,
        check_grid,
        off_grid_deficit: shortfall(check_grid),
    };
    Ok((report, shape, model))
}

#[derive(Debug, Clone)]
pub struct FitArtifacts {
    pub report: SupportReport,
    pub json: PathBuf,
    pub svg: Option<PathBuf>,
}

/// Reads a shape (the `shape` object of a scenario obstacle) and writes its
/// Fourier support report, plus a polar plot if requested.
pub fn cmd_fit_support(path: &Path, n_terms: usize, out_dir: &Path, svg: bool) -> Result<FitArtifacts, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    let entry: ShapeEntry = serde_json::from_str(&text).map_err(|e| CliError::parse(path, &e))?;
    let (report, shape, model) = fit_support_report(&entry, n_terms)?;
    let stem = file_stem(path);
    let json = out_dir.join(format!("{stem}-fourier.json"));
    let mut body = serde_json::to_string_pretty(&report).expect("report always serializes");
    body.push('\n');
    write_atomic(&json, body.as_bytes())?;
    let svg = if svg {
        let p = out_dir.join(format!("{stem}-support.svg"));
        let plot = svg::support_polar(
            |t| shape.support_distance(t),
            |t| model.obstacle_extent(t),
            &format!("{stem}: support distance, N = {n_terms}"),
        );
        write_atomic(&p, plot.as_bytes())?;
        Some(p)
    } else {
        None
    };
    Ok(FitArtifacts { report, json, svg })
}

#[derive(Debug, Clone, PartialEq)]
pub struct OracleReport {
    pub seed: u64,
    pub count: u64,
    /// Largest `optimizer − oracle` objective; zero for an empty run.
    pub max_gap: f64,
    pub worst_index: Option<u64>,
}

impl OracleReport {
    pub fn passed(&self) -> bool {
        self.max_gap <= ORACLE_GAP_TOL
    }

    pub fn check(&self) -> Result<(), CliError> {
        match self.worst_index {
            Some(index) if !self.passed() => Err(CliError::OracleGap { gap: self.max_gap, index }),
            _ => Ok(()),
        }
    }
}

impl std::fmt::Display for OracleReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "oracle-check seed={} count={} max_gap={:.3e}",
            self.seed, self.count, self.max_gap
        )?;
        if let Some(i) = self.worst_index {
            write!(f, " worst_instance={i}")?;
        }
        write!(f, " {}", if self.passed() { "PASS" } else { "FAIL" })
    }
}

/// Objective gap of the joint optimizer over the grid oracle on one
/// random single-obstacle instance.
pub fn oracle_gap(seed: u64, index: u64, grid: &OracleGrid) -> f64 {
    let inst = random_single_obstacle(seed, index);
    let config = FilterConfig::default();
    let opt = optimize(&inst.agent, &inst.obstacles, &inst.u_des, &config, &inst.limits, None);
    let orc = brute_force_oracle(&inst.agent, &inst.obstacles, &inst.u_des, &config, &inst.limits, grid);
    match (opt.objective.is_finite(), orc.objective.is_finite()) {
        (true, true) => opt.objective - orc.objective,
        (false, true) => f64::INFINITY,
        _ => 0.0,
    }
}

/// Compares the joint optimizer against the grid oracle on `count` random
/// instances. The report fails if any gap exceeds [`ORACLE_GAP_TOL`].
pub fn cmd_oracle_check(seed: u64, count: u64) -> OracleReport {
    let grid = OracleGrid::default();
    let mut report = OracleReport {
        seed,
        count,
        max_gap: 0.0,
        worst_index: None,
    };
    for i in 0..count {
        let gap = oracle_gap(seed, i, &grid);
        if report.worst_index.is_none() || gap > report.max_gap {
            report.max_gap = gap;
            report.worst_index = Some(i);
        }
    }
    report
}
