use std::f64::consts::TAU;

use super::{GeometryError, ObstacleShape, SupportKind, SupportModel, VERIFY_GRID_FACTOR};

/// Truncated real Fourier series `a0/2 + Σ a_n cos(nθ) + b_n sin(nθ)`.
#[derive(Debug, Clone, PartialEq)]
pub struct FourierSeries {
    a0: f64,
    cos: Vec<f64>,
    sin: Vec<f64>,
}

impl FourierSeries {
    /// `cos[n - 1]` and `sin[n - 1]` hold `a_n` and `b_n`.
    pub fn new(a0: f64, cos: Vec<f64>, sin: Vec<f64>) -> Self {
        assert_eq!(cos.len(), sin.len(), "coefficient vectors differ in length");
        Self { a0, cos, sin }
    }

    pub fn terms(&self) -> usize {
        self.cos.len()
    }

    pub fn a0(&self) -> f64 {
        self.a0
    }

    pub fn cos_coefficients(&self) -> &[f64] {
        &self.cos
    }

    pub fn sin_coefficients(&self) -> &[f64] {
        &self.sin
    }

    pub fn eval(&self, theta: f64) -> f64 {
        let (s1, c1) = theta.sin_cos();
        let (mut s, mut c) = (s1, c1);
        let mut acc = 0.5 * self.a0;
        for (an, bn) in self.cos.iter().zip(&self.sin) {
            acc += an * c + bn * s;
            let next_c = c * c1 - s * s1;
            s = s * c1 + c * s1;
            c = next_c;
        }
        acc
    }
}

/// Fits a conservative Fourier support model with the default verification
/// grid (ten times the fit grid).
pub fn fit_fourier(
    shape: &ObstacleShape,
    n_terms: usize,
    grid: usize,
) -> Result<SupportModel, GeometryError> {
    fit_fourier_with(shape, n_terms, grid, grid * VERIFY_GRID_FACTOR)
}

/// Discrete Fourier projection of the sampled support distance on a uniform
/// `grid`, followed by the margin `max(δ - δ̃)` over a uniform verification
/// grid of `verify_grid` points. The margin may be negative.
pub fn fit_fourier_with(
    shape: &ObstacleShape,
    n_terms: usize,
    grid: usize,
    verify_grid: usize,
) -> Result<SupportModel, GeometryError> {
    let needed = 4 * n_terms + 4;
    if grid < needed {
        return Err(GeometryError::GridTooCoarse {
            grid,
            terms: n_terms,
            needed,
        });
    }
    if verify_grid < grid * VERIFY_GRID_FACTOR {
        return Err(GeometryError::InvalidShape(format!(
            "verification grid {verify_grid} must be at least {VERIFY_GRID_FACTOR}x the fit grid {grid}"
        )));
    }

    let samples: Vec<(f64, f64)> = (0..grid)
        .map(|k| {
            let theta = TAU * k as f64 / grid as f64;
            (theta, shape.support_distance(theta))
        })
        .collect();
    let scale = 2.0 / grid as f64;
    let a0 = scale * samples.iter().map(|(_, d)| d).sum::<f64>();
    let mut cos = Vec::with_capacity(n_terms);
    let mut sin = Vec::with_capacity(n_terms);
    for n in 1..=n_terms {
        let nf = n as f64;
        let (mut an, mut bn) = (0.0, 0.0);
        for &(theta, d) in &samples {
            let (s, c) = (nf * theta).sin_cos();
            an += d * c;
            bn += d * s;
        }
        cos.push(scale * an);
        sin.push(scale * bn);
    }
    let series = FourierSeries::new(a0, cos, sin);

    let mut margin = f64::NEG_INFINITY;
    let mut max_residual: f64 = 0.0;
    for k in 0..verify_grid {
        let theta = TAU * k as f64 / verify_grid as f64;
        let diff = shape.support_distance(theta) - series.eval(theta);
        margin = margin.max(diff);
        max_residual = max_residual.max(diff.abs());
    }

    Ok(SupportModel::from_kind(SupportKind::Fourier {
        series,
        margin,
        max_residual,
    }))
}
