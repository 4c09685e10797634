//! Lorenz curve, Gini coefficient and Gompertzian income share implied by a
//! fitted distribution, with first-order uncertainty propagation.

use serde::{Deserialize, Serialize};

use crate::error::{GpdError, Result};
use crate::exec::Execution;
use crate::model::GpdParams;
use crate::quadrature::{
    build_first_moment_grid, integrate, FirstMomentGrid, QuadratureConfig, DEFAULT_GRID_NODES,
};
use crate::sampling::inverse_ccdf_unchecked;

/// Largest population coordinate reached by the uniform part of a model
/// Lorenz curve; the curve is closed with the limit point (100, 100).
pub const LORENZ_F_MAX: f64 = 99.99;

/// Relative step for the central differences of [`propagate_uncertainty`].
pub const PROPAGATION_STEP: f64 = 1e-4;

/// Relative uncertainty on `A` allowed for by the reference Table 1 errors.
pub const A_RELATIVE_UNCERTAINTY: f64 = 0.0215;

/// Ordered `(F, F1)` points, both in percent.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LorenzCurve {
    points: Vec<(f64, f64)>,
    transition_index: Option<usize>,
}

impl LorenzCurve {
    pub(crate) fn from_points(points: Vec<(f64, f64)>, transition_index: Option<usize>) -> Self {
        Self {
            points,
            transition_index,
        }
    }

    pub fn points(&self) -> &[(f64, f64)] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Index of the point at `x = x_t`, for model curves.
    pub fn transition_index(&self) -> Option<usize> {
        self.transition_index
    }

    pub fn transition_point(&self) -> Option<(f64, f64)> {
        self.transition_index.map(|i| self.points[i])
    }

    /// Trapezoid area under the curve, on the `[0,100]^2` square.
    pub fn area(&self) -> f64 {
        self.points
            .windows(2)
            .map(|w| 0.5 * (w[1].0 - w[0].0) * (w[0].1 + w[1].1))
            .sum()
    }

    /// `1 - 2e-4 * area`.
    pub fn gini(&self) -> f64 {
        1.0 - 2e-4 * self.area()
    }

    pub fn is_monotone(&self) -> bool {
        self.points
            .windows(2)
            .all(|w| w[1].0 >= w[0].0 && w[1].1 >= w[0].1)
    }

    /// Every point on or below the egalitarian diagonal (up to `tol`).
    pub fn is_below_diagonal(&self, tol: f64) -> bool {
        self.points.iter().all(|(f, f1)| *f1 <= *f + tol)
    }

    /// Chord slopes are non-decreasing, up to a relative tolerance.
    pub fn is_convex(&self, rel_tol: f64) -> bool {
        let slopes: Vec<f64> = self
            .points
            .windows(2)
            .filter(|w| w[1].0 > w[0].0)
            .map(|w| (w[1].1 - w[0].1) / (w[1].0 - w[0].0))
            .collect();
        slopes
            .windows(2)
            .all(|s| s[1] >= s[0] - rel_tol * s[0].abs().max(1e-3))
    }

    /// Largest vertical gap to `other`, evaluated at this curve's abscissae
    /// by linear interpolation of `other`.
    pub fn max_vertical_gap(&self, other: &LorenzCurve) -> f64 {
        let o = other.points();
        let mut j = 0;
        let mut gap: f64 = 0.0;
        for &(f, f1) in &self.points {
            while j + 1 < o.len() && o[j + 1].0 < f {
                j += 1;
            }
            let y = if j + 1 >= o.len() {
                o[o.len() - 1].1
            } else {
                let (x0, y0) = o[j];
                let (x1, y1) = o[j + 1];
                if x1 > x0 {
                    y0 + (y1 - y0) * ((f - x0) / (x1 - x0)).clamp(0.0, 1.0)
                } else {
                    y1
                }
            };
            gap = gap.max((f1 - y).abs());
        }
        gap
    }
}

/// Gini, Gompertzian share and mean income with propagated uncertainties.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InequalityReport {
    pub gini: f64,
    pub gini_sigma: f64,
    pub u: f64,
    pub u_sigma: f64,
    pub mean_income: f64,
}

/// First-moment distribution `F1(x)` in percent: the share of total income
/// earned by individuals with income up to `x`.
pub fn first_moment_distribution(x: f64, params: &GpdParams, grid: &FirstMomentGrid) -> Result<f64> {
    if x.is_nan() || x < 0.0 {
        return Err(GpdError::NegativeIncome(x));
    }
    Ok(first_moment_distribution_unchecked(x, params, grid))
}

fn first_moment_distribution_unchecked(x: f64, params: &GpdParams, grid: &FirstMomentGrid) -> f64 {
    let mean = grid.mean_income();
    if x < params.x_t() {
        grid.eval(x) / mean
    } else {
        let a = params.alpha();
        100.0 + a * params.beta() / (1.0 - a) * x.powf(1.0 - a) / mean
    }
}

/// Left limit of `F1` at `x_t`, from the Gompertz branch.
pub fn first_moment_distribution_left(grid: &FirstMomentGrid) -> f64 {
    grid.total() / grid.mean_income()
}

/// Model Lorenz curve.
///
/// `n_points` population shares are spaced uniformly over `[0, 99.99]`; the
/// point at `x_t` is inserted and its index recorded, and the curve is closed
/// with `(100, 100)`, the limit as `x -> inf`.
pub fn lorenz_curve(params: &GpdParams, n_points: usize, grid: &FirstMomentGrid) -> Result<LorenzCurve> {
    lorenz_curve_with(params, n_points, grid, Execution::default())
}

pub fn lorenz_curve_with(
    params: &GpdParams,
    n_points: usize,
    grid: &FirstMomentGrid,
    exec: Execution,
) -> Result<LorenzCurve> {
    if n_points < 16 {
        return Err(GpdError::InvalidParameter {
            name: "n_points",
            value: n_points as f64,
            reason: "must be at least 16",
        });
    }
    let step = LORENZ_F_MAX / (n_points - 1) as f64;
    let mut points = exec.map_range(n_points, |k| {
        let f = if k + 1 == n_points {
            LORENZ_F_MAX
        } else {
            k as f64 * step
        };
        let x = inverse_ccdf_unchecked(100.0 - f, params);
        (f, first_moment_distribution_unchecked(x, params, grid))
    });
    points[0] = (0.0, 0.0);

    let f_t = 100.0 - params.tail_fraction();
    let u = first_moment_distribution_unchecked(params.x_t(), params, grid);
    let pos = points.partition_point(|p| p.0 < f_t);
    let transition_index = if pos < points.len() && points[pos].0 == f_t {
        points[pos] = (f_t, u);
        pos
    } else {
        points.insert(pos, (f_t, u));
        pos
    };
    points.push((100.0, 100.0));

    // clamp rounding noise so the curve stays inside the unit square
    for p in &mut points {
        p.1 = p.1.clamp(0.0, p.0);
    }
    Ok(LorenzCurve::from_points(points, Some(transition_index)))
}

/// Closed-form Gini coefficient of the distribution.
///
/// `1 - 2e-4 { (1/<x>) ∫_0^x_t I(x) g(x) dx + 100 beta x_t^-alpha
///   + alpha^2 beta^2 x_t^(1-2 alpha) / [<x> (alpha-1)(1-2 alpha)] }`
pub fn gini(params: &GpdParams, grid: &FirstMomentGrid, cfg: &QuadratureConfig) -> Result<f64> {
    let a = params.alpha();
    if a <= 1.0 {
        return Err(GpdError::Divergent(a));
    }
    let mean = grid.mean_income();
    let x_t = params.x_t();
    let beta = params.beta();
    let inner = integrate(|x| grid.eval(x) * params.gompertz_density(x), 0.0, x_t, cfg)?;
    let gompertz_part = inner / mean;
    let threshold_part = 100.0 * beta * x_t.powf(-a);
    let tail_part =
        a * a * beta * beta * x_t.powf(1.0 - 2.0 * a) / (mean * (a - 1.0) * (1.0 - 2.0 * a));
    Ok(1.0 - 2e-4 * (gompertz_part + threshold_part + tail_part))
}

/// Percentage of total income accruing to the Gompertz segment:
/// `u = 100 - alpha/(alpha-1) * x_t/<x> * exp(exp(A - B x_t))`.
pub fn gompertz_share(params: &GpdParams, grid: &FirstMomentGrid) -> Result<f64> {
    let a = params.alpha();
    if a <= 1.0 {
        return Err(GpdError::Divergent(a));
    }
    let mean = grid.mean_income();
    Ok(100.0 - a / (a - 1.0) * params.x_t() / mean * params.gompertz_ccdf(params.x_t()))
}

/// Quantity whose uncertainty is propagated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Target {
    Gini,
    GompertzShare,
}

/// Standard errors of the free parameters.
///
/// `a_rel` is a relative uncertainty on `A`; it is zero unless the caller
/// asks for it.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct ParamSigmas {
    pub b: f64,
    pub x_t: f64,
    pub alpha: f64,
    pub a_rel: f64,
}

impl ParamSigmas {
    pub fn new(b: f64, x_t: f64, alpha: f64) -> Self {
        Self {
            b,
            x_t,
            alpha,
            a_rel: 0.0,
        }
    }

    pub fn with_a_uncertainty(mut self, a_rel: f64) -> Self {
        self.a_rel = a_rel;
        self
    }

    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            b: self.b * factor,
            x_t: self.x_t * factor,
            alpha: self.alpha * factor,
            a_rel: self.a_rel * factor,
        }
    }

    fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("sigma_B", self.b),
            ("sigma_x_t", self.x_t),
            ("sigma_alpha", self.alpha),
            ("sigma_A", self.a_rel),
        ] {
            if !(v >= 0.0 && v.is_finite()) {
                return Err(GpdError::InvalidParameter {
                    name,
                    value: v,
                    reason: "standard errors must be non-negative",
                });
            }
        }
        Ok(())
    }
}

/// Evaluates a target from scratch for the given parameters.
pub fn evaluate_target(params: &GpdParams, target: Target, cfg: &QuadratureConfig) -> Result<f64> {
    let grid = build_first_moment_grid(params, DEFAULT_GRID_NODES, cfg)?;
    match target {
        Target::Gini => gini(params, &grid, cfg),
        Target::GompertzShare => gompertz_share(params, &grid),
    }
}

/// First-order (quadratic) propagation of parameter standard errors:
/// `sqrt(sum_i (d target / d theta_i)^2 sigma_i^2)` with central differences
/// of relative step [`PROPAGATION_STEP`]. Parameter correlations are ignored.
pub fn propagate_uncertainty(
    params: &GpdParams,
    sigmas: &ParamSigmas,
    target: Target,
    cfg: &QuadratureConfig,
) -> Result<f64> {
    propagate_uncertainty_with(params, sigmas, target, cfg, Execution::default())
}

pub fn propagate_uncertainty_with(
    params: &GpdParams,
    sigmas: &ParamSigmas,
    target: Target,
    cfg: &QuadratureConfig,
    exec: Execution,
) -> Result<f64> {
    sigmas.validate()?;
    let base = [params.a(), params.b(), params.x_t(), params.alpha()];
    let sig = [sigmas.a_rel * params.a().abs(), sigmas.b, sigmas.x_t, sigmas.alpha];
    let active: Vec<usize> = (0..4).filter(|&i| sig[i] > 0.0).collect();

    let partials = exec.map(&active, |&i| -> Result<f64> {
        let h = PROPAGATION_STEP * base[i].abs();
        let eval = |delta: f64| {
            let mut p = base;
            p[i] += delta;
            let shifted = GpdParams::with_location(p[0], p[1], p[2], p[3])?;
            evaluate_target(&shifted, target, cfg)
        };
        Ok((eval(h)? - eval(-h)?) / (2.0 * h))
    });

    let mut var = 0.0;
    for (&i, d) in active.iter().zip(partials) {
        let d = d?;
        var += d * d * sig[i] * sig[i];
    }
    Ok(var.sqrt())
}

/// Gini, `u` and mean income with their uncertainties.
pub fn inequality_report(
    params: &GpdParams,
    sigmas: &ParamSigmas,
    cfg: &QuadratureConfig,
) -> Result<InequalityReport> {
    let grid = build_first_moment_grid(params, DEFAULT_GRID_NODES, cfg)?;
    Ok(InequalityReport {
        gini: gini(params, &grid, cfg)?,
        gini_sigma: propagate_uncertainty(params, sigmas, Target::Gini, cfg)?,
        u: gompertz_share(params, &grid)?,
        u_sigma: propagate_uncertainty(params, sigmas, Target::GompertzShare, cfg)?,
        mean_income: grid.mean_income(),
    })
}
