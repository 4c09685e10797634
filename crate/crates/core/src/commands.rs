//! Report-producing operations behind the `gpd` subcommands.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::empirical::{empirical_gini, empirical_share, Normalization};
use crate::error::{GpdError, Result};
use crate::exec::Execution;
use crate::fitting::{fit, fit_distribution, FitConfig, FitResult};
use crate::inequality::{
    first_moment_distribution, gini, gompertz_share, inequality_report, lorenz_curve,
    propagate_uncertainty, LorenzCurve, ParamSigmas, Target, A_RELATIVE_UNCERTAINTY,
};
use crate::io::{ingest, write_raw_file, Dataset, InputFormat, OutputFormat};
use crate::model::GpdParams;
use crate::quadrature::{build_first_moment_grid, QuadratureConfig, DEFAULT_GRID_NODES};
use crate::reference::{table1, Table1Row};
use crate::sampling::{sample, SampleSpec};

/// Everything a run needs besides the subcommand itself.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub input_path: Option<PathBuf>,
    pub input_format: InputFormat,
    pub normalization: Normalization,
    pub quadrature: QuadratureConfig,
    pub fit: FitConfig,
    pub output_path: Option<PathBuf>,
    pub output_format: OutputFormat,
    pub seed: u64,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            input_path: None,
            input_format: InputFormat::Raw,
            normalization: Normalization::Mean,
            quadrature: QuadratureConfig::default(),
            fit: FitConfig::default(),
            output_path: None,
            output_format: OutputFormat::Json,
            seed: 42,
        }
    }
}

/// Fitted parameters together with the inequality measures they imply.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitReport {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub year: Option<i32>,
    #[serde(rename = "B")]
    pub b: f64,
    #[serde(rename = "B_sigma")]
    pub b_sigma: f64,
    pub x_t: f64,
    pub alpha: f64,
    pub alpha_sigma: f64,
    pub beta: f64,
    pub beta_sigma: f64,
    #[serde(rename = "A_fitted")]
    pub a_fitted: f64,
    #[serde(rename = "A_discrepancy")]
    pub a_discrepancy: f64,
    pub r2_gompertz: f64,
    pub r2_pareto: f64,
    pub gini: f64,
    pub gini_sigma: f64,
    pub u: f64,
    pub u_sigma: f64,
    pub mean_income: f64,
}

/// Builds a [`FitReport`] from a fit. The propagated sigmas use the fitted
/// `B` and `alpha` errors, treat `x_t` as exact and include the 2.15%
/// relative uncertainty on `A`.
pub fn fit_report(fit: &FitResult, year: Option<i32>, cfg: &QuadratureConfig) -> Result<FitReport> {
    let sigmas = ParamSigmas::new(fit.b_sigma, 0.0, fit.alpha_sigma)
        .with_a_uncertainty(A_RELATIVE_UNCERTAINTY);
    let ineq = inequality_report(&fit.params, &sigmas, cfg)?;
    Ok(FitReport {
        year,
        b: fit.params.b(),
        b_sigma: fit.b_sigma,
        x_t: fit.params.x_t(),
        alpha: fit.params.alpha(),
        alpha_sigma: fit.alpha_sigma,
        beta: fit.params.beta(),
        beta_sigma: fit.beta_sigma,
        a_fitted: fit.a_fitted,
        a_discrepancy: fit.a_discrepancy,
        r2_gompertz: fit.r2_gompertz,
        r2_pareto: fit.r2_pareto,
        gini: ineq.gini,
        gini_sigma: ineq.gini_sigma,
        u: ineq.u,
        u_sigma: ineq.u_sigma,
        mean_income: ineq.mean_income,
    })
}

/// Fits whichever kind of dataset was loaded.
pub fn fit_dataset(data: &Dataset, cfg: &FitConfig) -> Result<FitResult> {
    match data {
        Dataset::Sample(d) => fit_distribution(d, cfg),
        Dataset::Binned(c) => fit(c, cfg),
    }
}

fn require_input(cfg: &RunConfig) -> Result<&Path> {
    cfg.input_path.as_deref().ok_or(GpdError::InvalidParameter {
        name: "input",
        value: f64::NAN,
        reason: "an input file is required",
    })
}

/// Loads the configured input, fits it and reports.
pub fn cmd_fit(cfg: &RunConfig) -> Result<(FitResult, FitReport)> {
    let data = ingest(require_input(cfg)?, cfg.input_format, cfg.normalization)?;
    let result = fit_dataset(&data, &cfg.fit)?;
    let report = fit_report(&result, None, &cfg.quadrature)?;
    Ok((result, report))
}

/// Lorenz plot data for explicit parameters.
pub fn cmd_lorenz(params: &GpdParams, n_points: usize, cfg: &QuadratureConfig) -> Result<LorenzCurve> {
    let grid = build_first_moment_grid(params, DEFAULT_GRID_NODES, cfg)?;
    lorenz_curve(params, n_points, &grid)
}

/// Draws a synthetic sample and writes it in raw format.
pub fn cmd_sample(params: &GpdParams, spec: &SampleSpec, output: &Path) -> Result<()> {
    let dist = sample(spec, params)?;
    write_raw_file(output, dist.values())
}

/// Pass/fail thresholds for the Table 1 reproduction.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Table1Tolerances {
    pub beta_rel: f64,
    pub gini: f64,
    pub u: f64,
}

impl Default for Table1Tolerances {
    fn default() -> Self {
        Self {
            beta_rel: 0.02,
            gini: 0.01,
            u: 0.5,
        }
    }
}

/// One recomputed Table 1 row.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Table1Check {
    pub year: i32,
    pub beta: f64,
    pub beta_ref: f64,
    pub beta_rel_delta: f64,
    pub gini_star: f64,
    pub gini_star_ref: f64,
    pub gini_delta: f64,
    pub gini_sigma: f64,
    pub u_star: f64,
    pub u_star_ref: f64,
    pub u_delta: f64,
    pub u_sigma: f64,
    pub mean_income: f64,
    pub beta_pass: bool,
    pub gini_pass: bool,
    pub u_pass: bool,
}

impl Table1Check {
    pub fn pass(&self) -> bool {
        self.beta_pass && self.gini_pass && self.u_pass
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Table1Report {
    pub tolerances: Table1Tolerances,
    pub rows: Vec<Table1Check>,
    pub all_pass: bool,
}

fn check_row(
    row: &Table1Row,
    tol: &Table1Tolerances,
    cfg: &QuadratureConfig,
    with_sigmas: bool,
) -> Result<Table1Check> {
    let params = row.params()?;
    let grid = build_first_moment_grid(&params, DEFAULT_GRID_NODES, cfg)?;
    let g = gini(&params, &grid, cfg)?;
    let u = gompertz_share(&params, &grid)?;
    let (gini_sigma, u_sigma) = if with_sigmas {
        let s = ParamSigmas::new(row.b_sigma, 0.0, row.alpha_sigma)
            .with_a_uncertainty(A_RELATIVE_UNCERTAINTY);
        (
            propagate_uncertainty(&params, &s, Target::Gini, cfg)?,
            propagate_uncertainty(&params, &s, Target::GompertzShare, cfg)?,
        )
    } else {
        (f64::NAN, f64::NAN)
    };
    let beta_rel_delta = (params.beta() - row.beta) / row.beta;
    let gini_delta = g - row.gini_star;
    let u_delta = u - row.u_star;
    Ok(Table1Check {
        year: row.year,
        beta: params.beta(),
        beta_ref: row.beta,
        beta_rel_delta,
        gini_star: g,
        gini_star_ref: row.gini_star,
        gini_delta,
        gini_sigma,
        u_star: u,
        u_star_ref: row.u_star,
        u_delta,
        u_sigma,
        mean_income: grid.mean_income(),
        beta_pass: beta_rel_delta.abs() <= tol.beta_rel,
        gini_pass: gini_delta.abs() <= tol.gini,
        u_pass: u_delta.abs() <= tol.u,
    })
}

/// Recomputes `beta`, Gini* and u* for every reference row.
pub fn cmd_table1(tol: &Table1Tolerances, cfg: &QuadratureConfig) -> Result<Table1Report> {
    cmd_table1_with(tol, cfg, true, Execution::default())
}

/// As [`cmd_table1`]; `with_sigmas = false` skips uncertainty propagation.
pub fn cmd_table1_with(
    tol: &Table1Tolerances,
    cfg: &QuadratureConfig,
    with_sigmas: bool,
    exec: Execution,
) -> Result<Table1Report> {
    let rows = exec
        .map(table1(), |row| check_row(row, tol, cfg, with_sigmas))
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
    let all_pass = rows.iter().all(Table1Check::pass);
    Ok(Table1Report {
        tolerances: *tol,
        rows,
        all_pass,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GiniSeriesRow {
    pub year: i32,
    pub gini_original: f64,
    pub gini_star: f64,
    pub u_original: f64,
    pub u_star: f64,
}

/// Year-by-year comparison of directly measured and model-implied values.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GiniSeries {
    pub rows: Vec<GiniSeriesRow>,
    /// Largest `|gini_star - gini_original|` and its year.
    pub max_gini_gap: f64,
    pub max_gini_gap_year: i32,
    /// Largest `|u_star - u_original| / u_original` and its year.
    pub max_u_rel_gap: f64,
    pub max_u_rel_gap_year: i32,
}

impl GiniSeries {
    pub fn from_rows(rows: Vec<GiniSeriesRow>) -> Result<Self> {
        if rows.is_empty() {
            return Err(GpdError::EmptyInput);
        }
        let gap = |r: &GiniSeriesRow| (r.gini_star - r.gini_original).abs();
        let ugap = |r: &GiniSeriesRow| (r.u_star - r.u_original).abs() / r.u_original;
        let g = rows
            .iter()
            .max_by(|a, b| gap(a).total_cmp(&gap(b)))
            .expect("non-empty");
        let u = rows
            .iter()
            .max_by(|a, b| ugap(a).total_cmp(&ugap(b)))
            .expect("non-empty");
        Ok(Self {
            max_gini_gap: gap(g),
            max_gini_gap_year: g.year,
            max_u_rel_gap: ugap(u),
            max_u_rel_gap_year: u.year,
            rows,
        })
    }
}

/// Series over the reference rows: the original columns are copied, the
/// starred ones recomputed from `(B, x_t, alpha)`.
pub fn gini_series_table1(cfg: &QuadratureConfig) -> Result<GiniSeries> {
    gini_series_table1_with(cfg, Execution::default())
}

pub fn gini_series_table1_with(cfg: &QuadratureConfig, exec: Execution) -> Result<GiniSeries> {
    let rows = exec
        .map(table1(), |row| -> Result<GiniSeriesRow> {
            let params = row.params()?;
            let grid = build_first_moment_grid(&params, DEFAULT_GRID_NODES, cfg)?;
            Ok(GiniSeriesRow {
                year: row.year,
                gini_original: row.gini_original,
                gini_star: gini(&params, &grid, cfg)?,
                u_original: row.u_original,
                u_star: gompertz_share(&params, &grid)?,
            })
        })
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
    GiniSeries::from_rows(rows)
}

/// Series over per-year raw samples: each is fitted, the starred values come
/// from the fit and the original ones from the sample itself (u at the
/// fitted threshold).
pub fn gini_series_from_inputs(
    inputs: &[(i32, PathBuf)],
    normalization: Normalization,
    fit_cfg: &FitConfig,
    cfg: &QuadratureConfig,
) -> Result<GiniSeries> {
    if inputs.is_empty() {
        return Err(GpdError::EmptyInput);
    }
    let mut sorted: Vec<&(i32, PathBuf)> = inputs.iter().collect();
    sorted.sort_by_key(|(y, _)| *y);
    let rows = Execution::default()
        .map(&sorted, |(year, path)| -> Result<GiniSeriesRow> {
            let dist = match ingest(path, InputFormat::Raw, normalization)? {
                Dataset::Sample(d) => d,
                Dataset::Binned(_) => unreachable!("raw format requested"),
            };
            let fitted = fit_distribution(&dist, fit_cfg)?;
            let grid = build_first_moment_grid(&fitted.params, DEFAULT_GRID_NODES, cfg)?;
            Ok(GiniSeriesRow {
                year: *year,
                gini_original: empirical_gini(&dist)?,
                gini_star: gini(&fitted.params, &grid, cfg)?,
                u_original: empirical_share(&dist, fitted.params.x_t())?,
                u_star: gompertz_share(&fitted.params, &grid)?,
            })
        })
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
    GiniSeries::from_rows(rows)
}

/// Point evaluation of the distribution functions.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EvalRow {
    pub x: f64,
    pub ccdf: f64,
    pub cdf: f64,
    pub density: f64,
    #[serde(rename = "F1")]
    pub f1: f64,
}

pub fn cmd_eval(params: &GpdParams, xs: &[f64], cfg: &QuadratureConfig) -> Result<Vec<EvalRow>> {
    let grid = build_first_moment_grid(params, DEFAULT_GRID_NODES, cfg)?;
    xs.iter()
        .map(|&x| {
            Ok(EvalRow {
                x,
                ccdf: params.ccdf(x)?,
                cdf: params.cdf(x)?,
                density: params.density(x)?,
                f1: first_moment_distribution(x, params, &grid)?,
            })
        })
        .collect()
}
