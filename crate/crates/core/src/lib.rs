//! Gompertz-Pareto distribution of personal income.
//!
//! The lower ~99% of normalized incomes follow a Gompertz curve and the
//! richest ~1% a Pareto power law. This crate evaluates the distribution,
//! fits it to income data by linear regression, derives the Lorenz curve,
//! Gini coefficient and Gompertzian income share (with propagated
//! uncertainties), draws synthetic samples and recomputes the published
//! Brazilian reference fits.
//!
//! ```
//! use gpd_core::{GpdParams, QuadratureConfig, build_first_moment_grid, gini};
//!
//! let params = GpdParams::new(0.342, 7.533, 2.839).unwrap();
//! let cfg = QuadratureConfig::default();
//! let grid = build_first_moment_grid(&params, 256, &cfg).unwrap();
//! let g = gini(&params, &grid, &cfg).unwrap();
//! assert!((g - 0.613).abs() < 0.01);
//! ```

pub mod commands;
pub mod empirical;
pub mod error;
pub mod exec;
pub mod fitting;
pub mod inequality;
pub mod io;
pub mod model;
pub mod quadrature;
pub mod reference;
pub mod sampling;

pub use empirical::{
    empirical_ccdf, empirical_gini, empirical_lorenz, empirical_share, normalize, BinnedCcdf,
    EmpiricalDistribution, Normalization,
};
pub use error::{GpdError, Result};
pub use exec::Execution;
pub use fitting::{fit, fit_distribution, ordinary_least_squares, FitConfig, FitResult};
pub use inequality::{
    first_moment_distribution, gini, gompertz_share, lorenz_curve, propagate_uncertainty,
    InequalityReport, LorenzCurve, ParamSigmas, Target,
};
pub use model::{beta_from_constraint, theoretical_a, GpdParams};
pub use quadrature::{
    build_first_moment_grid, first_moment_integral, integrate, mean_income, FirstMomentGrid,
    QuadratureConfig,
};
pub use sampling::{inverse_ccdf, sample, SampleSpec};
