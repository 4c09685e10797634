//! Published Gompertz-Pareto fits to Brazilian household income, 1981-2007.
//!
//! One row per survey year (no survey in 1991, 1994 and 2000). `gini_original`
//! and `u_original` were measured directly on the microdata; `gini_star` and
//! `u_star` were computed from `(B, x_t, alpha)` through the model.

use serde::{Deserialize, Serialize};

use crate::error::{GpdError, Result};
use crate::model::GpdParams;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Table1Row {
    pub year: i32,
    #[serde(rename = "B")]
    pub b: f64,
    #[serde(rename = "B_sigma")]
    pub b_sigma: f64,
    pub x_t: f64,
    pub alpha: f64,
    pub alpha_sigma: f64,
    pub beta: f64,
    pub beta_sigma: f64,
    pub gini_original: f64,
    pub u_original: f64,
    pub gini_star: f64,
    pub gini_star_sigma: f64,
    pub u_star: f64,
    pub u_star_sigma: f64,
}

impl Table1Row {
    pub fn params(&self) -> Result<GpdParams> {
        GpdParams::new(self.b, self.x_t, self.alpha)
    }
}

#[allow(clippy::too_many_arguments)]
const fn row(
    year: i32,
    b: f64,
    b_sigma: f64,
    x_t: f64,
    alpha: f64,
    alpha_sigma: f64,
    beta: f64,
    beta_sigma: f64,
    gini_original: f64,
    u_original: f64,
    gini_star: f64,
    gini_star_sigma: f64,
    u_star: f64,
    u_star_sigma: f64,
) -> Table1Row {
    Table1Row {
        year,
        b,
        b_sigma,
        x_t,
        alpha,
        alpha_sigma,
        beta,
        beta_sigma,
        gini_original,
        u_original,
        gini_star,
        gini_star_sigma,
        u_star,
        u_star_sigma,
    }
}

#[rustfmt::skip]
const TABLE1: [Table1Row; 24] = [
    row(1981, 0.342, 0.016, 7.533, 2.839, 0.109, 438.0, 98.0, 0.574, 87.7, 0.613, 0.088, 82.5, 5.1),
    row(1982, 0.342, 0.015, 7.473, 2.677, 0.057, 312.0, 38.0, 0.581, 87.1, 0.615, 0.049, 82.0, 3.2),
    row(1983, 0.330, 0.010, 6.910, 2.636, 0.047, 261.0, 25.0, 0.584, 85.5, 0.611, 0.039, 81.6, 2.8),
    row(1984, 0.332, 0.013, 7.388, 2.839, 0.109, 434.0, 96.0, 0.576, 87.2, 0.611, 0.087, 82.4, 5.1),
    row(1985, 0.329, 0.010, 7.490, 2.656, 0.052, 311.0, 34.0, 0.589, 85.8, 0.614, 0.044, 81.9, 3.0),
    row(1986, 0.344, 0.013, 7.112, 2.567, 0.034, 229.0, 17.0, 0.580, 85.2, 0.615, 0.031, 81.6, 2.5),
    row(1987, 0.343, 0.016, 7.626, 2.724, 0.070, 354.0, 52.0, 0.592, 85.9, 0.615, 0.059, 82.2, 3.7),
    row(1988, 0.324, 0.015, 8.140, 2.874, 0.122, 576.0, 149.0, 0.609, 85.4, 0.614, 0.102, 82.6, 5.8),
    row(1989, 0.317, 0.010, 7.856, 2.777, 0.086, 448.0, 81.0, 0.628, 82.5, 0.612, 0.072, 82.3, 4.3),
    row(1990, 0.335, 0.016, 8.074, 2.636, 0.047, 335.0, 36.0, 0.605, 85.9, 0.618, 0.044, 81.8, 3.0),
    row(1992, 0.364, 0.019, 7.635, 2.636, 0.047, 283.0, 30.0, 0.578, 87.0, 0.619, 0.044, 81.8, 2.9),
    row(1993, 0.330, 0.008, 7.674, 2.567, 0.034, 270.0, 19.0, 0.599, 84.1, 0.616, 0.030, 81.6, 2.4),
    row(1995, 0.333, 0.012, 7.887, 2.777, 0.086, 432.0, 78.0, 0.596, 85.9, 0.615, 0.072, 82.3, 4.3),
    row(1996, 0.347, 0.020, 8.163, 2.749, 0.077, 421.0, 71.0, 0.598, 86.7, 0.619, 0.068, 82.1, 4.1),
    row(1997, 0.338, 0.016, 7.935, 2.617, 0.043, 310.0, 30.0, 0.598, 86.1, 0.618, 0.040, 81.8, 2.8),
    row(1998, 0.326, 0.009, 7.628, 2.677, 0.057, 338.0, 40.0, 0.597, 84.5, 0.614, 0.048, 81.9, 3.2),
    row(1999, 0.331, 0.013, 7.811, 2.777, 0.086, 426.0, 77.0, 0.590, 86.0, 0.614, 0.072, 82.3, 4.3),
    row(2001, 0.335, 0.011, 7.774, 2.724, 0.070, 375.0, 55.0, 0.592, 85.2, 0.615, 0.059, 82.1, 3.7),
    row(2002, 0.339, 0.015, 7.878, 2.777, 0.086, 424.0, 77.0, 0.586, 86.4, 0.615, 0.073, 82.3, 4.3),
    row(2003, 0.333, 0.009, 7.374, 2.777, 0.086, 381.0, 67.0, 0.579, 85.4, 0.612, 0.070, 82.3, 4.2),
    row(2004, 0.342, 0.015, 7.653, 3.104, 0.226, 775.0, 358.0, 0.582, 87.2, 0.611, 0.175, 83.1, 9.7),
    row(2005, 0.326, 0.009, 7.403, 2.839, 0.109, 444.0, 97.0, 0.580, 86.2, 0.610, 0.087, 82.4, 5.0),
    row(2006, 0.327, 0.014, 7.910, 3.749, 0.561, 3295.0, 3824.0, 0.581, 87.9, 0.605, 0.408, 84.2, 22.4),
    row(2007, 0.334, 0.009, 6.934, 2.839, 0.109, 385.0, 82.0, 0.572, 85.7, 0.608, 0.084, 82.3, 4.9),
];

/// All 24 rows, ordered by year.
pub fn table1() -> &'static [Table1Row] {
    &TABLE1
}

pub fn table1_row(year: i32) -> Result<&'static Table1Row> {
    TABLE1
        .iter()
        .find(|r| r.year == year)
        .ok_or(GpdError::UnknownYear(year))
}
