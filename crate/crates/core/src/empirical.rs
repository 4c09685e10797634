//! Model-free estimators computed directly from an income sample.

use serde::{Deserialize, Serialize};

use crate::error::{GpdError, Result};
use crate::exec::Execution;
use crate::inequality::LorenzCurve;

/// How raw incomes are turned into normalized incomes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Normalization {
    /// Divide by the sample mean.
    Mean,
    /// Divide by a given positive constant.
    Constant(f64),
    /// Keep the values as they are.
    None,
}

/// Sorted sample of non-negative normalized incomes.
#[derive(Debug, Clone, PartialEq)]
pub struct EmpiricalDistribution {
    values: Vec<f64>,
    normalization_constant: f64,
}

impl EmpiricalDistribution {
    /// Sample from values that are already normalized and sorted ascending.
    pub(crate) fn from_sorted(values: Vec<f64>, normalization_constant: f64) -> Self {
        debug_assert!(values.windows(2).all(|w| w[0] <= w[1]));
        Self {
            values,
            normalization_constant,
        }
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Divisor that was applied to the raw incomes.
    pub fn normalization_constant(&self) -> f64 {
        self.normalization_constant
    }

    pub fn min(&self) -> f64 {
        self.values[0]
    }

    pub fn max(&self) -> f64 {
        self.values[self.values.len() - 1]
    }

    pub fn mean(&self) -> f64 {
        self.values.iter().sum::<f64>() / self.values.len() as f64
    }

    /// Raw incomes, i.e. the values multiplied back by the normalization constant.
    pub fn denormalized(&self) -> Vec<f64> {
        self.values
            .iter()
            .map(|v| v * self.normalization_constant)
            .collect()
    }

    /// Same incomes divided by a different constant (given in raw units).
    pub fn renormalized(&self, mode: Normalization) -> Result<Self> {
        normalize(&self.denormalized(), mode)
    }
}

/// Sorts and normalizes a raw income sample.
pub fn normalize(raw: &[f64], mode: Normalization) -> Result<EmpiricalDistribution> {
    if raw.is_empty() {
        return Err(GpdError::EmptyInput);
    }
    if raw.len() < 2 {
        return Err(GpdError::TooFewValues {
            required: 2,
            got: raw.len(),
        });
    }
    if let Some(&bad) = raw.iter().find(|v| !(v.is_finite() && **v >= 0.0)) {
        return Err(GpdError::NegativeIncome(bad));
    }
    let total: f64 = raw.iter().sum();
    if total == 0.0 {
        return Err(GpdError::ZeroIncome);
    }
    let constant = match mode {
        Normalization::Mean => total / raw.len() as f64,
        Normalization::Constant(c) => {
            if !(c.is_finite() && c > 0.0) {
                return Err(GpdError::InvalidParameter {
                    name: "normalization constant",
                    value: c,
                    reason: "must be positive",
                });
            }
            c
        }
        Normalization::None => 1.0,
    };
    let mut values: Vec<f64> = raw.iter().map(|v| v / constant).collect();
    Execution::default().sort_f64(&mut values);
    Ok(EmpiricalDistribution::from_sorted(values, constant))
}

/// Complementary CDF sampled at data points, in percent.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BinnedCcdf {
    points: Vec<(f64, f64)>,
}

impl BinnedCcdf {
    /// Validates that `x` strictly increases, `F` strictly decreases and
    /// `0 < F <= 100`.
    pub fn new(points: Vec<(f64, f64)>) -> Result<Self> {
        if points.is_empty() {
            return Err(GpdError::EmptyInput);
        }
        for &(x, f) in &points {
            if !(x.is_finite() && x >= 0.0) {
                return Err(GpdError::NegativeIncome(x));
            }
            if !(f > 0.0 && f <= 100.0) {
                return Err(GpdError::OutOfRange {
                    value: f,
                    lo: 0.0,
                    hi: 100.0,
                });
            }
        }
        for w in points.windows(2) {
            let ((x0, f0), (x1, f1)) = (w[0], w[1]);
            if !(x1 > x0 && f1 < f0) {
                return Err(GpdError::NonMonotone { x0, f0, x1, f1 });
            }
        }
        Ok(Self { points })
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

    /// Copy with every abscissa multiplied by `factor`.
    pub fn rescaled(&self, factor: f64) -> Result<Self> {
        Self::new(self.points.iter().map(|&(x, f)| (x * factor, f)).collect())
    }
}

/// `F(x_j) = 100 * #{values >= x_j} / n` at each distinct sample value.
pub fn empirical_ccdf(dist: &EmpiricalDistribution) -> BinnedCcdf {
    let n = dist.len();
    let values = dist.values();
    let mut points = Vec::new();
    let mut j = 0;
    while j < n {
        let x = values[j];
        points.push((x, 100.0 * (n - j) as f64 / n as f64));
        while j < n && values[j] == x {
            j += 1;
        }
    }
    BinnedCcdf { points }
}

/// Lorenz curve of the sample: `(100 k/n, 100 S_k/S_n)` for `k = 0..=n`.
pub fn empirical_lorenz(dist: &EmpiricalDistribution) -> Result<LorenzCurve> {
    let total: f64 = dist.values().iter().sum();
    if total <= 0.0 {
        return Err(GpdError::ZeroIncome);
    }
    let n = dist.len() as f64;
    let mut points = Vec::with_capacity(dist.len() + 1);
    points.push((0.0, 0.0));
    let mut acc = 0.0;
    for (k, v) in dist.values().iter().enumerate() {
        acc += v;
        points.push((100.0 * (k + 1) as f64 / n, (100.0 * acc / total).min(100.0)));
    }
    let last = points.len() - 1;
    points[last] = (100.0, 100.0);
    Ok(LorenzCurve::from_points(points, None))
}

/// Gini coefficient from the trapezoid area under the sample Lorenz curve.
pub fn empirical_gini(dist: &EmpiricalDistribution) -> Result<f64> {
    let total: f64 = dist.values().iter().sum();
    if total <= 0.0 {
        return Err(GpdError::ZeroIncome);
    }
    // trapezoid area on the unit square: (1/n) * sum_k (L_{k-1} + L_k) / 2
    let n = dist.len() as f64;
    let mut acc = 0.0;
    let mut prev = 0.0;
    let mut area = 0.0;
    for v in dist.values() {
        acc += v;
        let cur = acc / total;
        area += 0.5 * (prev + cur);
        prev = cur;
    }
    area /= n;
    Ok(1.0 - 2.0 * area)
}

/// Percentage of total income earned by individuals with income strictly
/// below `cutoff`.
pub fn empirical_share(dist: &EmpiricalDistribution, cutoff: f64) -> Result<f64> {
    if cutoff.is_nan() || cutoff <= 0.0 {
        return Err(GpdError::InvalidParameter {
            name: "cutoff",
            value: cutoff,
            reason: "must be positive",
        });
    }
    let total: f64 = dist.values().iter().sum();
    if total <= 0.0 {
        return Err(GpdError::ZeroIncome);
    }
    let below = dist.values().partition_point(|&v| v < cutoff);
    let part: f64 = dist.values()[..below].iter().sum();
    Ok(100.0 * part / total)
}

/// Kolmogorov-Smirnov distance between the sample and a model CDF given as
/// a probability in `[0, 1]`.
pub fn ks_distance<F: Fn(f64) -> f64>(dist: &EmpiricalDistribution, cdf: F) -> f64 {
    let n = dist.len() as f64;
    let values = dist.values();
    let mut d: f64 = 0.0;
    let mut j = 0;
    while j < values.len() {
        let x = values[j];
        let below = j as f64 / n;
        while j < values.len() && values[j] == x {
            j += 1;
        }
        let upto = j as f64 / n;
        let c = cdf(x);
        d = d.max((c - below).abs()).max((upto - c).abs());
    }
    d
}

/// Asymptotic Kolmogorov critical value `c(level) / sqrt(n)` for the
/// one-sample test at level 0.01, 0.05 or 0.10.
pub fn ks_critical_value(n: usize, level: f64) -> Option<f64> {
    let c = if (level - 0.01).abs() < 1e-12 {
        1.627_62
    } else if (level - 0.05).abs() < 1e-12 {
        1.358_10
    } else if (level - 0.10).abs() < 1e-12 {
        1.223_85
    } else {
        return None;
    };
    Some(c / (n as f64).sqrt())
}
