//! The Gompertz-Pareto distribution of normalized income.
//!
//! Incomes below the threshold `x_t` follow a Gompertz curve, incomes at or
//! above it a Pareto power law. All distribution functions are expressed in
//! percent, so the complementary CDF runs from 100 at `x = 0` down to 0.
//!
//! Only three parameters are free: `A` is pinned by `F(0) = 100` and `beta` by
//! continuity of the two branches at `x_t`.

use serde::{Deserialize, Serialize};

use crate::error::{GpdError, Result};

/// Densities and tail contributions smaller than this are flushed to zero.
pub const UNDERFLOW_LIMIT: f64 = 1e-300;

/// `ln(ln 100)`: the Gompertz location forced by `F(0) = 100`.
pub fn theoretical_a() -> f64 {
    100f64.ln().ln()
}

fn check_shape(b: f64, x_t: f64, alpha: f64) -> Result<()> {
    if !(b.is_finite() && b > 0.0) {
        return Err(GpdError::InvalidParameter {
            name: "B",
            value: b,
            reason: "must be positive and finite",
        });
    }
    if !(x_t.is_finite() && x_t > 0.0) {
        return Err(GpdError::InvalidParameter {
            name: "x_t",
            value: x_t,
            reason: "must be positive and finite",
        });
    }
    if !alpha.is_finite() {
        return Err(GpdError::InvalidParameter {
            name: "alpha",
            value: alpha,
            reason: "must be finite",
        });
    }
    if alpha <= 1.0 {
        return Err(GpdError::Divergent(alpha));
    }
    Ok(())
}

/// Pareto amplitude that makes the two branches meet at `x_t`:
/// `beta = x_t^alpha * exp(exp(A - B x_t))`.
pub fn beta_from_constraint(b: f64, x_t: f64, alpha: f64, a: f64) -> Result<f64> {
    check_shape(b, x_t, alpha)?;
    if !a.is_finite() {
        return Err(GpdError::InvalidParameter {
            name: "A",
            value: a,
            reason: "must be finite",
        });
    }
    Ok(x_t.powf(alpha) * gompertz_ccdf(x_t, a, b))
}

#[inline]
fn gompertz_ccdf(x: f64, a: f64, b: f64) -> f64 {
    (a - b * x).exp().exp()
}

/// Parameters of a Gompertz-Pareto distribution.
///
/// `beta` is never supplied by the caller; it is always derived from the
/// continuity constraint so the CCDF is continuous at `x_t`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GpdParams {
    #[serde(rename = "A")]
    a: f64,
    #[serde(rename = "B")]
    b: f64,
    x_t: f64,
    alpha: f64,
    beta: f64,
}

impl GpdParams {
    /// Builds the distribution from `(B, x_t, alpha)` with the theoretical `A`.
    pub fn new(b: f64, x_t: f64, alpha: f64) -> Result<Self> {
        Self::with_location(theoretical_a(), b, x_t, alpha)
    }

    /// Builds the distribution with an explicit Gompertz location `A`.
    ///
    /// Used for sensitivity analysis in `A` and for diagnostic fits with a
    /// free intercept. `F(0) = 100` only holds for the theoretical value.
    pub fn with_location(a: f64, b: f64, x_t: f64, alpha: f64) -> Result<Self> {
        let beta = beta_from_constraint(b, x_t, alpha, a)?;
        Ok(Self {
            a,
            b,
            x_t,
            alpha,
            beta,
        })
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn x_t(&self) -> f64 {
        self.x_t
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    /// `(B, x_t, alpha)`, the free parameters.
    pub fn triple(&self) -> [f64; 3] {
        [self.b, self.x_t, self.alpha]
    }

    /// CCDF value at the threshold, i.e. the percentage of the population in
    /// the Pareto tail.
    pub fn tail_fraction(&self) -> f64 {
        self.beta * self.x_t.powf(-self.alpha)
    }

    /// Gompertz branch `G(x)`, defined for every `x` (not only below `x_t`).
    pub fn gompertz_ccdf(&self, x: f64) -> f64 {
        gompertz_ccdf(x, self.a, self.b)
    }

    /// Pareto branch `P(x)`.
    pub fn pareto_ccdf(&self, x: f64) -> f64 {
        self.beta * x.powf(-self.alpha)
    }

    /// Gompertz density branch `g(x) = B e^(A-Bx) exp(e^(A-Bx))`.
    pub fn gompertz_density(&self, x: f64) -> f64 {
        let inner = (self.a - self.b * x).exp();
        let g = self.b * inner * inner.exp();
        if g < UNDERFLOW_LIMIT {
            0.0
        } else {
            g
        }
    }

    /// Pareto density branch `p(x) = alpha beta x^-(1+alpha)`.
    pub fn pareto_density(&self, x: f64) -> f64 {
        let p = self.alpha * self.beta * x.powf(-(1.0 + self.alpha));
        if p < UNDERFLOW_LIMIT {
            0.0
        } else {
            p
        }
    }

    fn check_x(x: f64) -> Result<()> {
        if x.is_nan() || x < 0.0 {
            Err(GpdError::NegativeIncome(x))
        } else {
            Ok(())
        }
    }

    /// Complementary CDF `F(x)` in percent: the share of the population with
    /// income at least `x`. The Pareto branch owns `x = x_t`. Rounding in
    /// `exp(exp(A))` is clipped so the result never exceeds 100.
    pub fn ccdf(&self, x: f64) -> Result<f64> {
        Self::check_x(x)?;
        Ok(self.ccdf_unchecked(x).min(100.0))
    }

    pub(crate) fn ccdf_unchecked(&self, x: f64) -> f64 {
        if x < self.x_t {
            self.gompertz_ccdf(x)
        } else {
            let p = self.pareto_ccdf(x);
            if p < UNDERFLOW_LIMIT {
                0.0
            } else {
                p
            }
        }
    }

    /// Cumulative distribution `100 - F(x)`.
    pub fn cdf(&self, x: f64) -> Result<f64> {
        Ok(100.0 - self.ccdf(x)?)
    }

    /// Probability density in percent per unit of normalized income.
    pub fn density(&self, x: f64) -> Result<f64> {
        Self::check_x(x)?;
        Ok(self.density_unchecked(x))
    }

    pub(crate) fn density_unchecked(&self, x: f64) -> f64 {
        if x < self.x_t {
            self.gompertz_density(x)
        } else {
            self.pareto_density(x)
        }
    }
}

/// Two-term exponential approximation of the Gompertz branch far from the
/// origin, with its Taylor remainder bound.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ExponentialApprox {
    /// `1 + e^(-Bx)`
    pub ccdf: f64,
    /// `B e^(-Bx)`
    pub density: f64,
    /// Upper bound on `|exp(e^(-Bx)) - (1 + e^(-Bx))|`.
    pub remainder_bound: f64,
    /// False when `e^(-Bx) >= 1`, where the expansion is not meaningful.
    pub valid: bool,
}

pub fn exponential_approx_ccdf(x: f64, b: f64) -> f64 {
    1.0 + (-b * x).exp()
}

pub fn exponential_approx_density(x: f64, b: f64) -> f64 {
    b * (-b * x).exp()
}

/// Lagrange remainder of the first-order expansion of `exp(z)` at `z = e^(-Bx)`:
/// `z^2/2 * exp(z)`.
pub fn exponential_approx_remainder_bound(x: f64, b: f64) -> f64 {
    let z = (-b * x).exp();
    0.5 * z * z * z.exp()
}

pub fn exponential_approx(x: f64, b: f64) -> ExponentialApprox {
    ExponentialApprox {
        ccdf: exponential_approx_ccdf(x, b),
        density: exponential_approx_density(x, b),
        remainder_bound: exponential_approx_remainder_bound(x, b),
        valid: (-b * x).exp() < 1.0,
    }
}
