//! Scalar special functions: log-gamma, the multivariate log-gamma, Bernoulli
//! polynomials, and chi-squared / standard-normal distribution functions.
//!
//! Quantile functions use the upper-tail convention throughout:
//! `chisq_upper_quantile(f, a)` is the point with upper-tail mass `a`, and
//! `normal_upper_quantile(a)` is `z_a` with `1 - Phi(z_a) = a`.

mod bernoulli;
mod distributions;
mod gamma;
mod roots;

pub use bernoulli::{
    bernoulli_number, bernoulli_poly, bernoulli_poly_coefficients, bernoulli_poly_exact, Rational,
    MAX_BERNOULLI_DEGREE,
};
pub use distributions::{
    chisq_cdf, chisq_pdf, chisq_sf, chisq_upper_quantile, normal_cdf, normal_pdf, normal_sf,
    normal_upper_quantile,
};
pub use gamma::{log_gamma, log_multivariate_gamma, regularized_gamma_p, regularized_gamma_q};

use crate::error::{domain, Result};

/// A probability in `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Probability(f64);

impl Probability {
    pub fn new(value: f64) -> Result<Self> {
        if (0.0..=1.0).contains(&value) {
            Ok(Self(value))
        } else {
            Err(domain(format!("probability {value} is outside [0, 1]")))
        }
    }

    /// A level strictly inside `(0, 1)`, as required by every quantile.
    pub fn level(value: f64) -> Result<Self> {
        if value > 0.0 && value < 1.0 {
            Ok(Self(value))
        } else {
            Err(domain(format!("level {value} is outside (0, 1)")))
        }
    }

    #[inline]
    pub fn get(self) -> f64 {
        self.0
    }
}

impl std::fmt::Display for Probability {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}
