use std::f64::consts::{FRAC_1_SQRT_2, PI};

use super::gamma::{gamma_prefix, regularized_gamma_p, regularized_gamma_q};
use super::roots::bracketed_newton;
use crate::error::{domain, Result};

fn check_dof(dof: u64) -> Result<f64> {
    if dof == 0 {
        Err(domain("chi-squared degrees of freedom must be positive"))
    } else {
        Ok(dof as f64)
    }
}

fn check_level(alpha: f64) -> Result<()> {
    if alpha > 0.0 && alpha < 1.0 {
        Ok(())
    } else {
        Err(domain(format!("level {alpha} is outside (0, 1)")))
    }
}

/// `Pr(chi2_f <= x)`; returns 0 for `x <= 0`.
pub fn chisq_cdf(dof: u64, x: f64) -> Result<f64> {
    let f = check_dof(dof)?;
    regularized_gamma_p(f / 2.0, x / 2.0)
}

/// Upper tail `Pr(chi2_f > x)`, computed directly rather than as `1 - cdf`.
pub fn chisq_sf(dof: u64, x: f64) -> Result<f64> {
    let f = check_dof(dof)?;
    regularized_gamma_q(f / 2.0, x / 2.0)
}

pub fn chisq_pdf(dof: u64, x: f64) -> Result<f64> {
    let f = check_dof(dof)?;
    Ok(chisq_density(f, x))
}

fn chisq_density(f: f64, x: f64) -> f64 {
    if x <= 0.0 {
        return if f < 2.0 {
            f64::INFINITY
        } else if f == 2.0 {
            0.5
        } else {
            0.0
        };
    }
    // x^{a-1} e^{-x/2} / (2^a Gamma(a)) = prefix(a, x/2) / x
    gamma_prefix(f / 2.0, x / 2.0) / x
}

/// Critical value `chi2_f(alpha)`: the point with upper-tail mass `alpha`.
pub fn chisq_upper_quantile(dof: u64, alpha: f64) -> Result<f64> {
    let f = check_dof(dof)?;
    check_level(alpha)?;

    // Wilson-Hilferty start.
    let z = normal_upper_quantile(alpha)?;
    let h = 2.0 / (9.0 * f);
    let wh = f * (1.0 - h + z * h.sqrt()).powi(3);
    let x0 = if wh > 0.0 { wh } else { f * 1e-3 };

    let mut hi = f.max(x0).max(1.0);
    while regularized_gamma_q(f / 2.0, hi / 2.0)? > alpha {
        hi *= 2.0;
    }
    let sf = |x: f64| regularized_gamma_q(f / 2.0, x / 2.0).unwrap_or(f64::NAN) - alpha;
    let slope = |x: f64| -chisq_density(f, x);
    Ok(bracketed_newton(sf, slope, 0.0, hi, x0))
}

pub fn normal_pdf(z: f64) -> f64 {
    (-0.5 * z * z).exp() / (2.0 * PI).sqrt()
}

/// Standard normal CDF through the complementary error function,
/// `erfc(t) = Q(1/2, t^2)` for `t >= 0`.
pub fn normal_cdf(z: f64) -> f64 {
    if z.is_nan() {
        return f64::NAN;
    }
    let half_q = 0.5 * erfc_nonneg(z.abs() * FRAC_1_SQRT_2);
    if z >= 0.0 {
        1.0 - half_q
    } else {
        half_q
    }
}

/// `1 - Phi(z)` without cancellation in the upper tail.
pub fn normal_sf(z: f64) -> f64 {
    normal_cdf(-z)
}

fn erfc_nonneg(t: f64) -> f64 {
    if t == f64::INFINITY {
        return 0.0;
    }
    regularized_gamma_q(0.5, t * t).expect("shape 1/2 is valid")
}

/// Upper-tail standard normal quantile `z_alpha`, so `1 - Phi(z_alpha) = alpha`.
pub fn normal_upper_quantile(alpha: f64) -> Result<f64> {
    check_level(alpha)?;
    if alpha == 0.5 {
        return Ok(0.0);
    }
    // Abramowitz & Stegun 26.2.23 start, then refine.
    let tail = alpha.min(1.0 - alpha);
    let t = (-2.0 * tail.ln()).sqrt();
    let approx = t
        - (2.515_517 + 0.802_853 * t + 0.010_328 * t * t)
            / (1.0 + 1.432_788 * t + 0.189_269 * t * t + 0.001_308 * t * t * t);
    let x0 = if alpha < 0.5 { approx } else { -approx };
    let lo = x0 - 1.0;
    let hi = x0 + 1.0;
    Ok(bracketed_newton(
        |z| normal_sf(z) - alpha,
        |z| -normal_pdf(z),
        lo,
        hi,
        x0,
    ))
}
