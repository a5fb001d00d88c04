use std::f64::consts::PI;

use crate::error::{domain, Result};

const HALF_LN_2PI: f64 = 0.918_938_533_204_672_8;

// Lanczos approximation, g = 7, nine terms.
const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

/// Switch-over from Lanczos to the Stirling series.
const STIRLING_MIN: f64 = 10.0;

/// `ln Gamma(x)` for `x > 0`.
pub fn log_gamma(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(domain(format!(
            "log_gamma requires a finite x > 0, got {x}"
        )));
    }
    Ok(ln_gamma_pos(x))
}

pub(crate) fn ln_gamma_pos(x: f64) -> f64 {
    if x < 0.5 {
        // Reflection: Gamma(x) Gamma(1 - x) = pi / sin(pi x).
        return (PI / (PI * x).sin()).ln() - ln_gamma_pos(1.0 - x);
    }
    if x >= STIRLING_MIN {
        return (x - 0.5) * x.ln() - x + HALF_LN_2PI + stirling_correction(x);
    }
    let z = x - 1.0;
    let mut acc = LANCZOS[0];
    for (i, &c) in LANCZOS.iter().enumerate().skip(1) {
        acc += c / (z + i as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    HALF_LN_2PI + (z + 0.5) * t.ln() - t + acc.ln()
}

/// `ln Gamma(x) - [(x - 1/2) ln x - x + ln sqrt(2 pi)]` for `x >= 10`.
pub(crate) fn stirling_correction(x: f64) -> f64 {
    // Coefficients B_{2k} / (2k (2k - 1)).
    const C: [f64; 7] = [
        1.0 / 12.0,
        -1.0 / 360.0,
        1.0 / 1260.0,
        -1.0 / 1680.0,
        1.0 / 1188.0,
        -691.0 / 360_360.0,
        1.0 / 156.0,
    ];
    let inv = 1.0 / x;
    let inv2 = inv * inv;
    let mut acc = 0.0;
    for &c in C.iter().rev() {
        acc = acc * inv2 + c;
    }
    acc * inv
}

/// `ln Gamma_p(a) = p(p-1)/4 ln(pi) + sum_{j=1}^p ln Gamma(a - (j-1)/2)`,
/// defined for `a > (p - 1)/2`.
pub fn log_multivariate_gamma(p: usize, a: f64) -> Result<f64> {
    if p == 0 {
        return Err(domain("multivariate gamma needs p >= 1"));
    }
    let pole = (p as f64 - 1.0) / 2.0;
    if !(a > pole) {
        return Err(domain(format!(
            "multivariate gamma of dimension {p} needs a > {pole}, got {a}"
        )));
    }
    let pf = p as f64;
    let mut acc = pf * (pf - 1.0) / 4.0 * PI.ln();
    for j in 0..p {
        acc += ln_gamma_pos(a - j as f64 / 2.0);
    }
    Ok(acc)
}

/// `x^a e^{-x} / Gamma(a)`, evaluated so that large `a` with `x` near `a`
/// does not lose the leading digits to cancellation.
pub(crate) fn gamma_prefix(a: f64, x: f64) -> f64 {
    if x == 0.0 {
        return 0.0;
    }
    if a >= STIRLING_MIN {
        let t = (x - a) / a;
        let dev = t - t.ln_1p();
        (-a * dev + 0.5 * (a / (2.0 * PI)).ln() - stirling_correction(a)).exp()
    } else {
        (a * x.ln() - x - ln_gamma_pos(a)).exp()
    }
}

const EPS: f64 = 1e-16;
const MAX_ITER: usize = 100_000;
const TINY: f64 = 1e-300;

fn check_args(a: f64, x: f64) -> Result<()> {
    if !(a > 0.0) || !a.is_finite() {
        return Err(domain(format!(
            "incomplete gamma needs shape a > 0, got {a}"
        )));
    }
    if x.is_nan() {
        return Err(domain("incomplete gamma argument is NaN"));
    }
    Ok(())
}

/// Lower regularized incomplete gamma `P(a, x)`; `x <= 0` gives 0.
pub fn regularized_gamma_p(a: f64, x: f64) -> Result<f64> {
    check_args(a, x)?;
    if x <= 0.0 {
        return Ok(0.0);
    }
    if x == f64::INFINITY {
        return Ok(1.0);
    }
    Ok(if x < a + 1.0 {
        series_p(a, x)
    } else {
        1.0 - continued_fraction_q(a, x)
    })
}

/// Upper regularized incomplete gamma `Q(a, x) = 1 - P(a, x)`.
pub fn regularized_gamma_q(a: f64, x: f64) -> Result<f64> {
    check_args(a, x)?;
    if x <= 0.0 {
        return Ok(1.0);
    }
    if x == f64::INFINITY {
        return Ok(0.0);
    }
    Ok(if x < a + 1.0 {
        1.0 - series_p(a, x)
    } else {
        continued_fraction_q(a, x)
    })
}

fn series_p(a: f64, x: f64) -> f64 {
    let mut term = 1.0 / a;
    let mut sum = term;
    let mut ap = a;
    for _ in 0..MAX_ITER {
        ap += 1.0;
        term *= x / ap;
        sum += term;
        if term.abs() < sum.abs() * EPS {
            break;
        }
    }
    (sum * gamma_prefix(a, x)).min(1.0)
}

// Modified Lentz evaluation of the Legendre continued fraction.
fn continued_fraction_q(a: f64, x: f64) -> f64 {
    let mut b = x + 1.0 - a;
    let mut c = 1.0 / TINY;
    let mut d = 1.0 / b;
    let mut h = d;
    for i in 1..MAX_ITER {
        let an = -(i as f64) * (i as f64 - a);
        b += 2.0;
        d = an * d + b;
        if d.abs() < TINY {
            d = TINY;
        }
        c = b + an / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        let delta = d * c;
        h *= delta;
        if (delta - 1.0).abs() < EPS {
            break;
        }
    }
    (h * gamma_prefix(a, x)).clamp(0.0, 1.0)
}
