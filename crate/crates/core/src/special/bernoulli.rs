//! Bernoulli numbers and polynomials from an exact rational table.
//!
//! The correction coefficients of the characteristic-function expansions are
//! small differences of sums of these polynomials, so floating-point
//! evaluation runs a compensated Horner scheme over double-double
//! coefficients. Exact rational evaluation is available for identities.

use std::sync::OnceLock;

use num_rational::Ratio;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rational = Ratio<i128>;

/// Highest tabulated degree.
pub const MAX_BERNOULLI_DEGREE: usize = 12;

struct Table {
    numbers: Vec<Rational>,
    /// `poly[l][j]` is the coefficient of `x^j` in `B_l(x)`.
    poly: Vec<Vec<Rational>>,
    /// Same coefficients split into `(hi, lo)` double-double pairs.
    split: Vec<Vec<(f64, f64)>>,
}

fn binomial(n: usize, k: usize) -> i128 {
    let k = k.min(n - k);
    (0..k).fold(1i128, |acc, i| acc * (n - i) as i128 / (i + 1) as i128)
}

fn table() -> &'static Table {
    static TABLE: OnceLock<Table> = OnceLock::new();
    TABLE.get_or_init(|| {
        // sum_{k=0}^{m} C(m+1, k) B_k = 0, with B_1 = -1/2.
        let mut numbers: Vec<Rational> = vec![Rational::one()];
        for m in 1..=MAX_BERNOULLI_DEGREE {
            let acc = (0..m).fold(Rational::zero(), |acc, k| {
                acc + numbers[k] * Rational::from_integer(binomial(m + 1, k))
            });
            numbers.push(-acc / Rational::from_integer((m + 1) as i128));
        }
        let poly: Vec<Vec<Rational>> = (0..=MAX_BERNOULLI_DEGREE)
            .map(|l| {
                let mut coef = vec![Rational::zero(); l + 1];
                for (t, b) in numbers.iter().enumerate().take(l + 1) {
                    coef[l - t] = *b * Rational::from_integer(binomial(l, t));
                }
                coef
            })
            .collect();
        let split = poly
            .iter()
            .map(|c| c.iter().map(split_rational).collect())
            .collect();
        Table {
            numbers,
            poly,
            split,
        }
    })
}

fn split_rational(r: &Rational) -> (f64, f64) {
    let num = *r.numer() as f64;
    let den = *r.denom() as f64;
    let hi = r.to_f64().expect("tabulated coefficients are finite");
    let (prod, err) = two_prod(hi, den);
    (hi, ((num - prod) - err) / den)
}

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

fn check_degree(l: usize) -> Result<()> {
    if l > MAX_BERNOULLI_DEGREE {
        Err(Error::UnsupportedDegree {
            degree: l,
            max: MAX_BERNOULLI_DEGREE,
        })
    } else {
        Ok(())
    }
}

/// The Bernoulli number `B_l = B_l(0)` (with `B_1 = -1/2`).
pub fn bernoulli_number(l: usize) -> Result<Rational> {
    check_degree(l)?;
    Ok(table().numbers[l])
}

/// Exact coefficients of `B_l(x)`, lowest power first.
pub fn bernoulli_poly_coefficients(l: usize) -> Result<&'static [Rational]> {
    check_degree(l)?;
    Ok(&table().poly[l])
}

/// `B_l(x)` in exact rational arithmetic.
pub fn bernoulli_poly_exact(l: usize, x: Rational) -> Result<Rational> {
    let coef = bernoulli_poly_coefficients(l)?;
    Ok(coef
        .iter()
        .rev()
        .fold(Rational::zero(), |acc, c| acc * x + c))
}

/// `B_l(x)` in floating point with compensated Horner evaluation.
pub fn bernoulli_poly(l: usize, x: f64) -> Result<f64> {
    check_degree(l)?;
    let coef = &table().split[l];
    let (mut s, mut c) = coef[l];
    for &(hi, lo) in coef[..l].iter().rev() {
        let (p, p_err) = two_prod(s, x);
        let (sum, s_err) = two_sum(p, hi);
        c = c * x + (p_err + s_err + lo);
        s = sum;
    }
    Ok(s + c)
}
