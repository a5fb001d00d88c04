//! Gamma-ratio form of the characteristic function,
//!
//! `phi(t) = const * prod_k Gamma(eta xi1_k (1 - 2it) + tau1_k + ups1_k)
//!                   / prod_j Gamma(eta xi2_j (1 - 2it) + tau2_j + ups2_j)`,
//!
//! with `tau = (1 - eta) xi`, and the expansion coefficients `varsigma_l`
//! obtained from it through Bernoulli polynomials.

use super::compensated_sum;
use crate::error::{domain, Error, Result};
use crate::problem::{TestKind, TestProblem};
use crate::special::bernoulli_poly;

/// Highest `l` accepted by [`varsigma`].
pub const MAX_VARSIGMA_ORDER: usize = 5;

#[derive(Debug, Clone, PartialEq)]
pub struct BoxParams {
    pub eta: f64,
    pub xi1: Vec<f64>,
    pub ups1: Vec<f64>,
    pub xi2: Vec<f64>,
    pub ups2: Vec<f64>,
}

impl BoxParams {
    pub fn k1(&self) -> usize {
        self.xi1.len()
    }

    pub fn k2(&self) -> usize {
        self.xi2.len()
    }

    pub fn tau1(&self) -> impl Iterator<Item = f64> + '_ {
        self.xi1.iter().map(move |x| (1.0 - self.eta) * x)
    }

    pub fn tau2(&self) -> impl Iterator<Item = f64> + '_ {
        self.xi2.iter().map(move |x| (1.0 - self.eta) * x)
    }

    /// `f = -2 { sum ups1 - sum ups2 - (K1 - K2)/2 }`.
    pub fn degrees_of_freedom(&self) -> f64 {
        let s1 = compensated_sum(self.ups1.iter().copied());
        let s2 = compensated_sum(self.ups2.iter().copied());
        -2.0 * (s1 - s2 - (self.k1() as f64 - self.k2() as f64) / 2.0)
    }

    /// `rho = 1 - f^{-1} { sum (ups1^2 - ups1 + 1/6)/xi1 - sum (ups2^2 - ups2 + 1/6)/xi2 }`.
    pub fn bartlett_rho(&self) -> f64 {
        let term = |x: &f64, u: &f64| (u * u - u + 1.0 / 6.0) / x;
        let s = compensated_sum(
            self.xi1
                .iter()
                .zip(&self.ups1)
                .map(|(x, u)| term(x, u))
                .chain(self.xi2.iter().zip(&self.ups2).map(|(x, u)| -term(x, u))),
        );
        1.0 - s / self.degrees_of_freedom()
    }

    /// `varsigma_l = (-1)^{l+1}/(l(l+1)) { sum B_{l+1}(tau1 + ups1)/(eta xi1)^l
    ///                                     - sum B_{l+1}(tau2 + ups2)/(eta xi2)^l }`.
    pub fn varsigma(&self, l: usize) -> Result<f64> {
        check_order(l)?;
        let term = |x: f64, u: f64| -> Result<f64> {
            let tau = (1.0 - self.eta) * x;
            Ok(bernoulli_poly(l + 1, tau + u)? / (self.eta * x).powi(l as i32))
        };
        let mut parts = Vec::with_capacity(self.k1() + self.k2());
        for (&x, &u) in self.xi1.iter().zip(&self.ups1) {
            parts.push(term(x, u)?);
        }
        for (&x, &u) in self.xi2.iter().zip(&self.ups2) {
            parts.push(-term(x, u)?);
        }
        Ok(sign_factor(l) * compensated_sum(parts))
    }
}

fn sign_factor(l: usize) -> f64 {
    let s = if l % 2 == 1 { 1.0 } else { -1.0 };
    s / (l * (l + 1)) as f64
}

fn check_order(l: usize) -> Result<()> {
    if (1..=MAX_VARSIGMA_ORDER).contains(&l) {
        Ok(())
    } else {
        Err(domain(format!(
            "expansion order l must be in 1..={MAX_VARSIGMA_ORDER}, got {l}"
        )))
    }
}

/// The `(K1, K2, xi, ups)` lists of a problem. Test III has a non-gamma
/// prefactor and is not representable.
pub fn box_params(t: &TestProblem, eta: f64) -> Result<BoxParams> {
    if !(eta > 0.0 && eta <= 1.0) {
        return Err(domain(format!("eta must be in (0, 1], got {eta}")));
    }
    let n = t.n() as f64;
    let p = t.p();
    let half = |v: f64| v / 2.0;
    let (xi1, ups1, xi2, ups2): (Vec<f64>, Vec<f64>, Vec<f64>, Vec<f64>) = match t.kind() {
        TestKind::Mean => (
            vec![n / 2.0],
            vec![-(p as f64) / 2.0],
            vec![n / 2.0],
            vec![0.0],
        ),
        TestKind::Sphericity => (
            vec![(n - 1.0) / 2.0; p],
            (0..p).map(|k| -half(k as f64)).collect(),
            vec![p as f64 * (n - 1.0) / 2.0],
            vec![0.0],
        ),
        TestKind::Joint => {
            return Err(Error::Unsupported(
                "test III has no gamma-ratio form; its varsigma uses a dedicated sum".into(),
            ))
        }
        TestKind::MeanEquality => {
            let k = t.k();
            (
                vec![n / 2.0; k - 1],
                (1..k).map(|j| -half((j + p) as f64)).collect(),
                vec![n / 2.0; k - 1],
                (1..k).map(|j| -half(j as f64)).collect(),
            )
        }
        TestKind::CovarianceEquality => {
            let sizes = t.group_sizes().unwrap();
            let k = sizes.len() as f64;
            let mut xi1 = Vec::with_capacity(sizes.len() * p);
            let mut ups1 = Vec::with_capacity(sizes.len() * p);
            for &ni in sizes {
                for j in 1..=p {
                    xi1.push((ni as f64 - 1.0) / 2.0);
                    ups1.push(-half(j as f64 - 1.0));
                }
            }
            (
                xi1,
                ups1,
                vec![(n - k) / 2.0; p],
                (1..=p).map(|j| -half(j as f64 - 1.0)).collect(),
            )
        }
        TestKind::JointEquality => {
            let sizes = t.group_sizes().unwrap();
            let mut xi1 = Vec::with_capacity(sizes.len() * p);
            let mut ups1 = Vec::with_capacity(sizes.len() * p);
            for &ni in sizes {
                for j in 1..=p {
                    xi1.push(ni as f64 / 2.0);
                    ups1.push(-half(j as f64));
                }
            }
            (
                xi1,
                ups1,
                vec![n / 2.0; p],
                (1..=p).map(|j| -half(j as f64)).collect(),
            )
        }
        TestKind::Independence => {
            let dims = t.block_dims().unwrap();
            let mut ups2 = Vec::with_capacity(p);
            for &pr in dims {
                ups2.extend((1..=pr).map(|j| -half(j as f64)));
            }
            (
                vec![n / 2.0; p],
                (1..=p).map(|j| -half(j as f64)).collect(),
                vec![n / 2.0; p],
                ups2,
            )
        }
    };
    Ok(BoxParams {
        eta,
        xi1,
        ups1,
        xi2,
        ups2,
    })
}

/// `varsigma_l` at `eta`; test III goes through its own Bernoulli sum.
pub fn varsigma(t: &TestProblem, l: usize, eta: f64) -> Result<f64> {
    check_order(l)?;
    if t.kind() != TestKind::Joint {
        return box_params(t, eta)?.varsigma(l);
    }
    if !(eta > 0.0 && eta <= 1.0) {
        return Err(domain(format!("eta must be in (0, 1], got {eta}")));
    }
    // sum_j { B_{l+1}(c - j/2) - c^{l+1} } (eta n / 2)^{-l},  c = (1 - eta) n / 2
    let n = t.n() as f64;
    let c = (1.0 - eta) * n / 2.0;
    let c_pow = c.powi(l as i32 + 1);
    let mut parts = Vec::with_capacity(2 * t.p());
    for j in 1..=t.p() {
        parts.push(bernoulli_poly(l + 1, c - j as f64 / 2.0)?);
        parts.push(-c_pow);
    }
    Ok(sign_factor(l) * compensated_sum(parts) / (eta * n / 2.0).powi(l as i32))
}
