//! Centering `mu_n` and scale `sigma_n^2` for the normal approximation
//! `(-2 log Lambda + 2 mu_n) / (2 n sigma_n) -> N(0, 1)`.

use super::compensated_sum;
use crate::error::{domain, Result};
use crate::problem::{TestKind, TestProblem};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormalParams {
    pub mu_n: f64,
    pub sigma_n_sq: f64,
}

impl NormalParams {
    pub fn sigma_n(&self) -> f64 {
        self.sigma_n_sq.sqrt()
    }
}

/// `L_{x,p} = ln(1 - p/x)` for `x > p`.
pub fn log_ratio(x: f64, p: f64) -> Result<f64> {
    if x > p {
        Ok((-p / x).ln_1p())
    } else {
        Err(domain(format!(
            "L_{{x,p}} needs x > p, got x = {x}, p = {p}"
        )))
    }
}

pub fn normal_params(t: &TestProblem) -> Result<NormalParams> {
    let n = t.n() as f64;
    let p = t.p() as f64;
    let k = t.k() as f64;
    let l = log_ratio;
    let (mu_n, sigma_n_sq) = match t.kind() {
        TestKind::Mean => {
            let (lnp, ln1p) = (l(n, p)?, l(n - 1.0, p)?);
            (
                n / 2.0 * ((n - p - 1.5) * (lnp - ln1p) + lnp + p * l(n, 1.0)?),
                0.5 * (lnp - ln1p),
            )
        }
        TestKind::Sphericity => {
            let ln1p = l(n - 1.0, p)?;
            (
                -(n - 1.0) / 2.0 * ((n - p - 1.5) * ln1p + p),
                -0.5 * (p / (n - 1.0) + ln1p) * ((n - 1.0) / n).powi(2),
            )
        }
        TestKind::Joint => {
            let ln1p = l(n - 1.0, p)?;
            (
                -n / 2.0 * ((n - p - 1.5) * ln1p + p) - p / 2.0,
                -0.5 * (p / (n - 1.0) + ln1p),
            )
        }
        TestKind::MeanEquality => {
            let (a, b) = (l(n - 1.0, p)?, l(n - k, p)?);
            (
                n / 2.0 * ((n - p - k - 0.5) * (a - b) + (k - 1.0) * a + p * l(n - 1.0, k - 1.0)?),
                0.5 * (a - b),
            )
        }
        TestKind::CovarianceEquality => {
            let sizes = t.group_sizes().unwrap();
            let pooled = l(n - k, p)?;
            let mut mu_parts = Vec::with_capacity(sizes.len());
            let mut var_parts = vec![pooled];
            for &ni in sizes {
                let m = ni as f64 - 1.0;
                let li = l(m, p)?;
                mu_parts.push(m * ((n - p - k - 0.5) * pooled - (m - p - 0.5) * li));
                var_parts.push(-(m / (n - k)).powi(2) * li);
            }
            (
                0.5 * compensated_sum(mu_parts),
                (n - k).powi(2) / (2.0 * n * n) * compensated_sum(var_parts),
            )
        }
        TestKind::JointEquality => {
            let sizes = t.group_sizes().unwrap();
            let total = l(n, p)?;
            let mut mu_parts = vec![-k * p, n * (n - p - 1.5) * total];
            let mut var_parts = vec![total];
            for &ni in sizes {
                let ni = ni as f64;
                let li = l(ni - 1.0, p)?;
                mu_parts.push(-(p / (2.0 * ni) + ni * (ni - p - 1.5) * li));
                var_parts.push(-(ni / n).powi(2) * li);
            }
            (
                0.5 * compensated_sum(mu_parts),
                0.5 * compensated_sum(var_parts),
            )
        }
        TestKind::Independence => {
            let dims = t.block_dims().unwrap();
            let whole = l(n - 1.0, p)?;
            let mut mu_parts = vec![-(n - p - 1.5) * whole];
            let mut var_parts = vec![-whole];
            for &pj in dims {
                let pj = pj as f64;
                let lj = l(n - 1.0, pj)?;
                mu_parts.push((n - pj - 1.5) * lj);
                var_parts.push(lj);
            }
            (
                n / 2.0 * compensated_sum(mu_parts),
                0.5 * compensated_sum(var_parts),
            )
        }
    };
    Ok(NormalParams { mu_n, sigma_n_sq })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn log_ratio_domain() {
        assert!((log_ratio(4.0, 1.0).unwrap() - 0.75f64.ln()).abs() < 1e-16);
        assert!(log_ratio(3.0, 3.0).is_err());
    }

    #[test]
    fn sphericity_scale_form() {
        for (n, p) in [(30, 2), (100, 40), (500, 200)] {
            let t = TestProblem::one_sample(TestKind::Sphericity, n, p).unwrap();
            let (n, p) = (n as f64, p as f64);
            let expect =
                -0.5 * (p / (n - 1.0) + (1.0 - p / (n - 1.0)).ln()) * ((n - 1.0) / n).powi(2);
            let got = normal_params(&t).unwrap().sigma_n_sq;
            assert!(got > 0.0);
            assert!((got - expect).abs() <= 1e-12 * expect);
        }
    }
}
