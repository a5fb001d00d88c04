use super::{bartlett_rho, degrees_of_freedom, AuxSums, Correction};
use crate::error::Result;
use crate::problem::{TestKind, TestProblem};

/// Leading bias coefficient of the chi-squared approximation: `theta_1` for
/// the plain statistic, `theta_2` for the Bartlett-corrected one.
pub fn theta_bias(t: &TestProblem, which: Correction) -> Result<f64> {
    let n = t.n() as f64;
    let p = t.p() as f64;
    let k = t.k() as f64;
    let sqrt_f = (degrees_of_freedom(t) as f64).sqrt();
    let rho = bartlett_rho(t)?;
    let value = match (t.kind(), which) {
        (TestKind::Mean, Correction::Plain) => (p * p + 2.0 * p) / (4.0 * n),
        (TestKind::Mean, Correction::Bartlett) => p * (p * p - 4.0) / (24.0 * (rho * n).powi(2)),
        (TestKind::Sphericity, Correction::Plain) => {
            (p * (2.0 * p * p + 3.0 * p - 1.0) - 4.0 / p) / (24.0 * (n - 1.0))
        }
        (TestKind::Sphericity, Correction::Bartlett) => {
            (p - 2.0) * (p - 1.0) * (p + 2.0) * (2.0 * p.powi(3) + 6.0 * p * p + 3.0 * p + 2.0)
                / (144.0 * p * p * rho * rho * (n - 1.0).powi(2))
        }
        (TestKind::Joint, Correction::Plain) => p * (2.0 * p * p + 9.0 * p + 11.0) / (24.0 * n),
        (TestKind::Joint, Correction::Bartlett) => {
            p * (2.0 * p.powi(4) + 18.0 * p.powi(3) + 49.0 * p * p + 36.0 * p - 13.0)
                / (144.0 * (p + 3.0) * (rho * n).powi(2))
        }
        (TestKind::MeanEquality, Correction::Plain) => p * (k - 1.0) * (p + 2.0 + k) / (4.0 * n),
        (TestKind::MeanEquality, Correction::Bartlett) => {
            (k - 1.0) * p * (p * p + k * k - 2.0 * k - 4.0) / (24.0 * (n * rho).powi(2))
        }
        (TestKind::CovarianceEquality, c) => {
            let d = AuxSums::sample_minus_one(t.group_sizes().unwrap());
            match c {
                Correction::Plain => d.get(1) * p * (2.0 * p * p + 3.0 * p - 1.0) / 24.0,
                Correction::Bartlett => {
                    p * (p + 1.0) / (24.0 * rho * rho)
                        * ((p - 1.0) * (p + 2.0) * d.get(2) - 6.0 * (k - 1.0) * (1.0 - rho).powi(2))
                }
            }
        }
        (TestKind::JointEquality, c) => {
            let d = AuxSums::sample(t.group_sizes().unwrap());
            match c {
                Correction::Plain => d.get(1) * p * (2.0 * p * p + 9.0 * p + 11.0) / 24.0,
                Correction::Bartlett => {
                    p * (p + 3.0) / (24.0 * rho * rho)
                        * ((p + 1.0) * (p + 2.0) * d.get(2) - 6.0 * (k - 1.0) * (1.0 - rho).powi(2))
                }
            }
        }
        (TestKind::Independence, c) => {
            let d = AuxSums::dims(t.block_dims().unwrap());
            match c {
                Correction::Plain => (2.0 * d.get(3) + 9.0 * d.get(2)) / (24.0 * n),
                Correction::Bartlett => {
                    (d.get(4) / 24.0 - 5.0 * d.get(2) / 48.0 - d.get(3).powi(2) / (36.0 * d.get(2)))
                        / (rho * n).powi(2)
                }
            }
        }
    };
    Ok(value / sqrt_f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::asymptotics::varsigma;

    #[test]
    fn mean_example() {
        let t = TestProblem::one_sample(TestKind::Mean, 100, 5).unwrap();
        let got = theta_bias(&t, Correction::Plain).unwrap();
        assert!((got - 35.0 / (400.0 * 5f64.sqrt())).abs() < 1e-16);
    }

    #[test]
    fn joint_second_order_matches_engine() {
        for n in [20, 100, 500] {
            let t = TestProblem::one_sample(TestKind::Joint, n, 2).unwrap();
            let sqrt_f = (degrees_of_freedom(&t) as f64).sqrt();
            let engine = 2.0 * varsigma(&t, 2, bartlett_rho(&t).unwrap()).unwrap() / sqrt_f;
            let closed = theta_bias(&t, Correction::Bartlett).unwrap();
            assert!((closed - engine).abs() <= 1e-10 * closed.abs());
        }
    }

    #[test]
    fn decreases_in_n() {
        for kind in [TestKind::Mean, TestKind::Sphericity, TestKind::Joint] {
            let mut last = f64::INFINITY;
            for n in [20, 40, 80, 160, 320, 640] {
                let t = TestProblem::one_sample(kind, n, 6).unwrap();
                let v = theta_bias(&t, Correction::Plain).unwrap();
                assert!(v > 0.0 && v < last, "{t}");
                last = v;
            }
        }
    }
}
