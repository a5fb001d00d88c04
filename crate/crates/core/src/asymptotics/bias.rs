use std::f64::consts::PI;

use super::{bartlett_rho, degrees_of_freedom, normal_params, theta_bias, Correction};
use crate::error::Result;
use crate::problem::TestProblem;
use crate::special::{chisq_upper_quantile, normal_sf, normal_upper_quantile, Probability};

/// Switch-over level of the combined estimator `M_c`.
pub const DEFAULT_C: f64 = 0.002;

/// Source of a bias estimate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BiasForm {
    /// From the `theta` expansion (`varpi_1`, `varpi_2`).
    Theta,
    /// From the normal-regime centering (`varpi_3`, `varpi_4`).
    Normal,
}

/// `varpi_1..4`: estimated excess of the rejection rate over `alpha`.
///
/// | correction | Theta     | Normal    |
/// |------------|-----------|-----------|
/// | Plain      | `varpi_1` | `varpi_3` |
/// | Bartlett   | `varpi_2` | `varpi_4` |
pub fn varpi(
    t: &TestProblem,
    correction: Correction,
    form: BiasForm,
    alpha: Probability,
) -> Result<f64> {
    let a = Probability::level(alpha.get())?.get();
    match form {
        BiasForm::Theta => {
            let z = normal_upper_quantile(a)?;
            Ok(theta_bias(t, correction)? * (-z * z / 2.0).exp() / PI.sqrt())
        }
        BiasForm::Normal => {
            let crit = chisq_upper_quantile(degrees_of_freedom(t), a)?;
            let np = normal_params(t)?;
            let scale = match correction {
                Correction::Plain => 1.0,
                Correction::Bartlett => bartlett_rho(t)?,
            };
            let n = t.n() as f64;
            let z = (crit + 2.0 * scale * np.mu_n) / (2.0 * scale * n * np.sigma_n());
            Ok(normal_sf(z) - a)
        }
    }
}

/// `M_c(a, b) = a` when `a < c`, otherwise `max(a, b)`.
pub fn combined_bias(a: f64, b: f64, c: f64) -> f64 {
    if a < c {
        a
    } else {
        a.max(b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problem::TestKind;

    #[test]
    fn combined_branches() {
        assert_eq!(combined_bias(0.001, 0.5, 0.002), 0.001);
        assert_eq!(combined_bias(0.01, 0.5, 0.002), 0.5);
        assert_eq!(combined_bias(0.01, 0.005, 0.002), 0.01);
        assert_eq!(combined_bias(0.002, 0.003, 0.002), 0.003);
    }

    #[test]
    fn theta_varpi_scales_theta() {
        let t = TestProblem::one_sample(TestKind::Mean, 200, 4).unwrap();
        let a = Probability::level(0.05).unwrap();
        let theta = theta_bias(&t, Correction::Plain).unwrap();
        let z: f64 = 1.644_853_626_951_472_2;
        let expect = theta * (-z * z / 2.0).exp() / PI.sqrt();
        let got = varpi(&t, Correction::Plain, BiasForm::Theta, a).unwrap();
        assert!((got - expect).abs() < 1e-15);
    }

    #[test]
    fn joint_first_varpi_is_small_below_boundary() {
        // p = floor(500^0.4) = 12
        let t = TestProblem::one_sample(TestKind::Joint, 500, 12).unwrap();
        let a = Probability::level(0.05).unwrap();
        let v = varpi(&t, Correction::Plain, BiasForm::Theta, a).unwrap();
        assert!(v > 0.0 && v < 0.05, "{v}");
    }

    #[test]
    fn normal_varpi_grows_with_dimension() {
        let a = Probability::level(0.05).unwrap();
        let mut last = f64::NEG_INFINITY;
        for p in [20, 60, 120, 200] {
            let t = TestProblem::one_sample(TestKind::Joint, 500, p).unwrap();
            let v = varpi(&t, Correction::Plain, BiasForm::Normal, a).unwrap();
            assert!(v > last, "p = {p}: {v}");
            last = v;
        }
        assert!(last > 0.5);
    }
}
