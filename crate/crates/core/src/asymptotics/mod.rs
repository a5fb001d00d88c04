//! Closed-form asymptotics: degrees of freedom, Bartlett factors, the generic
//! gamma-ratio expansion engine, bias coefficients, normal-regime centering,
//! phase-transition boundaries and the resulting recommendation.

mod bias;
mod boundary;
mod boxform;
mod normal;
mod report;
mod theta;

pub use bias::{combined_bias, varpi, BiasForm, DEFAULT_C};
pub use boundary::{phase_boundary, Exponent, PhaseBoundary, DEFAULT_CUTOFF};
pub use boxform::{box_params, varsigma, BoxParams, MAX_VARSIGMA_ORDER};
pub use normal::{log_ratio, normal_params, NormalParams};
pub use report::{recommend, BiasReport, DiagnosticSettings, Recommendation, DEFAULT_THRESHOLD};
pub use theta::theta_bias;

use std::fmt;
use std::str::FromStr;

use crate::error::{config, Error, Result};
use crate::problem::{TestKind, TestProblem};

/// Which approximation: plain `chi2_f`, or `chi2_f` applied to `-2 rho log Lambda`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Correction {
    Plain,
    Bartlett,
}

impl Correction {
    pub const BOTH: [Correction; 2] = [Correction::Plain, Correction::Bartlett];

    pub fn as_str(self) -> &'static str {
        match self {
            Correction::Plain => "chisq",
            Correction::Bartlett => "bartlett",
        }
    }
}

impl fmt::Display for Correction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Correction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "chisq" | "plain" => Ok(Correction::Plain),
            "bartlett" => Ok(Correction::Bartlett),
            _ => Err(config(format!(
                "unknown approximation '{s}' (chisq or bartlett)"
            ))),
        }
    }
}

/// Which family of auxiliary sums a problem uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AuxKind {
    /// `D_{n,r} = sum n_i^{-r} - n^{-r}`.
    Sample,
    /// `D~_{n,r} = sum (n_i - 1)^{-r} - (n - k)^{-r}`.
    SampleMinusOne,
    /// `D_{p,r} = p^r - sum p_j^r`.
    Dims,
}

/// `D_r` for `r = 1..=4`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AuxSums {
    pub kind: AuxKind,
    values: [f64; 4],
}

impl AuxSums {
    pub fn sample(sizes: &[usize]) -> Self {
        let n: usize = sizes.iter().sum();
        Self::inverse_power(AuxKind::Sample, sizes.iter().map(|&v| v as f64), n as f64)
    }

    pub fn sample_minus_one(sizes: &[usize]) -> Self {
        let n: usize = sizes.iter().sum();
        let total = (n - sizes.len()) as f64;
        Self::inverse_power(
            AuxKind::SampleMinusOne,
            sizes.iter().map(|&v| v as f64 - 1.0),
            total,
        )
    }

    fn inverse_power(kind: AuxKind, parts: impl Iterator<Item = f64> + Clone, total: f64) -> Self {
        let mut values = [0.0; 4];
        for (i, v) in values.iter_mut().enumerate() {
            let r = i as i32 + 1;
            *v = compensated_sum(parts.clone().map(|x| x.powi(-r))) - total.powi(-r);
        }
        Self { kind, values }
    }

    /// Computed in integers, so exact while `p^4` fits in `u128`.
    pub fn dims(dims: &[usize]) -> Self {
        let p: u128 = dims.iter().map(|&d| d as u128).sum();
        let mut values = [0.0; 4];
        for (i, v) in values.iter_mut().enumerate() {
            let r = i as u32 + 1;
            let parts: u128 = dims.iter().map(|&d| (d as u128).pow(r)).sum();
            *v = (p.pow(r) - parts) as f64;
        }
        Self {
            kind: AuxKind::Dims,
            values,
        }
    }

    /// The sums relevant to a problem: `D~` for V, `D` for VI, `D_p` for VII.
    pub fn for_problem(t: &TestProblem) -> Option<Self> {
        match t.kind() {
            TestKind::CovarianceEquality => t.group_sizes().map(Self::sample_minus_one),
            TestKind::JointEquality => t.group_sizes().map(Self::sample),
            TestKind::Independence => t.block_dims().map(Self::dims),
            _ => None,
        }
    }

    /// `D_r`, for `r` in `1..=4`.
    pub fn get(&self, r: usize) -> f64 {
        assert!(
            (1..=4).contains(&r),
            "auxiliary sums are kept for r = 1..=4"
        );
        self.values[r - 1]
    }
}

/// Degrees of freedom of the limiting chi-squared distribution.
pub fn degrees_of_freedom(t: &TestProblem) -> u64 {
    let p = t.p() as u64;
    let k = t.k() as u64;
    match t.kind() {
        TestKind::Mean => p,
        TestKind::Sphericity => (p - 1) * (p + 2) / 2,
        TestKind::Joint => p * (p + 3) / 2,
        TestKind::MeanEquality => (k - 1) * p,
        TestKind::CovarianceEquality => p * (p + 1) * (k - 1) / 2,
        TestKind::JointEquality => p * (k - 1) * (p + 3) / 2,
        TestKind::Independence => {
            let dims = t.block_dims().expect("test VII has block dims");
            (p * p - dims.iter().map(|&d| (d * d) as u64).sum::<u64>()) / 2
        }
    }
}

/// Bartlett correction factor `rho`; errors when the formula leaves `(0, 1]`.
pub fn bartlett_rho(t: &TestProblem) -> Result<f64> {
    let n = t.n() as f64;
    let p = t.p() as f64;
    let k = t.k() as f64;
    let shrink = match t.kind() {
        TestKind::Mean => (1.0 + p / 2.0) / n,
        TestKind::Sphericity => (2.0 * p * p + p + 2.0) / (6.0 * (n - 1.0) * p),
        TestKind::Joint => (2.0 * p * p + 9.0 * p + 11.0) / (6.0 * n * (p + 3.0)),
        TestKind::MeanEquality => (2.0 + k + p) / (2.0 * n),
        TestKind::CovarianceEquality => {
            let d1 = AuxSums::sample_minus_one(t.group_sizes().unwrap()).get(1);
            (2.0 * p * p + 3.0 * p - 1.0) * d1 / (6.0 * (p + 1.0) * (k - 1.0))
        }
        TestKind::JointEquality => {
            let d1 = AuxSums::sample(t.group_sizes().unwrap()).get(1);
            (2.0 * p * p + 9.0 * p + 11.0) * d1 / (6.0 * (k - 1.0) * (p + 3.0))
        }
        TestKind::Independence => {
            let d = AuxSums::dims(t.block_dims().unwrap());
            (2.0 * d.get(3) + 9.0 * d.get(2)) / (6.0 * n * d.get(2))
        }
    };
    let rho = 1.0 - shrink;
    if rho > 0.0 && rho <= 1.0 {
        Ok(rho)
    } else {
        Err(Error::OutOfRegime(format!(
            "Bartlett factor rho = {rho} for {t} is not in (0, 1]"
        )))
    }
}

/// Neumaier-compensated summation.
pub(crate) fn compensated_sum(values: impl IntoIterator<Item = f64>) -> f64 {
    let mut sum = 0.0_f64;
    let mut comp = 0.0_f64;
    for v in values {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            comp += (sum - t) + v;
        } else {
            comp += (v - t) + sum;
        }
        sum = t;
    }
    sum + comp
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dof_examples() {
        let t = TestProblem::one_sample(TestKind::Joint, 10, 1).unwrap();
        assert_eq!(degrees_of_freedom(&t), 2);
        let t = TestProblem::independence(10, vec![1, 1]).unwrap();
        assert_eq!(degrees_of_freedom(&t), 1);
        let t =
            TestProblem::multi_sample(TestKind::CovarianceEquality, vec![10, 10, 10], 4).unwrap();
        assert_eq!(degrees_of_freedom(&t), 20);
    }

    #[test]
    fn rho_examples() {
        let t = TestProblem::one_sample(TestKind::Mean, 100, 4).unwrap();
        assert!((bartlett_rho(&t).unwrap() - 0.97).abs() < 1e-15);
        let t = TestProblem::one_sample(TestKind::Joint, 100, 4).unwrap();
        let expect = 1.0 - 79.0 / 4200.0;
        assert!((bartlett_rho(&t).unwrap() - expect).abs() < 1e-15);
        // p1 = p2 = 1: D2 = 2, D3 = 6, so rho = 1 - 30 / (12 n).
        let t = TestProblem::independence(50, vec![1, 1]).unwrap();
        assert!((bartlett_rho(&t).unwrap() - (1.0 - 30.0 / 600.0)).abs() < 1e-15);
    }

    #[test]
    fn aux_sums_hand_values() {
        let d = AuxSums::dims(&[2, 3]);
        assert_eq!(
            [d.get(1), d.get(2), d.get(3), d.get(4)],
            [0.0, 12.0, 90.0, 528.0]
        );
        let s = AuxSums::sample(&[2, 4]);
        assert!((s.get(1) - (0.5 + 0.25 - 1.0 / 6.0)).abs() < 1e-15);
        let s = AuxSums::sample_minus_one(&[3, 5]);
        assert!((s.get(2) - (0.25 + 1.0 / 16.0 - 1.0 / 36.0)).abs() < 1e-15);
    }

    #[test]
    fn compensated_sum_recovers_small_terms() {
        let v = [1e16, 1.0, -1e16, 1.0];
        assert_eq!(compensated_sum(v), 2.0);
    }

    #[test]
    fn correction_round_trips() {
        for c in Correction::BOTH {
            assert_eq!(c.as_str().parse::<Correction>().unwrap(), c);
        }
    }
}
