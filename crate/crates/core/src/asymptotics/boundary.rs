use num_rational::Ratio;

use super::Correction;
use crate::problem::{TestKind, TestProblem};

/// Default finite-sample cutoff on the boundary ratio. Heuristic:
/// the asymptotic condition only asks that the ratio tend to zero.
pub const DEFAULT_CUTOFF: f64 = 1.0;

pub type Exponent = Ratio<u32>;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseBoundary {
    /// The `d` with `p / n^d -> 0` as the condition for the approximation.
    pub exponent: Exponent,
    /// `p / n^d`, or the composite ratio for test IV and two-block test VII.
    pub ratio: f64,
    pub composite: bool,
    /// `ratio < cutoff`.
    pub verdict: bool,
}

fn exponent(kind: TestKind, correction: Correction) -> Exponent {
    let mean_only = matches!(kind, TestKind::Mean | TestKind::MeanEquality);
    match (mean_only, correction) {
        (true, Correction::Plain) => Ratio::new(2, 3),
        (true, Correction::Bartlett) => Ratio::new(4, 5),
        (false, Correction::Plain) => Ratio::new(1, 2),
        (false, Correction::Bartlett) => Ratio::new(2, 3),
    }
}

/// Growth-rate condition under which the chosen approximation is accurate.
///
/// Test IV always uses `sqrt(pk)(p+k)/n` (plain) or `sqrt(pk)(p^2+k^2)/n^2`
/// (Bartlett), and test VII with two blocks the same forms in `p_1, p_2`;
/// both reduce to monotone transforms of `p/n^d` at fixed `k` or balanced
/// blocks. Everything else reports `p/n^d`.
pub fn phase_boundary(t: &TestProblem, correction: Correction, cutoff: f64) -> PhaseBoundary {
    let d = exponent(t.kind(), correction);
    let n = t.n() as f64;
    let pair = match t.kind() {
        TestKind::MeanEquality => Some((t.p() as f64, t.k() as f64)),
        TestKind::Independence => match t.block_dims() {
            Some(&[a, b]) => Some((a as f64, b as f64)),
            _ => None,
        },
        _ => None,
    };
    let (ratio, composite) = match pair {
        Some((a, b)) => {
            let r = match correction {
                Correction::Plain => (a * b).sqrt() * (a + b) / n,
                Correction::Bartlett => (a * b).sqrt() * (a * a + b * b) / (n * n),
            };
            (r, true)
        }
        None => {
            let power = *d.numer() as f64 / *d.denom() as f64;
            (t.p() as f64 / n.powf(power), false)
        }
    };
    PhaseBoundary {
        exponent: d,
        ratio,
        composite,
        verdict: ratio < cutoff,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_exponents() {
        let t = TestProblem::one_sample(TestKind::Mean, 100, 3).unwrap();
        assert_eq!(
            phase_boundary(&t, Correction::Plain, 1.0).exponent,
            Ratio::new(2, 3)
        );
        let t = TestProblem::one_sample(TestKind::Joint, 100, 3).unwrap();
        assert_eq!(
            phase_boundary(&t, Correction::Bartlett, 1.0).exponent,
            Ratio::new(2, 3)
        );
        assert_eq!(
            phase_boundary(&t, Correction::Plain, 1.0)
                .exponent
                .to_string(),
            "1/2"
        );
    }

    #[test]
    fn plain_ratio() {
        let t = TestProblem::one_sample(TestKind::Sphericity, 400, 10).unwrap();
        let b = phase_boundary(&t, Correction::Plain, 1.0);
        assert!((b.ratio - 0.5).abs() < 1e-15);
        assert!(b.verdict && !b.composite);
        let b = phase_boundary(&t, Correction::Plain, 0.4);
        assert!(!b.verdict);
    }

    #[test]
    fn two_block_independence_is_composite() {
        // p1 = floor(1000^0.7) = 125, p2 = 1
        let t = TestProblem::independence(1000, vec![125, 1]).unwrap();
        let b = phase_boundary(&t, Correction::Plain, 1.0);
        assert!(b.composite);
        assert!((b.ratio - 125f64.sqrt() * 126.0 / 1000.0).abs() < 1e-14);
        let three = TestProblem::independence(1000, vec![5, 5, 5]).unwrap();
        assert!(!phase_boundary(&three, Correction::Plain, 1.0).composite);
    }

    #[test]
    fn mean_equality_composite() {
        let t = TestProblem::multi_sample(TestKind::MeanEquality, vec![50, 50, 50], 4).unwrap();
        let b = phase_boundary(&t, Correction::Bartlett, 1.0);
        let expect = 12f64.sqrt() * 25.0 / (150.0 * 150.0);
        assert!((b.ratio - expect).abs() < 1e-16);
    }
}
