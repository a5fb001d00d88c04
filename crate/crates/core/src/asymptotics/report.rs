use std::fmt;

use super::{
    bartlett_rho, combined_bias, degrees_of_freedom, normal_params, phase_boundary, theta_bias,
    varpi, AuxSums, BiasForm, Correction, NormalParams, PhaseBoundary, DEFAULT_C, DEFAULT_CUTOFF,
};
use crate::error::{domain, Result};
use crate::problem::TestProblem;
use crate::special::Probability;

/// Bias level below which an approximation is accepted.
pub const DEFAULT_THRESHOLD: f64 = 0.015;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Recommendation {
    ChisqOk,
    BartlettOk,
    Neither,
}

impl Recommendation {
    pub fn as_str(self) -> &'static str {
        match self {
            Recommendation::ChisqOk => "chisq-ok",
            Recommendation::BartlettOk => "bartlett-ok",
            Recommendation::Neither => "neither",
        }
    }

    pub fn describe(self) -> &'static str {
        match self {
            Recommendation::ChisqOk => "chi-squared approximation is adequate",
            Recommendation::BartlettOk => "use the Bartlett-corrected chi-squared approximation",
            Recommendation::Neither => "neither approximation is reliable; use alternative methods",
        }
    }
}

impl fmt::Display for Recommendation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiagnosticSettings {
    pub alpha: Probability,
    pub threshold: f64,
    pub c: f64,
    pub cutoff: f64,
}

impl Default for DiagnosticSettings {
    fn default() -> Self {
        Self {
            alpha: Probability::level(0.05).expect("0.05 is a level"),
            threshold: DEFAULT_THRESHOLD,
            c: DEFAULT_C,
            cutoff: DEFAULT_CUTOFF,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BiasReport {
    pub problem: TestProblem,
    pub settings: DiagnosticSettings,
    pub f: u64,
    pub rho: f64,
    pub theta1: f64,
    pub theta2: f64,
    pub normal: NormalParams,
    pub varpi1: f64,
    pub varpi2: f64,
    pub varpi3: f64,
    pub varpi4: f64,
    pub mc13: f64,
    pub mc24: f64,
    pub boundary_plain: PhaseBoundary,
    pub boundary_bartlett: PhaseBoundary,
    pub aux: Option<AuxSums>,
    pub recommendation: Recommendation,
}

/// Computes every bias quantity and picks an approximation: chi-squared if
/// `M_c(varpi_1, varpi_3) <= threshold`, else Bartlett if
/// `M_c(varpi_2, varpi_4) <= threshold`, else neither.
pub fn recommend(t: &TestProblem, settings: &DiagnosticSettings) -> Result<BiasReport> {
    if !(settings.threshold > 0.0) {
        return Err(domain(format!(
            "bias threshold must be positive, got {}",
            settings.threshold
        )));
    }
    if !(settings.c > 0.0) {
        return Err(domain(format!(
            "switch-over level c must be positive, got {}",
            settings.c
        )));
    }
    let alpha = settings.alpha;
    let varpi1 = varpi(t, Correction::Plain, BiasForm::Theta, alpha)?;
    let varpi2 = varpi(t, Correction::Bartlett, BiasForm::Theta, alpha)?;
    let varpi3 = varpi(t, Correction::Plain, BiasForm::Normal, alpha)?;
    let varpi4 = varpi(t, Correction::Bartlett, BiasForm::Normal, alpha)?;
    let mc13 = combined_bias(varpi1, varpi3, settings.c);
    let mc24 = combined_bias(varpi2, varpi4, settings.c);
    let recommendation = if mc13 <= settings.threshold {
        Recommendation::ChisqOk
    } else if mc24 <= settings.threshold {
        Recommendation::BartlettOk
    } else {
        Recommendation::Neither
    };
    Ok(BiasReport {
        problem: t.clone(),
        settings: *settings,
        f: degrees_of_freedom(t),
        rho: bartlett_rho(t)?,
        theta1: theta_bias(t, Correction::Plain)?,
        theta2: theta_bias(t, Correction::Bartlett)?,
        normal: normal_params(t)?,
        varpi1,
        varpi2,
        varpi3,
        varpi4,
        mc13,
        mc24,
        boundary_plain: phase_boundary(t, Correction::Plain, settings.cutoff),
        boundary_bartlett: phase_boundary(t, Correction::Bartlett, settings.cutoff),
        aux: AuxSums::for_problem(t),
        recommendation,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problem::TestKind;

    fn rec(kind: TestKind, n: usize, p: usize) -> BiasReport {
        let t = TestProblem::one_sample(kind, n, p).unwrap();
        recommend(&t, &DiagnosticSettings::default()).unwrap()
    }

    #[test]
    fn deep_regime_is_chisq_ok() {
        let r = rec(TestKind::Mean, 1000, 3);
        assert_eq!(r.recommendation, Recommendation::ChisqOk);
        assert!(r.boundary_plain.verdict);
    }

    #[test]
    fn far_outside_is_neither() {
        let r = rec(TestKind::Joint, 100, 60);
        assert_eq!(r.recommendation, Recommendation::Neither);
        assert!(!r.boundary_plain.verdict && !r.boundary_bartlett.verdict);
    }

    #[test]
    fn between_boundaries_is_bartlett_ok() {
        // p = floor(500^0.55) = 30
        let r = rec(TestKind::Joint, 500, 30);
        assert_eq!(r.recommendation, Recommendation::BartlettOk, "{r:?}");
    }

    #[test]
    fn mc_follows_definition() {
        for (n, p) in [(100, 2), (200, 8), (500, 30), (300, 100)] {
            let r = rec(TestKind::Sphericity, n, p);
            let c = r.settings.c;
            let expect = if r.varpi1 < c {
                r.varpi1
            } else {
                r.varpi1.max(r.varpi3)
            };
            assert_eq!(r.mc13, expect);
        }
    }

    #[test]
    fn rejects_bad_settings() {
        let t = TestProblem::one_sample(TestKind::Mean, 100, 3).unwrap();
        let s = DiagnosticSettings {
            threshold: 0.0,
            ..Default::default()
        };
        assert!(recommend(&t, &s).is_err());
    }
}
