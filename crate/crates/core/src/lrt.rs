//! `-2 log Lambda` for the seven problems, assembled from log-determinants
//! and traces only.
//!
//! Tests I and III assume data already transformed to `mu0 = 0`,
//! `Sigma0 = I`.

use nalgebra::DMatrix;

use crate::asymptotics::{bartlett_rho, degrees_of_freedom, normal_params};
use crate::error::{config, Result};
use crate::problem::{TestKind, TestProblem};
use crate::special::{chisq_sf, normal_sf, Probability};
use crate::stats::{
    between_group_scatter, column_mean, diagonal_blocks, log_det_psd, scatter_matrix,
    within_group_scatter, BlockPartition, Cholesky, DataMatrix, GroupedData,
};

/// Data in the shape a problem expects.
#[derive(Debug, Clone, PartialEq)]
pub enum Sample {
    Single(DataMatrix),
    Grouped(GroupedData),
}

impl From<DataMatrix> for Sample {
    fn from(x: DataMatrix) -> Self {
        Sample::Single(x)
    }
}

impl From<GroupedData> for Sample {
    fn from(g: GroupedData) -> Self {
        Sample::Grouped(g)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LrtOutcome {
    pub neg2_log_lambda: f64,
    pub f: u64,
    pub rho: f64,
    /// Upper tail of `chi2_f` at `-2 log Lambda`.
    pub pvalue_chisq: Probability,
    /// Upper tail of `chi2_f` at `-2 rho log Lambda`.
    pub pvalue_bartlett: Probability,
    /// `1 - Phi((-2 log Lambda + 2 mu_n) / (2 n sigma_n))`.
    pub pvalue_normal: Probability,
}

fn check_layout(t: &TestProblem, sample: &Sample) -> Result<()> {
    let mismatch = |what: String| Err(config(format!("data do not match {t}: {what}")));
    match sample {
        Sample::Single(x) => {
            if t.kind().is_multi_sample() {
                return mismatch("expected grouped data".into());
            }
            if (x.n(), x.p()) != (t.n(), t.p()) {
                return mismatch(format!("got n = {}, p = {}", x.n(), x.p()));
            }
        }
        Sample::Grouped(g) => {
            if !t.kind().is_multi_sample() {
                return mismatch("expected a single sample".into());
            }
            if g.p() != t.p() || Some(g.sizes().as_slice()) != t.group_sizes() {
                return mismatch(format!("got group sizes {:?}, p = {}", g.sizes(), g.p()));
            }
        }
    }
    Ok(())
}

/// `-2 log Lambda_n`.
pub fn neg2_log_lambda(t: &TestProblem, sample: &Sample) -> Result<f64> {
    check_layout(t, sample)?;
    let n = t.n() as f64;
    let p = t.p() as f64;
    match sample {
        Sample::Single(x) => {
            let a = scatter_matrix(x);
            match t.kind() {
                TestKind::Mean => {
                    // ln|A + n xbar xbar^T| - ln|A| = ln(1 + n xbar^T A^{-1} xbar)
                    let xbar = column_mean(x);
                    let y = Cholesky::new(&a)?.solve(&xbar);
                    Ok(n * (n * xbar.dot(&y)).ln_1p())
                }
                TestKind::Sphericity => {
                    let ld = log_det_psd(&a)?;
                    Ok((n - 1.0) * (p * (a.trace() / p).ln() - ld))
                }
                TestKind::Joint => {
                    let ld = log_det_psd(&a)?;
                    let xbar = column_mean(x);
                    Ok(-n * p * (1.0 - n.ln()) - n * ld + a.trace() + n * xbar.norm_squared())
                }
                TestKind::Independence => {
                    let part = BlockPartition::new(t.block_dims().unwrap().to_vec())?;
                    let whole = log_det_psd(&a)?;
                    let mut blocks = 0.0;
                    for b in diagonal_blocks(&a, &part)? {
                        blocks += log_det_psd(&b)?;
                    }
                    Ok(n * (blocks - whole))
                }
                _ => unreachable!("layout checked"),
            }
        }
        Sample::Grouped(g) => {
            let k = t.k() as f64;
            let (pooled, parts) = within_group_scatter(g);
            match t.kind() {
                TestKind::MeanEquality => {
                    let total = pooled.sum(&between_group_scatter(g));
                    Ok(n * (log_det_psd(&total)? - log_det_psd(&pooled)?))
                }
                TestKind::CovarianceEquality => {
                    let mut acc = (n - k) * (log_det_psd(&pooled)? - p * (n - k).ln());
                    for (a, x) in parts.iter().zip(g.groups()) {
                        let m = x.n() as f64 - 1.0;
                        acc -= m * (log_det_psd(a)? - p * m.ln());
                    }
                    Ok(acc)
                }
                TestKind::JointEquality => {
                    let total = pooled.sum(&between_group_scatter(g));
                    let mut acc = n * (log_det_psd(&total)? - p * n.ln());
                    for (a, x) in parts.iter().zip(g.groups()) {
                        let m = x.n() as f64;
                        acc -= m * (log_det_psd(a)? - p * m.ln());
                    }
                    Ok(acc)
                }
                _ => unreachable!("layout checked"),
            }
        }
    }
}

/// Statistic plus p-values under the plain, Bartlett and normal approximations.
pub fn evaluate(t: &TestProblem, sample: &Sample) -> Result<LrtOutcome> {
    let stat = neg2_log_lambda(t, sample)?;
    let f = degrees_of_freedom(t);
    let rho = bartlett_rho(t)?;
    let np = normal_params(t)?;
    let z = (stat + 2.0 * np.mu_n) / (2.0 * t.n() as f64 * np.sigma_n());
    // Rounding can leave a tiny negative statistic at the null value.
    let s = stat.max(0.0);
    Ok(LrtOutcome {
        neg2_log_lambda: stat,
        f,
        rho,
        pvalue_chisq: Probability::new(chisq_sf(f, s)?)?,
        pvalue_bartlett: Probability::new(chisq_sf(f, rho * s)?)?,
        pvalue_normal: Probability::new(normal_sf(z))?,
    })
}

/// Moves data to the `mu0 = 0`, `Sigma0 = I` null: `x -> L^{-1}(x - mu0)`
/// where `Sigma0 = L L^T`.
pub fn standardize(
    x: &DataMatrix,
    mu0: Option<&[f64]>,
    sigma0: Option<&DMatrix<f64>>,
) -> Result<DataMatrix> {
    let p = x.p();
    let mut m = x.as_matrix().clone();
    if let Some(mu) = mu0 {
        if mu.len() != p {
            return Err(config(format!("mu0 has length {}, expected {p}", mu.len())));
        }
        for (j, v) in mu.iter().enumerate() {
            m.column_mut(j).add_scalar_mut(-v);
        }
    }
    if let Some(s) = sigma0 {
        if s.shape() != (p, p) {
            return Err(config(format!(
                "Sigma0 is {}x{}, expected {p}x{p}",
                s.nrows(),
                s.ncols()
            )));
        }
        let chol = Cholesky::new(&crate::stats::ScatterMatrix::new(s.clone())?)?;
        let l = chol.factor();
        // Row-wise y = L^{-1} x, i.e. Y = X L^{-T}.
        let mut out = DMatrix::zeros(m.nrows(), p);
        for i in 0..m.nrows() {
            for r in 0..p {
                let mut acc = m[(i, r)];
                for c in 0..r {
                    acc -= l[(r, c)] * out[(i, c)];
                }
                out[(i, r)] = acc / l[(r, r)];
            }
        }
        m = out;
    }
    DataMatrix::new(m)
}
