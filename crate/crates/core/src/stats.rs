//! Means, scatter matrices and log-determinants of observation matrices.

use nalgebra::{DMatrix, DVector};

use crate::error::{config, domain, Error, Result};

/// Observations in rows, variables in columns.
#[derive(Debug, Clone, PartialEq)]
pub struct DataMatrix(DMatrix<f64>);

impl DataMatrix {
    pub fn new(values: DMatrix<f64>) -> Result<Self> {
        if values.nrows() < 2 {
            return Err(domain(format!(
                "data matrix needs at least 2 observations, got {}",
                values.nrows()
            )));
        }
        if values.ncols() < 1 {
            return Err(domain("data matrix needs at least one variable"));
        }
        if let Some(bad) = values.iter().find(|v| !v.is_finite()) {
            return Err(domain(format!(
                "data matrix contains a non-finite entry ({bad})"
            )));
        }
        Ok(Self(values))
    }

    /// Builds from row slices; every row must have the same length.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let p = rows.first().map_or(0, Vec::len);
        if let Some(i) = rows.iter().position(|r| r.len() != p) {
            return Err(domain(format!(
                "row {} has {} values, expected {p}",
                i + 1,
                rows[i].len()
            )));
        }
        Self::new(DMatrix::from_fn(rows.len(), p, |i, j| rows[i][j]))
    }

    pub fn n(&self) -> usize {
        self.0.nrows()
    }

    pub fn p(&self) -> usize {
        self.0.ncols()
    }

    pub fn as_matrix(&self) -> &DMatrix<f64> {
        &self.0
    }

    pub fn into_matrix(self) -> DMatrix<f64> {
        self.0
    }
}

/// Symmetric positive semi-definite `p x p` matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct ScatterMatrix(DMatrix<f64>);

impl ScatterMatrix {
    /// Accepts a square matrix that is symmetric to `1e-12` relative.
    pub fn new(values: DMatrix<f64>) -> Result<Self> {
        if !values.is_square() || values.nrows() == 0 {
            return Err(domain(format!(
                "scatter matrix must be square and non-empty, got {}x{}",
                values.nrows(),
                values.ncols()
            )));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(domain("scatter matrix contains a non-finite entry"));
        }
        let scale = values.amax().max(f64::MIN_POSITIVE);
        let p = values.nrows();
        for i in 0..p {
            for j in 0..i {
                if (values[(i, j)] - values[(j, i)]).abs() > 1e-12 * scale {
                    return Err(domain(format!(
                        "scatter matrix is not symmetric at ({i}, {j})"
                    )));
                }
            }
        }
        Ok(Self::symmetrized(values))
    }

    fn symmetrized(m: DMatrix<f64>) -> Self {
        let t = m.transpose();
        Self((m + t) * 0.5)
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn as_matrix(&self) -> &DMatrix<f64> {
        &self.0
    }

    pub fn trace(&self) -> f64 {
        self.0.trace()
    }

    pub fn scaled(&self, c: f64) -> Self {
        Self(&self.0 * c)
    }

    /// Elementwise sum of two scatter matrices of equal dimension.
    pub fn sum(&self, other: &Self) -> Self {
        Self(&self.0 + &other.0)
    }
}

/// Two or more samples with a common dimension.
#[derive(Debug, Clone, PartialEq)]
pub struct GroupedData {
    groups: Vec<DataMatrix>,
}

impl GroupedData {
    pub fn new(groups: Vec<DataMatrix>) -> Result<Self> {
        if groups.len() < 2 {
            return Err(config(format!(
                "need at least 2 groups, got {}",
                groups.len()
            )));
        }
        let p = groups[0].p();
        if let Some(g) = groups.iter().position(|g| g.p() != p) {
            return Err(config(format!(
                "group {} has dimension {}, expected {p}",
                g + 1,
                groups[g].p()
            )));
        }
        Ok(Self { groups })
    }

    pub fn groups(&self) -> &[DataMatrix] {
        &self.groups
    }

    pub fn k(&self) -> usize {
        self.groups.len()
    }

    pub fn p(&self) -> usize {
        self.groups[0].p()
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.groups.iter().map(DataMatrix::n).collect()
    }

    pub fn total_n(&self) -> usize {
        self.groups.iter().map(DataMatrix::n).sum()
    }

    /// All observations stacked in group order.
    pub fn concatenated(&self) -> DataMatrix {
        let n = self.total_n();
        let mut out = DMatrix::zeros(n, self.p());
        let mut row = 0;
        for g in &self.groups {
            out.rows_mut(row, g.n()).copy_from(g.as_matrix());
            row += g.n();
        }
        DataMatrix(out)
    }
}

/// Variable sizes `p_1, ..., p_k` of a block partition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockPartition {
    sizes: Vec<usize>,
}

impl BlockPartition {
    pub fn new(sizes: Vec<usize>) -> Result<Self> {
        if sizes.len() < 2 {
            return Err(config(format!(
                "need at least 2 blocks, got {}",
                sizes.len()
            )));
        }
        if sizes.contains(&0) {
            return Err(config("block sizes must be positive"));
        }
        Ok(Self { sizes })
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn dim(&self) -> usize {
        self.sizes.iter().sum()
    }
}

pub fn column_mean(x: &DataMatrix) -> DVector<f64> {
    x.0.row_mean().transpose()
}

/// `A = sum_i (x_i - xbar)(x_i - xbar)^T`, centered explicitly.
pub fn scatter_matrix(x: &DataMatrix) -> ScatterMatrix {
    let mut centered = x.0.clone();
    for (j, m) in column_mean(x).iter().enumerate() {
        centered.column_mut(j).add_scalar_mut(-m);
    }
    ScatterMatrix::symmetrized(centered.tr_mul(&centered))
}

/// Pooled within-group scatter `sum_i A_i` together with the `A_i`.
pub fn within_group_scatter(g: &GroupedData) -> (ScatterMatrix, Vec<ScatterMatrix>) {
    let parts: Vec<ScatterMatrix> = g.groups.iter().map(scatter_matrix).collect();
    let p = g.p();
    let pooled = parts.iter().fold(DMatrix::zeros(p, p), |acc, a| acc + &a.0);
    (ScatterMatrix(pooled), parts)
}

/// `B = sum_i n_i (xbar_i - xbar)(xbar_i - xbar)^T` with the grand mean
/// weighted by group size.
pub fn between_group_scatter(g: &GroupedData) -> ScatterMatrix {
    let n = g.total_n() as f64;
    let means: Vec<DVector<f64>> = g.groups.iter().map(column_mean).collect();
    let grand = g
        .groups
        .iter()
        .zip(&means)
        .fold(DVector::zeros(g.p()), |acc, (x, m)| acc + m * x.n() as f64)
        / n;
    let mut b = DMatrix::zeros(g.p(), g.p());
    for (x, m) in g.groups.iter().zip(&means) {
        let d = m - &grand;
        b.ger(x.n() as f64, &d, &d, 1.0);
    }
    ScatterMatrix::symmetrized(b)
}

/// Lower-triangular factor `L` with `M = L L^T`.
#[derive(Debug, Clone)]
pub struct Cholesky {
    l: DMatrix<f64>,
}

impl Cholesky {
    /// Fails when a pivot falls to `1e-10 * ||M||_inf` or below.
    pub fn new(m: &ScatterMatrix) -> Result<Self> {
        let a = &m.0;
        let p = a.nrows();
        let norm_inf = a
            .row_iter()
            .map(|r| r.iter().map(|v| v.abs()).sum::<f64>())
            .fold(0.0, f64::max);
        let tolerance = 1e-10 * norm_inf;
        let mut l = DMatrix::<f64>::zeros(p, p);
        for j in 0..p {
            let mut d = a[(j, j)];
            for t in 0..j {
                d -= l[(j, t)] * l[(j, t)];
            }
            if !(d > tolerance) {
                return Err(Error::Singular {
                    index: j,
                    pivot: d,
                    tolerance,
                });
            }
            let ljj = d.sqrt();
            l[(j, j)] = ljj;
            for i in j + 1..p {
                let mut s = a[(i, j)];
                for t in 0..j {
                    s -= l[(i, t)] * l[(j, t)];
                }
                l[(i, j)] = s / ljj;
            }
        }
        Ok(Self { l })
    }

    pub fn factor(&self) -> &DMatrix<f64> {
        &self.l
    }

    pub fn log_det(&self) -> f64 {
        2.0 * self.l.diagonal().iter().map(|d| d.ln()).sum::<f64>()
    }

    /// Solves `M y = b` by forward and back substitution.
    pub fn solve(&self, b: &DVector<f64>) -> DVector<f64> {
        let p = self.l.nrows();
        let mut y = b.clone();
        for i in 0..p {
            let mut s = y[i];
            for t in 0..i {
                s -= self.l[(i, t)] * y[t];
            }
            y[i] = s / self.l[(i, i)];
        }
        for i in (0..p).rev() {
            let mut s = y[i];
            for t in i + 1..p {
                s -= self.l[(t, i)] * y[t];
            }
            y[i] = s / self.l[(i, i)];
        }
        y
    }
}

/// `ln det M` from the Cholesky diagonal.
pub fn log_det_psd(m: &ScatterMatrix) -> Result<f64> {
    Ok(Cholesky::new(m)?.log_det())
}

/// The principal diagonal blocks of `m` in partition order.
pub fn diagonal_blocks(m: &ScatterMatrix, part: &BlockPartition) -> Result<Vec<ScatterMatrix>> {
    if part.dim() != m.dim() {
        return Err(Error::Partition {
            sum: part.dim(),
            dim: m.dim(),
        });
    }
    let mut start = 0;
    Ok(part
        .sizes
        .iter()
        .map(|&s| {
            let block = m.0.view((start, start), (s, s)).into_owned();
            start += s;
            ScatterMatrix(block)
        })
        .collect())
}
