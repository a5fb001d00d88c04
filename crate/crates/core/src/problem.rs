//! The seven testing problems and their sample-size / dimension layouts.

use std::fmt;
use std::str::FromStr;

use crate::error::{config, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TestKind {
    /// (I) `H0: mu = mu0`.
    Mean,
    /// (II) `H0: Sigma = sigma^2 I`.
    Sphericity,
    /// (III) `H0: mu = mu0, Sigma = Sigma0`.
    Joint,
    /// (IV) equal means across `k` groups with a common covariance.
    MeanEquality,
    /// (V) equal covariances across `k` groups.
    CovarianceEquality,
    /// (VI) equal means and covariances across `k` groups.
    JointEquality,
    /// (VII) independence of `k` variable blocks.
    Independence,
}

impl TestKind {
    pub const ALL: [TestKind; 7] = [
        TestKind::Mean,
        TestKind::Sphericity,
        TestKind::Joint,
        TestKind::MeanEquality,
        TestKind::CovarianceEquality,
        TestKind::JointEquality,
        TestKind::Independence,
    ];

    pub fn roman(self) -> &'static str {
        match self {
            TestKind::Mean => "I",
            TestKind::Sphericity => "II",
            TestKind::Joint => "III",
            TestKind::MeanEquality => "IV",
            TestKind::CovarianceEquality => "V",
            TestKind::JointEquality => "VI",
            TestKind::Independence => "VII",
        }
    }

    pub fn is_one_sample(self) -> bool {
        matches!(
            self,
            TestKind::Mean | TestKind::Sphericity | TestKind::Joint
        )
    }

    pub fn is_multi_sample(self) -> bool {
        matches!(
            self,
            TestKind::MeanEquality | TestKind::CovarianceEquality | TestKind::JointEquality
        )
    }
}

impl fmt::Display for TestKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.roman())
    }
}

impl FromStr for TestKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let kind = match s.trim().to_ascii_lowercase().as_str() {
            "i" | "1" | "mean" => TestKind::Mean,
            "ii" | "2" | "sphericity" => TestKind::Sphericity,
            "iii" | "3" | "joint" => TestKind::Joint,
            "iv" | "4" | "mean-equality" => TestKind::MeanEquality,
            "v" | "5" | "covariance-equality" => TestKind::CovarianceEquality,
            "vi" | "6" | "joint-equality" => TestKind::JointEquality,
            "vii" | "7" | "independence" => TestKind::Independence,
            _ => return Err(config(format!("unknown test '{s}' (expected I..VII)"))),
        };
        Ok(kind)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Layout {
    /// Tests I-III: one sample of size `n` in dimension `p`.
    OneSample { n: usize, p: usize },
    /// Tests IV-VI: group sizes `n_1..n_k` in dimension `p`.
    MultiSample { sizes: Vec<usize>, p: usize },
    /// Test VII: one sample of size `n` split into variable blocks `p_1..p_k`.
    Blocks { n: usize, dims: Vec<usize> },
}

/// A test together with a layout that satisfies its existence conditions.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TestProblem {
    kind: TestKind,
    layout: Layout,
}

impl TestProblem {
    pub fn new(kind: TestKind, layout: Layout) -> Result<Self> {
        match (&layout, kind) {
            (Layout::OneSample { n, p }, k) if k.is_one_sample() => {
                check_dim(*p)?;
                if k == TestKind::Sphericity && *p < 2 {
                    return Err(config("test II needs p >= 2 (f = 0 at p = 1)"));
                }
                check_sample(*n, *p, "n")?;
            }
            (Layout::MultiSample { sizes, p }, k) if k.is_multi_sample() => {
                check_dim(*p)?;
                if sizes.len() < 2 {
                    return Err(config(format!(
                        "test {k} needs at least 2 groups, got {}",
                        sizes.len()
                    )));
                }
                for (i, &ni) in sizes.iter().enumerate() {
                    check_sample(ni, *p, &format!("n_{}", i + 1))?;
                }
            }
            (Layout::Blocks { n, dims }, TestKind::Independence) => {
                if dims.len() < 2 {
                    return Err(config(format!(
                        "test VII needs at least 2 blocks, got {}",
                        dims.len()
                    )));
                }
                if dims.contains(&0) {
                    return Err(config("block dimensions must be positive"));
                }
                check_sample(*n, dims.iter().sum(), "n")?;
            }
            (_, k) => {
                return Err(config(format!("layout {layout:?} does not fit test {k}")));
            }
        }
        Ok(Self { kind, layout })
    }

    pub fn one_sample(kind: TestKind, n: usize, p: usize) -> Result<Self> {
        Self::new(kind, Layout::OneSample { n, p })
    }

    pub fn multi_sample(kind: TestKind, sizes: Vec<usize>, p: usize) -> Result<Self> {
        Self::new(kind, Layout::MultiSample { sizes, p })
    }

    pub fn independence(n: usize, dims: Vec<usize>) -> Result<Self> {
        Self::new(TestKind::Independence, Layout::Blocks { n, dims })
    }

    pub fn kind(&self) -> TestKind {
        self.kind
    }

    pub fn layout(&self) -> &Layout {
        &self.layout
    }

    /// Total sample size.
    pub fn n(&self) -> usize {
        match &self.layout {
            Layout::OneSample { n, .. } | Layout::Blocks { n, .. } => *n,
            Layout::MultiSample { sizes, .. } => sizes.iter().sum(),
        }
    }

    /// Total dimension.
    pub fn p(&self) -> usize {
        match &self.layout {
            Layout::OneSample { p, .. } | Layout::MultiSample { p, .. } => *p,
            Layout::Blocks { dims, .. } => dims.iter().sum(),
        }
    }

    /// Number of groups (IV-VI) or blocks (VII); 1 for tests I-III.
    pub fn k(&self) -> usize {
        match &self.layout {
            Layout::OneSample { .. } => 1,
            Layout::MultiSample { sizes, .. } => sizes.len(),
            Layout::Blocks { dims, .. } => dims.len(),
        }
    }

    pub fn group_sizes(&self) -> Option<&[usize]> {
        match &self.layout {
            Layout::MultiSample { sizes, .. } => Some(sizes),
            _ => None,
        }
    }

    pub fn block_dims(&self) -> Option<&[usize]> {
        match &self.layout {
            Layout::Blocks { dims, .. } => Some(dims),
            _ => None,
        }
    }
}

impl fmt::Display for TestProblem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |v: &[usize]| v.iter().map(usize::to_string).collect::<Vec<_>>().join(",");
        match &self.layout {
            Layout::OneSample { n, p } => write!(f, "test {} (n={n}, p={p})", self.kind),
            Layout::MultiSample { sizes, p } => {
                write!(f, "test {} (n_i={}, p={p})", self.kind, join(sizes))
            }
            Layout::Blocks { n, dims } => {
                write!(f, "test {} (n={n}, p_j={})", self.kind, join(dims))
            }
        }
    }
}

fn check_dim(p: usize) -> Result<()> {
    if p == 0 {
        Err(config("dimension p must be positive"))
    } else {
        Ok(())
    }
}

fn check_sample(n: usize, p: usize, name: &str) -> Result<()> {
    if n > p + 1 {
        Ok(())
    } else {
        Err(config(format!(
            "the likelihood ratio needs {name} > p + 1, got {name} = {n} with p = {p}"
        )))
    }
}
