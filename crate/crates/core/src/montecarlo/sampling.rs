use nalgebra::DMatrix;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use sha2::{Digest, Sha256};

use crate::lrt::Sample;
use crate::problem::{Layout, TestProblem};
use crate::stats::{DataMatrix, GroupedData};

pub type StreamSeed = [u8; 32];

/// Canonical text form of a cell, used as the stream key.
pub fn cell_key(t: &TestProblem) -> String {
    let join = |v: &[usize]| v.iter().map(usize::to_string).collect::<Vec<_>>().join(",");
    match t.layout() {
        Layout::OneSample { n, p } => format!("{};n={n};p={p}", t.kind()),
        Layout::MultiSample { sizes, p } => format!("{};n_i={};p={p}", t.kind(), join(sizes)),
        Layout::Blocks { n, dims } => format!("{};n={n};p_j={}", t.kind(), join(dims)),
    }
}

/// `SHA-256(master_seed || len(key) || key || replication)`, little-endian.
pub fn replication_seed(master_seed: u64, key: &str, replication: u64) -> StreamSeed {
    let mut h = Sha256::new();
    h.update(master_seed.to_le_bytes());
    h.update((key.len() as u64).to_le_bytes());
    h.update(key.as_bytes());
    h.update(replication.to_le_bytes());
    let mut seed = [0u8; 32];
    seed.copy_from_slice(&h.finalize());
    seed
}

fn standard_normal_matrix(rng: &mut ChaCha8Rng, n: usize, p: usize) -> DataMatrix {
    let values: Vec<f64> = (0..n * p).map(|_| StandardNormal.sample(rng)).collect();
    DataMatrix::new(DMatrix::from_row_slice(n, p, &values)).expect("n >= 2, p >= 1")
}

/// Null data (`mu = 0`, `Sigma = I`), filled observation by observation and
/// group by group from one stream.
pub fn sample_h0(t: &TestProblem, seed: StreamSeed) -> Sample {
    let mut rng = ChaCha8Rng::from_seed(seed);
    match t.layout() {
        Layout::MultiSample { sizes, p } => {
            let groups = sizes
                .iter()
                .map(|&ni| standard_normal_matrix(&mut rng, ni, *p))
                .collect();
            Sample::Grouped(GroupedData::new(groups).expect("validated layout"))
        }
        _ => Sample::Single(standard_normal_matrix(&mut rng, t.n(), t.p())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problem::TestKind;

    #[test]
    fn seeds_depend_on_every_input() {
        let a = replication_seed(1, "I;n=10;p=2", 0);
        assert_eq!(a, replication_seed(1, "I;n=10;p=2", 0));
        assert_ne!(a, replication_seed(2, "I;n=10;p=2", 0));
        assert_ne!(a, replication_seed(1, "I;n=10;p=3", 0));
        assert_ne!(a, replication_seed(1, "I;n=10;p=2", 1));
    }

    #[test]
    fn same_seed_same_matrix() {
        let t = TestProblem::multi_sample(TestKind::CovarianceEquality, vec![5, 7], 2).unwrap();
        let s = replication_seed(9, &cell_key(&t), 3);
        assert_eq!(sample_h0(&t, s), sample_h0(&t, s));
    }

    #[test]
    fn keys_are_distinct_per_layout() {
        let a = TestProblem::one_sample(TestKind::Mean, 10, 2).unwrap();
        let b = TestProblem::one_sample(TestKind::Joint, 10, 2).unwrap();
        let c = TestProblem::independence(10, vec![1, 1]).unwrap();
        assert_eq!(cell_key(&a), "I;n=10;p=2");
        assert_ne!(cell_key(&a), cell_key(&b));
        assert_eq!(cell_key(&c), "VII;n=10;p_j=1,1");
    }
}
