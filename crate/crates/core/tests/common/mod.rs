use lrt_core::{TestKind, TestProblem};

/// Layouts shared by the identity checks: n in {50, 100, 500}, p in {2, 5, 10};
/// group sizes from {50, 100} with k in {2, 3}; block sizes from {1, 2, 5}.
pub fn layout_grid() -> Vec<TestProblem> {
    let mut out = Vec::new();
    for n in [50, 100, 500] {
        for p in [2, 5, 10] {
            for kind in [TestKind::Mean, TestKind::Sphericity, TestKind::Joint] {
                out.push(TestProblem::one_sample(kind, n, p).unwrap());
            }
        }
        for dims in tuples(&[1, 2, 5]) {
            out.push(TestProblem::independence(n, dims).unwrap());
        }
    }
    for sizes in tuples(&[50, 100]) {
        for p in [2, 5, 10] {
            for kind in [
                TestKind::MeanEquality,
                TestKind::CovarianceEquality,
                TestKind::JointEquality,
            ] {
                out.push(TestProblem::multi_sample(kind, sizes.clone(), p).unwrap());
            }
        }
    }
    out
}

/// All length-2 and length-3 tuples over `values`.
fn tuples(values: &[usize]) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    for &a in values {
        for &b in values {
            out.push(vec![a, b]);
            for &c in values {
                out.push(vec![a, b, c]);
            }
        }
    }
    out
}
