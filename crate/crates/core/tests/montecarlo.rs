use lrt_core::asymptotics::Correction;
use lrt_core::lrt::Sample;
use lrt_core::montecarlo::{
    cell_key, empirical_type1_error, replication_seed, sample_h0, SimConfig,
};
use lrt_core::special::Probability;
use lrt_core::{TestKind, TestProblem};

fn pooled_draws(p: usize, rows_per_rep: usize, reps: u64) -> Vec<Vec<f64>> {
    let t = TestProblem::one_sample(TestKind::Mean, rows_per_rep, p).unwrap();
    let key = cell_key(&t);
    let mut rows = Vec::with_capacity(rows_per_rep * reps as usize);
    for r in 0..reps {
        match sample_h0(&t, replication_seed(2024, &key, r)) {
            Sample::Single(x) => rows.extend(
                x.as_matrix()
                    .row_iter()
                    .map(|v| v.iter().copied().collect()),
            ),
            Sample::Grouped(_) => unreachable!(),
        }
    }
    rows
}

#[test]
fn null_draws_have_unit_moments() {
    // 10^6 rows of dimension 3.
    let rows = pooled_draws(3, 1000, 1000);
    let m = rows.len() as f64;
    let bound = 5.0 / m.sqrt();
    for j in 0..3 {
        let mean = rows.iter().map(|r| r[j]).sum::<f64>() / m;
        assert!(mean.abs() < bound, "column {j} mean {mean}");
    }
    for a in 0..3 {
        for b in 0..3 {
            let cov = rows.iter().map(|r| r[a] * r[b]).sum::<f64>() / m;
            // se of x^2 is sqrt(2/m), of x*y is sqrt(1/m)
            let (target, se) = if a == b {
                (1.0, (2.0 / m).sqrt())
            } else {
                (0.0, (1.0 / m).sqrt())
            };
            assert!((cov - target).abs() < 5.0 * se, "entry ({a}, {b}) = {cov}");
        }
    }
}

#[test]
fn calibrated_cell_covers_alpha() {
    let t = TestProblem::one_sample(TestKind::Mean, 200, 2).unwrap();
    let mut covered = 0;
    for seed in 0..20u64 {
        let mut cfg = SimConfig::new(TestKind::Mean, 1000 + seed);
        cfg.threads = 1;
        let [plain, _] = empirical_type1_error(&cfg, &t, 200, None).unwrap();
        assert_eq!(plain.approx, Correction::Plain);
        let band = 3.0 * (0.05f64 * 0.95 / cfg.reps as f64).sqrt();
        if (plain.empirical_error.get() - 0.05).abs() <= band {
            covered += 1;
        }
    }
    // >= 99% of seeds; with 20 seeds that is all of them.
    assert_eq!(covered, 20);
}

#[test]
fn median_level_sanity() {
    let t = TestProblem::one_sample(TestKind::Mean, 300, 2).unwrap();
    let mut cfg = SimConfig::new(TestKind::Mean, 5);
    cfg.alpha = Probability::level(0.5).unwrap();
    cfg.threads = 1;
    let [plain, _] = empirical_type1_error(&cfg, &t, 300, None).unwrap();
    let e = plain.empirical_error.get();
    assert!((e - 0.5).abs() <= 3.0 * plain.se, "{e}");
}
