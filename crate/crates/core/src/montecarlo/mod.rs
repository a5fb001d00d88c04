//! Monte Carlo calibration of the approximations under the null.
//!
//! Replication `r` of a cell draws from a ChaCha8 stream seeded by
//! `SHA-256(master_seed, cell key, r)`, so every table is a pure function of
//! the configuration whatever the thread count. Each replication computes the
//! statistic once and compares it with both critical values.

mod grid;
mod sampling;

pub use grid::{dimension_for, Epsilon};
pub use sampling::{cell_key, replication_seed, sample_h0, StreamSeed};

use rayon::prelude::*;
use sha2::{Digest, Sha256};

use crate::asymptotics::{
    bartlett_rho, combined_bias, degrees_of_freedom, varpi, BiasForm, Correction, DEFAULT_C,
};
use crate::error::{config, Result};
use crate::lrt::neg2_log_lambda;
use crate::problem::{TestKind, TestProblem};
use crate::special::{chisq_upper_quantile, Probability};

pub const DEFAULT_SWEEP_REPS: usize = 1000;
pub const DEFAULT_BIAS_REPS: usize = 3000;
pub const MIN_REPS: usize = 100;
/// Groups (IV-VI) or blocks (VII) per cell unless configured.
pub const DEFAULT_GROUPS: usize = 3;

#[derive(Debug, Clone, PartialEq)]
pub struct SimConfig {
    pub test: TestKind,
    pub alpha: Probability,
    pub reps: usize,
    pub master_seed: u64,
    pub epsilon_grid: Vec<Epsilon>,
    /// Sample size per cell; per group for tests IV-VI.
    pub n_values: Vec<usize>,
    /// `k` for tests IV-VII, ignored otherwise.
    pub groups: usize,
    /// Switch-over level of `M_c`.
    pub c: f64,
    /// Worker threads; 0 lets the pool decide.
    pub threads: usize,
}

impl SimConfig {
    pub fn new(test: TestKind, master_seed: u64) -> Self {
        Self {
            test,
            alpha: Probability::level(0.05).expect("0.05 is a level"),
            reps: DEFAULT_SWEEP_REPS,
            master_seed,
            epsilon_grid: Vec::new(),
            n_values: Vec::new(),
            groups: DEFAULT_GROUPS,
            c: DEFAULT_C,
            threads: 0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.reps < MIN_REPS {
            return Err(config(format!(
                "reps must be at least {MIN_REPS}, got {}",
                self.reps
            )));
        }
        Probability::level(self.alpha.get())?;
        if !(self.c > 0.0) {
            return Err(config(format!("c must be positive, got {}", self.c)));
        }
        if !self.test.is_one_sample() && self.groups < 2 {
            return Err(config(format!(
                "test {} needs at least 2 groups or blocks, got {}",
                self.test, self.groups
            )));
        }
        Ok(())
    }

    /// The epsilon grid sorted ascending, duplicates (by value) dropped with a warning.
    pub fn epsilons(&self) -> Vec<Epsilon> {
        let mut out: Vec<Epsilon> = Vec::with_capacity(self.epsilon_grid.len());
        for &e in &self.epsilon_grid {
            if out.contains(&e) {
                log::warn!("duplicate epsilon {e} dropped from the grid");
            } else {
                out.push(e);
            }
        }
        out.sort();
        out
    }
}

/// Layout of the `(n, eps)` cell: `p = floor(N^eps)` with `N` the total sample
/// size; test VII splits `p` into `k - 1` blocks of `floor(p/k)` plus the rest.
pub fn cell_problem(test: TestKind, n: usize, eps: Epsilon, groups: usize) -> Result<TestProblem> {
    match test {
        TestKind::Mean | TestKind::Sphericity | TestKind::Joint => {
            let p = dimension_for(n as u64, eps) as usize;
            TestProblem::one_sample(test, n, p)
        }
        TestKind::MeanEquality | TestKind::CovarianceEquality | TestKind::JointEquality => {
            let p = dimension_for((n * groups) as u64, eps) as usize;
            TestProblem::multi_sample(test, vec![n; groups], p)
        }
        TestKind::Independence => {
            let p = dimension_for(n as u64, eps) as usize;
            let each = p / groups;
            if each == 0 {
                return Err(config(format!(
                    "p = {p} cannot be split into {groups} non-empty blocks"
                )));
            }
            let mut dims = vec![each; groups - 1];
            dims.push(p - each * (groups - 1));
            TestProblem::independence(n, dims)
        }
    }
}

/// Statistics of one cell in replication order, with a digest of their bits.
#[derive(Debug, Clone, PartialEq)]
pub struct CellRun {
    pub statistics: Vec<f64>,
    pub digest: [u8; 32],
}

impl CellRun {
    pub fn digest_hex(&self) -> String {
        self.digest.iter().map(|b| format!("{b:02x}")).collect()
    }
}

/// Runs `reps` null replications on the current rayon pool.
pub fn simulate_statistics(t: &TestProblem, master_seed: u64, reps: usize) -> Result<CellRun> {
    let key = cell_key(t);
    let statistics = (0..reps as u64)
        .into_par_iter()
        .map(|r| neg2_log_lambda(t, &sample_h0(t, replication_seed(master_seed, &key, r))))
        .collect::<Result<Vec<f64>>>()?;
    let mut h = Sha256::new();
    for s in &statistics {
        h.update(s.to_bits().to_le_bytes());
    }
    let mut digest = [0u8; 32];
    digest.copy_from_slice(&h.finalize());
    Ok(CellRun { statistics, digest })
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimResult {
    pub test: TestKind,
    /// As configured: per group for tests IV-VI.
    pub n: usize,
    pub p: usize,
    pub epsilon: Option<Epsilon>,
    pub alpha: Probability,
    pub approx: Correction,
    pub reps: usize,
    pub errors_count: usize,
    pub empirical_error: Probability,
    /// Binomial standard error `sqrt(e (1 - e) / reps)`.
    pub se: f64,
    pub master_seed: u64,
    pub stream_digest: String,
}

/// Rejection rates of the plain and Bartlett approximations on one shared
/// set of replications, in that order.
pub fn empirical_type1_error(
    cfg: &SimConfig,
    t: &TestProblem,
    n: usize,
    epsilon: Option<Epsilon>,
) -> Result<[SimResult; 2]> {
    let run = simulate_statistics(t, cfg.master_seed, cfg.reps)?;
    tabulate(cfg, t, n, epsilon, &run)
}

fn tabulate(
    cfg: &SimConfig,
    t: &TestProblem,
    n: usize,
    epsilon: Option<Epsilon>,
    run: &CellRun,
) -> Result<[SimResult; 2]> {
    let f = degrees_of_freedom(t);
    let crit = chisq_upper_quantile(f, cfg.alpha.get())?;
    let rho = bartlett_rho(t)?;
    let digest = run.digest_hex();
    let reps = run.statistics.len();
    let make = |approx: Correction, scale: f64| -> Result<SimResult> {
        let errors_count = run.statistics.iter().filter(|&&s| scale * s > crit).count();
        let e = errors_count as f64 / reps as f64;
        Ok(SimResult {
            test: t.kind(),
            n,
            p: t.p(),
            epsilon,
            alpha: cfg.alpha,
            approx,
            reps,
            errors_count,
            empirical_error: Probability::new(e)?,
            se: (e * (1.0 - e) / reps as f64).sqrt(),
            master_seed: cfg.master_seed,
            stream_digest: digest.clone(),
        })
    };
    Ok([
        make(Correction::Plain, 1.0)?,
        make(Correction::Bartlett, rho)?,
    ])
}

#[derive(Debug, Clone, PartialEq)]
pub struct SkippedCell {
    pub n: usize,
    pub epsilon: Epsilon,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct SweepTable {
    pub rows: Vec<SimResult>,
    pub skipped: Vec<SkippedCell>,
}

fn with_pool<T: Send>(threads: usize, job: impl FnOnce() -> T + Send) -> Result<T> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| config(format!("cannot start worker pool: {e}")))?;
    Ok(pool.install(job))
}

fn cells(cfg: &SimConfig) -> Vec<(usize, Epsilon, std::result::Result<TestProblem, String>)> {
    let eps = cfg.epsilons();
    let mut out = Vec::new();
    for &n in &cfg.n_values {
        for &e in &eps {
            let cell = cell_problem(cfg.test, n, e, cfg.groups).map_err(|err| err.to_string());
            out.push((n, e, cell));
        }
    }
    out
}

/// One row per `(n, eps, approx)`, plain before Bartlett, `n` in configured
/// order and `eps` ascending. Cells violating the existence conditions are
/// listed in `skipped`.
pub fn epsilon_sweep(cfg: &SimConfig) -> Result<SweepTable> {
    cfg.validate()?;
    with_pool(cfg.threads, || {
        let mut table = SweepTable::default();
        for (n, e, cell) in cells(cfg) {
            match cell {
                Ok(t) => {
                    let rows = empirical_type1_error(cfg, &t, n, Some(e))?;
                    log::info!(
                        "{t}: eps {e}, error {} (chisq) {} (bartlett)",
                        rows[0].empirical_error,
                        rows[1].empirical_error
                    );
                    table.rows.extend(rows);
                }
                Err(reason) => {
                    log::warn!("skipping n = {n}, eps = {e}: {reason}");
                    table.skipped.push(SkippedCell {
                        n,
                        epsilon: e,
                        reason,
                    });
                }
            }
        }
        Ok(table)
    })?
}

#[derive(Debug, Clone, PartialEq)]
pub struct BiasRow {
    pub sim: SimResult,
    /// `varpi_1` (plain) or `varpi_2` (Bartlett).
    pub varpi_theta: f64,
    /// `varpi_3` (plain) or `varpi_4` (Bartlett).
    pub varpi_normal: f64,
    pub m_c: f64,
    /// `empirical - alpha - m_c`.
    pub gap: f64,
    /// First `eps` (per `n` and approximation) where `m_c > varpi_theta`.
    pub crossover: bool,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct BiasTable {
    pub rows: Vec<BiasRow>,
    pub skipped: Vec<SkippedCell>,
}

/// Empirical rejection rates next to the closed-form bias estimates.
pub fn bias_comparison(cfg: &SimConfig) -> Result<BiasTable> {
    let sweep = epsilon_sweep(cfg)?;
    let mut rows = Vec::with_capacity(sweep.rows.len());
    let mut crossed: Vec<(usize, Correction)> = Vec::new();
    for sim in sweep.rows {
        let t = cell_problem(
            cfg.test,
            sim.n,
            sim.epsilon.expect("sweep rows carry eps"),
            cfg.groups,
        )?;
        let varpi_theta = varpi(&t, sim.approx, BiasForm::Theta, cfg.alpha)?;
        let varpi_normal = varpi(&t, sim.approx, BiasForm::Normal, cfg.alpha)?;
        let m_c = combined_bias(varpi_theta, varpi_normal, cfg.c);
        let gap = sim.empirical_error.get() - cfg.alpha.get() - m_c;
        let key = (sim.n, sim.approx);
        let crossover = m_c > varpi_theta && !crossed.contains(&key);
        if crossover {
            crossed.push(key);
        }
        rows.push(BiasRow {
            sim,
            varpi_theta,
            varpi_normal,
            m_c,
            gap,
            crossover,
        });
    }
    Ok(BiasTable {
        rows,
        skipped: sweep.skipped,
    })
}
