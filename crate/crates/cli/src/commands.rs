use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use lrt_core::asymptotics::{recommend, BiasReport, DiagnosticSettings, Recommendation};
use lrt_core::lrt::{evaluate, standardize, Sample};
use lrt_core::montecarlo::{bias_comparison, cell_problem, epsilon_sweep, Epsilon, SimResult};
use lrt_core::special::Probability;
use lrt_core::stats::{DataMatrix, GroupedData};
use lrt_core::{Error, TestKind, TestProblem};

use crate::args::{
    BiasTableArgs, Cli, Command, DiagnoseArgs, DiagnosticArgs, LayoutArgs, SimMode, SimulateArgs,
    StatArgs,
};
use crate::config::{default_epsilons, RunConfig, OUTPUT_DIR_ENV};
use crate::data::{read_data, read_matrix};
use crate::error::{exit, CliError, Result};
use crate::output::{write_bias, write_reports, write_sweep};

/// Runs one command, writing its report to `out`; returns the exit status.
pub fn run(cli: &Cli, out: &mut dyn Write) -> Result<i32> {
    match &cli.command {
        Command::Diagnose(a) => diagnose(a, out),
        Command::Stat(a) => stat(a, out),
        Command::Simulate(a) => {
            simulate(a, std::env::var_os(OUTPUT_DIR_ENV).map(PathBuf::from), out)
        }
        Command::BiasTable(a) => bias_table(a, out),
    }
}

fn from_core(e: Error) -> CliError {
    match e {
        Error::Config(_) | Error::Domain(_) | Error::Unsupported(_) => CliError::usage(e),
        Error::Singular { .. } | Error::Partition { .. } | Error::OutOfRegime(_) => {
            CliError::data(e)
        }
        Error::UnsupportedDegree { .. } => CliError::Internal(e.to_string()),
    }
}

fn stdout_err(e: std::io::Error) -> CliError {
    CliError::io("<stdout>", e)
}

fn settings(a: &DiagnosticArgs) -> Result<DiagnosticSettings> {
    Ok(DiagnosticSettings {
        alpha: Probability::level(a.alpha).map_err(CliError::usage)?,
        threshold: a.threshold,
        c: a.c,
        cutoff: a.cutoff,
    })
}

fn layout_problem(a: &LayoutArgs) -> Result<TestProblem> {
    let need = |v: Option<usize>, flag: &str| {
        v.ok_or_else(|| CliError::Usage(format!("test {} needs --{flag}", a.test)))
    };
    let unused = |present: bool, flag: &str| {
        if present {
            Err(CliError::Usage(format!(
                "--{flag} does not apply to test {}",
                a.test
            )))
        } else {
            Ok(())
        }
    };
    let t = match a.test {
        TestKind::Mean | TestKind::Sphericity | TestKind::Joint => {
            unused(a.k.is_some(), "k")?;
            unused(!a.sizes.is_empty(), "sizes")?;
            unused(!a.dims.is_empty(), "dims")?;
            TestProblem::one_sample(a.test, need(a.n, "n")?, need(a.p, "p")?)
        }
        TestKind::MeanEquality | TestKind::CovarianceEquality | TestKind::JointEquality => {
            unused(!a.dims.is_empty(), "dims")?;
            let p = need(a.p, "p")?;
            let sizes = match (a.sizes.is_empty(), a.k, a.n) {
                (false, None, None) => a.sizes.clone(),
                (true, Some(k), Some(n)) => vec![n; k],
                _ => {
                    return Err(CliError::Usage(format!(
                        "test {} needs either --sizes or --k with --n (per group)",
                        a.test
                    )))
                }
            };
            TestProblem::multi_sample(a.test, sizes, p)
        }
        TestKind::Independence => {
            unused(a.k.is_some(), "k")?;
            unused(!a.sizes.is_empty(), "sizes")?;
            if a.dims.is_empty() {
                return Err(CliError::Usage("test VII needs --dims p_1,...,p_k".into()));
            }
            let total: usize = a.dims.iter().sum();
            if a.p.is_some_and(|p| p != total) {
                return Err(CliError::Usage(format!(
                    "--p {} differs from the sum of --dims ({total})",
                    a.p.unwrap()
                )));
            }
            TestProblem::independence(need(a.n, "n")?, a.dims.clone())
        }
    };
    t.map_err(CliError::usage)
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn print_report(out: &mut dyn Write, r: &BiasReport) -> std::io::Result<()> {
    let row = |out: &mut dyn Write, label: &str, a: String, b: String| {
        writeln!(out, "{label:<24}{a:<26}{b}")
    };
    writeln!(out, "{:<24}{}", "problem", r.problem)?;
    writeln!(out, "{:<24}{}", "degrees of freedom", r.f)?;
    writeln!(out, "{:<24}{}", "bartlett rho", r.rho)?;
    writeln!(out, "{:<24}{}", "alpha", r.settings.alpha.get())?;
    row(out, "", "chisq".into(), "bartlett".into())?;
    let (bp, bb) = (&r.boundary_plain, &r.boundary_bartlett);
    row(
        out,
        "boundary exponent d",
        bp.exponent.to_string(),
        bb.exponent.to_string(),
    )?;
    let kind = if bp.composite {
        "boundary ratio (comp.)"
    } else {
        "boundary ratio p/n^d"
    };
    row(out, kind, bp.ratio.to_string(), bb.ratio.to_string())?;
    row(
        out,
        "ratio below cutoff",
        yes_no(bp.verdict).into(),
        yes_no(bb.verdict).into(),
    )?;
    row(out, "theta", r.theta1.to_string(), r.theta2.to_string())?;
    row(
        out,
        "bias (theta form)",
        r.varpi1.to_string(),
        r.varpi2.to_string(),
    )?;
    row(
        out,
        "bias (normal form)",
        r.varpi3.to_string(),
        r.varpi4.to_string(),
    )?;
    row(
        out,
        "combined bias M_c",
        r.mc13.to_string(),
        r.mc24.to_string(),
    )?;
    writeln!(out, "{:<24}{}", "mu_n", r.normal.mu_n)?;
    writeln!(out, "{:<24}{}", "sigma_n^2", r.normal.sigma_n_sq)?;
    if let Some(aux) = &r.aux {
        let v: Vec<String> = (1..=4).map(|i| aux.get(i).to_string()).collect();
        writeln!(out, "{:<24}{}", "D_r, r = 1..4", v.join(", "))?;
    }
    writeln!(out, "{:<24}{}", "threshold", r.settings.threshold)?;
    writeln!(
        out,
        "{:<24}{} ({})",
        "recommendation",
        r.recommendation,
        r.recommendation.describe()
    )
}

fn recommendation_code(r: Recommendation) -> i32 {
    match r {
        Recommendation::ChisqOk => exit::CHISQ_OK,
        Recommendation::BartlettOk => exit::BARTLETT_OK,
        Recommendation::Neither => exit::NEITHER,
    }
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    File::create(path)
        .map(BufWriter::new)
        .map_err(|e| CliError::io(path, e))
}

pub fn diagnose(a: &DiagnoseArgs, out: &mut dyn Write) -> Result<i32> {
    let t = layout_problem(&a.layout)?;
    let report = recommend(&t, &settings(&a.diagnostics)?).map_err(from_core)?;
    print_report(out, &report).map_err(stdout_err)?;
    if let Some(path) = &a.csv {
        write_reports(create(path)?, &[(None, report.clone())])
            .map_err(|e| CliError::io(path, e))?;
    }
    Ok(recommendation_code(report.recommendation))
}

fn delimiter(c: Option<char>) -> Result<Option<u8>> {
    match c {
        None => Ok(None),
        Some(c) if c.is_ascii() => Ok(Some(c as u8)),
        Some(c) => Err(CliError::Usage(format!("delimiter '{c}' is not ASCII"))),
    }
}

pub fn stat(a: &StatArgs, out: &mut dyn Write) -> Result<i32> {
    let delim = delimiter(a.delimiter)?;
    let kind = a.test;
    if !a.mu0.is_empty() && !matches!(kind, TestKind::Mean | TestKind::Joint) {
        return Err(CliError::Usage(format!(
            "--mu0 applies to tests I and III, not {kind}"
        )));
    }
    if a.sigma0.is_some() && !kind.is_one_sample() {
        return Err(CliError::Usage(format!(
            "--sigma0 applies to tests I-III, not {kind}"
        )));
    }
    if !a.dims.is_empty() && kind != TestKind::Independence {
        return Err(CliError::Usage(format!(
            "--dims applies to test VII, not {kind}"
        )));
    }
    if kind.is_multi_sample() != (a.files.len() > 1) {
        return Err(CliError::Usage(if kind.is_multi_sample() {
            format!("test {kind} needs one data file per group (at least 2)")
        } else {
            format!("test {kind} takes a single data file")
        }));
    }

    let (t, sample) = if kind.is_multi_sample() {
        let groups = a
            .files
            .iter()
            .map(|f| read_data(f, delim))
            .collect::<Result<Vec<DataMatrix>>>()?;
        let g = GroupedData::new(groups).map_err(CliError::data)?;
        let t = TestProblem::multi_sample(kind, g.sizes(), g.p()).map_err(CliError::data)?;
        (t, Sample::from(g))
    } else {
        let mut x = read_data(&a.files[0], delim)?;
        let sigma0 = a
            .sigma0
            .as_deref()
            .map(|p| read_matrix(p, delim))
            .transpose()?;
        if !a.mu0.is_empty() || sigma0.is_some() {
            let mu0 = (!a.mu0.is_empty()).then_some(a.mu0.as_slice());
            x = standardize(&x, mu0, sigma0.as_ref()).map_err(CliError::data)?;
        }
        let t = if kind == TestKind::Independence {
            if a.dims.is_empty() {
                return Err(CliError::Usage("test VII needs --dims p_1,...,p_k".into()));
            }
            let total: usize = a.dims.iter().sum();
            if total != x.p() {
                return Err(CliError::Data(format!(
                    "--dims sum to {total}, but the data have p = {}",
                    x.p()
                )));
            }
            TestProblem::independence(x.n(), a.dims.clone())
        } else {
            TestProblem::one_sample(kind, x.n(), x.p())
        };
        (t.map_err(CliError::data)?, Sample::from(x))
    };

    let o = evaluate(&t, &sample).map_err(CliError::data)?;
    let w = |out: &mut dyn Write, label: &str, v: String| writeln!(out, "{label:<24}{v}");
    let io = stdout_err;
    w(out, "problem", t.to_string()).map_err(io)?;
    w(out, "-2 log Lambda", o.neg2_log_lambda.to_string()).map_err(io)?;
    w(out, "degrees of freedom", o.f.to_string()).map_err(io)?;
    w(out, "bartlett rho", o.rho.to_string()).map_err(io)?;
    w(out, "p-value chisq", o.pvalue_chisq.get().to_string()).map_err(io)?;
    w(out, "p-value bartlett", o.pvalue_bartlett.get().to_string()).map_err(io)?;
    w(out, "p-value normal", o.pvalue_normal.get().to_string()).map_err(io)?;

    let s = settings(&a.diagnostics)?;
    let report = recommend(&t, &s).map_err(from_core)?;
    w(
        out,
        "recommendation",
        format!(
            "{} ({})",
            report.recommendation,
            report.recommendation.describe()
        ),
    )
    .map_err(io)?;
    for (name, b, bias) in [
        ("chi-squared", &report.boundary_plain, report.mc13),
        ("Bartlett-corrected", &report.boundary_bartlett, report.mc24),
    ] {
        if !b.verdict {
            writeln!(
                out,
                "caveat: growth ratio {} (d = {}) is not below {} for the {name} approximation; \
                 estimated size bias {bias}",
                b.ratio, b.exponent, s.cutoff
            )
            .map_err(io)?;
        }
    }
    Ok(0)
}

fn summarize(
    out: &mut dyn Write,
    rows: &[SimResult],
    n_values: &[usize],
    skipped: usize,
) -> std::io::Result<()> {
    for &n in n_values {
        let cells: Vec<&SimResult> = rows.iter().filter(|r| r.n == n).collect();
        let range = |approx: &str| {
            let v: Vec<f64> = cells
                .iter()
                .filter(|r| r.approx.as_str() == approx)
                .map(|r| r.empirical_error.get())
                .collect();
            let lo = v.iter().copied().fold(f64::INFINITY, f64::min);
            let hi = v.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            if v.is_empty() {
                "-".to_string()
            } else {
                format!("{lo}..{hi}")
            }
        };
        writeln!(
            out,
            "n = {n}: {} cells, chisq error {}, bartlett error {}",
            cells.len() / 2,
            range("chisq"),
            range("bartlett")
        )?;
    }
    if skipped > 0 {
        writeln!(out, "{skipped} cells skipped (layout invalid)")?;
    }
    Ok(())
}

pub fn simulate(a: &SimulateArgs, env_out: Option<PathBuf>, out: &mut dyn Write) -> Result<i32> {
    let rc = RunConfig::resolve(a, env_out)?;
    std::fs::create_dir_all(&rc.out_dir).map_err(|e| CliError::io(&rc.out_dir, e))?;
    let sweep_path = rc.out_dir.join("sweep.csv");
    let bias_path = rc.out_dir.join("bias.csv");
    let (sims, skipped) = match rc.mode {
        SimMode::Sweep => {
            let table = epsilon_sweep(&rc.sim).map_err(from_core)?;
            write_sweep(create(&sweep_path)?, &table.rows)
                .map_err(|e| CliError::io(&sweep_path, e))?;
            writeln!(out, "wrote {}", sweep_path.display()).map_err(stdout_err)?;
            (table.rows, table.skipped.len())
        }
        SimMode::Bias | SimMode::Both => {
            let table = bias_comparison(&rc.sim).map_err(from_core)?;
            let sims: Vec<SimResult> = table.rows.iter().map(|r| r.sim.clone()).collect();
            if rc.mode == SimMode::Both {
                write_sweep(create(&sweep_path)?, &sims)
                    .map_err(|e| CliError::io(&sweep_path, e))?;
                writeln!(out, "wrote {}", sweep_path.display()).map_err(stdout_err)?;
            }
            write_bias(create(&bias_path)?, &table.rows)
                .map_err(|e| CliError::io(&bias_path, e))?;
            writeln!(out, "wrote {}", bias_path.display()).map_err(stdout_err)?;
            (sims, table.skipped.len())
        }
    };
    summarize(out, &sims, &rc.sim.n_values, skipped).map_err(stdout_err)?;
    Ok(0)
}

pub fn bias_table(a: &BiasTableArgs, out: &mut dyn Write) -> Result<i32> {
    let s = settings(&a.diagnostics)?;
    let mut eps: Vec<Epsilon> = if a.eps.is_empty() {
        default_epsilons()
    } else {
        a.eps.clone()
    };
    eps.sort();
    eps.dedup();
    let mut rows = Vec::new();
    for &n in &a.n {
        for &e in &eps {
            let report = cell_problem(a.test, n, e, a.groups).and_then(|t| recommend(&t, &s));
            match report {
                Ok(r) => rows.push((Some(e), r)),
                Err(err) => log::warn!("skipping n = {n}, eps = {e}: {err}"),
            }
        }
    }
    match &a.out {
        Some(path) => write_reports(create(path)?, &rows).map_err(|e| CliError::io(path, e))?,
        None => write_reports(out, &rows).map_err(stdout_err)?,
    }
    Ok(0)
}
