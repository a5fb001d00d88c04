//! CSV tables: UTF-8, LF line endings, floats in shortest round-trip form.

use std::io::{self, Write};

use lrt_core::asymptotics::BiasReport;
use lrt_core::montecarlo::{cell_key, BiasRow, Epsilon, SimResult};

pub const SWEEP_HEADER: [&str; 12] = [
    "test",
    "n",
    "p",
    "epsilon_num",
    "epsilon_den",
    "alpha",
    "approx",
    "reps",
    "errors_count",
    "empirical_error",
    "se",
    "master_seed",
];

pub const BIAS_EXTRA: [&str; 5] = [
    "varpi_theta",
    "varpi_normal",
    "m_c",
    "gap",
    "crossover_flag",
];

pub const REPORT_HEADER: [&str; 25] = [
    "test",
    "layout",
    "n",
    "p",
    "epsilon_num",
    "epsilon_den",
    "alpha",
    "f",
    "rho",
    "d_chisq",
    "ratio_chisq",
    "d_bartlett",
    "ratio_bartlett",
    "theta1",
    "theta2",
    "mu_n",
    "sigma_n_sq",
    "varpi1",
    "varpi2",
    "varpi3",
    "varpi4",
    "mc13",
    "mc24",
    "threshold",
    "recommendation",
];

fn writer<W: Write>(w: W) -> csv::Writer<W> {
    csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(w)
}

fn eps_fields(e: Option<Epsilon>) -> [String; 2] {
    match e {
        Some(e) => [e.num().to_string(), e.den().to_string()],
        None => [String::new(), String::new()],
    }
}

fn sweep_fields(r: &SimResult) -> Vec<String> {
    let [num, den] = eps_fields(r.epsilon);
    vec![
        r.test.roman().to_string(),
        r.n.to_string(),
        r.p.to_string(),
        num,
        den,
        r.alpha.get().to_string(),
        r.approx.as_str().to_string(),
        r.reps.to_string(),
        r.errors_count.to_string(),
        r.empirical_error.get().to_string(),
        r.se.to_string(),
        r.master_seed.to_string(),
    ]
}

pub fn write_sweep<W: Write>(w: W, rows: &[SimResult]) -> io::Result<()> {
    let mut out = writer(w);
    out.write_record(SWEEP_HEADER)?;
    for r in rows {
        out.write_record(sweep_fields(r))?;
    }
    out.flush()
}

pub fn write_bias<W: Write>(w: W, rows: &[BiasRow]) -> io::Result<()> {
    let mut out = writer(w);
    out.write_record(SWEEP_HEADER.iter().chain(BIAS_EXTRA.iter()))?;
    for r in rows {
        let mut f = sweep_fields(&r.sim);
        f.extend([
            r.varpi_theta.to_string(),
            r.varpi_normal.to_string(),
            r.m_c.to_string(),
            r.gap.to_string(),
            u8::from(r.crossover).to_string(),
        ]);
        out.write_record(f)?;
    }
    out.flush()
}

pub fn write_reports<W: Write>(w: W, rows: &[(Option<Epsilon>, BiasReport)]) -> io::Result<()> {
    let mut out = writer(w);
    out.write_record(REPORT_HEADER)?;
    for (eps, r) in rows {
        let t = &r.problem;
        let [num, den] = eps_fields(*eps);
        let f = [
            t.kind().roman().to_string(),
            cell_key(t).replace(',', " "),
            t.n().to_string(),
            t.p().to_string(),
            num,
            den,
            r.settings.alpha.get().to_string(),
            r.f.to_string(),
            r.rho.to_string(),
            r.boundary_plain.exponent.to_string(),
            r.boundary_plain.ratio.to_string(),
            r.boundary_bartlett.exponent.to_string(),
            r.boundary_bartlett.ratio.to_string(),
            r.theta1.to_string(),
            r.theta2.to_string(),
            r.normal.mu_n.to_string(),
            r.normal.sigma_n_sq.to_string(),
            r.varpi1.to_string(),
            r.varpi2.to_string(),
            r.varpi3.to_string(),
            r.varpi4.to_string(),
            r.mc13.to_string(),
            r.mc24.to_string(),
            r.settings.threshold.to_string(),
            r.recommendation.as_str().to_string(),
        ];
        out.write_record(f)?;
    }
    out.flush()
}
