use std::path::Path;
use std::process::{Command, Output};

use lrt_core::asymptotics::{bartlett_rho, recommend, DiagnosticSettings};
use lrt_core::{TestKind, TestProblem};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

fn lrt(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lrt"))
        .args(args)
        .env_remove("OUTPUT_DIR")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn field<'a>(text: &'a str, label: &str) -> &'a str {
    text.lines()
        .find(|l| l.starts_with(label))
        .unwrap_or_else(|| panic!("no '{label}' line in\n{text}"))[label.len()..]
        .trim()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_owned()
}

fn same_12_digits(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-12 * a.abs().max(b.abs())
}

#[test]
fn diagnose_exit_codes() {
    let o = lrt(&[
        "diagnose", "--test", "I", "--n", "1000", "--p", "3", "--alpha", "0.05",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(field(&stdout(&o), "recommendation").starts_with("chisq-ok"));

    let o = lrt(&["diagnose", "--test", "III", "--n", "100", "--p", "60"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(field(&stdout(&o), "recommendation").starts_with("neither"));

    let o = lrt(&["diagnose", "--test", "III", "--n", "500", "--p", "30"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn diagnose_independence_reports_dimension_sums() {
    let o = lrt(&["diagnose", "--test", "VII", "--n", "200", "--dims", "5,5,5"]);
    assert!(o.status.code().unwrap() <= 2);
    // D_{p,r} = 15^r - 3 * 5^r
    assert_eq!(field(&stdout(&o), "D_r, r = 1..4"), "0, 150, 3000, 48750");
}

#[test]
fn diagnose_usage_errors() {
    for args in [
        &["diagnose", "--test", "III", "--n", "10", "--p", "9"][..],
        &["diagnose", "--test", "IV", "--p", "3"],
        &["diagnose", "--test", "VIII", "--n", "10", "--p", "2"],
        &[
            "diagnose", "--test", "I", "--n", "100", "--p", "2", "--alpha", "1",
        ],
        &["diagnose", "--bogus"],
    ] {
        assert_eq!(lrt(args).status.code(), Some(64), "{args:?}");
    }
    assert_eq!(lrt(&["--help"]).status.code(), Some(0));
}

#[test]
fn printed_numbers_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("r.csv");
    let o = lrt(&[
        "diagnose",
        "--test",
        "V",
        "--sizes",
        "60,80,90",
        "--p",
        "6",
        "--csv",
        csv.to_str().unwrap(),
    ]);
    let text = stdout(&o);
    let t = TestProblem::multi_sample(TestKind::CovarianceEquality, vec![60, 80, 90], 6).unwrap();
    let r = recommend(&t, &DiagnosticSettings::default()).unwrap();
    let rho: f64 = field(&text, "bartlett rho").parse().unwrap();
    assert!(same_12_digits(rho, bartlett_rho(&t).unwrap()));
    let mu: f64 = field(&text, "mu_n").parse().unwrap();
    assert!(same_12_digits(mu, r.normal.mu_n));
    let pair: Vec<f64> = field(&text, "combined bias M_c")
        .split_whitespace()
        .map(|s| s.parse().unwrap())
        .collect();
    assert!(same_12_digits(pair[0], r.mc13) && same_12_digits(pair[1], r.mc24));

    let table = std::fs::read_to_string(&csv).unwrap();
    let lines: Vec<&str> = table.lines().collect();
    assert_eq!(lines.len(), 2);
    assert!(!table.contains('\r'));
    let header: Vec<&str> = lines[0].split(',').collect();
    let row: Vec<&str> = lines[1].split(',').collect();
    let col = |name: &str| row[header.iter().position(|h| *h == name).unwrap()];
    assert!(same_12_digits(col("varpi3").parse().unwrap(), r.varpi3));
    assert_eq!(col("layout"), "V;n_i=60 80 90;p=6");
}

#[test]
fn stat_on_centred_jitter_is_null() {
    // Rows +-jitter_i: sample mean exactly zero.
    let dir = tempfile::tempdir().unwrap();
    let mut text = String::new();
    for i in 1..=10 {
        let j = [1e-3 * i as f64, 2e-3 / i as f64];
        text += &format!("{},{}\n{},{}\n", j[0], j[1], -j[0], -j[1]);
    }
    let f = write(dir.path(), "z.csv", &text);
    let o = lrt(&["stat", "--test", "I", &f]);
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    let out = stdout(&o);
    let s: f64 = field(&out, "-2 log Lambda").parse().unwrap();
    assert!(s.abs() < 1e-12);
    let pv: f64 = field(&out, "p-value chisq").parse().unwrap();
    assert!(pv > 1.0 - 1e-9);
}

#[test]
fn stat_scalar_matches_closed_form() {
    let dir = tempfile::tempdir().unwrap();
    let v = [0.3, -1.2, 2.5, 0.7, 0.1, -0.4, 1.9, 0.8];
    let text: String = v.iter().map(|x| format!("{x}\n")).collect();
    let f = write(dir.path(), "s.txt", &text);
    let n = v.len() as f64;
    let m = v.iter().sum::<f64>() / n;
    let a: f64 = v.iter().map(|x| (x - m).powi(2)).sum();
    let oracle = n * (1.0 + n * m * m / a).ln();
    let out = stdout(&lrt(&["stat", "--test", "I", &f]));
    let s: f64 = field(&out, "-2 log Lambda").parse().unwrap();
    assert!((s - oracle).abs() <= 1e-10 * oracle);
}

#[test]
fn stat_rejects_too_few_observations() {
    let dir = tempfile::tempdir().unwrap();
    // n = 4 rows, p = 3 = n - 1
    let f = write(dir.path(), "d.csv", "1,2,3\n2,3,1\n0,1,1\n5,1,2\n");
    let o = lrt(&["stat", "--test", "II", &f]);
    assert_eq!(o.status.code(), Some(65));
    assert!(String::from_utf8_lossy(&o.stderr).contains("n > p + 1"));
    let bad = write(dir.path(), "b.csv", "1,2\n3,x\n4,5\n");
    assert_eq!(lrt(&["stat", "--test", "I", &bad]).status.code(), Some(65));
    assert_eq!(
        lrt(&["stat", "--test", "I", "/nonexistent/file"])
            .status
            .code(),
        Some(74)
    );
}

#[test]
fn stat_groups_blocks_and_caveat() {
    let dir = tempfile::tempdir().unwrap();
    let rows = |n: usize, p: usize, seed: u64| -> String {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..n)
            .map(|_| {
                let v: Vec<String> = (0..p)
                    .map(|_| StandardNormal.sample(&mut rng))
                    .map(|x: f64| x.to_string())
                    .collect();
                v.join("\t") + "\n"
            })
            .collect()
    };
    let g1 = write(dir.path(), "g1.tsv", &rows(12, 3, 1));
    let g2 = write(dir.path(), "g2.tsv", &rows(15, 3, 2));
    let o = lrt(&["stat", "--test", "V", &g1, &g2]);
    assert_eq!(o.status.code(), Some(0));
    assert!(field(&stdout(&o), "problem").contains("n_i=12,15"));
    assert_eq!(lrt(&["stat", "--test", "V", &g1]).status.code(), Some(64));

    let o = lrt(&["stat", "--test", "VII", "--dims", "1,2", &g1]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(
        lrt(&["stat", "--test", "VII", "--dims", "1,1", &g1])
            .status
            .code(),
        Some(65)
    );

    // p = 20 at n = 30 is far past both growth conditions.
    let wide = write(dir.path(), "w.tsv", &rows(30, 20, 3));
    let out = stdout(&lrt(&["stat", "--test", "III", &wide]));
    assert!(out.lines().any(|l| l.starts_with("caveat:")), "{out}");
}

#[test]
fn simulate_is_reproducible_and_validated() {
    let dir = tempfile::tempdir().unwrap();
    let run = |sub: &str, threads: &str| {
        let out = dir.path().join(sub);
        let o = lrt(&[
            "simulate",
            "--test",
            "II",
            "--n",
            "40",
            "--eps",
            "1/3,1/2,1/3",
            "--reps",
            "150",
            "--seed",
            "9",
            "--threads",
            threads,
            "--out",
            out.to_str().unwrap(),
        ]);
        assert_eq!(
            o.status.code(),
            Some(0),
            "{}",
            String::from_utf8_lossy(&o.stderr)
        );
        std::fs::read(out.join("sweep.csv")).unwrap()
    };
    let a = run("a", "1");
    let b = run("b", "3");
    assert_eq!(a, b);
    let text = String::from_utf8(a).unwrap();
    // duplicate 1/3 dropped: 2 cells x 2 approximations
    assert_eq!(text.lines().count(), 5);
    assert!(text.starts_with("test,n,p,epsilon_num,epsilon_den,alpha,approx,reps,errors_count,empirical_error,se,master_seed\n"));

    assert_eq!(
        lrt(&["simulate", "--test", "I", "--n", "100", "--reps", "0"])
            .status
            .code(),
        Some(64)
    );
    let file = write(dir.path(), "plain", "x");
    let o = lrt(&[
        "simulate", "--test", "I", "--n", "50", "--eps", "1/3", "--reps", "100", "--out", &file,
    ]);
    assert_eq!(o.status.code(), Some(74));
}

#[test]
fn simulate_reads_config_and_output_dir_env() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "c.toml",
        "[simulation]\ntest = \"I\"\nreps = 100\nmode = \"bias\"\n\n[grid]\nn = [60]\nepsilon = [\"1/4\", \"1/2\"]\n\n[seeds]\nmaster = 4\n",
    );
    let env_dir = dir.path().join("env");
    let o = Command::new(env!("CARGO_BIN_EXE_lrt"))
        .args(["simulate", "--config", &cfg])
        .env("OUTPUT_DIR", &env_dir)
        .output()
        .unwrap();
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    let bias = std::fs::read_to_string(env_dir.join("bias.csv")).unwrap();
    assert!(bias
        .lines()
        .next()
        .unwrap()
        .ends_with(",varpi_theta,varpi_normal,m_c,gap,crossover_flag"));
    assert_eq!(bias.lines().count(), 5);
    assert!(!env_dir.join("sweep.csv").exists());

    let bad = write(
        dir.path(),
        "bad.toml",
        "[simulation]\ntest = \"I\"\nrepetitions = 100\n",
    );
    assert_eq!(
        lrt(&["simulate", "--config", &bad, "--n", "50"])
            .status
            .code(),
        Some(64)
    );
}

#[test]
fn full_default_grid_has_eighteen_cells() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("g");
    let o = lrt(&[
        "simulate",
        "--test",
        "III",
        "--n",
        "100",
        "--reps",
        "100",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let text = std::fs::read_to_string(out.join("sweep.csv")).unwrap();
    for approx in ["chisq", "bartlett"] {
        assert_eq!(
            text.lines()
                .filter(|l| l.split(',').nth(6) == Some(approx))
                .count(),
            18
        );
    }
}

#[test]
fn bias_table_skips_invalid_cells() {
    let o = lrt(&[
        "bias-table",
        "--test",
        "VI",
        "--n",
        "10",
        "--eps",
        "1/4,1/2,23/24",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    // k = 3 groups of 10: p = floor(30^eps) = 2, 5, 26; the last is invalid.
    assert_eq!(text.lines().count(), 3);
    assert!(text
        .lines()
        .nth(1)
        .unwrap()
        .starts_with("VI,VI;n_i=10 10 10;p=2,30,2,1,4,"));
}
