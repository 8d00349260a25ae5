use std::collections::HashMap;
use std::f64::consts::PI;
use std::fs;
use std::process::{Command, Output};

fn bin() -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_horizon-eur"));
    cmd.env_remove("HORIZON_EUR_JOBS");
    cmd
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn report_fields(args: &[&str]) -> HashMap<String, String> {
    let out = run(args);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    stdout(&out)
        .lines()
        .filter_map(|l| {
            let mut parts = l.split_whitespace();
            Some((parts.next()?.to_string(), parts.next()?.to_string()))
        })
        .collect()
}

fn num(fields: &HashMap<String, String>, key: &str) -> f64 {
    fields[key].parse().unwrap()
}

#[test]
fn report_singlet_limit() {
    let f = report_fields(&[
        "report", "--state", "werner", "--p", "1", "--temp", "0.0001",
    ]);
    assert_eq!(f["adabi_bound"], "0.000000");
    assert_eq!(f["qsk_lower"], "1.000000");
    assert_eq!(f["lhs"], "0.000000");
}

#[test]
fn report_x_state_p0_ignores_temperature() {
    let hot = report_fields(&["report", "--state", "x-state", "--p", "0", "--temp", "5"]);
    let cold = report_fields(&[
        "report", "--state", "x-state", "--p", "0", "--temp", "0.0001",
    ]);
    for (key, value) in &hot {
        if key != "T" {
            assert_eq!(value, &cold[key], "{key}");
        }
    }
}

#[test]
fn report_mass_and_dilaton_set_temperature() {
    let f = report_fields(&[
        "report",
        "--state",
        "werner",
        "--p",
        "0.5",
        "--mass",
        "1",
        "--dilaton",
        "0.5",
    ]);
    assert!((num(&f, "T") - 1.0 / (4.0 * PI)).abs() < 1e-6);
    let direct = report_fields(&[
        "report",
        "--state",
        "werner",
        "--p",
        "0.5",
        "--temp",
        &format!("{}", 1.0 / (4.0 * PI)),
    ]);
    assert_eq!(f, direct);
}

#[test]
fn report_negative_key_note() {
    let out = run(&["report", "--state", "werner", "--p", "0.5", "--temp", "1"]);
    assert!(stdout(&out).contains("note: negative key rate"));
}

#[test]
fn report_domain_errors_exit_2() {
    let cases: [&[&str]; 5] = [
        &[
            "report",
            "--state",
            "werner",
            "--p",
            "0.5",
            "--mass",
            "1",
            "--dilaton",
            "1",
        ],
        &["report", "--state", "werner", "--p", "1.5", "--temp", "1"],
        &["report", "--state", "werner", "--p", "0.5", "--temp", "-1"],
        &["report", "--state", "werner", "--p", "0.5"],
        &["report", "--state", "ghz", "--p", "0.5", "--temp", "1"],
    ];
    for args in cases {
        let out = run(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(!out.stderr.is_empty());
    }
}

#[test]
fn report_both_temperature_sources_rejected() {
    let out = run(&[
        "report",
        "--state",
        "werner",
        "--p",
        "0.5",
        "--temp",
        "1",
        "--mass",
        "1",
        "--dilaton",
        "0",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn sweep_row_count_and_header() {
    let out = run(&[
        "sweep",
        "--state",
        "bell-diagonal",
        "--t-min",
        "0",
        "--t-max",
        "2",
        "--t-step",
        "0.5",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let lines: Vec<_> = text.lines().collect();
    assert_eq!(
        lines[0],
        "family,p,T,omega,c,mu_bound,s_cond_ab,berta_bound,delta,adabi_bound,lhs,qsk_rate"
    );
    assert_eq!(lines.len(), 1 + 11 * 5);
    assert!(!text.contains('\r'));
}

#[test]
fn sweep_is_byte_identical_across_job_counts() {
    let dir = tempfile::tempdir().unwrap();
    let mut outputs = Vec::new();
    for jobs in ["1", "3", "8"] {
        let path = dir.path().join(format!("sweep{jobs}.csv"));
        let out = run(&[
            "sweep",
            "--state",
            "x-state",
            "--p-step",
            "0.05",
            "--t-list",
            "0,0.5,1,2,10",
            "--jobs",
            jobs,
            "--out",
            path.to_str().unwrap(),
        ]);
        assert_eq!(out.status.code(), Some(0));
        outputs.push(fs::read(&path).unwrap());
    }
    let env = bin()
        .env("HORIZON_EUR_JOBS", "2")
        .args([
            "sweep",
            "--state",
            "x-state",
            "--p-step",
            "0.05",
            "--t-list",
            "0,0.5,1,2,10",
        ])
        .output()
        .unwrap();
    outputs.push(env.stdout);
    assert!(outputs.windows(2).all(|w| w[0] == w[1]));
}

#[test]
fn sweep_matches_report() {
    let out = run(&["sweep", "--state", "werner", "--p", "0.3", "--temp", "2"]);
    let text = stdout(&out);
    let header: Vec<_> = text.lines().next().unwrap().split(',').collect();
    let row: Vec<_> = text.lines().nth(1).unwrap().split(',').collect();
    let f = report_fields(&["report", "--state", "werner", "--p", "0.3", "--temp", "2"]);
    for (col, report_key) in [
        ("c", "c"),
        ("mu_bound", "mu_bound"),
        ("s_cond_ab", "s_cond_ab"),
        ("berta_bound", "berta_bound"),
        ("delta", "delta"),
        ("adabi_bound", "adabi_bound"),
        ("lhs", "lhs"),
        ("qsk_rate", "qsk_lower"),
    ] {
        let idx = header.iter().position(|h| *h == col).unwrap();
        let v: f64 = row[idx].parse().unwrap();
        assert!((v - num(&f, report_key)).abs() < 1e-6, "{col}");
    }
}

#[test]
fn sweep_json_output() {
    let out = run(&[
        "sweep", "--state", "werner", "--p-step", "0.5", "--temp", "1", "--format", "json",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.trim_start().starts_with('['));
    assert_eq!(text.matches("\"family\"").count(), 3);
    assert!(text.contains("\"T\""));
}

#[test]
fn sweep_unwritable_path_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("missing").join("out.csv");
    let out = run(&[
        "sweep",
        "--state",
        "werner",
        "--temp",
        "1",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn sweep_bad_grid_exits_2() {
    let out = run(&["sweep", "--state", "werner", "--temp", "1", "--p-step", "0"]);
    assert_eq!(out.status.code(), Some(2));
}

fn column(text: &str, name: &str) -> Vec<(f64, f64, f64)> {
    let mut lines = text.lines();
    let header: Vec<_> = lines.next().unwrap().split(',').collect();
    let idx = |n: &str| header.iter().position(|h| *h == n).unwrap();
    let (ip, it, iv) = (idx("p"), idx("T"), idx(name));
    lines
        .map(|l| {
            let f: Vec<_> = l.split(',').collect();
            (
                f[ip].parse().unwrap(),
                f[it].parse().unwrap(),
                f[iv].parse().unwrap(),
            )
        })
        .collect()
}

#[test]
fn figures_write_six_files() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&["figures", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    for n in 2..=7 {
        assert!(dir.path().join(format!("fig{n}.csv")).exists(), "fig{n}");
    }

    let fig2 = fs::read_to_string(dir.path().join("fig2.csv")).unwrap();
    let adabi = column(&fig2, "adabi_bound");
    assert_eq!(adabi.len(), 101 * 105);
    for &t in &[0.1, 1.0, 10.0] {
        let at_t: Vec<_> = adabi.iter().filter(|r| r.1 == t).collect();
        let min = at_t.iter().map(|r| r.2).fold(f64::INFINITY, f64::min);
        let at_one = at_t.iter().find(|r| r.0 == 1.0).unwrap().2;
        assert!(at_one <= min + 1e-9);
    }

    let fig3 = fs::read_to_string(dir.path().join("fig3.csv")).unwrap();
    let qsk = column(&fig3, "qsk_rate");
    for &t in &[0.1, 1.0, 10.0] {
        let at_t: Vec<_> = qsk.iter().filter(|r| r.1 == t).collect();
        let max = at_t.iter().map(|r| r.2).fold(f64::NEG_INFINITY, f64::max);
        let at_one = at_t.iter().find(|r| r.0 == 1.0).unwrap().2;
        assert!(at_one >= max - 1e-9);
    }

    for n in [5, 7] {
        let text = fs::read_to_string(dir.path().join(format!("fig{n}.csv"))).unwrap();
        assert!(
            column(&text, "qsk_rate").iter().any(|r| r.2 < 0.0),
            "fig{n}"
        );
    }
}

#[test]
fn validate_passes_for_several_seeds() {
    for seed in ["7", "9"] {
        let out = run(&["validate", "--seed", seed]);
        assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
        assert!(stdout(&out).contains("all invariants passed"));
    }
}
