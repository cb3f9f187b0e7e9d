use std::process::{Command, Output};

fn omega(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_omega")).args(args).env_remove("OMEGA_THREADS").output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn data_lines(s: &str) -> Vec<&str> {
    s.lines().filter(|l| !l.starts_with('#')).collect()
}

#[test]
fn rq_table_with_direct_check() {
    let o = omega(&["rq", "--nmax", "2000", "--check-direct"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let out = stdout(&o);
    let rows = data_lines(&out);
    assert_eq!(rows[0], "N,r_omega,method");
    assert_eq!(rows.len(), 2001);
    assert!(rows.contains(&"6,1,transform"));
    assert!(rows.contains(&"10,30,transform"));
}

#[test]
fn meta_lines_lead_the_output() {
    let out = stdout(&omega(&["rq", "--nmax", "10"]));
    let meta: Vec<&str> = out.lines().take_while(|l| l.starts_with('#')).collect();
    assert!(meta.iter().any(|l| l.starts_with("# omega-cli: ")));
    assert!(meta.contains(&"# command: rq"));
    let hash = meta.iter().find_map(|l| l.strip_prefix("# config-sha256: ")).unwrap();
    assert_eq!(hash.len(), 64);
    assert!(hash.bytes().all(|b| b.is_ascii_hexdigit()));
}

#[test]
fn scan_rows_sorted_with_full_precision() {
    let o = omega(&["scan", "--f", "omega", "--delta", "0.25", "--farey", "50", "--x", "10000,1000"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    let rows = data_lines(&out);
    assert_eq!(rows[0], "alpha,a,q,X,abs_S,bound,ratio");
    let keys: Vec<(u64, f64)> = rows[1..]
        .iter()
        .map(|r| {
            let c: Vec<&str> = r.split(',').collect();
            (c[3].parse().unwrap(), c[0].parse().unwrap())
        })
        .collect();
    assert!(keys.windows(2).all(|w| w[0].0 < w[1].0 || (w[0].0 == w[1].0 && w[0].1 <= w[1].1)));
    assert_eq!(keys.first().unwrap().0, 1000);
    for r in &rows[1..] {
        let ratio = r.rsplit(',').next().unwrap();
        let mantissa = ratio.split('e').next().unwrap();
        assert_eq!(mantissa.trim_start_matches('-').replace('.', "").len(), 17, "{ratio}");
    }
    assert!(out.lines().any(|l| l.starts_with("# max_ratio: ")));
}

#[test]
fn random_scan_needs_seed_and_is_reproducible() {
    assert_eq!(omega(&["scan", "--x", "1000", "--random", "3"]).status.code(), Some(2));
    let a = omega(&["scan", "--x", "1000", "--random", "5", "--seed", "11"]);
    let b = omega(&["scan", "--x", "1000", "--random", "5", "--seed", "11"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    assert!(stdout(&a).contains("# seed: 11"));
}

#[test]
fn configuration_errors_exit_two() {
    for args in [
        &["scan", "--delta", "0.7", "--farey", "3", "--x", "10"][..],
        &["scan", "--f", "lambda", "--farey", "3", "--x", "10"],
        &["arcs", "--n", "2000", "--b", "-1"],
        &["bogus"],
    ] {
        assert_eq!(omega(args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn precision_failure_exits_three() {
    let o = omega(&["rq", "--nmax", "100000", "--f", "omega_k:12"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains("precision"));
}

#[test]
fn verify_quick_passes() {
    let o = omega(&["verify", "--quick"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(!stdout(&o).contains(",false,"));
}

#[test]
fn fitted_table_feeds_back_through_coeffs() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("coeffs.json");
    let path = path.to_str().unwrap();
    let fit = omega(&["fit", "--moduli", "10", "-o", path]);
    assert_eq!(fit.status.code(), Some(0), "{}", String::from_utf8_lossy(&fit.stderr));
    assert!(fit.stdout.is_empty());

    let fitted = omega(&["sseries", "--n", "100000", "--q", "10"]);
    let loaded = omega(&["sseries", "--n", "100000", "--q", "10", "--coeffs", path]);
    assert_eq!(loaded.status.code(), Some(0), "{}", String::from_utf8_lossy(&loaded.stderr));
    let rows = |o: &Output| stdout(o).lines().filter(|l| !l.starts_with('#')).map(String::from).collect::<Vec<_>>();
    assert_eq!(rows(&fitted), rows(&loaded));

    let short = omega(&["sseries", "--n", "100000", "--q", "20", "--coeffs", path]);
    assert_eq!(short.status.code(), Some(2));
}

#[test]
fn thread_count_does_not_change_bytes() {
    let run = |threads: &str| {
        Command::new(env!("CARGO_BIN_EXE_omega"))
            .args(["arcs", "--n", "3000"])
            .env("OMEGA_THREADS", threads)
            .output()
            .unwrap()
            .stdout
    };
    assert_eq!(run("1"), run("6"));
}
