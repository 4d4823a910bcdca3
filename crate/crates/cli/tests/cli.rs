use std::process::{Command, Output};

fn triport(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_triport"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn triport_line(line: &str) -> Output {
    triport(&line.split_whitespace().collect::<Vec<_>>())
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn rows(out: &Output) -> Vec<Vec<String>> {
    stdout(out)
        .lines()
        .map(|l| l.split(',').map(String::from).collect())
        .collect()
}

fn num(s: &str) -> f64 {
    s.parse().unwrap_or_else(|_| panic!("not a number: '{s}'"))
}

#[test]
fn ghz_run_is_perfect() {
    let out = triport_line("run --channel ghz --lambda 0 --mu pi/2 --theta pi/2");
    assert!(out.status.success());
    let rows = rows(&out);
    assert_eq!(rows[0], ["j", "k", "p", "F", "C"]);
    assert_eq!(rows.len(), 10);
    for row in &rows[1..9] {
        assert_eq!(row[2], "0.125000000000");
        assert!((num(&row[3]) - 1.0).abs() < 1e-9);
    }
    assert_eq!(rows[9][0], "avg");
    assert!((num(&rows[9][3]) - 1.0).abs() < 1e-9);
}

#[test]
fn w_run_swaps_entanglement() {
    let out = triport_line("run --channel w --mu 0 --theta pi/2");
    assert!(out.status.success());
    for row in &rows(&out)[1..9] {
        let swap = matches!(
            (row[0].as_str(), row[1].as_str()),
            ("3", "1") | ("4", "1") | ("1", "2") | ("2", "2")
        );
        if swap {
            assert!((num(&row[2]) - 1.0 / 6.0).abs() < 1e-11);
            assert!((num(&row[4]) - 1.0).abs() < 1e-9);
        }
    }
}

#[test]
fn malformed_angle_names_parameter() {
    let out = triport_line("run --mu 4.0");
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("mu"));

    let out = triport_line("run --theta half");
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("theta"));
}

#[test]
fn unreachable_branches_have_blank_fields() {
    // p_j1 = (1 - cos theta)/8 is far below the reachability floor here.
    let out = triport_line("run --channel ghz --mu 0 --theta 1e-7");
    assert!(out.status.success());
    let rows = rows(&out);
    for row in &rows[1..5] {
        assert_eq!(row[1], "1");
        assert_eq!(row[2], "0.000000000000");
        assert_eq!(row[3], "");
        assert_eq!(row[4], "");
    }
    for row in &rows[5..9] {
        assert_ne!(row[3], "");
    }
}

#[test]
fn output_is_byte_identical_across_runs() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    for path in [&a, &b] {
        let out = triport_line(&format!(
            "sweep --param theta --start pi/8 --stop 7pi/8 --steps 5 \
             --channel w --w 0.8 --mu pi/3 --quantities p,F,C --out {}",
            path.display()
        ));
        assert!(out.status.success());
        assert!(out.stdout.is_empty());
    }
    let a = std::fs::read(a).unwrap();
    assert_eq!(a, std::fs::read(b).unwrap());
    let text = String::from_utf8(a).unwrap();
    assert!(text.starts_with("theta,p_11,p_21,p_31,p_41,p_12,p_22,p_32,p_42,F_11,"));
    assert!(!text.contains('\r'));
    assert_eq!(text.lines().count(), 6);
}

#[test]
fn sweep_w_tracks_noisy_ghz_average() {
    let out = triport_line(
        "sweep --param w --start 0 --stop 1 --steps 11 --channel ghz --lambda 0 --mu pi/2 --quantities avgF",
    );
    assert!(out.status.success());
    let rows = rows(&out);
    assert_eq!(rows[0], ["w", "avgF"]);
    assert_eq!(rows.len(), 12);
    for row in &rows[1..] {
        let w = num(&row[0]);
        assert!((num(&row[1]) - (1.0 - 0.75 * (1.0 - w))).abs() < 1e-9, "w={w}");
    }
}

#[test]
fn sweep_mu_tracks_w_average() {
    let out = triport_line("sweep --param mu --start 0 --stop pi --steps 7 --channel w --quantities avgF");
    assert!(out.status.success());
    for row in &rows(&out)[1..] {
        let mu = num(&row[0]);
        let expected = 5.0 / 9.0 * (mu / 2.0).cos().powi(2);
        assert!((num(&row[1]) - expected).abs() < 1e-9, "mu={mu}");
    }
}

#[test]
fn sweep_w_tracks_swap_probability() {
    let out =
        triport_line("sweep --param w --start 0 --stop 1 --steps 6 --channel w --mu 0 --quantities pswap");
    assert!(out.status.success());
    for row in &rows(&out)[1..] {
        let w = num(&row[0]);
        assert!((num(&row[1]) - (2.0 / 3.0 - (1.0 - w) / 6.0)).abs() < 1e-10);
    }
}

#[test]
fn sweep_rejects_bad_ranges() {
    for line in [
        "sweep --param mu --start 1 --stop 0.5",
        "sweep --param mu --start 0 --stop 1 --steps 1",
        "sweep --param theta --start 0 --stop 1",
        "sweep --param w --start 0 --stop 1 --quantities pswap",
    ] {
        assert_eq!(triport_line(line).status.code(), Some(1), "{line}");
    }
}

#[test]
fn search_marks_published_choices() {
    let out = triport_line("search --j 1 --k 1 --theta 1.1 --phi 0.7");
    assert!(out.status.success());
    let rows = rows(&out);
    assert_eq!(rows[0], ["b", "c", "F", "maximizer", "published"]);
    assert_eq!(rows.len(), 17);
    let maximizers: Vec<(String, String)> = rows[1..]
        .iter()
        .filter(|r| r[3] == "yes")
        .map(|r| (r[0].clone(), r[1].clone()))
        .collect();
    assert_eq!(maximizers, [("0".into(), "1".into()), ("3".into(), "2".into())]);
    assert!(rows[1..].iter().all(|r| (r[3] == "yes") == (r[4] == "yes")));

    assert_eq!(triport_line("search --j 5 --k 1").status.code(), Some(1));
}

#[test]
fn verify_exit_status_follows_checks() {
    let out = triport_line("verify --criterion 1 --criterion 9 --format text");
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("criterion  1 PASS"));
    assert!(text.contains("criterion  9 PASS"));

    let out = triport_line("verify --criterion 2 --quadrature-tol 1e-18");
    assert_eq!(out.status.code(), Some(2));
    let rows = rows(&out);
    assert_eq!(
        rows[0],
        ["criterion", "check", "expected", "actual", "tolerance", "passed"]
    );
    assert_eq!(rows[1].last().unwrap(), "false");

    assert_eq!(triport_line("verify --criterion 12").status.code(), Some(1));
}
