use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use farkas::cli::{CertificateDocument, ProblemFile};
use farkas::instances::{random_instance, seeded_rng, InstanceKind};

fn golden(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name)
}

fn farkas(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_farkas"))
        .args(args)
        .env("FARKAS_LOG", "quiet")
        .output()
        .expect("binary runs")
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

#[test]
fn decide_feasible_matches_golden() {
    let out = farkas(&["decide", path_str(&golden("feasible.txt"))]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), fs::read_to_string(golden("feasible.json")).unwrap());
    let doc = CertificateDocument::from_json(&stdout(&out)).unwrap();
    let x = doc.x_normal.unwrap();
    assert!((x[0] - 0.5).abs() < 1e-12 && (x[1] - 0.5).abs() < 1e-12);
}

#[test]
fn decide_infeasible_matches_golden() {
    let out = farkas(&["decide", path_str(&golden("infeasible.txt"))]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(stdout(&out), fs::read_to_string(golden("infeasible.json")).unwrap());
    let doc = CertificateDocument::from_json(&stdout(&out)).unwrap();
    assert_eq!(doc.u_cert.unwrap().as_slice(), &[-1.0]);
}

#[test]
fn decide_zero_rhs_is_an_error() {
    let out = farkas(&["decide", path_str(&golden("zero_rhs.txt"))]);
    assert_eq!(out.status.code(), Some(2));
    assert!(out.stdout.is_empty());
    assert_eq!(stderr(&out), fs::read_to_string(golden("zero_rhs.stderr")).unwrap());
}

#[test]
fn every_route_agrees_on_worked_instances() {
    for (file, code) in [("feasible.txt", 0), ("infeasible.txt", 1), ("identity.txt", 0)] {
        for route in ["primal", "dual", "both"] {
            let out = farkas(&["decide", path_str(&golden(file)), "--route", route]);
            assert_eq!(out.status.code(), Some(code), "{file} {route}");
        }
    }
}

#[test]
fn output_flag_writes_file_and_verify_accepts_it() {
    let dir = tempfile::tempdir().unwrap();
    let cert = dir.path().join("cert.json");
    let problem = golden("feasible.txt");
    let out = farkas(&["decide", path_str(&problem), "--output", path_str(&cert), "--rho", "2.5"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());

    let out = farkas(&["verify", path_str(&cert), path_str(&problem), "--oracle"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("certificate valid: feasible"));
    assert!(text.contains("oracle: feasible"));
}

#[test]
fn tampered_certificate_names_violated_clause() {
    let dir = tempfile::tempdir().unwrap();
    let mut doc =
        CertificateDocument::from_json(&fs::read_to_string(golden("feasible.json")).unwrap())
            .unwrap();
    let mut x = doc.x_normal.unwrap().into_inner();
    x[0] += 0.25;
    doc.x_normal = Some(farkas::linalg::Vector::new(x).unwrap());
    let cert = dir.path().join("tampered.json");
    fs::write(&cert, doc.to_json()).unwrap();

    let out = farkas(&["verify", path_str(&cert), path_str(&golden("feasible.txt"))]);
    assert_eq!(out.status.code(), Some(3));
    assert!(stderr(&out).starts_with("error[E_CERT_INVALID]: certificate clause Ax=b"));
}

#[test]
fn certificate_for_other_problem_is_rejected() {
    let out = farkas(&[
        "verify",
        path_str(&golden("infeasible.json")),
        path_str(&golden("feasible.txt")),
    ]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn verify_oracle_on_infeasible_instance() {
    let out = farkas(&[
        "verify",
        path_str(&golden("infeasible.json")),
        path_str(&golden("infeasible.txt")),
        "--oracle",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("oracle: infeasible"));
}

#[test]
fn reduce_matches_golden() {
    let out = farkas(&["reduce", path_str(&golden("feasible.txt")), "--emit-k", "--emit-xbar"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), fs::read_to_string(golden("feasible.reduce.txt")).unwrap());
    assert!(stdout(&out).contains("K (1 x 2):\n  -1.0 1.0\n"));
    assert!(stdout(&out).contains("diagram: I=yes I_y=yes II=no II_v=no"));
}

#[test]
fn reduce_square_system_notes_zero_nullity() {
    let out = farkas(&["reduce", path_str(&golden("identity.txt"))]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("nu = 0\nnote:"));
}

#[test]
fn reduce_rank_deficient_reports_rank() {
    let out = farkas(&["reduce", path_str(&golden("rank_deficient.txt"))]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("rank 1 < m=2"));
    assert_eq!(stderr(&out), fs::read_to_string(golden("rank_deficient.stderr")).unwrap());
}

#[test]
fn malformed_problem_file_is_a_parse_error() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("bad.txt");
    fs::write(&p, "2 2\n1 1\n1\n").unwrap();
    let out = farkas(&["decide", path_str(&p)]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).starts_with("error[E_PARSE]: line 3"));
}

#[test]
fn bad_flags_exit_with_error_code() {
    assert_eq!(farkas(&["decide"]).status.code(), Some(2));
    let f = golden("feasible.txt");
    assert_eq!(farkas(&["decide", path_str(&f), "--route", "sideways"]).status.code(), Some(2));
    assert_eq!(farkas(&["decide", path_str(&f), "--rho", "-1"]).status.code(), Some(2));
    assert_eq!(farkas(&["bench", "--m", "0"]).status.code(), Some(2));
}

#[test]
fn written_problem_files_parse_back_exactly() {
    let mut rng = seeded_rng(5);
    let dir = tempfile::tempdir().unwrap();
    for kind in [InstanceKind::Feasible, InstanceKind::Infeasible, InstanceKind::Random] {
        let p = random_instance(&mut rng, kind, 3, 6, 1.0).unwrap();
        let file = ProblemFile::from(&p);
        let path = dir.path().join(format!("{kind}.txt"));
        fs::write(&path, file.render()).unwrap();
        let back = ProblemFile::parse(&fs::read_to_string(&path).unwrap()).unwrap();
        assert_eq!(back, file);
        let out = farkas(&["decide", path_str(&path)]);
        let code = out.status.code().unwrap();
        assert!(code == 0 || code == 1, "{}", stderr(&out));
        if kind == InstanceKind::Feasible {
            assert_eq!(code, 0);
        }
        if kind == InstanceKind::Infeasible {
            assert_eq!(code, 1);
        }
    }
}

fn without_time(table: &str) -> Vec<Vec<String>> {
    table
        .lines()
        .map(|l| {
            let mut cols: Vec<String> = l.split_whitespace().map(String::from).collect();
            cols.remove(3);
            cols
        })
        .collect()
}

#[test]
fn bench_is_deterministic() {
    let args = ["bench", "--m", "20", "--n", "50", "--count", "10", "--seed", "7"];
    let a = farkas(&args);
    let b = farkas(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(without_time(&stdout(&a)), without_time(&stdout(&b)));

    let mut quiet = args.to_vec();
    quiet.push("--no-time");
    assert_eq!(stdout(&farkas(&quiet)), stdout(&farkas(&quiet)));
}

#[test]
fn bench_matches_golden_table() {
    let out = farkas(&[
        "bench", "--m", "4", "--n", "7", "--count", "6", "--seed", "7", "--routes",
        "dual,primal,both,reduced", "--no-time",
    ]);
    assert_eq!(stdout(&out), fs::read_to_string(golden("bench_seed7.txt")).unwrap());
}

fn verdicts(table: &str, route: &str) -> Vec<String> {
    table
        .lines()
        .skip(1)
        .filter(|l| l.split_whitespace().nth(2) == Some(route))
        .map(|l| l.split_whitespace().last().unwrap().to_string())
        .collect()
}

#[test]
fn bench_routes_agree_and_constructions_hold() {
    let out = farkas(&[
        "bench", "--m", "6", "--n", "12", "--count", "12", "--seed", "3", "--routes",
        "dual,primal,reduced", "--no-time",
    ]);
    let table = stdout(&out);
    let dual = verdicts(&table, "dual");
    assert_eq!(dual.len(), 12);
    assert_eq!(dual, verdicts(&table, "primal"));
    assert_eq!(dual, verdicts(&table, "reduced"));
    for (i, v) in dual.iter().enumerate() {
        assert_eq!(v, if i % 2 == 0 { "feasible" } else { "infeasible" });
    }

    let out = farkas(&[
        "bench", "--m", "5", "--n", "9", "--count", "8", "--seed", "1", "--kind", "feasible",
        "--no-time",
    ]);
    let table = stdout(&out);
    assert!(table.lines().skip(1).all(|l| l.ends_with(" feasible")));
}
