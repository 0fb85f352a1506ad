//! End-to-end runs of the `lapent` binary.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use lapent::matrix_file;
use lapent_core::corpus::{build_exact, StateName};
use tempfile::TempDir;

fn lapent(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lapent")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn write(dir: &TempDir, name: &str, body: &str) -> PathBuf {
    let p = dir.path().join(name);
    fs::write(&p, body).unwrap();
    p
}

fn arg(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn json(o: &Output) -> serde_json::Value {
    assert_eq!(o.status.code(), Some(0), "{}", stderr(o));
    serde_json::from_str(&stdout(o)).unwrap()
}

fn criterion<'a>(v: &'a serde_json::Value, id: &str) -> &'a serde_json::Value {
    v["criteria"].as_array().unwrap().iter().find(|c| c["id"] == id).unwrap()
}

const MIXED: &str = "dims 4 2 2\n1/4 0 0 0\n0 1/4 0 0\n0 0 1/4 0\n0 0 0 1/4\n";
const PSI: &str = "# pure two-qubit state\ndims 4 2 2\n\
1/4 1/4 1/8 sqrt(7)/8\n1/4 1/4 1/8 sqrt(7)/8\n1/8 1/8 1/16 sqrt(7)/16\nsqrt(7)/8 sqrt(7)/8 sqrt(7)/16 7/16\n";

#[test]
fn validate_maximally_mixed() {
    let dir = TempDir::new().unwrap();
    let o = lapent(&["validate", arg(&write(&dir, "mixed.txt", MIXED))]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.starts_with("VALID\n"));
    assert!(out.contains("purity 0.25\n"));
    assert!(out.contains("rank 4\n"));
}

#[test]
fn validate_radical_literals() {
    let dir = TempDir::new().unwrap();
    let o = lapent(&["validate", arg(&write(&dir, "psi.txt", PSI))]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("rank 1\n"));
    assert!(stdout(&o).contains("purity 1\n"));
}

#[test]
fn validate_reports_trace_violation() {
    let dir = TempDir::new().unwrap();
    let body = "dims 4 2 2\n0.3 0 0 0\n0 0.2 0 0\n0 0 0.2 0\n0 0 0 0.2\n";
    let o = lapent(&["validate", arg(&write(&dir, "t.txt", body))]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stdout(&o).contains("TraceNotOne (0.9)"), "{}", stdout(&o));
}

#[test]
fn validate_reports_negative_spectrum() {
    let dir = TempDir::new().unwrap();
    let body = "dims 4 2 2\n1/5 0 0 0\n0 3/10 2/5 0\n0 2/5 3/10 0\n0 0 0 1/5\n";
    let o = lapent(&["validate", arg(&write(&dir, "ab.txt", body))]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stdout(&o).contains("NotPSD"));
}

#[test]
fn parse_errors_exit_1_with_location() {
    let dir = TempDir::new().unwrap();
    let body = "dims 4 2 2\n1/4 0 0 0\n0 1/4 0 0\n0 0 1/4 1/0\n0 0 0 1/4\n";
    let o = lapent(&["validate", arg(&write(&dir, "bad.txt", body))]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("line 4, column 9"), "{}", stderr(&o));
    let o = lapent(&["classify", arg(&write(&dir, "nohdr.txt", "1 0\n0 1\n"))]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn usage_errors_exit_3() {
    assert_eq!(lapent(&[]).status.code(), Some(3));
    assert_eq!(lapent(&["frobnicate"]).status.code(), Some(3));
    assert_eq!(lapent(&["classify"]).status.code(), Some(3));
    assert_eq!(lapent(&["classify", "--state", "rho9"]).status.code(), Some(3));
    assert_eq!(lapent(&["classify", "--state", "rho_ab"]).status.code(), Some(3));
    assert_eq!(lapent(&["--eps", "-1", "classify", "--state", "rho2"]).status.code(), Some(3));
    assert_eq!(lapent(&["validate", "/nonexistent/file"]).status.code(), Some(3));
    assert_eq!(lapent(&["--help"]).status.code(), Some(0));
}

#[test]
fn classify_entangled_rho_ab() {
    let v = json(&lapent(&["classify", "--state", "rho_ab", "--param", "0.25", "--json"]));
    assert_eq!(v["state_id"], "rho_ab(x=0.25)");
    assert_eq!(v["dims"]["d1"], 2);
    assert_eq!(v["oracle"]["verdict"], "NPT");
    assert_eq!(criterion(&v, "THM3_SEP_2x2")["verdict"], "ENTANGLED_NPT");
}

#[test]
fn classify_rho5() {
    let v = json(&lapent(&["classify", "--state", "rho5"]));
    let c = criterion(&v, "COR6_PPT");
    assert_eq!(c["verdict"], "SEPARABLE");
    let l = c["scalars"]["lambda_min_rho"].as_f64().unwrap();
    let h = c["scalars"]["half_max_w"].as_f64().unwrap();
    assert!((l - 0.1691).abs() < 1e-4);
    assert!((h - 0.15).abs() < 1e-12);
}

#[test]
fn classify_rho2() {
    let v = json(&lapent(&["classify", "--state", "rho2"]));
    let c = criterion(&v, "THM5_PPT");
    assert_eq!(c["verdict"], "PPT");
    assert!((c["scalars"]["lambda_min_rho"].as_f64().unwrap() - 65.0 / 648.0).abs() < 1e-12);
    assert!((c["scalars"]["spread_l_ptb"].as_f64().unwrap() - 4.0 / 81.0).abs() < 1e-12);
    assert_eq!(criterion(&v, "THM1_PURITY")["scalars"]["negative_eigenvalues"], 8);
    assert_eq!(v["consistency_flags"].as_array().unwrap().len(), 0);
}

#[test]
fn classify_output_is_byte_stable() {
    let a = lapent(&["classify", "--state", "rho6", "--param", "0.3"]);
    let b = lapent(&["classify", "--state", "rho6", "--param", "0.3"]);
    assert_eq!(a.stdout, b.stdout);
    let t = lapent(&["classify", "--state", "rho3", "--text"]);
    assert!(stdout(&t).contains("oracle  NPT"));
}

#[test]
fn classify_from_file_uses_file_stem() {
    let dir = TempDir::new().unwrap();
    let v = json(&lapent(&["classify", arg(&write(&dir, "psi.txt", PSI))]));
    assert_eq!(v["state_id"], "psi");
    assert_eq!(criterion(&v, "THM1_PURITY")["verdict"], "CONSISTENT_WITH_PURE");
}

#[test]
fn laplacian_of_rho2_is_exact() {
    let o = lapent(&["laplacian", "--state", "rho2"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.starts_with("dims 8 2 4\n2/81 0 0 0 -1/81 0 0 -1/81\n"), "{out}");
    let parsed = matrix_file::parse(&out).unwrap();
    for i in 0..8 {
        let sum = (0..8).fold(num_rational::BigRational::from_integer(0.into()), |acc, j| {
            acc + parsed.matrix.get(i, j).as_rational().unwrap()
        });
        assert_eq!(sum, num_rational::BigRational::from_integer(0.into()));
    }
}

#[test]
fn laplacian_of_diagonal_input_is_zero() {
    let dir = TempDir::new().unwrap();
    let out_path = dir.path().join("lap.txt");
    let o = lapent(&["laplacian", arg(&write(&dir, "m.txt", MIXED)), "--out", arg(&out_path)]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(fs::read_to_string(&out_path).unwrap(), "dims 4 2 2\n0 0 0 0\n0 0 0 0\n0 0 0 0\n0 0 0 0\n");
}

#[test]
fn laplacian_of_psi_matches_hand_values() {
    let out = stdout(&lapent(&["laplacian", "--state", "psi"]));
    let m = matrix_file::parse(&out).unwrap().matrix.to_matrix();
    let s7 = 7f64.sqrt();
    assert!((m.get(0, 0).re - (0.25 + 0.125 + s7 / 8.0)).abs() < 1e-11);
    assert!((m.get(0, 3).re + s7 / 8.0).abs() < 1e-11);
    assert!((m.get(2, 3).re + s7 / 16.0).abs() < 1e-11);
}

#[test]
fn graph_summaries() {
    let dir = TempDir::new().unwrap();
    let dot = dir.path().join("g.dot");
    let o = lapent(&["graph", "--state", "rho2", "--dot", arg(&dot)]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("edges 4\n") && out.contains("disconnected\n"));
    let text = fs::read_to_string(&dot).unwrap();
    assert_eq!(text.matches("[label=\"1/81\"]").count(), 4);

    let out = stdout(&lapent(&["graph", "--state", "rho3"]));
    assert!(out.contains("// edges 6\n") && out.contains("// connected\n"));
    assert!(out.contains("graph G {"));

    let out = stdout(&lapent(&["graph", "--state", "rho6", "--param", "0.5"]));
    assert!(out.contains("// edges 9\n"));
    for e in ["1 -- 2", "1 -- 9", "2 -- 5", "3 -- 4", "4 -- 8", "5 -- 6", "5 -- 9", "6 -- 7", "7 -- 8"] {
        assert!(out.contains(e), "{e}");
    }
}

#[test]
fn graph_w_convention_flag() {
    let a = stdout(&lapent(&["graph", "--state", "rho3"]));
    let b = stdout(&lapent(&["--w-convention", "set-difference", "graph", "--state", "rho3"]));
    assert!(a.contains("// max_W 1\n"));
    assert!(b.contains("// max_W 1.4\n"), "{b}");
}

fn csv_rows(text: &str) -> (Vec<String>, Vec<Vec<String>>) {
    let mut r = csv::Reader::from_reader(text.as_bytes());
    let header = r.headers().unwrap().iter().map(String::from).collect();
    let rows = r.records().map(|rec| rec.unwrap().iter().map(String::from).collect()).collect();
    (header, rows)
}

#[test]
fn sweep_rho_ab_threshold() {
    let dir = TempDir::new().unwrap();
    let path = dir.path().join("ab.csv");
    let o = lapent(&[
        "sweep", "--state", "rho_ab", "--param-name", "x", "--from", "0", "--to", "0.283", "--steps", "284", "--csv",
        arg(&path),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let (header, rows) = csv_rows(&fs::read_to_string(&path).unwrap());
    assert_eq!(rows.len(), 284);
    let col = header.iter().position(|h| h == "THM3_SEP_2x2").unwrap();
    let at = |x: &str| rows.iter().find(|r| r[0] == x).unwrap();
    assert_eq!(at("0.173")[col], "SEPARABLE");
    assert_eq!(at("0.174")[col], "ENTANGLED_NPT");
    let flips = rows
        .windows(2)
        .filter(|w| w[0][1] == "true" && w[1][1] == "true" && w[0][col] != w[1][col])
        .count();
    assert_eq!(flips, 1);
    assert_eq!(at("0.283")[1], "false");
}

#[test]
fn sweep_rho6_minimum_eigenvalue_above_half_max_w() {
    let o = lapent(&["sweep", "--state", "rho6", "--from", "0.01", "--to", "1", "--steps", "100"]);
    assert_eq!(o.status.code(), Some(0));
    let (header, rows) = csv_rows(&stdout(&o));
    assert_eq!(rows.len(), 100);
    let l = header.iter().position(|h| h == "lambda_min_rho").unwrap();
    let h = header.iter().position(|h| h == "half_max_w").unwrap();
    for r in &rows {
        assert!(r[l].parse::<f64>().unwrap() > r[h].parse::<f64>().unwrap(), "{r:?}");
    }
}

#[test]
fn sweep_two_steps_and_bad_specs() {
    let o = lapent(&["sweep", "--state", "rho6", "--from", "0.01", "--to", "1", "--steps", "2", "--columns", "d_g"]);
    let (header, rows) = csv_rows(&stdout(&o));
    assert_eq!(rows.len(), 2);
    assert_eq!(&header[..3], ["param", "valid", "d_g"]);
    assert_eq!((rows[0][0].as_str(), rows[1][0].as_str()), ("0.01", "1"));
    let bad = |args: &[&str]| lapent(args).status.code();
    assert_eq!(bad(&["sweep", "--state", "rho6", "--from", "1", "--to", "0.5", "--steps", "3"]), Some(3));
    assert_eq!(bad(&["sweep", "--state", "rho6", "--from", "0.1", "--to", "0.5", "--steps", "1"]), Some(3));
    assert_eq!(bad(&["sweep", "--state", "rho2", "--from", "0", "--to", "1", "--steps", "3"]), Some(3));
    assert_eq!(bad(&["sweep", "--state", "rho6", "--param-name", "x", "--from", "0.1", "--to", "1", "--steps", "3"]), Some(3));
    assert_eq!(bad(&["sweep", "--state", "rho6", "--from", "0", "--to", "1", "--steps", "3"]), Some(2));
}

#[test]
fn corpus_listing() {
    let out = stdout(&lapent(&["corpus", "list"]));
    assert_eq!(out.lines().count(), 7);
    assert!(out.contains("x in [0, 283/1000]"));
    assert!(out.contains("a in [1/100, 1]"));
}

#[test]
fn corpus_emit_round_trips() {
    let out = stdout(&lapent(&["corpus", "emit", "rho2"]));
    let parsed = matrix_file::parse(&out).unwrap();
    let (m, dims) = build_exact(StateName::Rho2, None).unwrap();
    assert_eq!(parsed.matrix, m);
    assert_eq!(parsed.dims, dims);
    assert!(out.contains("1/81"));

    let dir = TempDir::new().unwrap();
    let path = dir.path().join("rho6.txt");
    let o = lapent(&["corpus", "emit", "rho6", "--param", "0.5", "--out", arg(&path)]);
    assert_eq!(o.status.code(), Some(0));
    let v = lapent(&["validate", arg(&path)]);
    assert_eq!(v.status.code(), Some(0));
}

#[test]
fn corpus_emit_out_of_domain() {
    let o = lapent(&["corpus", "emit", "rho6", "--param", "2"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("outside"));
}
