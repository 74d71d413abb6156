//! End-to-end tests of the command-line interface: output text, exit codes
//! and determinism.

use std::path::PathBuf;
use std::process::{Command, Output};

fn loopgen(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_loopgen"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).to_string()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).to_string()
}

fn fixture(name: &str, content: &str) -> PathBuf {
    let dir = std::env::temp_dir().join("loopgen-cli-tests");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, content).unwrap();
    path
}

#[test]
fn gf_six_j_prints_golden_polynomial() {
    let out = loopgen(&["gf", "@6j"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains(
        "base = 1 + A*B*F + A*C*E + B*C*D + D*E*F + A*B*D*E + A*C*D*F + B*C*E*F"
    ));
    assert!(text.contains("|Omega_0| = 8"));
}

#[test]
fn gf_nine_j_prints_golden_polynomial() {
    let out = loopgen(&["gf", "@9j"]);
    assert!(out.status.success());
    assert!(stdout(&out).contains(
        "base = 1 - A*B*D*E - A*B*G*H - A*C*D*F - A*C*G*K - B*C*E*F - B*C*H*K \
         - D*E*G*H - D*F*G*K - E*F*H*K - A*B*D*F*H*K + A*B*E*F*G*K \
         + A*C*D*E*H*K - A*C*E*F*G*H - B*C*D*E*G*K + B*C*D*F*G*H"
    ));
}

#[test]
fn gf_output_is_deterministic() {
    let a = stdout(&loopgen(&["gf", "@5j"]));
    let b = stdout(&loopgen(&["gf", "@5j"]));
    assert_eq!(a, b);
    assert!(!a.is_empty());
}

#[test]
fn symbol_trivial_and_magnetic_flags() {
    let out = loopgen(&["symbol", "@3j", "a=0", "b=0", "c=0", "--m", "0", "0", "0"]);
    assert!(out.status.success());
    assert!(stdout(&out).starts_with("1\n"));

    // parity-violating magnetic number reports a flagged zero, exit 0
    let out = loopgen(&["symbol", "@3j", "A=2,1", "B=2,0", "C=0,0"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "0 (selection rule: parity)\n");

    let out = loopgen(&["symbol", "@3j", "A=2,4", "B=2,0", "C=0,0"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "0 (selection rule: magnetic-range)\n");

    let out = loopgen(&["symbol", "@3j", "A=2,2", "B=2,0", "C=2,0"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "0 (selection rule: magnetic-sum)\n");
}

#[test]
fn symbol_six_j_matches_check_value() {
    let out = loopgen(&["symbol", "@6j", "A=2", "B=2", "C=2", "D=2", "E=2", "F=2"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.starts_with("1/6\n"), "{text}");
    assert!(text.contains("approx = 1.66666666666667e-1"));
}

#[test]
fn malformed_file_is_usage_error() {
    let path = fixture("broken.graph", "vertex v: a b c\nedge X: a ->\n");
    let out = loopgen(&["gf", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("line 2"));
}

#[test]
fn missing_file_is_usage_error() {
    let out = loopgen(&["gf", "/nonexistent/path.graph"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn unknown_alias_is_usage_error() {
    let out = loopgen(&["gf", "@42j"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn check_three_j_passes() {
    let out = loopgen(&["check", "@3j", "--max2j", "3"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.starts_with("0 mismatches / "), "{text}");
}

#[test]
fn check_file_graph_uses_contraction() {
    // the two-vertex graph from a file goes through the contraction oracle
    let path = fixture(
        "pair.graph",
        "vertex u: u.A u.B u.C\nvertex w: w.A w.D w.E\nedge A: u.A -> w.A\n\
         leg B: u.B\nleg C: u.C\nleg D: w.D\nleg E: w.E\n",
    );
    let out = loopgen(&["check", path.to_str().unwrap(), "--max2j", "1"]);
    assert!(out.status.success(), "{}", stderr(&out));
    assert!(stdout(&out).starts_with("0 mismatches / "));
}

#[test]
fn check_budget_exhaustion_exits_3() {
    let out = loopgen(&["check", "@9j", "--max2j", "1", "--budget", "1"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(stderr(&out).contains("budget"));
}

#[test]
fn glue_three_j_legs_passes() {
    let out = loopgen(&["glue", "@3j", "B", "C"]);
    assert!(out.status.success(), "{}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("edge BC: v0.B -> v0.C"));
    assert!(text.contains("equivalence: PASS (verified to total order 6)"));
}

#[test]
fn glue_five_j_cross_vertex_passes() {
    let out = loopgen(&["glue", "@5j", "C", "D", "--cap", "4"]);
    assert!(out.status.success(), "{}", stderr(&out));
    assert!(stdout(&out).contains("equivalence: PASS (verified to total order 4)"));
}

#[test]
fn glue_bad_leg_is_usage_error() {
    let out = loopgen(&["glue", "@3j", "B", "Z"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn count_five_j() {
    let out = loopgen(&["count", "@5j"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("graph: V=2 I=1 J=4"));
    assert!(text.contains("|Omega_0| = 1 (closed form 2^(I-V+1) = 1)"));
    assert!(text.contains("|Omega_{B->C}| = 1"));
}

#[test]
fn bench_emits_csv() {
    let out = loopgen(&["bench", "@6j", "--max2j", "2"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("evaluator,max2j,cases,wall_ms,terms"));
    let mut rows = 0;
    for line in lines {
        let fields: Vec<&str> = line.split(',').collect();
        assert_eq!(fields.len(), 5, "row: {line}");
        assert!(["series", "layers", "contraction"].contains(&fields[0]));
        fields[1].parse::<i32>().unwrap();
        fields[2].parse::<u64>().unwrap();
        fields[3].parse::<u128>().unwrap();
        fields[4].parse::<u64>().unwrap();
        rows += 1;
    }
    assert_eq!(rows, 6);
}

#[test]
fn usage_error_exit_code_is_1() {
    let out = loopgen(&["frobnicate"]);
    assert_eq!(out.status.code(), Some(1));
    let out = loopgen(&["check", "@3j"]);
    assert_eq!(out.status.code(), Some(1)); // missing --max2j
}
