use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tanner-lo"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn fixture() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/tests/fixtures/mackay_96.3.963.alist")
}

fn gen_graph(dir: &Path, n: &str) -> PathBuf {
    let out = dir.join(format!("g{n}"));
    let o = run(&["graph", "gen", "--n", n, "--seed", "4", "--out", out.to_str().unwrap()]);
    assert!(o.status.success(), "{}", stderr(&o));
    out.join("graph.alist")
}

#[test]
fn graph_gen_writes_alist_and_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let path = gen_graph(dir.path(), "60");
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.starts_with("60 30"));
    let manifest = std::fs::read_to_string(path.parent().unwrap().join("manifest.json")).unwrap();
    let m: serde_json::Value = serde_json::from_str(&manifest).unwrap();
    assert_eq!(m["config"]["common"]["seed"], 4);
    assert_eq!(m["outputs"][0], "graph.alist");
    assert_eq!(m["violation"], false);
}

#[test]
fn graph_info_reports_structure() {
    let o = run(&["graph", "info", "--graph", fixture().to_str().unwrap()]);
    assert!(o.status.success());
    let info: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(info["variables"], 96);
    assert_eq!(info["girth"], 6);
    assert!(stderr(&o).starts_with("config: "));
}

#[test]
fn certify_prints_record() {
    let g = fixture();
    let o = run(&[
        "certify", "--graph", g.to_str().unwrap(), "--codeword", "zero", "--channel", "bsc:0.04",
        "--trial", "0", "--h", "32", "--w", "unit", "--d", "2", "--strong",
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let out = stdout(&o);
    let mut lines = out.lines();
    assert_eq!(lines.next().unwrap(), "kind,h,d,reduced,decision,min_cost,witness_root");
    let record = lines.next().unwrap();
    assert!(record.starts_with("StrongLO,32,2,true,"));
}

#[test]
fn certify_from_sampled_file_matches_channel() {
    let dir = tempfile::tempdir().unwrap();
    let g = fixture();
    let g = g.to_str().unwrap();
    let out = dir.path().join("s");
    let o = run(&["sample", "--graph", g, "--channel", "bsc:0.08", "--trials", "3", "--seed", "9", "--out", out.to_str().unwrap()]);
    assert!(o.status.success(), "{}", stderr(&o));
    let llr = out.join("llr.csv");
    let base = ["certify", "--graph", g, "--trial", "2", "--h", "4", "--w", "1,2,3,4", "--d", "3", "--exact"];
    let from_file = run(&[&base[..], &["--llr", llr.to_str().unwrap()]].concat());
    let sampled = run(&[&base[..], &["--channel", "bsc:0.08", "--seed", "9"]].concat());
    assert!(from_file.status.success(), "{}", stderr(&from_file));
    assert_eq!(stdout(&from_file), stdout(&sampled));
}

#[test]
fn certify_with_extension_factors() {
    let g = fixture();
    let o = run(&[
        "certify", "--graph", g.to_str().unwrap(), "--h", "2", "--w", "geometric:1/2", "--alpha", "1,1/4",
        "--channel", "bsc:0.01",
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(stdout(&o).contains("LO,4,2,false,"));
}

#[test]
fn oracle_runs_clean() {
    let o = run(&["oracle", "--graphs", "4", "--max-n", "8", "--max-h", "2", "--llrs", "10"]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(stdout(&o).contains("mismatches=0"));
}

#[test]
fn hierarchy_checks() {
    let dir = tempfile::tempdir().unwrap();
    let g = gen_graph(dir.path(), "60");
    let g = g.to_str().unwrap();
    let o = run(&["hierarchy", "--graph", g, "--check", "degree", "--trials", "50", "--h", "3"]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(stdout(&o).contains("degree-hierarchy: 50 instances"));
    let out = dir.path().join("h");
    let o = run(&[
        "hierarchy", "--graph", g, "--check", "height", "--trials", "30", "--h", "2", "--alpha", "1,1",
        "--channel", "bsc:0.01", "--out", out.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(out.join("summary.csv").exists() && out.join("violations.csv").exists());
    // ML sufficiency is refused above d*.
    let o = run(&["hierarchy", "--graph", g, "--check", "ml", "--d", "3", "--trials", "5"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn experiment_csv_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let g = gen_graph(dir.path(), "120");
    let g = g.to_str().unwrap();
    let args = ["experiment", "--graph", g, "--p", "0.03,0.06", "--trials", "40", "--h", "2,4,8", "--seed", "1"];
    let a = run(&args);
    let b = run(&args);
    assert!(a.status.success(), "{}", stderr(&a));
    assert_eq!(stdout(&a), stdout(&b));
    let out = stdout(&a);
    let mut lines = out.lines();
    assert_eq!(lines.next().unwrap(), "p,h,trials,lo_count,nlo_count,marginal_count,wall_time_s");
    assert_eq!(lines.count(), 6);
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(run(&["certify", "--bogus"]).status.code(), Some(2));
    assert_eq!(run(&["nonsense"]).status.code(), Some(2));
    let o = run(&["graph", "info", "--graph", "/nonexistent.alist"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("error:"));
}
