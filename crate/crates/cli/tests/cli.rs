use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn ladder(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ladder")).args(args).output().expect("ladder runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_owned()
}

fn dump(dir: &Path, kind: &str, param: &str) -> String {
    let param_path = write(dir, "param.json", param);
    let oracle_path = dir.join(format!("{kind}.txt")).to_str().unwrap().to_owned();
    let out = ladder(&["dump-oracle", "--kind", kind, "--param-file", &param_path, "--out", &oracle_path]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    oracle_path
}

#[test]
fn decode_tree_chain() {
    let dir = tempfile::tempdir().unwrap();
    let chain = r#"{"n":4,"root":0,"parent":{"1":0,"2":1,"3":2}}"#;
    let oracle = dump(dir.path(), "int1", chain);
    let out = ladder(&["decode", "--kind", "tree", &oracle]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), format!("{chain}\n"));
}

#[test]
fn decode_empty_graph() {
    let dir = tempfile::tempdir().unwrap();
    let oracle = dump(dir.path(), "int1", r#"{"m":2,"edges":[]}"#);
    let out = ladder(&["decode", "--kind", "graph", &oracle]);
    assert_eq!(stdout(&out), "{\"m\":2,\"edges\":[]}\n");
}

#[test]
fn decode_xor_string() {
    let dir = tempfile::tempdir().unwrap();
    let oracle = dump(dir.path(), "cf1", r#"{"m":4,"bits":"1010"}"#);
    let out = ladder(&["decode", "--kind", "xor", &oracle]);
    assert_eq!(stdout(&out), "{\"m\":4,\"bits\":\"1010\"}\n");
}

#[test]
fn decode_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let oracle = dump(dir.path(), "int1", r#"{"m":2,"bits":"10"}"#);
    let out = ladder(&["decode", "--kind", "tree", &oracle]);
    assert_eq!(out.status.code(), Some(2));
    let out = ladder(&["decode", "--kind", "xor", &oracle]);
    assert_eq!(out.status.code(), Some(2));
    let bad = write(dir.path(), "bad.txt", "INT1 n=1\n#obs\n1=1/2\n0=1/2\n");
    assert_eq!(ladder(&["decode", "--kind", "tree", &bad]).status.code(), Some(2));
    assert_eq!(ladder(&["decode", "--kind", "tree", "/nonexistent/oracle"]).status.code(), Some(2));
}

#[test]
fn caps_exit_3_and_env_override() {
    assert_eq!(ladder(&["verify", "--family", "tree", "--n", "8"]).status.code(), Some(3));
    assert_eq!(ladder(&["verify", "--family", "bipartite", "--m", "2", "--graph-cap", "1"]).status.code(), Some(3));
    let out = Command::new(env!("CARGO_BIN_EXE_ladder"))
        .args(["verify", "--family", "tree", "--n", "3"])
        .env("LADDER_TREE_CAP", "2")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn bad_arguments_are_rejected() {
    assert_eq!(ladder(&["verify", "--family", "tree", "--m", "3"]).status.code(), Some(2));
    assert_eq!(ladder(&["nfl", "--m", "2", "--seed", "1", "--learner", "oracle"]).status.code(), Some(2));
    assert!(!ladder(&["nfl", "--m", "2"]).status.success(), "seed is required");
    assert_eq!(ladder(&["sep", "--m", "1", "--epsilon", "x"]).status.code(), Some(2));
}

#[test]
fn verify_reports_counts() {
    let out = ladder(&["verify", "--family", "tree", "--n", "4", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.starts_with("family,size,check,passed,detail\n"));
    assert!(text.contains("64/64 round-trips"));
    assert!(!text.contains(",false,"));
}

#[test]
fn gaps_rows() {
    let out = ladder(&["gaps", "--family", "xor", "--m", "4", "--format", "csv"]);
    assert_eq!(
        stdout(&out),
        "family,size_param,n,lower_kind,higher_kind,ambiguity_count,log2_ambiguity,encoder_bits,entropy_bits,min_pairwise_d_int\n\
         xor,4,8,INT_ALL,CF1,16,4.0,4,4.0,\n"
    );
    let out = ladder(&["gaps", "--family", "tree", "--n", "4"]);
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["status"], "pass");
    assert_eq!(report["result"]["row"]["ambiguity_count"], 64);
    assert_eq!(report["caps"]["tree_n"], 7);
}

#[test]
fn sep_thresholds() {
    let at = |eps: &str| {
        let out = ladder(&["sep", "--m", "2", "--epsilon", eps]);
        let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
        (v["result"]["min_pairwise_d_int"].as_str().unwrap().to_owned(), v["result"]["disjoint"].as_bool().unwrap())
    };
    assert_eq!(at("1/5"), ("1/2".into(), true));
    assert_eq!(at("1/4"), ("1/2".into(), false));
}

#[test]
fn nfl_report_fields() {
    let out = ladder(&["nfl", "--m", "2", "--n-samples", "5", "--trials", "500", "--seed", "42", "--mode", "mc"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["result"]["bound_all_learners"], "1/16");
    assert_eq!(v["result"]["measured"]["learner_id"], "uniform-guess");
    assert_eq!(v["result"]["measured"]["seed"], 42);
    assert!(v["result"]["measured"]["prng"].as_str().unwrap().starts_with("chacha8"));
    assert_eq!(v["version"], env!("CARGO_PKG_VERSION"));
}

#[test]
fn out_file_matches_stdout() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let args = ["sep", "--m", "1", "--epsilon", "1/5"];
    let direct = ladder(&args).stdout;
    let mut with_out = args.to_vec();
    with_out.extend(["--out", path.to_str().unwrap()]);
    assert!(ladder(&with_out).status.success());
    assert_eq!(fs::read(&path).unwrap(), direct);
}

#[test]
fn dump_scm_then_oracle_from_scm() {
    let dir = tempfile::tempdir().unwrap();
    let param = write(dir.path(), "g.json", r#"{"m":1,"edges":[[0,0]]}"#);
    let scm = ladder(&["dump-scm", "--param-file", &param]);
    let scm_path = write(dir.path(), "scm.json", &stdout(&scm));
    let via_scm = ladder(&["dump-oracle", "--kind", "obs", "--scm-file", &scm_path]);
    let via_param = ladder(&["dump-oracle", "--kind", "obs", "--param-file", &param]);
    assert_eq!(via_scm.stdout, via_param.stdout);
    assert_eq!(stdout(&via_scm), "OBS n=3\n#obs\n000=1/2\n111=1/2\n");
}
