use std::fs;
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_thue-family"));
    c.env_remove("THUE_FAMILY_THREADS");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn jsonl(o: &Output) -> Vec<Value> {
    stdout(o).lines().map(|l| serde_json::from_str(l).expect("one json object per line")).collect()
}

#[test]
fn eval_table_row() {
    let o = run(&["eval", "--n", "4", "--a", "2", "--x", "3", "--y", "2"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(jsonl(&o)[0]["value"], "1");
    let o = run(&["eval", "--n", "4", "--a", "2", "--x", "-3", "--y", "-2"]);
    assert_eq!(jsonl(&o)[0]["value"], "-1");
}

#[test]
fn coeffs_n0_a5() {
    let o = run(&["coeffs", "--n", "0", "--a", "5"]);
    let v = &jsonl(&o)[0];
    assert_eq!((v["u"].as_str(), v["v"].as_str()), (Some("-16"), Some("57")));
}

#[test]
fn big_coefficients_are_strings() {
    let o = run(&["coeffs", "--n", "1000", "--a", "40"]);
    let v = &jsonl(&o)[0];
    assert!(v["u"].as_str().unwrap().len() > 100);
    assert!(v["n"].is_i64());
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(run(&["eval", "--n", "1", "--a", "1", "--x", "1", "--y", "1", "--bogus"]).status.code(), Some(2));
    assert_eq!(run(&["eval", "--n", "1", "--a", "1", "--x", "1"]).status.code(), Some(2));
    assert_eq!(run(&["eval", "--n", "1", "--a", "0", "--x", "1", "--y", "1"]).status.code(), Some(2));
    assert_eq!(run(&["coeffs", "--n", "1", "--a", "1", "--format", "xml"]).status.code(), Some(2));
    assert_eq!(run(&["verify", "--suite", "everything"]).status.code(), Some(2));
    assert_eq!(run(&["roots", "--n", "3", "--prec", "8"]).status.code(), Some(2));
}

#[test]
fn degenerate_flag() {
    let o = run(&["eval", "--n", "1", "--a", "0", "--x", "3", "--y", "1", "--degenerate"]);
    assert_eq!(jsonl(&o)[0]["value"], "8");
}

#[test]
fn roots_brackets_n1() {
    let o = run(&["roots", "--n", "1", "--prec", "200"]);
    assert_eq!(o.status.code(), Some(0));
    let v = &jsonl(&o)[0];
    assert_eq!(v["prec"], 200);
    assert!(v["lambda0"]["lo"].as_str().unwrap().starts_with("1.87938524"));
    let checks = v["bounds"].as_array().unwrap();
    assert!(checks.iter().filter(|c| c["asserted"] == true).all(|c| c["holds"] == true));
}

#[test]
fn csv_columns_match_jsonl_keys() {
    let args = ["search", "--n-min", "0", "--n-max", "2", "--a-min", "1", "--a-max", "3", "--y-max", "30"];
    let j = jsonl(&run(&args));
    let mut csv_args = args.to_vec();
    csv_args.extend(["--format", "csv"]);
    let c = stdout(&run(&csv_args));
    let mut lines = c.lines();
    assert_eq!(lines.next(), Some("n,a,x,y,value,class"));
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), j.len());
    for (row, v) in rows.iter().zip(&j) {
        let want = format!(
            "{},{},{},{},{},{}",
            v["n"],
            v["a"],
            v["x"].as_str().unwrap(),
            v["y"].as_str().unwrap(),
            v["value"].as_str().unwrap(),
            v["class"].as_str().unwrap()
        );
        assert_eq!(*row, want);
    }
    let keys: Vec<&String> = j[0].as_object().unwrap().keys().collect();
    assert_eq!(keys, ["n", "a", "x", "y", "value", "class"]);
}

#[test]
fn output_independent_of_threads() {
    let args = ["search", "--n-max", "3", "--a-min", "1", "--a-max", "6", "--y-max", "60", "--m", "5"];
    let one = bin().args(args).env("THUE_FAMILY_THREADS", "1").output().unwrap();
    let four = run(&[&args[..], &["--threads", "4"]].concat());
    assert_eq!(one.status.code(), Some(0));
    assert_eq!(one.stdout, four.stdout);
    assert!(!one.stdout.is_empty());
}

#[test]
fn config_file_and_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("sweep.conf");
    fs::write(&cfg, "# small sweep\nn_min = 1\nn-max = 1\na-min = 2\na_max = 2\ny-max = 10\nformat = csv\n").unwrap();
    let cfg = cfg.to_str().unwrap();
    let o = run(&["search", "--config", cfg]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    assert!(s.starts_with("n,a,x,y,value,class\n"));
    assert!(s.lines().skip(1).all(|l| l.starts_with("1,2,")));
    let o = run(&["search", "--config", cfg, "--n-min", "0", "--n-max", "0", "--format", "jsonl"]);
    assert!(jsonl(&o).iter().all(|v| v["n"] == 0 && v["a"] == 2));

    let bad = dir.path().join("bad.conf");
    fs::write(&bad, "colour = blue\n").unwrap();
    assert_eq!(run(&["search", "--config", bad.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn out_flag_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("c.jsonl");
    let o = run(&["coeffs", "--n", "2", "--a", "3", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let text = fs::read_to_string(out).unwrap();
    let v: Value = serde_json::from_str(text.trim()).unwrap();
    assert_eq!(v["a"], 3);
}

#[test]
fn checkpoint_resume_matches_uninterrupted() {
    let dir = tempfile::tempdir().unwrap();
    let ck = dir.path().join("run.ckpt");
    let ck_s = ck.to_str().unwrap();
    let args = ["search", "--n-max", "4", "--a-min", "1", "--a-max", "8", "--y-max", "80", "--m", "3"];
    let plain = run(&args);
    let first = run(&[&args[..], &["--checkpoint", ck_s]].concat());
    assert_eq!(plain.stdout, first.stdout);

    // interrupt: keep the header and a few cells, then half a line
    let text = fs::read_to_string(&ck).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 1 + 5 * 8 + 1);
    let mut cut = lines[..7].join("\n");
    cut.push('\n');
    cut.push_str(&lines[7][..lines[7].len() / 2]);
    fs::write(&ck, cut).unwrap();

    let resumed = run(&[&args[..], &["--checkpoint", ck_s]].concat());
    assert_eq!(resumed.status.code(), Some(0));
    assert_eq!(plain.stdout, resumed.stdout);
    let text = fs::read_to_string(&ck).unwrap();
    assert!(text.lines().last().unwrap().contains("\"summary\""));

    // a checkpoint from another sweep is refused
    let other = run(&["search", "--n-max", "2", "--checkpoint", ck_s]);
    assert_eq!(other.status.code(), Some(2));
}

#[test]
fn table_slice_and_diff_exit() {
    let o = run(&["table", "--n-min", "0", "--n-max", "1", "--a-min", "2", "--a-max", "3", "--y-max", "200"]);
    assert_eq!(o.status.code(), Some(0));
    let rows = jsonl(&o);
    assert!(rows.iter().all(|r| r["status"] == "match"));
    assert!(rows.iter().any(|r| r["n"] == 0 && r["a"] == 2 && r["x"] == "-14" && r["y"] == "-9"));

    // too small a y range misses tabulated rows
    let o = run(&["table", "--n-min", "0", "--n-max", "0", "--a-min", "2", "--a-max", "2", "--y-max", "4"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(jsonl(&o).iter().any(|r| r["status"] == "missing"));
}

#[test]
fn default_table_reproduces() {
    let o = run(&["table"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let rows = jsonl(&o);
    assert_eq!(rows.iter().filter(|r| r["status"] == "match").count(), 27);
    assert!(rows.iter().all(|r| r["status"] == "match"));
}

#[test]
fn witness_lines() {
    let o = run(&["witness", "--n", "3", "--a", "4", "--count", "4"]);
    let w = jsonl(&o);
    assert_eq!(w.len(), 4);
    let ys: Vec<u64> = w.iter().map(|v| v["y"].as_str().unwrap().parse().unwrap()).collect();
    assert!(ys.windows(2).all(|p| p[0] < p[1]));
}

#[test]
fn decompose_and_siegel() {
    let o = run(&["decompose", "--n", "0", "--a", "2", "--x", "-14", "--y", "-9", "--diagnostics"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let v = &jsonl(&o)[0];
    let c = &v["decomposition"]["delta"]["c"];
    assert!(c[1] == "0" && c[2] == "0" && (c[0] == "1" || c[0] == "-1"));
    assert!(v["diagnostics"]["rhs_holds"].is_boolean());

    let o = run(&["siegel", "--n", "7", "--a", "3", "--x", "-40", "--y", "11"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(jsonl(&o)[0]["zero"], true);
    assert_eq!(run(&["siegel", "--n", "7", "--a", "0", "--x", "1", "--y", "1"]).status.code(), Some(2));
}

#[test]
fn verify_suites() {
    let o = run(&["verify", "--suite", "diagonal", "--n-max", "8", "--a-max", "8", "--x-max", "6"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(jsonl(&o)[0]["matches"], true);
    let o = run(&["verify", "--suite", "pm-one", "--n-max", "20", "--a-max", "20"]);
    assert_eq!(o.status.code(), Some(0));

    // the published exception list for v_a > 2 v_{a-1} omits n = 2, 3, 4 at a = 1
    let o = run(&["verify", "--suite", "recurrence", "--n-max", "10", "--a-max", "10"]);
    assert_eq!(o.status.code(), Some(3));
    let v = &jsonl(&o)[0];
    let parts = v["report"]["parts"].as_array().unwrap();
    let iv = parts.iter().find(|p| p["part"] == "iv").unwrap();
    assert_eq!(iv["unexpected"], serde_json::json!([[2, 1], [3, 1], [4, 1]]));
    assert!(parts.iter().filter(|p| p["part"] != "iv").all(|p| p["unexpected"].as_array().unwrap().is_empty()));
}
