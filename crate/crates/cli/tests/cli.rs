use std::path::PathBuf;
use std::process::{Command, Output};

fn cantor(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cantor")).args(args).output().unwrap()
}

fn stdout(args: &[&str]) -> String {
    let out = cantor(args);
    assert!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn data(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "..", "data", name].iter().collect();
    p.to_str().unwrap().to_string()
}

fn records(csv: &str) -> Vec<Vec<String>> {
    csv.lines()
        .skip(1)
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect()
}

#[test]
fn iterate_two_has_four_records() {
    let out = stdout(&["iterate", "--depth", "2"]);
    let rows = records(&out);
    let bounds: Vec<(&str, &str)> = rows.iter().map(|r| (r[1].as_str(), r[2].as_str())).collect();
    assert_eq!(bounds, [("0/1", "1/9"), ("2/9", "1/3"), ("2/3", "7/9"), ("8/9", "1/1")]);
    assert!(out.starts_with("index,left,right,length\n"));
}

#[test]
fn iterate_zero_is_the_unit_interval() {
    let rows = records(&stdout(&["iterate", "--depth", "0"]));
    assert_eq!(rows, [["0", "0/1", "1/1", "1/1"]]);
}

#[test]
fn svc_four_level_one() {
    let rows = records(&stdout(&["svc", "--m", "4", "--depth", "1"]));
    let bounds: Vec<(&str, &str)> = rows.iter().map(|r| (r[1].as_str(), r[2].as_str())).collect();
    assert_eq!(bounds, [("0/1", "3/8"), ("5/8", "1/1")]);
}

#[test]
fn staircase_breakpoints_and_samples() {
    let rows = records(&stdout(&["staircase", "--depth", "1"]));
    assert_eq!(rows, [["0/1", "0/1"], ["1/3", "1/2"], ["2/3", "1/2"], ["1/1", "1/1"]]);

    let rows = records(&stdout(&["staircase", "--depth", "3"]));
    let flats = rows.windows(2).filter(|w| w[0][1] == w[1][1]).count();
    assert_eq!(flats, 7);

    let samples = records(&stdout(&["staircase", "--grid", "27"]));
    assert_eq!(samples.len(), 28);
    let values: Vec<cantor_core::Rational> = samples
        .iter()
        .map(|r| cantor_core::parse_rational(&r[1]).unwrap())
        .collect();
    assert!(values.windows(2).all(|w| w[0] <= w[1]));
}

#[test]
fn curve_samples() {
    let rows = records(&stdout(&["curve2", "--depth", "1"]));
    assert_eq!(rows.len(), 4);
    assert_eq!(rows[1], ["1/3", "true", "1/2", "1/1"]);
    let rows = records(&stdout(&["curve2", "--depth", "0"]));
    assert_eq!(rows, [["0/1", "true", "0/1", "0/1"], ["1/1", "true", "1/1", "1/1"]]);
    let out = stdout(&["curve3", "--depth", "1"]);
    assert!(out.starts_with("parameter,on_cantor,x,y,z\n"));
    assert!(records(&out).iter().all(|r| r.len() == 5));
    let svg = stdout(&["curve2", "--depth", "2", "--format", "svg"]);
    assert!(svg.starts_with("<svg") && svg.contains("<polyline"));
    assert!(!cantor(&["curve3", "--depth", "1", "--format", "svg"]).status.success());
}

#[test]
fn member_reports_gap() {
    let rows = records(&stdout(&["member", "--x", "1/2"]));
    assert_eq!(rows[0][2..], ["false", "1", "1/3", "2/3"]);
    let rows = records(&stdout(&["member", "--x", "1/4"]));
    assert_eq!(rows[0][2], "true");
}

#[test]
fn decimals_are_labeled() {
    let out = stdout(&["member", "--x", "1/3", "--decimals"]);
    assert!(out.lines().next().unwrap().contains("x_rounded"));
}

#[test]
fn quotient_ratios() {
    let rows = records(&stdout(&["quotient", "--depth", "4"]));
    assert!(rows[1..].iter().all(|r| r[3] == "9/4"));
}

#[test]
fn preimage_round_trip() {
    let rows = records(&stdout(&["preimage", "--point", "1/3,1/5,7/8"]));
    assert_eq!(rows[0].last().unwrap(), "true");
}

#[test]
fn hausdorff_traces() {
    let rows = records(&stdout(&[
        "hausdorff",
        "--input",
        &data("singleton.txt"),
        "--x",
        "2/3",
        "--x",
        "1/4",
    ]));
    assert!(rows.iter().all(|r| r[4..] == ["1/3", "2/7"]));

    let rows = records(&stdout(&[
        "hausdorff",
        "--input",
        &data("two_points.txt"),
        "--depth",
        "2",
    ]));
    let reached: std::collections::BTreeSet<_> = rows.iter().map(|r| r[4..].to_vec()).collect();
    assert_eq!(reached.len(), 2);

    let a = stdout(&[
        "hausdorff",
        "--input",
        &data("unit_square.txt"),
        "--x",
        "0",
        "--format",
        "json",
    ]);
    let doc: serde_json::Value = serde_json::from_str(&a).unwrap();
    assert_eq!(doc["traces"][0]["point"], serde_json::json!(["0/1", "0/1"]));
    assert_eq!(doc["block_widths"], serde_json::json!([0, 2, 2]));
}

#[test]
fn hausdorff_errors() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.txt");
    std::fs::write(&bad, "dimension 2\n# fine\nbox 0 0 1 x\n").unwrap();
    let out = cantor(&["hausdorff", "--input", bad.to_str().unwrap()]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 3"));

    let empty = dir.path().join("empty.txt");
    std::fs::write(&empty, "dimension 2\n").unwrap();
    let out = cantor(&["hausdorff", "--input", empty.to_str().unwrap()]);
    assert!(String::from_utf8_lossy(&out.stderr).contains("nonempty"));

    let out = cantor(&["hausdorff", "--input", &data("unit_square.txt"), "--x", "1/2"]);
    assert!(!out.status.success());
}

#[test]
fn verify_exit_codes() {
    let out = cantor(&["verify", "--select", "measure,quotient-growth"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("PASS measure"));
    assert!(text.contains("9/4") && text.contains("9/2"));

    let out = cantor(&["verify", "--select", "no-such-suite"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("unknown suite"));
}

#[test]
fn out_flag_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("c3.svg");
    let out = cantor(&[
        "iterate",
        "--depth",
        "3",
        "--format",
        "svg",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let svg = std::fs::read_to_string(&path).unwrap();
    assert_eq!(svg.matches("<rect").count(), 1 + 2 + 4 + 8);

    let missing = dir.path().join("no/such/dir/out.csv");
    let out = cantor(&["iterate", "--out", missing.to_str().unwrap()]);
    assert!(String::from_utf8_lossy(&out.stderr).contains("no/such/dir"));
}

#[test]
fn negative_depth_is_a_usage_error() {
    assert_eq!(cantor(&["iterate", "--depth", "-1"]).status.code(), Some(2));
    assert!(!cantor(&["iterate", "--depth", "21"]).status.success());
}
