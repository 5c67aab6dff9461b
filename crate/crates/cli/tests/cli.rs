use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_shiftvar"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let out = run(args);
    assert!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("valid JSON")
}

#[test]
fn family_reports_example_delta() {
    let v = json(&[
        "family",
        "--kind",
        "parallel-hyperplanes",
        "--d",
        "2",
        "--n",
        "2",
        "--p",
        "7",
        "--h",
        "1",
    ]);
    assert_eq!(v["delta"], 98);
    assert_eq!(v["countSumset"], 28);
    assert_eq!(v["predictionMatch"], true);
    assert_eq!(v["spec"]["predictions"]["delta"], 98);
}

#[test]
fn kernel_dimension() {
    let v = json(&[
        "kernel",
        "--p",
        "7",
        "--n",
        "3",
        "--poly",
        "x1 + 2*x2 + 3*x3",
    ]);
    assert_eq!(v["dim"], 2);
    assert_eq!(v["basis"].as_array().unwrap().len(), 2);
}

#[test]
fn reduce_finds_certificate() {
    let v = json(&["reduce", "--a", "3,5,8"]);
    assert_eq!(v["u"], serde_json::json!([1, 1, -1]));
    assert_eq!(v["S"], serde_json::json!([1, 2]));
    assert_eq!(v["T"], serde_json::json!([3]));
    let none = json(&["reduce", "--a", "1,2,4"]);
    assert!(none["u"].is_null() && none["S"].is_null());
}

#[test]
fn same_seed_gives_identical_output() {
    let args = ["reduce", "--a", "4,9,13,21", "--seed", "99"];
    assert_eq!(run(&args).stdout, run(&args).stdout);
    let sweep = [
        "sweep",
        "--kind",
        "parallel-hyperplanes",
        "--d",
        "1,2",
        "--p",
        "7,11",
        "--h",
        "1,2",
        "--out",
        "csv",
    ];
    assert_eq!(run(&sweep).stdout, run(&sweep).stdout);
}

#[test]
fn normalize_and_delta() {
    let v = json(&["normalize", "--p", "5", "--n", "2", "--poly", "x1 - x2"]);
    assert_eq!(v["m"], 1);
    let d = json(&["delta", "--p", "7", "--n", "2", "--h", "1", "--poly", "x1"]);
    assert_eq!(d["delta"], 42);
}

#[test]
fn sweep_csv_layout() {
    let out = run(&[
        "sweep",
        "--kind",
        "parallel-hyperplanes",
        "--d",
        "2",
        "--n",
        "2",
        "--p",
        "7,11,13",
        "--h",
        "1,2",
        "--out",
        "csv",
    ]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("# shiftvar neighborhood-report v1"));
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    assert_eq!(
        &header[..8],
        [
            "family",
            "p",
            "n",
            "h",
            "countX",
            "countU",
            "countSumset",
            "delta"
        ]
    );
    let rows: Vec<Vec<&str>> = lines
        .filter(|l| !l.starts_with('#'))
        .map(|l| l.split(',').collect())
        .collect();
    // h = 2 at p = 7 is still a valid ball; all six cells report
    assert_eq!(rows.len(), 6);
    for row in rows {
        assert_eq!(row.len(), header.len());
        let p: u64 = row[1].parse().unwrap();
        let h: u64 = row[3].parse().unwrap();
        let delta: u64 = row[7].parse().unwrap();
        if p > 2 + 2 * h {
            assert_eq!(delta, p * (2 * (2 * h + 1).pow(2) - (2 + 2 * h)));
        }
        assert!(!row.contains(&"fail"));
    }
}

#[test]
fn bounds_from_file() {
    let dir = std::env::temp_dir().join(format!("shiftvar-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("graph.json");
    std::fs::write(&path, r#"{"p": 7, "n": 2, "polys": ["x2 - x1^2"], "metadata": {"r": 1, "d": 2, "sigma": 1, "bigD": 2}}"#)
        .unwrap();
    let v = json(&["bounds", "--polys-file", path.to_str().unwrap(), "--h", "1"]);
    assert_eq!(v["shiftFree"], true);
    let thm = v["bounds"]
        .as_array()
        .unwrap()
        .iter()
        .find(|b| b["name"] == "deficiency_upper")
        .unwrap()
        .clone();
    assert_eq!(thm["rhs"], 864);
    assert_eq!(thm["holds"], true);

    let out_file = dir.join("report.csv");
    let out = run(&[
        "bounds",
        "--polys-file",
        path.to_str().unwrap(),
        "--out",
        "csv",
        "--out-file",
        out_file.to_str().unwrap(),
    ]);
    assert!(out.status.success() && out.stdout.is_empty());
    assert!(std::fs::read_to_string(&out_file)
        .unwrap()
        .starts_with("# shiftvar neighborhood-report v1\n"));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn exit_codes() {
    assert_eq!(
        run(&["kernel", "--p", "4", "--n", "1", "--poly", "x1"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(
        run(&["kernel", "--p", "7", "--n", "1", "--poly", "2x1"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(
        run(&["bounds", "--p", "7", "--n", "1", "--poly", "x1"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(run(&["frobnicate"]).status.code(), Some(1));
    let over = run(&["delta", "--p", "101", "--n", "4", "--poly", "x1*x4 - x2*x3"]);
    assert_eq!(over.status.code(), Some(2));
    let err: Value = serde_json::from_slice(&over.stderr).unwrap();
    assert_eq!(err["error"], "BudgetExceeded");
    assert_eq!(
        run(&["delta", "--p", "7", "--n", "2", "--poly", "x1", "--budget", "10"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn other_families() {
    let v = json(&[
        "family", "--kind", "graph", "--n", "2", "--p", "7", "--poly", "x1^2",
    ]);
    assert_eq!(v["countX"], 7);
    assert_eq!(v["predictionMatch"], true);
    let v = json(&[
        "family",
        "--kind",
        "determinantal",
        "--m",
        "2",
        "--n",
        "2",
        "--s",
        "1",
        "--p",
        "7",
    ]);
    assert_eq!(v["countX"], 7 * 7 * 7 + 7 * 7 - 7);
    let v = json(&["family", "--kind", "discriminant", "--n", "2", "--p", "7"]);
    assert_eq!(v["spec"]["predictions"]["kernelDim"], 0);
    let v = json(&[
        "family",
        "--kind",
        "resultant",
        "--n",
        "1",
        "--m",
        "1",
        "--p",
        "7",
    ]);
    assert_eq!(v["spec"]["polys"][0], "-x1*x4 + x2*x3");
    let v = json(&[
        "family",
        "--kind",
        "decomposable-sample",
        "--ell",
        "2",
        "--m",
        "2",
        "--p",
        "11",
        "--count",
        "5",
    ]);
    assert_eq!(v["points"].as_array().unwrap().len(), 5);
}
