use std::process::{Command, Output};

fn milnor(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_milnor"))
        .args(args)
        .env("MILNOR_WORKERS", "2")
        .output()
        .expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = milnor(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

#[test]
fn germ_polynomials() {
    assert_eq!(stdout(&["germ", "A3+s0n1"]).trim(), "x^4 + y^2");
    assert_eq!(stdout(&["germ", "D4-s1n2"]).trim(), "x^2*y - y^3 - x1^2");
    let bad = milnor(&["germ", "D3-s0n1"]);
    assert_eq!(bad.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&bad.stderr).contains("k >= 4"));
}

#[test]
fn predictions() {
    assert_eq!(stdout(&["predict", "E7s2n4"]).trim(), "1+u^1, 1+u^2");
    assert_eq!(stdout(&["predict", "D6-s1n3"]).trim(), "unresolved");
    let csv = stdout(&["predict", "--all", "--kmax", "6", "--nmax", "2"]);
    let mut lines = csv.lines();
    assert_eq!(
        lines.next().unwrap(),
        "schema_version,germ_code,n,s,beta_plus,beta_minus,status,provenance"
    );
    let rows: Vec<&str> = lines.collect();
    assert!(rows.iter().all(|r| r.starts_with("1,")));
    assert!(rows.iter().any(|r| r.starts_with("1,D6-s1n2,")));
}

#[test]
fn critical_reports() {
    assert!(stdout(&["critical", "D5+s0n1"]).contains("1 critical point(s), certified, oracle agrees"));
    assert!(stdout(&["critical", "E8s0n1"]).contains("0 critical point(s)"));
    let neg = stdout(&["critical", "A3-s0n1", "--t", "-1/2"]);
    assert!(neg.contains("t0 = -1/2") && neg.contains("index 1"), "{neg}");
    let j: serde_json::Value = serde_json::from_str(&stdout(&["critical", "E7s0n2", "-f", "json"])).unwrap();
    assert_eq!(j["schema_version"], 1);
    assert_eq!(j["indices"], serde_json::json!([1]));
    // decimals are refused to keep inputs exact
    assert_eq!(milnor(&["critical", "A3-s0n1", "--t", "-0.5"]).status.code(), Some(2));
}

#[test]
fn tables() {
    let md = stdout(&["table", "theorem", "--kmax", "7"]);
    assert!(md.contains("| A_k^+ | k odd | 3, 5, 7 | 1+u^1 | 0 |"));
    assert!(md.contains("| D_k^- | k even | 4, 6 | 3 | 3 |"));
    let csv = stdout(&["table", "corollary", "--kmax", "5", "--nmax", "4"]);
    assert!(csv.lines().any(|l| l.ends_with(",unresolved,table")));
    assert!(csv.lines().skip(1).all(|l| !l.contains("n1,")));
}

#[test]
fn verify_verdicts() {
    let plus = stdout(&["verify", "A3+s0n1", "--side", "plus"]);
    assert!(plus.starts_with("A3+s0n1 plus: match (observed 1+u^1"), "{plus}");
    let j: serde_json::Value = serde_json::from_str(&stdout(&["verify", "E7s0n1", "-f", "json"])).unwrap();
    assert_eq!(j["outcome"], "match");
    assert_eq!(j["observed_plus"], "2");
    assert_eq!(j["minus"]["stable"], true);
    let open = stdout(&["verify", "D4-s0n2", "--side", "plus", "--resolution", "48"]);
    assert!(open.contains("unresolved_explored"), "{open}");
}

#[test]
fn wrong_level_is_a_mismatch_with_exit_one() {
    // a level far above ε^deg pushes the quartic loop out of the disk
    let out = milnor(&["verify", "A3+s0n1", "--side", "plus", "--eta", "1/16", "--no-sweep"]);
    assert_eq!(out.status.code(), Some(1), "{}", String::from_utf8_lossy(&out.stdout));
    assert!(String::from_utf8_lossy(&out.stdout).contains("mismatch"));
}

#[test]
fn files_are_written() {
    let dir = tempfile::tempdir().unwrap();
    let svg = dir.path().join("a4.svg");
    let out = milnor(&["plot-svg", "A4-s0n1", "--side", "minus", "-o", svg.to_str().unwrap()]);
    assert!(out.status.success());
    let text = std::fs::read_to_string(&svg).unwrap();
    assert!(text.starts_with("<svg") && text.contains("<line"));

    let json = dir.path().join("table.json");
    let out = milnor(&["table", "all", "--kmax", "4", "--nmax", "2", "-f", "json", "-o", json.to_str().unwrap()]);
    assert!(out.status.success() && out.stdout.is_empty());
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&json).unwrap()).unwrap();
    assert_eq!(v["schema_version"], 1);
    assert!(v["rows"].as_array().unwrap().len() > 10);

    // plot-svg refuses surfaces
    assert_eq!(milnor(&["plot-svg", "A3+s0n2"]).status.code(), Some(2));
}

#[test]
fn output_is_deterministic() {
    let args = ["verify", "D5-s0n1", "-f", "csv", "--resolution", "64"];
    assert_eq!(stdout(&args), stdout(&args));
}
