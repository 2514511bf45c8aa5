use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_virasoro")).args(args).env_remove("VIRASORO_OUT_DIR").output().expect("binary runs")
}

fn json(args: &[&str]) -> (i32, Value) {
    let out = run(args);
    let v = serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stderr)));
    (out.status.code().expect("exit code"), v)
}

#[test]
fn gram_examples() {
    let (code, v) = json(&["gram", "--level", "1", "--h", "1/16", "--c", "1/2"]);
    assert_eq!(code, 0);
    assert_eq!(v["schema_version"], 1);
    assert_eq!(v["result"]["determinant"], "1/8");
    let (_, v) = json(&["gram", "--level", "0"]);
    assert_eq!(v["result"]["constant"], "1");
    let (_, v) = json(&["gram", "--level", "2", "--symbolic", "--kac", "corrected"]);
    assert_eq!(v["result"]["matches"], true);
    assert_eq!(v["result"]["constant"], "32");
    let (_, v) = json(&["gram", "--level", "2", "--symbolic", "--kac", "as-printed"]);
    assert_eq!(v["result"]["matches"], false);
}

#[test]
fn verify_exit_codes() {
    assert_eq!(run(&["verify", "sl2", "--h", "1", "--N", "10"]).status.code(), Some(0));
    assert_eq!(run(&["verify", "fock", "--tag", "FE", "--max-mode", "3", "--trunc", "8"]).status.code(), Some(0));
    let pole = run(&["verify", "sl2", "--h", "1/2", "--N", "6"]);
    assert_ne!(pole.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&pole.stderr).contains("pole"));
    assert_eq!(run(&["verify", "nope"]).status.code(), Some(2));
    assert_eq!(run(&["verify", "sl2", "--h", "0.5"]).status.code(), Some(2));
    assert_eq!(run(&["gram", "--bogus"]).status.code(), Some(2));
}

#[test]
fn scan_examples() {
    let (_, v) = json(&["scan", "--h", "1", "--c", "2", "--max-level", "5"]);
    assert_eq!(v["result"]["points"][0]["verdict"], "positive-definite");
    let (_, v) = json(&["scan", "--discrete", "p=3", "a=2", "b=1", "--max-level", "4"]);
    let p = &v["result"]["points"][0];
    assert_eq!((p["h"].as_str(), p["c"].as_str()), (Some("1/16"), Some("1/2")));
    assert_eq!(p["kernels"][0]["level"], 2);
    assert_eq!(p["kernels"][0]["dim"], 1);
    let (_, v) = json(&["scan", "--h", "-1", "--c", "2", "--max-level", "1"]);
    assert_eq!(v["result"]["points"][0]["verdict"], "indefinite");
    assert_eq!(run(&["scan", "--discrete", "p=3", "x=2", "b=1"]).status.code(), Some(2));
}

#[test]
fn nomizu_examples() {
    let (code, v) = json(&["nomizu", "--n", "2", "--h", "1", "--c", "2", "--trunc", "6"]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["dimension"], 1);
    assert_eq!(v["result"]["fiber"]["scalar"], "1");
    assert_eq!(v["result"]["fiber"]["passed"], true);
    let (code, v) = json(&["nomizu", "--n", "0", "--trunc", "4"]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["pinned_on_fiber"], true);
    let (code, v) = json(&["nomizu", "--n", "2", "--trunc", "2"]);
    assert_eq!(code, 0);
    assert!(!v["result"]["dropped"].as_array().unwrap().is_empty());
}

#[test]
fn output_is_deterministic() {
    let args = ["verify", "geometry", "--max-mode", "2", "--trunc", "5"];
    assert_eq!(run(&args).stdout, run(&args).stdout);
}

#[test]
fn formats() {
    let out = run(&["gram", "--level", "1", "--h", "1", "--c", "0", "--format", "csv"]);
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(&lines[..3], ["path,value", "schema_version,1", "command,gram"]);
    assert!(lines.contains(&"result.gram[0][0],2"));
    let out = run(&["gram", "--level", "1", "--h", "1", "--c", "0", "--format", "pretty"]);
    assert!(String::from_utf8(out.stdout).unwrap().contains("determinant: 2"));
}

#[test]
fn out_dir_from_environment() {
    let dir = std::env::temp_dir().join(format!("virasoro-cli-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_virasoro"))
        .args(["gram", "--level", "1", "--h", "1", "--c", "0"])
        .env("VIRASORO_OUT_DIR", &dir)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_str(&std::fs::read_to_string(dir.join("gram.json")).unwrap()).unwrap();
    assert_eq!(v["result"]["determinant"], "2");
    let explicit = dir.join("explicit.csv");
    let out = run(&["gram", "--level", "0", "--format", "csv", "--out", explicit.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(std::fs::read_to_string(&explicit).unwrap().starts_with("path,value"));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn seed_report_lists_recorded_deviations() {
    let (code, v) = json(&["--seed-report"]);
    assert_eq!(code, 0);
    let ids = v["result"]["identities"].as_array().unwrap();
    let printed = ids.iter().find(|e| e["relation"] == "printed Kac factors at level 2").unwrap();
    assert_eq!(printed["status"], "recorded");
    assert_eq!(printed["holds"], false);
    assert!(ids.iter().all(|e| e["status"] != "fail"));
}
