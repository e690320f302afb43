use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn klocal(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_klocal"))
        .args(args)
        .env_remove("KLOCAL_DATA_DIR")
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn scratch(name: &str) -> PathBuf {
    let dir = Path::new(env!("CARGO_TARGET_TMPDIR")).join(name);
    let _ = std::fs::remove_dir_all(&dir);
    dir
}

fn shipped_data() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/data")
}

#[test]
fn cohomology_examples() {
    let o = klocal(&["cohomology", "--group", "units", "-p", "3", "--coeff", "Zp(2)", "-s", "1", "--oracle"]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert_eq!(out.lines().next(), Some("Z/3"));
    assert!(out.contains("agrees"));
    let o = klocal(&["cohomology", "--group", "cyclic", "-m", "2", "--coeff", "Z/2", "-s", "7"]);
    assert_eq!(stdout(&o).trim(), "Z/2");
    let o = klocal(&["cohomology", "--group", "procyclic", "-p", "2", "--coeff", "Zp(0)", "-s", "2"]);
    assert_eq!(stdout(&o).trim(), "0");
    let o = klocal(&["cohomology", "-p", "5", "--coeff", "Z/25(3)", "-s", "1", "--oracle", "--json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["oracle"]["agrees"], true);
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(klocal(&["cohomology", "--coeff", "Zq", "-s", "1"]).status.code(), Some(2));
    assert_eq!(klocal(&["cohomology", "-p", "4", "--coeff", "Zp(0)", "-s", "1"]).status.code(), Some(2));
    assert_eq!(klocal(&["ass", "-p", "3", "--window", "1-2"]).status.code(), Some(2));
    assert_eq!(klocal(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn odd_descent_chart() {
    let dir = scratch("ass3");
    let o = klocal(&["ass", "-p", "3", "--window", "-6:12", "--s-max", "3", "-o", dir.to_str().unwrap()]);
    assert!(o.status.success());
    let svg = std::fs::read_to_string(dir.join("einf.svg")).unwrap();
    // Z_3 at (0,0) and (1,0); labelled circles at stems -5, 3, 7 and 11
    assert_eq!(svg.matches("<rect").count(), 2);
    assert_eq!(svg.matches("<circle").count(), 4);
    let page: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(dir.join("einf.json")).unwrap()).unwrap();
    assert_eq!(page["r"], 2);
    let run: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(dir.join("run.json")).unwrap()).unwrap();
    assert_eq!(run["certified"], true);
}

#[test]
fn picard_chart_has_d3_arrows() {
    let dir = scratch("pic2");
    let o = klocal(&["picard", "-p", "2", "--window", "-4:8", "--s-max", "8", "-o", dir.to_str().unwrap()]);
    assert!(o.status.success());
    let e3: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(dir.join("e3.json")).unwrap()).unwrap();
    let froms: Vec<(i64, i64)> = e3["diffs"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|d| !d["rank_data"].as_array().unwrap().is_empty())
        .map(|d| (d["from"][0].as_i64().unwrap(), d["from"][1].as_i64().unwrap()))
        .collect();
    // the descent d_3 from (1,6) appears one row up
    assert!(froms.contains(&(1, 7)));
    assert!(!froms.contains(&(0, 1)) && !froms.contains(&(1, 1)));
    let svg = std::fs::read_to_string(dir.join("e3.svg")).unwrap();
    assert!(svg.contains("marker-end"));
}

#[test]
fn empty_window_is_fine() {
    let dir = scratch("empty");
    let o = klocal(&["ass", "-p", "2", "--window", "3:2", "-o", dir.to_str().unwrap()]);
    assert!(o.status.success());
    let svg = std::fs::read_to_string(dir.join("einf.svg")).unwrap();
    assert!(!svg.contains("<circle") && !svg.contains("<rect"));
}

#[test]
fn groups_summary() {
    let out = stdout(&klocal(&["groups", "-p", "2"]));
    assert!(out.contains("Pic_1     = Z_2 ⊕ Z/2 ⊕ Z/4"));
    assert!(out.contains("kappa_1   = Z/2"));
    assert!(out.contains("order divides 32"));
    let o = klocal(&["groups", "-p", "3", "--json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["brauer_upper_order"], 2);
    assert_eq!(v["pic"], serde_json::json!({"p": 3, "free": 1, "torsion": [], "prime_to_p": [[2, 2]]}));
    let out = stdout(&klocal(&["groups", "-p", "5"]));
    assert!(out.contains("Z_5 ⊕ Z/8"));
}

#[test]
fn decalage_modes() {
    let o = klocal(&["decalage", "--seed", "0", "--count", "50"]);
    assert!(o.status.success(), "{}", stdout(&o));
    assert!(stdout(&o).starts_with("pass"));
    assert!(klocal(&["decalage", "--count", "0"]).status.success());
    let o = klocal(&["decalage", "--count", "10", "--corrupt", "--primes", "3"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).starts_with("FAIL"));
}

#[test]
fn data_directory_override() {
    let run = |dir: &Path| {
        Command::new(env!("CARGO_BIN_EXE_klocal"))
            .args(["groups", "-p", "2", "--json"])
            .env("KLOCAL_DATA_DIR", dir)
            .output()
            .unwrap()
    };
    let same = run(&shipped_data());
    assert!(same.status.success());
    assert_eq!(same.stdout, klocal(&["groups", "-p", "2", "--json"]).stdout);

    let broken = scratch("broken-data");
    std::fs::create_dir_all(&broken).unwrap();
    for f in ["p2_ass_d3.json", "transported.json", "extensions.json"] {
        std::fs::copy(shipped_data().join(f), broken.join(f)).unwrap();
    }
    std::fs::write(broken.join("transported.json"), "[{\"prime\": 2}]").unwrap();
    let o = run(&broken);
    assert!(!o.status.success());
    assert!(String::from_utf8_lossy(&o.stderr).contains("error"));
}
