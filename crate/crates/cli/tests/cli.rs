use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn symh(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_symh")).args(args).output().unwrap()
}

fn json(out: &Output) -> Value {
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("symh-cli-{}-{name}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

#[test]
fn trivial_character_is_one() {
    let v = json(&symh(&["char", "eval", "--lambda", "3", "--type", "1,1,1"]));
    assert_eq!(v["exact"]["num"], "1");
    assert_eq!(v["float"], 1.0);
}

#[test]
fn standard_fourth_moment_is_four() {
    let v = json(&symh(&["norm", "--lambda", "7,1", "--q", "4", "--exact"]));
    assert_eq!((v["exact"]["num"].as_str(), v["exact"]["den"].as_str()), (Some("4"), Some("1")));
}

#[test]
fn kronecker_of_standard_square() {
    let v = json(&symh(&["kronecker", "--l", "3,1", "--m", "3,1", "--nu", "2,2"]));
    assert_eq!(v["exact"]["num"], "1");
}

#[test]
fn config_errors_exit_two() {
    for args in [
        &["char", "eval", "--lambda", "3,x", "--type", "1,1,1"][..],
        &["char", "eval", "--lambda", "3", "--type", "2,1,1"],
        &["verify", "--theorem", "nonsense"],
        &["mix", "--class", "2,1", "--group", "A"],
        &["frobnicate"],
    ] {
        assert_eq!(symh(args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn csv_table_has_header_and_rows() {
    let out = symh(&["--format", "csv", "char", "table", "--n", "4"]);
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 6);
    assert!(lines[0].starts_with("lambda,4,"));
    assert_eq!(lines[1], "4,1,1,1,1,1");
}

#[test]
fn output_is_identical_across_thread_counts() {
    let dir = scratch("threads");
    let lock = dir.join("none.lock");
    let lock = lock.to_str().unwrap();
    let run = |threads: &str| {
        symh(&["--threads", threads, "verify", "--theorem", "kronecker", "--n-max", "8", "--lock", lock]).stdout
    };
    assert_eq!(run("1"), run("3"));
    let table = |threads: &str| symh(&["--threads", threads, "--format", "csv", "char", "table", "--n", "9"]).stdout;
    assert_eq!(table("1"), table("4"));
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn lock_drift_fails_until_updated() {
    let dir = scratch("lock");
    let lock = dir.join("constants.lock");
    std::fs::write(&lock, "{\n  \"dims.growth.K\": \"2.5\"\n}\n").unwrap();
    let lock_arg = lock.to_str().unwrap();
    let base = ["verify", "--theorem", "dims", "--n-max", "12", "--lock", lock_arg];
    let out = symh(&base);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("DRIFT dims.growth.K"));

    let mut update = base.to_vec();
    update.push("--update-locks");
    assert!(symh(&update).status.success());
    let v = json(&symh(&base));
    assert_eq!(v["passed"], true);
    assert!(v["locks"].as_array().unwrap().iter().all(|c| c["status"] == "match"));
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn verify_writes_json_report() {
    let dir = scratch("json");
    let path = dir.join("out.json");
    let lock = dir.join("none.lock");
    let out = symh(&[
        "verify", "--theorem", "prob-recursion", "--json", path.to_str().unwrap(), "--lock", lock.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["theorem"], "prob-recursion");
    assert_eq!(v["reports"][0]["failure_count"], 0);
    assert!(!lock.exists(), "compare mode must not write the lock");
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn mix_profile_and_subcommands() {
    let v = json(&symh(&["mix", "--group", "A", "--n", "12", "--class", "1,1,1,9", "--steps", "8", "--json"]));
    let steps = v["steps"].as_array().unwrap();
    assert_eq!(steps.len(), 8);
    assert_eq!(v["convention"], "L2");
    let d: Vec<f64> = steps.iter().map(|s| s["distance"].as_f64().unwrap()).collect();
    assert!(d.windows(2).all(|w| w[1] <= w[0]));

    let lb = json(&symh(&["mix", "lower-bound", "--n", "12", "--ell", "3"]));
    assert_eq!(lb["class"], "7,1,1,1,1,1");
    assert_eq!(lb["density_matches"], true);

    let p = json(&symh(&["mix", "product", "--a", "9,1,1,1", "--b", "9,1,1,1", "--c", "9,1,1,1"]));
    let level_one = p["terms"].as_array().unwrap().iter().find(|t| t["level"] == 1).unwrap();
    assert_eq!(level_one["sign"], 1);

    let q = json(&symh(&["mix", "product", "--a", "3,1,1", "--b", "3,1,1;5", "--c", "2,2,1", "--direct"]));
    assert_eq!(q["direct_matches"], true);

    let t = json(&symh(&["mix", "--class", "5,1,1", "--eps", "0.25"]));
    assert!(t["mixing_time"]["L2"]["steps"].is_u64());
}

#[test]
fn cache_dir_persists_memo() {
    let dir = scratch("cache");
    let run = || {
        Command::new(env!("CARGO_BIN_EXE_symh"))
            .env("SYMH_CACHE_DIR", &dir)
            .args(["char", "eval", "--lambda", "6,4,2", "--type", "3,3,3,3"])
            .output()
            .unwrap()
    };
    let first = run();
    assert!(first.status.success());
    assert!(std::fs::read_dir(&dir).unwrap().next().is_some());
    assert_eq!(run().stdout, first.stdout);
    std::fs::remove_dir_all(dir).unwrap();
}
