use std::process::{Command, Output};

use serde_json::Value;

fn icebox(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_icebox")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn json(args: &[&str]) -> Value {
    let mut a = args.to_vec();
    a.push("--json");
    let o = icebox(&a);
    assert!(o.status.success(), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_str(&stdout(&o)).unwrap()
}

#[test]
fn verify_examples_exit_zero() {
    for args in [
        vec!["verify", "ybe", "--m", "3"],
        vec!["verify", "duality", "--r", "2", "--m", "1", "--mu", "1,0"],
        vec!["verify", "schutzenberger", "--lambda", "2,1,0"],
        vec!["verify", "crystal", "--lambda", "1,1,0"],
        vec!["verify", "rl-inverse", "--m", "2"],
        vec!["verify", "ybe", "--regime", "crystal", "--m", "2"],
        vec!["verify", "twist", "--m", "2", "--count", "2"],
    ] {
        let o = icebox(&args);
        assert_eq!(o.status.code(), Some(0), "{args:?}: {}", stdout(&o));
        assert!(stdout(&o).contains("PASS"));
    }
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        vec!["verify", "ybe", "--regime", "nope"],
        vec!["frobnicate"],
        vec!["enumerate", "--mu", "0,1"],
        vec!["partition", "--mu", "1,0", "--set", "w=2"],
        vec!["gt", "bk", "4 2 0; 2 0; 2", "--k", "5"],
    ] {
        assert_eq!(icebox(&args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn enumerate_trivial_and_filtered() {
    let v = json(&["enumerate", "--mu", "0"]);
    assert_eq!(v["schema"], "icebox.report/1");
    assert_eq!(v["results"]["count"], 1);
    let all = json(&["enumerate", "--m", "2", "--mu", "3,0"]);
    let mut filtered = 0;
    for sigma in ["1,1", "1,2", "2,1", "2,2"] {
        filtered += json(&["enumerate", "--m", "2", "--mu", "3,0", "--sigma", sigma])["results"]["count"].as_u64().unwrap();
    }
    assert_eq!(all["results"]["count"].as_u64().unwrap(), filtered);
}

#[test]
fn figure_states_are_listed() {
    let patterns = |theta: &str| -> Vec<String> {
        let v = json(&["enumerate", "--model", "crystal", "--theta", theta, "--mu", "4,2,0"]);
        v["results"]["states"].as_array().unwrap().iter().map(|s| s["pattern"].as_str().unwrap().to_string()).collect()
    };
    assert!(patterns("GDG").contains(&"4 2 0; 2 0; 2".to_string()));
    assert!(patterns("DGG").contains(&"4 2 0; 4 2; 2".to_string()));
    let o = icebox(&["gt", "bk", "4 2 0; 2 0; 2", "--k", "2"]);
    assert_eq!(stdout(&o), "4 2 0\n4 2\n2\n");
}

#[test]
fn partition_values() {
    assert_eq!(stdout(&icebox(&["partition", "--model", "crystal", "--mu", "0"])), "1\n");
    assert_eq!(stdout(&icebox(&["partition", "--model", "crystal", "--lambda", "1,0"])), "z1^2 + z1*z2\n");
    let z = stdout(&icebox(&["partition", "--m", "2", "--mu", "3,0", "--theta", "RL", "--sigma", "1,2"]));
    let swapped = stdout(&icebox(&[
        "partition", "--m", "2", "--mu", "3,0", "--theta", "LR", "--sigma", "2,1", "--set", "swap=z1,z2",
    ]));
    assert_eq!(z, swapped);
    assert_ne!(z.trim(), "0");
}

#[test]
fn json_is_stable_under_reserialization() {
    for args in [vec!["table", "T_R", "--m", "2", "--json"], vec!["verify", "rl-inverse", "--m", "1", "--json"]] {
        let text = stdout(&icebox(&args));
        let v: Value = serde_json::from_str(&text).unwrap();
        assert_eq!(serde_json::to_string_pretty(&v).unwrap() + "\n", text);
    }
}

#[test]
fn flags_and_monoid() {
    let v = json(&["enumerate", "--model", "crystal", "--theta", "GDG", "--mu", "4,2,0", "--top-colors", "3,2,1"]);
    let state = v["results"]["states"]
        .as_array()
        .unwrap()
        .iter()
        .find(|s| s["pattern"] == "4 2 0; 2 0; 2")
        .unwrap()
        .clone();
    let path = std::env::temp_dir().join(format!("icebox-flags-{}.json", std::process::id()));
    std::fs::write(&path, serde_json::to_string(&state).unwrap()).unwrap();
    let out = stdout(&icebox(&["flags", "--state", path.to_str().unwrap()]));
    std::fs::remove_file(&path).ok();
    assert!(out.contains("Sigma_1,0 = [2, 1, 3]"), "{out}");
    assert!(out.contains("Sigma_1,3 = [1, 2, 3]"), "{out}");
    assert!(out.contains("sigma = [3, 1, 2]"), "{out}");
    assert_eq!(stdout(&icebox(&["monoid", "reduce", "2,1,2"])), "m1 m2 m1\n");
    assert_eq!(stdout(&icebox(&["monoid", "reduce", "m1 m1"])), "m1\n");
}

#[test]
fn thread_override() {
    let o = Command::new(env!("CARGO_BIN_EXE_icebox"))
        .args(["verify", "rl-inverse", "--m", "2"])
        .env("ICEBOX_THREADS", "2")
        .output()
        .unwrap();
    assert!(o.status.success());
    let bad = Command::new(env!("CARGO_BIN_EXE_icebox"))
        .args(["verify", "rl-inverse", "--m", "2"])
        .env("ICEBOX_THREADS", "many")
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(2));
}
