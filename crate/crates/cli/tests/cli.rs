use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_multizeta")).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("valid JSON")
}

/// zeta_2(3,2) = sum over n1 > n2 of n1^-3 n2^-2, brute force with a tail estimate.
fn double_sum_32() -> f64 {
    let n = 200_000usize;
    let mut inner = 0.0;
    let mut total = 0.0;
    for k in 1..n {
        total += inner / (k as f64).powi(3);
        inner += 1.0 / (k as f64).powi(2);
    }
    // inner -> zeta(2); remaining sum of k^-3 is about 1/(2 n^2)
    total + inner / (2.0 * (n as f64).powi(2))
}

#[test]
fn eval_matches_brute_force() {
    let v = json(&run(&["eval", "--chars", "trivial:2", "--point", "3,2"]));
    let re = v["value"][0].as_f64().unwrap();
    assert!((re - double_sum_32()).abs() < 1e-9, "{re}");
    assert!((re - 0.228810397521).abs() < 1e-10);
    assert_eq!(v["value"][1].as_f64(), Some(0.0));
    assert!(v["error_bound"].as_f64().unwrap() <= 1e-10);
}

#[test]
fn pole_list_skips_odd_negative_levels() {
    let v = json(&run(&["poles", "--chars", "trivial:2", "--n-min", "-6"]));
    let levels: Vec<i64> = v
        .as_array()
        .unwrap()
        .iter()
        .filter(|r| r["hyperplane"]["index"] == 2)
        .map(|r| r["hyperplane"]["level"].as_i64().unwrap())
        .collect();
    assert_eq!(levels, vec![2, 1, 0, -2, -4, -6]);

    let all = json(&run(&["poles", "--chars", "trivial:2", "--n-min", "-6", "--all"]));
    let removed: Vec<&Value> = all.as_array().unwrap().iter().filter(|r| r["status"] == "regular").collect();
    assert_eq!(removed.len(), 3);
}

#[test]
fn residue_at_s1_equal_one() {
    let v = json(&run(&["residue", "--chars", "trivial:2", "--hyperplane", "1:1", "--rest", "3"]));
    let zeta3 = 1.2020569031595942;
    assert!((v["formula"][0].as_f64().unwrap() - zeta3).abs() < 1e-10);
    assert!(v["difference"].as_f64().unwrap() < 1e-6);
}

#[test]
fn output_is_deterministic() {
    let args = ["continue", "--chars", "trivial:2", "--grid=-1.5:0.5:3,3.25:4.25:2"];
    let a = run(&args);
    let b = run(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let text = String::from_utf8(a.stdout).unwrap();
    assert_eq!(text.lines().count(), 7);
    assert!(text.lines().nth(1).unwrap().starts_with("-1.5,0.0,3.25,0.0,"));
}

#[test]
fn grid_json_and_out_file() {
    let dir = std::env::temp_dir().join(format!("multizeta-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("grid.json");
    let out = run(&["eval", "--chars", "trivial:1", "--grid", "3:4:2", "--format", "json", "--out", path.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert!((v[0]["value"][0].as_f64().unwrap() - 1.2020569031595942).abs() < 1e-10);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn json_character_file() {
    let dir = std::env::temp_dir().join(format!("multizeta-chars-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("chi.json");
    // the non-principal character mod 4
    std::fs::write(&path, r#"{"type": "dirichlet", "modulus": 4, "values": [[1,0],[0,0],[-1,0],[0,0]]}"#).unwrap();
    let spec = format!("@{}", path.display());
    let v = json(&run(&["continue", "--chars", &spec, "--point", "2"]));
    let catalan = 0.915965594177219;
    assert!((v["value"][0].as_f64().unwrap() - catalan).abs() < 1e-9);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn exit_codes() {
    let outside = run(&["eval", "--chars", "trivial:2", "--point", "0,0"]);
    assert_eq!(outside.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&outside.stderr).contains("NotInConvergenceRegion"));

    let pole = run(&["continue", "--chars", "trivial:2", "--point", "1,1"]);
    assert_eq!(pole.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&pole.stderr).contains("NearPole"));

    for bad in [
        vec!["eval", "--chars", "bogus", "--point", "3,2"],
        vec!["eval", "--chars", "trivial:2", "--point", "3"],
        vec!["eval", "--chars", "trivial:2", "--point", "3,x"],
        vec!["eval", "--chars", "trivial:2"],
        vec!["continue", "--chars", "trivial:2", "--point", "3,2", "--tol", "0"],
        vec!["residue", "--chars", "trivial:2", "--hyperplane", "2", "--rest", "3"],
        vec!["verify", "--module", "nonsense"],
    ] {
        assert_eq!(run(&bad).status.code(), Some(2), "{bad:?}");
    }
}
