//! End-to-end runs of the command line, both in-process and as a binary.

use std::process::Command;

use serde_json::Value;

const TABLE_RING: &str = "table{p=2;rank=3;mul=1,0,0|0,1,0|0,0,1;0,1,0|0,0,0|0,0,0;0,0,1|0,0,0|0,0,0}";

fn json(args: &[&str]) -> (i32, Value) {
    let mut argv = vec!["heisenrig"];
    argv.extend_from_slice(args);
    argv.extend_from_slice(&["--format", "json"]);
    let out = heisenrig_cli::run(argv);
    assert!(out.stderr.is_empty(), "{}", out.stderr);
    (out.exit_code, serde_json::from_str(&out.stdout).unwrap())
}

#[test]
fn ring_reports() {
    let (code, v) = json(&["ring", "--ring", "Z/4"]);
    assert_eq!(code, 0);
    assert_eq!(v["schema"], "heisenrig-report/1");
    assert_eq!(v["command"], "ring");
    assert_eq!((v["result"]["order"].as_u64(), v["result"]["exponent"].as_u64()), (Some(4), Some(4)));
    let (_, v) = json(&["ring", "--ring", "F2[t]/(t^2)", "--elements"]);
    assert_eq!((v["result"]["order"].as_u64(), v["result"]["exponent"].as_u64()), (Some(4), Some(2)));
    assert_eq!(v["result"]["elements"].as_array().unwrap().len(), 4);

    let out = heisenrig_cli::run(["heisenrig", "ring", "--ring", "Z/(4"]);
    assert_eq!(out.exit_code, 1);
    assert!(out.stderr.contains("syntax error"), "{}", out.stderr);
}

#[test]
fn frobenius_reports() {
    let (_, v) = json(&["frobenius", "--ring", "Z/4"]);
    assert_eq!(v["result"]["frobenius"], true);
    assert_eq!(v["result"]["generating_character"]["exponents"], serde_json::json!([1]));
    let (_, v) = json(&["frobenius", "--ring", TABLE_RING]);
    assert_eq!(v["result"]["frobenius"], false);
    assert_eq!(v["result"]["witnesses"].as_array().unwrap().len(), 8);
    let (_, v) = json(&["frobenius", "--ring", "Z/2 x Z/3"]);
    assert_eq!(v["result"]["frobenius"], true);
}

#[test]
fn svn_exit_codes() {
    let (code, v) = json(&["svn", "--ring", "Z/4"]);
    assert_eq!((code, v["status"].as_str()), (0, Some("pass")));
    assert_eq!(v["result"]["pairs"].as_array().unwrap().len(), 6);

    let (code, v) = json(&["svn", "--ring", "Z/4", "--pairing", "0"]);
    assert_eq!((code, v["status"].as_str()), (2, Some("fail")));
    assert!(v["result"]["diagnostics"][0].as_str().unwrap().contains("centre exceeds mu_R"));

    let (code, v) = json(&["svn", "--ring", TABLE_RING]);
    assert_eq!(code, 2);
    assert!(v["result"]["diagnostics"][0].as_str().unwrap().contains("no generating character"));

    let (code, _) = json(&["svn", "--ring", "F2[t]/(t^2)", "--char", "(0,1)", "--models", "schrodinger,fourier"]);
    assert_eq!(code, 0);

    let out = heisenrig_cli::run(["heisenrig", "svn", "--models", "bogus"]);
    assert_eq!(out.exit_code, 1);
}

#[test]
fn defect_filtration_orbit_group() {
    let (_, v) = json(&["defect", "--ring", "Z/3"]);
    assert_eq!(v["result"]["additive_degree"], 2);
    let (_, v) = json(&["defect", "--ring", "Z/4", "--phase", "linear:1"]);
    assert_eq!(v["result"]["additive_degree"], 1);
    assert_eq!(v["result"]["additive_convention_conflict"], true);
    let (_, v) = json(&["defect", "--ring", "Z/4", "--phase", "table:0;1;0;1"]);
    assert_eq!(v["result"]["values"], serde_json::json!(["0", "1", "0", "1"]));

    let (code, v) = json(&["filtration", "--ring", "Z/2"]);
    assert_eq!((code, v["status"].as_str()), (0, Some("pass")));
    assert_eq!(v["result"]["graded_dims"], serde_json::json!([1, 1]));
    let (_, v) = json(&["filtration", "--ring", "Z/4", "--mode", "full"]);
    assert_eq!(v["result"]["full_module_degenerate"], true);

    let (_, v) = json(&["orbit", "--ring", "Z/4"]);
    assert_eq!(v["result"]["orbit"]["orbit_size"], 4);

    let (code, v) = json(&["group", "--ring", "Z/4", "--pairing", "2"]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["centre"]["is_mu"], false);
    assert_eq!(v["result"]["nondegeneracy"]["nondegenerate"], false);
}

#[test]
fn filtration_from_a_generator_file() {
    let dir = std::env::temp_dir().join(format!("heisenrig-gens-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("gens.json");
    std::fs::write(&path, r#"[[0, "scalar"], [1, "T:1"], [1, [["1","0"],["0","-1"]]]]"#).unwrap();
    let (_, v) = json(&["filtration", "--ring", "Z/2", "--gens", path.to_str().unwrap()]);
    assert_eq!(v["result"]["operators"], 3);
    assert_eq!(v["result"]["dims"], serde_json::json!([1, 2]));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn binary_output_and_environment_cap() {
    let bin = env!("CARGO_BIN_EXE_heisenrig");
    let out = Command::new(bin).args(["svn", "--ring", "Z/4", "--pairing", "0"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stdout).starts_with("heisenrig svn"));

    let out = Command::new(bin)
        .args(["ring", "--ring", "Z/4 x Z/4", "--format", "json"])
        .env("HEISENRIG_CAP_ELEMS", "8")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("error"));
}
