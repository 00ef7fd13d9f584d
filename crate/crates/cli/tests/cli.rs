use std::process::Command;

use serde_json::Value;
use uembed_cli::{run, EXIT_GEOMETRIC, EXIT_INTERNAL, EXIT_OK, EXIT_SMOOTH, EXIT_USAGE};

fn uembed(args: &[&str]) -> uembed_cli::Execution {
    run(std::iter::once("uembed").chain(args.iter().copied()))
}

fn binary(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_uembed")).args(args).output().unwrap();
    (out.status.code().unwrap(), String::from_utf8(out.stdout).unwrap())
}

fn tmp(name: &str) -> std::path::PathBuf {
    let dir = std::env::temp_dir().join(format!("uembed-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn exit_codes_of_the_binary() {
    assert_eq!(binary(&["embed", "linf2"]).0, EXIT_OK);
    assert_eq!(binary(&["embed", "l1_3"]).0, EXIT_GEOMETRIC);
    assert_eq!(binary(&["embed", "euclidean2d"]).0, EXIT_SMOOTH);
    assert_eq!(binary(&["cks", "composition", "--collide"]).0, EXIT_GEOMETRIC);
    assert_eq!(binary(&["embed", "no-such-space"]).0, EXIT_USAGE);
    assert_eq!(binary(&["frobnicate"]).0, EXIT_USAGE);
    assert_eq!(binary(&["--help"]).0, EXIT_OK);
}

#[test]
fn binary_json_is_byte_identical() {
    let a = binary(&["embed", "hexagon", "--format", "json", "--seed", "11"]);
    let b = binary(&["embed", "hexagon", "--format", "json", "--seed", "11"]);
    assert_eq!(a, b);
    let v: Value = serde_json::from_str(&a.1).unwrap();
    assert_eq!(v["certificate"]["verdict"], "certified-u");
    assert_eq!(v["certificate"]["seed"], 11);
}

#[test]
fn check_always_exits_zero_and_reports_the_facet() {
    let r = uembed(&["check", "l1_3", "--format", "json"]);
    assert_eq!(r.code, EXIT_OK);
    let v: Value = serde_json::from_str(&r.stdout).unwrap();
    assert_eq!(v["simplexoid"], false);
    assert_eq!(v["offending_face"]["affine_dim"], 2);
    assert_eq!(v["offending_face"]["extreme_indices"].as_array().unwrap().len(), 4);
}

#[test]
fn extend_reports_non_uniqueness_on_l1_3() {
    let r = uembed(&["extend", "l1_3", "1,0,0", "--format", "json"]);
    assert_eq!(r.code, EXIT_GEOMETRIC);
    let v: Value = serde_json::from_str(&r.stdout).unwrap();
    assert_eq!(v["unique"], false);
    assert_eq!(v["norm"], "1");
    assert!(v["second_extension"].is_array());
}

#[test]
fn extend_with_a_custom_embedding() {
    let path = tmp("ball.json");
    std::fs::write(&path, r#"{"index_points": [["1","0"],["0","1"],["-1","0"],["0","-1"]]}"#).unwrap();
    let r = uembed(&["extend", "linf2", "1,0", "--embedding", path.to_str().unwrap()]);
    assert_eq!(r.code, EXIT_OK, "{}", r.stderr);
    assert!(r.stdout.contains("unique extension: NO"), "{}", r.stdout);

    std::fs::write(&path, r#"{"index_points": [["1","0"]]}"#).unwrap();
    let r = uembed(&["extend", "linf2", "1,0", "--embedding", path.to_str().unwrap()]);
    assert_eq!(r.code, EXIT_USAGE);
    assert!(r.stderr.starts_with("error:"));
}

#[test]
fn bad_functional_is_a_usage_error() {
    let r = uembed(&["extend", "linf2", "1,x"]);
    assert_eq!(r.code, EXIT_USAGE);
    let r = uembed(&["extend", "linf2", "1,0,0"]);
    assert_ne!(r.code, EXIT_OK);
    assert_ne!(r.code, EXIT_INTERNAL);
}

#[test]
fn space_files_and_field_files_are_accepted() {
    let space = tmp("square.json");
    std::fs::write(
        &space,
        r#"{"name": "square", "dim": 2, "representation": "polyhedral",
            "dual_extreme_points": [["1","0"],["0","1"],["-1","0"],["0","-1"]]}"#,
    )
    .unwrap();
    let r = uembed(&["embed", space.to_str().unwrap()]);
    assert_eq!(r.code, EXIT_OK, "{}{}", r.stdout, r.stderr);
    assert!(r.stdout.contains("certified U-embedding"));

    let field = tmp("field.json");
    std::fs::write(&field, "{\n  \"S\": [\"a\", \"b\"],\n  \"K\": [\"x\"],\n  \"atoms\": [[[0, 1.0]], [[0, 1.0]],\n}").unwrap();
    let r = uembed(&["cks", field.to_str().unwrap()]);
    assert_eq!(r.code, EXIT_USAGE);
    assert!(r.stderr.contains("line"), "{}", r.stderr);
}

#[test]
fn out_writes_the_report_to_a_file() {
    let path = tmp("report.json");
    let r = uembed(&["cks", "retraction", "--format", "json", "--out", path.to_str().unwrap()]);
    assert_eq!(r.code, EXIT_OK);
    assert!(r.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["verdict"]["status"], "pass");
}

#[test]
fn tolerance_flag_reaches_the_field() {
    let r = uembed(&["cks", "retraction", "--tolerance", "0.5", "--format", "json"]);
    let v: Value = serde_json::from_str(&r.stdout).unwrap();
    assert_eq!(v["tolerance"], 0.5);
    // with τ = 0.5 half the grid counts as norm one, so h is no longer a bijection
    assert_ne!(r.code, EXIT_OK);
}

#[test]
fn corpus_list_names_every_entry() {
    let r = uembed(&["corpus", "list", "--format", "json"]);
    let v: Value = serde_json::from_str(&r.stdout).unwrap();
    let names: Vec<&str> = v.as_array().unwrap().iter().map(|e| e["name"].as_str().unwrap()).collect();
    assert_eq!(names, uembed::corpus::names().collect::<Vec<_>>());
}

#[test]
fn hexagon_extensions() {
    let cases = [("1,0", 1, vec!["0", "0", "1"]), ("1,-1", 1, vec!["0", "1", "0"]), ("1,-1/2", 2, vec!["0", "1/2", "1/2"])];
    for (f, support, weights) in cases {
        let r = uembed(&["extend", "hexagon", f, "--format", "json"]);
        assert_eq!(r.code, EXIT_OK);
        let v: Value = serde_json::from_str(&r.stdout).unwrap();
        assert_eq!(v["unique"], true, "{f}");
        assert_eq!(v["phelps_support"], support, "{f}");
        assert_eq!(v["extension"], serde_json::json!(weights), "{f}");
    }
}

#[test]
fn hexagon_certificate_has_three_points() {
    let r = uembed(&["embed", "hexagon", "--format", "json"]);
    assert_eq!(r.code, EXIT_OK);
    let v: Value = serde_json::from_str(&r.stdout).unwrap();
    assert_eq!(v["certificate"]["E"].as_array().unwrap().len(), 3);
    assert_eq!(v["certificate"]["certified_U"], true);
}
