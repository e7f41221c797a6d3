use std::process::{Command, Output};

use serde_json::Value;

fn igusa(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_igusa"))
        .args(args)
        .env_remove("IGUSA_ENUM_CAP")
        .output()
        .expect("run igusa")
}

fn json_of(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn oracle_measures_of_x() {
    let out = igusa(&["oracle", "--poly", "x", "--p", "3", "--kmax", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json_of(&out);
    assert_eq!(v["coefficients"], serde_json::json!(["2/3", "2/9", "2/27"]));
}

#[test]
fn oracle_gauss_sum() {
    let out = igusa(&["oracle", "--expsum", "--poly", "x^2", "--p", "3", "--m", "1"]);
    let v = json_of(&out);
    let re: f64 = v["E"][0].as_str().unwrap().parse().unwrap();
    let im: f64 = v["E"][1].as_str().unwrap().parse().unwrap();
    assert!(re.abs() < 1e-12);
    assert!((im - 3f64.sqrt() / 3.0).abs() < 1e-12);
}

#[test]
fn newton_facets() {
    let out = igusa(&["newton", "--poly", "x^2*y^2+x^5+y^5"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json_of(&out);
    let mut facets: Vec<(Vec<u64>, u64)> = v["newton"]["facets"]
        .as_array()
        .unwrap()
        .iter()
        .map(|f| (serde_json::from_value(f["normal"].clone()).unwrap(), f["m"].as_u64().unwrap()))
        .collect();
    facets.sort();
    assert_eq!(
        facets,
        vec![(vec![0, 1], 0), (vec![1, 0], 0), (vec![2, 3], 10), (vec![3, 2], 10)]
    );
}

#[test]
fn zeta_report_keys_and_double_pole() {
    let out = igusa(&["--poly", "x^2+x*y+y^2", "--p", "7", "--checks", "all"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v = json_of(&out);
    let keys: Vec<&String> = v.as_object().unwrap().keys().collect();
    assert_eq!(
        keys,
        ["input", "newton", "zeta", "poles", "invariants", "theorem_checks", "oracle"]
    );
    let fam = &v["poles"]["families"][0];
    assert_eq!(fam["real_part"], "-1/1");
    assert_eq!(fam["multiplicity"], 2);
    assert_eq!(v["oracle"]["series"]["match"], true);
    assert_eq!(v["zeta"]["mode"], "A");
}

#[test]
fn zeta_subcommand_matches_default() {
    let a = igusa(&["--poly", "x*y", "--p", "3"]);
    let b = igusa(&["zeta", "--poly", "x*y", "--p", "3"]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn bad_reduction_uses_recursion() {
    let out = igusa(&["--poly", "x^2+3*y^2", "--p", "3", "--kmax", "8"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json_of(&out);
    assert_eq!(v["zeta"]["mode"], "B");
    assert_eq!(v["oracle"]["series"]["match"], true);
}

#[test]
fn text_format() {
    let out = igusa(&["--poly", "x*y", "--p", "3", "--format", "text"]);
    let s = String::from_utf8(out.stdout).unwrap();
    assert!(s.contains("Z = (4/9) / ((1 - 3^-1*t)^2)"), "{s}");
}

#[test]
fn exit_codes() {
    assert_eq!(igusa(&["--poly", "x^2+", "--p", "3"]).status.code(), Some(2));
    assert_eq!(igusa(&["--poly", "x", "--p", "4"]).status.code(), Some(2));
    assert_eq!(igusa(&["--poly", "x", "--p", "3", "--checks", "bogus"]).status.code(), Some(2));
    assert_eq!(igusa(&["--bogus-flag"]).status.code(), Some(2));
    let capped = Command::new(env!("CARGO_BIN_EXE_igusa"))
        .args(["--poly", "x*y*z+x^3+y^3+z^3", "--p", "5"])
        .env("IGUSA_ENUM_CAP", "10")
        .output()
        .unwrap();
    assert_eq!(capped.status.code(), Some(3));
}

#[test]
fn corpus_lines_and_output_file() {
    let dir = std::env::temp_dir().join(format!("igusa-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let corpus = dir.join("corpus.jsonl");
    let out = dir.join("out.jsonl");
    std::fs::write(
        &corpus,
        "{\"poly\":\"x^2+y^3\",\"p\":5}\n# comment\n{\"poly\":\"x*y\",\"p\":3,\"kmax\":3}\n",
    )
    .unwrap();
    let res = igusa(&["--corpus", corpus.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert_eq!(res.status.code(), Some(0));
    let body = std::fs::read_to_string(&out).unwrap();
    let lines: Vec<Value> = body.lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(lines.len(), 2);
    assert_eq!(lines[0]["line"], 1);
    assert_eq!(lines[1]["line"], 3);
    assert!(lines.iter().all(|l| l["report"]["oracle"]["series"]["match"] == true));
    std::fs::remove_dir_all(&dir).ok();
}
