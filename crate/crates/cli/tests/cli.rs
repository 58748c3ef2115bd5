use serde_json::Value;
use singlocus::lattice::{picard_group, PicardProblem, Subgroup};
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_singlocus"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(args: &[&str]) -> (Value, i32) {
    let mut all = args.to_vec();
    all.extend(["--format", "json"]);
    let out = run(&all);
    let v = serde_json::from_slice(&out.stdout).unwrap_or(Value::Null);
    (v, out.status.code().unwrap())
}

const EX_A: &str = "x*y + x*z^2 + y^2*z - z^6";

fn data(name: &str) -> String {
    format!("{}/data/{name}", env!("CARGO_MANIFEST_DIR"))
}

#[test]
fn recognize_worked_example() {
    let (v, code) = json(&["recognize", "--order", "32", EX_A]);
    assert_eq!(code, 0);
    assert_eq!(v["verdict"], "A_4");
    assert_eq!(v["n"], 4);
}

#[test]
fn smooth_point_is_invalid_input() {
    let out = run(&["recognize", "x"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("not a double point"));
}

#[test]
fn syntax_error_reports_offset() {
    let out = run(&["recognize", "x*y + + z"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("offset 6"));
}

#[test]
fn grand_picard_group() {
    let (v, code) = json(&["picard", "--input", &data("grand.json")]);
    assert_eq!(code, 0);
    assert_eq!(v["group"], "<2L1, L2 + L3, 6L3, 4L4, 12L5, 2L6, H>");
    let rows: Vec<Vec<i64>> = serde_json::from_value(v["hnf"].clone()).unwrap();
    let problem: PicardProblem =
        serde_json::from_str(&std::fs::read_to_string(data("grand.json")).unwrap()).unwrap();
    let expect = picard_group(&problem).unwrap();
    assert_eq!(Subgroup::from_i64(expect.ambient_rank(), &rows), expect);
}

#[test]
fn report_matches_schema() {
    let schema: Value =
        serde_json::from_str(&std::fs::read_to_string(data("recognize.schema.json")).unwrap())
            .unwrap();
    let validator = jsonschema::JSONSchema::compile(&schema).unwrap();
    for expr in [
        EX_A,
        "x*y - z^40",
        "x^2 + y^3 + z^4",
        "x^2 + y^2 + z^2",
        "x^2 + y^2 + z^7",
    ] {
        let (v, code) = json(&["recognize", expr]);
        assert_eq!(code, 0, "{expr}");
        assert!(validator.is_valid(&v), "{expr}: {v}");
    }
}

#[test]
fn text_and_json_carry_the_same_data() {
    for args in [
        vec!["recognize", EX_A],
        vec!["scenario-predict", r#"{"family":"Spine","m":3,"q":2}"#],
    ] {
        let (v, _) = json(&args);
        let text = String::from_utf8(run(&args).stdout).unwrap();
        assert_eq!(text, singlocus_cli::render::render(&v));
    }
}

#[test]
fn other_subcommands() {
    let (v, _) = json(&["tjurina", "--degree", "12", "x*y - z^5"]);
    assert_eq!(v["tjurina"], 4);
    let (v, _) = json(&["factor-xy", "--order", "12", "x^3"]);
    assert_eq!(
        (v["X"].as_str(), v["Y"].as_str()),
        (Some("x"), Some("y + x^2"))
    );
    let (v, _) = json(&["root", "--order", "6", "-n", "2", "4 + z"]);
    assert_eq!(v["root"].as_str().unwrap().split(" + ").next(), Some("2"));
    assert_eq!(run(&["root", "-n", "2", "2 + z"]).status.code(), Some(2));
    let (v, code) = json(&["intersect", "(x, z^2)", "(y, z^3)"]);
    assert_eq!(
        (
            v["intersection"].as_str(),
            v["bruteforce_agrees"].as_bool(),
            code
        ),
        (Some("(x*y, y*z^2, z^3)"), Some(true), 0)
    );
    assert_eq!(
        run(&["intersect", "(x, y)", "(x, y)"]).status.code(),
        Some(2)
    );
    let (v, _) = json(&["curve-class", "--curve", "(y, z)", "x*y - z^6"]);
    assert_eq!(
        (v["class"].as_u64(), v["signed"].as_i64()),
        (Some(5), Some(-1))
    );
}

#[test]
fn crosscheck_exit_codes() {
    let (v, code) = json(&[
        "scenario-crosscheck",
        "--seed",
        "1",
        r#"{"family":"NoTangency","m":2,"n":3}"#,
    ]);
    assert_eq!((v["status"].as_str(), code), (Some("Match"), 0));
    // With n = 1 the base ideal has a linear generator and the surface is
    // smooth, so the A_(m-1) prediction fails.
    let (v, code) = json(&[
        "scenario-crosscheck",
        r#"{"family":"MixedTangency","m":2,"n":1,"q":2}"#,
    ]);
    assert_eq!((v["status"].as_str(), code), (Some("Mismatch"), 1));
    assert_eq!(
        run(&["scenario-predict", r#"{"family":"Spine","m":2,"q":1}"#])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn manifest_batch_is_ordered() {
    let dir = std::env::temp_dir().join(format!("singlocus-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("manifest.json");
    let manifest = r#"{"order": 24, "seeds": [0, 1], "configs": [
        {"family": "NoTangency", "m": 1, "n": 3},
        {"family": "Spine", "m": 3, "q": 1},
        {"family": "Pinwheel", "r": 3}]}"#;
    std::fs::write(&path, manifest).unwrap();
    let (v, code) = json(&["scenario-crosscheck", "--manifest", path.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(
        (v["jobs"].as_u64(), v["match"].as_u64()),
        (Some(6), Some(6))
    );
    let order: Vec<(String, u64)> = v["reports"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| {
            (
                r["config"]["family"].as_str().unwrap().to_string(),
                r["seed"].as_u64().unwrap(),
            )
        })
        .collect();
    let fam = |s: &str| s.to_string();
    assert_eq!(
        order,
        vec![
            (fam("NoTangency"), 0),
            (fam("NoTangency"), 1),
            (fam("Spine"), 0),
            (fam("Spine"), 1),
            (fam("Pinwheel"), 0),
            (fam("Pinwheel"), 1)
        ]
    );
    std::fs::remove_dir_all(&dir).ok();
}
