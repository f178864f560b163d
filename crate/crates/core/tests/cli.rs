mod common;

use common::{golden_path, run_bin, GOLDEN_CASES};
use dconormal::cli::{parse_variety, run};
use dconormal::par::{self, Mode};
use dconormal::Error;
use serde_json::Value;

fn schema() -> jsonschema::JSONSchema {
    let text = std::fs::read_to_string(common::manifest_dir().join("schema/report.schema.json")).unwrap();
    let schema: Value = serde_json::from_str(&text).unwrap();
    jsonschema::JSONSchema::compile(&schema).expect("schema compiles")
}

fn assert_valid(schema: &jsonschema::JSONSchema, json: &str, what: &str) {
    let v: Value = serde_json::from_str(json).unwrap_or_else(|e| panic!("{what}: not JSON: {e}"));
    let msgs: Vec<String> = match schema.validate(&v) {
        Ok(()) => return,
        Err(errors) => errors.map(|e| format!("{} at {}", e, e.instance_path)).collect(),
    };
    panic!("{what}: schema violations: {msgs:?}");
}

#[test]
fn golden_reports() {
    let update = std::env::var_os("UPDATE_GOLDEN").is_some();
    for case in GOLDEN_CASES {
        let out = run_bin(case.args, &[]);
        assert_eq!(out.code, case.exit_code, "{}: exit code\n{}", case.name, out.stderr);
        let path = golden_path(case.name);
        if update {
            std::fs::write(&path, &out.stdout).unwrap();
            continue;
        }
        let expected = std::fs::read_to_string(&path)
            .unwrap_or_else(|_| panic!("missing golden file {}; rerun with UPDATE_GOLDEN=1", path.display()));
        assert_eq!(out.stdout, expected, "{}: report differs from golden file", case.name);
    }
}

#[test]
fn repeated_runs_are_byte_identical() {
    for case in GOLDEN_CASES {
        let a = run_bin(case.args, &[]);
        let b = run_bin(case.args, &[]);
        assert_eq!(a.stdout, b.stdout, "{}", case.name);
    }
}

#[test]
fn every_report_matches_the_schema() {
    let schema = schema();
    for case in GOLDEN_CASES {
        assert_valid(&schema, &run_bin(case.args, &[]).stdout, case.name);
    }
    let timed = run_bin(&["delta", "--n", "3", "--d", "1", "--t", "1", "--trials", "5", "--timings"], &[]);
    assert!(timed.stdout.contains("\"total_ms\""));
    assert_valid(&schema, &timed.stdout, "timings");
    let usage = run_bin(&["conormal"], &[]);
    assert_eq!(usage.code, 2);
    assert_valid(&schema, &usage.stdout, "usage error");
}

#[test]
fn schema_rejects_malformed_reports() {
    let schema = schema();
    let out = run_bin(&["delta", "--n", "3", "--d", "2", "--t", "1", "--trials", "5"], &[]);
    let mut v: Value = serde_json::from_str(&out.stdout).unwrap();
    v["results"]["report"]["passed"] = Value::String("yes".into());
    assert!(!schema.is_valid(&v));
    let mut v: Value = serde_json::from_str(&out.stdout).unwrap();
    v["exit_code"] = Value::from(1);
    assert!(!schema.is_valid(&v));
}

#[test]
fn sequential_and_parallel_modes_agree() {
    let cases: [&[&str]; 4] = [
        &["delta", "--n", "4", "--d", "2", "--t", "2", "--trials", "300", "--seed", "5"],
        &["polar", "examples/cone3.var", "--ell", "2", "--k", "1", "--json-only"],
        &["whitney-w", "examples/umbrella.var", "--y-axes", "3", "--curves", "3"],
        &["nash", "examples/umbrella.var", "--all-charts", "--transversality"],
    ];
    std::env::set_current_dir(common::manifest_dir()).unwrap();
    for args in cases {
        par::set_mode(Mode::Sequential);
        let seq = run(args.iter().copied());
        par::set_mode(Mode::Parallel);
        let par_out = run(args.iter().copied());
        assert_eq!(seq.stdout, par_out.stdout, "{args:?}");
        assert_eq!(seq.exit_code, par_out.exit_code);
    }
}

#[test]
fn documented_examples() {
    let nash = run_bin(&["nash", "examples/cone3.var", "--chart", "0"], &[]);
    let v: Value = serde_json::from_str(&nash.stdout).unwrap();
    let chart = &v["results"]["charts"][0];
    assert_eq!(chart["ideal"]["dim"], 2);
    assert_eq!(chart["fiber_at_origin"]["generators"][0], "a11^2 + a12^2 + 1");
    assert!(nash.stderr.starts_with("nash: "));

    let delta = run_bin(&["delta", "--n", "5", "--d", "3", "--t", "2", "--trials", "1000", "--seed", "7", "--json-only"], &[]);
    assert_eq!(delta.code, 0);
    assert!(delta.stderr.is_empty());
    let v: Value = serde_json::from_str(&delta.stdout).unwrap();
    assert_eq!(v["results"]["report"]["passed"], true);

    let bad = run_bin(&["check-integral", "examples/not_integral.zvar", "--n", "3", "--d", "1", "--chart", "0"], &[]);
    assert_eq!(bad.code, 1);
    let v: Value = serde_json::from_str(&bad.stdout).unwrap();
    assert_eq!(v["status"], "verdict-false");
    assert_eq!(v["results"]["verdict"]["witness"]["minor"], "a11");
}

#[test]
fn inputs_are_digested() {
    let out = run_bin(&["nash", "examples/cone3.var"], &[]);
    let v: Value = serde_json::from_str(&out.stdout).unwrap();
    let bytes = std::fs::read(common::manifest_dir().join("examples/cone3.var")).unwrap();
    use sha2::Digest;
    assert_eq!(v["input"]["sha256"], hex::encode(sha2::Sha256::digest(bytes)));
    assert_eq!(v["argv"][0], "nash");
    assert!(v.get("timings").is_none());
}

#[test]
fn resource_caps_come_from_the_environment() {
    let capped = run_bin(&["nash", "examples/umbrella.var"], &[("CONORMAL_MAX_BASIS", "2")]);
    assert_eq!(capped.code, 3, "{}", capped.stdout);
    let v: Value = serde_json::from_str(&capped.stdout).unwrap();
    assert_eq!(v["status"], "resource-limit");
    assert_eq!(v["error"]["kind"], "resource-limit");
    let invalid = run_bin(&["nash", "examples/umbrella.var"], &[("CONORMAL_MAX_DEGREE", "lots")]);
    assert_eq!(invalid.code, 2);
    let roomy = run_bin(&["nash", "examples/umbrella.var"], &[("CONORMAL_MAX_DEGREE", "64")]);
    assert_eq!(roomy.code, 0);
}

#[test]
fn input_errors() {
    let unit = run_bin(&["conormal", "tests/data/unit.var", "--d", "1"], &[]);
    assert!(unit.stdout.contains("\"empty-variety\""));
    let syntax = run_bin(&["nash", "tests/data/bad_syntax.var"], &[]);
    let v: Value = serde_json::from_str(&syntax.stdout).unwrap();
    assert_eq!(v["error"]["message"], "syntax error at line 3, column 7: unexpected `*`");
    let missing = run_bin(&["nash", "examples/nope.var"], &[]);
    assert_eq!(missing.code, 2);
    let chart = run_bin(&["conormal", "examples/cone3.var", "--d", "2", "--chart", "3"], &[]);
    assert_eq!(chart.code, 2);
    let axes = run_bin(&["whitney-a", "examples/umbrella.var", "--y-axes", "1"], &[]);
    assert!(axes.stdout.contains("\"not-on-variety\""));
}

#[test]
fn parse_variety_examples() {
    let cone = parse_variety("vars: x y z\nx^2 + y^2 + z^2").unwrap();
    assert_eq!((cone.n(), cone.dim()), (3, 2));
    let umbrella = parse_variety("vars: x y z\nx^2 - y^2*z").unwrap();
    assert_eq!(umbrella.dim(), 2);
    assert_eq!(parse_variety("vars: x\n1").unwrap_err(), Error::EmptyVariety);
}
