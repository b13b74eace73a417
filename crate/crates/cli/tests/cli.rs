use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn detcx(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_detcx"))
        .args(args)
        .env_remove("DETCX_FORMAT")
        .env_remove("DETCX_TIMEOUT")
        .env_remove("DETCX_SEARCH_CAP")
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(args: &[&str]) -> (i32, Value) {
    let mut full = vec!["--format", "json", "--deterministic"];
    full.extend_from_slice(args);
    let o = detcx(&full);
    let v = serde_json::from_slice(&o.stdout)
        .unwrap_or_else(|e| panic!("{args:?}: {e}\n{}", String::from_utf8_lossy(&o.stderr)));
    (code(&o), v)
}

fn schema_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../schemas")
}

fn validate(def: &str, doc: &Value) {
    let bundle: Value =
        serde_json::from_str(&std::fs::read_to_string(schema_dir().join("outputs.schema.json")).unwrap()).unwrap();
    let schema = serde_json::json!({ "$ref": format!("#/$defs/{def}"), "$defs": bundle["$defs"] });
    let v = jsonschema::draft202012::new(&schema).expect("schema compiles");
    let errors: Vec<String> = v
        .iter_errors(doc)
        .map(|e| format!("{e} at {}", e.instance_path()))
        .collect();
    assert!(errors.is_empty(), "{def}: {errors:?}");
}

fn tmp(name: &str) -> PathBuf {
    let dir = Path::new(env!("CARGO_TARGET_TMPDIR")).join("cli");
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn export_cubic() -> PathBuf {
    let path = tmp("cubic5.json");
    let o = detcx(&["--format", "json", "catalog", "cubic_5x5", "--map-only"]);
    assert_eq!(code(&o), 0);
    std::fs::write(&path, &o.stdout).unwrap();
    path
}

#[test]
fn certify_perm3_bound_seven() {
    let (c, v) = json(&["certify", "--poly", "perm3", "--field", "Fp:32003"]);
    assert_eq!(c, 0);
    assert_eq!(v["verdict"], "bound");
    assert_eq!(v["codim"], 6);
    assert_eq!(v["dc_at_least"], 7);
    validate("certify", &v);
}

#[test]
fn certify_not_applicable_is_negative() {
    let (c, v) = json(&["certify", "--poly", "cubic"]);
    assert_eq!(c, 1);
    assert_eq!(v["verdict"], "not_applicable");
    assert_eq!(v["reason"], "codim_at_most_four");
    validate("certify", &v);
}

#[test]
fn verify_exported_cubic_map() {
    let path = export_cubic();
    let map: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    let map_schema: Value =
        serde_json::from_str(&std::fs::read_to_string(schema_dir().join("map.schema.json")).unwrap()).unwrap();
    assert!(jsonschema::draft202012::is_valid(&map_schema, &map));
    let (c, v) = json(&["verify", "--map", path.to_str().unwrap(), "--poly", "x*y^2+y*t^2+z^3"]);
    assert_eq!(c, 0);
    assert_eq!(v["matches"], true);
    validate("verify", &v);
}

#[test]
fn verify_broken_map_reports_witness() {
    let path = export_cubic();
    let mut map: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    map["entries"][1][1] = Value::from("x + y");
    let broken = tmp("cubic5_broken.json");
    std::fs::write(&broken, map.to_string()).unwrap();
    let (c, v) = json(&["verify", "--map", broken.to_str().unwrap(), "--poly", "cubic"]);
    assert_eq!(c, 1);
    assert_eq!(v["matches"], false);
    assert!(v["monomial_witness"]["monomial"].is_string());
    validate("verify", &v);
    let (c, v) = json(&[
        "verify",
        "--map",
        broken.to_str().unwrap(),
        "--poly",
        "cubic",
        "--mode",
        "probabilistic",
    ]);
    assert_eq!(c, 1);
    assert!(v["point_witness"].is_object());
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(code(&detcx(&["no-such-command"])), 2);
    assert_eq!(code(&detcx(&["parse", "--poly", "x +* y"])), 2);
    let path = export_cubic();
    assert_eq!(code(&detcx(&["verify", "--map", path.to_str().unwrap()])), 2);
    assert_eq!(code(&detcx(&["catalog", "nonexistent"])), 2);
    assert_eq!(code(&detcx(&["search", "--poly", "x*y", "--m", "2"])), 2);
    let o = detcx(&["codim", "--poly", "x^"]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("error"));
}

#[test]
fn caps_exit_three() {
    assert_eq!(code(&detcx(&["--max-pairs", "1", "codim", "--poly", "perm3"])), 3);
    assert_eq!(
        code(&detcx(&[
            "--search-cap",
            "10",
            "search",
            "--poly",
            "x*y",
            "--field",
            "Fp:2",
            "--m",
            "2"
        ])),
        3
    );
    assert_eq!(
        code(&detcx(&[
            "--search-cap",
            "1000",
            "dc",
            "--poly",
            "x^3",
            "--field",
            "Fp:2"
        ])),
        3
    );
}

#[test]
fn env_cap_applies_and_flag_wins() {
    let run = |env: &str, flag: Option<&str>| {
        let mut cmd = Command::new(env!("CARGO_BIN_EXE_detcx"));
        cmd.env("DETCX_MAX_PAIRS", env);
        if let Some(f) = flag {
            cmd.args(["--max-pairs", f]);
        }
        code(&cmd.args(["codim", "--poly", "perm3"]).output().unwrap())
    };
    assert_eq!(run("1", None), 3);
    assert_eq!(run("1", Some("100000")), 0);
}

#[test]
fn deterministic_output_is_byte_identical() {
    let args = [
        "--format",
        "json",
        "--deterministic",
        "bertini",
        "--n",
        "3",
        "--m",
        "3",
        "--trials",
        "6",
    ];
    let a = detcx(&[&["--jobs", "1"], &args[..]].concat());
    let b = detcx(&[&["--jobs", "3"], &args[..]].concat());
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
    assert!(!stdout(&a).contains("elapsed_ms"));
    let v: Value = serde_json::from_slice(&a.stdout).unwrap();
    validate("bertini", &v);
}

#[test]
fn bertini_csv_histogram() {
    let path = tmp("hist.csv");
    let o = detcx(&[
        "bertini",
        "--n",
        "2",
        "--m",
        "2",
        "--trials",
        "4",
        "--csv",
        path.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0);
    let csv = std::fs::read_to_string(&path).unwrap();
    assert_eq!(csv, "codim,count\n2,4\ndegenerate,0\ntimeout,0\n");
}

#[test]
fn search_emits_json_lines() {
    let o = detcx(&[
        "--format",
        "json",
        "--deterministic",
        "search",
        "--poly",
        "x^2+y*z",
        "--field",
        "Fp:3",
        "--m",
        "2",
        "--max-results",
        "3",
    ]);
    assert_eq!(code(&o), 0);
    let lines: Vec<Value> = stdout(&o).lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(lines.len(), 4);
    for l in &lines {
        validate("search_line", l);
    }
    assert_eq!(lines[3]["verdict"]["found_count"], 3);
    let o = detcx(&[
        "--format", "json", "search", "--poly", "x^3", "--field", "Fp:2", "--m", "2",
    ]);
    assert_eq!(code(&o), 1);
}

#[test]
fn dc_ground_truth() {
    let (c, v) = json(&["dc", "--poly", "x^2+y*z", "--field", "Fp:3"]);
    assert_eq!(c, 0);
    assert_eq!(v["dc"], 2);
    validate("dc", &v);
    let (c, v) = json(&["dc", "--poly", "x^3", "--field", "Fp:2", "--m-max", "2"]);
    assert_eq!(c, 1);
    assert_eq!(v["verdict"], "above");
    validate("dc", &v);
}

#[test]
fn remaining_outputs_match_schema() {
    let cases: [(&str, &[&str]); 9] = [
        ("parse", &["parse", "--poly", "fermat:3:5"]),
        ("codim", &["codim", "--poly", "det3"]),
        ("analyze", &["analyze", "--catalog", "grenet_perm_3"]),
        ("avoid_check", &["avoid-check", "--catalog", "quadric_2x2"]),
        ("grenet", &["grenet", "--n", "3"]),
        ("catalog_list", &["catalog"]),
        ("catalog_entry", &["catalog", "quadric_2x2", "--field", "Fp:5"]),
        ("coeff_eqs", &["coeff-eqs"]),
        ("cubic_case", &["cubic-case", "--systems", "full"]),
    ];
    for (def, args) in cases {
        let (_, v) = json(args);
        validate(def, &v);
    }
    let (c, v) = json(&["grenet", "--n", "3"]);
    assert_eq!(c, 0);
    assert_eq!(v["size"], 7);
    let (c, v) = json(&["analyze", "--catalog", "grenet_perm_3"]);
    assert_eq!(c, 0);
    assert_eq!(v["top_rank"]["all_checks_pass"], true);
    let (_, v) = json(&["cubic-case", "--systems", "full"]);
    assert_eq!(v["systems"][0]["claim_holds"], true);
}

#[test]
fn cone_reduce_drops_kernel() {
    let path = tmp("lin.json");
    std::fs::write(
        &path,
        r#"{"field":{"Fp":7},"vars":["a","b","c"],"m":2,"entries":[["a+b","0"],["c","a+b"]]}"#,
    )
    .unwrap();
    let (c, v) = json(&["cone-reduce", "--map", path.to_str().unwrap()]);
    assert_eq!(c, 0);
    assert_eq!(v["kernel_dim"], 1);
    assert_eq!(v["kept"], serde_json::json!(["a", "c"]));
    validate("cone_reduce", &v);
}

/// Every JSON leaf appears as a `path: value` line of the text rendering.
fn leaves(prefix: String, v: &Value, out: &mut Vec<String>) {
    let join = |k: &str| {
        if prefix.is_empty() {
            k.to_string()
        } else {
            format!("{prefix}.{k}")
        }
    };
    let scalar = |x: &Value| match x {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    };
    match v {
        Value::Object(m) => m.iter().for_each(|(k, x)| leaves(join(k), x, out)),
        Value::Array(a) if a.iter().any(|x| x.is_object() || x.is_array()) => a
            .iter()
            .enumerate()
            .for_each(|(i, x)| leaves(join(&i.to_string()), x, out)),
        Value::Array(a) => out.push(format!(
            "{prefix}: [{}]",
            a.iter().map(scalar).collect::<Vec<_>>().join(", ")
        )),
        x => out.push(format!("{prefix}: {}", scalar(x))),
    }
}

#[test]
fn text_and_json_carry_the_same_data() {
    let path = export_cubic();
    let cases: [&[&str]; 4] = [
        &["certify", "--poly", "perm3"],
        &["verify", "--map", path.to_str().unwrap(), "--poly", "cubic"],
        &["dc", "--poly", "x*y", "--field", "Fp:2"],
        &[
            "avoid-check",
            "--catalog",
            "quadric_2x2",
            "--mode",
            "probabilistic",
            "--trials",
            "20",
        ],
    ];
    for args in cases {
        let (_, v) = json(args);
        let text = stdout(&detcx(&[&["--deterministic"], args].concat()));
        let lines: Vec<&str> = text.lines().skip(1).collect();
        let mut expected = Vec::new();
        leaves(String::new(), &v, &mut expected);
        assert_eq!(lines, expected, "{args:?}");
    }
}
