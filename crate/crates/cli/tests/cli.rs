use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn pcf(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pcf")).args(args).env_remove("PCF_SEED").output().unwrap()
}

fn pcf_env(args: &[&str], seed: &str) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pcf")).args(args).env("PCF_SEED", seed).output().unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&o.stdout)))
}

fn tmp(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("pcf-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn gen(name: &str, args: &[&str]) -> PathBuf {
    let path = tmp(name);
    let mut full = vec!["gen"];
    full.extend_from_slice(args);
    full.extend_from_slice(&["-o", s(&path)]);
    let o = pcf(&full);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    path
}

fn load_schema(name: &str) -> Value {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("schemas").join(format!("{name}.schema.json"));
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

/// Replaces every reference to the colouring schema with its body, so each
/// schema compiles standalone.
fn inline_colouring(v: &mut Value, colouring: &Value) {
    match v {
        Value::Object(map) => {
            if map.get("$ref").and_then(Value::as_str) == Some("colouring.schema.json") {
                *v = colouring.clone();
                return;
            }
            map.values_mut().for_each(|x| inline_colouring(x, colouring));
        }
        Value::Array(items) => items.iter_mut().for_each(|x| inline_colouring(x, colouring)),
        _ => {}
    }
}

fn validate(name: &str, doc: &Value) {
    let mut colouring = load_schema("colouring");
    let obj = colouring.as_object_mut().unwrap();
    obj.remove("$schema");
    obj.remove("$id");
    let mut schema = load_schema(name);
    inline_colouring(&mut schema, &colouring);
    let validator = jsonschema::validator_for(&schema).unwrap();
    let errors: Vec<String> = validator.iter_errors(doc).map(|e| format!("{e} at {}", e.instance_path())).collect();
    assert!(errors.is_empty(), "{name}: {errors:?}");
}

#[test]
fn gen_colour_verify_round_trip() {
    let g = gen("petersen.col", &["petersen"]);
    let col = tmp("petersen.json");
    let o = pcf(&["colour", s(&g), "--h", "2", "-o", s(&col)]);
    assert_eq!(code(&o), 0);
    let doc: Value = serde_json::from_str(&std::fs::read_to_string(&col).unwrap()).unwrap();
    validate("colour", &doc);
    validate("colouring", &doc["colouring"]);
    assert_eq!(doc["verified"], true);
    assert!(doc["max_colour"].as_u64().unwrap() <= 3 * 3 + 1);

    let ok = pcf(&["verify", s(&g), s(&col), "--h", "2"]);
    assert_eq!(code(&ok), 0);
    let report = json(&ok);
    validate("verify", &report);
    assert_eq!(report["report"]["all_pass"], true);

    let bare = tmp("petersen-bare.json");
    std::fs::write(&bare, doc["colouring"].to_string()).unwrap();
    assert_eq!(code(&pcf(&["verify", s(&g), s(&bare), "--h", "2"])), 0);
    assert_eq!(code(&pcf(&["verify", s(&g), s(&bare), "--h", "2", "--target", "odd"])), 0);
}

#[test]
fn verification_failure_exits_3() {
    let g = gen("c5.col", &["cycle", "--n", "5"]);
    let col = tmp("c5-bad.json");
    std::fs::write(&col, r#"{"n":5,"colours":[1,2,1,2,3]}"#).unwrap();
    let o = pcf(&["verify", s(&g), s(&col), "--h", "1"]);
    assert_eq!(code(&o), 3);
    validate("verify", &json(&o));
    let improper = tmp("c5-improper.json");
    std::fs::write(&improper, r#"{"n":5,"colours":[1,1,2,3,4]}"#).unwrap();
    assert_eq!(code(&pcf(&["verify", s(&g), s(&improper), "--h", "0"])), 3);
}

#[test]
fn bad_input_exits_2() {
    assert_eq!(code(&pcf(&["colour", "/nonexistent/graph.col"])), 2);
    let broken = tmp("broken.col");
    std::fs::write(&broken, "p edge 3 1\ne 1 9\n").unwrap();
    assert_eq!(code(&pcf(&["colour", s(&broken)])), 2);
    let g = gen("c4.col", &["cycle", "--n", "4"]);
    let short = tmp("short.json");
    std::fs::write(&short, r#"{"n":3,"colours":[1,2,3]}"#).unwrap();
    assert_eq!(code(&pcf(&["verify", s(&g), s(&short)])), 2);
    assert_eq!(code(&pcf(&["prob", "chernoff-lower", "--mu", "10", "--delta", "1.5"])), 2);
    assert_eq!(code(&pcf_env(&["gen", "random", "--n", "10"], "not-a-number")), 2);
    assert_eq!(code(&pcf(&["gen", "regular", "--n", "5", "--d", "3", "--seed", "1"])), 2);
}

#[test]
fn oracle_exact_and_exhausted() {
    let g = gen("c7.col", &["cycle", "--n", "7"]);
    let o = pcf(&["oracle", s(&g), "--h", "1"]);
    assert_eq!(code(&o), 0);
    let doc = json(&o);
    validate("oracle", &doc);
    assert_eq!(doc["result"]["status"], "exact");
    assert_eq!(doc["result"]["value"], 4);

    let big = gen("k5s.col", &["subdivided", "--n", "5"]);
    let o = pcf(&["oracle", s(&big), "--h", "1", "--max-nodes", "3"]);
    assert_eq!(code(&o), 4);
    let doc = json(&o);
    validate("oracle", &doc);
    assert_eq!(doc["result"]["status"], "exhausted");
}

#[test]
fn seed_precedence_and_reproducibility() {
    let by_flag = pcf(&["gen", "random", "--n", "40", "--p", "0.2", "--seed", "11"]);
    let again = pcf(&["gen", "random", "--n", "40", "--p", "0.2", "--seed", "11"]);
    assert_eq!(by_flag.stdout, again.stdout);
    assert!(String::from_utf8_lossy(&by_flag.stderr).contains("seed: 11 (flag)"));

    let by_env = pcf_env(&["gen", "random", "--n", "40", "--p", "0.2"], "11");
    assert_eq!(by_env.stdout, by_flag.stdout);
    assert!(String::from_utf8_lossy(&by_env.stderr).contains("seed: 11 (PCF_SEED)"));

    let flag_wins = pcf_env(&["gen", "random", "--n", "40", "--p", "0.2", "--seed", "11"], "12");
    assert_eq!(flag_wins.stdout, by_flag.stdout);
    let other = pcf(&["gen", "random", "--n", "40", "--p", "0.2", "--seed", "12"]);
    assert_ne!(other.stdout, by_flag.stdout);

    let clock = pcf(&["gen", "random", "--n", "10"]);
    assert!(String::from_utf8_lossy(&clock.stderr).contains("(clock)"));
}

#[test]
fn pipelines_are_reproducible_and_verified() {
    let g = gen("gnp.col", &["random", "--n", "200", "--p", "0.2", "--seed", "3"]);
    let args = ["pipeline", "cor13", s(&g), "--h", "2", "--seed", "5"];
    let first = pcf(&args);
    assert_eq!(code(&first), 0, "{}", String::from_utf8_lossy(&first.stderr));
    assert_eq!(first.stdout, pcf(&args).stdout);
    let doc = json(&first);
    validate("pipeline", &doc);
    let col = tmp("gnp-cor13.json");
    std::fs::write(&col, &first.stdout).unwrap();
    assert_eq!(code(&pcf(&["verify", s(&g), s(&col), "--h", "2"])), 0);

    let reg = gen("reg.col", &["regular", "--n", "200", "--d", "40", "--seed", "3"]);
    let o = pcf(&["pipeline", "cor17", s(&reg), "--h", "1", "--seed", "5"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    validate("pipeline", &json(&o));

    let small = gen("c5p.col", &["cycle", "--n", "5"]);
    assert_eq!(code(&pcf(&["pipeline", "cor13", s(&small), "--strict", "--seed", "1"])), 2);
}

#[test]
fn precolour_and_nibble_documents() {
    let g = gen("dense.col", &["random", "--n", "200", "--p", "0.3", "--seed", "8"]);
    let pre = pcf(&["precolour", s(&g), "--h", "1", "--seed", "2"]);
    assert_eq!(code(&pre), 0, "{}", String::from_utf8_lossy(&pre.stderr));
    let pre_doc = json(&pre);
    validate("precolour", &pre_doc);

    let a = pcf(&["nibble", s(&g), "--variant", "a", "--h", "1", "--acceptance", "verified", "--seed", "2"]);
    assert_eq!(code(&a), 0, "{}", String::from_utf8_lossy(&a.stderr));
    let doc = json(&a);
    validate("nibble", &doc);
    assert_eq!(doc["summary"]["accepted"], true);

    let pre_path = tmp("dense-pre.json");
    std::fs::write(&pre_path, &pre.stdout).unwrap();
    let b = pcf(&["nibble", s(&g), "--variant", "B", "--h", "1", "--precolouring", s(&pre_path), "--seed", "2"]);
    assert!(matches!(code(&b), 0 | 4));
    validate("nibble", &json(&b));
}

#[test]
fn exhausted_restarts_exit_4() {
    // Sparse graph, one attempt: the low-degree reserve cannot survive.
    let g = gen("sparse.col", &["random", "--n", "300", "--p", "0.1", "--seed", "4"]);
    let o = pcf(&["nibble", s(&g), "--variant", "B", "--h", "2", "--max-restarts", "1", "--seed", "1"]);
    assert_eq!(code(&o), 4);
    let doc = json(&o);
    validate("nibble", &doc);
    assert_eq!(doc["summary"]["accepted"], false);
}

#[test]
fn prob_queries() {
    let o = pcf(&["prob", "tail", "--n", "100", "--p", "0.01", "--t", "5"]);
    assert_eq!(code(&o), 0);
    let doc = json(&o);
    validate("prob", &doc);
    assert!((doc["bound"].as_f64().unwrap() - (std::f64::consts::E / 5.0).powi(5)).abs() < 1e-12);
    assert_eq!(doc["holds"], true);

    let o = pcf(&["prob", "binomial", "--n", "200", "--p", "0.1"]);
    assert_eq!(code(&o), 0);
    validate("prob", &json(&o));
    for q in ["chernoff-lower", "chernoff-upper"] {
        let o = pcf(&["prob", q, "--mu", "50", "--delta", "0.5"]);
        assert_eq!(code(&o), 0);
        validate("prob", &json(&o));
    }

    let args = ["prob", "dominance", "--process", "sticky", "--trials", "2000", "--seed", "9"];
    let o = pcf(&args);
    assert_eq!(code(&o), 0);
    assert_eq!(o.stdout, pcf(&args).stdout);
    let doc = json(&o);
    validate("prob", &doc);
    assert_eq!(doc["report"]["pass"], true);
}

#[test]
fn bench_table_is_sorted_and_stable() {
    let args = ["bench", "cycles", "--n", "9", "--format", "text", "--seed", "1"];
    let o = pcf(&args);
    assert_eq!(code(&o), 0);
    assert_eq!(o.stdout, pcf(&args).stdout);
    let text = String::from_utf8(o.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert!(lines[0].starts_with("graph"));
    let graphs: Vec<&str> = lines[1..lines.len() - 1].iter().map(|l| l.split_whitespace().next().unwrap()).collect();
    let expected: Vec<String> = (4..=9).flat_map(|n| [format!("C{n}"), format!("C{n}")]).collect();
    assert_eq!(graphs, expected);
    assert_eq!(*lines.last().unwrap(), "verified 12/12, within bound 12/12");

    let o = pcf(&["bench", "random", "--seeds", "2", "--n", "120", "--p", "0.2", "--seed", "1"]);
    assert_eq!(code(&o), 0);
    let doc = json(&o);
    validate("bench", &doc);
    assert_eq!(doc["total"], 4);
}

#[test]
fn text_format_renders_key_value_lines() {
    let g = gen("c6.col", &["cycle", "--n", "6"]);
    let o = pcf(&["oracle", s(&g), "--format", "text"]);
    assert_eq!(code(&o), 0);
    let text = String::from_utf8(o.stdout).unwrap();
    assert!(text.contains("status: exact"));
    assert!(text.contains("value: 3"));
}
