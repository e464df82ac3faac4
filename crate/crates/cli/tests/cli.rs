use std::path::PathBuf;
use std::process::Command;
use std::sync::OnceLock;

use serde_json::{json, Value};

fn validator() -> &'static jsonschema::Validator {
    static V: OnceLock<jsonschema::Validator> = OnceLock::new();
    V.get_or_init(|| {
        let schema: Value = serde_json::from_str(include_str!("../schema/output.schema.json")).unwrap();
        jsonschema::validator_for(&schema).unwrap()
    })
}

/// Runs `qauto` and checks the output against the shipped schema.
fn qauto_env(args: &[&str], env: &[(&str, &str)]) -> (Value, i32) {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_qauto"));
    cmd.args(args).env_remove("QAUTO_MAX_DEPTH");
    for (k, v) in env {
        cmd.env(k, v);
    }
    let out = cmd.output().unwrap();
    let text = String::from_utf8(out.stdout).unwrap();
    let j: Value = serde_json::from_str(text.trim()).unwrap_or_else(|e| panic!("{args:?}: {e}: {text}"));
    let errors: Vec<String> = validator().iter_errors(&j).map(|e| e.to_string()).collect();
    assert!(errors.is_empty(), "{args:?} breaks the schema: {errors:?}\n{j}");
    (j, out.status.code().unwrap())
}

fn qauto(args: &[&str]) -> (Value, i32) {
    qauto_env(args, &[])
}

fn scratch(name: &str, content: &Value) -> String {
    let p = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(name);
    std::fs::write(&p, content.to_string()).unwrap();
    p.display().to_string()
}

fn expected_code(expect: &str) -> i32 {
    match expect {
        "yes" => 0,
        "no" => 1,
        "unknown" => 3,
        other => panic!("manifest expects `{other}`"),
    }
}

#[test]
fn value_of_the_discounted_figure() {
    let (j, code) = qauto(&["value", "fixture:fig-hdinf", "--word", r#"{"prefix":"","cycle":"a"}"#]);
    assert_eq!((j["value"].as_str(), code), (Some("1"), 0));
    let (j, _) = qauto(&["value", "fixture:fig-thdA", "--word", "ab"]);
    assert_eq!(j["value"], "1");
}

#[test]
fn threshold_figure_checks() {
    let (j, code) = qauto(&["check", "fixture:fig-thdA", "--property", "hd"]);
    assert_eq!((j["verdict"].as_str(), code), (Some("no"), 1));
    let (j, code) = qauto(&["check", "fixture:fig-thdA", "--property", "threshold-dbp", "--t", "1"]);
    assert_eq!((j["verdict"].as_str(), code), (Some("yes"), 0));
    let targets: Vec<&str> = j["witness"].as_array().unwrap().iter().map(|t| t["to"].as_str().unwrap()).collect();
    assert!(!targets.is_empty() && targets.iter().all(|t| *t == "q1"), "{j}");
}

#[test]
fn threshold_flags_are_checked() {
    let (j, code) = qauto(&["check", "fixture:fig-thdA", "--property", "threshold-hd"]);
    assert_eq!(code, 2);
    assert!(j["error"].as_str().unwrap().contains("--t"));
    assert_eq!(qauto(&["check", "fixture:fig-thdA", "--property", "hd", "--t", "1"]).1, 2);
    assert_eq!(qauto(&["check", "fixture:fig-thdA", "--property", "threshold-hd", "--t", "x/0"]).1, 2);
    assert_eq!(qauto(&["synthesize", "fixture:det-sum", "--mode", "local-threshold"]).1, 2);
}

#[test]
fn manifest_exit_codes() {
    let m: Value = serde_json::from_str(qauto_core::fixtures::MANIFEST).unwrap();
    for f in m["fixtures"].as_array().unwrap() {
        let src = format!("fixture:{}", f["file"].as_str().unwrap());
        for v in f["values"].as_array().unwrap() {
            let (j, code) = qauto(&["value", &src, "--word", &v["word"].to_string()]);
            assert_eq!((&j["value"], code), (&v["value"], 0), "{src} {v}");
        }
        for c in f["checks"].as_array().unwrap() {
            let mut args = vec!["check", &src, "--property", c["property"].as_str().unwrap()];
            if let Some(t) = c["t"].as_str() {
                args.extend(["--t", t]);
            }
            let (j, code) = qauto(&args);
            let expect = c["expect"].as_str().unwrap();
            assert_eq!(code, expected_code(expect), "{args:?}: {j}");
            assert_eq!(j["verdict"], expect);
        }
    }
}

#[test]
fn fixtures_verify_in_parallel() {
    let (j, code) = qauto(&["fixtures", "--verify", "--jobs", "3"]);
    assert_eq!(code, 0, "{j}");
    assert_eq!(j["failed"], 0);
    let (serial, _) = qauto(&["fixtures", "--verify"]);
    assert_eq!(serial["results"], j["results"]);
}

#[test]
fn fixtures_listing_and_writing() {
    let (j, code) = qauto(&["fixtures"]);
    assert_eq!(code, 0);
    let names: Vec<&str> = j["fixtures"].as_array().unwrap().iter().map(|n| n.as_str().unwrap()).collect();
    for f in ["fig-hdinf.json", "fig-thdA.json", "fig-thdB.json", "fig-limavg.json", "fig-dbpalt.json"] {
        assert!(names.contains(&f), "{f}");
    }
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("fixtures-out");
    let (j, code) = qauto(&["fixtures", "--write", dir.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(j["written"].as_array().unwrap().len(), names.len() + 1);
    let path = dir.join("fig-thdA.json");
    let (j, _) = qauto(&["value", path.to_str().unwrap(), "--word", "aa"]);
    assert_eq!(j["value"], "2");
}

#[test]
fn determinize_prints_the_pruning() {
    let (j, code) = qauto(&["determinize", "fixture:fig-hdinf"]);
    assert_eq!(code, 0, "{j}");
    let d = scratch("hdinf-pruned.json", &j["automaton"]);
    let (v, _) = qauto(&["value", &d, "--word", r#"{"prefix":"","cycle":"a"}"#]);
    assert_eq!(v["value"], "1");
    assert_eq!(qauto(&["check", &d, "--property", "hd"]).0["method"], "deterministic");
    assert_eq!(qauto(&["determinize", "fixture:fig-limavg"]).1, 1);
}

#[test]
fn oracle_and_depth_cap() {
    let args = ["oracle", "fixture:fig-hdinf-finite", "--side", "eve", "--t", "1", "--depth", "3"];
    let (j, code) = qauto(&args);
    assert_eq!((j["verdict"].as_str(), code), (Some("no"), 1), "{j}");
    assert_eq!(j["soundness"], "sound-refutation-only");
    let (j, code) = qauto_env(&args, &[("QAUTO_MAX_DEPTH", "2")]);
    assert_eq!(code, 2);
    assert!(j["error"].as_str().unwrap().contains("QAUTO_MAX_DEPTH"));
    assert_eq!(qauto_env(&args, &[("QAUTO_MAX_DEPTH", "deep")]).1, 2);
    let (j, code) = qauto(&["oracle", "fixture:det-sum", "--side", "adam", "--depth", "2"]);
    assert_eq!((j["verdict"].as_str(), code), (Some("unknown"), 3), "{j}");
}

#[test]
fn games_from_files() {
    let parity = json!({
        "positions": [{"name": "e", "owner": "eve"}, {"name": "odd", "owner": "adam"}, {"name": "even", "owner": "adam"}],
        "initial": "e",
        "edges": [
            {"from": "e", "to": "odd", "priority": 1},
            {"from": "e", "to": "even", "priority": 2},
            {"from": "odd", "to": "e", "priority": 1},
            {"from": "even", "to": "e", "priority": 0}
        ],
        "objective": {"type": "parity"}
    });
    let (j, code) = qauto(&["solve-game", &scratch("parity.json", &parity)]);
    assert_eq!((j["winner"].as_str(), code), (Some("eve"), 0), "{j}");
    assert!(j["strategy"]["e"].as_str().unwrap().contains("even"));
    let mp = json!({
        "positions": [{"name": "a", "owner": "adam"}, {"name": "b", "owner": "eve"}],
        "initial": "a",
        "edges": [
            {"from": "a", "to": "b", "weight": "1"},
            {"from": "a", "to": "a", "weight": "1/3"},
            {"from": "b", "to": "a", "weight": "0"}
        ],
        "objective": {"type": "mean-payoff"}
    });
    let (j, code) = qauto(&["solve-game", &scratch("mp.json", &mp)]);
    assert_eq!((j["value"].as_str(), code), (Some("1/3"), 0), "{j}");
    let mut loser = parity.clone();
    loser["edges"][1]["priority"] = json!(3);
    assert_eq!(qauto(&["solve-game", &scratch("parity-lost.json", &loser)]).1, 1);
    let mut none = parity;
    none.as_object_mut().unwrap().remove("objective");
    assert_eq!(qauto(&["solve-game", &scratch("no-objective.json", &none)]).1, 2);
}

#[test]
fn synthesis_from_files() {
    let spec = json!({
        "alphabet": ["x|0", "x|1", "y|0", "y|1"],
        "states": ["s"],
        "initial": "s",
        "value_function": {"type": "LimSupAvg"},
        "mode": "infinite",
        "delta": {"s": {
            "x|0": {"to": "s", "weight": "1"}, "x|1": {"to": "s", "weight": "0"},
            "y|0": {"to": "s", "weight": "0"}, "y|1": {"to": "s", "weight": "1"}
        }}
    });
    let path = scratch("matching.json", &spec);
    let (j, code) = qauto(&["synthesize", &path, "--mode", "global-value"]);
    assert_eq!((j["value"].as_str(), code), (Some("1"), 0), "{j}");
    let delta = &j["transducer"]["delta"];
    let init = j["transducer"]["initial"].as_str().unwrap();
    assert_eq!(delta[init]["x"]["output"], "0");
    assert_eq!(delta[init]["y"]["output"], "1");
    let (j, code) = qauto(&["synthesize", &path, "--mode", "global-threshold", "--t", "2"]);
    assert_eq!((j["verdict"].as_str(), code), (Some("no"), 1), "{j}");
    let (j, code) = qauto(&["synthesize", "fixture:fig-thdA", "--mode", "local-best", "--hd-instance"]);
    assert_eq!((j["verdict"].as_str(), code), (Some("no"), 1), "{j}");
    let (_, code) = qauto(&["synthesize", "fixture:fig-thdA", "--mode", "global-value"]);
    assert_eq!(code, 2);
}

#[test]
fn corpus_round_trips_through_files() {
    let (j, code) = qauto(&["corpus", "--seed", "5", "--count", "6", "--value-function", "DSum", "--lambda", "1/2"]);
    assert_eq!(code, 0);
    let automata = j["automata"].as_array().unwrap();
    assert_eq!(automata.len(), 6);
    for (k, a) in automata.iter().enumerate() {
        let p = scratch(&format!("corpus-{k}.json"), a);
        let parsed = qauto_core::json::parse_automaton(&std::fs::read_to_string(&p).unwrap()).unwrap();
        assert_eq!(serde_json::to_value(qauto_core::json::automaton_to_json(&parsed)).unwrap(), *a);
        let (v, code) = qauto(&["check", &p, "--property", "hd"]);
        assert!(matches!(code, 0 | 1 | 3), "{v}");
    }
    assert_eq!(qauto(&["corpus", "--value-function", "Median"]).1, 2);
}

#[test]
fn malformed_inputs_exit_2() {
    let bad = scratch("bad.json", &json!({"alphabet": ["a"], "states": ["q"], "initial": "q"}));
    let (j, code) = qauto(&["value", &bad, "--word", "a"]);
    assert_eq!(code, 2);
    assert!(j["error"].as_str().unwrap().contains("bad.json"), "{j}");
    let mut extra: Value = serde_json::from_str(qauto_core::fixtures::text("det-sum").unwrap()).unwrap();
    extra["colour"] = json!("red");
    assert_eq!(qauto(&["value", &scratch("extra.json", &extra), "--word", "a"]).1, 2);
    assert_eq!(qauto(&["value", "fixture:det-sum", "--word", "z"]).1, 2);
    assert_eq!(qauto(&["value", "fixture:nope", "--word", "a"]).1, 2);
    assert_eq!(qauto(&["value", "/nonexistent/a.json", "--word", "a"]).1, 2);
    assert_eq!(qauto(&["check", "fixture:det-sum", "--property", "det"]).1, 2);
}

#[test]
fn every_fixture_through_every_command() {
    for (file, _) in qauto_core::fixtures::FILES {
        let src = format!("fixture:{file}");
        let a = qauto_core::fixtures::load(file).unwrap();
        let word = match a.mode {
            qauto_core::WordMode::Finite => json!(a.alphabet[0]),
            qauto_core::WordMode::Infinite => json!({"prefix": "", "cycle": a.alphabet[0]}),
        };
        qauto(&["value", &src, "--word", &word.to_string()]);
        for p in ["hd", "gfg", "dbp"] {
            qauto(&["check", &src, "--property", p]);
        }
        for p in ["threshold-hd", "threshold-dbp"] {
            qauto(&["check", &src, "--property", p, "--t", "1"]);
        }
        qauto(&["determinize", &src]);
        qauto(&["oracle", &src, "--side", "adam", "--t", "1", "--depth", "2", "--reading", "dual"]);
        qauto(&["synthesize", &src, "--mode", "local-best", "--hd-instance"]);
        qauto(&["synthesize", &src, "--mode", "global-threshold", "--t", "1", "--hd-instance", "--assume-gfg"]);
    }
}
