//! Bundled automata with their expected verdicts.

use crate::json::{parse_automaton, JsonError};
use crate::model::Automaton;

/// `(file name, JSON text)` for every bundled automaton.
pub const FILES: &[(&str, &str)] = &[
    ("fig-hdinf.json", include_str!("../fixtures/fig-hdinf.json")),
    ("fig-hdinf-finite.json", include_str!("../fixtures/fig-hdinf-finite.json")),
    ("fig-thdA.json", include_str!("../fixtures/fig-thdA.json")),
    ("fig-thdB.json", include_str!("../fixtures/fig-thdB.json")),
    ("fig-limavg.json", include_str!("../fixtures/fig-limavg.json")),
    ("fig-dbpalt.json", include_str!("../fixtures/fig-dbpalt.json")),
    ("det-sum.json", include_str!("../fixtures/det-sum.json")),
    ("det-limsup.json", include_str!("../fixtures/det-limsup.json")),
];

pub const MANIFEST: &str = include_str!("../fixtures/manifest.json");

pub fn text(name: &str) -> Option<&'static str> {
    let key = name.strip_suffix(".json").unwrap_or(name);
    FILES
        .iter()
        .find(|(f, _)| f.strip_suffix(".json") == Some(key))
        .map(|(_, t)| *t)
}

/// Loads a bundled automaton by file name, with or without the extension.
pub fn load(name: &str) -> Result<Automaton, JsonError> {
    let t = text(name).ok_or_else(|| JsonError::Invalid {
        path: name.to_string(),
        msg: "no such fixture".into(),
    })?;
    parse_automaton(t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::AutomatonClass;

    #[test]
    fn every_fixture_parses() {
        for (name, _) in FILES {
            load(name).unwrap_or_else(|e| panic!("{name}: {e}"));
        }
        let m: serde_json::Value = serde_json::from_str(MANIFEST).unwrap();
        assert_eq!(m["fixtures"].as_array().unwrap().len(), FILES.len());
    }

    #[test]
    fn manifest_values() {
        use crate::json::parse_word;
        use crate::rational::parse_rational;
        use crate::valuation::automaton_value;
        let m: serde_json::Value = serde_json::from_str(MANIFEST).unwrap();
        for f in m["fixtures"].as_array().unwrap() {
            let a = load(f["file"].as_str().unwrap()).unwrap();
            for v in f["values"].as_array().unwrap() {
                let w = parse_word(&a, &v["word"].to_string()).unwrap();
                let expected = parse_rational(v["value"].as_str().unwrap()).unwrap();
                assert_eq!(automaton_value(&a, &w).unwrap(), expected, "{} on {}", f["file"], v["word"]);
            }
        }
    }

    #[test]
    fn classes() {
        assert_eq!(load("fig-thdA").unwrap().classify(), AutomatonClass::Nondeterministic);
        assert_eq!(load("fig-dbpalt").unwrap().classify(), AutomatonClass::Alternating);
        assert_eq!(load("det-sum").unwrap().classify(), AutomatonClass::Deterministic);
    }
}
