//! JSON formats for automata, words, arenas and transducers.
//!
//! Rationals are strings ("3", "-1/2"). Unknown keys are rejected.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::game::{Arena, Objective, Player};
use crate::model::{Automaton, Condition, LassoWord, ModelError, ValueFunction, Word, WordMode};
use crate::rational::{format_rational, parse_rational, Rational};

#[derive(Debug, Error)]
pub enum JsonError {
    #[error("malformed JSON: {0}")]
    Syntax(#[from] serde_json::Error),
    #[error("{path}: {msg}")]
    Invalid { path: String, msg: String },
    #[error("invalid automaton: {}", .0.iter().map(|e| e.to_string()).collect::<Vec<_>>().join("; "))]
    Model(Vec<ModelError>),
}

fn invalid(path: impl Into<String>, msg: impl Into<String>) -> JsonError {
    JsonError::Invalid {
        path: path.into(),
        msg: msg.into(),
    }
}

fn rational(path: &str, s: &str) -> Result<Rational, JsonError> {
    parse_rational(s).map_err(|e| invalid(path, e.0))
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct ValueFunctionJson {
    #[serde(rename = "type")]
    pub kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda: Option<String>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(untagged)]
pub enum ConditionJson {
    Leaf(LeafJson),
    Or(OrJson),
    And(AndJson),
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct LeafJson {
    pub to: String,
    pub weight: String,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct OrJson {
    pub or: Vec<ConditionJson>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct AndJson {
    pub and: Vec<ConditionJson>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct AutomatonJson {
    pub alphabet: Vec<String>,
    pub states: Vec<String>,
    pub initial: String,
    pub value_function: ValueFunctionJson,
    pub mode: String,
    pub delta: BTreeMap<String, BTreeMap<String, ConditionJson>>,
}

pub fn value_function_from_json(v: &ValueFunctionJson) -> Result<ValueFunction, JsonError> {
    let vf = match v.kind.as_str() {
        "Sum" => ValueFunction::Sum,
        "Avg" => ValueFunction::Avg,
        "Inf" => ValueFunction::Inf,
        "Sup" => ValueFunction::Sup,
        "LimInf" => ValueFunction::LimInf,
        "LimSup" => ValueFunction::LimSup,
        "LimInfAvg" => ValueFunction::LimInfAvg,
        "LimSupAvg" => ValueFunction::LimSupAvg,
        "DSum" => {
            let l = v
                .lambda
                .as_deref()
                .ok_or_else(|| invalid("value_function.lambda", "DSum needs a discount factor"))?;
            return Ok(ValueFunction::DSum(rational("value_function.lambda", l)?));
        }
        other => return Err(invalid("value_function.type", format!("unknown value function `{other}`"))),
    };
    if v.lambda.is_some() {
        return Err(invalid("value_function.lambda", "only DSum takes a discount factor"));
    }
    Ok(vf)
}

pub fn value_function_to_json(vf: &ValueFunction) -> ValueFunctionJson {
    ValueFunctionJson {
        kind: vf.name().to_string(),
        lambda: vf.lambda().map(format_rational),
    }
}

pub fn mode_from_str(path: &str, s: &str) -> Result<WordMode, JsonError> {
    match s {
        "finite" => Ok(WordMode::Finite),
        "infinite" => Ok(WordMode::Infinite),
        other => Err(invalid(path, format!("unknown mode `{other}`"))),
    }
}

fn condition_from_json(
    c: &ConditionJson,
    states: &[String],
    path: &str,
) -> Result<Condition, JsonError> {
    let sub = |cs: &[ConditionJson], kind: &str| -> Result<Vec<Condition>, JsonError> {
        if cs.is_empty() {
            return Err(invalid(path, format!("empty `{kind}`")));
        }
        cs.iter()
            .enumerate()
            .map(|(i, c)| condition_from_json(c, states, &format!("{path}.{kind}[{i}]")))
            .collect()
    };
    match c {
        ConditionJson::Leaf(l) => {
            let target = states
                .iter()
                .position(|s| *s == l.to)
                .ok_or_else(|| invalid(path, format!("unknown target state `{}`", l.to)))?;
            Ok(Condition::Leaf {
                weight: rational(&format!("{path}.weight"), &l.weight)?,
                target,
            })
        }
        ConditionJson::Or(o) => Ok(Condition::Or(sub(&o.or, "or")?)),
        ConditionJson::And(a) => Ok(Condition::And(sub(&a.and, "and")?)),
    }
}

fn condition_to_json(c: &Condition, states: &[String]) -> ConditionJson {
    match c {
        Condition::Leaf { weight, target } => ConditionJson::Leaf(LeafJson {
            to: states[*target].clone(),
            weight: format_rational(weight),
        }),
        Condition::Or(cs) => ConditionJson::Or(OrJson {
            or: cs.iter().map(|c| condition_to_json(c, states)).collect(),
        }),
        Condition::And(cs) => ConditionJson::And(AndJson {
            and: cs.iter().map(|c| condition_to_json(c, states)).collect(),
        }),
    }
}

pub fn automaton_from_json(j: &AutomatonJson) -> Result<Automaton, JsonError> {
    let vf = value_function_from_json(&j.value_function)?;
    let mode = mode_from_str("mode", &j.mode)?;
    let initial = j
        .states
        .iter()
        .position(|s| *s == j.initial)
        .ok_or_else(|| JsonError::Model(vec![ModelError::BadInitial(j.initial.clone())]))?;
    let mut a = Automaton::new(j.alphabet.clone(), j.states.clone(), initial, vf, mode);
    for (q, row) in &j.delta {
        let qi = a
            .state_index(q)
            .ok_or_else(|| invalid(format!("delta.{q}"), "unknown state"))?;
        for (l, c) in row {
            let li = a
                .letter_index(l)
                .ok_or_else(|| invalid(format!("delta.{q}.{l}"), "unknown letter"))?;
            let cond = condition_from_json(c, &j.states, &format!("delta.{q}.{l}"))?;
            a.set(qi, li, cond);
        }
    }
    a.validate().map_err(JsonError::Model)?;
    Ok(a)
}

pub fn automaton_to_json(a: &Automaton) -> AutomatonJson {
    let mut delta = BTreeMap::new();
    for (q, name) in a.states.iter().enumerate() {
        let mut row = BTreeMap::new();
        for (l, letter) in a.alphabet.iter().enumerate() {
            if let Some(c) = &a.delta[q][l] {
                row.insert(letter.clone(), condition_to_json(c, &a.states));
            }
        }
        delta.insert(name.clone(), row);
    }
    AutomatonJson {
        alphabet: a.alphabet.clone(),
        states: a.states.clone(),
        initial: a.states[a.initial].clone(),
        value_function: value_function_to_json(&a.value_function),
        mode: a.mode.name().to_string(),
        delta,
    }
}

pub fn parse_automaton(text: &str) -> Result<Automaton, JsonError> {
    let j: AutomatonJson = serde_json::from_str(text)?;
    automaton_from_json(&j)
}

pub fn automaton_to_string(a: &Automaton) -> String {
    serde_json::to_string_pretty(&automaton_to_json(a)).expect("automaton serializes")
}

// ---------------------------------------------------------------- words

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(untagged)]
pub enum WordJson {
    Finite(String),
    Lasso(LassoJson),
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct LassoJson {
    pub prefix: String,
    pub cycle: String,
}

/// Reads a word given either as JSON (`"ab"` or `{"prefix":..,"cycle":..}`)
/// or as a bare string of letters.
pub fn parse_word(a: &Automaton, text: &str) -> Result<Word, JsonError> {
    let j: WordJson = match serde_json::from_str(text) {
        Ok(j) => j,
        Err(_) if !text.trim_start().starts_with(['{', '"']) => WordJson::Finite(text.to_string()),
        Err(e) => return Err(e.into()),
    };
    let model = |e: ModelError| JsonError::Model(vec![e]);
    match j {
        WordJson::Finite(s) => Ok(Word::Finite(a.finite_word(&s).map_err(model)?)),
        WordJson::Lasso(l) => Ok(Word::Lasso(a.lasso(&l.prefix, &l.cycle).map_err(model)?)),
    }
}

pub fn word_to_json(a: &Automaton, w: &Word) -> WordJson {
    match w {
        Word::Finite(f) => WordJson::Finite(a.format_letters(&f.0)),
        Word::Lasso(LassoWord { prefix, cycle }) => WordJson::Lasso(LassoJson {
            prefix: a.format_letters(prefix),
            cycle: a.format_letters(cycle),
        }),
    }
}

// ---------------------------------------------------------------- arenas

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct PositionJson {
    pub name: String,
    pub owner: String,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub terminal: bool,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct EdgeJson {
    pub from: String,
    pub to: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weight: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub priority: Option<u32>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(tag = "type", rename_all = "kebab-case", deny_unknown_fields)]
pub enum ObjectiveJson {
    Safety { bad: Vec<String> },
    Parity,
    Energy { checkpoints: Vec<String> },
    MeanPayoff,
    Discounted { lambda: String, t: String },
    FiniteValue {
        value_function: ValueFunctionJson,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        depth: Option<usize>,
    },
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct ArenaJson {
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub alphabet: Vec<String>,
    pub positions: Vec<PositionJson>,
    pub initial: String,
    pub edges: Vec<EdgeJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub objective: Option<ObjectiveJson>,
}

/// An arena with the objective it was shipped with and an optional depth bound.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GameFile {
    pub arena: Arena,
    pub objective: Option<Objective>,
    pub depth: Option<usize>,
}

pub fn arena_from_json(j: &ArenaJson) -> Result<GameFile, JsonError> {
    let mut arena = Arena::new(j.alphabet.clone());
    for (i, p) in j.positions.iter().enumerate() {
        let owner = match p.owner.as_str() {
            "eve" => Player::Eve,
            "adam" => Player::Adam,
            o => return Err(invalid(format!("positions[{i}].owner"), format!("unknown owner `{o}`"))),
        };
        if arena.position_index(&p.name).is_some() {
            return Err(invalid(format!("positions[{i}].name"), format!("duplicate position `{}`", p.name)));
        }
        let id = arena.add_position(p.name.clone(), owner);
        arena.terminal[id] = p.terminal;
    }
    let pos = |path: String, name: &str, arena: &Arena| {
        arena
            .position_index(name)
            .ok_or_else(|| invalid(path, format!("unknown position `{name}`")))
    };
    arena.initial = pos("initial".into(), &j.initial, &arena)?;
    for (i, e) in j.edges.iter().enumerate() {
        let from = pos(format!("edges[{i}].from"), &e.from, &arena)?;
        let to = pos(format!("edges[{i}].to"), &e.to, &arena)?;
        let label = match &e.label {
            None => None,
            Some(l) => Some(
                arena
                    .alphabet
                    .iter()
                    .position(|x| x == l)
                    .ok_or_else(|| invalid(format!("edges[{i}].label"), format!("unknown letter `{l}`")))?,
            ),
        };
        let weight = match &e.weight {
            None => None,
            Some(w) => Some(rational(&format!("edges[{i}].weight"), w)?),
        };
        arena.add_edge(from, to, label, weight, e.priority);
    }
    let mark = |names: &[String], arena: &Arena, what: &str| -> Result<Vec<bool>, JsonError> {
        let mut v = vec![false; arena.len()];
        for n in names {
            v[pos(format!("objective.{what}"), n, arena)?] = true;
        }
        Ok(v)
    };
    let mut depth = None;
    let objective = match &j.objective {
        None => None,
        Some(ObjectiveJson::Safety { bad }) => Some(Objective::Safety(mark(bad, &arena, "bad")?)),
        Some(ObjectiveJson::Parity) => Some(Objective::Parity),
        Some(ObjectiveJson::Energy { checkpoints }) => Some(Objective::EnergyThreshold {
            checkpoints: mark(checkpoints, &arena, "checkpoints")?,
        }),
        Some(ObjectiveJson::MeanPayoff) => Some(Objective::MeanPayoffValue),
        Some(ObjectiveJson::Discounted { lambda, t }) => Some(Objective::DiscountedThreshold {
            lambda: rational("objective.lambda", lambda)?,
            t: rational("objective.t", t)?,
        }),
        Some(ObjectiveJson::FiniteValue { value_function, depth: d }) => {
            depth = *d;
            Some(Objective::FiniteValue(value_function_from_json(value_function)?))
        }
    };
    Ok(GameFile { arena, objective, depth })
}

pub fn arena_to_json(g: &GameFile) -> ArenaJson {
    let a = &g.arena;
    let names = |v: &[bool]| -> Vec<String> {
        v.iter()
            .enumerate()
            .filter(|(_, b)| **b)
            .map(|(i, _)| a.names[i].clone())
            .collect()
    };
    let objective = g.objective.as_ref().map(|o| match o {
        Objective::Safety(bad) => ObjectiveJson::Safety { bad: names(bad) },
        Objective::Parity => ObjectiveJson::Parity,
        Objective::EnergyThreshold { checkpoints } => ObjectiveJson::Energy {
            checkpoints: names(checkpoints),
        },
        Objective::MeanPayoffValue => ObjectiveJson::MeanPayoff,
        Objective::DiscountedThreshold { lambda, t } => ObjectiveJson::Discounted {
            lambda: format_rational(lambda),
            t: format_rational(t),
        },
        Objective::FiniteValue(vf) => ObjectiveJson::FiniteValue {
            value_function: value_function_to_json(vf),
            depth: g.depth,
        },
    });
    ArenaJson {
        alphabet: a.alphabet.clone(),
        positions: (0..a.len())
            .map(|p| PositionJson {
                name: a.names[p].clone(),
                owner: a.owners[p].name().to_string(),
                terminal: a.terminal[p],
            })
            .collect(),
        initial: a.names[a.initial].clone(),
        edges: a
            .edges
            .iter()
            .map(|e| EdgeJson {
                from: a.names[e.from].clone(),
                to: a.names[e.to].clone(),
                label: e.label.map(|l| a.alphabet[l].clone()),
                weight: e.weight.as_ref().map(format_rational),
                priority: e.priority,
            })
            .collect(),
        objective,
    }
}

pub fn parse_arena(text: &str) -> Result<GameFile, JsonError> {
    let j: ArenaJson = serde_json::from_str(text)?;
    arena_from_json(&j)
}
