//! Uniform output of every decider.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use crate::json::WordJson;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum VerdictKind {
    Yes,
    No,
    Unknown,
}

impl fmt::Display for VerdictKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            VerdictKind::Yes => "yes",
            VerdictKind::No => "no",
            VerdictKind::Unknown => "unknown",
        })
    }
}

/// How far a verdict can be trusted.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Soundness {
    /// Both answers are exact.
    Exact,
    /// A No is a genuine counterexample; nothing else is claimed.
    SoundRefutationOnly,
    /// The answer holds up to the explored bound only.
    Bounded,
}

/// One pruned transition, kept as names for serialization.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct PrunedTransition {
    pub state: String,
    pub letter: String,
    pub weight: String,
    pub to: String,
}

/// A refuter strategy tree: the refuter's move, then one subtree per reply.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PlayTree {
    #[serde(rename = "move")]
    pub mv: String,
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub replies: BTreeMap<String, PlayTree>,
    /// Set on leaves: why the play is lost for the owner of the game.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub violation: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(untagged)]
pub enum Witness {
    /// Position name to the name of the chosen edge.
    Strategy(BTreeMap<String, String>),
    Pruning(Vec<PrunedTransition>),
    Tree(PlayTree),
    Word {
        word: WordJson,
        #[serde(skip_serializing_if = "Option::is_none")]
        left: Option<String>,
        #[serde(skip_serializing_if = "Option::is_none")]
        right: Option<String>,
    },
    /// Per-threshold sub-verdicts, keyed by threshold.
    Thresholds(BTreeMap<String, Verdict>),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Verdict {
    #[serde(rename = "verdict")]
    pub kind: VerdictKind,
    pub method: String,
    pub soundness: Soundness,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl Verdict {
    pub fn yes(method: impl Into<String>, soundness: Soundness, witness: Option<Witness>) -> Self {
        Verdict {
            kind: VerdictKind::Yes,
            method: method.into(),
            soundness,
            witness,
            reason: None,
            notes: vec![],
        }
    }

    pub fn no(method: impl Into<String>, soundness: Soundness, witness: Option<Witness>) -> Self {
        Verdict {
            kind: VerdictKind::No,
            method: method.into(),
            soundness,
            witness,
            reason: None,
            notes: vec![],
        }
    }

    pub fn unknown(method: impl Into<String>, soundness: Soundness, reason: impl Into<String>) -> Self {
        Verdict {
            kind: VerdictKind::Unknown,
            method: method.into(),
            soundness,
            witness: None,
            reason: Some(reason.into()),
            notes: vec![],
        }
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.notes.push(note.into());
        self
    }

    pub fn is_yes(&self) -> bool {
        self.kind == VerdictKind::Yes
    }

    pub fn is_no(&self) -> bool {
        self.kind == VerdictKind::No
    }

    pub fn is_unknown(&self) -> bool {
        self.kind == VerdictKind::Unknown
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("verdicts serialize")
    }
}
