//! Automata, words and value-function metadata.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::fmt;

use num::{One, Zero};
use thiserror::Error;

use crate::rational::{format_rational, int, Rational};

pub type StateId = usize;
pub type LetterId = usize;

/// Positive Boolean combination of weighted target states.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Condition {
    Leaf { weight: Rational, target: StateId },
    Or(Vec<Condition>),
    And(Vec<Condition>),
}

impl Condition {
    pub fn leaf(weight: Rational, target: StateId) -> Self {
        Condition::Leaf { weight, target }
    }

    /// Leaves in depth-first order; the position in this list is the leaf index.
    pub fn leaves(&self) -> Vec<(&Rational, StateId)> {
        let mut out = Vec::new();
        self.collect_leaves(&mut out);
        out
    }

    fn collect_leaves<'a>(&'a self, out: &mut Vec<(&'a Rational, StateId)>) {
        match self {
            Condition::Leaf { weight, target } => out.push((weight, *target)),
            Condition::Or(cs) | Condition::And(cs) => {
                for c in cs {
                    c.collect_leaves(out);
                }
            }
        }
    }

    pub fn contains_or(&self) -> bool {
        match self {
            Condition::Leaf { .. } => false,
            Condition::Or(_) => true,
            Condition::And(cs) => cs.iter().any(Condition::contains_or),
        }
    }

    pub fn contains_and(&self) -> bool {
        match self {
            Condition::Leaf { .. } => false,
            Condition::And(_) => true,
            Condition::Or(cs) => cs.iter().any(Condition::contains_and),
        }
    }

    pub fn map_leaves(&self, f: &mut impl FnMut(&Rational, StateId) -> (Rational, StateId)) -> Self {
        match self {
            Condition::Leaf { weight, target } => {
                let (w, t) = f(weight, *target);
                Condition::Leaf { weight: w, target: t }
            }
            Condition::Or(cs) => Condition::Or(cs.iter().map(|c| c.map_leaves(f)).collect()),
            Condition::And(cs) => Condition::And(cs.iter().map(|c| c.map_leaves(f)).collect()),
        }
    }

    /// Number of edges on the longest root-to-leaf path.
    pub fn depth(&self) -> usize {
        match self {
            Condition::Leaf { .. } => 0,
            Condition::Or(cs) | Condition::And(cs) => {
                1 + cs.iter().map(Condition::depth).max().unwrap_or(0)
            }
        }
    }

    fn has_empty_junction(&self) -> bool {
        match self {
            Condition::Leaf { .. } => false,
            Condition::Or(cs) | Condition::And(cs) => {
                cs.is_empty() || cs.iter().any(Condition::has_empty_junction)
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ValueFunction {
    Sum,
    Avg,
    Inf,
    Sup,
    DSum(Rational),
    LimInf,
    LimSup,
    LimInfAvg,
    LimSupAvg,
}

impl ValueFunction {
    pub fn name(&self) -> &'static str {
        match self {
            ValueFunction::Sum => "Sum",
            ValueFunction::Avg => "Avg",
            ValueFunction::Inf => "Inf",
            ValueFunction::Sup => "Sup",
            ValueFunction::DSum(_) => "DSum",
            ValueFunction::LimInf => "LimInf",
            ValueFunction::LimSup => "LimSup",
            ValueFunction::LimInfAvg => "LimInfAvg",
            ValueFunction::LimSupAvg => "LimSupAvg",
        }
    }

    pub fn allows(&self, mode: WordMode) -> bool {
        match self {
            ValueFunction::Sum | ValueFunction::Avg => mode == WordMode::Finite,
            ValueFunction::LimInf
            | ValueFunction::LimSup
            | ValueFunction::LimInfAvg
            | ValueFunction::LimSupAvg => mode == WordMode::Infinite,
            ValueFunction::Inf | ValueFunction::Sup | ValueFunction::DSum(_) => true,
        }
    }

    pub fn lambda(&self) -> Option<&Rational> {
        match self {
            ValueFunction::DSum(l) => Some(l),
            _ => None,
        }
    }
}

impl fmt::Display for ValueFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ValueFunction::DSum(l) => write!(f, "DSum({})", format_rational(l)),
            other => f.write_str(other.name()),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum WordMode {
    Finite,
    Infinite,
}

impl WordMode {
    pub fn name(self) -> &'static str {
        match self {
            WordMode::Finite => "finite",
            WordMode::Infinite => "infinite",
        }
    }
}

/// How a {0,1}-weighted automaton produced by thresholding is meant to be read.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BooleanReading {
    Nfa,
    Reachability,
    Safety,
    Buchi,
    CoBuchi,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AutomatonClass {
    Deterministic,
    Nondeterministic,
    Universal,
    Alternating,
}

impl AutomatonClass {
    pub fn name(self) -> &'static str {
        match self {
            AutomatonClass::Deterministic => "deterministic",
            AutomatonClass::Nondeterministic => "nondeterministic",
            AutomatonClass::Universal => "universal",
            AutomatonClass::Alternating => "alternating",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("missing transition for state `{state}` on letter `{letter}`")]
    MissingTransition { state: String, letter: String },
    #[error("transition of state `{state}` on letter `{letter}` targets unknown state `{target}`")]
    UnknownTarget { state: String, letter: String, target: String },
    #[error("empty disjunction or conjunction at state `{state}` letter `{letter}`")]
    EmptyJunction { state: String, letter: String },
    #[error("discount factor {0} is not strictly between 0 and 1")]
    BadLambda(String),
    #[error("value function {vf} is not available in {mode} mode")]
    ModeMismatch { vf: String, mode: String },
    #[error("alphabet is empty")]
    EmptyAlphabet,
    #[error("state set is empty")]
    EmptyStates,
    #[error("duplicate letter `{0}`")]
    DuplicateLetter(String),
    #[error("duplicate state `{0}`")]
    DuplicateState(String),
    #[error("unknown initial state `{0}`")]
    BadInitial(String),
    #[error("unknown letter `{0}`")]
    UnknownLetter(String),
    #[error("empty word")]
    EmptyWord,
    #[error("lasso cycle is empty")]
    EmptyCycle,
    #[error("value function {0} is not supported here")]
    UnsupportedValueFunction(String),
}

/// A finite word as a list of letter indices.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FiniteWord(pub Vec<LetterId>);

/// The ultimately periodic word `prefix · cycle^ω`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LassoWord {
    pub prefix: Vec<LetterId>,
    pub cycle: Vec<LetterId>,
}

impl LassoWord {
    pub fn new(prefix: Vec<LetterId>, cycle: Vec<LetterId>) -> Result<Self, ModelError> {
        if cycle.is_empty() {
            return Err(ModelError::EmptyCycle);
        }
        Ok(LassoWord { prefix, cycle })
    }

    pub fn size(&self) -> usize {
        self.prefix.len() + self.cycle.len()
    }

    /// Letter at position `i` of the infinite word.
    pub fn letter(&self, i: usize) -> LetterId {
        if i < self.prefix.len() {
            self.prefix[i]
        } else {
            self.cycle[(i - self.prefix.len()) % self.cycle.len()]
        }
    }

    /// Successor of a position in the finite index space `0..size()`.
    pub fn next_pos(&self, i: usize) -> usize {
        if i + 1 < self.size() {
            i + 1
        } else {
            self.prefix.len()
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Word {
    Finite(FiniteWord),
    Lasso(LassoWord),
}

/// A single weighted transition of a nondeterministic automaton.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Transition {
    pub source: StateId,
    pub letter: LetterId,
    pub weight: Rational,
    pub target: StateId,
    /// Index of the leaf in the depth-first leaf order of the condition.
    pub leaf: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Automaton {
    pub alphabet: Vec<String>,
    pub states: Vec<String>,
    pub initial: StateId,
    /// `delta[q][a]`; `None` only before validation succeeds.
    pub delta: Vec<Vec<Option<Condition>>>,
    pub value_function: ValueFunction,
    pub mode: WordMode,
    pub reading: Option<BooleanReading>,
}

impl Automaton {
    pub fn new(
        alphabet: Vec<String>,
        states: Vec<String>,
        initial: StateId,
        value_function: ValueFunction,
        mode: WordMode,
    ) -> Self {
        let n = states.len();
        let m = alphabet.len();
        Automaton {
            alphabet,
            states,
            initial,
            delta: vec![vec![None; m]; n],
            value_function,
            mode,
            reading: None,
        }
    }

    /// Builds a nondeterministic automaton from `(source, letter, weight, target)` edges.
    /// Several edges on the same source and letter become a disjunction.
    pub fn from_edges(
        alphabet: &[&str],
        states: &[&str],
        initial: &str,
        value_function: ValueFunction,
        mode: WordMode,
        edges: &[(&str, &str, Rational, &str)],
    ) -> Result<Self, ModelError> {
        let mut a = Automaton::new(
            alphabet.iter().map(|s| s.to_string()).collect(),
            states.iter().map(|s| s.to_string()).collect(),
            0,
            value_function,
            mode,
        );
        a.initial = a
            .state_index(initial)
            .ok_or_else(|| ModelError::BadInitial(initial.to_string()))?;
        let mut grouped: BTreeMap<(StateId, LetterId), Vec<Condition>> = BTreeMap::new();
        for (src, letter, w, dst) in edges {
            let q = a
                .state_index(src)
                .ok_or_else(|| ModelError::BadInitial(src.to_string()))?;
            let t = a.state_index(dst).ok_or_else(|| ModelError::UnknownTarget {
                state: src.to_string(),
                letter: letter.to_string(),
                target: dst.to_string(),
            })?;
            let l = a
                .letter_index(letter)
                .ok_or_else(|| ModelError::UnknownLetter(letter.to_string()))?;
            grouped.entry((q, l)).or_default().push(Condition::leaf(w.clone(), t));
        }
        for ((q, l), mut cs) in grouped {
            a.delta[q][l] = Some(if cs.len() == 1 { cs.pop().unwrap() } else { Condition::Or(cs) });
        }
        a.validate().map_err(|mut e| e.remove(0))?;
        Ok(a)
    }

    pub fn num_states(&self) -> usize {
        self.states.len()
    }

    pub fn num_letters(&self) -> usize {
        self.alphabet.len()
    }

    pub fn state_index(&self, name: &str) -> Option<StateId> {
        self.states.iter().position(|s| s == name)
    }

    pub fn letter_index(&self, name: &str) -> Option<LetterId> {
        self.alphabet.iter().position(|s| s == name)
    }

    /// Condition for `(q, a)`. Panics on an automaton that failed validation.
    pub fn cond(&self, q: StateId, a: LetterId) -> &Condition {
        self.delta[q][a]
            .as_ref()
            .expect("transition function is total after validation")
    }

    pub fn set(&mut self, q: StateId, a: LetterId, c: Condition) {
        self.delta[q][a] = Some(c);
    }

    /// All leaves of `δ(q, a)` as transitions.
    pub fn transitions(&self, q: StateId, a: LetterId) -> Vec<Transition> {
        self.cond(q, a)
            .leaves()
            .into_iter()
            .enumerate()
            .map(|(i, (w, t))| Transition {
                source: q,
                letter: a,
                weight: w.clone(),
                target: t,
                leaf: i,
            })
            .collect()
    }

    pub fn all_transitions(&self) -> Vec<Transition> {
        let mut out = Vec::new();
        for q in 0..self.num_states() {
            for a in 0..self.num_letters() {
                out.extend(self.transitions(q, a));
            }
        }
        out
    }

    /// Distinct weights in increasing order.
    pub fn weights(&self) -> Vec<Rational> {
        let mut set = BTreeSet::new();
        for row in &self.delta {
            for c in row.iter().flatten() {
                for (w, _) in c.leaves() {
                    set.insert(w.clone());
                }
            }
        }
        set.into_iter().collect()
    }

    pub fn min_weight(&self) -> Rational {
        self.weights().into_iter().next().unwrap_or_else(Rational::zero)
    }

    pub fn max_weight(&self) -> Rational {
        self.weights().into_iter().last().unwrap_or_else(Rational::zero)
    }

    pub fn is_disjunctive(&self) -> bool {
        matches!(
            self.classify(),
            AutomatonClass::Deterministic | AutomatonClass::Nondeterministic
        )
    }

    pub fn transition_name(&self, t: &Transition) -> String {
        format!(
            "{}-{}:{}->{}",
            self.states[t.source],
            self.alphabet[t.letter],
            format_rational(&t.weight),
            self.states[t.target]
        )
    }

    /// Parses a finite word. Single-character alphabets are read character by
    /// character, otherwise letters are separated by whitespace or commas.
    pub fn parse_letters(&self, s: &str) -> Result<Vec<LetterId>, ModelError> {
        let single = self.alphabet.iter().all(|l| l.chars().count() == 1);
        let tokens: Vec<String> = if single {
            s.chars().filter(|c| !c.is_whitespace()).map(|c| c.to_string()).collect()
        } else {
            s.split(|c: char| c.is_whitespace() || c == ',')
                .filter(|t| !t.is_empty())
                .map(str::to_string)
                .collect()
        };
        tokens
            .iter()
            .map(|t| self.letter_index(t).ok_or_else(|| ModelError::UnknownLetter(t.clone())))
            .collect()
    }

    pub fn format_letters(&self, w: &[LetterId]) -> String {
        let single = self.alphabet.iter().all(|l| l.chars().count() == 1);
        let parts: Vec<&str> = w.iter().map(|&l| self.alphabet[l].as_str()).collect();
        if single {
            parts.concat()
        } else {
            parts.join(" ")
        }
    }

    pub fn finite_word(&self, s: &str) -> Result<FiniteWord, ModelError> {
        let w = self.parse_letters(s)?;
        if w.is_empty() {
            return Err(ModelError::EmptyWord);
        }
        Ok(FiniteWord(w))
    }

    pub fn lasso(&self, prefix: &str, cycle: &str) -> Result<LassoWord, ModelError> {
        LassoWord::new(self.parse_letters(prefix)?, self.parse_letters(cycle)?)
    }

    /// Checks every structural invariant and reports all violations.
    pub fn validate(&self) -> Result<(), Vec<ModelError>> {
        let mut errs = Vec::new();
        if self.alphabet.is_empty() {
            errs.push(ModelError::EmptyAlphabet);
        }
        if self.states.is_empty() {
            errs.push(ModelError::EmptyStates);
        }
        let mut seen = BTreeSet::new();
        for l in &self.alphabet {
            if !seen.insert(l) {
                errs.push(ModelError::DuplicateLetter(l.clone()));
            }
        }
        let mut seen = BTreeSet::new();
        for s in &self.states {
            if !seen.insert(s) {
                errs.push(ModelError::DuplicateState(s.clone()));
            }
        }
        if self.initial >= self.states.len() {
            errs.push(ModelError::BadInitial(self.initial.to_string()));
        }
        if let ValueFunction::DSum(l) = &self.value_function {
            if *l <= Rational::zero() || *l >= Rational::one() {
                errs.push(ModelError::BadLambda(format_rational(l)));
            }
        }
        if !self.value_function.allows(self.mode) {
            errs.push(ModelError::ModeMismatch {
                vf: self.value_function.name().to_string(),
                mode: self.mode.name().to_string(),
            });
        }
        for q in 0..self.states.len() {
            for a in 0..self.alphabet.len() {
                let loc = || (self.states[q].clone(), self.alphabet[a].clone());
                match self.delta.get(q).and_then(|r| r.get(a)).and_then(Option::as_ref) {
                    None => {
                        let (state, letter) = loc();
                        errs.push(ModelError::MissingTransition { state, letter });
                    }
                    Some(c) => {
                        if c.has_empty_junction() {
                            let (state, letter) = loc();
                            errs.push(ModelError::EmptyJunction { state, letter });
                        }
                        for (_, t) in c.leaves() {
                            if t >= self.states.len() {
                                let (state, letter) = loc();
                                errs.push(ModelError::UnknownTarget {
                                    state,
                                    letter,
                                    target: t.to_string(),
                                });
                            }
                        }
                    }
                }
            }
        }
        if errs.is_empty() {
            Ok(())
        } else {
            Err(errs)
        }
    }

    pub fn classify(&self) -> AutomatonClass {
        let mut any_or = false;
        let mut any_and = false;
        for row in &self.delta {
            for c in row.iter().flatten() {
                any_or |= c.contains_or();
                any_and |= c.contains_and();
            }
        }
        match (any_or, any_and) {
            (false, false) => AutomatonClass::Deterministic,
            (true, false) => AutomatonClass::Nondeterministic,
            (false, true) => AutomatonClass::Universal,
            (true, true) => AutomatonClass::Alternating,
        }
    }

    /// Automaton with the same transition structure and a different value function.
    pub fn with_value_function(&self, vf: ValueFunction, mode: WordMode) -> Automaton {
        let mut b = self.clone();
        b.value_function = vf;
        b.mode = mode;
        b.reading = None;
        b
    }

    pub fn map_weights(&self, mut f: impl FnMut(&Rational) -> Rational) -> Automaton {
        let mut b = self.clone();
        for row in b.delta.iter_mut() {
            for c in row.iter_mut().flatten() {
                *c = c.map_leaves(&mut |w, t| (f(w), t));
            }
        }
        b
    }

    /// States reachable from the initial state.
    pub fn reachable_states(&self) -> Vec<bool> {
        let mut seen = vec![false; self.num_states()];
        let mut queue = VecDeque::from([self.initial]);
        seen[self.initial] = true;
        while let Some(q) = queue.pop_front() {
            for a in 0..self.num_letters() {
                for (_, t) in self.cond(q, a).leaves() {
                    if !seen[t] {
                        seen[t] = true;
                        queue.push_back(t);
                    }
                }
            }
        }
        seen
    }

    /// Copy of the automaton whose initial state is `q`.
    pub fn from_state(&self, q: StateId) -> Automaton {
        let mut b = self.clone();
        b.initial = q;
        b
    }
}

/// Boolean automaton accepting exactly the words of value at least `t`.
pub fn threshold_boolean_automaton(a: &Automaton, t: &Rational) -> Result<Automaton, ModelError> {
    let reading = match (&a.value_function, a.mode) {
        (ValueFunction::Sup, WordMode::Finite) => BooleanReading::Nfa,
        (ValueFunction::Sup, WordMode::Infinite) => BooleanReading::Reachability,
        (ValueFunction::LimSup, _) => BooleanReading::Buchi,
        (ValueFunction::Inf, _) => BooleanReading::Safety,
        (ValueFunction::LimInf, _) => BooleanReading::CoBuchi,
        (vf, _) => return Err(ModelError::UnsupportedValueFunction(vf.to_string())),
    };
    // Inf and LimInf keep their aggregator: a 0 marks a bad transition.
    let mut b = a.map_weights(|w| if w >= t { Rational::one() } else { Rational::zero() });
    b.reading = Some(reading);
    Ok(b)
}

/// Replaces weights by their rank `1..=v` among the distinct weights.
pub fn normalize_weight_ranks(
    a: &Automaton,
) -> Result<(Automaton, BTreeMap<Rational, usize>), ModelError> {
    match a.value_function {
        ValueFunction::LimInf | ValueFunction::LimSup => {}
        ref vf => return Err(ModelError::UnsupportedValueFunction(vf.to_string())),
    }
    let ranks: BTreeMap<Rational, usize> = a
        .weights()
        .into_iter()
        .enumerate()
        .map(|(i, w)| (w, i + 1))
        .collect();
    let b = a.map_weights(|w| int(ranks[w] as i64));
    Ok((b, ranks))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Tri {
    Yes,
    No,
    Unknown,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ValueFunctionTraits {
    pub present_focused: Tri,
    pub suffix_monotonic: bool,
}

pub fn value_function_traits(
    vf: &ValueFunction,
    mode: WordMode,
) -> Result<ValueFunctionTraits, ModelError> {
    if !vf.allows(mode) {
        return Err(ModelError::ModeMismatch {
            vf: vf.name().to_string(),
            mode: mode.name().to_string(),
        });
    }
    let present_focused = match (vf, mode) {
        (_, WordMode::Finite) => Tri::Yes,
        (ValueFunction::DSum(_), WordMode::Infinite) => Tri::Yes,
        _ => Tri::No,
    };
    let suffix_monotonic = !matches!(vf, ValueFunction::Inf | ValueFunction::Sup);
    Ok(ValueFunctionTraits {
        present_focused,
        suffix_monotonic,
    })
}

/// Turns an Inf (Sup) automaton into a LimInf (LimSup) automaton that tracks the
/// running minimum (maximum) in its state. Word values are preserved.
pub fn extremum_to_limit(a: &Automaton) -> Result<Automaton, ModelError> {
    let sup = match a.value_function {
        ValueFunction::Sup => true,
        ValueFunction::Inf => false,
        ref vf => return Err(ModelError::UnsupportedValueFunction(vf.to_string())),
    };
    let combine = |m: &Option<Rational>, x: &Rational| -> Rational {
        match m {
            None => x.clone(),
            Some(m) if sup => m.max(x).clone(),
            Some(m) => m.min(x).clone(),
        }
    };
    let mut index: HashMap<(StateId, Option<Rational>), StateId> = HashMap::new();
    let mut keys: Vec<(StateId, Option<Rational>)> = Vec::new();
    let start = (a.initial, None);
    index.insert(start.clone(), 0);
    keys.push(start);
    let mut rows: Vec<Vec<Condition>> = Vec::new();
    let mut i = 0;
    while i < keys.len() {
        let (q, m) = keys[i].clone();
        let mut row = Vec::new();
        for l in 0..a.num_letters() {
            let c = a.cond(q, l).map_leaves(&mut |x, t| {
                let m2 = combine(&m, x);
                let key = (t, Some(m2.clone()));
                let id = match index.get(&key) {
                    Some(&id) => id,
                    None => {
                        let id = keys.len();
                        index.insert(key.clone(), id);
                        keys.push(key);
                        id
                    }
                };
                (m2, id)
            });
            row.push(c);
        }
        rows.push(row);
        i += 1;
    }
    let names = keys
        .iter()
        .map(|(q, m)| match m {
            None => format!("{}|-", a.states[*q]),
            Some(m) => format!("{}|{}", a.states[*q], format_rational(m)),
        })
        .collect();
    let vf = if sup { ValueFunction::LimSup } else { ValueFunction::LimInf };
    let mut b = Automaton::new(a.alphabet.clone(), names, 0, vf, WordMode::Infinite);
    for (q, row) in rows.into_iter().enumerate() {
        for (l, c) in row.into_iter().enumerate() {
            b.set(q, l, c);
        }
    }
    Ok(b)
}

/// All nonempty words of length at most `max_len`, shortest first.
pub fn finite_words(letters: usize, max_len: usize) -> Vec<FiniteWord> {
    let mut out = Vec::new();
    let mut level: Vec<Vec<LetterId>> = vec![vec![]];
    for _ in 0..max_len {
        level = level
            .iter()
            .flat_map(|w| (0..letters).map(move |l| [w.as_slice(), &[l]].concat()))
            .collect();
        out.extend(level.iter().cloned().map(FiniteWord));
    }
    out
}

/// All lassos `u·v^ω` with `|u| + |v| ≤ max_size`, smallest first.
pub fn lasso_words(letters: usize, max_size: usize) -> Vec<LassoWord> {
    let words: Vec<Vec<LetterId>> = std::iter::once(vec![])
        .chain(finite_words(letters, max_size).into_iter().map(|w| w.0))
        .collect();
    let mut out = Vec::new();
    for size in 1..=max_size {
        for u in words.iter().filter(|u| u.len() < size) {
            for v in words.iter().filter(|v| v.len() == size - u.len()) {
                out.push(LassoWord {
                    prefix: u.clone(),
                    cycle: v.clone(),
                });
            }
        }
    }
    out
}
