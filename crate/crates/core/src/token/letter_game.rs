//! Depth-bounded search of the letter games.
//!
//! The refuter (the opponent of the game's owner) picks letters. Eve resolves
//! disjunctions and Adam resolves conjunctions, so the run is one path through
//! the automaton. A refutation is a strategy tree for the refuter that forces
//! a violation of the owner's winning condition. In infinite mode the refuter
//! may at any round commit to a lasso continuation, after which the rest of the
//! run is worth the automaton value from the current state on that lasso.

use std::collections::{BTreeMap, HashMap};

use num::{One, Zero};

use super::TokenError;
use crate::game::Player;
use crate::model::{Automaton, Condition, LassoWord, LetterId, StateId, ValueFunction, WordMode};
use crate::rational::{format_rational, pow, Rational};
use crate::valuation::{automaton_value_finite, automaton_value_lasso, run_value, WeightSequence};
use crate::verdict::{PlayTree, Soundness, Verdict, Witness};
use crate::FiniteWord;

pub const DEFAULT_CAP: usize = 12;
pub const DEFAULT_FINITE_DEPTH: usize = 6;
pub const DEFAULT_INFINITE_DEPTH: usize = 5;

/// Search bound. In infinite mode `depth` also bounds `|u| + |v|` of the
/// lassos the refuter may commit to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LetterGameBound {
    pub depth: usize,
    pub cap: usize,
}

impl LetterGameBound {
    pub fn new(depth: usize) -> Self {
        LetterGameBound { depth, cap: DEFAULT_CAP }
    }

    pub fn default_for(mode: WordMode) -> Self {
        match mode {
            WordMode::Finite => Self::new(DEFAULT_FINITE_DEPTH),
            WordMode::Infinite => Self::new(DEFAULT_INFINITE_DEPTH),
        }
    }

    pub fn with_cap(mut self, cap: usize) -> Self {
        self.cap = cap;
        self
    }
}

/// Reading of Adam's threshold condition.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AdamThreshold {
    /// `A(w) < t ⟹ Val(π) < A(w)`, exactly as stated. Deterministic
    /// automata lose this game whenever some word has value below `t`.
    Verbatim,
    /// `A(w) < t ⟹ Val(π) < t`.
    Dual,
}

/// A refuter strategy in tree form.
#[derive(Clone, Debug)]
enum Node {
    Refuter(String, Box<Node>),
    Owner(BTreeMap<String, Node>),
    Violation(String),
}

impl Node {
    fn into_tree(self) -> PlayTree {
        let mut moves = Vec::new();
        let mut node = self;
        loop {
            match node {
                Node::Refuter(m, next) => {
                    moves.push(m);
                    node = *next;
                }
                Node::Violation(v) => {
                    return PlayTree {
                        mv: if moves.is_empty() { "stop".into() } else { moves.join(" ") },
                        replies: BTreeMap::new(),
                        violation: Some(v),
                    }
                }
                Node::Owner(map) => {
                    return PlayTree {
                        mv: if moves.is_empty() { "wait".into() } else { moves.join(" ") },
                        replies: map.into_iter().map(|(k, v)| (k, v.into_tree())).collect(),
                        violation: None,
                    }
                }
            }
        }
    }
}

/// Shortest representation of a lasso: primitive cycle, shortest prefix.
fn canonical(prefix: &[LetterId], cycle: &[LetterId]) -> (Vec<LetterId>, Vec<LetterId>) {
    let n = cycle.len();
    let root = (1..=n)
        .find(|&d| n % d == 0 && (0..n).all(|i| cycle[i] == cycle[i % d]))
        .unwrap_or(n);
    let mut cycle = cycle[..root].to_vec();
    let mut prefix = prefix.to_vec();
    while let (Some(&p), Some(&c)) = (prefix.last(), cycle.last()) {
        if p != c {
            break;
        }
        prefix.pop();
        cycle.rotate_right(1);
    }
    (prefix, cycle)
}

struct Search<'a> {
    a: &'a Automaton,
    owner: Player,
    threshold: Option<&'a Rational>,
    reading: AdamThreshold,
    depth: usize,
    word_values: HashMap<(Vec<LetterId>, Vec<LetterId>), Rational>,
    state_values: HashMap<(StateId, Vec<LetterId>, Vec<LetterId>), Rational>,
    memo: HashMap<(Vec<LetterId>, StateId, Option<Rational>), Option<Node>>,
}

impl Search<'_> {
    fn refuter(&self) -> Player {
        self.owner.opponent()
    }

    fn summary(&self, weights: &[Rational]) -> Option<Rational> {
        if weights.is_empty() {
            return None;
        }
        match self.a.value_function {
            ValueFunction::Sum | ValueFunction::Avg | ValueFunction::Inf | ValueFunction::Sup | ValueFunction::DSum(_) => {
                run_value(&self.a.value_function, &WeightSequence::Finite(weights.to_vec())).ok()
            }
            _ => None,
        }
    }

    /// Why the play with run value `val` on a word of value `aw` is lost for the owner.
    fn violation(&self, val: &Rational, aw: &Rational) -> Option<String> {
        let (v, w) = (format_rational(val), format_rational(aw));
        let lost = match (self.owner, self.threshold) {
            (Player::Eve, None) => val < aw,
            (Player::Eve, Some(t)) => aw >= t && val < t,
            (Player::Adam, None) => val > aw,
            (Player::Adam, Some(t)) => {
                aw < t
                    && match self.reading {
                        AdamThreshold::Verbatim => val >= aw,
                        AdamThreshold::Dual => val >= t,
                    }
            }
        };
        lost.then(|| format!("run value {v}, word value {w}"))
    }

    fn word_value(&mut self, prefix: &[LetterId], cycle: Option<&[LetterId]>) -> Result<Rational, TokenError> {
        let key = match cycle {
            None => (prefix.to_vec(), vec![]),
            Some(c) => canonical(prefix, c),
        };
        if let Some(v) = self.word_values.get(&key) {
            return Ok(v.clone());
        }
        let v = match cycle {
            None => automaton_value_finite(self.a, &FiniteWord(key.0.clone()))?,
            Some(_) => automaton_value_lasso(self.a, &LassoWord::new(key.0.clone(), key.1.clone())?)?,
        };
        self.word_values.insert(key, v.clone());
        Ok(v)
    }

    fn state_value(&mut self, q: StateId, x: &[LetterId], v: &[LetterId]) -> Result<Rational, TokenError> {
        let (x, v) = canonical(x, v);
        let key = (q, x, v);
        if let Some(r) = self.state_values.get(&key) {
            return Ok(r.clone());
        }
        let r = automaton_value_lasso(&self.a.from_state(q), &LassoWord::new(key.1.clone(), key.2.clone())?)?;
        self.state_values.insert(key, r.clone());
        Ok(r)
    }

    /// Value of the whole run when `weights` were seen and the rest is worth `s`.
    fn combine(&self, weights: &[Rational], s: Rational) -> Rational {
        match &self.a.value_function {
            ValueFunction::Inf => weights.iter().fold(s, |m, w| m.min(w.clone())),
            ValueFunction::Sup => weights.iter().fold(s, |m, w| m.max(w.clone())),
            ValueFunction::DSum(l) => {
                let mut acc = Rational::zero();
                let mut d = Rational::one();
                for w in weights {
                    acc += &d * w;
                    d *= l;
                }
                acc + pow(l, weights.len()) * s
            }
            _ => s,
        }
    }

    /// Refuter's options at the start of a round.
    fn round(&mut self, prefix: &mut Vec<LetterId>, q: StateId, weights: &mut Vec<Rational>) -> Result<Option<Node>, TokenError> {
        let key = (prefix.clone(), q, self.summary(weights));
        if let Some(r) = self.memo.get(&key) {
            return Ok(r.clone());
        }
        let r = self.round_uncached(prefix, q, weights)?;
        self.memo.insert(key, r.clone());
        Ok(r)
    }

    fn round_uncached(&mut self, prefix: &mut Vec<LetterId>, q: StateId, weights: &mut Vec<Rational>) -> Result<Option<Node>, TokenError> {
        match self.a.mode {
            WordMode::Finite => {
                if !prefix.is_empty() {
                    let val = self.summary(weights).expect("finite-word value functions");
                    let aw = self.word_value(prefix, None)?;
                    if let Some(v) = self.violation(&val, &aw) {
                        return Ok(Some(Node::Violation(v)));
                    }
                }
            }
            WordMode::Infinite => {
                if let Some(n) = self.commit(prefix, q, weights)? {
                    return Ok(Some(n));
                }
            }
        }
        if prefix.len() >= self.depth {
            return Ok(None);
        }
        for l in 0..self.a.num_letters() {
            prefix.push(l);
            let cond = self.a.cond(q, l).clone();
            let r = self.resolve(&cond, prefix, weights)?;
            prefix.pop();
            if let Some(n) = r {
                return Ok(Some(Node::Refuter(self.a.alphabet[l].clone(), Box::new(n))));
            }
        }
        Ok(None)
    }

    /// Tries every lasso continuation that fits in the bound.
    fn commit(&mut self, prefix: &[LetterId], q: StateId, weights: &[Rational]) -> Result<Option<Node>, TokenError> {
        let k = self.a.num_letters();
        let room = self.depth.saturating_sub(prefix.len());
        for n in 1..=room {
            for xl in 0..n {
                let vl = n - xl;
                let total = k.pow(n as u32);
                for code in 0..total {
                    let mut c = code;
                    let mut letters = Vec::with_capacity(n);
                    for _ in 0..n {
                        letters.push(c % k);
                        c /= k;
                    }
                    let (x, v) = letters.split_at(xl);
                    debug_assert_eq!(v.len(), vl);
                    let s = self.state_value(q, x, v)?;
                    let val = self.combine(weights, s);
                    let mut whole = prefix.to_vec();
                    whole.extend_from_slice(x);
                    let aw = self.word_value(&whole, Some(v))?;
                    if let Some(why) = self.violation(&val, &aw) {
                        let mv = format!(
                            "commit {}({})^ω",
                            self.a.format_letters(x),
                            self.a.format_letters(v)
                        );
                        return Ok(Some(Node::Refuter(mv, Box::new(Node::Violation(why)))));
                    }
                }
            }
        }
        Ok(None)
    }

    fn resolve(&mut self, cond: &Condition, prefix: &mut Vec<LetterId>, weights: &mut Vec<Rational>) -> Result<Option<Node>, TokenError> {
        match cond {
            Condition::Leaf { weight, target } => {
                weights.push(weight.clone());
                let r = self.round(prefix, *target, weights);
                weights.pop();
                r
            }
            Condition::Or(cs) | Condition::And(cs) => {
                let chooser = if matches!(cond, Condition::Or(_)) { Player::Eve } else { Player::Adam };
                let label = |c: &Condition, i: usize| match c {
                    Condition::Leaf { weight, target } => {
                        format!("{}:{}", format_rational(weight), self.a.states[*target])
                    }
                    _ => format!("branch {i}"),
                };
                let labels: Vec<String> = cs.iter().enumerate().map(|(i, c)| label(c, i)).collect();
                if chooser == self.refuter() {
                    for (c, l) in cs.iter().zip(labels) {
                        if let Some(n) = self.resolve(c, prefix, weights)? {
                            return Ok(Some(Node::Refuter(l, Box::new(n))));
                        }
                    }
                    Ok(None)
                } else {
                    let mut map = BTreeMap::new();
                    for (c, l) in cs.iter().zip(labels) {
                        match self.resolve(c, prefix, weights)? {
                            Some(n) => {
                                map.insert(l, n);
                            }
                            None => return Ok(None),
                        }
                    }
                    Ok(Some(Node::Owner(map)))
                }
            }
        }
    }
}

/// Searches for a refutation of `owner`'s letter game. `Some(tree)` is a
/// refuter strategy that wins within the bound.
pub fn refute_letter_game(
    a: &Automaton,
    owner: Player,
    threshold: Option<&Rational>,
    reading: AdamThreshold,
    bound: LetterGameBound,
) -> Result<Option<PlayTree>, TokenError> {
    if bound.depth == 0 {
        return Err(TokenError::BadBound);
    }
    if bound.depth > bound.cap {
        return Err(TokenError::DepthTooLarge {
            depth: bound.depth,
            cap: bound.cap,
        });
    }
    let mut s = Search {
        a,
        owner,
        threshold,
        reading,
        depth: bound.depth,
        word_values: HashMap::new(),
        state_values: HashMap::new(),
        memo: HashMap::new(),
    };
    let r = s.round(&mut Vec::new(), a.initial, &mut Vec::new())?;
    Ok(r.map(Node::into_tree))
}

/// Bounded letter game with Adam's threshold condition read verbatim.
pub fn bounded_letter_game(
    a: &Automaton,
    owner: Player,
    threshold: Option<&Rational>,
    bound: LetterGameBound,
) -> Result<Verdict, TokenError> {
    bounded_letter_game_with(a, owner, threshold, AdamThreshold::Verbatim, bound)
}

pub fn bounded_letter_game_with(
    a: &Automaton,
    owner: Player,
    threshold: Option<&Rational>,
    reading: AdamThreshold,
    bound: LetterGameBound,
) -> Result<Verdict, TokenError> {
    let method = "letter-game-oracle";
    let r = refute_letter_game(a, owner, threshold, reading, bound)?;
    let mut v = match r {
        Some(tree) => Verdict::no(method, Soundness::SoundRefutationOnly, Some(Witness::Tree(tree))),
        None => Verdict::unknown(
            method,
            Soundness::Bounded,
            format!("no refutation within depth {}", bound.depth),
        ),
    };
    v.notes.push(format!("game: {}'s letter game", owner.name()));
    if let Some(t) = threshold {
        v.notes.push(format!("threshold: {}", format_rational(t)));
        if owner == Player::Adam {
            v.notes.push(match reading {
                AdamThreshold::Verbatim => "adam-threshold-reading: verbatim (ambiguous)".to_string(),
                AdamThreshold::Dual => "adam-threshold-reading: dual".to_string(),
            });
        }
    }
    Ok(v)
}
