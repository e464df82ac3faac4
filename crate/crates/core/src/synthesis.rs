//! Quantitative synthesis over input/output alphabets.
//!
//! Specifications are automata over `Σ_I × Σ_O` whose letters are written
//! `i|o`. Global synthesis solves the game where Adam picks inputs and Eve
//! picks outputs. Local synthesis asks for a transducer matching, on every
//! input, the best value any output sequence achieves; this is history
//! determinism of the projection onto the inputs.

use std::collections::{BTreeSet, HashMap, VecDeque};

use num::{One, Zero};
use serde_json::{json, Map, Value};
use thiserror::Error;

use crate::game::{
    product_game_automaton, solve_dsum, solve_mean_payoff_value, solve_parity, solve_reachability_edges,
    solve_safety_edges, Arena, GameError, Player, PositionalStrategy, ProductPosition,
};
use crate::model::{
    finite_words, lasso_words, threshold_boolean_automaton, Automaton, AutomatonClass, Condition, FiniteWord,
    LassoWord, LetterId, ModelError, StateId, Transition, ValueFunction, Word, WordMode,
};
use crate::pruning::{extract_dbp_witness, threshold_dbp_witness, PruningError, PruningOptions};
use crate::rational::{format_rational, Rational};
use crate::token::{
    check_threshold_hd, decide_gfg_with, decide_hd, decide_threshold_hd, LetterGameBound, TokenError,
};
use crate::valuation::{automaton_value, ValuationError};
use crate::verdict::{PrunedTransition, Soundness, Verdict, Witness};

#[derive(Debug, Error)]
pub enum SynthesisError {
    #[error("alphabet error: {0}")]
    Alphabet(String),
    #[error("class error: {0}")]
    Class(String),
    #[error("{0}")]
    Mode(String),
    #[error("precondition not verified: {0}")]
    PreconditionUnverified(String),
    #[error("unsupported value function: {0}")]
    UnsupportedValueFunction(String),
    #[error(transparent)]
    Token(#[from] TokenError),
    #[error(transparent)]
    Pruning(#[from] PruningError),
    #[error(transparent)]
    Game(#[from] GameError),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Valuation(#[from] ValuationError),
}

/// An automaton over `Σ_I × Σ_O`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IOAutomaton {
    pub automaton: Automaton,
    pub inputs: Vec<String>,
    pub outputs: Vec<String>,
    /// `letters[i][o]` is the letter `i|o`.
    letters: Vec<Vec<LetterId>>,
    pairs: Vec<(usize, usize)>,
}

impl IOAutomaton {
    /// Splits every letter at its first `|`. The letters must form the full
    /// product of the inputs and outputs seen.
    pub fn new(automaton: Automaton) -> Result<Self, SynthesisError> {
        let mut inputs: Vec<String> = Vec::new();
        let mut outputs: Vec<String> = Vec::new();
        let mut pairs = Vec::with_capacity(automaton.num_letters());
        for l in &automaton.alphabet {
            let (i, o) = l
                .split_once('|')
                .ok_or_else(|| SynthesisError::Alphabet(format!("letter `{l}` is not of the form input|output")))?;
            let find = |v: &mut Vec<String>, s: &str| match v.iter().position(|x| x == s) {
                Some(k) => k,
                None => {
                    v.push(s.to_string());
                    v.len() - 1
                }
            };
            pairs.push((find(&mut inputs, i), find(&mut outputs, o)));
        }
        if outputs.is_empty() {
            return Err(SynthesisError::Alphabet("no output letters".into()));
        }
        let mut letters = vec![vec![usize::MAX; outputs.len()]; inputs.len()];
        for (l, &(i, o)) in pairs.iter().enumerate() {
            if letters[i][o] != usize::MAX {
                return Err(SynthesisError::Alphabet(format!("letter `{}` is repeated", automaton.alphabet[l])));
            }
            letters[i][o] = l;
        }
        for (i, row) in letters.iter().enumerate() {
            if let Some(o) = row.iter().position(|&l| l == usize::MAX) {
                return Err(SynthesisError::Alphabet(format!(
                    "missing letter `{}|{}`",
                    inputs[i], outputs[o]
                )));
            }
        }
        Ok(IOAutomaton {
            automaton,
            inputs,
            outputs,
            letters,
            pairs,
        })
    }

    pub fn letter(&self, i: usize, o: usize) -> LetterId {
        self.letters[i][o]
    }

    /// `(input, output)` of a letter.
    pub fn split(&self, l: LetterId) -> (usize, usize) {
        self.pairs[l]
    }
}

/// A Mealy machine from inputs to outputs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Transducer {
    pub inputs: Vec<String>,
    pub outputs: Vec<String>,
    pub states: Vec<String>,
    pub initial: usize,
    /// `delta[s][i] = (output, next state)`.
    pub delta: Vec<Vec<(usize, usize)>>,
}

impl Transducer {
    pub fn outputs_for(&self, input: &[usize]) -> Vec<usize> {
        let mut s = self.initial;
        input
            .iter()
            .map(|&i| {
                let (o, t) = self.delta[s][i];
                s = t;
                o
            })
            .collect()
    }

    /// `I ⊗ T(I)` over the letters of `a`. Input letters index `a.inputs`.
    pub fn combine(&self, a: &IOAutomaton, input: &Word) -> Word {
        match input {
            Word::Finite(w) => {
                let outs = self.outputs_for(&w.0);
                Word::Finite(FiniteWord(w.0.iter().zip(outs).map(|(&i, o)| a.letter(i, o)).collect()))
            }
            Word::Lasso(w) => {
                let mut seen: HashMap<(usize, usize), usize> = HashMap::new();
                let mut out = Vec::new();
                let (mut pos, mut s) = (0, self.initial);
                loop {
                    if let Some(&k) = seen.get(&(pos, s)) {
                        let cycle = out.split_off(k);
                        return Word::Lasso(LassoWord { prefix: out, cycle });
                    }
                    seen.insert((pos, s), out.len());
                    let i = w.letter(pos);
                    let (o, t) = self.delta[s][i];
                    out.push(a.letter(i, o));
                    s = t;
                    pos = w.next_pos(pos);
                }
            }
        }
    }

    /// `{"states", "initial", "delta": state → input → {"output", "to"}}`.
    pub fn to_json(&self) -> Value {
        let mut delta = Map::new();
        for (s, row) in self.delta.iter().enumerate() {
            let mut m = Map::new();
            for (i, &(o, t)) in row.iter().enumerate() {
                m.insert(self.inputs[i].clone(), json!({"output": self.outputs[o], "to": self.states[t]}));
            }
            delta.insert(self.states[s].clone(), Value::Object(m));
        }
        json!({"states": self.states, "initial": self.states[self.initial], "delta": delta})
    }
}

/// What a transducer promises.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Contract {
    /// `f(I ⊗ T(I)) = best_f(I)` for every input.
    BestValue,
    /// `f(I ⊗ T(I)) ≥ t` whenever `best_f(I) ≥ t`.
    Threshold(Rational),
    /// `f(I ⊗ T(I)) ≥ t` for every input.
    AtLeast(Rational),
}

/// First input violating the contract among finite inputs up to `len` or
/// lassos up to `lasso`, depending on the mode of `a`.
pub fn verify_transducer(
    a: &IOAutomaton,
    t: &Transducer,
    contract: &Contract,
    len: usize,
    lasso: usize,
) -> Result<Option<Word>, SynthesisError> {
    let p = project_to_input(a)?;
    let inputs: Vec<Word> = match a.automaton.mode {
        WordMode::Finite => finite_words(a.inputs.len(), len).into_iter().map(Word::Finite).collect(),
        WordMode::Infinite => lasso_words(a.inputs.len(), lasso).into_iter().map(Word::Lasso).collect(),
    };
    for w in inputs {
        let got = automaton_value(&a.automaton, &t.combine(a, &w))?;
        let ok = match contract {
            Contract::BestValue => got == automaton_value(&p, &w)?,
            Contract::Threshold(x) => &got >= x || &automaton_value(&p, &w)? < x,
            Contract::AtLeast(x) => &got >= x,
        };
        if !ok {
            return Ok(Some(w));
        }
    }
    Ok(None)
}

/// Result of a synthesis call: `yes` means realizable.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SynthesisOutcome {
    pub verdict: Verdict,
    pub value: Option<Rational>,
    pub transducer: Option<Transducer>,
}

impl SynthesisOutcome {
    fn new(verdict: Verdict) -> Self {
        SynthesisOutcome {
            verdict,
            value: None,
            transducer: None,
        }
    }

    pub fn is_realizable(&self) -> bool {
        self.verdict.is_yes()
    }

    pub fn to_json(&self) -> Value {
        let mut j = self.verdict.to_json();
        if let Some(v) = &self.value {
            j["value"] = json!(format_rational(v));
        }
        if let Some(t) = &self.transducer {
            j["transducer"] = t.to_json();
        }
        j
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SynthesisOptions {
    /// Skip the good-for-games check for nondeterministic specifications.
    pub assume_gfg: bool,
    pub bound: LetterGameBound,
    pub pruning: PruningOptions,
}

impl SynthesisOptions {
    pub fn for_mode(mode: WordMode) -> Self {
        SynthesisOptions {
            assume_gfg: false,
            bound: LetterGameBound::default_for(mode),
            pruning: PruningOptions::for_mode(mode),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum SynthPos {
    /// Adam picks the next input.
    State(StateId),
    /// Eve picks an output and, for nondeterministic specifications, a transition.
    Input(StateId, usize),
    /// Inner node of an alternating condition.
    Node { state: StateId, letter: LetterId, path: Vec<usize> },
}

pub struct SynthesisArena {
    pub arena: Arena,
    pub kinds: Vec<SynthPos>,
    /// Output and transition of Eve's edges, for disjunctive specifications.
    pub moves: Vec<Option<(usize, Transition)>>,
}

/// The synthesis game of `a`: Adam picks inputs, Eve outputs and Or
/// branches, Adam And branches, edge weights from `a`.
pub fn build_synthesis_game(a: &IOAutomaton) -> Result<SynthesisArena, SynthesisError> {
    if a.outputs.is_empty() {
        return Err(SynthesisError::Alphabet("Eve has no output to choose".into()));
    }
    let aut = &a.automaton;
    if !aut.is_disjunctive() {
        return alternating_game(a);
    }
    let mut g = SynthesisArena {
        arena: Arena::new(aut.alphabet.clone()),
        kinds: Vec::new(),
        moves: Vec::new(),
    };
    let mut index: HashMap<SynthPos, usize> = HashMap::new();
    let mut queue = VecDeque::new();
    let mut intern = |k: SynthPos, g: &mut SynthesisArena, queue: &mut VecDeque<usize>| {
        if let Some(&i) = index.get(&k) {
            return i;
        }
        let (name, owner) = match &k {
            SynthPos::State(q) => (aut.states[*q].clone(), Player::Adam),
            SynthPos::Input(q, i) => (format!("{}·{}", aut.states[*q], a.inputs[*i]), Player::Eve),
            SynthPos::Node { .. } => unreachable!("disjunctive specifications have no inner nodes"),
        };
        let i = g.arena.add_position(name, owner);
        g.kinds.push(k.clone());
        index.insert(k, i);
        queue.push_back(i);
        i
    };
    g.arena.initial = intern(SynthPos::State(aut.initial), &mut g, &mut queue);
    while let Some(p) = queue.pop_front() {
        match g.kinds[p].clone() {
            SynthPos::State(q) => {
                for i in 0..a.inputs.len() {
                    let t = intern(SynthPos::Input(q, i), &mut g, &mut queue);
                    g.arena.add_edge(p, t, None, None, None);
                    g.moves.push(None);
                }
            }
            SynthPos::Input(q, i) => {
                for o in 0..a.outputs.len() {
                    let l = a.letter(i, o);
                    for tr in aut.transitions(q, l) {
                        let t = intern(SynthPos::State(tr.target), &mut g, &mut queue);
                        g.arena.add_edge(p, t, Some(l), Some(tr.weight.clone()), None);
                        g.moves.push(Some((o, tr)));
                    }
                }
            }
            SynthPos::Node { .. } => unreachable!(),
        }
    }
    Ok(g)
}

/// Alternating specifications go through the product with the bare I/O arena.
fn alternating_game(a: &IOAutomaton) -> Result<SynthesisArena, SynthesisError> {
    let mut io = Arena::new(a.automaton.alphabet.clone());
    let root = io.add_position("in", Player::Adam);
    for i in 0..a.inputs.len() {
        let p = io.add_position(format!("in·{}", a.inputs[i]), Player::Eve);
        io.add_edge(root, p, None, None, None);
        for o in 0..a.outputs.len() {
            io.add_edge(p, root, Some(a.letter(i, o)), None, None);
        }
    }
    let prod = product_game_automaton(&io, &a.automaton)?;
    let kinds = prod
        .kinds
        .into_iter()
        .map(|k| match k {
            ProductPosition::Base { game: 0, state } => SynthPos::State(state),
            ProductPosition::Base { game, state } => SynthPos::Input(state, game - 1),
            ProductPosition::Node { state, letter, path, .. } => SynthPos::Node { state, letter, path },
        })
        .collect();
    let moves = vec![None; prod.arena.edges.len()];
    Ok(SynthesisArena {
        arena: prod.arena,
        kinds,
        moves,
    })
}

fn require_infinite(a: &Automaton) -> Result<(), SynthesisError> {
    if a.mode == WordMode::Finite {
        return Err(SynthesisError::Mode(
            "global synthesis is defined on infinite words; use local synthesis for finite ones".into(),
        ));
    }
    Ok(())
}

fn require_disjunctive(a: &Automaton) -> Result<AutomatonClass, SynthesisError> {
    match a.classify() {
        c @ (AutomatonClass::Deterministic | AutomatonClass::Nondeterministic) => Ok(c),
        c => Err(SynthesisError::Class(format!("{} specifications are not supported here", c.name()))),
    }
}

/// Eve's winning region and strategy for value at least `t`.
fn threshold_game(g: &SynthesisArena, vf: &ValueFunction, t: &Rational) -> Result<(bool, PositionalStrategy), SynthesisError> {
    let arena = &g.arena;
    let at_least = |e: usize| arena.edges[e].weight.as_ref().is_some_and(|w| w >= t);
    let below = |e: usize| arena.edges[e].weight.as_ref().is_some_and(|w| w < t);
    let none = vec![false; arena.len()];
    let (wins, strategy) = match vf {
        ValueFunction::Sup => {
            let s = solve_reachability_edges(arena, &none, &at_least);
            (s.eve_wins, s.eve_strategy)
        }
        ValueFunction::Inf => {
            let s = solve_safety_edges(arena, &none, &below);
            (s.eve_wins, s.eve_strategy)
        }
        ValueFunction::LimSup | ValueFunction::LimInf => {
            let mut h = arena.clone();
            let sup = *vf == ValueFunction::LimSup;
            for e in h.edges.iter_mut() {
                e.priority = Some(match &e.weight {
                    None => 0,
                    Some(w) if sup => 1 + u32::from(w >= t),
                    Some(w) => u32::from(w < t),
                });
            }
            let s = solve_parity(&h)?;
            (s.eve_wins, s.eve_strategy)
        }
        ValueFunction::DSum(l) => {
            let s = solve_dsum(arena, l)?;
            (s.values.iter().map(|v| v >= t).collect(), s.eve_strategy)
        }
        ValueFunction::LimInfAvg | ValueFunction::LimSupAvg => {
            let s = solve_mean_payoff_value(&mean_payoff_arena(arena))?;
            let mut wins = vec![false; arena.len()];
            wins[arena.initial] = &s.value >= t;
            (wins, s.eve_strategy)
        }
        vf => return Err(SynthesisError::UnsupportedValueFunction(format!("{vf} on infinite words"))),
    };
    Ok((wins[arena.initial], strategy))
}

/// Every round of the disjunctive arena is one unweighted input edge and one
/// weighted output edge; doubling the latter keeps the mean per letter.
fn mean_payoff_arena(arena: &Arena) -> Arena {
    let mut h = arena.clone();
    for e in h.edges.iter_mut() {
        e.weight = Some(match &e.weight {
            Some(w) => w + w,
            None => Rational::zero(),
        });
    }
    h
}

/// Reads the transducer off a positional strategy of the disjunctive arena.
fn strategy_transducer(a: &IOAutomaton, g: &SynthesisArena, strategy: &PositionalStrategy) -> Transducer {
    let arena = &g.arena;
    let mut ids: HashMap<usize, usize> = HashMap::new();
    let mut order = vec![arena.initial];
    ids.insert(arena.initial, 0);
    let mut delta = Vec::new();
    let mut k = 0;
    while k < order.len() {
        let p = order[k];
        let mut row = Vec::with_capacity(a.inputs.len());
        for &e in &arena.out[p] {
            let x = arena.edges[e].to;
            let chosen = strategy[x].unwrap_or(arena.out[x][0]);
            let (o, _) = g.moves[chosen].as_ref().expect("output edges carry their move");
            let next = arena.edges[chosen].to;
            let id = *ids.entry(next).or_insert_with(|| {
                order.push(next);
                order.len() - 1
            });
            row.push((*o, id));
        }
        delta.push(row);
        k += 1;
    }
    Transducer {
        inputs: a.inputs.clone(),
        outputs: a.outputs.clone(),
        states: order.iter().map(|&p| arena.names[p].clone()).collect(),
        initial: 0,
        delta,
    }
}

fn assumed(opts: &SynthesisOptions) -> Option<String> {
    opts.assume_gfg
        .then(|| "good-for-games assumed, not verified; an unrealizable answer relies on it".to_string())
}

/// Global synthesis for the threshold `t`: a transducer with
/// `f(I ⊗ T(I)) ≥ t` for every input, or unrealizable.
pub fn global_threshold_synthesis(
    a: &IOAutomaton,
    t: &Rational,
    opts: &SynthesisOptions,
) -> Result<SynthesisOutcome, SynthesisError> {
    let aut = &a.automaton;
    require_infinite(aut)?;
    let class = require_disjunctive(aut)?;
    let mut notes: Vec<String> = Vec::new();
    if class == AutomatonClass::Nondeterministic {
        if let Some(n) = assumed(opts) {
            notes.push(n);
        } else {
            let pre = match aut.value_function {
                ValueFunction::Inf | ValueFunction::Sup | ValueFunction::LimInf | ValueFunction::LimSup => {
                    decide_threshold_hd(aut, t)?
                }
                _ => decide_hd(aut, opts.bound)?,
            };
            if !pre.is_yes() {
                return Err(SynthesisError::PreconditionUnverified(format!(
                    "threshold history determinism at {} is {} ({})",
                    format_rational(t),
                    pre.kind,
                    pre.method
                )));
            }
            notes.push(format!("threshold history deterministic at {} ({})", format_rational(t), pre.method));
        }
    }
    let g = build_synthesis_game(a)?;
    let (wins, strategy) = threshold_game(&g, &aut.value_function, t)?;
    let method = "synthesis-game-threshold";
    let mut out = if wins {
        let mut o = SynthesisOutcome::new(Verdict::yes(method, Soundness::Exact, None));
        o.transducer = Some(strategy_transducer(a, &g, &strategy));
        o
    } else {
        SynthesisOutcome::new(Verdict::no(method, Soundness::Exact, None))
    };
    out.verdict.notes = notes;
    out.verdict.notes.push(format!("threshold: {}", format_rational(t)));
    Ok(out)
}

/// The best value Eve guarantees in the synthesis game, with an optimal transducer.
pub fn global_value_synthesis(a: &IOAutomaton, opts: &SynthesisOptions) -> Result<SynthesisOutcome, SynthesisError> {
    let aut = &a.automaton;
    require_infinite(aut)?;
    let class = require_disjunctive(aut)?;
    let mut notes: Vec<String> = Vec::new();
    if class == AutomatonClass::Nondeterministic {
        if let Some(n) = assumed(opts) {
            notes.push(n);
        } else {
            let pre = decide_gfg_with(aut, opts.bound, opts.pruning.jobs)?;
            if !pre.is_yes() {
                return Err(SynthesisError::PreconditionUnverified(format!(
                    "good-for-gameness is {} ({})",
                    pre.kind, pre.method
                )));
            }
            notes.push(format!("good for games ({})", pre.method));
        }
    }
    let g = build_synthesis_game(a)?;
    let (method, value, strategy) = match &aut.value_function {
        vf @ (ValueFunction::Inf | ValueFunction::Sup | ValueFunction::LimInf | ValueFunction::LimSup) => {
            let mut found = None;
            for t in aut.weights().iter().rev() {
                let (wins, s) = threshold_game(&g, vf, t)?;
                if wins {
                    found = Some((t.clone(), s));
                    break;
                }
            }
            let (t, s) = found.ok_or_else(|| GameError::UnsolvableObjective("no weight is guaranteed".into()))?;
            ("synthesis-game-threshold-descent", t, s)
        }
        ValueFunction::DSum(l) => {
            let s = solve_dsum(&g.arena, l)?;
            ("synthesis-game-discounted", s.values[g.arena.initial].clone(), s.eve_strategy)
        }
        ValueFunction::LimInfAvg | ValueFunction::LimSupAvg => {
            let s = solve_mean_payoff_value(&mean_payoff_arena(&g.arena))?;
            ("synthesis-game-mean-payoff", s.value, s.eve_strategy)
        }
        vf => return Err(SynthesisError::UnsupportedValueFunction(format!("{vf} on infinite words"))),
    };
    let mut out = SynthesisOutcome::new(Verdict::yes(method, Soundness::Exact, None));
    out.verdict.notes = notes;
    out.transducer = Some(strategy_transducer(a, &g, &strategy));
    out.value = Some(value);
    Ok(out)
}

/// `projection.1[q][i][leaf]` is the output the leaf came from.
type OutputMap = Vec<Vec<Vec<usize>>>;

fn projection(a: &IOAutomaton) -> Result<(Automaton, OutputMap), SynthesisError> {
    let aut = &a.automaton;
    require_disjunctive(aut)?;
    let mut p = Automaton::new(
        a.inputs.clone(),
        aut.states.clone(),
        aut.initial,
        aut.value_function.clone(),
        aut.mode,
    );
    p.reading = aut.reading;
    let mut outs = vec![vec![Vec::new(); a.inputs.len()]; aut.num_states()];
    for q in 0..aut.num_states() {
        for i in 0..a.inputs.len() {
            if a.outputs.len() == 1 {
                let c = aut.cond(q, a.letter(i, 0));
                outs[q][i] = vec![0; c.leaves().len()];
                p.set(q, i, c.clone());
                continue;
            }
            let mut leaves = Vec::new();
            for o in 0..a.outputs.len() {
                for (w, t) in aut.cond(q, a.letter(i, o)).leaves() {
                    leaves.push(Condition::leaf(w.clone(), t));
                    outs[q][i].push(o);
                }
            }
            p.set(q, i, Condition::Or(leaves));
        }
    }
    Ok((p, outs))
}

/// The automaton over `Σ_I` where the output becomes nondeterminism.
pub fn project_to_input(a: &IOAutomaton) -> Result<Automaton, SynthesisError> {
    Ok(projection(a)?.0)
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
enum SummaryPos {
    /// Adam picks an input. `e` is Eve's extremum, `v[s]` the best extremum
    /// of a run ending in `s`.
    Letter { q: StateId, e: Rational, v: Vec<Option<Rational>> },
    Eve { i: usize, q: StateId, e: Rational, v: Vec<Option<Rational>> },
}

/// Finite-word letter game of an Inf or Sup automaton `p` with full
/// knowledge of every run: Eve loses once some run beats hers on the
/// current prefix. Returns a transducer when Eve wins.
fn summary_game(io: &IOAutomaton, p: &Automaton, outs: &OutputMap) -> Option<Transducer> {
    let sup = p.value_function == ValueFunction::Sup;
    let ext = |x: &Rational, w: &Rational| if sup { x.max(w).clone() } else { x.min(w).clone() };
    // Neutral on nonempty words.
    let init = if sup { p.min_weight() } else { p.max_weight() };
    let mut v0 = vec![None; p.num_states()];
    v0[p.initial] = Some(init.clone());
    let mut arena = Arena::new(p.alphabet.clone());
    let mut kinds: Vec<SummaryPos> = Vec::new();
    let mut bad: Vec<bool> = Vec::new();
    let mut leaf_of: Vec<Option<usize>> = Vec::new();
    let mut index: HashMap<SummaryPos, usize> = HashMap::new();
    let mut queue = VecDeque::new();
    let mut intern = |k: SummaryPos, arena: &mut Arena, kinds: &mut Vec<SummaryPos>, queue: &mut VecDeque<usize>| {
        if let Some(&i) = index.get(&k) {
            return i;
        }
        let owner = match k {
            SummaryPos::Letter { .. } => Player::Adam,
            SummaryPos::Eve { .. } => Player::Eve,
        };
        let i = arena.add_position(format!("s{}", arena.len()), owner);
        kinds.push(k.clone());
        index.insert(k, i);
        queue.push_back(i);
        i
    };
    arena.initial = intern(
        SummaryPos::Letter { q: p.initial, e: init, v: v0 },
        &mut arena,
        &mut kinds,
        &mut queue,
    );
    while let Some(x) = queue.pop_front() {
        match kinds[x].clone() {
            SummaryPos::Letter { q, e, v } => {
                for i in 0..p.num_letters() {
                    let t = intern(SummaryPos::Eve { i, q, e: e.clone(), v: v.clone() }, &mut arena, &mut kinds, &mut queue);
                    arena.add_edge(x, t, Some(i), None, None);
                    bad.push(false);
                    leaf_of.push(None);
                }
            }
            SummaryPos::Eve { i, q, e, v } => {
                let mut next: Vec<Option<Rational>> = vec![None; p.num_states()];
                for (s, vs) in v.iter().enumerate() {
                    let Some(vs) = vs else { continue };
                    for tr in p.transitions(s, i) {
                        let y = ext(vs, &tr.weight);
                        if next[tr.target].as_ref().is_none_or(|n| &y > n) {
                            next[tr.target] = Some(y);
                        }
                    }
                }
                let best = next.iter().flatten().max().expect("total automata keep a run").clone();
                let mut tried = BTreeSet::new();
                for tr in p.transitions(q, i) {
                    if !tried.insert((tr.target, tr.weight.clone())) {
                        continue;
                    }
                    let e2 = ext(&e, &tr.weight);
                    let lost = best > e2;
                    let t = intern(
                        SummaryPos::Letter { q: tr.target, e: e2, v: next.clone() },
                        &mut arena,
                        &mut kinds,
                        &mut queue,
                    );
                    arena.add_edge(x, t, None, Some(tr.weight.clone()), None);
                    bad.push(lost);
                    leaf_of.push(Some(tr.leaf));
                }
            }
        }
    }
    let sol = solve_safety_edges(&arena, &vec![false; arena.len()], &|e| bad[e]);
    if !sol.eve_wins[arena.initial] {
        return None;
    }
    let mut ids: HashMap<usize, usize> = HashMap::from([(arena.initial, 0)]);
    let mut order = vec![arena.initial];
    let mut delta = Vec::new();
    let mut k = 0;
    while k < order.len() {
        let x = order[k];
        let mut row = Vec::new();
        for &e in &arena.out[x] {
            let y = arena.edges[e].to;
            let chosen = sol.eve_strategy[y].expect("Eve wins every position her strategy reaches");
            let SummaryPos::Eve { i, q, .. } = kinds[y] else { unreachable!() };
            let o = outs[q][i][leaf_of[chosen].expect("Eve edges carry a leaf")];
            let next = arena.edges[chosen].to;
            let id = *ids.entry(next).or_insert_with(|| {
                order.push(next);
                order.len() - 1
            });
            row.push((o, id));
        }
        delta.push(row);
        k += 1;
    }
    let states = order
        .iter()
        .enumerate()
        .map(|(n, &x)| match &kinds[x] {
            SummaryPos::Letter { q, .. } => format!("{}#{n}", p.states[*q]),
            SummaryPos::Eve { .. } => unreachable!(),
        })
        .collect();
    Some(Transducer {
        inputs: io.inputs.clone(),
        outputs: io.outputs.clone(),
        states,
        initial: 0,
        delta,
    })
}

/// Transducer following a deterministic pruning of the projection.
fn pruning_transducer(io: &IOAutomaton, p: &Automaton, outs: &OutputMap, pruned: &[PrunedTransition]) -> Transducer {
    let mut choice: HashMap<(StateId, usize), usize> = HashMap::new();
    for pt in pruned {
        let (Some(q), Some(i)) = (p.state_index(&pt.state), p.letter_index(&pt.letter)) else {
            continue;
        };
        if let Some(tr) = p
            .transitions(q, i)
            .into_iter()
            .find(|t| p.states[t.target] == pt.to && format_rational(&t.weight) == pt.weight)
        {
            choice.insert((q, i), tr.leaf);
        }
    }
    let mut ids: HashMap<StateId, usize> = HashMap::from([(p.initial, 0)]);
    let mut order = vec![p.initial];
    let mut delta = Vec::new();
    let mut k = 0;
    while k < order.len() {
        let q = order[k];
        let mut row = Vec::new();
        for i in 0..p.num_letters() {
            let ts = p.transitions(q, i);
            let leaf = choice.get(&(q, i)).copied().unwrap_or(0);
            let target = ts[leaf].target;
            let id = *ids.entry(target).or_insert_with(|| {
                order.push(target);
                order.len() - 1
            });
            row.push((outs[q][i][leaf], id));
        }
        delta.push(row);
        k += 1;
    }
    Transducer {
        inputs: io.inputs.clone(),
        outputs: io.outputs.clone(),
        states: order.iter().map(|&q| p.states[q].clone()).collect(),
        initial: 0,
        delta,
    }
}

fn finite_extremum(p: &Automaton) -> bool {
    p.mode == WordMode::Finite && matches!(p.value_function, ValueFunction::Inf | ValueFunction::Sup)
}

fn from_pruning(io: &IOAutomaton, p: &Automaton, outs: &OutputMap, v: Verdict, method: &str) -> SynthesisOutcome {
    match &v.witness {
        Some(Witness::Pruning(pruned)) if v.is_yes() => {
            let t = pruning_transducer(io, p, outs, pruned);
            let mut o = SynthesisOutcome::new(Verdict::yes(method, v.soundness, None).with_note(v.method.clone()));
            o.transducer = Some(t);
            o
        }
        _ => SynthesisOutcome::new(Verdict::unknown(
            method,
            Soundness::SoundRefutationOnly,
            format!("no pruning of the projection realizes it ({}: {})", v.method, v.kind),
        )),
    }
}

/// A transducer achieving `best_f(I)` on every input, or unrealizable.
pub fn local_best_value_synthesis(a: &IOAutomaton, opts: &SynthesisOptions) -> Result<SynthesisOutcome, SynthesisError> {
    let (p, outs) = projection(a)?;
    if finite_extremum(&p) {
        let method = "summary-letter-game";
        return Ok(match summary_game(a, &p, &outs) {
            Some(t) => {
                let mut o = SynthesisOutcome::new(Verdict::yes(method, Soundness::Exact, None));
                o.transducer = Some(t);
                o
            }
            None => SynthesisOutcome::new(Verdict::no(method, Soundness::Exact, None)),
        });
    }
    let hd = decide_hd(&p, opts.bound)?;
    let method = "projection-hd";
    if !hd.is_yes() {
        let mut v = hd.clone();
        v.method = method.into();
        v.witness = None;
        return Ok(SynthesisOutcome::new(v.with_note(format!("projection: {}", hd.method))));
    }
    let dbp = extract_dbp_witness(&p, opts.pruning)?;
    Ok(from_pruning(a, &p, &outs, dbp, method))
}

/// A transducer reaching `t` on every input where some output sequence does.
pub fn local_threshold_synthesis(
    a: &IOAutomaton,
    t: &Rational,
    opts: &SynthesisOptions,
) -> Result<SynthesisOutcome, SynthesisError> {
    let (p, outs) = projection(a)?;
    let note = format!("threshold: {}", format_rational(t));
    if finite_extremum(&p) {
        let method = "summary-letter-game-threshold";
        let b = threshold_boolean_automaton(&p, t)?;
        let mut o = match summary_game(a, &b, &outs) {
            Some(tr) => {
                let mut o = SynthesisOutcome::new(Verdict::yes(method, Soundness::Exact, None));
                o.transducer = Some(tr);
                o
            }
            None => SynthesisOutcome::new(Verdict::no(method, Soundness::Exact, None)),
        };
        o.verdict.notes.push(note);
        return Ok(o);
    }
    let method = "projection-threshold-hd";
    let exact = matches!(
        p.value_function,
        ValueFunction::Inf | ValueFunction::Sup | ValueFunction::LimInf | ValueFunction::LimSup
    );
    let thd = if exact { decide_threshold_hd(&p, t)? } else { check_threshold_hd(&p, t, opts.bound)? };
    if !thd.is_yes() {
        let mut v = thd.clone();
        v.method = method.into();
        v.witness = None;
        return Ok(SynthesisOutcome::new(v.with_note(note)));
    }
    let w = threshold_dbp_witness(&p, t, opts.pruning)?;
    let mut o = from_pruning(a, &p, &outs, w, method);
    o.verdict.notes.push(note);
    Ok(o)
}

/// Synthesis instance whose local best-value realizability is history
/// determinism of `a`: inputs are `a`'s letters, outputs its transitions.
/// An output naming a transition not enabled by the current state and input
/// leads to a sink whose weights are below every weight of `a`.
pub fn hd_to_synthesis_instance(a: &Automaton) -> Result<IOAutomaton, SynthesisError> {
    require_disjunctive(a)?;
    let mut outputs: Vec<(String, Transition)> = Vec::new();
    for t in a.all_transitions() {
        let name = a.transition_name(&t);
        if !outputs.iter().any(|(n, _)| *n == name) {
            outputs.push((name, t));
        }
    }
    let mut sink = "⊥".to_string();
    while a.state_index(&sink).is_some() {
        sink.push('\'');
    }
    let mut states = a.states.clone();
    states.push(sink);
    let bottom = states.len() - 1;
    let alphabet: Vec<String> = a
        .alphabet
        .iter()
        .flat_map(|i| outputs.iter().map(move |(o, _)| format!("{i}|{o}")))
        .collect();
    let mut b = Automaton::new(alphabet, states, a.initial, a.value_function.clone(), a.mode);
    let worst = a.min_weight() - Rational::one();
    for q in 0..=a.num_states() {
        for (s, _) in a.alphabet.iter().enumerate() {
            for (k, (_, t)) in outputs.iter().enumerate() {
                let l = s * outputs.len() + k;
                let c = if q < a.num_states() && t.source == q && t.letter == s {
                    Condition::leaf(t.weight.clone(), t.target)
                } else {
                    Condition::leaf(worst.clone(), bottom)
                };
                b.set(q, l, c);
            }
        }
    }
    IOAutomaton::new(b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::load;
    use crate::rational::{frac, int};
    use crate::valuation::automaton_value_finite;

    /// One state, one edge per letter.
    fn one_state(vf: ValueFunction, weights: &[(&str, Rational)]) -> IOAutomaton {
        let letters: Vec<&str> = weights.iter().map(|(l, _)| *l).collect();
        let edges: Vec<_> = weights.iter().map(|(l, w)| ("q", *l, w.clone(), "q")).collect();
        let a = Automaton::from_edges(&letters, &["q"], "q", vf, WordMode::Infinite, &edges).unwrap();
        IOAutomaton::new(a).unwrap()
    }

    fn opts(a: &IOAutomaton) -> SynthesisOptions {
        SynthesisOptions::for_mode(a.automaton.mode)
    }

    /// The dilemma of fig-thdA with the branch as output: q0 outputs `l` or
    /// `r`, the second input then decides the weight.
    fn thd_a_io() -> IOAutomaton {
        let mut edges = Vec::new();
        for i in ["a", "b"] {
            for o in ["l", "r"] {
                let l: &'static str = Box::leak(format!("{i}|{o}").into_boxed_str());
                edges.push(("q0", l, int(0), if o == "l" { "q1" } else { "q2" }));
                edges.push(("q1", l, int(1), "q3"));
                edges.push(("q2", l, if i == "a" { int(2) } else { int(0) }, "q3"));
                edges.push(("q3", l, int(0), "q3"));
            }
        }
        let a = Automaton::from_edges(
            &["a|l", "a|r", "b|l", "b|r"],
            &["q0", "q1", "q2", "q3"],
            "q0",
            ValueFunction::Sup,
            WordMode::Finite,
            &edges,
        )
        .unwrap();
        IOAutomaton::new(a).unwrap()
    }

    #[test]
    fn alphabet_must_factor() {
        let a = load("fig-thdA").unwrap();
        assert!(matches!(IOAutomaton::new(a), Err(SynthesisError::Alphabet(_))));
        let b = Automaton::from_edges(
            &["a|x", "a|y", "b|x"],
            &["q"],
            "q",
            ValueFunction::Sup,
            WordMode::Infinite,
            &[("q", "a|x", int(0), "q"), ("q", "a|y", int(0), "q"), ("q", "b|x", int(0), "q")],
        )
        .unwrap();
        assert!(matches!(IOAutomaton::new(b), Err(SynthesisError::Alphabet(_))));
        let io = thd_a_io();
        assert_eq!(io.inputs, vec!["a", "b"]);
        assert_eq!(io.outputs, vec!["l", "r"]);
        assert_eq!(io.automaton.alphabet[io.letter(1, 0)], "b|l");
        assert_eq!(io.split(3), (1, 1));
    }

    #[test]
    fn matrix_game_value() {
        let io = one_state(
            ValueFunction::LimSupAvg,
            &[("i1|o1", int(0)), ("i1|o2", int(2)), ("i2|o1", int(1)), ("i2|o2", int(0))],
        );
        let g = build_synthesis_game(&io).unwrap();
        assert_eq!(g.arena.len(), 3);
        let r = global_value_synthesis(&io, &opts(&io)).unwrap();
        // min over inputs of max over outputs.
        assert_eq!(r.value, Some(int(1)));
        let t = r.transducer.unwrap();
        assert_eq!(t.outputs_for(&[0, 1]), vec![1, 0]);
    }

    #[test]
    fn sup_threshold() {
        let io = one_state(ValueFunction::Sup, &[("i|o1", int(2)), ("i|o2", int(0))]);
        let r = global_threshold_synthesis(&io, &int(2), &opts(&io)).unwrap();
        assert!(r.is_realizable());
        let t = r.transducer.clone().unwrap();
        assert_eq!(t.outputs_for(&[0, 0, 0]), vec![0, 0, 0]);
        assert_eq!(verify_transducer(&io, &t, &Contract::AtLeast(int(2)), 6, 5).unwrap(), None);
        assert!(global_threshold_synthesis(&io, &int(3), &opts(&io)).unwrap().verdict.is_no());
        assert_eq!(r.to_json()["transducer"]["delta"]["q"]["i"]["output"], "o1");
    }

    #[test]
    fn discounted_constant() {
        let io = one_state(
            ValueFunction::DSum(frac(1, 2)),
            &[("i|o", int(3)), ("j|o", int(3))],
        );
        let r = global_value_synthesis(&io, &opts(&io)).unwrap();
        assert_eq!(r.value, Some(int(6)));
    }

    #[test]
    fn global_needs_infinite_words() {
        let io = thd_a_io();
        assert!(matches!(
            global_value_synthesis(&io, &opts(&io)),
            Err(SynthesisError::Mode(_))
        ));
    }

    #[test]
    fn unary_output_game_is_the_letter_game() {
        let a = load("fig-thdA").unwrap();
        let mut b = a.clone();
        b.alphabet = vec!["a|x".into(), "b|x".into()];
        let io = IOAutomaton::new(b).unwrap();
        let g = build_synthesis_game(&io).unwrap();
        for (p, k) in g.kinds.iter().enumerate() {
            match *k {
                SynthPos::State(_) => {
                    assert_eq!(g.arena.owners[p], Player::Adam);
                    assert_eq!(g.arena.out[p].len(), 2);
                }
                SynthPos::Input(q, i) => {
                    assert_eq!(g.arena.owners[p], Player::Eve);
                    assert_eq!(g.arena.out[p].len(), a.transitions(q, i).len());
                }
                SynthPos::Node { .. } => panic!("no inner nodes"),
            }
        }
        assert_eq!(g.kinds.iter().filter(|k| matches!(k, SynthPos::State(_))).count(), 4);
        // Projection onto the inputs gives back the automaton.
        let p = project_to_input(&io).unwrap();
        assert_eq!(p.delta, a.delta);
        assert_eq!(p.alphabet, vec!["a", "b"]);
    }

    #[test]
    fn alternating_specifications_get_inner_nodes() {
        let a = load("fig-dbpalt").unwrap();
        let mut b = a.clone();
        b.alphabet = a.alphabet.iter().map(|l| format!("{l}|x")).collect();
        let io = IOAutomaton::new(b).unwrap();
        let g = build_synthesis_game(&io).unwrap();
        assert!(g.kinds.iter().any(|k| matches!(k, SynthPos::Node { .. })));
        assert!(matches!(project_to_input(&io), Err(SynthesisError::Class(_))));
    }

    #[test]
    fn projection_takes_the_best_output() {
        let io = thd_a_io();
        let p = project_to_input(&io).unwrap();
        assert_eq!(p.cond(0, 0).leaves().len(), 2);
        // Brute force over every output sequence.
        for w in finite_words(2, 5) {
            let mut best: Option<Rational> = None;
            for o in finite_words(2, w.0.len()).into_iter().filter(|o| o.0.len() == w.0.len()) {
                let io_word: Vec<_> = w.0.iter().zip(&o.0).map(|(&i, &o)| io.letter(i, o)).collect();
                let v = automaton_value_finite(&io.automaton, &FiniteWord(io_word)).unwrap();
                best = Some(best.map_or(v.clone(), |b| b.max(v)));
            }
            assert_eq!(automaton_value_finite(&p, &w).unwrap(), best.unwrap(), "{w:?}");
        }
    }

    #[test]
    fn dilemma_is_locally_unrealizable() {
        let io = thd_a_io();
        let o = opts(&io);
        assert!(local_best_value_synthesis(&io, &o).unwrap().verdict.is_no());
        for (t, first) in [(int(1), 0), (int(2), 1)] {
            let r = local_threshold_synthesis(&io, &t, &o).unwrap();
            assert!(r.is_realizable(), "{r:?}");
            let tr = r.transducer.unwrap();
            assert_eq!(tr.outputs_for(&[0])[0], first);
            assert_eq!(verify_transducer(&io, &tr, &Contract::Threshold(t), 6, 5).unwrap(), None);
        }
        // No input reaches 3: any transducer will do.
        assert!(local_threshold_synthesis(&io, &int(3), &o).unwrap().is_realizable());
    }

    #[test]
    fn prefix_determined_best_output() {
        // The output must repeat the previous input; the first output is free.
        let mut edges = Vec::new();
        for (q, prev) in [("s", ""), ("pa", "a"), ("pb", "b")] {
            for i in ["a", "b"] {
                for o in ["a", "b"] {
                    let l: &'static str = Box::leak(format!("{i}|{o}").into_boxed_str());
                    let w = if prev.is_empty() || prev == o { int(1) } else { int(0) };
                    edges.push((q, l, w, if i == "a" { "pa" } else { "pb" }));
                }
            }
        }
        let a = Automaton::from_edges(
            &["a|a", "a|b", "b|a", "b|b"],
            &["s", "pa", "pb"],
            "s",
            ValueFunction::Inf,
            WordMode::Finite,
            &edges,
        )
        .unwrap();
        let io = IOAutomaton::new(a).unwrap();
        let r = local_best_value_synthesis(&io, &opts(&io)).unwrap();
        let t = r.transducer.expect("realizable");
        // Independent check: every input of length ≤ 6 gets value 1.
        for w in finite_words(2, 6) {
            let combined = t.combine(&io, &Word::Finite(w));
            assert_eq!(automaton_value(&io.automaton, &combined).unwrap(), int(1));
        }
    }

    #[test]
    fn unary_output_is_always_realizable() {
        let a = load("det-sum").unwrap();
        let mut b = a.clone();
        b.alphabet = a.alphabet.iter().map(|l| format!("{l}|x")).collect();
        let io = IOAutomaton::new(b).unwrap();
        let r = local_best_value_synthesis(&io, &opts(&io)).unwrap();
        let t = r.transducer.unwrap();
        assert!(t.delta.iter().flatten().all(|&(o, _)| o == 0));
    }

    #[test]
    fn hd_instances() {
        let det = load("det-sum").unwrap();
        let io = hd_to_synthesis_instance(&det).unwrap();
        assert_eq!(io.automaton.classify(), AutomatonClass::Deterministic);
        let r = local_best_value_synthesis(&io, &opts(&io)).unwrap();
        assert!(r.is_realizable());
        assert_eq!(verify_transducer(&io, r.transducer.as_ref().unwrap(), &Contract::BestValue, 5, 4).unwrap(), None);

        let thd = hd_to_synthesis_instance(&load("fig-thdA").unwrap()).unwrap();
        assert!(local_best_value_synthesis(&thd, &opts(&thd)).unwrap().verdict.is_no());

        let inf = hd_to_synthesis_instance(&load("fig-hdinf").unwrap()).unwrap();
        let r = local_best_value_synthesis(&inf, &opts(&inf)).unwrap();
        assert!(r.is_realizable(), "{r:?}");
        let t = r.transducer.unwrap();
        assert_eq!(t.outputs[t.delta[0][0].0], "q0-a:0->q1");
        assert_eq!(verify_transducer(&inf, &t, &Contract::BestValue, 6, 5).unwrap(), None);
    }
}
