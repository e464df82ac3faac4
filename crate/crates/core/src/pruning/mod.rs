//! Determinisation by pruning: choosing one transition per state and letter
//! so that the resulting deterministic automaton is equivalent to the
//! original, or equivalent above a threshold.

mod cautious;
mod equivalence;

use std::collections::BTreeMap;
use std::sync::atomic::{AtomicUsize, Ordering};

use thiserror::Error;

pub use cautious::{cautious_transitions, cautious_transitions_with, Cautiousness, CautiousReport, DEFAULT_PAIR_CAP};
pub use equivalence::{
    dominance_witness, equivalence_check, is_pruning_of, sample_difference, SampleBound, DEFAULT_SAMPLE_LASSO,
    DEFAULT_SAMPLE_LEN,
};

use crate::game::{GameError, Player};
use crate::model::{
    threshold_boolean_automaton, Automaton, AutomatonClass, Condition, LetterId, ModelError, StateId, Transition,
    ValueFunction, WordMode,
};
use crate::rational::{format_rational, Rational};
use crate::token::{decide_hd, solve_g1, LetterGameBound, TokenError};
use crate::valuation::ValuationError;
use crate::verdict::{PrunedTransition, Soundness, Verdict, Witness};

/// Default cap on the number of prunings enumerated.
pub const DEFAULT_PRUNING_CAP: usize = 531_441;

#[derive(Debug, Error)]
pub enum PruningError {
    #[error("invalid pruning choice: {0}")]
    InvalidChoice(String),
    #[error("{size} prunings exceed the cap {cap}")]
    SizeCapExceeded { size: usize, cap: usize },
    #[error("incompatible automata: {0}")]
    Incompatible(String),
    #[error("unsupported value function: {0}")]
    UnsupportedValueFunction(String),
    #[error("internal error: {0}")]
    Internal(String),
    #[error(transparent)]
    Token(#[from] TokenError),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Game(#[from] GameError),
    #[error(transparent)]
    Valuation(#[from] ValuationError),
}

/// One leaf per (state, letter). Slots left out keep their first option in
/// [`options`] order.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PruningChoice {
    pub leaves: BTreeMap<(StateId, LetterId), usize>,
}

/// The leaves of `δ(q, l)`, ordered by target and then weight.
pub fn options(a: &Automaton, q: StateId, l: LetterId) -> Vec<Transition> {
    let mut ts = a.transitions(q, l);
    ts.sort_by(|s, t| (s.target, &s.weight, s.leaf).cmp(&(t.target, &t.weight, t.leaf)));
    ts
}

pub fn prune(a: &Automaton, c: &PruningChoice) -> Result<Automaton, PruningError> {
    for (&(q, l), &leaf) in &c.leaves {
        if q >= a.num_states() || l >= a.num_letters() {
            return Err(PruningError::InvalidChoice(format!("no slot ({q}, {l})")));
        }
        if leaf >= a.cond(q, l).leaves().len() {
            return Err(PruningError::InvalidChoice(format!(
                "{} on {} has no leaf {leaf}",
                a.states[q], a.alphabet[l]
            )));
        }
    }
    let mut d = a.clone();
    d.reading = None;
    for q in 0..a.num_states() {
        for l in 0..a.num_letters() {
            let ts = a.transitions(q, l);
            let t = match c.leaves.get(&(q, l)) {
                Some(&i) => ts[i].clone(),
                None => options(a, q, l).swap_remove(0),
            };
            d.set(q, l, Condition::leaf(t.weight, t.target));
        }
    }
    Ok(d)
}

/// The chosen transitions on reachable slots that had a choice.
pub fn pruning_witness(a: &Automaton, c: &PruningChoice) -> Result<Witness, PruningError> {
    let d = prune(a, c)?;
    let reach = d.reachable_states();
    let mut out = Vec::new();
    for q in (0..a.num_states()).filter(|&q| reach[q]) {
        for l in 0..a.num_letters() {
            if a.transitions(q, l).len() < 2 {
                continue;
            }
            let t = &d.transitions(q, l)[0];
            out.push(PrunedTransition {
                state: a.states[q].clone(),
                letter: a.alphabet[l].clone(),
                weight: format_rational(&t.weight),
                to: a.states[t.target].clone(),
            });
        }
    }
    Ok(Witness::Pruning(out))
}

/// Reads a [`pruning_witness`] back into a choice on `a`.
pub fn choice_from_witness(a: &Automaton, kept: &[PrunedTransition]) -> Result<PruningChoice, PruningError> {
    let mut c = PruningChoice::default();
    for k in kept {
        let bad = |what: &str| PruningError::InvalidChoice(format!("{what} `{}`", k.state));
        let q = a.state_index(&k.state).ok_or_else(|| bad("unknown state"))?;
        let l = a.letter_index(&k.letter).ok_or_else(|| bad("unknown letter at"))?;
        let t = a
            .transitions(q, l)
            .into_iter()
            .find(|t| a.states[t.target] == k.to && format_rational(&t.weight) == k.weight)
            .ok_or_else(|| bad("no such transition from"))?;
        c.leaves.insert((q, l), t.leaf);
    }
    Ok(c)
}

/// Per-slot candidate leaves for the enumeration.
type Slots = Vec<((StateId, LetterId), Vec<usize>)>;

fn all_slots(a: &Automaton) -> Slots {
    let reach = a.reachable_states();
    let mut slots = Vec::new();
    for q in (0..a.num_states()).filter(|&q| reach[q]) {
        for l in 0..a.num_letters() {
            let opts = options(a, q, l);
            if opts.len() > 1 {
                slots.push(((q, l), opts.iter().map(|t| t.leaf).collect()));
            }
        }
    }
    slots
}

fn choice_at(slots: &Slots, mut index: usize) -> PruningChoice {
    let mut c = PruningChoice::default();
    for (slot, opts) in slots {
        c.leaves.insert(*slot, opts[index % opts.len()]);
        index /= opts.len();
    }
    c
}

/// Enumeration knobs.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PruningOptions {
    pub cap: usize,
    pub jobs: usize,
    pub sample: SampleBound,
    pub bound: LetterGameBound,
}

impl PruningOptions {
    pub fn for_mode(mode: WordMode) -> Self {
        PruningOptions {
            cap: DEFAULT_PRUNING_CAP,
            jobs: 1,
            sample: SampleBound::default(),
            bound: LetterGameBound::default_for(mode),
        }
    }
}

/// Smallest index in the enumeration whose pruning is accepted.
fn first_accepted(
    slots: &Slots,
    opts: PruningOptions,
    accept: &(dyn Fn(&PruningChoice) -> Result<bool, PruningError> + Sync),
) -> Result<Option<PruningChoice>, PruningError> {
    let total = slots
        .iter()
        .try_fold(1usize, |acc, (_, o)| acc.checked_mul(o.len()))
        .unwrap_or(usize::MAX);
    if total > opts.cap {
        return Err(PruningError::SizeCapExceeded { size: total, cap: opts.cap });
    }
    let best = AtomicUsize::new(usize::MAX);
    let jobs = opts.jobs.clamp(1, total);
    let errors: Vec<PruningError> = std::thread::scope(|s| {
        let handles: Vec<_> = (0..jobs)
            .map(|j| {
                let best = &best;
                s.spawn(move || -> Result<(), PruningError> {
                    let mut i = j;
                    while i < total && i < best.load(Ordering::Relaxed) {
                        if accept(&choice_at(slots, i))? {
                            best.fetch_min(i, Ordering::Relaxed);
                            break;
                        }
                        i += jobs;
                    }
                    Ok(())
                })
            })
            .collect();
        handles
            .into_iter()
            .filter_map(|h| h.join().expect("pruning worker panicked").err())
            .collect()
    });
    if let Some(e) = errors.into_iter().next() {
        return Err(e);
    }
    let i = best.load(Ordering::Relaxed);
    Ok((i != usize::MAX).then(|| choice_at(slots, i)))
}

fn exact_equivalent(a: &Automaton, d: &Automaton) -> Result<bool, PruningError> {
    Ok(dominance_witness(a, d)?.is_none())
}

fn yes(method: &str, soundness: Soundness, a: &Automaton, c: &PruningChoice) -> Result<Verdict, PruningError> {
    Ok(Verdict::yes(method, soundness, Some(pruning_witness(a, c)?)))
}

/// Enumerates all prunings. Disjunctive automata are compared exactly;
/// others on sampled words.
fn enumerate(a: &Automaton, slots: &Slots, opts: PruningOptions) -> Result<Verdict, PruningError> {
    let disjunctive = a.is_disjunctive();
    let accept = |c: &PruningChoice| -> Result<bool, PruningError> {
        let d = prune(a, c)?;
        if disjunctive {
            exact_equivalent(a, &d)
        } else {
            Ok(sample_difference(a, &d, opts.sample)?.is_none())
        }
    };
    let method = if disjunctive { "pruning-enumeration" } else { "pruning-enumeration-sampled" };
    match first_accepted(slots, opts, &accept)? {
        Some(c) => yes(method, if disjunctive { Soundness::Exact } else { Soundness::Bounded }, a, &c),
        // A sampled difference is a real one, so No is exact either way.
        None => Ok(Verdict::no(method, Soundness::Exact, None)),
    }
}

/// Cautious construction: per reachable slot the first cautious option.
fn cautious_choice(a: &Automaton) -> Result<PruningChoice, PruningError> {
    let report = cautious_transitions(a)?;
    let mut c = PruningChoice::default();
    for ((q, l), _) in all_slots(a) {
        let opts = options(a, q, l);
        let rank = |t: &Transition| match report.status(t) {
            Some(Cautiousness::Cautious) => 0,
            Some(Cautiousness::Unknown) => 1,
            _ => 2,
        };
        let t = opts.iter().min_by_key(|t| rank(t)).expect("slots have options");
        c.leaves.insert((q, l), t.leaf);
    }
    Ok(c)
}

/// Transitions Eve's winning G₁ strategy uses, per slot.
fn strategy_slots(a: &Automaton) -> Result<Slots, PruningError> {
    let w = solve_g1(a)?;
    let mut used: BTreeMap<(StateId, LetterId), Vec<usize>> = BTreeMap::new();
    let mut seen = vec![false; w.arena.len()];
    let mut stack = vec![w.arena.initial];
    seen[w.arena.initial] = true;
    while let Some(p) = stack.pop() {
        let next: Vec<usize> = if w.arena.owners[p] == Player::Eve {
            let e = w.eve_strategy[p].ok_or_else(|| PruningError::Internal("Eve's strategy is partial".into()))?;
            if let Some(t) = &w.moves[e] {
                let leaves = used.entry((t.source, t.letter)).or_default();
                if !leaves.contains(&t.leaf) {
                    leaves.push(t.leaf);
                }
            }
            vec![e]
        } else {
            w.arena.out[p].clone()
        };
        for e in next {
            let t = w.arena.edges[e].to;
            if !seen[t] {
                seen[t] = true;
                stack.push(t);
            }
        }
    }
    Ok(used
        .into_iter()
        .filter(|(_, v)| v.len() > 1)
        .map(|(slot, mut v)| {
            v.sort();
            (slot, v)
        })
        .collect::<Vec<_>>())
}

/// Determinisability by pruning, with the pruning as witness.
pub fn extract_dbp_witness(a: &Automaton, opts: PruningOptions) -> Result<Verdict, PruningError> {
    let class = a.classify();
    if class == AutomatonClass::Deterministic {
        return yes("deterministic", Soundness::Exact, a, &PruningChoice::default());
    }
    if class != AutomatonClass::Nondeterministic {
        return enumerate(a, &all_slots(a), opts);
    }
    match (&a.value_function, a.mode) {
        (ValueFunction::Sum | ValueFunction::Avg | ValueFunction::DSum(_), _) => {
            let hd = decide_hd(a, opts.bound)?;
            if hd.is_no() && hd.soundness == Soundness::Exact {
                let mut v = Verdict::no("hd-refuted", Soundness::Exact, None);
                v.notes.push(format!("not history deterministic ({})", hd.method));
                return Ok(v);
            }
            if hd.is_yes() {
                let c = cautious_choice(a)?;
                if exact_equivalent(a, &prune(a, &c)?)? {
                    return yes("cautious-pruning", Soundness::Exact, a, &c);
                }
            }
            let mut v = enumerate(a, &all_slots(a), opts)?;
            v.notes.push(format!("history determinism: {} ({})", hd.kind, hd.method));
            Ok(v)
        }
        (ValueFunction::Inf | ValueFunction::Sup, WordMode::Finite) => {
            let hd = decide_hd(a, opts.bound)?;
            if hd.is_no() {
                let mut v = Verdict::no("hd-refuted", Soundness::Exact, None);
                v.notes.push(format!("not history deterministic ({})", hd.method));
                return Ok(v);
            }
            let mut v = enumerate(a, &strategy_slots(a)?, opts)?;
            v.method = "strategy-restricted-enumeration".into();
            Ok(v)
        }
        _ => enumerate(a, &all_slots(a), opts),
    }
}

/// A pruning that keeps exactly the words of value at least `t`.
pub fn threshold_dbp_witness(a: &Automaton, t: &Rational, opts: PruningOptions) -> Result<Verdict, PruningError> {
    let slots = all_slots(a);
    match a.value_function {
        ValueFunction::Inf | ValueFunction::Sup | ValueFunction::LimInf | ValueFunction::LimSup
            if a.is_disjunctive() =>
        {
            let at = threshold_boolean_automaton(a, t)?;
            let accept = |c: &PruningChoice| -> Result<bool, PruningError> {
                let dt = threshold_boolean_automaton(&prune(a, c)?, t)?;
                exact_equivalent(&at, &dt)
            };
            let method = "threshold-pruning-enumeration";
            Ok(match first_accepted(&slots, opts, &accept)? {
                Some(c) => yes(method, Soundness::Exact, a, &c)?,
                None => Verdict::no(method, Soundness::Exact, None),
            }
            .with_note(format!("threshold: {}", format_rational(t))))
        }
        _ => {
            let accept = |c: &PruningChoice| -> Result<bool, PruningError> {
                let d = prune(a, c)?;
                let words = sampled_words(a, opts.sample);
                for w in &words {
                    let x = crate::valuation::automaton_value(a, w)?;
                    let y = crate::valuation::automaton_value(&d, w)?;
                    if (&x >= t) != (&y >= t) {
                        return Ok(false);
                    }
                }
                Ok(true)
            };
            let method = "threshold-pruning-sampled";
            Ok(match first_accepted(&slots, opts, &accept)? {
                Some(c) => yes(method, Soundness::Bounded, a, &c)?,
                None => Verdict::no(method, Soundness::Exact, None),
            }
            .with_note(format!("threshold: {}", format_rational(t))))
        }
    }
}

fn sampled_words(a: &Automaton, s: SampleBound) -> Vec<crate::model::Word> {
    use crate::model::{finite_words, lasso_words, Word};
    match a.mode {
        WordMode::Finite => finite_words(a.num_letters(), s.len).into_iter().map(Word::Finite).collect(),
        WordMode::Infinite => lasso_words(a.num_letters(), s.lasso).into_iter().map(Word::Lasso).collect(),
    }
}
