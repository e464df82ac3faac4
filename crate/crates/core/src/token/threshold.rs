//! Threshold history determinism and good-for-gameness.
//!
//! For the extremal functions good-for-gameness is the conjunction of
//! threshold history determinism over the weights, and each threshold is a
//! Boolean question: a subset safety game on finite words, G₂ for Büchi and
//! coBüchi automata on infinite words.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};

use num::One;

use super::gk::decide_cobuchi;
use super::{
    bounded_letter_game, bounded_letter_game_with, check_nondeterministic, decide_gfg_limsup, decide_hd,
    deterministic_yes, strategy_witness, AdamThreshold, LetterGameBound, TokenError,
};
use crate::game::{solve_safety_edges, Arena, Player};
use crate::model::{
    extremum_to_limit, threshold_boolean_automaton, Automaton, AutomatonClass, LetterId, StateId, ValueFunction,
    Word, WordMode,
};
use crate::rational::{format_rational, Rational};
use crate::valuation::automaton_value;
use crate::verdict::{Soundness, Verdict, VerdictKind, Witness};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
enum SubsetPos {
    Letter { q: StateId, f: bool, s: BTreeSet<(StateId, bool)> },
    Eve { letter: LetterId, q: StateId, f: bool, s: BTreeSet<(StateId, bool)> },
}

fn subset_name(a: &Automaton, q: StateId, f: bool, s: &BTreeSet<(StateId, bool)>) -> String {
    let mark = |f: bool| if f { "+" } else { "" };
    let set: Vec<String> = s.iter().map(|&(p, g)| format!("{}{}", a.states[p], mark(g))).collect();
    format!("({}{}|{{{}}})", a.states[q], mark(f), set.join(","))
}

/// Finite-word threshold HD of an Inf or Sup automaton as a safety game.
/// Each configuration carries a flag: for Sup "saw a weight ≥ t", for Inf
/// "every weight so far ≥ t". Adam tracks all runs as a set; Eve loses as
/// soon as some run is accepting on the current prefix and hers is not.
fn subset_game(a: &Automaton, b: &Automaton) -> Verdict {
    let sup = a.value_function == ValueFunction::Sup;
    let step = |f: bool, w: &Rational| if sup { f || w.is_one() } else { f && w.is_one() };
    let mut arena = Arena::new(a.alphabet.clone());
    let mut kinds: Vec<SubsetPos> = Vec::new();
    let mut index: HashMap<SubsetPos, usize> = HashMap::new();
    let mut bad_edges: Vec<bool> = Vec::new();
    let mut queue = VecDeque::new();
    let mut intern = |k: SubsetPos, arena: &mut Arena, kinds: &mut Vec<SubsetPos>, queue: &mut VecDeque<usize>| {
        if let Some(&i) = index.get(&k) {
            return i;
        }
        let (name, owner) = match &k {
            SubsetPos::Letter { q, f, s } => (subset_name(a, *q, *f, s), Player::Adam),
            SubsetPos::Eve { letter, q, f, s } => {
                (format!("{}·{}", subset_name(a, *q, *f, s), a.alphabet[*letter]), Player::Eve)
            }
        };
        let i = arena.add_position(name, owner);
        kinds.push(k.clone());
        index.insert(k, i);
        queue.push_back(i);
        i
    };
    let init = !sup;
    let start = SubsetPos::Letter {
        q: b.initial,
        f: init,
        s: BTreeSet::from([(b.initial, init)]),
    };
    arena.initial = intern(start, &mut arena, &mut kinds, &mut queue);
    while let Some(i) = queue.pop_front() {
        match kinds[i].clone() {
            SubsetPos::Letter { q, f, s } => {
                for l in 0..b.num_letters() {
                    let t = intern(SubsetPos::Eve { letter: l, q, f, s: s.clone() }, &mut arena, &mut kinds, &mut queue);
                    arena.add_edge(i, t, Some(l), None, None);
                    bad_edges.push(false);
                }
            }
            SubsetPos::Eve { letter, q, f, s } => {
                let mut next = BTreeSet::new();
                for &(p, g) in &s {
                    for tr in b.transitions(p, letter) {
                        next.insert((tr.target, step(g, &tr.weight)));
                    }
                }
                let accepting = next.iter().any(|&(_, g)| g);
                for tr in b.transitions(q, letter) {
                    let f2 = step(f, &tr.weight);
                    let t = intern(
                        SubsetPos::Letter { q: tr.target, f: f2, s: next.clone() },
                        &mut arena,
                        &mut kinds,
                        &mut queue,
                    );
                    arena.add_edge(i, t, None, Some(tr.weight.clone()), None);
                    bad_edges.push(accepting && !f2);
                }
            }
        }
    }
    let sol = solve_safety_edges(&arena, &vec![false; arena.len()], &|e| bad_edges[e]);
    let method = "safety-subset";
    if sol.eve_wins[arena.initial] {
        Verdict::yes(method, Soundness::Exact, Some(strategy_witness(&arena, &sol.eve_strategy, Player::Eve)))
    } else {
        Verdict::no(method, Soundness::Exact, Some(strategy_witness(&arena, &sol.adam_strategy, Player::Adam)))
    }
}

/// Exact threshold HD at `t` for Inf, Sup, LimInf and LimSup automata.
pub fn decide_threshold_hd(a: &Automaton, t: &Rational) -> Result<Verdict, TokenError> {
    if !matches!(
        a.value_function,
        ValueFunction::Inf | ValueFunction::Sup | ValueFunction::LimInf | ValueFunction::LimSup
    ) {
        return Err(TokenError::UnsupportedValueFunction(a.value_function.to_string()));
    }
    check_nondeterministic(a)?;
    if a.classify() == AutomatonClass::Deterministic {
        return Ok(deterministic_yes());
    }
    // Every run reaches t, or no word does.
    if t <= &a.min_weight() || t > &a.max_weight() {
        return Ok(Verdict::yes("trivial-threshold", Soundness::Exact, None));
    }
    let v = match (&a.value_function, a.mode) {
        (ValueFunction::Inf | ValueFunction::Sup, WordMode::Finite) => {
            subset_game(a, &threshold_boolean_automaton(a, t)?)
        }
        (ValueFunction::Inf | ValueFunction::Sup, WordMode::Infinite) => {
            let mut v = decide_threshold_hd(&extremum_to_limit(a)?, t)?;
            v.notes.push(format!("{} read through its running extremum", a.value_function));
            v
        }
        (ValueFunction::LimSup, _) => {
            let mut v = decide_gfg_limsup(&threshold_boolean_automaton(a, t)?)?;
            v.method = "parity-G2-Buchi".into();
            v
        }
        _ => decide_cobuchi(&threshold_boolean_automaton(a, t)?)?,
    };
    Ok(v.with_note(format!("threshold: {}", format_rational(t))))
}

/// Threshold HD for any automaton: exact where [`decide_threshold_hd`]
/// applies, otherwise the bounded letter games.
pub fn check_threshold_hd(a: &Automaton, t: &Rational, bound: LetterGameBound) -> Result<Verdict, TokenError> {
    let exact = matches!(
        a.value_function,
        ValueFunction::Inf | ValueFunction::Sup | ValueFunction::LimInf | ValueFunction::LimSup
    );
    let class = a.classify();
    if exact && matches!(class, AutomatonClass::Deterministic | AutomatonClass::Nondeterministic) {
        return decide_threshold_hd(a, t);
    }
    let eve = bounded_letter_game(a, Player::Eve, Some(t), bound)?;
    if eve.is_no() || class == AutomatonClass::Nondeterministic || class == AutomatonClass::Deterministic {
        return Ok(eve);
    }
    let adam = bounded_letter_game(a, Player::Adam, Some(t), bound)?;
    if adam.is_no() {
        return Ok(adam);
    }
    Ok(eve)
}

/// Candidate thresholds for dense value functions: the weights and the
/// values of all short words.
fn candidate_thresholds(a: &Automaton, len: usize) -> Vec<Rational> {
    let mut ts: BTreeSet<Rational> = a.weights().into_iter().collect();
    let mut words: Vec<Vec<LetterId>> = Vec::new();
    let mut level: Vec<Vec<LetterId>> = vec![vec![]];
    for _ in 0..len {
        level = level
            .iter()
            .flat_map(|w| (0..a.num_letters()).map(move |l| [w.as_slice(), &[l]].concat()))
            .collect();
        words.extend(level.iter().cloned());
    }
    for w in &words {
        let word = match a.mode {
            WordMode::Finite => Word::Finite(crate::FiniteWord(w.clone())),
            WordMode::Infinite => match crate::LassoWord::new(vec![], w.clone()) {
                Ok(l) => Word::Lasso(l),
                Err(_) => continue,
            },
        };
        if let Ok(v) = automaton_value(a, &word) {
            ts.insert(v);
        }
    }
    ts.into_iter().collect()
}

/// Bounded refutation of threshold HD at the candidate thresholds.
fn refute_thresholds(a: &Automaton, bound: LetterGameBound, reading: AdamThreshold) -> Result<Option<Verdict>, TokenError> {
    let both = !matches!(a.classify(), AutomatonClass::Deterministic | AutomatonClass::Nondeterministic);
    for t in candidate_thresholds(a, 3) {
        let mut owners = vec![Player::Eve];
        if both {
            owners.push(Player::Adam);
        }
        for owner in owners {
            let v = bounded_letter_game_with(a, owner, Some(&t), reading, bound)?;
            if v.is_no() {
                return Ok(Some(v));
            }
        }
    }
    Ok(None)
}

fn threshold_conjunction(a: &Automaton, jobs: usize) -> Result<Verdict, TokenError> {
    let ts: Vec<Rational> = a.weights().into_iter().skip(1).collect();
    let jobs = jobs.max(1).min(ts.len().max(1));
    let mut results: Vec<Option<Result<Verdict, TokenError>>> = (0..ts.len()).map(|_| None).collect();
    std::thread::scope(|scope| {
        let size = ts.len().div_ceil(jobs).max(1);
        let chunks: Vec<_> = results
            .chunks_mut(size)
            .enumerate()
            .map(|(c, slot)| {
                let ts = &ts;
                scope.spawn(move || {
                    let base = c * size;
                    for (i, r) in slot.iter_mut().enumerate() {
                        *r = Some(decide_threshold_hd(a, &ts[base + i]));
                    }
                })
            })
            .collect();
        for h in chunks {
            h.join().expect("threshold worker panicked");
        }
    });
    let mut map = BTreeMap::new();
    let mut all_yes = true;
    for (t, r) in ts.iter().zip(results) {
        let v = r.expect("every threshold is decided")?;
        all_yes &= v.is_yes();
        map.insert(format_rational(t), v);
    }
    let method = "threshold-conjunction";
    let w = Some(Witness::Thresholds(map));
    Ok(if all_yes {
        Verdict::yes(method, Soundness::Exact, w)
    } else {
        Verdict::no(method, Soundness::Exact, w)
    })
}

/// Good-for-gameness with the default bound and one worker.
pub fn decide_gfg(a: &Automaton) -> Result<Verdict, TokenError> {
    decide_gfg_with(a, LetterGameBound::default_for(a.mode), 1)
}

/// Good-for-gameness. The thresholds of the extremal functions are decided
/// by up to `jobs` threads.
pub fn decide_gfg_with(a: &Automaton, bound: LetterGameBound, jobs: usize) -> Result<Verdict, TokenError> {
    let class = a.classify();
    if class == AutomatonClass::Deterministic {
        return Ok(deterministic_yes());
    }
    if class != AutomatonClass::Nondeterministic {
        if let Some(v) = refute_thresholds(a, bound, AdamThreshold::Dual)? {
            return Ok(v);
        }
        return Ok(Verdict::unknown(
            "letter-game-oracle",
            Soundness::Bounded,
            format!("no threshold refutation within depth {}", bound.depth),
        )
        .with_note("adam-threshold-reading: dual"));
    }
    match a.value_function {
        ValueFunction::Inf | ValueFunction::Sup | ValueFunction::LimInf | ValueFunction::LimSup => {
            threshold_conjunction(a, jobs)
        }
        ValueFunction::Sum | ValueFunction::Avg | ValueFunction::DSum(_) => {
            let hd = decide_hd(a, bound)?;
            if hd.is_yes() {
                let mut v = Verdict::yes("hd-implies-gfg", hd.soundness, hd.witness);
                v.notes.push(format!("history determinism by {}", hd.method));
                return Ok(v);
            }
            if let Some(v) = refute_thresholds(a, bound, AdamThreshold::Verbatim)? {
                return Ok(v);
            }
            let mut v = Verdict::unknown(
                "threshold-oracle",
                Soundness::Bounded,
                "not history deterministic and no threshold refutation found; thresholds are dense",
            );
            if hd.kind == VerdictKind::No {
                v.notes.push(format!("history determinism refuted by {}", hd.method));
            }
            Ok(v)
        }
        ValueFunction::LimInfAvg | ValueFunction::LimSupAvg => Ok(Verdict::unknown(
            "none",
            Soundness::Bounded,
            "no decision procedure for good-for-gameness of limit averages",
        )),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::load;
    use crate::rational::int;

    #[test]
    fn figure_a_thresholds() {
        let a = load("fig-thdA").unwrap();
        for t in [1, 2] {
            let v = decide_threshold_hd(&a, &int(t)).unwrap();
            assert!(v.is_yes(), "t={t}: {v:?}");
        }
        assert!(decide_threshold_hd(&a, &int(-5)).unwrap().is_yes());
        assert!(decide_gfg(&a).unwrap().is_yes());
    }

    #[test]
    fn figure_b_thresholds() {
        let b = load("fig-thdB").unwrap();
        for t in 0..=2 {
            assert!(decide_threshold_hd(&b, &int(t)).unwrap().is_yes(), "t={t}");
        }
        assert!(decide_gfg(&b).unwrap().is_yes());
    }

    #[test]
    fn hdinf_finite_is_not_threshold_hd() {
        let a = load("fig-hdinf-finite").unwrap();
        let v = check_threshold_hd(&a, &int(1), LetterGameBound::new(3)).unwrap();
        assert!(v.is_no(), "{v:?}");
    }

    #[test]
    fn dense_functions_are_refused() {
        let a = load("det-sum").unwrap();
        assert!(matches!(
            decide_threshold_hd(&a, &int(0)),
            Err(TokenError::UnsupportedValueFunction(_))
        ));
        assert!(decide_gfg(&a).unwrap().is_yes());
    }

    #[test]
    fn jobs_do_not_change_the_answer() {
        let b = load("fig-thdB").unwrap();
        let one = decide_gfg_with(&b, LetterGameBound::new(4), 1).unwrap();
        let four = decide_gfg_with(&b, LetterGameBound::new(4), 4).unwrap();
        assert_eq!(one, four);
    }
}
