//! Cautious transitions.
//!
//! A transition `t = (q, σ, x, q′)` is non-cautious when some continuation
//! `w` after `σ` admits a run from `q` that beats every run starting with
//! `t`. For Sum and Avg a rival transition is first tried in a simulation
//! energy game: Eve answers each of the rival run's moves with a move of her
//! own and must stay ahead after every letter. Failing that, mine is kept as
//! its full max-plus vector with far-behind entries forgotten, which again
//! can only prove safety. If both fail, the pair of
//! max-plus vectors reached from `t` and from the rival is explored breadth
//! first, pruned by dominance, looking for a beating word. For DSum the G₁
//! continuation game decides it.

use super::PruningError;
use crate::game::{solve_dsum, solve_energy_threshold, Arena, GameError, Player};
use crate::model::{Automaton, AutomatonClass, LetterId, Transition, ValueFunction, WordMode};
use crate::rational::Rational;
use crate::token::{build_g1, G1Pos, G1Weights};

/// Stored vector pairs per rival before giving up.
pub const DEFAULT_PAIR_CAP: usize = 4000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Cautiousness {
    Cautious,
    /// Carries the continuation after the transition's letter when known.
    NonCautious(Option<Vec<LetterId>>),
    /// The exploration hit its cap.
    Unknown,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CautiousReport {
    pub method: &'static str,
    pub entries: Vec<(Transition, Cautiousness)>,
}

impl CautiousReport {
    pub fn cautious(&self) -> Vec<&Transition> {
        self.entries
            .iter()
            .filter(|(_, c)| *c == Cautiousness::Cautious)
            .map(|(t, _)| t)
            .collect()
    }

    pub fn status(&self, t: &Transition) -> Option<&Cautiousness> {
        self.entries.iter().find(|(u, _)| u == t).map(|(_, c)| c)
    }

    pub fn is_complete(&self) -> bool {
        self.entries.iter().all(|(_, c)| *c != Cautiousness::Unknown)
    }
}

/// Best run value ending in each state; `None` for no run.
type Vector = Vec<Option<Rational>>;

fn vmax(v: &Vector) -> Option<&Rational> {
    v.iter().flatten().max()
}

fn step(a: &Automaton, v: &Vector, l: LetterId) -> Vector {
    let mut out: Vector = vec![None; v.len()];
    for (s, x) in v.iter().enumerate() {
        let Some(x) = x else { continue };
        for t in a.transitions(s, l) {
            let y = x + &t.weight;
            if out[t.target].as_ref().is_none_or(|o| &y > o) {
                out[t.target] = Some(y);
            }
        }
    }
    out
}

fn shift(v: &Vector, m: &Rational) -> Vector {
    v.iter().map(|x| x.as_ref().map(|x| x - m)).collect()
}

/// `lo ≤ hi` pointwise, `None` the least element.
fn below(lo: &Vector, hi: &Vector) -> bool {
    lo.iter().zip(hi).all(|(l, h)| match (l, h) {
        (None, _) => true,
        (Some(_), None) => false,
        (Some(l), Some(h)) => l <= h,
    })
}

/// Eve keeps a run from `mine` at least as good as any run from `rival` on
/// every prefix, answering the rival's moves one at a time. Winning proves
/// the rival never beats `mine`.
fn simulated(a: &Automaton, mine: &Transition, rival: &Transition) -> Result<bool, GameError> {
    let n = a.num_states();
    let mut g = Arena::new(a.alphabet.clone());
    let start = g.add_position("start", Player::Eve);
    // Rounds start at (mine, rival) owned by Adam; Eve answers at (mine, rival′, letter).
    let adam: Vec<usize> = (0..n * n)
        .map(|k| g.add_position(format!("{},{}", a.states[k / n], a.states[k % n]), Player::Adam))
        .collect();
    let mut eve = vec![usize::MAX; n * n * a.num_letters()];
    for (k, e) in eve.iter_mut().enumerate() {
        let (m, r, l) = (k / (n * a.num_letters()), (k / a.num_letters()) % n, k % a.num_letters());
        *e = g.add_position(format!("{},{}·{}", a.states[m], a.states[r], a.alphabet[l]), Player::Eve);
    }
    g.initial = start;
    g.add_edge(start, adam[mine.target * n + rival.target], None, Some(&mine.weight - &rival.weight), None);
    for m in 0..n {
        for r in 0..n {
            for l in 0..a.num_letters() {
                for tr in a.transitions(r, l) {
                    let to = eve[(m * n + tr.target) * a.num_letters() + l];
                    g.add_edge(adam[m * n + r], to, Some(l), Some(-tr.weight.clone()), None);
                }
                let from = eve[(m * n + r) * a.num_letters() + l];
                for tm in a.transitions(m, l) {
                    g.add_edge(from, adam[tm.target * n + r], None, Some(tm.weight.clone()), None);
                }
            }
        }
    }
    let mut checkpoints = vec![false; g.len()];
    for &p in &adam {
        checkpoints[p] = true;
    }
    Ok(solve_energy_threshold(&g, &checkpoints)?.eve_wins[start])
}

/// Mine as its exact max-plus vector against one rival run, with entries
/// more than `bound` below the leader forgotten. Forgetting only weakens
/// mine, so when no path through this finite graph ever leaves the rival
/// ahead, no word does. Shortest prefix sums come from Bellman-Ford.
fn clamped_safe(a: &Automaton, mine: &Transition, rival: &Transition, bound: &Rational, node_cap: usize) -> bool {
    let n = a.num_states();
    let mut v0: Vector = vec![None; n];
    v0[mine.target] = Some(Rational::from_integer(0.into()));
    let credit = &mine.weight - &rival.weight;
    if credit < Rational::from_integer(0.into()) {
        return false;
    }
    let mut nodes: Vec<(Vector, usize)> = vec![(v0.clone(), rival.target)];
    let mut index: std::collections::HashMap<(Vector, usize), usize> = [((v0, rival.target), 0)].into();
    let mut edges: Vec<(usize, usize, Rational)> = Vec::new();
    let mut i = 0;
    while i < nodes.len() {
        let (v, r) = nodes[i].clone();
        for l in 0..a.num_letters() {
            let raw = step(a, &v, l);
            let m = vmax(&raw).expect("total automata keep a run").clone();
            let next: Vector = shift(&raw, &m)
                .into_iter()
                .map(|x| x.filter(|x| -x <= *bound))
                .collect();
            for tr in a.transitions(r, l) {
                let key = (next.clone(), tr.target);
                let j = match index.get(&key) {
                    Some(&j) => j,
                    None => {
                        if nodes.len() >= node_cap {
                            return false;
                        }
                        index.insert(key.clone(), nodes.len());
                        nodes.push(key);
                        nodes.len() - 1
                    }
                };
                edges.push((i, j, &m - &tr.weight));
            }
        }
        i += 1;
    }
    let mut dist: Vec<Option<Rational>> = vec![None; nodes.len()];
    dist[0] = Some(Rational::from_integer(0.into()));
    for round in 0..=nodes.len() {
        let mut changed = false;
        for (f, t, w) in &edges {
            if let Some(d) = dist[*f].clone() {
                let nd = d + w;
                if dist[*t].as_ref().is_none_or(|x| nd < *x) {
                    if &credit + &nd < Rational::from_integer(0.into()) {
                        return false;
                    }
                    dist[*t] = Some(nd);
                    changed = true;
                }
            }
        }
        if !changed {
            return true;
        }
        if round == nodes.len() {
            return false;
        }
    }
    false
}

/// Searches a continuation on which the rival `(y, r)` beats `(x, q′)`:
/// `y + A_r(w) > x + A_{q′}(w)`.
fn rival_beats(a: &Automaton, mine: &Transition, rival: &Transition, cap: usize) -> Result<Cautiousness, PruningError> {
    if rival.weight > mine.weight {
        return Ok(Cautiousness::NonCautious(Some(vec![])));
    }
    if simulated(a, mine, rival)? {
        return Ok(Cautiousness::Cautious);
    }
    let span = match (a.weights().iter().max(), a.weights().iter().min()) {
        (Some(hi), Some(lo)) => (hi - lo) * Rational::from_integer((a.num_states() as i64).into()),
        _ => Rational::from_integer(0.into()),
    };
    for k in [1i64, 2, 4] {
        if clamped_safe(a, mine, rival, &(&span * Rational::from_integer(k.into())), cap * 4) {
            return Ok(Cautiousness::Cautious);
        }
    }
    let n = a.num_states();
    let unit = |t: &Transition| {
        let mut v: Vector = vec![None; n];
        v[t.target] = Some(t.weight.clone());
        v
    };
    let (v0, u0) = (unit(mine), unit(rival));
    // Pairs (mine, rival) normalised so that max(mine) = 0, with the word
    // that reached them. A pair with a lower `mine` and a higher `rival`
    // is at least as close to a violation.
    let norm = |v: Vector, u: Vector| {
        let m = vmax(&v).expect("total automata keep a run").clone();
        (shift(&v, &m), shift(&u, &m))
    };
    let mut stored: Vec<(Vector, Vector)> = vec![norm(v0, u0)];
    let mut words: Vec<Vec<LetterId>> = vec![vec![]];
    let mut i = 0;
    while i < stored.len() {
        let (v, u) = stored[i].clone();
        for l in 0..a.num_letters() {
            let (v2, u2) = (step(a, &v, l), step(a, &u, l));
            let mut w = words[i].clone();
            w.push(l);
            if vmax(&u2) > vmax(&v2) {
                return Ok(Cautiousness::NonCautious(Some(w)));
            }
            let (v2, u2) = norm(v2, u2);
            if stored.iter().any(|(sv, su)| below(sv, &v2) && below(&u2, su)) {
                continue;
            }
            if stored.len() >= cap {
                return Ok(Cautiousness::Unknown);
            }
            stored.push((v2, u2));
            words.push(w);
        }
        i += 1;
    }
    Ok(Cautiousness::Cautious)
}

fn additive(a: &Automaton, cap: usize) -> Result<Vec<(Transition, Cautiousness)>, PruningError> {
    let mut entries = Vec::new();
    for q in 0..a.num_states() {
        for l in 0..a.num_letters() {
            let ts = a.transitions(q, l);
            for t in &ts {
                let mut status = Cautiousness::Cautious;
                for r in &ts {
                    if r.weight == t.weight && r.target == t.target {
                        continue;
                    }
                    match rival_beats(a, t, r, cap)? {
                        Cautiousness::Cautious => {}
                        Cautiousness::Unknown => status = Cautiousness::Unknown,
                        nc => {
                            status = nc;
                            break;
                        }
                    }
                }
                entries.push((t.clone(), status));
            }
        }
    }
    Ok(entries)
}

/// Eve, committed to `t`, must win the discounted G₁ continuation against
/// every rival first move.
fn discounted(a: &Automaton, lambda: &Rational) -> Result<Vec<(Transition, Cautiousness)>, PruningError> {
    let mut entries = Vec::new();
    let stop = a.mode == WordMode::Finite;
    for q in 0..a.num_states() {
        let from_q = a.from_state(q);
        let g = build_g1(&from_q, (), &|_, _| (), &|_, _| ((), false), G1Weights::Discounted, stop);
        let sol = solve_dsum(&g.arena, lambda)?;
        for l in 0..a.num_letters() {
            let eve = g
                .kinds
                .iter()
                .position(|k| matches!(k, G1Pos::Eve { letter, q: x, p, .. } if *letter == l && *x == q && *p == q))
                .expect("every letter is playable from the start");
            for t in a.transitions(q, l) {
                let e = g.arena.out[eve]
                    .iter()
                    .copied()
                    .find(|&e| g.moves[e].as_ref() == Some(&t))
                    .expect("one edge per transition");
                let ok = sol.values[g.arena.edges[e].to] >= Rational::from_integer(0.into());
                entries.push((t, if ok { Cautiousness::Cautious } else { Cautiousness::NonCautious(None) }));
            }
        }
    }
    Ok(entries)
}

/// Classifies every transition of a Sum, Avg or DSum automaton.
pub fn cautious_transitions(a: &Automaton) -> Result<CautiousReport, PruningError> {
    cautious_transitions_with(a, DEFAULT_PAIR_CAP)
}

pub fn cautious_transitions_with(a: &Automaton, cap: usize) -> Result<CautiousReport, PruningError> {
    match a.classify() {
        AutomatonClass::Deterministic => {
            return Ok(CautiousReport {
                method: "deterministic",
                entries: a.all_transitions().into_iter().map(|t| (t, Cautiousness::Cautious)).collect(),
            })
        }
        AutomatonClass::Nondeterministic => {}
        c => return Err(PruningError::Incompatible(format!("{} automata have no cautious transitions", c.name()))),
    }
    match &a.value_function {
        ValueFunction::Sum | ValueFunction::Avg => Ok(CautiousReport {
            method: "max-plus-vectors",
            entries: additive(a, cap)?,
        }),
        ValueFunction::DSum(l) => Ok(CautiousReport {
            method: "discounted-G1",
            entries: discounted(a, l)?,
        }),
        vf => Err(PruningError::UnsupportedValueFunction(vf.to_string())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::load;
    use crate::model::WordMode;
    use crate::rational::int;

    fn find<'r>(r: &'r CautiousReport, a: &Automaton, q: &str, to: &str) -> &'r Cautiousness {
        r.entries
            .iter()
            .find(|(t, _)| a.states[t.source] == q && a.states[t.target] == to)
            .map(|(_, c)| c)
            .unwrap()
    }

    #[test]
    fn hdinf_branches() {
        let a = load("fig-hdinf").unwrap();
        let r = cautious_transitions(&a).unwrap();
        assert_eq!(find(&r, &a, "q0", "q1"), &Cautiousness::Cautious);
        assert_eq!(find(&r, &a, "q0", "q3"), &Cautiousness::Cautious);
        assert!(matches!(find(&r, &a, "q0", "q0"), Cautiousness::NonCautious(_)));
    }

    #[test]
    fn dominated_sum_branch() {
        let a = Automaton::from_edges(
            &["a"],
            &["q", "l", "r", "s"],
            "q",
            ValueFunction::Sum,
            WordMode::Finite,
            &[
                ("q", "a", int(5), "l"),
                ("q", "a", int(3), "r"),
                ("l", "a", int(1), "s"),
                ("r", "a", int(1), "s"),
                ("s", "a", int(0), "s"),
            ],
        )
        .unwrap();
        let r = cautious_transitions(&a).unwrap();
        assert_eq!(find(&r, &a, "q", "l"), &Cautiousness::Cautious);
        assert_eq!(find(&r, &a, "q", "r"), &Cautiousness::NonCautious(Some(vec![])));
        assert_eq!(r.method, "max-plus-vectors");
    }

    #[test]
    fn late_overtaking_is_found() {
        // The 0-branch overtakes after two letters.
        let a = Automaton::from_edges(
            &["a"],
            &["q", "l", "r"],
            "q",
            ValueFunction::Sum,
            WordMode::Finite,
            &[
                ("q", "a", int(2), "l"),
                ("q", "a", int(0), "r"),
                ("l", "a", int(0), "l"),
                ("r", "a", int(1), "r"),
            ],
        )
        .unwrap();
        let r = cautious_transitions(&a).unwrap();
        assert_eq!(find(&r, &a, "q", "l"), &Cautiousness::NonCautious(Some(vec![0, 0, 0])));
        assert_eq!(find(&r, &a, "q", "r"), &Cautiousness::NonCautious(Some(vec![])));
    }

    #[test]
    fn deterministic_is_all_cautious() {
        let a = load("det-sum").unwrap();
        let r = cautious_transitions(&a).unwrap();
        assert!(r.is_complete());
        assert_eq!(r.cautious().len(), a.all_transitions().len());
    }

    fn best(a: &Automaton, q: usize, w: &[LetterId]) -> Option<Rational> {
        let mut v: Vector = vec![None; a.num_states()];
        v[q] = Some(int(0));
        for &l in w {
            v = step(a, &v, l);
        }
        vmax(&v).cloned()
    }

    #[test]
    fn random_sum_verdicts_replay() {
        let shape = crate::gen::Shape {
            states: 4,
            letters: 2,
            weights: (-2..=2).map(int).collect(),
            max_branch: 2,
            value_function: ValueFunction::Sum,
            mode: WordMode::Finite,
        };
        let mut r = crate::gen::rng(77);
        let words = crate::model::finite_words(2, 8);
        for _ in 0..40 {
            let a = crate::gen::random_automaton(&mut r, &shape);
            for (t, c) in cautious_transitions(&a).unwrap().entries {
                let beats = |w: &[LetterId]| {
                    let mut full = vec![t.letter];
                    full.extend(w);
                    best(&a, t.source, &full) > best(&a, t.target, w).map(|x| x + &t.weight)
                };
                match c {
                    Cautiousness::NonCautious(Some(w)) => assert!(beats(&w), "{w:?} is no witness"),
                    Cautiousness::Cautious => {
                        assert!(!beats(&[]) && words.iter().all(|w| !beats(&w.0)), "{t:?}")
                    }
                    other => panic!("{other:?} for {t:?}"),
                }
            }
        }
    }
}
