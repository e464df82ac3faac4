//! k-token games: Eve moves one token, Adam moves k tokens at once.
//!
//! Eve wins a play when her run is at least as good as each of Adam's runs.
//! For LimSup the condition becomes a parity condition on edge priorities.
//! For LimInf the arena is extended with round-robin counters over Adam's
//! tokens so that "every token is bad at level y infinitely often" becomes
//! visible on single edges.

use std::collections::{HashMap, VecDeque};

use num::ToPrimitive;

use super::g1::mean_payoff_semicheck;
use super::{check_nondeterministic, deterministic_yes, strategy_witness, TokenError};
use crate::game::{solve_parity, Arena, ParitySolution, Player};
use crate::model::{
    normalize_weight_ranks, Automaton, AutomatonClass, BooleanReading, LetterId, StateId, Transition,
    ValueFunction,
};
use crate::rational::{int, Rational};
use crate::verdict::{Soundness, Verdict};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum GkPos {
    Letter { q: StateId, ps: Vec<StateId> },
    Eve { letter: LetterId, q: StateId, ps: Vec<StateId> },
    Adam { letter: LetterId, q: StateId, ps: Vec<StateId> },
}

pub struct GkArena {
    pub k: usize,
    pub arena: Arena,
    pub kinds: Vec<GkPos>,
    /// Weight of Eve's transition on her edges.
    pub eve_weight: Vec<Option<Rational>>,
    /// Weights of Adam's transitions, one per token, on his edges.
    pub adam_weights: Vec<Option<Vec<Rational>>>,
    pub eve_move: Vec<Option<Transition>>,
}

fn names(a: &Automaton, ps: &[StateId]) -> String {
    ps.iter().map(|&p| a.states[p].as_str()).collect::<Vec<_>>().join(",")
}

pub fn build_gk_arena(a: &Automaton, k: usize) -> Result<GkArena, TokenError> {
    check_nondeterministic(a)?;
    if k == 0 {
        return Err(TokenError::BadBound);
    }
    let mut g = GkArena {
        k,
        arena: Arena::new(a.alphabet.clone()),
        kinds: Vec::new(),
        eve_weight: Vec::new(),
        adam_weights: Vec::new(),
        eve_move: Vec::new(),
    };
    let mut index: HashMap<GkPos, usize> = HashMap::new();
    let mut queue = VecDeque::new();
    let intern = |pos: GkPos, g: &mut GkArena, index: &mut HashMap<GkPos, usize>, queue: &mut VecDeque<usize>| {
        if let Some(&i) = index.get(&pos) {
            return i;
        }
        let (name, owner) = match &pos {
            GkPos::Letter { q, ps } => (format!("({}|{})", a.states[*q], names(a, ps)), Player::Adam),
            GkPos::Eve { letter, q, ps } => (
                format!("({}|{})·{}", a.states[*q], names(a, ps), a.alphabet[*letter]),
                Player::Eve,
            ),
            GkPos::Adam { letter, q, ps } => (
                format!("({}'|{})·{}", a.states[*q], names(a, ps), a.alphabet[*letter]),
                Player::Adam,
            ),
        };
        let i = g.arena.add_position(name, owner);
        g.kinds.push(pos.clone());
        index.insert(pos, i);
        queue.push_back(i);
        i
    };
    let start = intern(
        GkPos::Letter {
            q: a.initial,
            ps: vec![a.initial; k],
        },
        &mut g,
        &mut index,
        &mut queue,
    );
    g.arena.initial = start;
    while let Some(i) = queue.pop_front() {
        match g.kinds[i].clone() {
            GkPos::Letter { q, ps } => {
                for l in 0..a.num_letters() {
                    let t = intern(GkPos::Eve { letter: l, q, ps: ps.clone() }, &mut g, &mut index, &mut queue);
                    g.arena.add_edge(i, t, Some(l), None, None);
                    g.eve_weight.push(None);
                    g.adam_weights.push(None);
                    g.eve_move.push(None);
                }
            }
            GkPos::Eve { letter, q, ps } => {
                for tr in a.transitions(q, letter) {
                    let t = intern(
                        GkPos::Adam {
                            letter,
                            q: tr.target,
                            ps: ps.clone(),
                        },
                        &mut g,
                        &mut index,
                        &mut queue,
                    );
                    g.arena.add_edge(i, t, None, None, None);
                    g.eve_weight.push(Some(tr.weight.clone()));
                    g.adam_weights.push(None);
                    g.eve_move.push(Some(tr));
                }
            }
            GkPos::Adam { letter, q, ps } => {
                let options: Vec<Vec<Transition>> = ps.iter().map(|&p| a.transitions(p, letter)).collect();
                let mut idx = vec![0usize; k];
                loop {
                    let chosen: Vec<&Transition> = (0..k).map(|j| &options[j][idx[j]]).collect();
                    let t = intern(
                        GkPos::Letter {
                            q,
                            ps: chosen.iter().map(|t| t.target).collect(),
                        },
                        &mut g,
                        &mut index,
                        &mut queue,
                    );
                    g.arena.add_edge(i, t, None, None, None);
                    g.eve_weight.push(None);
                    g.adam_weights.push(Some(chosen.iter().map(|t| t.weight.clone()).collect()));
                    g.eve_move.push(None);
                    // Mixed-radix increment over the k tokens.
                    let mut j = 0;
                    while j < k {
                        idx[j] += 1;
                        if idx[j] < options[j].len() {
                            break;
                        }
                        idx[j] = 0;
                        j += 1;
                    }
                    if j == k {
                        break;
                    }
                }
            }
        }
    }
    Ok(g)
}

fn rank(w: &Rational) -> u32 {
    w.to_integer().to_u32().expect("ranks are small positive integers")
}

fn require(a: &Automaton, vf: ValueFunction) -> Result<(), TokenError> {
    if a.value_function != vf {
        return Err(TokenError::UnsupportedValueFunction(a.value_function.to_string()));
    }
    Ok(())
}

/// Solves Gₖ for a LimSup automaton through its parity encoding: Eve's move
/// gets `2·rank`, Adam's joint move `2·max rank − 1`, letters 0.
pub fn solve_gk_limsup(a: &Automaton, k: usize) -> Result<(GkArena, ParitySolution), TokenError> {
    require(a, ValueFunction::LimSup)?;
    let (r, _) = normalize_weight_ranks(a)?;
    let mut g = build_gk_arena(&r, k)?;
    for e in 0..g.arena.edges.len() {
        let prio = if let Some(x) = &g.eve_weight[e] {
            2 * rank(x)
        } else if let Some(ys) = &g.adam_weights[e] {
            2 * ys.iter().map(rank).max().expect("k >= 1") - 1
        } else {
            0
        };
        g.arena.edges[e].priority = Some(prio);
    }
    let sol = solve_parity(&g.arena)?;
    Ok((g, sol))
}

/// Extends a Gₖ arena of a rank-normalised LimInf automaton with one counter
/// per badness level and solves the resulting parity game. Badness is
/// `v − rank`; Eve wins iff her limsup badness is at most the smallest
/// limsup badness among Adam's tokens.
///
/// Counter `c_y` names the token whose next move of badness at least `y` is
/// awaited. When it wraps around, level `y` completes; that happens infinitely
/// often iff every token is bad at level `y` infinitely often. Eve's move of
/// badness `b` has priority `2b + 1`, Adam's move `2Y + 2` for the highest
/// level `Y` it completes (level 0 completes on every move).
pub fn solve_gk_liminf(a: &Automaton, k: usize) -> Result<(Arena, ParitySolution), TokenError> {
    require(a, ValueFunction::LimInf)?;
    let (r, _) = normalize_weight_ranks(a)?;
    let v = r.weights().len() as u32;
    let g = build_gk_arena(&r, k)?;
    let levels = v.saturating_sub(1) as usize;
    let badness = |w: &Rational| v - rank(w);
    let base = &g.arena;
    let mut out = Arena::new(base.alphabet.clone());
    let mut index: HashMap<(usize, Vec<usize>), usize> = HashMap::new();
    let mut keys: Vec<(usize, Vec<usize>)> = Vec::new();
    let start = (base.initial, vec![0usize; levels]);
    index.insert(start.clone(), 0);
    keys.push(start);
    let name = |key: &(usize, Vec<usize>)| {
        if levels == 0 {
            base.names[key.0].clone()
        } else {
            let c: Vec<String> = key.1.iter().map(|c| c.to_string()).collect();
            format!("{}#{}", base.names[key.0], c.join(""))
        }
    };
    out.add_position(name(&keys[0]), base.owners[base.initial]);
    out.initial = 0;
    let mut i = 0;
    while i < keys.len() {
        let (p, counters) = keys[i].clone();
        for &e in &base.out[p] {
            let edge = &base.edges[e];
            let (next, prio) = if let Some(x) = &g.eve_weight[e] {
                (counters.clone(), 2 * badness(x) + 1)
            } else if let Some(ys) = &g.adam_weights[e] {
                let mut c = counters.clone();
                let mut top = 0u32;
                for (lvl, cy) in c.iter_mut().enumerate() {
                    let y = lvl as u32 + 1;
                    if badness(&ys[*cy]) >= y {
                        *cy += 1;
                        if *cy == k {
                            *cy = 0;
                            top = y;
                        }
                    }
                }
                (c, 2 * top + 2)
            } else {
                (counters.clone(), 0)
            };
            let key = (edge.to, next);
            let t = match index.get(&key) {
                Some(&t) => t,
                None => {
                    let t = out.add_position(name(&key), base.owners[edge.to]);
                    index.insert(key.clone(), t);
                    keys.push(key);
                    t
                }
            };
            out.add_edge(i, t, edge.label, None, Some(prio));
        }
        i += 1;
    }
    let sol = solve_parity(&out)?;
    Ok((out, sol))
}

/// GFG (equivalently HD) for LimSup through G₂.
pub fn decide_gfg_limsup(a: &Automaton) -> Result<Verdict, TokenError> {
    require(a, ValueFunction::LimSup)?;
    check_nondeterministic(a)?;
    if a.classify() == AutomatonClass::Deterministic {
        return Ok(deterministic_yes());
    }
    let (g, sol) = solve_gk_limsup(a, 2)?;
    Ok(parity_verdict("parity-G2", &g.arena, &sol))
}

fn parity_verdict(method: &str, arena: &Arena, sol: &ParitySolution) -> Verdict {
    if sol.eve_wins[arena.initial] {
        Verdict::yes(method, Soundness::Exact, Some(strategy_witness(arena, &sol.eve_strategy, Player::Eve)))
    } else {
        Verdict::no(method, Soundness::Exact, Some(strategy_witness(arena, &sol.adam_strategy, Player::Adam)))
    }
}

/// Exact G₂ verdict for a coBüchi automaton given as LimInf over {0, 1}.
pub(crate) fn decide_cobuchi(a: &Automaton) -> Result<Verdict, TokenError> {
    if a.classify() == AutomatonClass::Deterministic {
        return Ok(deterministic_yes());
    }
    let (arena, sol) = solve_gk_liminf(a, 2)?;
    Ok(parity_verdict("parity-G2-coBuchi", &arena, &sol))
}

/// The Büchi automata `A_x` for `x = 2..=v`: a transition is accepting
/// (weight 1) iff its rank is at least `x`. `A_x(w) = 1` iff `A(w)` has rank
/// at least `x`.
pub fn buchi_decomposition(a: &Automaton) -> Result<Vec<Automaton>, TokenError> {
    require(a, ValueFunction::LimSup)?;
    let (r, _) = normalize_weight_ranks(a)?;
    let v = r.weights().len() as u32;
    Ok((2..=v)
        .map(|x| {
            let mut b = r.map_weights(|w| int(i64::from(rank(w) >= x)));
            b.reading = Some(BooleanReading::Buchi);
            b
        })
        .collect())
}

/// One-sided check through G₂. Adam winning refutes HD exactly; Eve winning
/// is not known to imply HD for these value functions.
pub fn g2_semicheck(a: &Automaton) -> Result<Verdict, TokenError> {
    check_nondeterministic(a)?;
    match a.value_function {
        ValueFunction::LimInf => {
            let (arena, sol) = solve_gk_liminf(a, 2)?;
            if sol.eve_wins[arena.initial] {
                Ok(Verdict::unknown(
                    "parity-G2",
                    Soundness::SoundRefutationOnly,
                    "Eve wins G2; G2 is not known to characterise history determinism for LimInf",
                ))
            } else {
                Ok(Verdict::no(
                    "parity-G2",
                    Soundness::Exact,
                    Some(strategy_witness(&arena, &sol.adam_strategy, Player::Adam)),
                ))
            }
        }
        ValueFunction::LimInfAvg | ValueFunction::LimSupAvg => mean_payoff_semicheck(a),
        ref vf => Err(TokenError::UnsupportedValueFunction(vf.to_string())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::load;
    use crate::model::WordMode;
    use crate::valuation::automaton_value_lasso;

    #[test]
    fn gk_shapes() {
        let det = load("det-limsup").unwrap();
        let g = build_gk_arena(&det, 2).unwrap();
        for p in 0..g.arena.len() {
            if g.arena.owners[p] == Player::Eve {
                assert_eq!(g.arena.out[p].len(), 1);
            }
        }
        let b = load("fig-thdB").unwrap();
        let g3 = build_gk_arena(&b, 3).unwrap();
        assert!(g3.kinds.iter().all(|k| match k {
            GkPos::Letter { ps, .. } | GkPos::Eve { ps, .. } | GkPos::Adam { ps, .. } => ps.len() == 3,
        }));
        assert!(matches!(
            build_gk_arena(&load("fig-dbpalt").unwrap(), 2),
            Err(TokenError::Class(_))
        ));
    }

    #[test]
    fn figure_b_is_not_gfg() {
        let b = load("fig-thdB").unwrap();
        assert!(decide_gfg_limsup(&b).unwrap().is_no());
        let as_liminf = b.with_value_function(ValueFunction::LimInf, WordMode::Infinite);
        assert!(g2_semicheck(&as_liminf).unwrap().is_no());
    }

    #[test]
    fn limavg_structure_as_limsup_is_gfg() {
        let a = load("fig-limavg").unwrap().with_value_function(ValueFunction::LimSup, WordMode::Infinite);
        assert!(decide_gfg_limsup(&a).unwrap().is_yes());
    }

    #[test]
    fn decomposition_of_figure_b() {
        let b = load("fig-thdB").unwrap();
        let parts = buchi_decomposition(&b).unwrap();
        assert_eq!(parts.len(), 2);
        let a3 = &parts[1];
        // Accepts exactly the words whose value in B is 2.
        for (u, v) in [("", "a"), ("b", "a"), ("a", "b"), ("", "ab"), ("", "b"), ("ab", "a")] {
            let w = b.lasso(u, v).unwrap();
            let top = automaton_value_lasso(&b, &w).unwrap() == int(2);
            assert_eq!(automaton_value_lasso(a3, &w).unwrap() == int(1), top, "{u}({v})");
        }
        let single = Automaton::from_edges(&["a"], &["q"], "q", ValueFunction::LimSup, WordMode::Infinite, &[("q", "a", int(5), "q")]).unwrap();
        assert!(buchi_decomposition(&single).unwrap().is_empty());
    }

    #[test]
    fn limsup_priorities_follow_ranks() {
        let b = load("fig-thdB").unwrap();
        let (g, _) = solve_gk_limsup(&b, 2).unwrap();
        for (e, edge) in g.arena.edges.iter().enumerate() {
            let p = edge.priority.unwrap();
            match (&g.eve_weight[e], &g.adam_weights[e]) {
                (Some(_), _) => assert!(p % 2 == 0 && p >= 2),
                (_, Some(_)) => assert!(p % 2 == 1),
                _ => assert_eq!(p, 0),
            }
        }
    }
}
