//! History determinism and good-for-gameness through letter games and token
//! games.
//!
//! Every decider returns a [`Verdict`]. Exact deciders exist for Inf, Sup,
//! Sum, Avg and DSum (through G₁), LimSup (through G₂) and all thresholds of
//! the extremal functions. Everything else falls back to the bounded letter
//! game, which only ever refutes.

mod composition;
mod g1;
mod gk;
mod letter_game;
mod threshold;

use std::collections::{BTreeMap, VecDeque};

use thiserror::Error;

pub use composition::{composition_test, CompositionReport, CompositionTrial};
pub use g1::{
    build_g1, decide_hd_dsum, decide_hd_inf_sup_finite, decide_hd_sum_avg_finite, solve_g1, G1Game, G1Pos,
    G1Weights, G1Witness, Summary,
};
pub use gk::{
    buchi_decomposition, build_gk_arena, decide_gfg_limsup, g2_semicheck, solve_gk_liminf, solve_gk_limsup, GkArena,
    GkPos,
};
pub use letter_game::{
    bounded_letter_game, bounded_letter_game_with, refute_letter_game, AdamThreshold, LetterGameBound, DEFAULT_CAP,
    DEFAULT_FINITE_DEPTH, DEFAULT_INFINITE_DEPTH,
};
pub use threshold::{check_threshold_hd, decide_gfg, decide_gfg_with, decide_threshold_hd};

use crate::game::{Arena, GameError, Player, PositionalStrategy};
use crate::model::{extremum_to_limit, Automaton, AutomatonClass, ModelError, ValueFunction, WordMode};
use crate::valuation::ValuationError;
use crate::verdict::{Soundness, Verdict, VerdictKind, Witness};

#[derive(Debug, Error)]
pub enum TokenError {
    #[error("class error: {0}")]
    Class(String),
    #[error("unsupported value function: {0}")]
    UnsupportedValueFunction(String),
    #[error("mode error: {0}")]
    Mode(String),
    #[error("depth {depth} exceeds the cap {cap}")]
    DepthTooLarge { depth: usize, cap: usize },
    #[error("bounds must be at least 1")]
    BadBound,
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Game(#[from] GameError),
    #[error(transparent)]
    Valuation(#[from] ValuationError),
}

pub(crate) fn check_nondeterministic(a: &Automaton) -> Result<(), TokenError> {
    match a.classify() {
        AutomatonClass::Deterministic | AutomatonClass::Nondeterministic => Ok(()),
        c => Err(TokenError::Class(format!("expected a nondeterministic automaton, got a {} one", c.name()))),
    }
}

pub(crate) fn deterministic_yes() -> Verdict {
    Verdict::yes("deterministic", Soundness::Exact, None)
}

/// Restricts a positional strategy to the positions reachable when `player`
/// follows it, and names it.
pub(crate) fn strategy_witness(arena: &Arena, strat: &PositionalStrategy, player: Player) -> Witness {
    let mut seen = vec![false; arena.len()];
    let mut queue = VecDeque::from([arena.initial]);
    seen[arena.initial] = true;
    let mut map = BTreeMap::new();
    while let Some(p) = queue.pop_front() {
        let next: Vec<usize> = if arena.owners[p] == player {
            match strat.get(p).copied().flatten() {
                Some(e) => {
                    map.insert(arena.names[p].clone(), arena.edge_name(e));
                    vec![e]
                }
                None => vec![],
            }
        } else {
            arena.out[p].clone()
        };
        for e in next {
            let t = arena.edges[e].to;
            if !seen[t] {
                seen[t] = true;
                queue.push_back(t);
            }
        }
    }
    Witness::Strategy(map)
}

/// Replaces an Unknown by a bounded refutation when the letter game finds one.
fn with_oracle(a: &Automaton, v: Verdict, owner: Player, bound: LetterGameBound) -> Result<Verdict, TokenError> {
    if v.kind != VerdictKind::Unknown {
        return Ok(v);
    }
    let o = bounded_letter_game(a, owner, None, bound)?;
    if o.is_no() {
        let mut o = o;
        o.notes.push(format!("{} was inconclusive", v.method));
        Ok(o)
    } else {
        Ok(v)
    }
}

/// History determinism, by the best available method for the value function.
pub fn decide_hd(a: &Automaton, bound: LetterGameBound) -> Result<Verdict, TokenError> {
    let class = a.classify();
    if class == AutomatonClass::Deterministic {
        return Ok(deterministic_yes());
    }
    if class != AutomatonClass::Nondeterministic {
        // Both letter games must be won; only refutations are reachable.
        let eve = bounded_letter_game(a, Player::Eve, None, bound)?;
        if eve.is_no() {
            return Ok(eve);
        }
        let adam = bounded_letter_game(a, Player::Adam, None, bound)?;
        if adam.is_no() {
            return Ok(adam);
        }
        return Ok(Verdict::unknown(
            "letter-game-oracle",
            Soundness::Bounded,
            format!("no refutation of either letter game within depth {}", bound.depth),
        )
        .with_note(format!("{} automaton: no exact decider", class.name())));
    }
    let v = match (&a.value_function, a.mode) {
        (ValueFunction::Inf | ValueFunction::Sup, WordMode::Finite) => decide_hd_inf_sup_finite(a)?,
        (ValueFunction::Sum | ValueFunction::Avg, _) => decide_hd_sum_avg_finite(a)?,
        (ValueFunction::DSum(_), _) => decide_hd_dsum(a)?,
        (ValueFunction::LimSup, _) => decide_gfg_limsup(a)?,
        (ValueFunction::Sup, WordMode::Infinite) => {
            let mut v = decide_gfg_limsup(&extremum_to_limit(a)?)?;
            v.notes.push("Sup read as LimSup of the running maximum".into());
            v
        }
        (ValueFunction::Inf, WordMode::Infinite) => {
            let mut v = g2_semicheck(&extremum_to_limit(a)?)?;
            v.notes.push("Inf read as LimInf of the running minimum".into());
            v
        }
        (ValueFunction::LimInf | ValueFunction::LimInfAvg | ValueFunction::LimSupAvg, _) => g2_semicheck(a)?,
    };
    with_oracle(a, v, Player::Eve, bound)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::load;

    #[test]
    fn strategy_witness_follows_the_strategy() {
        let mut g = Arena::new(vec![]);
        let p = g.add_position("p", Player::Eve);
        let q = g.add_position("q", Player::Adam);
        let r = g.add_position("r", Player::Adam);
        let pq = g.add_edge(p, q, None, None, None);
        g.add_edge(p, r, None, None, None);
        g.add_edge(q, p, None, None, None);
        g.add_edge(r, r, None, None, None);
        let strat = vec![Some(pq), None, None];
        match strategy_witness(&g, &strat, Player::Eve) {
            Witness::Strategy(m) => {
                assert_eq!(m.len(), 1);
                assert_eq!(m["p"], g.edge_name(pq));
            }
            w => panic!("{w:?}"),
        }
    }

    #[test]
    fn decide_hd_on_the_corpus() {
        let hd = |name: &str| decide_hd(&load(name).unwrap(), LetterGameBound::new(4)).unwrap();
        assert!(hd("det-sum").is_yes());
        assert!(hd("det-limsup").is_yes());
        assert!(hd("fig-hdinf").is_yes());
        assert!(hd("fig-hdinf-finite").is_no());
        assert!(hd("fig-thdA").is_no());
        assert!(hd("fig-thdB").is_no());
        let limavg = hd("fig-limavg");
        assert!(limavg.is_unknown(), "{limavg:?}");
    }

    #[test]
    fn universal_and_alternating_go_to_the_oracle() {
        let v = decide_hd(&load("fig-dbpalt").unwrap(), LetterGameBound::new(3)).unwrap();
        assert!(v.method == "letter-game-oracle", "{v:?}");
        assert!(!v.is_yes());
    }
}
