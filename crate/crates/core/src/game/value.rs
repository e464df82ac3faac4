//! Value of a weighted arena under a value function.

use super::{
    solve_dsum, solve_finite_duration_value, solve_mean_payoff_value, solve_parity,
    solve_reachability_edges, solve_safety_edges, Arena, GameError,
};
use crate::model::{ValueFunction, WordMode};
use crate::rational::Rational;

/// Positions from which Eve guarantees value at least `t` for Inf, Sup,
/// LimInf or LimSup on infinite plays.
pub(crate) fn threshold_wins(arena: &Arena, vf: &ValueFunction, t: &Rational) -> Result<Vec<bool>, GameError> {
    let at_least = |e: usize| arena.edges[e].weight.as_ref().is_some_and(|w| w >= t);
    let below = |e: usize| arena.edges[e].weight.as_ref().is_some_and(|w| w < t);
    match vf {
        ValueFunction::Sup => Ok(solve_reachability_edges(arena, &vec![false; arena.len()], &at_least).eve_wins),
        ValueFunction::Inf => Ok(solve_safety_edges(arena, &vec![false; arena.len()], &below).eve_wins),
        ValueFunction::LimSup | ValueFunction::LimInf => {
            let mut g = arena.clone();
            let sup = *vf == ValueFunction::LimSup;
            for e in g.edges.iter_mut() {
                e.priority = Some(match &e.weight {
                    None => 0,
                    Some(w) if sup => {
                        if w >= t {
                            2
                        } else {
                            1
                        }
                    }
                    Some(w) => u32::from(w < t),
                });
            }
            Ok(solve_parity(&g)?.eve_wins)
        }
        other => Err(GameError::UnsolvableObjective(format!("no threshold game for {other}"))),
    }
}

fn check_infinite(arena: &Arena) -> Result<(), GameError> {
    for p in 0..arena.len() {
        if arena.terminal[p] || arena.out[p].is_empty() {
            return Err(GameError::NoSuccessor(arena.names[p].clone()));
        }
    }
    arena.check_epsilon_cycles()
}

/// Value Eve can guarantee from the initial position.
pub fn game_value(
    arena: &Arena,
    vf: &ValueFunction,
    mode: WordMode,
    depth: Option<usize>,
) -> Result<Rational, GameError> {
    if mode == WordMode::Finite {
        return solve_finite_duration_value(arena, vf, depth);
    }
    check_infinite(arena)?;
    match vf {
        ValueFunction::DSum(l) => Ok(solve_dsum(arena, l)?.values[arena.initial].clone()),
        ValueFunction::Inf | ValueFunction::Sup | ValueFunction::LimInf | ValueFunction::LimSup => {
            let mut ws: Vec<Rational> = arena.edges.iter().filter_map(|e| e.weight.clone()).collect();
            ws.sort();
            ws.dedup();
            for t in ws.iter().rev() {
                if threshold_wins(arena, vf, t)?[arena.initial] {
                    return Ok(t.clone());
                }
            }
            Err(GameError::UnsolvableObjective("arena has no weights".into()))
        }
        ValueFunction::LimInfAvg | ValueFunction::LimSupAvg => {
            if arena.edges.iter().any(|e| e.weight.is_none()) {
                return Err(GameError::UnsolvableObjective(
                    "mean payoff needs every edge weighted".into(),
                ));
            }
            Ok(solve_mean_payoff_value(arena)?.value)
        }
        ValueFunction::Sum | ValueFunction::Avg => Err(GameError::UnsolvableObjective(format!(
            "{vf} needs finite plays"
        ))),
    }
}
