//! Energy games with checkpoints.
//!
//! The energy level starts at the initial credit, every weighted edge adds its
//! weight, and the level must be non-negative whenever a checkpoint position
//! is visited. Credits are computed by upward value iteration on integers.

use std::collections::VecDeque;

use num::bigint::BigInt;
use num::Zero;

use super::{Arena, GameError, Player, PositionalStrategy};
use crate::rational::{common_denominator, scaled_i64};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EnergySolution {
    /// Minimal initial credit per position in scaled units, `None` when infinite.
    pub credit: Vec<Option<i64>>,
    /// Eve wins with zero initial credit.
    pub eve_wins: Vec<bool>,
    pub eve_strategy: PositionalStrategy,
    /// Factor the weights were multiplied by to become integers.
    pub scale: BigInt,
}

impl EnergySolution {
    pub fn finite_credit(&self, p: usize) -> bool {
        self.credit[p].is_some()
    }
}

/// Checkpoint-free stretches must be acyclic, otherwise the constraint would be
/// vacuous along a cycle.
fn check_checkpoint_cycles(arena: &Arena, checkpoints: &[bool]) -> Result<(), GameError> {
    let n = arena.len();
    let mut indeg = vec![0usize; n];
    for e in &arena.edges {
        if !checkpoints[e.from] && !checkpoints[e.to] {
            indeg[e.to] += 1;
        }
    }
    let mut queue: VecDeque<usize> = (0..n).filter(|&p| !checkpoints[p] && indeg[p] == 0).collect();
    let mut removed = 0;
    while let Some(p) = queue.pop_front() {
        removed += 1;
        for &e in &arena.out[p] {
            let t = arena.edges[e].to;
            if !checkpoints[t] {
                indeg[t] -= 1;
                if indeg[t] == 0 {
                    queue.push_back(t);
                }
            }
        }
    }
    let free = checkpoints.iter().filter(|&&c| !c).count();
    if removed == free {
        Ok(())
    } else {
        Err(GameError::UnsolvableObjective(
            "a cycle avoids every checkpoint".into(),
        ))
    }
}

pub(crate) fn integer_weights(arena: &Arena) -> Result<(Vec<i64>, BigInt), GameError> {
    let scale = common_denominator(arena.edges.iter().filter_map(|e| e.weight.as_ref()));
    let mut ws = Vec::with_capacity(arena.edges.len());
    for e in &arena.edges {
        let w = match &e.weight {
            Some(w) => scaled_i64(w, &scale).ok_or(GameError::Overflow)?,
            None => 0,
        };
        ws.push(w);
    }
    Ok((ws, scale))
}

/// Solves the energy game on already integral weights.
pub(crate) fn solve_energy_int(
    arena: &Arena,
    weights: &[i64],
    checkpoints: &[bool],
) -> Result<(Vec<Option<i64>>, PositionalStrategy), GameError> {
    check_checkpoint_cycles(arena, checkpoints)?;
    let n = arena.len();
    let max_w = weights.iter().map(|w| w.unsigned_abs()).max().unwrap_or(0);
    let cutoff: i64 = (n as u64)
        .checked_mul(max_w)
        .and_then(|c| i64::try_from(c).ok())
        .ok_or(GameError::Overflow)?;
    const INF: i64 = i64::MAX;
    let floor = |p: usize| if checkpoints[p] { 0 } else { -cutoff };
    let mut credit: Vec<i64> = (0..n).map(floor).collect();
    let pred = arena.predecessors();
    let eval = |p: usize, credit: &[i64]| -> i64 {
        if arena.out[p].is_empty() {
            return floor(p);
        }
        let step = |e: usize| {
            let c = credit[arena.edges[e].to];
            if c == INF {
                INF
            } else {
                c - weights[e]
            }
        };
        let best = match arena.owners[p] {
            Player::Eve => arena.out[p].iter().map(|&e| step(e)).min().unwrap(),
            Player::Adam => arena.out[p].iter().map(|&e| step(e)).max().unwrap(),
        };
        if best == INF || best > cutoff {
            INF
        } else if checkpoints[p] {
            best.max(0)
        } else {
            best
        }
    };
    let mut queue: VecDeque<usize> = (0..n).collect();
    let mut queued = vec![true; n];
    while let Some(p) = queue.pop_front() {
        queued[p] = false;
        let c = eval(p, &credit);
        if c > credit[p] {
            credit[p] = c;
            for &e in &pred[p] {
                let u = arena.edges[e].from;
                if !queued[u] {
                    queued[u] = true;
                    queue.push_back(u);
                }
            }
        }
    }
    let mut strategy = vec![None; n];
    for p in 0..n {
        if arena.owners[p] == Player::Eve && credit[p] != INF {
            strategy[p] = arena.out[p].iter().copied().find(|&e| {
                let c = credit[arena.edges[e].to];
                c != INF && {
                    let need = c - weights[e];
                    let need = if checkpoints[p] { need.max(0) } else { need };
                    need <= credit[p]
                }
            });
        }
    }
    let credit = credit
        .into_iter()
        .map(|c| if c == INF { None } else { Some(c) })
        .collect();
    Ok((credit, strategy))
}

/// Eve wins from a position when zero initial credit keeps the energy
/// non-negative at every checkpoint forever.
pub fn solve_energy_threshold(arena: &Arena, checkpoints: &[bool]) -> Result<EnergySolution, GameError> {
    arena.check_moves()?;
    let (weights, scale) = integer_weights(arena)?;
    let (credit, eve_strategy) = solve_energy_int(arena, &weights, checkpoints)?;
    let eve_wins = credit.iter().map(|c| matches!(c, Some(c) if *c <= 0)).collect();
    debug_assert!(!scale.is_zero());
    Ok(EnergySolution {
        credit,
        eve_wins,
        eve_strategy,
        scale,
    })
}
