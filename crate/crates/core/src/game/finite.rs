//! Finite-duration games: the play stops at a terminal position or after
//! `depth` edges, and its payoff is the value function applied to the
//! weights seen along the way.

use std::collections::HashMap;

use num::Zero;

use super::{Arena, GameError, Player};
use crate::model::ValueFunction;
use crate::rational::Rational;

/// Summary of the weights seen so far; enough to finish the value.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
enum Acc {
    Ext(Option<Rational>),
    Avg(Rational, usize),
}

fn push(vf: &ValueFunction, acc: &Acc, w: &Rational) -> Acc {
    match (vf, acc) {
        (ValueFunction::Inf, Acc::Ext(m)) => Acc::Ext(Some(m.as_ref().map_or(w.clone(), |m| m.min(w).clone()))),
        (ValueFunction::Sup, Acc::Ext(m)) => Acc::Ext(Some(m.as_ref().map_or(w.clone(), |m| m.max(w).clone()))),
        (_, Acc::Avg(s, n)) => Acc::Avg(s + w, n + 1),
        _ => unreachable!("accumulator matches the value function"),
    }
}

fn finish(acc: &Acc) -> Option<Rational> {
    match acc {
        Acc::Ext(m) => m.clone(),
        Acc::Avg(_, 0) => None,
        Acc::Avg(s, n) => Some(s / Rational::from_integer((*n as i64).into())),
    }
}

struct Solver<'a> {
    arena: &'a Arena,
    vf: &'a ValueFunction,
    memo: HashMap<(usize, usize, Acc), Option<Rational>>,
    suffix: HashMap<(usize, usize), Rational>,
}

impl Solver<'_> {
    fn better(&self, p: usize, a: &Rational, b: &Rational) -> bool {
        match self.arena.owners[p] {
            Player::Eve => a > b,
            Player::Adam => a < b,
        }
    }

    /// Prefix-dependent search used for Inf, Sup and Avg.
    fn solve_acc(&mut self, p: usize, left: usize, acc: Acc) -> Result<Rational, GameError> {
        let key = (p, left, acc.clone());
        if let Some(v) = self.memo.get(&key) {
            return v.clone().ok_or_else(empty_play);
        }
        let mut best: Option<Rational> = None;
        if left == 0 || self.arena.out[p].is_empty() {
            best = finish(&acc);
        } else {
            for &e in &self.arena.out[p].clone() {
                let edge = &self.arena.edges[e];
                let next = match &edge.weight {
                    Some(w) => push(self.vf, &acc, w),
                    None => acc.clone(),
                };
                let v = self.solve_acc(edge.to, left - 1, next)?;
                if best.as_ref().is_none_or(|b| self.better(p, &v, b)) {
                    best = Some(v);
                }
            }
        }
        self.memo.insert(key, best.clone());
        best.ok_or_else(empty_play)
    }

    /// Suffix values for Sum and DSum, which compose without the prefix.
    fn solve_suffix(&mut self, p: usize, left: usize) -> Rational {
        if let Some(v) = self.suffix.get(&(p, left)) {
            return v.clone();
        }
        let mut best: Option<Rational> = None;
        if left > 0 {
            for &e in &self.arena.out[p].clone() {
                let edge = self.arena.edges[e].clone();
                let rest = self.solve_suffix(edge.to, left - 1);
                let v = match (&edge.weight, self.vf) {
                    (Some(w), ValueFunction::DSum(l)) => w + l * rest,
                    (Some(w), _) => w + rest,
                    (None, _) => rest,
                };
                if best.as_ref().is_none_or(|b| self.better(p, &v, b)) {
                    best = Some(v);
                }
            }
        }
        let v = best.unwrap_or_else(Rational::zero);
        self.suffix.insert((p, left), v.clone());
        v
    }
}

fn empty_play() -> GameError {
    GameError::UnsolvableObjective("a play ends without any weight".into())
}

/// Value of the initial position. Without `depth` the arena must be acyclic.
pub fn solve_finite_duration_value(
    arena: &Arena,
    vf: &ValueFunction,
    depth: Option<usize>,
) -> Result<Rational, GameError> {
    if matches!(
        vf,
        ValueFunction::LimInf | ValueFunction::LimSup | ValueFunction::LimInfAvg | ValueFunction::LimSupAvg
    ) {
        return Err(GameError::UnsolvableObjective(format!("{vf} has no finite-duration reading")));
    }
    let left = match depth {
        Some(d) => d,
        None => {
            if !arena.is_acyclic() {
                return Err(GameError::CycleWithoutBound);
            }
            arena.len()
        }
    };
    let mut s = Solver {
        arena,
        vf,
        memo: HashMap::new(),
        suffix: HashMap::new(),
    };
    match vf {
        ValueFunction::Sum | ValueFunction::DSum(_) => Ok(s.solve_suffix(arena.initial, left)),
        ValueFunction::Avg => s.solve_acc(arena.initial, left, Acc::Avg(Rational::zero(), 0)),
        _ => s.solve_acc(arena.initial, left, Acc::Ext(None)),
    }
}
