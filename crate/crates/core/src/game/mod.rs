//! Finite two-player arenas and the solvers the reductions rely on.

use std::collections::VecDeque;

use thiserror::Error;

use crate::model::LetterId;
use crate::rational::Rational;

mod discounted;
mod energy;
mod finite;
mod mean_payoff;
mod parity;
mod product;
mod solve;
mod value;

pub use discounted::{solve_dsum, solve_dsum_threshold, DsumSolution};
pub use energy::{solve_energy_threshold, EnergySolution};
pub use finite::solve_finite_duration_value;
pub use mean_payoff::{max_mean_cycle, solve_mean_payoff_value, MeanPayoffSolution};
pub(crate) use mean_payoff::scc;
pub use parity::{solve_parity, ParitySolution};
pub use product::{product_game_automaton, ProductArena, ProductPosition};
pub use solve::{solve_game_file, GameOutcome, GameReport};
pub use value::game_value;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Player {
    Eve,
    Adam,
}

impl Player {
    pub fn opponent(self) -> Player {
        match self {
            Player::Eve => Player::Adam,
            Player::Adam => Player::Eve,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Player::Eve => "eve",
            Player::Adam => "adam",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Edge {
    pub from: usize,
    pub to: usize,
    pub label: Option<LetterId>,
    pub weight: Option<Rational>,
    pub priority: Option<u32>,
}

/// Chosen outgoing edge per position; `None` where the player does not move.
pub type PositionalStrategy = Vec<Option<usize>>;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum GameError {
    #[error("position `{0}` has no outgoing edge and is not terminal")]
    NoSuccessor(String),
    #[error("a cycle of unweighted edges passes through `{0}`")]
    EpsilonCycle(String),
    #[error("the arena has a cycle but no depth bound was given")]
    CycleWithoutBound,
    #[error("edge label `{0}` is not a letter of the automaton")]
    AlphabetMismatch(String),
    #[error("objective cannot be solved: {0}")]
    UnsolvableObjective(String),
    #[error("weights do not fit the integer solver")]
    Overflow,
}

/// Win/lose objectives and payoff kinds understood by the engine.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Objective {
    Safety(Vec<bool>),
    Parity,
    EnergyThreshold { checkpoints: Vec<bool> },
    MeanPayoffValue,
    DiscountedThreshold { lambda: Rational, t: Rational },
    FiniteValue(crate::model::ValueFunction),
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Arena {
    pub names: Vec<String>,
    pub owners: Vec<Player>,
    pub terminal: Vec<bool>,
    pub edges: Vec<Edge>,
    pub out: Vec<Vec<usize>>,
    pub initial: usize,
    pub alphabet: Vec<String>,
}

impl Arena {
    pub fn new(alphabet: Vec<String>) -> Self {
        Arena {
            alphabet,
            ..Default::default()
        }
    }

    pub fn len(&self) -> usize {
        self.owners.len()
    }

    pub fn is_empty(&self) -> bool {
        self.owners.is_empty()
    }

    pub fn add_position(&mut self, name: impl Into<String>, owner: Player) -> usize {
        self.names.push(name.into());
        self.owners.push(owner);
        self.terminal.push(false);
        self.out.push(Vec::new());
        self.owners.len() - 1
    }

    pub fn add_edge(
        &mut self,
        from: usize,
        to: usize,
        label: Option<LetterId>,
        weight: Option<Rational>,
        priority: Option<u32>,
    ) -> usize {
        self.edges.push(Edge {
            from,
            to,
            label,
            weight,
            priority,
        });
        let id = self.edges.len() - 1;
        self.out[from].push(id);
        id
    }

    pub fn position_index(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    /// Every non-terminal position must have a move.
    pub fn check_moves(&self) -> Result<(), GameError> {
        for p in 0..self.len() {
            if !self.terminal[p] && self.out[p].is_empty() {
                return Err(GameError::NoSuccessor(self.names[p].clone()));
            }
        }
        Ok(())
    }

    /// Rejects cycles consisting only of unweighted edges.
    pub fn check_epsilon_cycles(&self) -> Result<(), GameError> {
        let n = self.len();
        let mut indeg = vec![0usize; n];
        for e in &self.edges {
            if e.weight.is_none() {
                indeg[e.to] += 1;
            }
        }
        let mut queue: VecDeque<usize> = (0..n).filter(|&p| indeg[p] == 0).collect();
        let mut removed = 0;
        while let Some(p) = queue.pop_front() {
            removed += 1;
            for &e in &self.out[p] {
                let edge = &self.edges[e];
                if edge.weight.is_none() {
                    indeg[edge.to] -= 1;
                    if indeg[edge.to] == 0 {
                        queue.push_back(edge.to);
                    }
                }
            }
        }
        if removed == n {
            Ok(())
        } else {
            let p = (0..n).find(|&p| indeg[p] > 0).unwrap_or(0);
            Err(GameError::EpsilonCycle(self.names[p].clone()))
        }
    }

    pub fn is_acyclic(&self) -> bool {
        let n = self.len();
        let mut indeg = vec![0usize; n];
        for e in &self.edges {
            indeg[e.to] += 1;
        }
        let mut queue: VecDeque<usize> = (0..n).filter(|&p| indeg[p] == 0).collect();
        let mut removed = 0;
        while let Some(p) = queue.pop_front() {
            removed += 1;
            for &e in &self.out[p] {
                let t = self.edges[e].to;
                indeg[t] -= 1;
                if indeg[t] == 0 {
                    queue.push_back(t);
                }
            }
        }
        removed == n
    }

    pub fn reachable(&self) -> Vec<bool> {
        let mut seen = vec![false; self.len()];
        if self.is_empty() {
            return seen;
        }
        let mut queue = VecDeque::from([self.initial]);
        seen[self.initial] = true;
        while let Some(p) = queue.pop_front() {
            for &e in &self.out[p] {
                let t = self.edges[e].to;
                if !seen[t] {
                    seen[t] = true;
                    queue.push_back(t);
                }
            }
        }
        seen
    }

    pub(crate) fn predecessors(&self) -> Vec<Vec<usize>> {
        let mut pred = vec![Vec::new(); self.len()];
        for (i, e) in self.edges.iter().enumerate() {
            pred[e.to].push(i);
        }
        pred
    }

    pub fn edge_name(&self, e: usize) -> String {
        let edge = &self.edges[e];
        let mut s = format!("{}->{}", self.names[edge.from], self.names[edge.to]);
        if let Some(l) = edge.label {
            s.push_str(&format!(" [{}]", self.alphabet.get(l).cloned().unwrap_or_default()));
        }
        s
    }
}

/// Attractor of `player` inside `mask` towards `target` positions or `good` edges.
pub(crate) fn attractor(
    arena: &Arena,
    pred: &[Vec<usize>],
    mask: &[bool],
    player: Player,
    target: &[bool],
    good: &dyn Fn(usize) -> bool,
) -> (Vec<bool>, PositionalStrategy) {
    let n = arena.len();
    let mut attr = vec![false; n];
    let mut strat: PositionalStrategy = vec![None; n];
    let mut count = vec![0usize; n];
    let mut queue = VecDeque::new();
    for p in 0..n {
        if !mask[p] {
            continue;
        }
        if target[p] {
            attr[p] = true;
            queue.push_back(p);
            continue;
        }
        let inside: Vec<usize> = arena.out[p]
            .iter()
            .copied()
            .filter(|&e| mask[arena.edges[e].to])
            .collect();
        if arena.owners[p] == player {
            if let Some(&e) = inside.iter().find(|&&e| good(e)) {
                attr[p] = true;
                strat[p] = Some(e);
                queue.push_back(p);
            }
        } else {
            count[p] = inside.iter().filter(|&&e| !good(e)).count();
            if !inside.is_empty() && count[p] == 0 {
                attr[p] = true;
                queue.push_back(p);
            }
        }
    }
    while let Some(v) = queue.pop_front() {
        for &e in &pred[v] {
            let u = arena.edges[e].from;
            if !mask[u] || attr[u] || good(e) {
                continue;
            }
            if arena.owners[u] == player {
                attr[u] = true;
                strat[u] = Some(e);
                queue.push_back(u);
            } else {
                count[u] -= 1;
                if count[u] == 0 {
                    attr[u] = true;
                    queue.push_back(u);
                }
            }
        }
    }
    (attr, strat)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SafetySolution {
    pub eve_wins: Vec<bool>,
    pub eve_strategy: PositionalStrategy,
    pub adam_strategy: PositionalStrategy,
}

/// Eve keeps the play away from `bad` positions and `bad_edge` edges.
pub fn solve_safety_edges(
    arena: &Arena,
    bad: &[bool],
    bad_edge: &dyn Fn(usize) -> bool,
) -> SafetySolution {
    let pred = arena.predecessors();
    let mask = vec![true; arena.len()];
    let (adam_attr, adam_strategy) = attractor(arena, &pred, &mask, Player::Adam, bad, bad_edge);
    let eve_wins: Vec<bool> = adam_attr.iter().map(|b| !b).collect();
    let mut eve_strategy = vec![None; arena.len()];
    for p in 0..arena.len() {
        if eve_wins[p] && arena.owners[p] == Player::Eve {
            eve_strategy[p] = arena.out[p]
                .iter()
                .copied()
                .find(|&e| !bad_edge(e) && eve_wins[arena.edges[e].to]);
        }
    }
    SafetySolution {
        eve_wins,
        eve_strategy,
        adam_strategy,
    }
}

pub fn solve_safety(arena: &Arena, bad: &[bool]) -> SafetySolution {
    solve_safety_edges(arena, bad, &|_| false)
}

/// Eve forces a visit to `target` positions or `good` edges.
pub fn solve_reachability_edges(
    arena: &Arena,
    target: &[bool],
    good: &dyn Fn(usize) -> bool,
) -> SafetySolution {
    let pred = arena.predecessors();
    let mask = vec![true; arena.len()];
    let (eve_attr, eve_strategy) = attractor(arena, &pred, &mask, Player::Eve, target, good);
    let mut adam_strategy = vec![None; arena.len()];
    for p in 0..arena.len() {
        if !eve_attr[p] && arena.owners[p] == Player::Adam {
            adam_strategy[p] = arena.out[p]
                .iter()
                .copied()
                .find(|&e| !good(e) && !eve_attr[arena.edges[e].to]);
        }
    }
    SafetySolution {
        eve_wins: eve_attr,
        eve_strategy,
        adam_strategy,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_loops(owner: Player) -> Arena {
        let mut a = Arena::new(vec![]);
        let p = a.add_position("p", owner);
        let bad = a.add_position("bad", Player::Eve);
        a.add_edge(p, p, None, None, None);
        a.add_edge(p, bad, None, None, None);
        a.add_edge(bad, bad, None, None, None);
        a
    }

    #[test]
    fn empty_bad_set_is_safe() {
        let a = two_loops(Player::Adam);
        let s = solve_safety(&a, &[false, false]);
        assert!(s.eve_wins.iter().all(|&b| b));
    }

    #[test]
    fn bad_initial_is_lost() {
        let a = two_loops(Player::Eve);
        let s = solve_safety(&a, &[true, false]);
        assert!(!s.eve_wins[0]);
    }

    #[test]
    fn owner_decides_escape() {
        let eve = solve_safety(&two_loops(Player::Eve), &[false, true]);
        assert!(eve.eve_wins[0]);
        assert_eq!(eve.eve_strategy[0], Some(0));
        let adam = solve_safety(&two_loops(Player::Adam), &[false, true]);
        assert!(!adam.eve_wins[0]);
        assert_eq!(adam.adam_strategy[0], Some(1));
        let reach = solve_reachability_edges(&two_loops(Player::Eve), &[false, true], &|_| false);
        assert!(reach.eve_wins[0]);
    }

    #[test]
    fn epsilon_cycles_are_detected() {
        let a = two_loops(Player::Eve);
        assert!(a.check_epsilon_cycles().is_err());
        let mut b = Arena::new(vec![]);
        let p = b.add_position("p", Player::Eve);
        b.add_edge(p, p, None, Some(crate::rational::int(0)), None);
        assert!(b.check_epsilon_cycles().is_ok());
    }
}
