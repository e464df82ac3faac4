//! Discounted-sum games solved exactly by strategy iteration.
//!
//! Weighted edges contribute `w` and discount the rest of the play by λ.
//! Unweighted edges neither contribute nor discount. Terminal positions have
//! value 0.

use num::{One, Zero};

use super::{Arena, GameError, Player, PositionalStrategy};
use crate::rational::Rational;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DsumSolution {
    pub values: Vec<Rational>,
    pub eve_strategy: PositionalStrategy,
    pub adam_strategy: PositionalStrategy,
}

fn step(arena: &Arena, lambda: &Rational, e: usize, values: &[Rational]) -> Rational {
    let edge = &arena.edges[e];
    match &edge.weight {
        Some(w) => w + lambda * &values[edge.to],
        None => values[edge.to].clone(),
    }
}

/// Values of the play determined by picking `profile[p]` everywhere.
fn evaluate(arena: &Arena, lambda: &Rational, profile: &[Option<usize>]) -> Vec<Rational> {
    let n = arena.len();
    let mut values: Vec<Option<Rational>> = vec![None; n];
    // 0 = unvisited, 1 = on current path, 2 = done
    let mut state = vec![0u8; n];
    for start in 0..n {
        if state[start] != 0 {
            continue;
        }
        let mut path: Vec<usize> = Vec::new();
        let mut p = start;
        loop {
            if state[p] == 2 {
                break;
            }
            if state[p] == 1 {
                // Close the cycle starting at p: v(p) = S / (1 - D).
                let from = path.iter().position(|&x| x == p).unwrap();
                let mut sum = Rational::zero();
                let mut disc = Rational::one();
                for &c in &path[from..] {
                    let e: usize = profile[c].unwrap();
                    if let Some(w) = &arena.edges[e].weight {
                        sum += &disc * w;
                        disc *= lambda;
                    }
                }
                values[p] = Some(sum / (Rational::one() - disc));
                state[p] = 2;
                break;
            }
            match profile[p] {
                None => {
                    values[p] = Some(Rational::zero());
                    state[p] = 2;
                    break;
                }
                Some(e) => {
                    state[p] = 1;
                    path.push(p);
                    p = arena.edges[e].to;
                }
            }
        }
        while let Some(c) = path.pop() {
            if state[c] == 2 {
                continue;
            }
            let e = profile[c].unwrap();
            let next = values[arena.edges[e].to].clone().unwrap();
            values[c] = Some(match &arena.edges[e].weight {
                Some(w) => w + lambda * next,
                None => next,
            });
            state[c] = 2;
        }
    }
    values.into_iter().map(Option::unwrap).collect()
}

/// Switches `player`'s choices to strictly better edges. Returns whether anything changed.
fn improve(
    arena: &Arena,
    lambda: &Rational,
    player: Player,
    profile: &mut [Option<usize>],
    values: &[Rational],
) -> bool {
    let mut changed = false;
    for p in 0..arena.len() {
        if arena.owners[p] != player || arena.out[p].is_empty() {
            continue;
        }
        let current = profile[p].unwrap();
        let mut best = current;
        let mut best_v = step(arena, lambda, current, values);
        for &e in &arena.out[p] {
            let v = step(arena, lambda, e, values);
            let better = match player {
                Player::Eve => v > best_v,
                Player::Adam => v < best_v,
            };
            if better {
                best = e;
                best_v = v;
            }
        }
        if best != current {
            profile[p] = Some(best);
            changed = true;
        }
    }
    changed
}

pub fn solve_dsum(arena: &Arena, lambda: &Rational) -> Result<DsumSolution, GameError> {
    if *lambda <= Rational::zero() || *lambda >= Rational::one() {
        return Err(GameError::UnsolvableObjective("discount factor outside (0,1)".into()));
    }
    arena.check_moves()?;
    arena.check_epsilon_cycles()?;
    let mut profile: Vec<Option<usize>> = arena.out.iter().map(|o| o.first().copied()).collect();
    loop {
        // Adam's best response to the current Eve strategy.
        let values = loop {
            let values = evaluate(arena, lambda, &profile);
            if !improve(arena, lambda, Player::Adam, &mut profile, &values) {
                break values;
            }
        };
        if !improve(arena, lambda, Player::Eve, &mut profile, &values) {
            let mut eve_strategy = vec![None; arena.len()];
            let mut adam_strategy = vec![None; arena.len()];
            for p in 0..arena.len() {
                match arena.owners[p] {
                    Player::Eve => eve_strategy[p] = profile[p],
                    Player::Adam => adam_strategy[p] = profile[p],
                }
            }
            return Ok(DsumSolution {
                values,
                eve_strategy,
                adam_strategy,
            });
        }
    }
}

/// Eve wins where the value is at least `t`.
pub fn solve_dsum_threshold(
    arena: &Arena,
    lambda: &Rational,
    t: &Rational,
) -> Result<(Vec<bool>, DsumSolution), GameError> {
    let sol = solve_dsum(arena, lambda)?;
    Ok((sol.values.iter().map(|v| v >= t).collect(), sol))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, int};

    #[test]
    fn constant_loop() {
        let mut a = Arena::new(vec![]);
        let p = a.add_position("p", Player::Eve);
        a.add_edge(p, p, None, Some(int(1)), None);
        let s = solve_dsum(&a, &frac(1, 2)).unwrap();
        assert_eq!(s.values[0], int(2));
    }

    #[test]
    fn epsilon_edges_do_not_discount() {
        let mut a = Arena::new(vec![]);
        let p = a.add_position("p", Player::Eve);
        let q = a.add_position("q", Player::Eve);
        a.add_edge(p, q, None, None, None);
        a.add_edge(q, p, None, Some(int(3)), None);
        let s = solve_dsum(&a, &frac(1, 2)).unwrap();
        assert_eq!(s.values[p], int(6));
        assert_eq!(s.values[q], int(6));
    }

    #[test]
    fn minimax_choice() {
        // Eve picks between a 0-loop and going to Adam, who picks 1 or -1 forever.
        let mut a = Arena::new(vec![]);
        let p = a.add_position("p", Player::Eve);
        let q = a.add_position("q", Player::Adam);
        let good = a.add_position("good", Player::Eve);
        let bad = a.add_position("bad", Player::Eve);
        a.add_edge(p, p, None, Some(int(0)), None);
        a.add_edge(p, q, None, Some(int(0)), None);
        a.add_edge(q, good, None, Some(int(0)), None);
        a.add_edge(q, bad, None, Some(int(0)), None);
        a.add_edge(good, good, None, Some(int(1)), None);
        a.add_edge(bad, bad, None, Some(int(-1)), None);
        let s = solve_dsum(&a, &frac(1, 2)).unwrap();
        assert_eq!(s.values[q], int(-1));
        assert_eq!(s.values[p], int(0));
        assert_eq!(s.eve_strategy[p], Some(0));
        let (wins, _) = solve_dsum_threshold(&a, &frac(1, 2), &int(0)).unwrap();
        assert!(wins[p]);
    }
}
