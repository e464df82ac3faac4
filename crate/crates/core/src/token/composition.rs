//! Empirical composition check: the value of a game whose payoff is `A`
//! against the value of its product with `A`, where Eve resolves `A`'s
//! nondeterminism on the fly.

use num::Zero;

use super::TokenError;
use crate::game::{game_value, product_game_automaton, Arena, GameError, Player};
use crate::model::{Automaton, AutomatonClass, LetterId, WordMode};
use crate::rational::Rational;
use crate::valuation::automaton_value_finite;
use crate::FiniteWord;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CompositionTrial {
    pub value_game: Rational,
    pub value_product: Rational,
}

impl CompositionTrial {
    pub fn equal(&self) -> bool {
        self.value_game == self.value_product
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CompositionReport {
    pub trials: Vec<CompositionTrial>,
}

impl CompositionReport {
    pub fn all_equal(&self) -> bool {
        self.trials.iter().all(CompositionTrial::equal)
    }

    pub fn failures(&self) -> usize {
        self.trials.iter().filter(|t| !t.equal()).count()
    }
}

/// Minimax of `A(w)` over the plays of an acyclic arena, `w` the letters read.
fn language_value(g: &Arena, a: &Automaton, p: usize, word: &mut Vec<LetterId>) -> Result<Rational, TokenError> {
    if g.out[p].is_empty() || g.terminal[p] {
        if word.is_empty() {
            return Err(GameError::UnsolvableObjective(format!("play ending at {} reads no letter", g.names[p])).into());
        }
        return Ok(automaton_value_finite(a, &FiniteWord(word.clone()))?);
    }
    let mut best: Option<Rational> = None;
    for &e in &g.out[p] {
        let edge = &g.edges[e];
        if let Some(l) = edge.label {
            let l = a
                .letter_index(&g.alphabet[l])
                .ok_or_else(|| GameError::AlphabetMismatch(g.alphabet[l].clone()))?;
            word.push(l);
        }
        let v = language_value(g, a, edge.to, word);
        if edge.label.is_some() {
            word.pop();
        }
        let v = v?;
        let better = match (&best, g.owners[p]) {
            (None, _) => true,
            (Some(b), Player::Eve) => &v > b,
            (Some(b), Player::Adam) => &v < b,
        };
        if better {
            best = Some(v);
        }
    }
    Ok(best.unwrap_or_else(Rational::zero))
}

/// Compares `value(G)` with `value(G × A)` on every game. Finite-mode games
/// must be acyclic. In infinite mode `value(G)` is computed through
/// `reference`, a deterministic automaton equivalent to `a`; when `a` is
/// itself deterministic it serves as its own reference.
pub fn composition_test(
    a: &Automaton,
    games: &[Arena],
    reference: Option<&Automaton>,
) -> Result<CompositionReport, TokenError> {
    let mut trials = Vec::with_capacity(games.len());
    for g in games {
        let product = product_game_automaton(g, a)?;
        let value_product = game_value(&product.arena, &a.value_function, a.mode, None)?;
        let value_game = match a.mode {
            WordMode::Finite => {
                if !g.is_acyclic() {
                    return Err(GameError::CycleWithoutBound.into());
                }
                language_value(g, a, g.initial, &mut Vec::new())?
            }
            WordMode::Infinite => {
                let d = match reference {
                    Some(d) => d,
                    None if a.classify() == AutomatonClass::Deterministic => a,
                    None => {
                        return Err(GameError::UnsolvableObjective(
                            "the value of G needs a deterministic reference automaton".into(),
                        )
                        .into())
                    }
                };
                if d.classify() != AutomatonClass::Deterministic {
                    return Err(TokenError::Class("reference automaton must be deterministic".into()));
                }
                game_value(&product_game_automaton(g, d)?.arena, &d.value_function, d.mode, None)?
            }
        };
        trials.push(CompositionTrial {
            value_game,
            value_product,
        });
    }
    Ok(CompositionReport { trials })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::load;

    /// Adam alone picks `aa` or `ab`.
    fn aa_or_ab(alphabet: &[String]) -> Arena {
        let mut g = Arena::new(alphabet.to_vec());
        let r = g.add_position("r", Player::Adam);
        let m = g.add_position("m", Player::Adam);
        let x = g.add_position("x", Player::Adam);
        let y = g.add_position("y", Player::Adam);
        g.terminal[x] = true;
        g.terminal[y] = true;
        let a = alphabet.iter().position(|l| l == "a").unwrap();
        let b = alphabet.iter().position(|l| l == "b").unwrap();
        g.add_edge(r, m, Some(a), None, None);
        g.add_edge(m, x, Some(a), None, None);
        g.add_edge(m, y, Some(b), None, None);
        g
    }

    #[test]
    fn figure_a_keeps_its_value_in_composition() {
        // Not HD, yet GFG: committing to q1 secures 1, which is all Adam
        // concedes anyway by playing ab.
        let a = load("fig-thdA").unwrap();
        let g = aa_or_ab(&a.alphabet);
        let r = composition_test(&a, &[g], None).unwrap();
        assert_eq!(
            r.trials[0],
            CompositionTrial {
                value_game: Rational::from_integer(1.into()),
                value_product: Rational::from_integer(1.into()),
            }
        );
    }

    #[test]
    fn deterministic_composition_is_exact() {
        let a = load("det-sum").unwrap();
        let g = aa_or_ab(&a.alphabet);
        assert!(composition_test(&a, &[g], None).unwrap().all_equal());
    }

    #[test]
    fn infinite_mode_needs_a_reference() {
        let a = load("fig-thdB").unwrap();
        let mut g = Arena::new(a.alphabet.clone());
        let p = g.add_position("p", Player::Adam);
        g.add_edge(p, p, Some(0), None, None);
        assert!(composition_test(&a, &[g.clone()], None).is_err());
        let det = load("det-limsup").unwrap();
        let r = composition_test(&det, &[g], None).unwrap();
        assert!(r.all_equal());
        assert_eq!(r.failures(), 0);
    }
}
