//! Product of a letter-labelled arena with an automaton.
//!
//! Labelled edges of the arena feed their letter to the automaton. Or nodes
//! of the resulting condition belong to Eve and And nodes to Adam; each leaf
//! becomes a weighted edge into the next base position. Unlabelled edges move
//! the arena only.

use std::collections::{HashMap, VecDeque};

use super::{Arena, GameError, Player};
use crate::model::{Automaton, Condition, LetterId, StateId};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum ProductPosition {
    Base { game: usize, state: StateId },
    /// Inner node of `δ(state, letter)` reached by `path`, heading to arena position `game`.
    Node {
        game: usize,
        state: StateId,
        letter: LetterId,
        path: Vec<usize>,
    },
}

#[derive(Clone, Debug)]
pub struct ProductArena {
    pub arena: Arena,
    pub kinds: Vec<ProductPosition>,
}

fn subcondition<'a>(c: &'a Condition, path: &[usize]) -> &'a Condition {
    let mut c = c;
    for &i in path {
        c = match c {
            Condition::Or(cs) | Condition::And(cs) => &cs[i],
            Condition::Leaf { .. } => unreachable!("paths end at inner nodes"),
        };
    }
    c
}

pub fn product_game_automaton(g: &Arena, a: &Automaton) -> Result<ProductArena, GameError> {
    let mut letter_map = vec![0usize; g.alphabet.len()];
    for (i, l) in g.alphabet.iter().enumerate() {
        letter_map[i] = a
            .letter_index(l)
            .ok_or_else(|| GameError::AlphabetMismatch(l.clone()))?;
    }
    let mut out = Arena::new(a.alphabet.clone());
    let mut kinds: Vec<ProductPosition> = Vec::new();
    let mut index: HashMap<ProductPosition, usize> = HashMap::new();
    let mut queue = VecDeque::new();

    let mut intern = |k: ProductPosition,
                      out: &mut Arena,
                      queue: &mut VecDeque<usize>,
                      kinds: &mut Vec<ProductPosition>|
     -> usize {
        if let Some(&i) = index.get(&k) {
            return i;
        }
        let (name, owner, terminal) = match &k {
            ProductPosition::Base { game, state } => (
                format!("({},{})", g.names[*game], a.states[*state]),
                g.owners[*game],
                g.terminal[*game],
            ),
            ProductPosition::Node { game, state, letter, path } => {
                let owner = match subcondition(a.cond(*state, *letter), path) {
                    Condition::And(_) => Player::Adam,
                    _ => Player::Eve,
                };
                let p: Vec<String> = path.iter().map(|i| i.to_string()).collect();
                (
                    format!("({},{},{},[{}])", g.names[*game], a.states[*state], a.alphabet[*letter], p.join(".")),
                    owner,
                    false,
                )
            }
        };
        let i = out.add_position(name, owner);
        out.terminal[i] = terminal;
        kinds.push(k.clone());
        index.insert(k, i);
        queue.push_back(i);
        i
    };

    let start = intern(
        ProductPosition::Base {
            game: g.initial,
            state: a.initial,
        },
        &mut out,
        &mut queue,
        &mut kinds,
    );
    out.initial = start;
    while let Some(i) = queue.pop_front() {
        match kinds[i].clone() {
            ProductPosition::Base { game, state } => {
                for &e in &g.out[game] {
                    let edge = &g.edges[e];
                    match edge.label {
                        None => {
                            let t = intern(ProductPosition::Base { game: edge.to, state }, &mut out, &mut queue, &mut kinds);
                            out.add_edge(i, t, None, None, None);
                        }
                        Some(l) => {
                            let letter = letter_map[l];
                            match a.cond(state, letter) {
                                Condition::Leaf { weight, target } => {
                                    let t = intern(
                                        ProductPosition::Base { game: edge.to, state: *target },
                                        &mut out,
                                        &mut queue,
                                        &mut kinds,
                                    );
                                    out.add_edge(i, t, Some(letter), Some(weight.clone()), None);
                                }
                                _ => {
                                    let t = intern(
                                        ProductPosition::Node {
                                            game: edge.to,
                                            state,
                                            letter,
                                            path: vec![],
                                        },
                                        &mut out,
                                        &mut queue,
                                        &mut kinds,
                                    );
                                    out.add_edge(i, t, Some(letter), None, None);
                                }
                            }
                        }
                    }
                }
            }
            ProductPosition::Node { game, state, letter, path } => {
                let c = subcondition(a.cond(state, letter), &path);
                let children = match c {
                    Condition::Or(cs) | Condition::And(cs) => cs,
                    Condition::Leaf { .. } => unreachable!(),
                };
                for (k, child) in children.iter().enumerate() {
                    match child {
                        Condition::Leaf { weight, target } => {
                            let t = intern(ProductPosition::Base { game, state: *target }, &mut out, &mut queue, &mut kinds);
                            out.add_edge(i, t, None, Some(weight.clone()), None);
                        }
                        _ => {
                            let mut p = path.clone();
                            p.push(k);
                            let t = intern(
                                ProductPosition::Node {
                                    game,
                                    state,
                                    letter,
                                    path: p,
                                },
                                &mut out,
                                &mut queue,
                                &mut kinds,
                            );
                            out.add_edge(i, t, None, None, None);
                        }
                    }
                }
            }
        }
    }
    Ok(ProductArena { arena: out, kinds })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{ValueFunction, WordMode};
    use crate::rational::int;

    #[test]
    fn nondeterminism_becomes_eve_choice() {
        let a = Automaton::from_edges(
            &["a"],
            &["q"],
            "q",
            ValueFunction::LimSup,
            WordMode::Infinite,
            &[("q", "a", int(1), "q"), ("q", "a", int(2), "q")],
        )
        .unwrap();
        let mut g = Arena::new(vec!["a".into()]);
        let p = g.add_position("p", Player::Adam);
        g.add_edge(p, p, Some(0), None, None);
        let prod = product_game_automaton(&g, &a).unwrap();
        assert_eq!(prod.arena.len(), 2);
        assert_eq!(prod.arena.owners[1], Player::Eve);
        assert_eq!(prod.arena.out[1].len(), 2);
    }

    #[test]
    fn alphabet_must_match() {
        let a = Automaton::from_edges(&["a"], &["q"], "q", ValueFunction::Sup, WordMode::Finite, &[("q", "a", int(1), "q")])
            .unwrap();
        let g = Arena::new(vec!["b".into()]);
        assert!(matches!(product_game_automaton(&g, &a), Err(GameError::AlphabetMismatch(_))));
    }
}
