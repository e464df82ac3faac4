//! Seeded random automata and arenas for property tests, benches and the
//! `--seed` corpora of the command line.

use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};

use crate::game::{Arena, Player};
use crate::model::{Automaton, Condition, ValueFunction, WordMode};
use crate::rational::{int, Rational};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Shape {
    pub states: usize,
    pub letters: usize,
    pub weights: Vec<Rational>,
    /// Most leaves per (state, letter).
    pub max_branch: usize,
    pub value_function: ValueFunction,
    pub mode: WordMode,
}

impl Shape {
    /// Up to 4 states, 2 letters, weights 0..=2 and binary branching.
    pub fn small(value_function: ValueFunction, mode: WordMode) -> Self {
        Shape {
            states: 4,
            letters: 2,
            weights: vec![int(0), int(1), int(2)],
            max_branch: 2,
            value_function,
            mode,
        }
    }
}

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

fn letter_names(n: usize) -> Vec<String> {
    (0..n).map(|i| ((b'a' + i as u8) as char).to_string()).collect()
}

/// A random total automaton. At least one slot of the initial state branches
/// when the shape allows it, so the result is rarely deterministic.
pub fn random_automaton(rng: &mut impl Rng, shape: &Shape) -> Automaton {
    let n = rng.gen_range(1..=shape.states.max(1));
    let mut a = Automaton::new(
        letter_names(shape.letters),
        (0..n).map(|i| format!("q{i}")).collect(),
        0,
        shape.value_function.clone(),
        shape.mode,
    );
    let forced = rng.gen_range(0..shape.letters);
    let distinct = shape.weights.iter().collect::<std::collections::BTreeSet<_>>().len();
    for q in 0..n {
        for l in 0..shape.letters {
            let min = if q == 0 && l == forced { 2.min(shape.max_branch) } else { 1 };
            let k = rng.gen_range(min..=shape.max_branch.max(min));
            let mut leaves: Vec<(Rational, usize)> = Vec::new();
            while leaves.len() < k {
                let leaf = (shape.weights.choose(rng).expect("weights").clone(), rng.gen_range(0..n));
                if !leaves.contains(&leaf) {
                    leaves.push(leaf);
                } else if leaves.len() >= n * distinct {
                    break;
                }
            }
            let mut cs: Vec<Condition> = leaves.into_iter().map(|(w, t)| Condition::leaf(w, t)).collect();
            a.set(q, l, if cs.len() == 1 { cs.pop().expect("one leaf") } else { Condition::Or(cs) });
        }
    }
    a
}

pub fn random_corpus(seed: u64, count: usize, shape: &Shape) -> Vec<Automaton> {
    let mut r = rng(seed);
    (0..count).map(|_| random_automaton(&mut r, shape)).collect()
}

/// A random arena over `alphabet` whose every edge reads a letter. Finite
/// arenas are layered DAGs of the given depth ending in terminal positions;
/// infinite ones give every position at least one successor.
pub fn random_arena(rng: &mut impl Rng, alphabet: &[String], positions: usize, mode: WordMode, depth: usize) -> Arena {
    let mut g = Arena::new(alphabet.to_vec());
    let owner = |rng: &mut dyn rand::RngCore| if rng.gen_bool(0.5) { Player::Eve } else { Player::Adam };
    match mode {
        WordMode::Finite => {
            let depth = depth.max(1);
            let width = positions.div_ceil(depth + 1).max(1);
            let mut layers: Vec<Vec<usize>> = Vec::new();
            for d in 0..=depth {
                let w = if d == 0 { 1 } else { rng.gen_range(1..=width) };
                let layer = (0..w)
                    .map(|k| {
                        let p = g.add_position(format!("p{d}_{k}"), owner(rng));
                        g.terminal[p] = d == depth;
                        p
                    })
                    .collect();
                layers.push(layer);
            }
            for d in 0..depth {
                for &p in &layers[d] {
                    let k = rng.gen_range(1..=2);
                    for _ in 0..k {
                        let to = *layers[d + 1].choose(rng).expect("nonempty layer");
                        g.add_edge(p, to, Some(rng.gen_range(0..alphabet.len())), None, None);
                    }
                }
            }
        }
        WordMode::Infinite => {
            let n = positions.max(1);
            for i in 0..n {
                g.add_position(format!("p{i}"), owner(rng));
            }
            for p in 0..n {
                let k = rng.gen_range(1..=2);
                for _ in 0..k {
                    let to = rng.gen_range(0..n);
                    g.add_edge(p, to, Some(rng.gen_range(0..alphabet.len())), None, None);
                }
            }
        }
    }
    g.initial = 0;
    g
}
