//! Quantitative automata: valuation, history-determinism checks through token
//! games, pruning to deterministic sub-automata, and synthesis.

pub mod fixtures;
pub mod game;
pub mod gen;
pub mod json;
pub mod model;
pub mod rational;
pub mod synthesis;
pub mod pruning;
pub mod token;
pub mod valuation;
pub mod verdict;

pub use model::{
    Automaton, AutomatonClass, BooleanReading, Condition, FiniteWord, LassoWord, LetterId,
    ModelError, StateId, Transition, ValueFunction, Word, WordMode,
};
pub use rational::Rational;
pub use verdict::{Soundness, Verdict, VerdictKind, Witness};
