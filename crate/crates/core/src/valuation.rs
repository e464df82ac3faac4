//! Run values and automaton values on finite and lasso words.

use std::collections::HashMap;

use num::{One, Zero};
use thiserror::Error;

use crate::game::{
    game_value, max_mean_cycle, scc, solve_dsum, solve_mean_payoff_value, Arena, GameError, Player,
};
use crate::model::{
    Automaton, AutomatonClass, Condition, FiniteWord, LassoWord, ModelError, StateId, Transition,
    ValueFunction, Word, WordMode,
};
use crate::rational::{int, pow, Rational};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum WeightSequence {
    Finite(Vec<Rational>),
    Lasso {
        prefix: Vec<Rational>,
        cycle: Vec<Rational>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ValuationError {
    #[error("{vf} is not defined on {kind}")]
    IncompatibleSequence { vf: String, kind: String },
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Game(#[from] GameError),
    #[error("more than {0} runs")]
    BoundExceeded(usize),
    #[error("run enumeration needs a deterministic or nondeterministic automaton")]
    NotDisjunctive,
}

fn incompatible(vf: &ValueFunction, kind: &str) -> ValuationError {
    ValuationError::IncompatibleSequence {
        vf: vf.to_string(),
        kind: kind.to_string(),
    }
}

fn sum(ws: &[Rational]) -> Rational {
    ws.iter().fold(Rational::zero(), |a, b| a + b)
}

fn dsum(lambda: &Rational, ws: &[Rational]) -> Rational {
    let mut acc = Rational::zero();
    for w in ws.iter().rev() {
        acc = w + lambda * acc;
    }
    acc
}

fn mean(ws: &[Rational]) -> Rational {
    sum(ws) / int(ws.len() as i64)
}

pub fn run_value(vf: &ValueFunction, s: &WeightSequence) -> Result<Rational, ValuationError> {
    match s {
        WeightSequence::Finite(ws) => {
            if ws.is_empty() {
                return Err(incompatible(vf, "the empty sequence"));
            }
            match vf {
                ValueFunction::Sum => Ok(sum(ws)),
                ValueFunction::Avg => Ok(mean(ws)),
                ValueFunction::Inf => Ok(ws.iter().min().unwrap().clone()),
                ValueFunction::Sup => Ok(ws.iter().max().unwrap().clone()),
                ValueFunction::DSum(l) => Ok(dsum(l, ws)),
                _ => Err(incompatible(vf, "finite sequences")),
            }
        }
        WeightSequence::Lasso { prefix, cycle } => {
            if cycle.is_empty() {
                return Err(incompatible(vf, "a lasso with an empty cycle"));
            }
            let all = prefix.iter().chain(cycle.iter());
            match vf {
                ValueFunction::Sum | ValueFunction::Avg => Err(incompatible(vf, "lassos")),
                ValueFunction::Inf => Ok(all.min().unwrap().clone()),
                ValueFunction::Sup => Ok(all.max().unwrap().clone()),
                ValueFunction::LimInf => Ok(cycle.iter().min().unwrap().clone()),
                ValueFunction::LimSup => Ok(cycle.iter().max().unwrap().clone()),
                ValueFunction::LimInfAvg | ValueFunction::LimSupAvg => Ok(mean(cycle)),
                ValueFunction::DSum(l) => {
                    let head = dsum(l, prefix);
                    let tail = dsum(l, cycle) / (Rational::one() - pow(l, cycle.len()));
                    Ok(head + pow(l, prefix.len()) * tail)
                }
            }
        }
    }
}

fn check_letters(a: &Automaton, letters: &[usize]) -> Result<(), ValuationError> {
    for &l in letters {
        if l >= a.num_letters() {
            return Err(ModelError::UnknownLetter(l.to_string()).into());
        }
    }
    Ok(())
}

fn check_mode(a: &Automaton, mode: WordMode) -> Result<(), ValuationError> {
    if a.mode != mode {
        return Err(ModelError::ModeMismatch {
            vf: a.value_function.name().to_string(),
            mode: mode.name().to_string(),
        }
        .into());
    }
    Ok(())
}

/// Algorithms for word values. Every method applies to the classes it is
/// listed for and they agree wherever several apply.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    /// Follows the unique run. Deterministic automata only.
    SingleRun,
    /// Best run over the product graph. Deterministic or nondeterministic.
    Disjunctive,
    /// Worst run over the product graph. Deterministic or universal.
    Conjunctive,
    /// Game on the product of formula nodes and word positions. Any class.
    Game,
}

fn default_method(a: &Automaton) -> Method {
    match a.classify() {
        AutomatonClass::Deterministic => Method::SingleRun,
        AutomatonClass::Nondeterministic => Method::Disjunctive,
        AutomatonClass::Universal => Method::Conjunctive,
        AutomatonClass::Alternating => Method::Game,
    }
}

fn method_applies(a: &Automaton, m: Method) -> bool {
    let c = a.classify();
    match m {
        Method::SingleRun => c == AutomatonClass::Deterministic,
        Method::Disjunctive => matches!(c, AutomatonClass::Deterministic | AutomatonClass::Nondeterministic),
        Method::Conjunctive => matches!(c, AutomatonClass::Deterministic | AutomatonClass::Universal),
        Method::Game => true,
    }
}

// ---------------------------------------------------------------- finite words

pub fn automaton_value_finite(a: &Automaton, w: &FiniteWord) -> Result<Rational, ValuationError> {
    automaton_value_finite_with(a, w, default_method(a))
}

pub fn automaton_value_finite_with(
    a: &Automaton,
    w: &FiniteWord,
    method: Method,
) -> Result<Rational, ValuationError> {
    check_mode(a, WordMode::Finite)?;
    if w.0.is_empty() {
        return Err(ModelError::EmptyWord.into());
    }
    check_letters(a, &w.0)?;
    if !method_applies(a, method) {
        return Err(ValuationError::NotDisjunctive);
    }
    match method {
        Method::SingleRun => {
            let mut q = a.initial;
            let mut ws = Vec::new();
            for &l in &w.0 {
                let t = &a.transitions(q, l)[0];
                ws.push(t.weight.clone());
                q = t.target;
            }
            run_value(&a.value_function, &WeightSequence::Finite(ws))
        }
        Method::Disjunctive => Ok(forward_best(a, &w.0, false)),
        Method::Conjunctive => Ok(forward_best(a, &w.0, true)),
        Method::Game => Ok(backward_finite(a, a.initial, &w.0)),
    }
}

/// Forward dynamic programming over (position, state): best (or worst) prefix summary.
fn forward_best(a: &Automaton, w: &[usize], worst: bool) -> Rational {
    let vf = &a.value_function;
    let better = |x: &Rational, y: &Rational| if worst { x < y } else { x > y };
    let mut cur: Vec<Option<Rational>> = vec![None; a.num_states()];
    // Summary before any letter: None stands for "no weight yet" only at the start.
    let mut started = false;
    let mut start_states = vec![false; a.num_states()];
    start_states[a.initial] = true;
    let mut disc = Rational::one();
    for &l in w {
        let mut next: Vec<Option<Rational>> = vec![None; a.num_states()];
        for q in 0..a.num_states() {
            let acc = if started {
                match &cur[q] {
                    Some(v) => Some(v.clone()),
                    None => continue,
                }
            } else if start_states[q] {
                None
            } else {
                continue;
            };
            for (x, t) in a.cond(q, l).leaves() {
                let v = match (vf, &acc) {
                    (ValueFunction::Inf, Some(m)) => m.min(x).clone(),
                    (ValueFunction::Sup, Some(m)) => m.max(x).clone(),
                    (ValueFunction::Inf | ValueFunction::Sup, None) => x.clone(),
                    (ValueFunction::DSum(_), acc) => acc.clone().unwrap_or_else(Rational::zero) + &disc * x,
                    (_, acc) => acc.clone().unwrap_or_else(Rational::zero) + x,
                };
                if next[t].as_ref().is_none_or(|b| better(&v, b)) {
                    next[t] = Some(v);
                }
            }
        }
        if let ValueFunction::DSum(lam) = vf {
            disc *= lam;
        }
        cur = next;
        started = true;
    }
    let mut best: Option<Rational> = None;
    for v in cur.into_iter().flatten() {
        if best.as_ref().is_none_or(|b| better(&v, b)) {
            best = Some(v);
        }
    }
    let best = best.expect("total automata have a run on every word");
    match vf {
        ValueFunction::Avg => best / int(w.len() as i64),
        _ => best,
    }
}

/// Backward induction on the word game from state `q`.
fn backward_finite(a: &Automaton, q: StateId, w: &[usize]) -> Rational {
    let vf = &a.value_function;
    let n = w.len();
    // value[i][q]: value of the suffix game from q at position i; None = no weight yet.
    let mut next: Vec<Option<Rational>> = vec![
        match vf {
            ValueFunction::Inf | ValueFunction::Sup => None,
            _ => Some(Rational::zero()),
        };
        a.num_states()
    ];
    for i in (0..n).rev() {
        let cur: Vec<Option<Rational>> = (0..a.num_states())
            .map(|s| Some(eval_cond(vf, a.cond(s, w[i]), &next)))
            .collect();
        next = cur;
    }
    let v = next[q].clone().unwrap();
    match vf {
        ValueFunction::Avg => v / int(n as i64),
        _ => v,
    }
}

fn eval_cond(vf: &ValueFunction, c: &Condition, next: &[Option<Rational>]) -> Rational {
    match c {
        Condition::Leaf { weight, target } => {
            let rest = &next[*target];
            match (vf, rest) {
                (ValueFunction::Inf, Some(r)) => weight.min(r).clone(),
                (ValueFunction::Sup, Some(r)) => weight.max(r).clone(),
                (ValueFunction::DSum(l), Some(r)) => weight + l * r,
                (_, Some(r)) => weight + r,
                (_, None) => weight.clone(),
            }
        }
        Condition::Or(cs) => cs.iter().map(|c| eval_cond(vf, c, next)).max().unwrap(),
        Condition::And(cs) => cs.iter().map(|c| eval_cond(vf, c, next)).min().unwrap(),
    }
}

// ---------------------------------------------------------------- lasso words

pub fn automaton_value_lasso(a: &Automaton, w: &LassoWord) -> Result<Rational, ValuationError> {
    automaton_value_lasso_with(a, w, default_method(a))
}

pub fn automaton_value(a: &Automaton, w: &Word) -> Result<Rational, ValuationError> {
    match w {
        Word::Finite(f) => automaton_value_finite(a, f),
        Word::Lasso(l) => automaton_value_lasso(a, l),
    }
}

pub fn automaton_value_lasso_with(
    a: &Automaton,
    w: &LassoWord,
    method: Method,
) -> Result<Rational, ValuationError> {
    check_mode(a, WordMode::Infinite)?;
    if w.cycle.is_empty() {
        return Err(ModelError::EmptyCycle.into());
    }
    check_letters(a, &w.prefix)?;
    check_letters(a, &w.cycle)?;
    if !method_applies(a, method) {
        return Err(ValuationError::NotDisjunctive);
    }
    let vf = &a.value_function;
    match method {
        Method::SingleRun => {
            let size = w.size();
            let mut seen: HashMap<(StateId, usize), usize> = HashMap::new();
            let (mut q, mut i) = (a.initial, 0);
            let mut ws = Vec::new();
            while !seen.contains_key(&(q, i)) {
                seen.insert((q, i), ws.len());
                let t = &a.transitions(q, w.letter(i))[0];
                ws.push(t.weight.clone());
                q = t.target;
                i = if i + 1 < size { i + 1 } else { w.prefix.len() };
            }
            let split = seen[&(q, i)];
            let cycle = ws.split_off(split);
            run_value(vf, &WeightSequence::Lasso { prefix: ws, cycle })
        }
        Method::Disjunctive => {
            let (n, edges, start) = lasso_graph(a, w, false);
            best_run_on_graph(vf, n, &edges, start)
        }
        Method::Conjunctive => {
            let (n, edges, start) = lasso_graph(a, w, true);
            Ok(-best_run_on_graph(&dual(vf), n, &edges, start)?)
        }
        Method::Game => {
            let (arena, steps) = lasso_arena(a, w, matches!(vf, ValueFunction::LimInfAvg | ValueFunction::LimSupAvg));
            match vf {
                ValueFunction::LimInfAvg | ValueFunction::LimSupAvg => {
                    let v = solve_mean_payoff_value(&arena)?.value;
                    Ok(v * int(steps as i64))
                }
                _ => Ok(game_value(&arena, vf, WordMode::Infinite, None)?),
            }
        }
    }
}

/// Inf and Sup (and their limit versions) swap under negation.
fn dual(vf: &ValueFunction) -> ValueFunction {
    match vf {
        ValueFunction::Inf => ValueFunction::Sup,
        ValueFunction::Sup => ValueFunction::Inf,
        ValueFunction::LimInf => ValueFunction::LimSup,
        ValueFunction::LimSup => ValueFunction::LimInf,
        ValueFunction::LimInfAvg => ValueFunction::LimSupAvg,
        ValueFunction::LimSupAvg => ValueFunction::LimInfAvg,
        other => other.clone(),
    }
}

/// Nodes `q·size + i`, one edge per leaf. With `negate` all weights flip sign.
fn lasso_graph(a: &Automaton, w: &LassoWord, negate: bool) -> (usize, Vec<(usize, usize, Rational)>, usize) {
    let size = w.size();
    let mut edges = Vec::new();
    for q in 0..a.num_states() {
        for i in 0..size {
            let j = w.next_pos(i);
            for (x, t) in a.cond(q, w.letter(i)).leaves() {
                let x = if negate { -x.clone() } else { x.clone() };
                edges.push((q * size + i, t * size + j, x));
            }
        }
    }
    (a.num_states() * size, edges, a.initial * size)
}

fn reach(n: usize, edges: &[(usize, usize, Rational)], start: usize, keep: impl Fn(&Rational) -> bool) -> Vec<bool> {
    let mut out = vec![Vec::new(); n];
    for (u, v, x) in edges {
        if keep(x) {
            out[*u].push(*v);
        }
    }
    let mut seen = vec![false; n];
    seen[start] = true;
    let mut stack = vec![start];
    while let Some(u) = stack.pop() {
        for &v in &out[u] {
            if !seen[v] {
                seen[v] = true;
                stack.push(v);
            }
        }
    }
    seen
}

/// Is there a cycle inside `nodes` using only edges accepted by `keep`?
fn has_cycle(n: usize, edges: &[(usize, usize, Rational)], nodes: &[bool], keep: impl Fn(&Rational) -> bool) -> bool {
    let arcs: Vec<(usize, usize)> = edges
        .iter()
        .filter(|(u, v, x)| nodes[*u] && nodes[*v] && keep(x))
        .map(|(u, v, _)| (*u, *v))
        .collect();
    let comp = scc(n, &arcs);
    arcs.iter().any(|(u, v)| comp[*u] == comp[*v])
}

/// Supremum over infinite paths from `start` of the value function.
pub(crate) fn best_run_on_graph(
    vf: &ValueFunction,
    n: usize,
    edges: &[(usize, usize, Rational)],
    start: usize,
) -> Result<Rational, ValuationError> {
    let all = reach(n, edges, start, |_| true);
    let mut ws: Vec<Rational> = edges.iter().filter(|e| all[e.0]).map(|e| e.2.clone()).collect();
    ws.sort();
    ws.dedup();
    match vf {
        ValueFunction::Sup => Ok(ws.last().unwrap().clone()),
        ValueFunction::LimSup => {
            let arcs: Vec<(usize, usize)> = edges.iter().filter(|e| all[e.0]).map(|e| (e.0, e.1)).collect();
            let comp = scc(n, &arcs);
            Ok(edges
                .iter()
                .filter(|e| all[e.0] && comp[e.0] == comp[e.1])
                .map(|e| e.2.clone())
                .max()
                .expect("a finite total graph has a reachable cycle"))
        }
        ValueFunction::Inf => {
            for t in ws.iter().rev() {
                let r = reach(n, edges, start, |x| x >= t);
                if has_cycle(n, edges, &r, |x| x >= t) {
                    return Ok(t.clone());
                }
            }
            unreachable!("the minimum weight always admits a run")
        }
        ValueFunction::LimInf => {
            for t in ws.iter().rev() {
                if has_cycle(n, edges, &all, |x| x >= t) {
                    return Ok(t.clone());
                }
            }
            unreachable!("the minimum weight always admits a run")
        }
        ValueFunction::LimInfAvg | ValueFunction::LimSupAvg => {
            Ok(max_mean_cycle(n, edges, start).expect("a finite total graph has a reachable cycle"))
        }
        ValueFunction::DSum(l) => {
            let mut arena = Arena::new(vec![]);
            for i in 0..n {
                arena.add_position(i.to_string(), Player::Eve);
            }
            arena.initial = start;
            for (u, v, x) in edges {
                arena.add_edge(*u, *v, None, Some(x.clone()), None);
            }
            Ok(solve_dsum(&arena, l)?.values[start].clone())
        }
        ValueFunction::Sum | ValueFunction::Avg => Err(incompatible(vf, "lassos")),
    }
}

/// The game G(A, w) for a lasso word. Returns the arena and the number of
/// edges per letter when `pad` equalizes root-to-leaf path lengths.
fn lasso_arena(a: &Automaton, w: &LassoWord, pad: bool) -> (Arena, usize) {
    let size = w.size();
    let steps = (0..a.num_states())
        .flat_map(|q| (0..a.num_letters()).map(move |l| (q, l)))
        .map(|(q, l)| a.cond(q, l).depth())
        .max()
        .unwrap_or(0)
        .max(1);
    let mut arena = Arena::new(a.alphabet.clone());
    for q in 0..a.num_states() {
        for i in 0..size {
            let owner = match a.cond(q, w.letter(i)) {
                Condition::And(_) => Player::Adam,
                _ => Player::Eve,
            };
            arena.add_position(format!("({},{})", a.states[q], i), owner);
        }
    }
    arena.initial = a.initial * size;
    for q in 0..a.num_states() {
        for i in 0..size {
            let base = q * size + i;
            let next = w.next_pos(i);
            let letter = w.letter(i);
            expand(&mut arena, base, a.cond(q, letter), 0, pad, steps, size, next, Some(letter));
        }
    }
    (arena, steps)
}

#[allow(clippy::too_many_arguments)]
fn expand(
    arena: &mut Arena,
    pos: usize,
    c: &Condition,
    depth: usize,
    pad: bool,
    steps: usize,
    size: usize,
    next: usize,
    label: Option<usize>,
) {
    let leaf_edge = |arena: &mut Arena, from: usize, weight: &Rational, target: StateId, leaf_depth: usize| {
        let mut from = from;
        let mut lbl = label;
        if pad {
            for k in 0..steps - leaf_depth.max(1) {
                let d = arena.add_position(format!("{}~{}", arena.names[from], k), Player::Eve);
                arena.add_edge(from, d, lbl.take(), None, None);
                from = d;
            }
        }
        arena.add_edge(from, target * size + next, lbl, Some(weight.clone()), None);
    };
    match c {
        Condition::Leaf { weight, target } => leaf_edge(arena, pos, weight, *target, depth),
        Condition::Or(cs) | Condition::And(cs) => {
            for (k, child) in cs.iter().enumerate() {
                match child {
                    Condition::Leaf { weight, target } => leaf_edge(arena, pos, weight, *target, depth + 1),
                    _ => {
                        let owner = if matches!(child, Condition::And(_)) { Player::Adam } else { Player::Eve };
                        let name = format!("{}.{}", arena.names[pos], k);
                        let p = arena.add_position(name, owner);
                        arena.add_edge(pos, p, label, None, None);
                        expand(arena, p, child, depth + 1, pad, steps, size, next, None);
                    }
                }
            }
        }
    }
}

// ---------------------------------------------------------------- run enumeration

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Run {
    pub transitions: Vec<Transition>,
    /// Index where the repeated part starts, for runs on lassos.
    pub cycle_start: Option<usize>,
}

impl Run {
    pub fn weights(&self) -> WeightSequence {
        let ws: Vec<Rational> = self.transitions.iter().map(|t| t.weight.clone()).collect();
        match self.cycle_start {
            None => WeightSequence::Finite(ws),
            Some(k) => WeightSequence::Lasso {
                prefix: ws[..k].to_vec(),
                cycle: ws[k..].to_vec(),
            },
        }
    }
}

/// All runs on a finite word, or all runs on a lasso that follow a positional
/// choice on the product graph.
pub fn enumerate_runs(a: &Automaton, w: &Word, bound: usize) -> Result<Vec<(Run, Rational)>, ValuationError> {
    if !a.is_disjunctive() {
        return Err(ValuationError::NotDisjunctive);
    }
    let mut out = Vec::new();
    match w {
        Word::Finite(f) => {
            check_mode(a, WordMode::Finite)?;
            if f.0.is_empty() {
                return Err(ModelError::EmptyWord.into());
            }
            check_letters(a, &f.0)?;
            let mut path = Vec::new();
            finite_runs(a, &f.0, a.initial, &mut path, &mut out, bound)?;
        }
        Word::Lasso(l) => {
            check_mode(a, WordMode::Infinite)?;
            check_letters(a, &l.prefix)?;
            check_letters(a, &l.cycle)?;
            let mut path = Vec::new();
            let mut visited = HashMap::new();
            lasso_runs(a, l, a.initial, 0, &mut path, &mut visited, &mut out, bound)?;
        }
    }
    Ok(out)
}

fn finite_runs(
    a: &Automaton,
    w: &[usize],
    q: StateId,
    path: &mut Vec<Transition>,
    out: &mut Vec<(Run, Rational)>,
    bound: usize,
) -> Result<(), ValuationError> {
    if path.len() == w.len() {
        if out.len() >= bound {
            return Err(ValuationError::BoundExceeded(bound));
        }
        let run = Run {
            transitions: path.clone(),
            cycle_start: None,
        };
        let v = run_value(&a.value_function, &run.weights())?;
        out.push((run, v));
        return Ok(());
    }
    for t in a.transitions(q, w[path.len()]) {
        let target = t.target;
        path.push(t);
        finite_runs(a, w, target, path, out, bound)?;
        path.pop();
    }
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn lasso_runs(
    a: &Automaton,
    w: &LassoWord,
    q: StateId,
    i: usize,
    path: &mut Vec<Transition>,
    visited: &mut HashMap<(StateId, usize), usize>,
    out: &mut Vec<(Run, Rational)>,
    bound: usize,
) -> Result<(), ValuationError> {
    if let Some(&k) = visited.get(&(q, i)) {
        if out.len() >= bound {
            return Err(ValuationError::BoundExceeded(bound));
        }
        let run = Run {
            transitions: path.clone(),
            cycle_start: Some(k),
        };
        let v = run_value(&a.value_function, &run.weights())?;
        out.push((run, v));
        return Ok(());
    }
    visited.insert((q, i), path.len());
    for t in a.transitions(q, w.letter(i)) {
        let target = t.target;
        path.push(t);
        lasso_runs(a, w, target, w.next_pos(i), path, visited, out, bound)?;
        path.pop();
    }
    visited.remove(&(q, i));
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::frac;

    #[test]
    fn closed_forms() {
        let f = |v: Vec<i64>| v.into_iter().map(int).collect::<Vec<_>>();
        assert_eq!(run_value(&ValueFunction::Sum, &WeightSequence::Finite(f(vec![1, 2, 3]))).unwrap(), int(6));
        let lasso = WeightSequence::Lasso {
            prefix: f(vec![0, 2]),
            cycle: f(vec![0]),
        };
        assert_eq!(run_value(&ValueFunction::DSum(frac(1, 2)), &lasso).unwrap(), int(1));
        let lasso = WeightSequence::Lasso {
            prefix: vec![],
            cycle: f(vec![1, 0]),
        };
        assert_eq!(run_value(&ValueFunction::LimSupAvg, &lasso).unwrap(), frac(1, 2));
        assert!(run_value(&ValueFunction::Sum, &lasso).is_err());
        assert!(run_value(&ValueFunction::LimInf, &WeightSequence::Finite(f(vec![1]))).is_err());
    }

    #[test]
    fn dsum_lasso_matches_long_prefix() {
        let l = frac(1, 3);
        let prefix = vec![int(1), int(-2)];
        let cycle = vec![int(3), int(0), int(1)];
        let v = run_value(
            &ValueFunction::DSum(l.clone()),
            &WeightSequence::Lasso {
                prefix: prefix.clone(),
                cycle: cycle.clone(),
            },
        )
        .unwrap();
        let mut unrolled = prefix.clone();
        unrolled.extend(cycle.iter().cloned());
        let v2 = run_value(
            &ValueFunction::DSum(l.clone()),
            &WeightSequence::Lasso {
                prefix: unrolled,
                cycle,
            },
        )
        .unwrap();
        assert_eq!(v, v2);
    }
}
