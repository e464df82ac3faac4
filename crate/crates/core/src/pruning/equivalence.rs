//! Equivalence checks.
//!
//! The workhorse is [`dominance_witness`]: a word on which a disjunctive
//! automaton `A` beats a deterministic automaton `D`, found exactly on the
//! product of the two. When `D` is a pruning of `A`, `D ≤ A` holds run by
//! run, so the absence of such a word is equivalence.

use std::collections::{BTreeSet, HashMap, VecDeque};

use num::{One, Zero};

use super::PruningError;
use crate::game::{scc, solve_dsum, Arena, Player};
use crate::model::{
    finite_words, lasso_words, threshold_boolean_automaton, Automaton, AutomatonClass, FiniteWord, LassoWord,
    LetterId, StateId, ValueFunction, Word, WordMode,
};
use crate::rational::{format_rational, Rational};
use crate::valuation::automaton_value;
use crate::verdict::{Soundness, Verdict, Witness};
use crate::json::word_to_json;

pub const DEFAULT_SAMPLE_LEN: usize = 6;
pub const DEFAULT_SAMPLE_LASSO: usize = 5;

/// Sizes for the sampling fallback: finite words up to `len`, lassos up to
/// `lasso`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SampleBound {
    pub len: usize,
    pub lasso: usize,
}

impl Default for SampleBound {
    fn default() -> Self {
        SampleBound {
            len: DEFAULT_SAMPLE_LEN,
            lasso: DEFAULT_SAMPLE_LASSO,
        }
    }
}

struct PEdge {
    from: usize,
    to: usize,
    letter: LetterId,
    wa: Rational,
    wd: Rational,
}

/// Reachable part of `A × D`, `D` deterministic.
struct Product {
    edges: Vec<PEdge>,
    out: Vec<Vec<usize>>,
    /// BFS tree edge into each node.
    parent: Vec<Option<usize>>,
}

impl Product {
    fn new(a: &Automaton, d: &Automaton) -> Product {
        let mut index: HashMap<(StateId, StateId), usize> = HashMap::new();
        let mut nodes = vec![(a.initial, d.initial)];
        index.insert(nodes[0], 0);
        let mut p = Product {
            edges: Vec::new(),
            out: vec![Vec::new()],
            parent: vec![None],
        };
        let mut i = 0;
        while i < nodes.len() {
            let (q, r) = nodes[i];
            for l in 0..a.num_letters() {
                let td = d.transitions(r, l).swap_remove(0);
                for ta in a.transitions(q, l) {
                    let key = (ta.target, td.target);
                    let to = match index.get(&key) {
                        Some(&to) => to,
                        None => {
                            nodes.push(key);
                            index.insert(key, nodes.len() - 1);
                            p.out.push(Vec::new());
                            p.parent.push(Some(p.edges.len()));
                            nodes.len() - 1
                        }
                    };
                    p.out[i].push(p.edges.len());
                    p.edges.push(PEdge {
                        from: i,
                        to,
                        letter: l,
                        wa: ta.weight.clone(),
                        wd: td.weight.clone(),
                    });
                }
            }
            i += 1;
        }
        p
    }

    fn len(&self) -> usize {
        self.out.len()
    }

    fn letters(&self, path: &[usize]) -> Vec<LetterId> {
        path.iter().map(|&e| self.edges[e].letter).collect()
    }

    fn tree_path(&self, mut v: usize) -> Vec<usize> {
        let mut path = Vec::new();
        while let Some(e) = self.parent[v] {
            path.push(e);
            v = self.edges[e].from;
        }
        path.reverse();
        path
    }

    /// Shortest path from `from` to `to` over `keep` edges.
    fn path_within(&self, keep: &dyn Fn(usize) -> bool, from: usize, to: usize) -> Option<Vec<usize>> {
        let mut via: Vec<Option<usize>> = vec![None; self.len()];
        let mut seen = vec![false; self.len()];
        seen[from] = true;
        let mut queue = VecDeque::from([from]);
        while let Some(v) = queue.pop_front() {
            if v == to {
                let mut path = Vec::new();
                let mut x = to;
                while x != from {
                    let e = via[x].expect("BFS tree");
                    path.push(e);
                    x = self.edges[e].from;
                }
                path.reverse();
                return Some(path);
            }
            for &e in &self.out[v] {
                let t = self.edges[e].to;
                if keep(e) && !seen[t] {
                    seen[t] = true;
                    via[t] = Some(e);
                    queue.push_back(t);
                }
            }
        }
        None
    }

    /// SCC ids of the subgraph of `keep` edges.
    fn components(&self, keep: &dyn Fn(usize) -> bool) -> Vec<usize> {
        let arcs: Vec<(usize, usize)> = (0..self.edges.len())
            .filter(|&e| keep(e))
            .map(|e| (self.edges[e].from, self.edges[e].to))
            .collect();
        scc(self.len(), &arcs)
    }

    /// A `keep` edge lying on a `keep` cycle, as the cycle starting with it.
    fn cycle_through(&self, keep: &dyn Fn(usize) -> bool, comp: &[usize], e: usize) -> Option<Vec<usize>> {
        let edge = &self.edges[e];
        if !keep(e) || comp[edge.from] != comp[edge.to] {
            return None;
        }
        let back = self.path_within(keep, edge.to, edge.from)?;
        Some(std::iter::once(e).chain(back).collect())
    }

    /// From `v`, a `keep` path to a `keep` cycle.
    fn reach_cycle(&self, keep: &dyn Fn(usize) -> bool, comp: &[usize], v: usize) -> Option<(Vec<usize>, Vec<usize>)> {
        let mut order = vec![v];
        let mut seen = vec![false; self.len()];
        seen[v] = true;
        let mut i = 0;
        while i < order.len() {
            let x = order[i];
            for &e in &self.out[x] {
                if let Some(cycle) = self.cycle_through(keep, comp, e) {
                    let path = self.path_within(keep, v, x).expect("x was reached over keep edges");
                    return Some((path, cycle));
                }
                let t = self.edges[e].to;
                if keep(e) && !seen[t] {
                    seen[t] = true;
                    order.push(t);
                }
            }
            i += 1;
        }
        None
    }
}

fn lasso(p: &Product, prefix: &[usize], cycle: &[usize]) -> Word {
    Word::Lasso(LassoWord::new(p.letters(prefix), p.letters(cycle)).expect("cycles are nonempty"))
}

fn finite(p: &Product, path: &[usize]) -> Word {
    Word::Finite(FiniteWord(p.letters(path)))
}

/// Extremal and limit functions: a threshold `x` from `A`'s weights that `A`
/// reaches and `D` does not.
fn extremal_witness(a: &Automaton, p: &Product) -> Option<Word> {
    let vf = &a.value_function;
    let infinite = a.mode == WordMode::Infinite;
    for x in a.weights() {
        // Edges the separating runs may use, and the edge that separates them.
        let sup_like = matches!(vf, ValueFunction::Sup | ValueFunction::LimSup);
        let keep = |e: usize| {
            let ed = &p.edges[e];
            if sup_like {
                ed.wd < x
            } else {
                ed.wa >= x
            }
        };
        let hit = |e: usize| {
            let ed = &p.edges[e];
            keep(e) && if sup_like { ed.wa >= x } else { ed.wd < x }
        };
        let comp = p.components(&keep);
        match vf {
            ValueFunction::Sup | ValueFunction::Inf => {
                // The whole prefix stays inside `keep`.
                let mut seen = vec![false; p.len()];
                seen[0] = true;
                let mut order = vec![0];
                let mut i = 0;
                while i < order.len() {
                    let v = order[i];
                    for &e in &p.out[v] {
                        if hit(e) {
                            let mut path = p.path_within(&keep, 0, v).expect("reached over keep edges");
                            path.push(e);
                            if !infinite {
                                return Some(finite(p, &path));
                            }
                            if let Some((tail, cycle)) = p.reach_cycle(&keep, &comp, p.edges[e].to) {
                                path.extend(tail);
                                return Some(lasso(p, &path, &cycle));
                            }
                        }
                        let t = p.edges[e].to;
                        if keep(e) && !seen[t] {
                            seen[t] = true;
                            order.push(t);
                        }
                    }
                    i += 1;
                }
            }
            _ => {
                for e in 0..p.edges.len() {
                    if !hit(e) {
                        continue;
                    }
                    if let Some(cycle) = p.cycle_through(&keep, &comp, e) {
                        return Some(lasso(p, &p.tree_path(p.edges[e].from), &cycle));
                    }
                }
            }
        }
    }
    None
}

/// Longest-path relaxation on `wa − wd`. Returns a node on a positive cycle
/// if one is reachable, and the predecessor edges.
fn bellman_ford(p: &Product) -> (Vec<Option<Rational>>, Vec<Option<usize>>, Option<usize>) {
    let n = p.len();
    let mut dist: Vec<Option<Rational>> = vec![None; n];
    let mut pred: Vec<Option<usize>> = vec![None; n];
    dist[0] = Some(Rational::zero());
    let mut last = None;
    for _ in 0..n {
        last = None;
        for (e, ed) in p.edges.iter().enumerate() {
            if let Some(d) = &dist[ed.from] {
                let nd = d + &ed.wa - &ed.wd;
                if dist[ed.to].as_ref().is_none_or(|x| &nd > x) {
                    dist[ed.to] = Some(nd);
                    pred[ed.to] = Some(e);
                    last = Some(ed.to);
                }
            }
        }
        if last.is_none() {
            break;
        }
    }
    (dist, pred, last)
}

fn positive_cycle(p: &Product, pred: &[Option<usize>], mut v: usize) -> Vec<usize> {
    for _ in 0..p.len() {
        v = p.edges[pred[v].expect("relaxed")].from;
    }
    let start = v;
    let mut cycle = Vec::new();
    loop {
        let e = pred[v].expect("on the cycle");
        cycle.push(e);
        v = p.edges[e].from;
        if v == start {
            break;
        }
    }
    cycle.reverse();
    cycle
}

fn diff(p: &Product, path: &[usize]) -> Rational {
    path.iter().map(|&e| &p.edges[e].wa - &p.edges[e].wd).sum()
}

fn additive_witness(a: &Automaton, p: &Product) -> Option<Word> {
    let (dist, pred, last) = bellman_ford(p);
    if let Some(v) = last {
        let cycle = positive_cycle(p, &pred, v);
        let prefix = p.tree_path(p.edges[cycle[0]].from);
        if a.mode == WordMode::Infinite {
            return Some(lasso(p, &prefix, &cycle));
        }
        let s = diff(p, &prefix);
        let c = diff(p, &cycle);
        let mut path = prefix;
        let mut total = s;
        loop {
            path.extend(cycle.iter().copied());
            total += &c;
            if total > Rational::zero() {
                return Some(finite(p, &path));
            }
        }
    }
    if a.mode == WordMode::Infinite {
        return None;
    }
    let v = (0..p.len()).find(|&v| dist[v].as_ref().is_some_and(|d| d > &Rational::zero()))?;
    let mut path = Vec::new();
    let mut x = v;
    while let Some(e) = pred[x] {
        path.push(e);
        x = p.edges[e].from;
    }
    path.reverse();
    Some(finite(p, &path))
}

fn discounted_witness(a: &Automaton, p: &Product, lambda: &Rational) -> Result<Option<Word>, PruningError> {
    let n = p.len();
    let finite_mode = a.mode == WordMode::Finite;
    // Infinite: one position per node. Finite: "must move" copies 0..n, "may
    // stop" copies n..2n, and a stop sink.
    let mut g = Arena::new(vec![]);
    let copies = if finite_mode { 2 } else { 1 };
    for c in 0..copies {
        for v in 0..n {
            g.add_position(format!("{c}:{v}"), Player::Eve);
        }
    }
    let mut letter_of = Vec::new();
    for c in 0..copies {
        for ed in &p.edges {
            let to = if finite_mode { n + ed.to } else { ed.to };
            g.add_edge(c * n + ed.from, to, None, Some(&ed.wa - &ed.wd), None);
            letter_of.push(Some(ed.letter));
        }
    }
    if finite_mode {
        let stop = g.add_position("stop", Player::Eve);
        for v in 0..n {
            g.add_edge(n + v, stop, None, None, None);
            letter_of.push(None);
        }
        g.add_edge(stop, stop, None, Some(Rational::zero()), None);
        letter_of.push(None);
    }
    let sol = solve_dsum(&g, lambda)?;
    if sol.values[0] <= Rational::zero() {
        return Ok(None);
    }
    let mut letters = Vec::new();
    let mut pos = 0;
    if finite_mode {
        // Partial sums converge to the positive value, so some prefix is positive.
        let mut total = Rational::zero();
        let mut disc = Rational::one();
        for _ in 0..100_000 {
            let e = sol.eve_strategy[pos].expect("every position moves");
            let Some(l) = letter_of[e] else { break };
            total += &disc * g.edges[e].weight.as_ref().expect("letter edges are weighted");
            disc *= lambda;
            letters.push(l);
            pos = g.edges[e].to;
            if total > Rational::zero() {
                return Ok(Some(Word::Finite(FiniteWord(letters))));
            }
        }
        return Err(PruningError::Internal("no positive prefix along the optimal play".into()));
    }
    let mut first_visit: HashMap<usize, usize> = HashMap::new();
    loop {
        if let Some(&i) = first_visit.get(&pos) {
            let cycle = letters.split_off(i);
            return Ok(Some(Word::Lasso(LassoWord::new(letters, cycle).expect("nonempty"))));
        }
        first_visit.insert(pos, letters.len());
        let e = sol.eve_strategy[pos].expect("every position moves");
        letters.push(letter_of[e].expect("letter edge"));
        pos = g.edges[e].to;
    }
}

fn check_compatible(a: &Automaton, b: &Automaton) -> Result<(), PruningError> {
    if a.alphabet != b.alphabet {
        return Err(PruningError::Incompatible("alphabets differ".into()));
    }
    if a.value_function != b.value_function || a.mode != b.mode {
        return Err(PruningError::Incompatible(format!(
            "{} on {} words against {} on {} words",
            a.value_function,
            a.mode.name(),
            b.value_function,
            b.mode.name()
        )));
    }
    Ok(())
}

/// A word `w` with `A(w) > D(w)`, or `None` if `A ≤ D` everywhere. Exact.
pub fn dominance_witness(a: &Automaton, d: &Automaton) -> Result<Option<Word>, PruningError> {
    check_compatible(a, d)?;
    if !a.is_disjunctive() {
        return Err(PruningError::Incompatible("the dominating side must be disjunctive".into()));
    }
    if d.classify() != AutomatonClass::Deterministic {
        return Err(PruningError::Incompatible("the dominated side must be deterministic".into()));
    }
    let p = Product::new(a, d);
    Ok(match &a.value_function {
        ValueFunction::Inf | ValueFunction::Sup | ValueFunction::LimInf | ValueFunction::LimSup => {
            extremal_witness(a, &p)
        }
        ValueFunction::Sum | ValueFunction::Avg | ValueFunction::LimInfAvg | ValueFunction::LimSupAvg => {
            additive_witness(a, &p)
        }
        ValueFunction::DSum(l) => discounted_witness(a, &p, l)?,
    })
}

/// `d` is deterministic and every transition it can take is one of `a`'s.
pub fn is_pruning_of(d: &Automaton, a: &Automaton) -> bool {
    if d.classify() != AutomatonClass::Deterministic || d.states != a.states || d.initial != a.initial {
        return false;
    }
    let reach = d.reachable_states();
    (0..d.num_states()).filter(|&q| reach[q]).all(|q| {
        (0..d.num_letters()).all(|l| {
            let t = &d.transitions(q, l)[0];
            a.transitions(q, l).iter().any(|u| u.weight == t.weight && u.target == t.target)
        })
    })
}

fn word_verdict(method: &str, soundness: Soundness, a: &Automaton, b: &Automaton, w: Word) -> Result<Verdict, PruningError> {
    let left = automaton_value(a, &w)?;
    let right = automaton_value(b, &w)?;
    Ok(Verdict::no(
        method,
        soundness,
        Some(Witness::Word {
            word: word_to_json(a, &w),
            left: Some(format_rational(&left)),
            right: Some(format_rational(&right)),
        }),
    ))
}

/// First sampled word on which the two automata differ.
pub fn sample_difference(a: &Automaton, b: &Automaton, bound: SampleBound) -> Result<Option<Word>, PruningError> {
    let words: Vec<Word> = match a.mode {
        WordMode::Finite => finite_words(a.num_letters(), bound.len).into_iter().map(Word::Finite).collect(),
        WordMode::Infinite => lasso_words(a.num_letters(), bound.lasso).into_iter().map(Word::Lasso).collect(),
    };
    for w in words {
        if automaton_value(a, &w)? != automaton_value(b, &w)? {
            return Ok(Some(w));
        }
    }
    Ok(None)
}

type Config = BTreeSet<(StateId, bool)>;

fn subset_step(b: &Automaton, s: &Config, l: LetterId, sup: bool) -> Config {
    let mut next = BTreeSet::new();
    for &(q, f) in s {
        for t in b.transitions(q, l) {
            let one = t.weight.is_one();
            next.insert((t.target, if sup { f || one } else { f && one }));
        }
    }
    next
}

/// Finite-word Inf/Sup: the threshold languages at every weight, compared
/// on the joint subset construction.
fn threshold_subset_difference(a: &Automaton, b: &Automaton) -> Result<Option<Word>, PruningError> {
    let sup = a.value_function == ValueFunction::Sup;
    let ts: BTreeSet<Rational> = a.weights().into_iter().chain(b.weights()).collect();
    for t in ts {
        let ta = threshold_boolean_automaton(a, &t)?;
        let tb = threshold_boolean_automaton(b, &t)?;
        let start = (
            Config::from([(ta.initial, !sup)]),
            Config::from([(tb.initial, !sup)]),
        );
        let mut seen: HashMap<(Config, Config), Vec<LetterId>> = HashMap::new();
        seen.insert(start.clone(), vec![]);
        let mut queue = VecDeque::from([start]);
        while let Some((sa, sb)) = queue.pop_front() {
            let word = seen[&(sa.clone(), sb.clone())].clone();
            for l in 0..a.num_letters() {
                let na = subset_step(&ta, &sa, l, sup);
                let nb = subset_step(&tb, &sb, l, sup);
                let mut w = word.clone();
                w.push(l);
                let acc = |s: &Config| s.iter().any(|&(_, f)| f);
                if acc(&na) != acc(&nb) {
                    return Ok(Some(Word::Finite(FiniteWord(w))));
                }
                let key = (na, nb);
                if !seen.contains_key(&key) {
                    seen.insert(key.clone(), w);
                    queue.push_back(key);
                }
            }
        }
    }
    Ok(None)
}

/// Decides `a ≡ b` exactly where a method exists, otherwise samples.
pub fn equivalence_check(a: &Automaton, b: &Automaton, bound: SampleBound) -> Result<Verdict, PruningError> {
    check_compatible(a, b)?;
    if a == b {
        return Ok(Verdict::yes("identical", Soundness::Exact, None));
    }
    let det_a = a.classify() == AutomatonClass::Deterministic;
    let det_b = b.classify() == AutomatonClass::Deterministic;
    let exact = |v: Option<Word>, x: &Automaton, y: &Automaton, method: &str| -> Result<Option<Verdict>, PruningError> {
        match v {
            Some(w) => word_verdict(method, Soundness::Exact, x, y, w).map(Some),
            None => Ok(None),
        }
    };
    // A pruning is below the original run by run; one direction suffices.
    if a.is_disjunctive() && det_b && is_pruning_of(b, a) {
        if let Some(v) = exact(dominance_witness(a, b)?, a, b, "pruning-dominance")? {
            return Ok(v);
        }
        return Ok(Verdict::yes("pruning-dominance", Soundness::Exact, None));
    }
    if b.is_disjunctive() && det_a && is_pruning_of(a, b) {
        if let Some(v) = exact(dominance_witness(b, a)?, a, b, "pruning-dominance")? {
            return Ok(v);
        }
        return Ok(Verdict::yes("pruning-dominance", Soundness::Exact, None));
    }
    if det_a && det_b {
        for (x, y) in [(a, b), (b, a)] {
            if let Some(v) = exact(dominance_witness(x, y)?, a, b, "product-dominance")? {
                return Ok(v);
            }
        }
        return Ok(Verdict::yes("product-dominance", Soundness::Exact, None));
    }
    let disjunctive = a.is_disjunctive() && b.is_disjunctive();
    if disjunctive
        && a.mode == WordMode::Finite
        && matches!(a.value_function, ValueFunction::Inf | ValueFunction::Sup)
    {
        if let Some(v) = exact(threshold_subset_difference(a, b)?, a, b, "threshold-subsets")? {
            return Ok(v);
        }
        return Ok(Verdict::yes("threshold-subsets", Soundness::Exact, None));
    }
    // One deterministic side still settles one direction exactly.
    if disjunctive && (det_a || det_b) {
        let (x, d) = if det_b { (a, b) } else { (b, a) };
        if let Some(v) = exact(dominance_witness(x, d)?, a, b, "product-dominance")? {
            return Ok(v);
        }
    }
    if let Some(w) = sample_difference(a, b, bound)? {
        return word_verdict("sampling", Soundness::Exact, a, b, w);
    }
    Ok(Verdict::unknown(
        "sampling",
        Soundness::Bounded,
        match a.mode {
            WordMode::Finite => format!("no difference on words up to length {}", bound.len),
            WordMode::Infinite => format!("no difference on lassos up to size {}", bound.lasso),
        },
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::load;

    fn det_copy(a: &Automaton, pick: &[(&str, &str, &str)]) -> Automaton {
        let mut d = a.clone();
        for &(q, l, to) in pick {
            let (qi, li) = (a.state_index(q).unwrap(), a.letter_index(l).unwrap());
            let t = a
                .transitions(qi, li)
                .into_iter()
                .find(|t| a.states[t.target] == to)
                .unwrap();
            d.set(qi, li, crate::model::Condition::leaf(t.weight, t.target));
        }
        d
    }

    #[test]
    fn self_equivalence() {
        for name in ["det-sum", "det-limsup", "fig-thdA", "fig-thdB"] {
            let a = load(name).unwrap();
            let v = equivalence_check(&a, &a, SampleBound::default()).unwrap();
            assert!(v.is_yes(), "{name}: {v:?}");
        }
    }

    #[test]
    fn figure_a_against_its_q1_pruning() {
        let a = load("fig-thdA").unwrap();
        let d = det_copy(&a, &[("q0", "a", "q1"), ("q0", "b", "q1")]);
        assert!(is_pruning_of(&d, &a));
        let v = equivalence_check(&a, &d, SampleBound::default()).unwrap();
        let j = v.to_json();
        assert_eq!(j["verdict"], "no");
        assert_eq!(j["witness"]["word"], "aa");
        assert_eq!(j["witness"]["left"], "2");
        assert_eq!(j["witness"]["right"], "1");
    }

    #[test]
    fn limavg_prunings_lose_value() {
        let a = load("fig-limavg").unwrap();
        for to in ["p1", "p2"] {
            let d = det_copy(&a, &[("p0", "a", to)]);
            let w = dominance_witness(&a, &d).unwrap().expect("not equivalent");
            assert!(automaton_value(&a, &w).unwrap() > automaton_value(&d, &w).unwrap());
        }
        let up = det_copy(&a, &[("p0", "a", "p1")]);
        let v = equivalence_check(&a, &up, SampleBound::default()).unwrap();
        assert!(v.is_no());
    }

    #[test]
    fn hdinf_prunings() {
        let a = load("fig-hdinf").unwrap();
        let via = |to: &str| det_copy(&a, &[("q0", "a", to)]);
        assert!(dominance_witness(&a, &via("q1")).unwrap().is_none());
        assert!(dominance_witness(&a, &via("q3")).unwrap().is_none());
        let w = dominance_witness(&a, &via("q0")).unwrap().expect("the self-loop loses");
        assert!(automaton_value(&a, &w).unwrap() > automaton_value(&via("q0"), &w).unwrap());
        // Finite words: every pruning loses somewhere.
        let f = load("fig-hdinf-finite").unwrap();
        for to in ["q0", "q1", "q3"] {
            let d = det_copy(&f, &[("q0", "a", to)]);
            let w = dominance_witness(&f, &d).unwrap().expect("not DBP on finite words");
            assert!(automaton_value(&f, &w).unwrap() > automaton_value(&d, &w).unwrap(), "{to}");
        }
    }

    #[test]
    fn witnesses_are_genuine_for_limits() {
        let b = load("fig-thdB").unwrap();
        for q in 0..b.num_states() {
            for l in 0..b.num_letters() {
                for t in b.transitions(q, l) {
                    let mut d = b.clone();
                    d.set(q, l, crate::model::Condition::leaf(t.weight.clone(), t.target));
                    if d.classify() != AutomatonClass::Deterministic {
                        continue;
                    }
                    if let Some(w) = dominance_witness(&b, &d).unwrap() {
                        assert!(automaton_value(&b, &w).unwrap() > automaton_value(&d, &w).unwrap());
                    }
                }
            }
        }
    }

    #[test]
    fn incompatible_automata() {
        let a = load("fig-thdA").unwrap();
        let b = load("det-sum").unwrap();
        assert!(matches!(
            equivalence_check(&a, &b, SampleBound::default()),
            Err(PruningError::Incompatible(_))
        ));
    }
}
