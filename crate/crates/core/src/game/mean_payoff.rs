//! Mean-payoff values.
//!
//! The value `v` of a position has denominator at most `|V|` once weights are
//! integers, and `v >= p/q` iff Eve wins the energy game with weights
//! `q·w - p` from some finite credit. The exact value is found by a
//! Stern–Brocot descent over these probes. Unweighted edges count as steps of
//! weight 0.

use num::bigint::BigInt;

use super::energy::{integer_weights, solve_energy_int};
use super::{Arena, GameError, PositionalStrategy};
use crate::rational::Rational;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MeanPayoffSolution {
    /// Value of the initial position.
    pub value: Rational,
    /// Eve strategy guaranteeing `value` from every position where it can be guaranteed.
    pub eve_strategy: PositionalStrategy,
}

struct Prober<'a> {
    arena: &'a Arena,
    weights: Vec<i64>,
    all: Vec<bool>,
    probes: usize,
}

impl Prober<'_> {
    /// Does Eve guarantee mean payoff at least `p/q` from the initial position?
    fn at_least(&mut self, p: i64, q: i64) -> Result<bool, GameError> {
        self.probes += 1;
        let ws: Option<Vec<i64>> = self
            .weights
            .iter()
            .map(|&w| w.checked_mul(q).and_then(|x| x.checked_sub(p)))
            .collect();
        let ws = ws.ok_or(GameError::Overflow)?;
        let (credit, _) = solve_energy_int(self.arena, &ws, &self.all)?;
        Ok(credit[self.arena.initial].is_some())
    }

    fn strategy(&self, p: i64, q: i64) -> Result<PositionalStrategy, GameError> {
        let ws: Vec<i64> = self.weights.iter().map(|&w| w * q - p).collect();
        Ok(solve_energy_int(self.arena, &ws, &self.all)?.1)
    }
}

pub fn solve_mean_payoff_value(arena: &Arena) -> Result<MeanPayoffSolution, GameError> {
    if arena.terminal.iter().any(|&t| t) || arena.out.iter().any(Vec::is_empty) {
        return Err(GameError::UnsolvableObjective(
            "mean payoff needs every position to have a move".into(),
        ));
    }
    let (weights, scale) = integer_weights(arena)?;
    let n = arena.len() as i64;
    let lo_w = weights.iter().copied().min().unwrap_or(0);
    let hi_w = weights.iter().copied().max().unwrap_or(0);
    let mut pr = Prober {
        arena,
        all: vec![true; arena.len()],
        weights,
        probes: 0,
    };
    // Integer part: largest k with value >= k.
    let (mut lo, mut hi) = (lo_w, hi_w + 1);
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if pr.at_least(mid, 1)? {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    // Invariant: value in [a/b, c/d), the two fractions adjacent in the tree.
    let (mut a, mut b, mut c, mut d) = (lo, 1i64, lo + 1, 1i64);
    while b + d <= n {
        if pr.at_least(a + c, b + d)? {
            // Move the lower bound right as far as possible: (a + k c)/(b + k d).
            let k = gallop(n, b, d, |k| pr.at_least(a + k * c, b + k * d))?;
            a += k * c;
            b += k * d;
        } else {
            let k = gallop(n, d, b, |k| pr.at_least(c + k * a, d + k * b).map(|x| !x))?;
            c += k * a;
            d += k * b;
        }
    }
    let eve_strategy = pr.strategy(a, b)?;
    let value = Rational::new(BigInt::from(a), BigInt::from(b) * scale);
    Ok(MeanPayoffSolution { value, eve_strategy })
}

/// Largest `k >= 1` with `base + k·step <= n` and `ok(k)`, given `ok(1)`.
fn gallop(
    n: i64,
    base: i64,
    step: i64,
    mut ok: impl FnMut(i64) -> Result<bool, GameError>,
) -> Result<i64, GameError> {
    let kmax = (n - base) / step;
    let mut good = 1;
    let mut bad = None;
    let mut k = 2;
    while k <= kmax {
        if ok(k)? {
            good = k;
            k *= 2;
        } else {
            bad = Some(k);
            break;
        }
    }
    let mut bad = bad.unwrap_or(kmax + 1);
    while bad - good > 1 {
        let mid = good + (bad - good) / 2;
        if ok(mid)? {
            good = mid;
        } else {
            bad = mid;
        }
    }
    Ok(good)
}

/// Maximum mean over cycles reachable from `start` in a weighted digraph;
/// `None` when no cycle is reachable. Karp's algorithm per strongly
/// connected component.
pub fn max_mean_cycle(n: usize, edges: &[(usize, usize, Rational)], start: usize) -> Option<Rational> {
    let mut out = vec![Vec::new(); n];
    for (i, (u, _, _)) in edges.iter().enumerate() {
        out[*u].push(i);
    }
    let mut reach = vec![false; n];
    let mut stack = vec![start];
    reach[start] = true;
    while let Some(u) = stack.pop() {
        for &e in &out[u] {
            let v = edges[e].1;
            if !reach[v] {
                reach[v] = true;
                stack.push(v);
            }
        }
    }
    let comp = tarjan(n, &out, edges);
    let ncomp = comp.iter().copied().max().map_or(0, |c| c + 1);
    let mut best: Option<Rational> = None;
    for c in 0..ncomp {
        let nodes: Vec<usize> = (0..n).filter(|&v| comp[v] == c && reach[v]).collect();
        if nodes.is_empty() {
            continue;
        }
        let inner: Vec<&(usize, usize, Rational)> = edges
            .iter()
            .filter(|(u, v, _)| comp[*u] == c && comp[*v] == c && reach[*u])
            .collect();
        if inner.is_empty() {
            continue;
        }
        let m = karp(&nodes, &inner);
        if best.as_ref().is_none_or(|b| m > *b) {
            best = Some(m);
        }
    }
    best
}

fn karp(nodes: &[usize], edges: &[&(usize, usize, Rational)]) -> Rational {
    let k = nodes.len();
    let idx = |v: usize| nodes.binary_search(&v).unwrap();
    // dist[j][v]: max weight of a walk with exactly j edges from nodes[0].
    let mut dist: Vec<Vec<Option<Rational>>> = vec![vec![None; k]; k + 1];
    dist[0][0] = Some(Rational::from_integer(0.into()));
    for j in 1..=k {
        for (u, v, w) in edges {
            if let Some(du) = dist[j - 1][idx(*u)].clone() {
                let cand = du + w;
                let slot = &mut dist[j][idx(*v)];
                if slot.as_ref().is_none_or(|x| cand > *x) {
                    *slot = Some(cand);
                }
            }
        }
    }
    let mut best: Option<Rational> = None;
    for v in 0..k {
        let Some(dn) = dist[k][v].clone() else { continue };
        let mut worst: Option<Rational> = None;
        for (j, row) in dist.iter().enumerate().take(k) {
            if let Some(dj) = &row[v] {
                let r = (&dn - dj) / Rational::from_integer(((k - j) as i64).into());
                if worst.as_ref().is_none_or(|x| r < *x) {
                    worst = Some(r);
                }
            }
        }
        if let Some(wv) = worst {
            if best.as_ref().is_none_or(|b| wv > *b) {
                best = Some(wv);
            }
        }
    }
    best.expect("a strongly connected component with an edge has a cycle")
}

fn tarjan(n: usize, out: &[Vec<usize>], edges: &[(usize, usize, Rational)]) -> Vec<usize> {
    struct St {
        index: Vec<Option<usize>>,
        low: Vec<usize>,
        on: Vec<bool>,
        stack: Vec<usize>,
        comp: Vec<usize>,
        next: usize,
        ncomp: usize,
    }
    let mut st = St {
        index: vec![None; n],
        low: vec![0; n],
        on: vec![false; n],
        stack: Vec::new(),
        comp: vec![usize::MAX; n],
        next: 0,
        ncomp: 0,
    };
    for root in 0..n {
        if st.index[root].is_some() {
            continue;
        }
        // Iterative DFS: (node, next edge offset).
        let mut call: Vec<(usize, usize)> = vec![(root, 0)];
        st.index[root] = Some(st.next);
        st.low[root] = st.next;
        st.next += 1;
        st.stack.push(root);
        st.on[root] = true;
        while let Some(&mut (v, ref mut i)) = call.last_mut() {
            if *i < out[v].len() {
                let w = edges[out[v][*i]].1;
                *i += 1;
                match st.index[w] {
                    None => {
                        st.index[w] = Some(st.next);
                        st.low[w] = st.next;
                        st.next += 1;
                        st.stack.push(w);
                        st.on[w] = true;
                        call.push((w, 0));
                    }
                    Some(iw) if st.on[w] => st.low[v] = st.low[v].min(iw),
                    _ => {}
                }
            } else {
                call.pop();
                if let Some(&(u, _)) = call.last() {
                    st.low[u] = st.low[u].min(st.low[v]);
                }
                if Some(st.low[v]) == st.index[v] {
                    loop {
                        let w = st.stack.pop().unwrap();
                        st.on[w] = false;
                        st.comp[w] = st.ncomp;
                        if w == v {
                            break;
                        }
                    }
                    st.ncomp += 1;
                }
            }
        }
    }
    st.comp
}

/// Strongly connected components; shared with the pruning checks.
pub(crate) fn scc(n: usize, arcs: &[(usize, usize)]) -> Vec<usize> {
    let edges: Vec<(usize, usize, Rational)> = arcs
        .iter()
        .map(|&(u, v)| (u, v, Rational::from_integer(0.into())))
        .collect();
    let mut out = vec![Vec::new(); n];
    for (i, (u, _)) in arcs.iter().enumerate() {
        out[*u].push(i);
    }
    tarjan(n, &out, &edges)
}
