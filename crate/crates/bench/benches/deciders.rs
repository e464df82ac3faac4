use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use qauto_core::fixtures::load;
use qauto_core::gen::{random_corpus, Shape};
use qauto_core::pruning::{cautious_transitions, extract_dbp_witness, threshold_dbp_witness, PruningOptions};
use qauto_core::rational::int;
use qauto_core::synthesis::{hd_to_synthesis_instance, local_best_value_synthesis, SynthesisOptions};
use qauto_core::token::{decide_gfg_limsup, decide_hd, decide_threshold_hd, LetterGameBound};
use qauto_core::valuation::automaton_value_lasso;
use qauto_core::{Automaton, AutomatonClass, ValueFunction, WordMode};

fn nondeterministic(seed: u64, vf: ValueFunction, mode: WordMode) -> Vec<Automaton> {
    random_corpus(seed, 40, &Shape::small(vf, mode))
        .into_iter()
        .filter(|a| a.classify() == AutomatonClass::Nondeterministic)
        .take(16)
        .collect()
}

fn valuation(c: &mut Criterion) {
    let mut g = c.benchmark_group("value");
    for (name, cycle) in [("fig-limavg", "aaab"), ("fig-hdinf", "a"), ("fig-thdB", "ab")] {
        let a = load(name).unwrap();
        let w = a.lasso("", cycle).unwrap();
        g.bench_function(name, |b| b.iter(|| automaton_value_lasso(black_box(&a), &w).unwrap()));
    }
    g.finish();
}

fn history_determinism(c: &mut Criterion) {
    let mut g = c.benchmark_group("hd");
    for (vf, mode) in [
        (ValueFunction::Sup, WordMode::Finite),
        (ValueFunction::Sum, WordMode::Finite),
        (ValueFunction::DSum(qauto_core::rational::frac(1, 2)), WordMode::Infinite),
        (ValueFunction::LimSup, WordMode::Infinite),
    ] {
        let corpus = nondeterministic(3, vf.clone(), mode);
        let bound = LetterGameBound::default_for(mode);
        g.bench_with_input(BenchmarkId::new("corpus", vf.name()), &corpus, |b, corpus| {
            b.iter(|| corpus.iter().map(|a| decide_hd(a, bound).unwrap().kind).count())
        });
    }
    let b_fig = load("fig-thdB").unwrap();
    g.bench_function("g2-parity/fig-thdB", |b| b.iter(|| decide_gfg_limsup(black_box(&b_fig)).unwrap()));
    let a_fig = load("fig-thdA").unwrap();
    for t in [1, 2] {
        g.bench_with_input(BenchmarkId::new("threshold/fig-thdA", t), &int(t), |b, t| {
            b.iter(|| decide_threshold_hd(&a_fig, t).unwrap())
        });
    }
    g.finish();
}

fn pruning(c: &mut Criterion) {
    let mut g = c.benchmark_group("pruning");
    for name in ["fig-hdinf", "fig-dbpalt", "fig-limavg"] {
        let a = load(name).unwrap();
        let o = PruningOptions::for_mode(a.mode);
        g.bench_function(name, |b| b.iter(|| extract_dbp_witness(black_box(&a), o).unwrap()));
    }
    let a = load("fig-thdA").unwrap();
    let o = PruningOptions::for_mode(a.mode);
    g.bench_function("threshold/fig-thdA", |b| b.iter(|| threshold_dbp_witness(&a, &int(1), o).unwrap()));
    let sums = nondeterministic(10, ValueFunction::Sum, WordMode::Finite);
    g.bench_function("cautious/sum-corpus", |b| {
        b.iter(|| sums.iter().map(|a| cautious_transitions(a).unwrap().entries.len()).sum::<usize>())
    });
    g.finish();
}

fn synthesis(c: &mut Criterion) {
    let mut g = c.benchmark_group("synthesis");
    let corpus: Vec<_> = nondeterministic(9, ValueFunction::Sup, WordMode::Finite)
        .iter()
        .map(|a| hd_to_synthesis_instance(a).unwrap())
        .collect();
    let opts = SynthesisOptions::for_mode(WordMode::Finite);
    g.bench_function("local-best/sup-instances", |b| {
        b.iter(|| {
            corpus
                .iter()
                .filter(|io| local_best_value_synthesis(io, &opts).unwrap().is_realizable())
                .count()
        })
    });
    g.finish();
}

criterion_group!(benches, valuation, history_determinism, pruning, synthesis);
criterion_main!(benches);
