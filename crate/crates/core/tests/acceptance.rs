//! Acceptance criteria 1–10. Each test writes one `PASS n` or `FAIL n` line
//! straight to stdout, so the lines show up without `--nocapture`.

use std::io::Write;

use rand::Rng;

use qauto_core::fixtures::load;
use qauto_core::game::Player;
use qauto_core::gen::{random_arena, random_automaton, random_corpus, rng, Shape};
use qauto_core::model::finite_words;
use qauto_core::pruning::{
    cautious_transitions, extract_dbp_witness, prune, threshold_dbp_witness, Cautiousness, PruningChoice,
    PruningOptions,
};
use qauto_core::rational::{frac, int};
use qauto_core::synthesis::{hd_to_synthesis_instance, local_best_value_synthesis, SynthesisOptions};
use qauto_core::token::{
    bounded_letter_game, buchi_decomposition, composition_test, decide_gfg, decide_gfg_limsup, decide_hd,
    decide_hd_dsum, decide_hd_inf_sup_finite, decide_threshold_hd, g2_semicheck, refute_letter_game,
    solve_gk_limsup, AdamThreshold, LetterGameBound,
};
use qauto_core::valuation::{automaton_value, automaton_value_finite, automaton_value_lasso};
use qauto_core::verdict::{Soundness, Verdict, Witness};
use qauto_core::{Automaton, AutomatonClass, Rational, ValueFunction, Word, WordMode};

type Check = Result<(), String>;

fn report(n: usize, name: &str, r: Check) {
    let line = match &r {
        Ok(()) => format!("PASS {n:>2} {name}\n"),
        Err(e) => format!("FAIL {n:>2} {name}: {e}\n"),
    };
    std::io::stdout().write_all(line.as_bytes()).unwrap();
    if let Err(e) = r {
        panic!("criterion {n} failed: {e}");
    }
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Check {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn pruned(v: &Verdict) -> Vec<String> {
    match &v.witness {
        Some(Witness::Pruning(ts)) => ts.iter().map(|t| format!("{}-{}->{}", t.state, t.letter, t.to)).collect(),
        _ => vec![],
    }
}

fn err<E: std::fmt::Debug>(e: E) -> String {
    format!("{e:?}")
}

fn criterion_1() -> Check {
    let a = load("fig-hdinf").map_err(err)?;
    let v = automaton_value_lasso(&a, &a.lasso("", "a").map_err(err)?).map_err(err)?;
    ensure(v == int(1), || format!("value {v}"))?;
    let hd = decide_hd_dsum(&a).map_err(err)?;
    ensure(hd.is_yes() && hd.soundness == Soundness::Exact, || format!("decide_hd_dsum {hd:?}"))?;
    let f = load("fig-hdinf-finite").map_err(err)?;
    let eve = bounded_letter_game(&f, Player::Eve, Some(&int(1)), LetterGameBound::new(3)).map_err(err)?;
    ensure(eve.is_no(), || format!("finite letter game {eve:?}"))?;
    let d = extract_dbp_witness(&a, PruningOptions::for_mode(a.mode)).map_err(err)?;
    ensure(d.is_yes() && pruned(&d) == ["q0-a->q1"], || format!("pruning {d:?}"))
}

fn criterion_2() -> Check {
    let a = load("fig-thdA").map_err(err)?;
    let hd = decide_hd_inf_sup_finite(&a).map_err(err)?;
    ensure(hd.is_no(), || format!("hd {hd:?}"))?;
    let o = PruningOptions::for_mode(a.mode);
    for (t, to) in [(1, "q1"), (2, "q2")] {
        let thd = decide_threshold_hd(&a, &int(t)).map_err(err)?;
        ensure(thd.is_yes(), || format!("threshold hd at {t}: {thd:?}"))?;
        let p = threshold_dbp_witness(&a, &int(t), o).map_err(err)?;
        let want = vec![format!("q0-a->{to}"), format!("q0-b->{to}")];
        ensure(p.is_yes() && pruned(&p) == want, || format!("threshold pruning at {t}: {p:?}"))?;
    }
    let gfg = decide_gfg(&a).map_err(err)?;
    ensure(gfg.is_yes(), || format!("gfg {gfg:?}"))?;
    let dbp = extract_dbp_witness(&a, o).map_err(err)?;
    ensure(dbp.is_no(), || format!("dbp {dbp:?}"))
}

fn criterion_3() -> Check {
    let b = load("fig-thdB").map_err(err)?;
    let g = decide_gfg_limsup(&b).map_err(err)?;
    ensure(g.is_no() && g.soundness == Soundness::Exact, || format!("G2 {g:?}"))?;
    for t in b.weights() {
        let v = decide_threshold_hd(&b, &t).map_err(err)?;
        ensure(v.is_yes(), || format!("threshold {t}: {v:?}"))?;
    }
    Ok(())
}

fn criterion_4() -> Check {
    let a = load("fig-limavg").map_err(err)?;
    let lassos = [("a", int(1)), ("ab", int(1)), ("aaab", frac(1, 2))];
    for (c, want) in &lassos {
        let v = automaton_value_lasso(&a, &a.lasso("", c).map_err(err)?).map_err(err)?;
        ensure(&v == want, || format!("value on ({c})^ω is {v}"))?;
    }
    // Every pruning, enumerated here independently of the pruning module.
    let slots: Vec<(usize, usize, usize)> = (0..a.num_states())
        .flat_map(|q| (0..a.num_letters()).map(move |l| (q, l)))
        .map(|(q, l)| (q, l, a.transitions(q, l).len()))
        .filter(|s| s.2 > 1)
        .collect();
    let total: usize = slots.iter().map(|s| s.2).product();
    let words = [a.lasso("", "a").map_err(err)?, a.lasso("", "ab").map_err(err)?];
    for mut k in 0..total {
        let mut c = PruningChoice::default();
        for &(q, l, n) in &slots {
            c.leaves.insert((q, l), k % n);
            k /= n;
        }
        let d = prune(&a, &c).map_err(err)?;
        let loses = words.iter().any(|w| {
            automaton_value_lasso(&d, w).ok() != automaton_value_lasso(&a, w).ok()
        });
        ensure(loses, || format!("pruning {c:?} keeps both values"))?;
    }
    let dbp = extract_dbp_witness(&a, PruningOptions::for_mode(a.mode)).map_err(err)?;
    ensure(dbp.is_no(), || format!("dbp {dbp:?}"))?;
    let g2 = g2_semicheck(&a).map_err(err)?;
    ensure(g2.is_unknown(), || format!("semicheck {g2:?}"))?;
    let r = refute_letter_game(&a, Player::Eve, None, AdamThreshold::Verbatim, LetterGameBound::new(8)).map_err(err)?;
    ensure(r.is_none(), || "bounded refutation found at depth 8".into())
}

fn criterion_5() -> Check {
    let a = load("fig-dbpalt").map_err(err)?;
    ensure(a.classify() == AutomatonClass::Alternating, || format!("{:?}", a.classify()))?;
    let v = extract_dbp_witness(&a, PruningOptions::for_mode(a.mode)).map_err(err)?;
    ensure(v.is_yes(), || format!("dbp {v:?}"))?;
    // Rebuild the pruning from its witness and compare values on every word.
    let Some(Witness::Pruning(ts)) = &v.witness else {
        return Err("no pruning witness".into());
    };
    let mut c = PruningChoice::default();
    for t in ts {
        let q = a.state_index(&t.state).unwrap();
        let l = a.letter_index(&t.letter).unwrap();
        let leaf = a.transitions(q, l).iter().find(|x| a.states[x.target] == t.to).unwrap().leaf;
        c.leaves.insert((q, l), leaf);
    }
    let d = prune(&a, &c).map_err(err)?;
    for w in finite_words(2, 6) {
        let (x, y) = (automaton_value_finite(&a, &w).map_err(err)?, automaton_value_finite(&d, &w).map_err(err)?);
        ensure(x == int(0) && y == int(0), || format!("values {x} and {y} on {w:?}"))?;
    }
    let adam = refute_letter_game(&a, Player::Adam, None, AdamThreshold::Verbatim, LetterGameBound::new(3)).map_err(err)?;
    ensure(adam.is_some(), || "Eve does not refute Adam's letter game at depth 3".into())
}

fn oracle_corpus(vf: ValueFunction, mode: WordMode, seed: u64) -> Vec<Automaton> {
    random_corpus(seed, 300, &Shape::small(vf, mode))
        .into_iter()
        .filter(|a| a.classify() == AutomatonClass::Nondeterministic)
        .collect()
}

fn criterion_6() -> Check {
    let cases = [
        (ValueFunction::Sup, WordMode::Finite),
        (ValueFunction::Inf, WordMode::Finite),
        (ValueFunction::Sum, WordMode::Finite),
        (ValueFunction::DSum(frac(1, 2)), WordMode::Infinite),
        (ValueFunction::LimSup, WordMode::Infinite),
    ];
    for (k, (vf, mode)) in cases.into_iter().enumerate() {
        let corpus = oracle_corpus(vf.clone(), mode, 600 + k as u64);
        ensure(corpus.len() >= 250, || format!("{vf}: only {} nondeterministic", corpus.len()))?;
        let depth = if mode == WordMode::Finite { 5 } else { 3 };
        let mut exact = 0;
        for a in &corpus {
            let v = decide_hd(a, LetterGameBound::new(depth)).map_err(err)?;
            if v.soundness == Soundness::Exact {
                exact += 1;
            }
            if v.is_yes() {
                let r = refute_letter_game(a, Player::Eve, None, AdamThreshold::Verbatim, LetterGameBound::new(depth))
                    .map_err(err)?;
                ensure(r.is_none(), || format!("{vf}: HD yes but refuted: {a:?}"))?;
            }
            if matches!(vf, ValueFunction::Sup | ValueFunction::Inf | ValueFunction::LimSup) {
                for t in a.weights() {
                    let v = decide_threshold_hd(a, &t).map_err(err)?;
                    if v.is_yes() {
                        let r = refute_letter_game(
                            a,
                            Player::Eve,
                            Some(&t),
                            AdamThreshold::Verbatim,
                            LetterGameBound::new(depth),
                        )
                        .map_err(err)?;
                        ensure(r.is_none(), || format!("{vf}: threshold {t} HD yes but refuted: {a:?}"))?;
                    }
                }
            }
        }
        ensure(exact == corpus.len(), || format!("{vf}: {exact} of {} verdicts exact", corpus.len()))?;
    }
    Ok(())
}

fn eve_wins_gk(a: &Automaton, k: usize) -> Result<bool, String> {
    let (g, sol) = solve_gk_limsup(a, k).map_err(err)?;
    Ok(sol.eve_wins[g.arena.initial])
}

fn criterion_7() -> Check {
    let corpus = oracle_corpus(ValueFunction::LimSup, WordMode::Infinite, 604);
    for a in &corpus {
        if !eve_wins_gk(a, 2)? {
            continue;
        }
        ensure(eve_wins_gk(a, 3)?, || format!("G2 but not G3: {a:?}"))?;
        for (x, b) in buchi_decomposition(a).map_err(err)?.iter().enumerate() {
            if b.classify() == AutomatonClass::Deterministic {
                continue;
            }
            ensure(eve_wins_gk(b, 2)?, || format!("G2(A) but not G2(A_{}): {a:?}", x + 2))?;
        }
    }
    Ok(())
}

/// Deterministic automata equivalent to the infinite-word figures, built by hand.
fn reference(name: &str) -> Option<Automaton> {
    match name {
        "fig-hdinf" => Automaton::from_edges(
            &["a"],
            &["d0", "d1", "d2"],
            "d0",
            ValueFunction::DSum(frac(1, 2)),
            WordMode::Infinite,
            &[("d0", "a", int(0), "d1"), ("d1", "a", int(2), "d2"), ("d2", "a", int(0), "d2")],
        )
        .ok(),
        "fig-thdB" => Automaton::from_edges(
            &["a", "b"],
            &["d0", "d1", "two", "one"],
            "d0",
            ValueFunction::LimSup,
            WordMode::Infinite,
            &[
                ("d0", "a", int(0), "d1"),
                ("d0", "b", int(0), "d1"),
                ("d1", "a", int(2), "two"),
                ("d1", "b", int(1), "one"),
                ("two", "a", int(2), "two"),
                ("two", "b", int(2), "two"),
                ("one", "a", int(1), "one"),
                ("one", "b", int(1), "one"),
            ],
        )
        .ok(),
        _ => None,
    }
}

fn criterion_8() -> Check {
    let mut r = rng(8);
    let mut checked = 0;
    for name in ["fig-hdinf", "fig-thdA", "fig-thdB", "det-sum", "det-limsup"] {
        let a = load(name).map_err(err)?;
        let yes = decide_hd(&a, LetterGameBound::default_for(a.mode)).map_err(err)?.is_yes()
            || decide_gfg(&a).map_err(err)?.is_yes();
        ensure(yes, || format!("{name} is expected to be HD or GFG"))?;
        let d = reference(name);
        let games: Vec<_> = (0..50)
            .map(|_| {
                let n = r.gen_range(2..7);
                random_arena(&mut r, &a.alphabet, n, a.mode, 3)
            })
            .collect();
        let rep = composition_test(&a, &games, d.as_ref()).map_err(err)?;
        ensure(rep.all_equal(), || format!("{name}: {} of 50 differ", rep.failures()))?;
        checked += rep.trials.len();
    }
    ensure(checked == 250, || format!("{checked} trials"))
}

fn criterion_9() -> Check {
    let shape = Shape::small(ValueFunction::Sup, WordMode::Finite);
    let corpus: Vec<Automaton> = random_corpus(9, 140, &shape)
        .into_iter()
        .filter(|a| a.classify() == AutomatonClass::Nondeterministic)
        .collect();
    ensure(corpus.len() >= 100, || format!("only {} automata", corpus.len()))?;
    let (mut yes, mut no) = (0, 0);
    for a in &corpus {
        let hd = decide_hd(a, LetterGameBound::new(4)).map_err(err)?;
        let io = hd_to_synthesis_instance(a).map_err(err)?;
        let s = local_best_value_synthesis(&io, &SynthesisOptions::for_mode(a.mode)).map_err(err)?;
        ensure(hd.is_yes() == s.is_realizable(), || format!("hd {} vs realizable {}: {a:?}", hd.kind, s.verdict.kind))?;
        ensure(!s.verdict.is_unknown(), || "unknown synthesis verdict".into())?;
        if let Some(t) = &s.transducer {
            yes += 1;
            for w in finite_words(a.num_letters(), 6) {
                let best = automaton_value_finite(a, &w).map_err(err)?;
                let got = automaton_value(&io.automaton, &t.combine(&io, &Word::Finite(w.clone()))).map_err(err)?;
                ensure(got == best, || format!("transducer gets {got}, best is {best} on {w:?}"))?;
            }
        } else {
            no += 1;
        }
    }
    ensure(yes > 0 && no > 0, || format!("degenerate corpus: {yes} realizable, {no} not"))
}

/// Best Sum value over runs from `q` reading `w`, `None` without a run.
fn best_from(a: &Automaton, q: usize, w: &[usize]) -> Option<Rational> {
    let mut v: Vec<Option<Rational>> = vec![None; a.num_states()];
    v[q] = Some(int(0));
    for &l in w {
        let mut next: Vec<Option<Rational>> = vec![None; a.num_states()];
        for (s, x) in v.iter().enumerate() {
            let Some(x) = x else { continue };
            for (wt, t) in a.cond(s, l).leaves() {
                let y = x + wt;
                if next[t].as_ref().is_none_or(|n| &y > n) {
                    next[t] = Some(y);
                }
            }
        }
        v = next;
    }
    v.into_iter().flatten().max()
}

fn criterion_10() -> Check {
    let shape = Shape {
        states: 4,
        letters: 2,
        weights: (-2..=2).map(int).collect(),
        max_branch: 2,
        value_function: ValueFunction::Sum,
        mode: WordMode::Finite,
    };
    let mut r = rng(10);
    let mut tested = 0;
    let mut transitions = 0;
    while tested < 100 {
        let a = random_automaton(&mut r, &shape);
        if a.classify() != AutomatonClass::Nondeterministic {
            continue;
        }
        tested += 1;
        let report = cautious_transitions(&a).map_err(err)?;
        let conts: Vec<Vec<usize>> = std::iter::once(vec![])
            .chain(finite_words(a.num_letters(), 6).into_iter().map(|w| w.0))
            .collect();
        for (t, status) in &report.entries {
            transitions += 1;
            // Non-cautious iff some continuation w (|w| ≤ 6) has a run from
            // the source beating every run that starts with t.
            let beaten = conts.iter().any(|w| {
                let mut full = vec![t.letter];
                full.extend(w);
                let rival = best_from(&a, t.source, &full);
                let mine = best_from(&a, t.target, w).map(|x| x + &t.weight);
                rival > mine
            });
            let agrees = match status {
                Cautiousness::Cautious => !beaten,
                Cautiousness::NonCautious(_) => beaten,
                Cautiousness::Unknown => false,
            };
            ensure(agrees, || format!("{} is {status:?}, brute force beaten={beaten}: {a:?}", a.transition_name(t)))?;
        }
    }
    ensure(transitions > 0, || "no transitions".into())
}

#[test]
fn criterion_01_discounted_figure() {
    report(1, "discounted figure: value, HD, finite refutation, pruning", criterion_1());
}

#[test]
fn criterion_02_threshold_figure_a() {
    report(2, "Sup figure A: not HD, threshold HD at 1 and 2, GFG, not DBP", criterion_2());
}

#[test]
fn criterion_03_threshold_figure_b() {
    report(3, "LimSup figure B: Adam wins G2, threshold HD everywhere", criterion_3());
}

#[test]
fn criterion_04_limavg_figure() {
    report(4, "LimSupAvg figure: values, no equivalent pruning, semicheck unknown", criterion_4());
}

#[test]
fn criterion_05_alternating_figure() {
    report(5, "alternating figure: DBP, Eve refutes Adam's letter game", criterion_5());
}

#[test]
fn criterion_06_oracle_agreement() {
    report(6, "exact deciders never contradict bounded refutations", criterion_6());
}

#[test]
fn criterion_07_token_game_laws() {
    report(7, "G2 implies G3 and G2 of every Buchi slice", criterion_7());
}

#[test]
fn criterion_08_composition() {
    report(8, "value(G x A) = value(G) on HD and GFG fixtures", criterion_8());
}

#[test]
fn criterion_09_synthesis_round_trip() {
    report(9, "HD agrees with local best-value realizability", criterion_9());
}

#[test]
fn criterion_10_cautiousness_oracle() {
    report(10, "cautious transitions match the brute-force definition", criterion_10());
}
