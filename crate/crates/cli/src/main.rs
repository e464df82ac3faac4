//! `qauto`: JSON in, JSON out front end for qauto-core.
//!
//! Exit codes: 0 yes or a value, 1 no or unrealizable, 2 error, 3 unknown.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use qauto_core::fixtures;
use qauto_core::game::{solve_game_file, GameOutcome, Player};
use qauto_core::gen::{random_corpus, Shape};
use qauto_core::json::{
    automaton_to_json, parse_arena, parse_automaton, parse_word, value_function_from_json, word_to_json,
    ValueFunctionJson,
};
use qauto_core::pruning::{
    choice_from_witness, extract_dbp_witness, prune, threshold_dbp_witness, PruningOptions,
};
use qauto_core::rational::{format_rational, parse_rational};
use qauto_core::synthesis::{
    global_threshold_synthesis, global_value_synthesis, hd_to_synthesis_instance, local_best_value_synthesis,
    local_threshold_synthesis, IOAutomaton, SynthesisOptions,
};
use qauto_core::token::{
    bounded_letter_game_with, check_threshold_hd, decide_gfg_with, decide_hd, AdamThreshold, LetterGameBound,
    DEFAULT_CAP,
};
use qauto_core::valuation::automaton_value;
use qauto_core::{Automaton, Rational, Verdict, VerdictKind, Witness, WordMode};

#[derive(Parser, Debug)]
#[command(name = "qauto", version, about = "Values, history determinism, pruning and synthesis for quantitative automata")]
struct Cli {
    /// Worker threads for enumerations and fixture runs.
    #[arg(long, global = true, default_value_t = 1)]
    jobs: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Value of a word: a bare finite word, a JSON string, or {"prefix","cycle"}.
    Value {
        automaton: String,
        #[arg(long)]
        word: String,
    },
    /// Decides a property. Threshold properties need --t.
    Check {
        automaton: String,
        #[arg(long)]
        property: Property,
        #[arg(long)]
        t: Option<String>,
        /// Letter-game depth for the bounded fallbacks.
        #[arg(long)]
        depth: Option<usize>,
        /// Largest number of prunings enumerated.
        #[arg(long)]
        max_enum: Option<usize>,
    },
    /// Prints an equivalent deterministic pruning when one is found.
    Determinize {
        automaton: String,
        #[arg(long)]
        depth: Option<usize>,
        #[arg(long)]
        max_enum: Option<usize>,
    },
    /// Synthesizes a transducer for an automaton over letters `input|output`.
    Synthesize {
        spec: String,
        #[arg(long)]
        mode: SynthMode,
        #[arg(long)]
        t: Option<String>,
        /// Skip the good-for-games check of the input automaton.
        #[arg(long)]
        assume_gfg: bool,
        /// Treat `spec` as a plain automaton and synthesize on its
        /// transitions-as-outputs instance.
        #[arg(long)]
        hd_instance: bool,
        #[arg(long)]
        depth: Option<usize>,
        #[arg(long)]
        max_enum: Option<usize>,
    },
    /// Solves an arena file for the objective it carries.
    SolveGame { arena: String },
    /// Bounded letter game: searches a refutation of one side's game.
    Oracle {
        automaton: String,
        #[arg(long)]
        side: Side,
        #[arg(long)]
        t: Option<String>,
        #[arg(long)]
        depth: Option<usize>,
        /// Reading of Adam's threshold condition.
        #[arg(long, value_enum, default_value_t = Reading::Verbatim)]
        reading: Reading,
    },
    /// Lists, writes or verifies the bundled figure automata.
    Fixtures {
        /// Directory to write the JSON files and manifest into.
        #[arg(long)]
        write: Option<PathBuf>,
        /// Runs every manifest expectation.
        #[arg(long)]
        verify: bool,
    },
    /// Seeded random automata.
    Corpus {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 10)]
        count: usize,
        #[arg(long, default_value = "Sum")]
        value_function: String,
        #[arg(long)]
        lambda: Option<String>,
        #[arg(long, value_enum, default_value_t = ModeArg::Finite)]
        mode: ModeArg,
        #[arg(long, default_value_t = 4)]
        states: usize,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Property {
    Hd,
    Gfg,
    Dbp,
    ThresholdHd,
    ThresholdDbp,
}

impl Property {
    fn thresholded(self) -> bool {
        matches!(self, Property::ThresholdHd | Property::ThresholdDbp)
    }

    fn name(self) -> String {
        self.to_possible_value().expect("no skipped variants").get_name().to_string()
    }

    fn parse(s: &str) -> Option<Property> {
        <Property as ValueEnum>::from_str(s, false).ok()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum SynthMode {
    GlobalThreshold,
    GlobalValue,
    LocalBest,
    LocalThreshold,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Side {
    Eve,
    Adam,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Reading {
    Verbatim,
    Dual,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    Finite,
    Infinite,
}

/// A failed command; printed as `{"error": …}` with exit code 2.
#[derive(Debug)]
struct Failure(String);

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure(e.to_string())
    }
}

type Outcome = Result<(Value, u8), Failure>;

fn exit_code(kind: VerdictKind) -> u8 {
    match kind {
        VerdictKind::Yes => 0,
        VerdictKind::No => 1,
        VerdictKind::Unknown => 3,
    }
}

fn verdict_out(v: &Verdict) -> (Value, u8) {
    (v.to_json(), exit_code(v.kind))
}

/// Reads an automaton from a path, or from the bundled corpus as `fixture:NAME`.
fn read_text(source: &str) -> Result<String, Failure> {
    if let Some(name) = source.strip_prefix("fixture:") {
        return fixtures::text(name)
            .map(str::to_string)
            .ok_or_else(|| Failure(format!("{source}: no such fixture")));
    }
    fs::read_to_string(source).map_err(|e| Failure(format!("{source}: {e}")))
}

fn load_automaton(source: &str) -> Result<Automaton, Failure> {
    parse_automaton(&read_text(source)?).map_err(|e| Failure(format!("{source}: {e}")))
}

fn threshold(t: Option<&str>, needed: bool, what: &str) -> Result<Option<Rational>, Failure> {
    match (t, needed) {
        (Some(t), true) => Ok(Some(parse_rational(t).map_err(|e| Failure(format!("--t: {e}")))?)),
        (None, true) => Err(Failure(format!("{what} needs --t"))),
        (Some(_), false) => Err(Failure(format!("{what} takes no --t"))),
        (None, false) => Ok(None),
    }
}

/// Depth from the flag or the mode default, capped by `QAUTO_MAX_DEPTH`.
fn bound(mode: WordMode, depth: Option<usize>) -> Result<LetterGameBound, Failure> {
    let cap = match std::env::var("QAUTO_MAX_DEPTH") {
        Ok(s) => s
            .trim()
            .parse::<usize>()
            .map_err(|_| Failure(format!("QAUTO_MAX_DEPTH: `{s}` is not a depth")))?,
        Err(_) => DEFAULT_CAP,
    };
    let depth = depth.unwrap_or_else(|| LetterGameBound::default_for(mode).depth.min(cap));
    if depth > cap {
        return Err(Failure(format!("depth {depth} exceeds QAUTO_MAX_DEPTH={cap}")));
    }
    Ok(LetterGameBound::new(depth).with_cap(cap))
}

fn pruning_options(mode: WordMode, depth: Option<usize>, max_enum: Option<usize>, jobs: usize) -> Result<PruningOptions, Failure> {
    let mut o = PruningOptions::for_mode(mode);
    o.bound = bound(mode, depth)?;
    o.jobs = jobs.max(1);
    if let Some(m) = max_enum {
        o.cap = m;
    }
    Ok(o)
}

fn check(a: &Automaton, property: Property, t: Option<&Rational>, opts: PruningOptions) -> Result<Verdict, Failure> {
    Ok(match (property, t) {
        (Property::Hd, _) => decide_hd(a, opts.bound)?,
        (Property::Gfg, _) => decide_gfg_with(a, opts.bound, opts.jobs)?,
        (Property::Dbp, _) => extract_dbp_witness(a, opts)?,
        (Property::ThresholdHd, Some(t)) => check_threshold_hd(a, t, opts.bound)?,
        (Property::ThresholdDbp, Some(t)) => threshold_dbp_witness(a, t, opts)?,
        (_, None) => return Err(Failure(format!("property {} needs --t", property.name()))),
    })
}

fn value_cmd(source: &str, word: &str) -> Outcome {
    let a = load_automaton(source)?;
    let w = parse_word(&a, word).map_err(|e| Failure(format!("--word: {e}")))?;
    let v = automaton_value(&a, &w)?;
    let out = json!({
        "value": format_rational(&v),
        "word": word_to_json(&a, &w),
        "method": "valuation",
        "soundness": "exact",
    });
    Ok((out, 0))
}

fn determinize(a: &Automaton, opts: PruningOptions) -> Outcome {
    let v = extract_dbp_witness(a, opts)?;
    let (mut out, code) = verdict_out(&v);
    if v.is_yes() {
        let kept = match &v.witness {
            Some(Witness::Pruning(k)) => k.clone(),
            _ => vec![],
        };
        let d = prune(a, &choice_from_witness(a, &kept)?)?;
        out["automaton"] = serde_json::to_value(automaton_to_json(&d))?;
    }
    Ok((out, code))
}

struct SynthArgs<'a> {
    mode: SynthMode,
    t: Option<&'a str>,
    assume_gfg: bool,
    hd_instance: bool,
    depth: Option<usize>,
    max_enum: Option<usize>,
}

fn synthesize(source: &str, s: SynthArgs, jobs: usize) -> Outcome {
    let a = load_automaton(source)?;
    let io = if s.hd_instance { hd_to_synthesis_instance(&a)? } else { IOAutomaton::new(a)? };
    let mode = io.automaton.mode;
    let thresholded = matches!(s.mode, SynthMode::GlobalThreshold | SynthMode::LocalThreshold);
    let name = s.mode.to_possible_value().expect("no skipped variants").get_name().to_string();
    let t = threshold(s.t, thresholded, &format!("{name} synthesis"))?;
    let mut opts = SynthesisOptions::for_mode(mode);
    opts.assume_gfg = s.assume_gfg;
    opts.bound = bound(mode, s.depth)?;
    opts.pruning = pruning_options(mode, s.depth, s.max_enum, jobs)?;
    let r = match (s.mode, &t) {
        (SynthMode::GlobalThreshold, Some(t)) => global_threshold_synthesis(&io, t, &opts)?,
        (SynthMode::GlobalValue, _) => global_value_synthesis(&io, &opts)?,
        (SynthMode::LocalBest, _) => local_best_value_synthesis(&io, &opts)?,
        (SynthMode::LocalThreshold, Some(t)) => local_threshold_synthesis(&io, t, &opts)?,
        _ => unreachable!("threshold presence checked above"),
    };
    Ok((r.to_json(), exit_code(r.verdict.kind)))
}

fn solve_game(source: &str) -> Outcome {
    let g = parse_arena(&read_text(source)?).map_err(|e| Failure(format!("{source}: {e}")))?;
    let r = solve_game_file(&g, None)?;
    let code = match r.outcome {
        GameOutcome::Winner(Player::Adam) => 1,
        _ => 0,
    };
    Ok((r.to_json(), code))
}

fn oracle(source: &str, side: Side, t: Option<&str>, depth: Option<usize>, reading: Reading) -> Outcome {
    let a = load_automaton(source)?;
    let t = t.map(parse_rational).transpose().map_err(|e| Failure(format!("--t: {e}")))?;
    let owner = match side {
        Side::Eve => Player::Eve,
        Side::Adam => Player::Adam,
    };
    let reading = match reading {
        Reading::Verbatim => AdamThreshold::Verbatim,
        Reading::Dual => AdamThreshold::Dual,
    };
    let v = bounded_letter_game_with(&a, owner, t.as_ref(), reading, bound(a.mode, depth)?)?;
    Ok(verdict_out(&v))
}

/// Every manifest entry as `(file, kind, detail)` checks.
fn manifest_entries() -> Result<Vec<(String, Value)>, Failure> {
    let m: Value = serde_json::from_str(fixtures::MANIFEST)?;
    let mut out = Vec::new();
    for f in m["fixtures"].as_array().into_iter().flatten() {
        let file = f["file"].as_str().unwrap_or_default().to_string();
        for v in f["values"].as_array().into_iter().flatten() {
            out.push((file.clone(), json!({"value": v})));
        }
        for c in f["checks"].as_array().into_iter().flatten() {
            out.push((file.clone(), json!({"check": c})));
        }
    }
    Ok(out)
}

fn verify_entry(file: &str, entry: &Value, jobs: usize) -> Value {
    let run = || -> Result<(String, String), Failure> {
        let a = fixtures::load(file)?;
        if let Some(v) = entry.get("value") {
            let w = parse_word(&a, &v["word"].to_string())?;
            let got = format_rational(&automaton_value(&a, &w)?);
            return Ok((v["value"].as_str().unwrap_or_default().to_string(), got));
        }
        let c = &entry["check"];
        let property = c["property"]
            .as_str()
            .and_then(Property::parse)
            .ok_or_else(|| Failure(format!("{file}: bad property {}", c["property"])))?;
        let t = c["t"].as_str().map(parse_rational).transpose()?;
        let v = check(&a, property, t.as_ref(), pruning_options(a.mode, None, None, jobs)?)?;
        Ok((c["expect"].as_str().unwrap_or_default().to_string(), v.kind.to_string()))
    };
    let mut out = json!({"file": file});
    for (k, v) in entry.as_object().into_iter().flatten() {
        out[k] = v.clone();
    }
    match run() {
        Ok((expect, got)) => {
            out["ok"] = json!(expect == got);
            out["got"] = json!(got);
        }
        Err(e) => {
            out["ok"] = json!(false);
            out["error"] = json!(e.0);
        }
    }
    out
}

fn fixtures_cmd(write: Option<&Path>, verify: bool, jobs: usize) -> Outcome {
    let names: Vec<&str> = fixtures::FILES.iter().map(|(f, _)| *f).collect();
    if let Some(dir) = write {
        fs::create_dir_all(dir).map_err(|e| Failure(format!("{}: {e}", dir.display())))?;
        let mut written = Vec::new();
        for (f, text) in fixtures::FILES.iter().chain([&("manifest.json", fixtures::MANIFEST)]) {
            let p = dir.join(f);
            fs::write(&p, text).map_err(|e| Failure(format!("{}: {e}", p.display())))?;
            written.push(p.display().to_string());
        }
        return Ok((json!({"written": written, "method": "fixtures", "soundness": "exact"}), 0));
    }
    if !verify {
        let manifest: Value = serde_json::from_str(fixtures::MANIFEST)?;
        return Ok((
            json!({"fixtures": names, "manifest": manifest, "method": "fixtures", "soundness": "exact"}),
            0,
        ));
    }
    let entries = manifest_entries()?;
    let jobs = jobs.clamp(1, entries.len().max(1));
    // Entries are dealt out round-robin; results go back in manifest order.
    let mut results: Vec<Value> = vec![Value::Null; entries.len()];
    std::thread::scope(|s| {
        let handles: Vec<_> = (0..jobs)
            .map(|k| {
                let entries = &entries;
                s.spawn(move || {
                    (k..entries.len())
                        .step_by(jobs)
                        .map(|i| (i, verify_entry(&entries[i].0, &entries[i].1, 1)))
                        .collect::<Vec<_>>()
                })
            })
            .collect();
        for h in handles {
            for (i, r) in h.join().expect("verifier thread panicked") {
                results[i] = r;
            }
        }
    });
    let failed = results.iter().filter(|r| r["ok"] != json!(true)).count();
    let kind = if failed == 0 { VerdictKind::Yes } else { VerdictKind::No };
    let out = json!({
        "verdict": kind.to_string(),
        "method": "manifest",
        "soundness": "exact",
        "failed": failed,
        "results": results,
    });
    Ok((out, exit_code(kind)))
}

fn corpus(seed: u64, count: usize, vf: &str, lambda: Option<String>, mode: ModeArg, states: usize) -> Outcome {
    let value_function = value_function_from_json(&ValueFunctionJson {
        kind: vf.to_string(),
        lambda,
    })?;
    let mode = match mode {
        ModeArg::Finite => WordMode::Finite,
        ModeArg::Infinite => WordMode::Infinite,
    };
    let mut shape = Shape::small(value_function, mode);
    shape.states = states.max(1);
    let automata = random_corpus(seed, count, &shape)
        .iter()
        .map(|a| serde_json::to_value(automaton_to_json(a)))
        .collect::<Result<Vec<_>, _>>()?;
    Ok((
        json!({"seed": seed, "automata": automata, "method": "random-corpus", "soundness": "exact"}),
        0,
    ))
}

fn run(cli: Cli) -> Outcome {
    let jobs = cli.jobs.max(1);
    match cli.command {
        Command::Value { automaton, word } => value_cmd(&automaton, &word),
        Command::Check { automaton, property, t, depth, max_enum } => {
            let t = threshold(t.as_deref(), property.thresholded(), &format!("property {}", property.name()))?;
            let a = load_automaton(&automaton)?;
            let v = check(&a, property, t.as_ref(), pruning_options(a.mode, depth, max_enum, jobs)?)?;
            Ok(verdict_out(&v))
        }
        Command::Determinize { automaton, depth, max_enum } => {
            let a = load_automaton(&automaton)?;
            determinize(&a, pruning_options(a.mode, depth, max_enum, jobs)?)
        }
        Command::Synthesize { spec, mode, t, assume_gfg, hd_instance, depth, max_enum } => synthesize(
            &spec,
            SynthArgs {
                mode,
                t: t.as_deref(),
                assume_gfg,
                hd_instance,
                depth,
                max_enum,
            },
            jobs,
        ),
        Command::SolveGame { arena } => solve_game(&arena),
        Command::Oracle { automaton, side, t, depth, reading } => oracle(&automaton, side, t.as_deref(), depth, reading),
        Command::Fixtures { write, verify } => fixtures_cmd(write.as_deref(), verify, jobs),
        Command::Corpus { seed, count, value_function, lambda, mode, states } => {
            corpus(seed, count, &value_function, lambda, mode, states)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) if !e.use_stderr() => {
            // --help and --version
            print!("{e}");
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            println!("{}", json!({"error": e.to_string().trim_end()}));
            return ExitCode::from(2);
        }
    };
    match run(cli) {
        Ok((out, code)) => {
            println!("{out}");
            ExitCode::from(code)
        }
        Err(Failure(msg)) => {
            println!("{}", json!({"error": msg}));
            ExitCode::from(2)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn threshold_presence() {
        assert!(threshold(None, true, "x").is_err());
        assert!(threshold(Some("1"), false, "x").is_err());
        assert_eq!(threshold(Some("1/2"), true, "x").unwrap(), Some(qauto_core::rational::frac(1, 2)));
        assert_eq!(threshold(None, false, "x").unwrap(), None);
    }

    #[test]
    fn property_names() {
        assert_eq!(Property::parse("threshold-dbp"), Some(Property::ThresholdDbp));
        assert_eq!(Property::parse("hd"), Some(Property::Hd));
        assert_eq!(Property::parse("det"), None);
    }

    #[test]
    fn verify_reports_mismatches() {
        let ok = verify_entry("det-sum.json", &json!({"value": {"word": "ab", "value": "3"}}), 1);
        assert_eq!(ok["ok"], true);
        let bad = verify_entry("det-sum.json", &json!({"value": {"word": "ab", "value": "4"}}), 1);
        assert_eq!(bad["ok"], false);
        assert_eq!(bad["got"], "3");
    }
}
