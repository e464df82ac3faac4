//! One entry point for arenas shipped with their objective.

use std::collections::BTreeMap;

use serde_json::{json, Value};

use super::{
    game_value, solve_dsum_threshold, solve_energy_threshold, solve_mean_payoff_value, solve_parity, solve_safety,
    Arena, GameError, Objective, Player, PositionalStrategy,
};
use crate::json::GameFile;
use crate::model::WordMode;
use crate::rational::{format_rational, Rational};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GameOutcome {
    /// Win/lose objectives: whether Eve wins from the initial position.
    Winner(Player),
    Value(Rational),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GameReport {
    pub objective: &'static str,
    pub outcome: GameOutcome,
    /// Eve's positional choices, by position and edge name.
    pub eve_strategy: BTreeMap<String, String>,
    /// Minimal initial credit for energy objectives, `None` when infinite.
    pub credit: Option<Option<Rational>>,
}

impl GameReport {
    pub fn to_json(&self) -> Value {
        let mut j = json!({
            "objective": self.objective,
            "method": format!("{}-solver", self.objective),
            "soundness": "exact",
        });
        match &self.outcome {
            GameOutcome::Winner(p) => j["winner"] = json!(p.name()),
            GameOutcome::Value(v) => j["value"] = json!(format_rational(v)),
        }
        if !self.eve_strategy.is_empty() {
            j["strategy"] = json!(self.eve_strategy);
        }
        if let Some(c) = &self.credit {
            j["credit"] = match c {
                Some(c) => json!(format_rational(c)),
                None => Value::Null,
            };
        }
        j
    }
}

fn named(arena: &Arena, s: &PositionalStrategy) -> BTreeMap<String, String> {
    s.iter()
        .enumerate()
        .filter_map(|(p, e)| e.map(|e| (arena.names[p].clone(), arena.edge_name(e))))
        .collect()
}

fn winner(eve: bool) -> GameOutcome {
    GameOutcome::Winner(if eve { Player::Eve } else { Player::Adam })
}

/// Solves `g` for its objective, or `objective` when the file carries none.
pub fn solve_game_file(g: &GameFile, objective: Option<&Objective>) -> Result<GameReport, GameError> {
    let objective = objective
        .or(g.objective.as_ref())
        .ok_or_else(|| GameError::UnsolvableObjective("the arena names no objective".into()))?;
    let a = &g.arena;
    let i = a.initial;
    let report = |name, outcome, s: Option<&PositionalStrategy>| GameReport {
        objective: name,
        outcome,
        eve_strategy: s.map(|s| named(a, s)).unwrap_or_default(),
        credit: None,
    };
    Ok(match objective {
        Objective::Safety(bad) => {
            let s = solve_safety(a, bad);
            report("safety", winner(s.eve_wins[i]), Some(&s.eve_strategy))
        }
        Objective::Parity => {
            let s = solve_parity(a)?;
            report("parity", winner(s.eve_wins[i]), Some(&s.eve_strategy))
        }
        Objective::EnergyThreshold { checkpoints } => {
            let s = solve_energy_threshold(a, checkpoints)?;
            let mut r = report("energy", winner(s.eve_wins[i]), Some(&s.eve_strategy));
            r.credit = Some(s.credit[i].map(|c| Rational::new(c.into(), s.scale.clone())));
            r
        }
        Objective::MeanPayoffValue => {
            let s = solve_mean_payoff_value(a)?;
            report("mean-payoff", GameOutcome::Value(s.value), Some(&s.eve_strategy))
        }
        Objective::DiscountedThreshold { lambda, t } => {
            let (wins, s) = solve_dsum_threshold(a, lambda, t)?;
            report("discounted", winner(wins[i]), Some(&s.eve_strategy))
        }
        Objective::FiniteValue(vf) => {
            let v = game_value(a, vf, WordMode::Finite, g.depth)?;
            report("finite-value", GameOutcome::Value(v), None)
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::json::parse_arena;

    #[test]
    fn safety_file() {
        let g = parse_arena(
            r#"{"positions":[{"name":"s","owner":"eve"},{"name":"ok","owner":"adam"},{"name":"bad","owner":"adam"}],
                "initial":"s",
                "edges":[{"from":"s","to":"ok"},{"from":"s","to":"bad"},{"from":"ok","to":"ok"},{"from":"bad","to":"bad"}],
                "objective":{"type":"safety","bad":["bad"]}}"#,
        )
        .unwrap();
        let r = solve_game_file(&g, None).unwrap();
        assert_eq!(r.outcome, GameOutcome::Winner(Player::Eve));
        let j = r.to_json();
        assert_eq!(j["winner"], "eve");
        assert_eq!(j["soundness"], "exact");
        assert!(j["strategy"]["s"].as_str().unwrap().contains("ok"));
    }

    #[test]
    fn energy_credit_is_rescaled() {
        let g = parse_arena(
            r#"{"positions":[{"name":"p","owner":"eve"},{"name":"q","owner":"eve"}],
                "initial":"p",
                "edges":[{"from":"p","to":"q","weight":"-1/2"},{"from":"q","to":"p","weight":"1"}],
                "objective":{"type":"energy","checkpoints":["p","q"]}}"#,
        )
        .unwrap();
        let r = solve_game_file(&g, None).unwrap();
        assert_eq!(r.outcome, GameOutcome::Winner(Player::Adam));
        assert_eq!(r.credit, Some(Some(crate::rational::frac(1, 2))));
    }

    #[test]
    fn missing_objective() {
        let g = parse_arena(r#"{"positions":[{"name":"p","owner":"eve"}],"initial":"p","edges":[{"from":"p","to":"p"}]}"#)
            .unwrap();
        assert!(solve_game_file(&g, None).is_err());
        assert!(solve_game_file(&g, Some(&Objective::Parity)).is_ok());
    }
}
