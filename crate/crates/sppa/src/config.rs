//! JSON configuration: scenario files and experiment/sweep descriptions.
//!
//! Scenario file:
//!
//! ```json
//! {
//!   "space": {"model": "euclidean", "dim": 1},
//!   "scenarios": [
//!     {"p": 0.5, "alpha": 1.0,
//!      "anchor": {"space": {"model": "euclidean", "dim": 1}, "coords": [0.0]}}
//!   ]
//! }
//! ```
//!
//! Experiment config (`schema: 1`): scenario file reference, schedule kind,
//! `N` steps, `R` replications, seed, start point, ε grid, and the output
//! path. Relative scenario paths resolve against the config file's directory.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::fields::QuadraticField;
use crate::geometry::{Point, Space};
use crate::schedule::Schedule;
use crate::stochastic::{Scenario, ScenarioDistribution};
use crate::{Error, Result};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Deserialize)]
struct ScenarioFile {
    space: Space,
    scenarios: Vec<ScenarioEntry>,
}

#[derive(Deserialize)]
struct ScenarioEntry {
    p: f64,
    alpha: f64,
    anchor: Point,
}

/// Parses a scenario config from JSON text.
pub fn parse_scenarios(json: &str) -> Result<ScenarioDistribution> {
    let file: ScenarioFile =
        serde_json::from_str(json).map_err(|e| Error::Config(format!("bad scenario file: {e}")))?;
    file.space.validate()?;
    let scenarios = file
        .scenarios
        .into_iter()
        .enumerate()
        .map(|(i, e)| {
            if e.anchor.space() != file.space {
                return Err(Error::Config(format!(
                    "scenario {i}: anchor space {} does not match the file's space {}",
                    e.anchor.space(),
                    file.space
                )));
            }
            Ok(Scenario {
                p: e.p,
                field: QuadraticField::new(e.alpha, e.anchor)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    ScenarioDistribution::new(scenarios)
}

/// Loads a scenario config from disk.
pub fn load_scenarios(path: &Path) -> Result<ScenarioDistribution> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Config(format!("cannot read scenario file {}: {e}", path.display())))?;
    parse_scenarios(&text)
}

/// Schedule selection in configs; the fast schedule's `ᾱ` is resolved from
/// the scenario distribution, never written by hand.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScheduleKind {
    Harmonic,
    FastHarmonic,
}

impl ScheduleKind {
    pub fn resolve(self, dist: &ScenarioDistribution) -> Schedule {
        match self {
            ScheduleKind::Harmonic => Schedule::Harmonic,
            ScheduleKind::FastHarmonic => Schedule::FastHarmonic {
                alpha_bar: dist.mean_modulus(),
            },
        }
    }
}

/// One experiment: which scenarios, which schedule, how long, how many
/// replications, where the CSV goes.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub schema: u32,
    pub scenario: PathBuf,
    pub schedule: ScheduleKind,
    #[serde(rename = "N")]
    pub n_steps: u64,
    #[serde(rename = "R")]
    pub replications: u64,
    pub seed: u64,
    pub x0: Point,
    pub eps_grid: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
}

impl ExperimentConfig {
    /// Parses and validates, resolving the scenario path against the config
    /// file's directory and loading the distribution.
    pub fn load(path: &Path) -> Result<(ExperimentConfig, ScenarioDistribution)> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read config {}: {e}", path.display())))?;
        let mut cfg: ExperimentConfig = serde_json::from_str(&text)
            .map_err(|e| Error::Config(format!("bad experiment config: {e}")))?;
        cfg.scenario = resolve_relative(path, &cfg.scenario);
        let dist = cfg.validate()?;
        Ok((cfg, dist))
    }

    pub fn validate(&self) -> Result<ScenarioDistribution> {
        if self.schema != SCHEMA_VERSION {
            return Err(Error::Config(format!(
                "unsupported schema {}, expected {SCHEMA_VERSION}",
                self.schema
            )));
        }
        if self.replications < 1 {
            return Err(Error::Config("R must be at least 1".into()));
        }
        if self.eps_grid.iter().any(|&e| e.is_nan() || e <= 0.0) {
            return Err(Error::Config("eps grid entries must be positive".into()));
        }
        let dist = load_scenarios(&self.scenario)?;
        if self.x0.space() != dist.space() {
            return Err(Error::Config(format!(
                "x0 lives in {}, scenarios in {}",
                self.x0.space(),
                dist.space()
            )));
        }
        Ok(dist)
    }
}

/// A sweep: the cross product of schedules and seeds over one scenario set.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SweepConfig {
    pub schema: u32,
    pub scenario: PathBuf,
    #[serde(rename = "N")]
    pub n_steps: u64,
    #[serde(rename = "R")]
    pub replications: u64,
    pub x0: Point,
    pub eps_grid: Vec<f64>,
    pub schedules: Vec<ScheduleKind>,
    pub seeds: Vec<u64>,
}

impl SweepConfig {
    pub fn load(path: &Path) -> Result<(SweepConfig, ScenarioDistribution)> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read config {}: {e}", path.display())))?;
        let mut cfg: SweepConfig = serde_json::from_str(&text)
            .map_err(|e| Error::Config(format!("bad sweep config: {e}")))?;
        cfg.scenario = resolve_relative(path, &cfg.scenario);
        if cfg.schema != SCHEMA_VERSION {
            return Err(Error::Config(format!(
                "unsupported schema {}, expected {SCHEMA_VERSION}",
                cfg.schema
            )));
        }
        if cfg.schedules.is_empty() || cfg.seeds.is_empty() {
            return Err(Error::Config("sweep needs schedules and seeds".into()));
        }
        if cfg.replications < 1 {
            return Err(Error::Config("R must be at least 1".into()));
        }
        let dist = load_scenarios(&cfg.scenario)?;
        if cfg.x0.space() != dist.space() {
            return Err(Error::Config(format!(
                "x0 lives in {}, scenarios in {}",
                cfg.x0.space(),
                dist.space()
            )));
        }
        Ok((cfg, dist))
    }
}

fn resolve_relative(config_path: &Path, target: &Path) -> PathBuf {
    if target.is_absolute() {
        target.to_path_buf()
    } else {
        config_path
            .parent()
            .unwrap_or_else(|| Path::new("."))
            .join(target)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const SCENARIO_JSON: &str = r#"{
        "space": {"model": "euclidean", "dim": 1},
        "scenarios": [
            {"p": 0.5, "alpha": 1.0,
             "anchor": {"space": {"model": "euclidean", "dim": 1}, "coords": [0.0]}},
            {"p": 0.5, "alpha": 1.0,
             "anchor": {"space": {"model": "euclidean", "dim": 1}, "coords": [2.0]}}
        ]
    }"#;

    #[test]
    fn parses_benchmark_scenario() {
        let dist = parse_scenarios(SCENARIO_JSON).unwrap();
        assert_eq!(dist.len(), 2);
        assert_eq!(dist.mean_modulus(), 1.0);
        assert_eq!(dist.zero_of_mean().unwrap().coords()[0], 1.0);
    }

    #[test]
    fn rejects_mismatched_anchor_space() {
        let bad = r#"{
            "space": {"model": "euclidean", "dim": 1},
            "scenarios": [
                {"p": 1.0, "alpha": 1.0,
                 "anchor": {"space": {"model": "spider", "legs": 3}, "leg": 0, "r": 1.0}}
            ]
        }"#;
        assert!(parse_scenarios(bad).is_err());
    }

    #[test]
    fn rejects_corrupt_json() {
        assert!(parse_scenarios("{not json").is_err());
        assert!(parse_scenarios(r#"{"space": {"model":"euclidean","dim":1}}"#).is_err());
    }

    #[test]
    fn experiment_config_round_trip_and_validation() {
        let dir = tempfile::tempdir().unwrap();
        let scen = dir.path().join("scen.json");
        std::fs::write(&scen, SCENARIO_JSON).unwrap();
        let cfg_path = dir.path().join("exp.json");
        std::fs::write(
            &cfg_path,
            r#"{
                "schema": 1,
                "scenario": "scen.json",
                "schedule": "harmonic",
                "N": 100, "R": 4, "seed": 7,
                "x0": {"space": {"model": "euclidean", "dim": 1}, "coords": [5.0]},
                "eps_grid": [0.25, 1.0]
            }"#,
        )
        .unwrap();
        let (cfg, dist) = ExperimentConfig::load(&cfg_path).unwrap();
        assert_eq!(cfg.n_steps, 100);
        assert_eq!(cfg.schedule, ScheduleKind::Harmonic);
        assert_eq!(dist.len(), 2);
        // Relative scenario path resolved against the config directory.
        assert_eq!(cfg.scenario, scen);

        // Wrong schema rejected.
        std::fs::write(
            &cfg_path,
            r#"{"schema": 2, "scenario": "scen.json", "schedule": "harmonic",
                "N": 1, "R": 1, "seed": 0,
                "x0": {"space": {"model": "euclidean", "dim": 1}, "coords": [5.0]},
                "eps_grid": [1.0]}"#,
        )
        .unwrap();
        assert!(ExperimentConfig::load(&cfg_path).is_err());
    }

    #[test]
    fn fast_schedule_resolves_alpha_bar() {
        let dist = parse_scenarios(SCENARIO_JSON).unwrap();
        match ScheduleKind::FastHarmonic.resolve(&dist) {
            Schedule::FastHarmonic { alpha_bar } => assert_eq!(alpha_bar, 1.0),
            s => panic!("unexpected {s:?}"),
        }
    }
}
