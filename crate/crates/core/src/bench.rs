//! Benchmark harness: systems x environments x iterations of instruction
//! trials, aggregated into mean questions per instruction.
//!
//! Seeds are derived with a counter-based split so each iteration depends
//! only on `(base_seed, iteration)`:
//!
//! ```text
//! iteration_seed = split(base_seed, iteration)
//! world_seed     = split(iteration_seed, 0)
//! episode_seed   = split(iteration_seed, 1 + trial)
//! ```
//!
//! where `split(s, i)` is two rounds of the SplitMix64 finalizer. Iterations
//! therefore run in parallel without changing any result.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::dialogue::{run_episode, AgentPolicy, DialogueError, Limits};
use crate::dnet::{FrequencyTable, QuestionCatalog, UtilityPolicy};
use crate::stats::{mean, std_dev, welch_t, WelchT};
use crate::world::World;
use crate::worlds::{generate_random_world, spacecraft_world, GenError, RandomWorldSpec};

pub const DEFAULT_TRIALS: usize = 20;
pub const DEFAULT_ITERATIONS: usize = 100;

/// Human corpus reference (mean, SD) for the spacecraft environment. Shown in
/// report footnotes only; the corpus itself is not part of this project.
pub const HUMAN_REFERENCE: (f64, f64) = (1.72, 0.40);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum System {
    Baseline,
    ModelData,
    ModelEntropy,
}

impl System {
    pub const ALL: [System; 3] = [System::Baseline, System::ModelData, System::ModelEntropy];

    pub fn key(self) -> &'static str {
        match self {
            System::Baseline => "baseline",
            System::ModelData => "model-data",
            System::ModelEntropy => "model-entropy",
        }
    }

    pub fn display_name(self) -> &'static str {
        match self {
            System::Baseline => "Baseline",
            System::ModelData => "Model (Data)",
            System::ModelEntropy => "Model (Entropy)",
        }
    }

    pub fn policy(self, frequencies: &FrequencyTable, seed: u64) -> AgentPolicy {
        match self {
            System::Baseline => AgentPolicy::Baseline { seed },
            System::ModelData => AgentPolicy::Model(UtilityPolicy::Data(frequencies.clone())),
            System::ModelEntropy => AgentPolicy::Model(UtilityPolicy::Entropy),
        }
    }
}

impl fmt::Display for System {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.key())
    }
}

impl FromStr for System {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        System::ALL
            .into_iter()
            .find(|sys| sys.key() == s)
            .ok_or_else(|| {
                format!("unknown system `{s}` (expected baseline, model-data or model-entropy)")
            })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Environment {
    Spacecraft,
    /// A fresh world per iteration; the template's seed is ignored.
    Random {
        name: String,
        template: RandomWorldSpec,
    },
}

impl Environment {
    pub fn random_low() -> Self {
        Environment::Random {
            name: "random-low".into(),
            template: RandomWorldSpec::low_variance(0),
        }
    }

    pub fn random_high() -> Self {
        Environment::Random {
            name: "random-high".into(),
            template: RandomWorldSpec::high_variance(0),
        }
    }

    pub fn key(&self) -> &str {
        match self {
            Environment::Spacecraft => "spacecraft",
            Environment::Random { name, .. } => name,
        }
    }

    pub fn display_name(&self) -> String {
        match self.key() {
            "spacecraft" => "Spacecraft".into(),
            "random-low" => "Random (low variance)".into(),
            "random-high" => "Random (high variance)".into(),
            other => other.to_string(),
        }
    }

    fn world(&self, seed: u64) -> Result<World, GenError> {
        match self {
            Environment::Spacecraft => Ok(spacecraft_world()),
            Environment::Random { template, .. } => {
                generate_random_world(&template.with_seed(seed))
            }
        }
    }
}

impl FromStr for Environment {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "spacecraft" => Ok(Environment::Spacecraft),
            "random-low" => Ok(Environment::random_low()),
            "random-high" => Ok(Environment::random_high()),
            _ => Err(format!(
                "unknown environment `{s}` (expected spacecraft, random-low or random-high)"
            )),
        }
    }
}

#[derive(Clone, Debug)]
pub struct BenchmarkSpec {
    pub systems: Vec<System>,
    pub environments: Vec<Environment>,
    pub trials_per_iteration: usize,
    pub iterations: usize,
    pub base_seed: u64,
    pub limits: Limits,
    pub catalog: QuestionCatalog,
    pub frequencies: FrequencyTable,
}

impl BenchmarkSpec {
    pub fn new(systems: Vec<System>, environments: Vec<Environment>, base_seed: u64) -> Self {
        Self {
            systems,
            environments,
            trials_per_iteration: DEFAULT_TRIALS,
            iterations: DEFAULT_ITERATIONS,
            base_seed,
            limits: Limits::default(),
            catalog: QuestionCatalog::spacecraft(),
            frequencies: FrequencyTable::spacecraft(),
        }
    }

    pub fn validate(&self) -> Result<(), BenchError> {
        let bad = |m: &str| Err(BenchError::InvalidSpec(m.to_string()));
        if self.systems.is_empty() {
            return bad("no systems selected");
        }
        if self.environments.is_empty() {
            return bad("no environments selected");
        }
        if self.trials_per_iteration == 0 || self.iterations == 0 {
            return bad("trials and iterations must be at least 1");
        }
        for env in &self.environments {
            if let Environment::Random { template, .. } = env {
                template.check()?;
            }
        }
        Ok(())
    }
}

#[derive(Debug, Error)]
pub enum BenchError {
    #[error("invalid benchmark spec: {0}")]
    InvalidSpec(String),
    #[error(transparent)]
    Gen(#[from] GenError),
    #[error("{system} on {environment}, iteration {iteration}, trial {trial} (target `{target}`): {source}")]
    Episode {
        system: System,
        environment: String,
        iteration: usize,
        trial: usize,
        target: String,
        #[source]
        source: Box<DialogueError>,
    },
}

fn splitmix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Counter-based seed derivation: `split(seed, index)`.
pub fn split_seed(seed: u64, index: u64) -> u64 {
    splitmix(splitmix(seed) ^ index)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CellReport {
    pub system: System,
    pub environment: String,
    pub mean_questions: f64,
    pub sd: f64,
    pub total_episodes: usize,
    pub iteration_means: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Comparison {
    pub environment: String,
    pub system: System,
    pub against: System,
    /// `None` when both samples have zero variance.
    pub welch: Option<WelchT>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BenchmarkReport {
    pub base_seed: u64,
    pub iterations: usize,
    pub trials_per_iteration: usize,
    pub sd_basis: String,
    pub systems: Vec<System>,
    pub environments: Vec<Environment>,
    pub iteration_seeds: Vec<u64>,
    pub cells: Vec<CellReport>,
    pub comparisons: Vec<Comparison>,
}

impl BenchmarkReport {
    pub fn cell(&self, system: System, environment: &str) -> Option<&CellReport> {
        self.cells
            .iter()
            .find(|c| c.system == system && c.environment == environment)
    }
}

/// Mean question count of each system over one iteration's trials.
fn run_iteration(
    spec: &BenchmarkSpec,
    env: &Environment,
    iteration: usize,
) -> Result<Vec<f64>, BenchError> {
    let iter_seed = split_seed(spec.base_seed, iteration as u64);
    let world = env.world(split_seed(iter_seed, 0))?;
    let trials = spec.trials_per_iteration;
    spec.systems
        .iter()
        .map(|&system| {
            let mut total = 0usize;
            for trial in 0..trials {
                let target = &world.entities()[trial % world.len()].id;
                let agent =
                    system.policy(&spec.frequencies, split_seed(iter_seed, 1 + trial as u64));
                let record = run_episode(&world, target, &agent, &spec.catalog, spec.limits)
                    .map_err(|source| BenchError::Episode {
                        system,
                        environment: env.key().to_string(),
                        iteration,
                        trial,
                        target: target.clone(),
                        source: Box::new(source),
                    })?;
                total += record.question_count;
            }
            Ok(total as f64 / trials as f64)
        })
        .collect()
}

/// Runs every system on every environment.
pub fn run_benchmark(spec: &BenchmarkSpec) -> Result<BenchmarkReport, BenchError> {
    spec.validate()?;
    let iteration_seeds: Vec<u64> = (0..spec.iterations)
        .map(|i| split_seed(spec.base_seed, i as u64))
        .collect();

    let mut cells = Vec::new();
    let mut comparisons = Vec::new();
    for env in &spec.environments {
        // per_iter[i][s] = mean for system s in iteration i
        let per_iter: Vec<Vec<f64>> = (0..spec.iterations)
            .into_par_iter()
            .map(|i| run_iteration(spec, env, i))
            .collect::<Result<_, _>>()?;

        let env_cells: Vec<CellReport> = spec
            .systems
            .iter()
            .enumerate()
            .map(|(s, &system)| {
                let means: Vec<f64> = per_iter.iter().map(|row| row[s]).collect();
                CellReport {
                    system,
                    environment: env.key().to_string(),
                    mean_questions: mean(&means),
                    sd: std_dev(&means),
                    total_episodes: spec.iterations * spec.trials_per_iteration,
                    iteration_means: means,
                }
            })
            .collect();

        if let Some(base) = env_cells.iter().find(|c| c.system == System::Baseline) {
            for c in env_cells.iter().filter(|c| c.system != System::Baseline) {
                comparisons.push(Comparison {
                    environment: env.key().to_string(),
                    system: c.system,
                    against: System::Baseline,
                    welch: welch_t(&c.iteration_means, &base.iteration_means).ok(),
                });
            }
        }
        cells.extend(env_cells);
    }

    Ok(BenchmarkReport {
        base_seed: spec.base_seed,
        iterations: spec.iterations,
        trials_per_iteration: spec.trials_per_iteration,
        sd_basis: "sample SD (n-1) of per-iteration mean questions per instruction".into(),
        systems: spec.systems.clone(),
        environments: spec.environments.clone(),
        iteration_seeds,
        cells,
        comparisons,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seed_split_is_stable_and_spread() {
        assert_eq!(split_seed(7, 3), split_seed(7, 3));
        assert_ne!(split_seed(7, 3), split_seed(7, 4));
        assert_ne!(split_seed(7, 3), split_seed(8, 3));
    }

    #[test]
    fn names_parse() {
        for s in System::ALL {
            assert_eq!(s.key().parse::<System>().unwrap(), s);
        }
        assert!("oracle".parse::<System>().is_err());
        assert_eq!(
            "random-low".parse::<Environment>().unwrap().key(),
            "random-low"
        );
        assert!("mars".parse::<Environment>().is_err());
    }

    #[test]
    fn empty_systems_rejected_before_running() {
        let spec = BenchmarkSpec::new(vec![], vec![Environment::Spacecraft], 1);
        assert!(matches!(
            run_benchmark(&spec),
            Err(BenchError::InvalidSpec(_))
        ));
    }

    #[test]
    fn one_trial_on_unique_label_is_zero() {
        let spec = BenchmarkSpec {
            iterations: 1,
            trials_per_iteration: 1,
            ..BenchmarkSpec::new(
                vec![System::ModelEntropy],
                vec![Environment::Random {
                    name: "singletons".into(),
                    template: RandomWorldSpec {
                        group_size: 1,
                        ..RandomWorldSpec::low_variance(0)
                    },
                }],
                5,
            )
        };
        let r = run_benchmark(&spec).unwrap();
        assert_eq!(r.cells[0].mean_questions, 0.0);
        assert_eq!(r.cells[0].total_episodes, 1);
    }
}
