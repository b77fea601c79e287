//! Clarification question generation for situated reference resolution.
//!
//! An agent receives an instruction naming an entity ("the temporal
//! emitter") that matches several candidates in a symbolic world, and asks
//! WH and yes/no questions until one candidate remains. The [`dnet`] module
//! picks questions with a decision network whose utilities come either from
//! property entropy or from question-type frequencies; [`dialogue`] runs
//! episodes against a truthful oracle or a person; [`bench`] compares the
//! model with a random slot-filling baseline across environments.

pub mod belief;
pub mod bench;
pub mod dialogue;
pub mod dnet;
pub mod minset;
pub mod report;
pub mod stats;
pub mod world;
pub mod worlds;

pub use belief::{Belief, BeliefError, PropertyDistribution};
pub use bench::{run_benchmark, BenchmarkReport, BenchmarkSpec, Environment, System};
pub use dialogue::{run_dialogue, run_episode, AgentPolicy, Answer, EpisodeRecord, Limits};
pub use dnet::{build_network, select_question, DecisionNetwork, Question, QuestionCatalog};
pub use minset::{compute_min_set, MinSet};
pub use world::{Entity, PropertyId, PropertySchema, World};
pub use worlds::{generate_random_world, spacecraft_world, RandomWorldSpec};
