//! Episode engine: an agent asks questions, an oracle answers, the belief is
//! filtered, until one candidate remains.

use std::collections::BTreeSet;
use std::fmt;
use std::io::{BufRead, Write};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::belief::{Belief, BeliefError};
use crate::dnet::{
    build_network, select_question, BoundQuestionType, NetworkError, Question, QuestionCatalog,
    QuestionKind, UtilityPolicy,
};
use crate::minset::{compute_min_set, MinSetError};
use crate::world::{PropertyId, World};

pub const DEFAULT_MAX_QUESTIONS: usize = 50;

#[derive(Debug, Error)]
pub enum DialogueError {
    #[error("unknown referent: no entity has id `{0}`")]
    UnknownTarget(String),
    #[error(transparent)]
    Belief(#[from] BeliefError),
    #[error(transparent)]
    Network(#[from] NetworkError),
    #[error(transparent)]
    MinSet(#[from] MinSetError),
    #[error("question budget of {0} exhausted before the referent was resolved")]
    BudgetExceeded(usize),
    #[error("question budget {budget} is below the number of properties ({properties})")]
    BudgetTooSmall { budget: usize, properties: usize },
    #[error("baseline has no eligible question left with {0} candidates")]
    NoEligibleQuestion(usize),
    #[error("oracle gave a {got} answer to a {expected} question")]
    MismatchedAnswer {
        expected: QuestionKind,
        got: &'static str,
    },
    #[error("oracle input closed before the referent was resolved")]
    OracleClosed,
    #[error("oracle i/o failed: {0}")]
    Io(#[from] std::io::Error),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Answer {
    Value(String),
    Yes,
    No,
}

impl fmt::Display for Answer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Answer::Value(v) => f.write_str(v),
            Answer::Yes => f.write_str("yes"),
            Answer::No => f.write_str("no"),
        }
    }
}

pub trait Oracle {
    fn answer(&mut self, question: &Question) -> Result<Answer, DialogueError>;
}

/// Answers from the ground truth of the world.
#[derive(Clone, Debug)]
pub struct SimulatedOracle<'w> {
    world: &'w World,
    target: usize,
}

impl<'w> SimulatedOracle<'w> {
    pub fn new(world: &'w World, target_id: &str) -> Result<Self, DialogueError> {
        let target = world
            .entity_index(target_id)
            .ok_or_else(|| DialogueError::UnknownTarget(target_id.to_string()))?;
        Ok(Self { world, target })
    }

    pub fn target_id(&self) -> &'w str {
        &self.world.entities()[self.target].id
    }
}

impl Oracle for SimulatedOracle<'_> {
    fn answer(&mut self, q: &Question) -> Result<Answer, DialogueError> {
        Ok(oracle_answer(self.world, self.target, q))
    }
}

/// Truthful answer about entity `target`.
pub fn oracle_answer(world: &World, target: usize, q: &Question) -> Answer {
    let actual = world.value(target, q.property);
    match &q.value {
        None => Answer::Value(actual.to_string()),
        Some(v) if v == actual => Answer::Yes,
        Some(_) => Answer::No,
    }
}

/// A person answering at a terminal: one question per output line, one
/// reply (`yes`, `no`, or a property value) per input line.
pub struct HumanOracle<'w, R, W> {
    world: &'w World,
    input: R,
    output: W,
}

impl<'w, R: BufRead, W: Write> HumanOracle<'w, R, W> {
    pub fn new(world: &'w World, input: R, output: W) -> Self {
        Self {
            world,
            input,
            output,
        }
    }

    fn parse(&self, q: &Question, line: &str) -> Option<Answer> {
        let reply = line.trim();
        match q.kind {
            QuestionKind::Yn => match reply.to_ascii_lowercase().as_str() {
                "yes" | "y" => Some(Answer::Yes),
                "no" | "n" => Some(Answer::No),
                _ => None,
            },
            QuestionKind::Wh => self
                .world
                .schema()
                .domain(q.property)
                .iter()
                .find(|v| v.eq_ignore_ascii_case(reply))
                .map(|v| Answer::Value(v.clone())),
        }
    }
}

impl<R: BufRead, W: Write> Oracle for HumanOracle<'_, R, W> {
    fn answer(&mut self, q: &Question) -> Result<Answer, DialogueError> {
        writeln!(self.output, "{}", q.surface)?;
        loop {
            self.output.flush()?;
            let mut line = String::new();
            if self.input.read_line(&mut line)? == 0 {
                return Err(DialogueError::OracleClosed);
            }
            if let Some(a) = self.parse(q, &line) {
                return Ok(a);
            }
            let hint = match q.kind {
                QuestionKind::Yn => "yes or no".to_string(),
                QuestionKind::Wh => self.world.schema().domain(q.property).join(", "),
            };
            writeln!(self.output, "please answer with one of: {hint}")?;
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum AgentPolicy {
    /// Maximum-expected-utility questions from the decision network.
    Model(UtilityPolicy),
    /// Uniformly random questions about properties not yet learned.
    Baseline { seed: u64 },
}

impl AgentPolicy {
    pub fn name(&self) -> &'static str {
        match self {
            AgentPolicy::Model(UtilityPolicy::Entropy) => "model-entropy",
            AgentPolicy::Model(UtilityPolicy::Data(_)) => "model-data",
            AgentPolicy::Baseline { .. } => "baseline",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Limits {
    pub max_questions: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Self {
            max_questions: DEFAULT_MAX_QUESTIONS,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Turn {
    pub question: Question,
    pub answer: Answer,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EpisodeRecord {
    pub agent: &'static str,
    pub instruction_label: String,
    /// Known for simulated oracles only.
    pub target: Option<String>,
    pub resolved: String,
    /// Size of the minimum disambiguating set of the initial candidates.
    pub initial_min_set: usize,
    pub transcript: Vec<Turn>,
    pub question_count: usize,
}

impl EpisodeRecord {
    pub fn wh_count(&self) -> usize {
        self.transcript
            .iter()
            .filter(|t| t.question.kind == QuestionKind::Wh)
            .count()
    }
}

/// Properties the baseline treats as learned.
///
/// A WH answer or a confirmed YN question teaches the property. A denied YN
/// question only rules out one value, so the property stays eligible.
#[derive(Clone, Debug, Default)]
pub struct KnownProperties(BTreeSet<PropertyId>);

impl KnownProperties {
    pub fn contains(&self, p: PropertyId) -> bool {
        self.0.contains(&p)
    }

    pub fn insert(&mut self, p: PropertyId) {
        self.0.insert(p);
    }

    fn observe(&mut self, q: &Question, a: &Answer) {
        if matches!(a, Answer::Value(_) | Answer::Yes) {
            self.insert(q.property);
        }
    }
}

/// Uniform choice among questions about properties not yet learned. A chosen
/// YN question confirms a uniformly random value present among candidates.
pub fn baseline_choose(
    belief: &Belief<'_>,
    known: &KnownProperties,
    questions: &[BoundQuestionType],
    rng: &mut ChaCha8Rng,
) -> Option<Question> {
    let eligible: Vec<&BoundQuestionType> = questions
        .iter()
        .filter(|q| !known.contains(q.property))
        .collect();
    let chosen = eligible.choose(rng)?;
    let schema = belief.world().schema();
    Some(match chosen.kind {
        QuestionKind::Wh => chosen.instantiate(schema, None),
        QuestionKind::Yn => {
            let present: Vec<&str> = belief
                .value_counts(chosen.property)
                .iter()
                .enumerate()
                .filter(|(_, &c)| c > 0)
                .map(|(i, _)| schema.domain(chosen.property)[i].as_str())
                .collect();
            let value = present.choose(rng).expect("candidates are non-empty");
            chosen.instantiate(schema, Some(value))
        }
    })
}

fn apply_answer<'w>(
    belief: &Belief<'w>,
    q: &Question,
    a: &Answer,
) -> Result<Belief<'w>, DialogueError> {
    match (q.kind, a) {
        (QuestionKind::Wh, Answer::Value(v)) => Ok(belief.apply_wh_answer(q.property, v)?),
        (QuestionKind::Yn, Answer::Yes | Answer::No) => {
            let value = q.value.as_deref().expect("YN question carries a value");
            Ok(belief.apply_yn_answer(q.property, value, *a == Answer::Yes)?)
        }
        (expected, got) => Err(DialogueError::MismatchedAnswer {
            expected,
            got: match got {
                Answer::Value(_) => "value",
                _ => "yes/no",
            },
        }),
    }
}

/// Runs one dialogue for `instruction_label` against any oracle.
pub fn run_dialogue(
    world: &World,
    instruction_label: &str,
    agent: &AgentPolicy,
    catalog: &QuestionCatalog,
    oracle: &mut dyn Oracle,
    limits: Limits,
) -> Result<EpisodeRecord, DialogueError> {
    if limits.max_questions < world.schema().len() {
        return Err(DialogueError::BudgetTooSmall {
            budget: limits.max_questions,
            properties: world.schema().len(),
        });
    }

    let mut belief = Belief::new(world, instruction_label)?;
    let initial_min_set = compute_min_set(world, belief.candidates())?.len();
    let bound = catalog.bind(world.schema());
    let mut known = KnownProperties::default();
    let mut rng = match agent {
        AgentPolicy::Baseline { seed } => Some(ChaCha8Rng::seed_from_u64(*seed)),
        AgentPolicy::Model(_) => None,
    };
    let mut transcript = Vec::new();

    while belief.resolved().is_none() {
        if transcript.len() >= limits.max_questions {
            return Err(DialogueError::BudgetExceeded(limits.max_questions));
        }
        let question = match (agent, rng.as_mut()) {
            (AgentPolicy::Model(policy), _) => {
                let net = build_network(&belief, catalog, policy)?;
                select_question(&net)?.clone()
            }
            (AgentPolicy::Baseline { .. }, Some(rng)) => {
                baseline_choose(&belief, &known, &bound, rng)
                    .ok_or(DialogueError::NoEligibleQuestion(belief.len()))?
            }
            (AgentPolicy::Baseline { .. }, None) => unreachable!("baseline always has an rng"),
        };
        let answer = oracle.answer(&question)?;
        belief = apply_answer(&belief, &question, &answer)?;
        known.observe(&question, &answer);
        transcript.push(Turn { question, answer });
    }

    let resolved = belief
        .resolved()
        .expect("loop exits on resolution")
        .to_string();
    Ok(EpisodeRecord {
        agent: agent.name(),
        instruction_label: instruction_label.to_string(),
        target: None,
        resolved,
        initial_min_set,
        question_count: transcript.len(),
        transcript,
    })
}

/// Runs one simulated episode whose instruction names `target_id`'s label.
pub fn run_episode(
    world: &World,
    target_id: &str,
    agent: &AgentPolicy,
    catalog: &QuestionCatalog,
    limits: Limits,
) -> Result<EpisodeRecord, DialogueError> {
    let mut oracle = SimulatedOracle::new(world, target_id)?;
    let label = world.entities()[oracle.target].label.clone();
    let mut record = run_dialogue(world, &label, agent, catalog, &mut oracle, limits)?;
    record.target = Some(oracle.target_id().to_string());
    Ok(record)
}
