//! The agent's evidence state during an episode.
//!
//! The posterior over referents is uniform on the surviving candidates, and
//! each property's value distribution is the empirical frequency among them.

use thiserror::Error;

use crate::world::{PropertyId, World};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BeliefError {
    #[error("unknown referent: no entity is called `{0}`")]
    UnknownReferent(String),
    #[error("contradictory answer: no candidate has {property} = {value} ({answer})")]
    ContradictoryAnswer {
        property: String,
        value: String,
        answer: &'static str,
    },
    #[error("unknown property `{0}`")]
    UnknownProperty(String),
    #[error("`{value}` is not a value of property `{property}`")]
    UnknownValue { property: String, value: String },
}

/// Value distribution of one property over the current candidates.
#[derive(Clone, Debug, PartialEq)]
pub struct PropertyDistribution {
    pub property: PropertyId,
    /// One probability per domain value, in domain order.
    pub probs: Vec<f64>,
}

impl PropertyDistribution {
    pub fn from_counts(property: PropertyId, counts: &[usize]) -> Self {
        let total: usize = counts.iter().sum();
        let probs = counts
            .iter()
            .map(|&c| {
                if total == 0 {
                    0.0
                } else {
                    c as f64 / total as f64
                }
            })
            .collect();
        Self { property, probs }
    }

    pub fn is_degenerate(&self) -> bool {
        self.probs.iter().filter(|&&p| p > 0.0).count() <= 1
    }
}

#[derive(Clone, Debug)]
pub struct Belief<'w> {
    world: &'w World,
    instruction_label: String,
    candidates: Vec<usize>,
}

impl<'w> Belief<'w> {
    /// All entities carrying `instruction_label` become candidates.
    pub fn new(world: &'w World, instruction_label: &str) -> Result<Self, BeliefError> {
        let candidates: Vec<usize> = world
            .entities()
            .iter()
            .enumerate()
            .filter(|(_, e)| e.label == instruction_label)
            .map(|(i, _)| i)
            .collect();
        if candidates.is_empty() {
            return Err(BeliefError::UnknownReferent(instruction_label.to_string()));
        }
        Ok(Self {
            world,
            instruction_label: instruction_label.to_string(),
            candidates,
        })
    }

    pub fn world(&self) -> &'w World {
        self.world
    }

    pub fn instruction_label(&self) -> &str {
        &self.instruction_label
    }

    /// Candidate entity indices in world order.
    pub fn candidates(&self) -> &[usize] {
        &self.candidates
    }

    pub fn candidate_ids(&self) -> Vec<&'w str> {
        let ents = self.world.entities();
        self.candidates
            .iter()
            .map(|&i| ents[i].id.as_str())
            .collect()
    }

    pub fn len(&self) -> usize {
        self.candidates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.candidates.is_empty()
    }

    pub fn value_counts(&self, property: PropertyId) -> Vec<usize> {
        let mut counts = vec![0; self.world.schema().domain(property).len()];
        for &c in &self.candidates {
            counts[self.world.code(c, property)] += 1;
        }
        counts
    }

    pub fn distribution(&self, property: PropertyId) -> PropertyDistribution {
        PropertyDistribution::from_counts(property, &self.value_counts(property))
    }

    /// Filters on a WH answer revealing the target's value.
    pub fn apply_wh_answer(&self, property: PropertyId, value: &str) -> Result<Self, BeliefError> {
        let code = self.code_of(property, value)?;
        self.filtered(property, value, "wh", |c| c == code)
    }

    /// Filters on a yes/no answer to "is `property` equal to `value`?".
    pub fn apply_yn_answer(
        &self,
        property: PropertyId,
        value: &str,
        yes: bool,
    ) -> Result<Self, BeliefError> {
        let code = self.code_of(property, value)?;
        if yes {
            self.filtered(property, value, "yes", |c| c == code)
        } else {
            self.filtered(property, value, "no", |c| c != code)
        }
    }

    /// The referent, once exactly one candidate remains.
    pub fn resolved(&self) -> Option<&'w str> {
        match self.candidates.as_slice() {
            [only] => Some(self.world.entities()[*only].id.as_str()),
            _ => None,
        }
    }

    fn code_of(&self, property: PropertyId, value: &str) -> Result<usize, BeliefError> {
        let schema = self.world.schema();
        schema
            .value_index(property, value)
            .ok_or_else(|| BeliefError::UnknownValue {
                property: schema.name(property).to_string(),
                value: value.to_string(),
            })
    }

    fn filtered(
        &self,
        property: PropertyId,
        value: &str,
        answer: &'static str,
        keep: impl Fn(usize) -> bool,
    ) -> Result<Self, BeliefError> {
        let candidates: Vec<usize> = self
            .candidates
            .iter()
            .copied()
            .filter(|&c| keep(self.world.code(c, property)))
            .collect();
        if candidates.is_empty() {
            return Err(BeliefError::ContradictoryAnswer {
                property: self.world.schema().name(property).to_string(),
                value: value.to_string(),
                answer,
            });
        }
        Ok(Self {
            world: self.world,
            instruction_label: self.instruction_label.clone(),
            candidates,
        })
    }
}
