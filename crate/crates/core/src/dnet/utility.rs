//! Utility tables for the decision node.

use std::collections::BTreeMap;

use thiserror::Error;

use super::entropy::{wh_entropy, yn_expected_entropy};
use super::question::{Question, QuestionKind};
use crate::belief::Belief;

const DEFAULT_FREQUENCIES: &str = include_str!("../../config/question_frequencies.toml");

#[derive(Debug, Clone, PartialEq, Error)]
pub enum UtilityError {
    #[error("no frequency listed for question type `{0}`")]
    MissingFrequency(String),
    #[error("failed to parse frequency table: {0}")]
    Parse(String),
    #[error("frequency for `{0}` must be a finite non-negative number")]
    BadFrequency(String),
    #[error("frequency table is empty or sums to zero")]
    ZeroMass,
}

/// Question-type frequencies, normalized to sum to 100.
#[derive(Clone, Debug, PartialEq)]
pub struct FrequencyTable {
    entries: BTreeMap<String, f64>,
}

impl FrequencyTable {
    pub fn new(raw: BTreeMap<String, f64>) -> Result<Self, UtilityError> {
        if let Some((k, _)) = raw.iter().find(|(_, v)| !v.is_finite() || **v < 0.0) {
            return Err(UtilityError::BadFrequency(k.clone()));
        }
        let total: f64 = raw.values().sum();
        if total <= 0.0 {
            return Err(UtilityError::ZeroMass);
        }
        let entries = raw
            .into_iter()
            .map(|(k, v)| (k, 100.0 * v / total))
            .collect();
        Ok(Self { entries })
    }

    pub fn from_toml(text: &str) -> Result<Self, UtilityError> {
        let raw: BTreeMap<String, f64> =
            toml::from_str(text).map_err(|e| UtilityError::Parse(e.to_string()))?;
        Self::new(raw)
    }

    /// The shipped table with Query:Color ranked first.
    pub fn spacecraft() -> Self {
        Self::from_toml(DEFAULT_FREQUENCIES).expect("shipped frequency table parses")
    }

    pub fn get(&self, question_type: &str) -> Option<f64> {
        self.entries.get(question_type).copied()
    }

    pub fn entries(&self) -> &BTreeMap<String, f64> {
        &self.entries
    }
}

/// How the utility node scores questions.
#[derive(Clone, Debug, PartialEq)]
pub enum UtilityPolicy {
    /// Shannon entropy for WH questions, expected binary entropy for YN.
    Entropy,
    /// Corpus frequency of the question type, zero once the property is known.
    Data(FrequencyTable),
}

impl UtilityPolicy {
    pub fn name(&self) -> &'static str {
        match self {
            UtilityPolicy::Entropy => "entropy",
            UtilityPolicy::Data(_) => "data",
        }
    }
}

/// One utility per question, parallel to the network's question list.
#[derive(Clone, Debug, PartialEq)]
pub struct UtilityTable {
    pub entries: Vec<(Question, f64)>,
}

impl UtilityTable {
    pub fn get(&self, q: &Question) -> Option<f64> {
        self.entries.iter().find(|(k, _)| k == q).map(|(_, u)| *u)
    }

    /// Multiplies every utility by `factor`.
    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            entries: self
                .entries
                .iter()
                .map(|(q, u)| (q.clone(), u * factor))
                .collect(),
        }
    }
}

pub fn entropy_utilities(questions: &[Question], belief: &Belief<'_>) -> UtilityTable {
    let entries = questions
        .iter()
        .map(|q| {
            let d = belief.distribution(q.property);
            let u = match q.kind {
                QuestionKind::Wh => wh_entropy(&d),
                QuestionKind::Yn => yn_expected_entropy(&d),
            };
            (q.clone(), u)
        })
        .collect();
    UtilityTable { entries }
}

/// Frequency of each question's type for properties still unknown under
/// `belief`; zero for properties on which all candidates agree.
pub fn data_driven_utilities(
    freq: &FrequencyTable,
    questions: &[Question],
    belief: &Belief<'_>,
) -> Result<UtilityTable, UtilityError> {
    let entries = questions
        .iter()
        .map(|q| {
            let f = freq
                .get(&q.type_name)
                .ok_or_else(|| UtilityError::MissingFrequency(q.type_name.clone()))?;
            let known = belief.distribution(q.property).is_degenerate();
            Ok((q.clone(), if known { 0.0 } else { f }))
        })
        .collect::<Result<_, _>>()?;
    Ok(UtilityTable { entries })
}
