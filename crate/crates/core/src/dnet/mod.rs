//! The decision network used to pick clarification questions.
//!
//! Chance nodes are the instruction (observed), the candidate referents and
//! one knowledge node per property; their state is carried by a [`Belief`].
//! The decision node is the question list and the utility node is a
//! [`UtilityTable`]. Because the utilities are already functions of the
//! belief-conditioned property distributions, the maximum-expected-utility
//! query reduces to an argmax over the table.
//!
//! Networks are rebuilt from the current belief on every turn: the active
//! properties are the minimum disambiguating set of the surviving candidates,
//! so the network only ever contains questions that can still discriminate.

pub mod entropy;
pub mod question;
pub mod utility;

use thiserror::Error;

pub use entropy::{shannon_entropy, wh_entropy, yn_expected_entropy};
pub use question::{BoundQuestionType, Question, QuestionCatalog, QuestionKind, QuestionType};
pub use utility::{
    data_driven_utilities, entropy_utilities, FrequencyTable, UtilityError, UtilityPolicy,
    UtilityTable,
};

use crate::belief::Belief;
use crate::minset::{compute_min_set, MinSet, MinSetError};
use crate::world::PropertyId;

/// Utilities closer than this are treated as tied.
const TIE_EPSILON: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum NetworkError {
    #[error(transparent)]
    MinSet(#[from] MinSetError),
    #[error(transparent)]
    Utility(#[from] UtilityError),
    #[error("no informative question: every utility is zero with {0} candidates left")]
    NoInformativeQuestion(usize),
}

#[derive(Clone, Debug)]
pub struct DecisionNetwork {
    pub active: MinSet,
    pub questions: Vec<Question>,
    pub utilities: UtilityTable,
    pub policy: &'static str,
    pub candidate_count: usize,
}

impl DecisionNetwork {
    pub fn with_utilities(&self, utilities: UtilityTable) -> Self {
        Self {
            utilities,
            ..self.clone()
        }
    }
}

/// Most frequent value among the candidates; ties go to domain order.
pub fn modal_value<'w>(belief: &Belief<'w>, property: PropertyId) -> &'w str {
    let counts = belief.value_counts(property);
    let mut best = 0;
    for (i, &c) in counts.iter().enumerate() {
        if c > counts[best] {
            best = i;
        }
    }
    &belief.world().schema().domain(property)[best]
}

/// Instantiates the question list for the active properties, in schema order
/// with WH before YN.
pub fn network_questions(
    bound: &[BoundQuestionType],
    active: &MinSet,
    belief: &Belief<'_>,
) -> Vec<Question> {
    let schema = belief.world().schema();
    bound
        .iter()
        .filter(|b| active.contains(b.property))
        .map(|b| match b.kind {
            QuestionKind::Wh => b.instantiate(schema, None),
            QuestionKind::Yn => b.instantiate(schema, Some(modal_value(belief, b.property))),
        })
        .collect()
}

/// Builds the network for the current belief.
pub fn build_network(
    belief: &Belief<'_>,
    catalog: &QuestionCatalog,
    policy: &UtilityPolicy,
) -> Result<DecisionNetwork, NetworkError> {
    let world = belief.world();
    let active = compute_min_set(world, belief.candidates())?;
    let bound = catalog.bind(world.schema());
    let questions = network_questions(&bound, &active, belief);
    let utilities = match policy {
        UtilityPolicy::Entropy => entropy_utilities(&questions, belief),
        UtilityPolicy::Data(freq) => data_driven_utilities(freq, &questions, belief)?,
    };
    Ok(DecisionNetwork {
        active,
        questions,
        utilities,
        policy: policy.name(),
        candidate_count: belief.len(),
    })
}

/// The maximum-utility question. Ties keep the earliest question in the
/// network's list, i.e. schema order, then WH before YN.
pub fn select_question(net: &DecisionNetwork) -> Result<&Question, NetworkError> {
    let mut best: Option<(&Question, f64)> = None;
    for (q, u) in &net.utilities.entries {
        match best {
            Some((_, b)) if *u <= b + TIE_EPSILON * b.abs().max(1.0) => {}
            _ => best = Some((q, *u)),
        }
    }
    match best {
        Some((q, u)) if u > 0.0 => Ok(q),
        _ => Err(NetworkError::NoInformativeQuestion(net.candidate_count)),
    }
}
