//! Minimum disambiguating property sets.
//!
//! Every pair of entities yields a clause: the set of properties on which the
//! pair differs. A set of properties disambiguates all entities iff it hits
//! every clause, so the smallest such set is a minimum hitting set. Small
//! universes are solved exactly by cardinality-ordered subset search; larger
//! ones fall back to greedy set cover.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::world::{PropertyId, PropertySchema, World};

/// Universe size up to which the solver is exact.
pub const DEFAULT_EXACT_LIMIT: usize = 16;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MinSetError {
    #[error("entities `{0}` and `{1}` cannot be told apart by any property")]
    IndistinguishablePair(String, String),
}

/// One clause per distinguishable entity pair.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ClauseSet {
    pub clauses: Vec<BTreeSet<PropertyId>>,
}

impl ClauseSet {
    pub fn len(&self) -> usize {
        self.clauses.len()
    }

    pub fn is_empty(&self) -> bool {
        self.clauses.is_empty()
    }

    pub fn is_hit_by(&self, set: &BTreeSet<PropertyId>) -> bool {
        self.clauses.iter().all(|c| !c.is_disjoint(set))
    }

    /// Properties mentioned by at least one clause, in schema order.
    pub fn universe(&self) -> Vec<PropertyId> {
        let u: BTreeSet<PropertyId> = self.clauses.iter().flatten().copied().collect();
        u.into_iter().collect()
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct MinSet {
    pub properties: BTreeSet<PropertyId>,
}

impl MinSet {
    pub fn len(&self) -> usize {
        self.properties.len()
    }

    pub fn is_empty(&self) -> bool {
        self.properties.is_empty()
    }

    pub fn contains(&self, p: PropertyId) -> bool {
        self.properties.contains(&p)
    }

    pub fn names<'s>(&self, schema: &'s PropertySchema) -> Vec<&'s str> {
        self.properties.iter().map(|&p| schema.name(p)).collect()
    }
}

/// Builds the clause for every unordered pair of `entities` (indices into
/// `world`). Pairs with identical assignments are an error.
pub fn pairwise_clauses(world: &World, entities: &[usize]) -> Result<ClauseSet, MinSetError> {
    let schema = world.schema();
    let mut clauses = Vec::new();
    for (i, &a) in entities.iter().enumerate() {
        for &b in &entities[i + 1..] {
            let clause: BTreeSet<PropertyId> = schema
                .ids()
                .filter(|&p| world.code(a, p) != world.code(b, p))
                .collect();
            if clause.is_empty() {
                let ents = world.entities();
                return Err(MinSetError::IndistinguishablePair(
                    ents[a].id.clone(),
                    ents[b].id.clone(),
                ));
            }
            clauses.push(clause);
        }
    }
    Ok(ClauseSet { clauses })
}

/// Smallest set of properties hitting every clause.
///
/// Exact when the clause universe has at most `exact_limit` properties
/// (capped at 64), otherwise greedy. Both modes break ties by schema order.
pub fn solve_min_hitting_set(clauses: &ClauseSet, exact_limit: usize) -> MinSet {
    let mut unique: Vec<&BTreeSet<PropertyId>> = clauses.clauses.iter().collect();
    unique.sort();
    unique.dedup();
    if unique.is_empty() {
        return MinSet::default();
    }

    let universe = clauses.universe();
    let properties = if universe.len() <= exact_limit.min(64) {
        exact(&universe, &unique)
    } else {
        greedy(&universe, &unique)
    };
    MinSet { properties }
}

fn exact(universe: &[PropertyId], clauses: &[&BTreeSet<PropertyId>]) -> BTreeSet<PropertyId> {
    let masks: Vec<u64> = clauses
        .iter()
        .map(|c| {
            c.iter().fold(0u64, |m, p| {
                let bit = universe
                    .binary_search(p)
                    .expect("clause property in universe");
                m | (1u64 << bit)
            })
        })
        .collect();

    let n = universe.len();
    for k in 1..=n {
        let mut found = None;
        for_each_combination(n, k, |subset| {
            let mask = subset.iter().fold(0u64, |m, &i| m | (1u64 << i));
            if masks.iter().all(|&c| c & mask != 0) {
                found = Some(subset.to_vec());
                true
            } else {
                false
            }
        });
        if let Some(idx) = found {
            return idx.into_iter().map(|i| universe[i]).collect();
        }
    }
    unreachable!("the full universe hits every non-empty clause")
}

/// Visits k-subsets of 0..n in lexicographic order until `visit` returns true.
fn for_each_combination(n: usize, k: usize, mut visit: impl FnMut(&[usize]) -> bool) {
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        if visit(&idx) {
            return;
        }
        let mut i = k;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            if idx[i] < n - k + i {
                break;
            }
            if i == 0 {
                return;
            }
        }
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

fn greedy(universe: &[PropertyId], clauses: &[&BTreeSet<PropertyId>]) -> BTreeSet<PropertyId> {
    let mut uncovered: Vec<&BTreeSet<PropertyId>> = clauses.to_vec();
    let mut chosen = BTreeSet::new();
    while !uncovered.is_empty() {
        let mut best: Option<(PropertyId, usize)> = None;
        for &p in universe {
            let hits = uncovered.iter().filter(|c| c.contains(&p)).count();
            if hits > best.map_or(0, |(_, h)| h) {
                best = Some((p, hits));
            }
        }
        let (p, _) = best.expect("every clause is non-empty");
        chosen.insert(p);
        uncovered.retain(|c| !c.contains(&p));
    }
    chosen
}

/// Minimum disambiguating set over `entities` (indices into `world`).
pub fn compute_min_set(world: &World, entities: &[usize]) -> Result<MinSet, MinSetError> {
    compute_min_set_with_limit(world, entities, DEFAULT_EXACT_LIMIT)
}

pub fn compute_min_set_with_limit(
    world: &World,
    entities: &[usize],
    exact_limit: usize,
) -> Result<MinSet, MinSetError> {
    let clauses = pairwise_clauses(world, entities)?;
    Ok(solve_min_hitting_set(&clauses, exact_limit))
}
