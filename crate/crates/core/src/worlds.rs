//! World providers for evaluation: the shipped spacecraft environment and
//! seeded random worlds with controlled property variance.

use std::collections::HashSet;

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::world::{Entity, PropertyDef, PropertyId, PropertySchema, World};

const SPACECRAFT: &str = include_str!("../worlds/spacecraft.toml");

/// The spacecraft tool environment: 18 tools (6 types x 3 instances) over 6
/// features.
pub fn spacecraft_world() -> World {
    World::from_config_str(SPACECRAFT).expect("shipped spacecraft world is valid")
}

/// Property names (and value alphabets) used by generated worlds, in order.
/// Names beyond this list, and values beyond an alphabet, are synthetic.
const PROPERTY_ALPHABETS: &[(&str, &[&str])] = &[
    (
        "color",
        &[
            "red", "yellow", "blue", "green", "orange", "purple", "white", "black",
        ],
    ),
    (
        "shape",
        &["short", "tall", "narrow", "wide", "round", "flat"],
    ),
    ("size", &["small", "medium", "large", "tiny", "huge"]),
    ("texture", &["wood", "coarse", "metal", "smooth", "soft"]),
    ("symbol", &["x", "+", "-", "o", "*", "#"]),
    (
        "pattern",
        &["striped", "spotted", "none", "checkered", "dotted"],
    ),
    ("location", &["left", "right", "front", "back", "center"]),
    (
        "landmark",
        &["window", "locker", "cabinet", "crate", "panel"],
    ),
    (
        "function",
        &["cutting", "welding", "measuring", "fastening", "sealing"],
    ),
];

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GenError {
    #[error("infeasible random world spec: {0}")]
    InfeasibleSpec(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RandomWorldSpec {
    pub n_entities: usize,
    pub n_properties: usize,
    /// Properties whose values differ across entities; the rest are constant.
    pub n_varying: usize,
    pub values_per_property: usize,
    /// Consecutive entities share a label in groups of this size, which sets
    /// how many candidates an instruction leaves ambiguous.
    pub group_size: usize,
    pub seed: u64,
}

pub const DEFAULT_ENTITIES: usize = 20;
pub const DEFAULT_PROPERTIES: usize = 7;
pub const DEFAULT_VALUES: usize = 4;
pub const DEFAULT_GROUP_SIZE: usize = 7;
pub const LOW_VARIANCE: usize = 3;
pub const HIGH_VARIANCE: usize = 7;

impl RandomWorldSpec {
    /// Three varying properties out of seven.
    pub fn low_variance(seed: u64) -> Self {
        Self::with_varying(LOW_VARIANCE, seed)
    }

    /// All seven properties vary.
    pub fn high_variance(seed: u64) -> Self {
        Self::with_varying(HIGH_VARIANCE, seed)
    }

    pub fn with_varying(n_varying: usize, seed: u64) -> Self {
        Self {
            n_entities: DEFAULT_ENTITIES,
            n_properties: DEFAULT_PROPERTIES,
            n_varying,
            values_per_property: DEFAULT_VALUES,
            group_size: DEFAULT_GROUP_SIZE,
            seed,
        }
    }

    pub fn with_seed(self, seed: u64) -> Self {
        Self { seed, ..self }
    }

    pub fn check(&self) -> Result<(), GenError> {
        let fail = |m: String| Err(GenError::InfeasibleSpec(m));
        if self.n_entities == 0 {
            return fail("n_entities must be at least 1".into());
        }
        if self.group_size == 0 {
            return fail("group_size must be at least 1".into());
        }
        if self.values_per_property == 0 {
            return fail("values_per_property must be at least 1".into());
        }
        if self.n_varying > self.n_properties {
            return fail(format!(
                "n_varying ({}) exceeds n_properties ({})",
                self.n_varying, self.n_properties
            ));
        }
        let combos = (self.values_per_property as f64).powi(self.n_varying as i32);
        if combos < self.n_entities as f64 {
            return fail(format!(
                "{}^{} = {} distinct assignments cannot cover {} unique entities",
                self.values_per_property, self.n_varying, combos, self.n_entities
            ));
        }
        if self.n_entities > 1 && self.n_varying > 0 && self.values_per_property < 2 {
            return fail("varying properties need at least 2 values".into());
        }
        Ok(())
    }
}

fn property_def(index: usize, n_values: usize) -> PropertyDef {
    let (name, alphabet) = PROPERTY_ALPHABETS
        .get(index)
        .map(|(n, a)| (n.to_string(), *a))
        .unwrap_or_else(|| (format!("property_{index}"), &[][..]));
    let values = (0..n_values)
        .map(|i| {
            alphabet
                .get(i)
                .map(|v| v.to_string())
                .unwrap_or_else(|| format!("{name}_{i}"))
        })
        .collect();
    PropertyDef { name, values }
}

/// Generates a world with exactly `n_varying` properties that take more than
/// one value (when there are at least two entities) and unique assignments.
/// Deterministic in `spec.seed`.
pub fn generate_random_world(spec: &RandomWorldSpec) -> Result<World, GenError> {
    spec.check()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let n_vals = spec.values_per_property;
    let schema = PropertySchema::new(
        (0..spec.n_properties)
            .map(|i| property_def(i, n_vals))
            .collect(),
    );

    let mut varying: Vec<usize> = sample(&mut rng, spec.n_properties, spec.n_varying).into_vec();
    varying.sort_unstable();
    let must_vary = spec.n_entities > 1;

    let rows = loop {
        let constants: Vec<usize> = (0..spec.n_properties)
            .map(|_| rng.gen_range(0..n_vals))
            .collect();
        let mut seen = HashSet::new();
        let mut rows: Vec<Vec<usize>> = Vec::with_capacity(spec.n_entities);
        while rows.len() < spec.n_entities {
            let mut row = constants.clone();
            for &p in &varying {
                row[p] = rng.gen_range(0..n_vals);
            }
            if seen.insert(row.clone()) {
                rows.push(row);
            }
        }
        let all_vary = varying
            .iter()
            .all(|&p| rows.iter().any(|r| r[p] != rows[0][p]));
        if !must_vary || all_vary {
            break rows;
        }
    };

    let entities = rows
        .into_iter()
        .enumerate()
        .map(|(i, row)| {
            let group = i / spec.group_size;
            let label = format!("object {group}");
            Entity {
                id: format!("e{i:02}"),
                label: label.clone(),
                type_name: label,
                assignment: row
                    .iter()
                    .enumerate()
                    .map(|(p, &v)| {
                        let id = PropertyId(p);
                        (schema.name(id).to_string(), schema.domain(id)[v].clone())
                    })
                    .collect(),
            }
        })
        .collect();

    Ok(World::validated(schema, entities).expect("generated worlds are valid by construction"))
}

/// Number of properties that take more than one value across all entities.
pub fn varying_property_count(world: &World) -> usize {
    world
        .schema()
        .ids()
        .filter(|&p| (1..world.len()).any(|i| world.code(i, p) != world.code(0, p)))
        .count()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::minset::compute_min_set;

    #[test]
    fn spacecraft_has_six_types_of_three() {
        let w = spacecraft_world();
        assert_eq!(w.len(), 18);
        assert_eq!(w.schema().len(), 6);
        let mut types: Vec<&str> = w.entities().iter().map(|e| e.type_name.as_str()).collect();
        types.dedup();
        assert_eq!(types.len(), 6);
        for t in types {
            assert_eq!(w.entities().iter().filter(|e| e.type_name == t).count(), 3);
        }
    }

    #[test]
    fn spacecraft_types_vary_on_exactly_three_features() {
        let w = spacecraft_world();
        for chunk in (0..w.len()).collect::<Vec<_>>().chunks(3) {
            let varying = w
                .schema()
                .ids()
                .filter(|&p| chunk.iter().any(|&i| w.code(i, p) != w.code(chunk[0], p)))
                .count();
            assert_eq!(varying, 3, "type {}", w.entities()[chunk[0]].type_name);
        }
        let module = w.schema();
        let m: Vec<usize> = (0..w.len())
            .filter(|&i| w.entities()[i].type_name == "module")
            .collect();
        let vary: Vec<&str> = module
            .ids()
            .filter(|&p| m.iter().any(|&i| w.code(i, p) != w.code(m[0], p)))
            .map(|p| module.name(p))
            .collect();
        assert_eq!(vary, vec!["shape", "symbol", "pattern"]);
    }

    #[test]
    fn synthesizer_min_set_within_its_features() {
        let w = spacecraft_world();
        let s: Vec<usize> = (0..w.len())
            .filter(|&i| w.entities()[i].type_name == "synthesizer")
            .collect();
        let m = compute_min_set(&w, &s).unwrap();
        for name in m.names(w.schema()) {
            assert!(["color", "size", "shape"].contains(&name));
        }
    }

    #[test]
    fn low_variance_world_varies_on_three() {
        for seed in 0..20 {
            let w = generate_random_world(&RandomWorldSpec::low_variance(seed)).unwrap();
            assert_eq!(w.len(), 20);
            assert_eq!(w.schema().len(), 7);
            assert_eq!(varying_property_count(&w), 3);
            assert!(w.validate().is_ok());
        }
    }

    #[test]
    fn high_variance_world_varies_on_seven() {
        let w = generate_random_world(&RandomWorldSpec::high_variance(3)).unwrap();
        assert_eq!(varying_property_count(&w), 7);
    }

    #[test]
    fn infeasible_specs_are_rejected() {
        let spec = RandomWorldSpec {
            values_per_property: 2,
            n_varying: 2,
            ..RandomWorldSpec::low_variance(0)
        };
        assert!(matches!(
            generate_random_world(&spec),
            Err(GenError::InfeasibleSpec(_))
        ));
        let spec = RandomWorldSpec {
            n_varying: 8,
            ..RandomWorldSpec::low_variance(0)
        };
        assert!(generate_random_world(&spec).is_err());
    }

    #[test]
    fn same_seed_same_world() {
        let a = generate_random_world(&RandomWorldSpec::low_variance(11)).unwrap();
        let b = generate_random_world(&RandomWorldSpec::low_variance(11)).unwrap();
        let c = generate_random_world(&RandomWorldSpec::low_variance(12)).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn labels_group_consecutive_entities() {
        let w = generate_random_world(&RandomWorldSpec::low_variance(1)).unwrap();
        let labels: Vec<&str> = w.entities().iter().map(|e| e.label.as_str()).collect();
        assert_eq!(labels.iter().filter(|l| **l == "object 0").count(), 7);
        assert_eq!(labels.iter().filter(|l| **l == "object 2").count(), 6);
    }

    #[test]
    fn long_schemas_get_synthetic_names() {
        let spec = RandomWorldSpec {
            n_entities: 3,
            n_properties: 11,
            n_varying: 2,
            values_per_property: 9,
            group_size: 3,
            seed: 5,
        };
        let w = generate_random_world(&spec).unwrap();
        assert_eq!(w.schema().name(PropertyId(10)), "property_10");
        assert_eq!(w.schema().domain(PropertyId(0))[8], "color_8");
    }
}
