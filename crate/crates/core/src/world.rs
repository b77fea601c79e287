//! Symbolic task worlds: a property schema plus a set of entities that assign
//! one value to every property.
//!
//! Worlds are read from and written to a small TOML document:
//!
//! ```toml
//! [[schema]]
//! name = "color"
//! values = ["red", "blue"]
//!
//! [[entities]]
//! id = "emitter_1"
//! label = "temporal emitter"
//! type = "emitter"
//! assignment = { color = "red" }
//! ```

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Index of a property within a [`PropertySchema`]. Ordering follows schema order.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PropertyId(pub usize);

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PropertyDef {
    pub name: String,
    pub values: Vec<String>,
}

/// Ordered list of properties and their value domains.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct PropertySchema {
    properties: Vec<PropertyDef>,
}

impl PropertySchema {
    pub fn new(properties: Vec<PropertyDef>) -> Self {
        Self { properties }
    }

    pub fn len(&self) -> usize {
        self.properties.len()
    }

    pub fn is_empty(&self) -> bool {
        self.properties.is_empty()
    }

    pub fn properties(&self) -> &[PropertyDef] {
        &self.properties
    }

    pub fn ids(&self) -> impl Iterator<Item = PropertyId> + '_ {
        (0..self.properties.len()).map(PropertyId)
    }

    pub fn lookup(&self, name: &str) -> Option<PropertyId> {
        self.properties
            .iter()
            .position(|p| p.name == name)
            .map(PropertyId)
    }

    pub fn name(&self, id: PropertyId) -> &str {
        &self.properties[id.0].name
    }

    pub fn domain(&self, id: PropertyId) -> &[String] {
        &self.properties[id.0].values
    }

    pub fn value_index(&self, id: PropertyId, value: &str) -> Option<usize> {
        self.properties[id.0].values.iter().position(|v| v == value)
    }

    fn violations(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        let mut seen = HashSet::new();
        for p in &self.properties {
            if !seen.insert(p.name.as_str()) {
                out.push(Violation::DuplicateProperty(p.name.clone()));
            }
            if p.values.is_empty() {
                out.push(Violation::EmptyDomain(p.name.clone()));
            }
            let mut vals = HashSet::new();
            for v in &p.values {
                if !vals.insert(v.as_str()) {
                    out.push(Violation::DuplicateValue {
                        property: p.name.clone(),
                        value: v.clone(),
                    });
                }
            }
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Entity {
    pub id: String,
    /// Instruction-facing name. Several entities may share a label.
    pub label: String,
    #[serde(rename = "type")]
    pub type_name: String,
    pub assignment: BTreeMap<String, String>,
}

/// A single broken world invariant.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    NoEntities,
    DuplicateProperty(String),
    EmptyDomain(String),
    DuplicateValue {
        property: String,
        value: String,
    },
    DuplicateEntityId(String),
    IncompleteAssignment {
        entity: String,
        property: String,
    },
    UnknownProperty {
        entity: String,
        property: String,
    },
    UnknownValue {
        entity: String,
        property: String,
        value: String,
    },
    IdenticalAssignments {
        first: String,
        second: String,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NoEntities => write!(f, "world has no entities"),
            Violation::DuplicateProperty(p) => write!(f, "duplicate property `{p}`"),
            Violation::EmptyDomain(p) => write!(f, "property `{p}` has an empty domain"),
            Violation::DuplicateValue { property, value } => {
                write!(f, "property `{property}` lists value `{value}` twice")
            }
            Violation::DuplicateEntityId(id) => write!(f, "duplicate entity id `{id}`"),
            Violation::IncompleteAssignment { entity, property } => write!(
                f,
                "incomplete assignment: entity `{entity}` has no value for `{property}`"
            ),
            Violation::UnknownProperty { entity, property } => {
                write!(f, "entity `{entity}` assigns unknown property `{property}`")
            }
            Violation::UnknownValue {
                entity,
                property,
                value,
            } => write!(
                f,
                "entity `{entity}` assigns `{value}` to property `{property}`, which is not in its domain"
            ),
            Violation::IdenticalAssignments { first, second } => write!(
                f,
                "entities `{first}` and `{second}` have identical assignments"
            ),
        }
    }
}

#[derive(Debug, Error)]
pub enum WorldError {
    #[error("failed to parse world config: {0}")]
    Parse(String),
    #[error("invalid world: {}", join_violations(.0))]
    Invalid(Vec<Violation>),
    #[error("failed to serialize world: {0}")]
    Serialize(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

fn join_violations(v: &[Violation]) -> String {
    v.iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join("; ")
}

/// Entities over a shared schema. Immutable once built.
///
/// `World::new` accepts any input so that [`World::validate`] can report on
/// it; every other consumer in this crate expects a world that validates.
#[derive(Clone, Debug)]
pub struct World {
    schema: PropertySchema,
    entities: Vec<Entity>,
    // codes[entity][property] = index into the property's domain
    codes: Vec<Vec<Option<usize>>>,
}

impl PartialEq for World {
    fn eq(&self, other: &Self) -> bool {
        self.schema == other.schema && self.entities == other.entities
    }
}

impl World {
    pub fn new(schema: PropertySchema, entities: Vec<Entity>) -> Self {
        let codes = entities
            .iter()
            .map(|e| {
                schema
                    .ids()
                    .map(|p| {
                        e.assignment
                            .get(schema.name(p))
                            .and_then(|v| schema.value_index(p, v))
                    })
                    .collect()
            })
            .collect();
        Self {
            schema,
            entities,
            codes,
        }
    }

    /// Builds a world and rejects it unless every invariant holds.
    pub fn validated(schema: PropertySchema, entities: Vec<Entity>) -> Result<Self, WorldError> {
        let world = Self::new(schema, entities);
        match world.validate() {
            Ok(()) => Ok(world),
            Err(v) => Err(WorldError::Invalid(v)),
        }
    }

    pub fn schema(&self) -> &PropertySchema {
        &self.schema
    }

    pub fn entities(&self) -> &[Entity] {
        &self.entities
    }

    pub fn len(&self) -> usize {
        self.entities.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entities.is_empty()
    }

    pub fn entity_index(&self, id: &str) -> Option<usize> {
        self.entities.iter().position(|e| e.id == id)
    }

    /// Domain index of the value `entity` takes on `property`.
    ///
    /// Panics if the assignment is missing, which cannot happen for a world
    /// that passed validation.
    pub fn code(&self, entity: usize, property: PropertyId) -> usize {
        self.codes[entity][property.0].unwrap_or_else(|| {
            panic!(
                "entity `{}` has no valid value for `{}`",
                self.entities[entity].id,
                self.schema.name(property)
            )
        })
    }

    pub fn value(&self, entity: usize, property: PropertyId) -> &str {
        &self.schema.domain(property)[self.code(entity, property)]
    }

    /// Checks every schema, entity and world invariant and lists what is broken.
    pub fn validate(&self) -> Result<(), Vec<Violation>> {
        let mut out = self.schema.violations();
        if self.entities.is_empty() {
            out.push(Violation::NoEntities);
        }

        let mut ids = HashSet::new();
        for e in &self.entities {
            if !ids.insert(e.id.as_str()) {
                out.push(Violation::DuplicateEntityId(e.id.clone()));
            }
        }

        for e in &self.entities {
            for key in e.assignment.keys() {
                if self.schema.lookup(key).is_none() {
                    out.push(Violation::UnknownProperty {
                        entity: e.id.clone(),
                        property: key.clone(),
                    });
                }
            }
            for p in self.schema.ids() {
                let name = self.schema.name(p);
                match e.assignment.get(name) {
                    None => out.push(Violation::IncompleteAssignment {
                        entity: e.id.clone(),
                        property: name.to_string(),
                    }),
                    Some(v) if self.schema.value_index(p, v).is_none() => {
                        out.push(Violation::UnknownValue {
                            entity: e.id.clone(),
                            property: name.to_string(),
                            value: v.clone(),
                        })
                    }
                    Some(_) => {}
                }
            }
        }

        let mut seen: HashMap<&[Option<usize>], usize> = HashMap::new();
        for (i, codes) in self.codes.iter().enumerate() {
            if codes.iter().any(Option::is_none) {
                continue;
            }
            if let Some(&j) = seen.get(codes.as_slice()) {
                out.push(Violation::IdenticalAssignments {
                    first: self.entities[j].id.clone(),
                    second: self.entities[i].id.clone(),
                });
            } else {
                seen.insert(codes.as_slice(), i);
            }
        }

        if out.is_empty() {
            Ok(())
        } else {
            Err(out)
        }
    }

    /// Parses a world-config document and validates the result.
    pub fn from_config_str(text: &str) -> Result<Self, WorldError> {
        let doc: WorldDoc = toml::from_str(text).map_err(|e| WorldError::Parse(e.to_string()))?;
        Self::validated(PropertySchema::new(doc.schema), doc.entities)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, WorldError> {
        let text = std::fs::read_to_string(path)?;
        Self::from_config_str(&text)
    }

    pub fn to_config_string(&self) -> Result<String, WorldError> {
        let doc = WorldDoc {
            schema: self.schema.properties.clone(),
            entities: self.entities.clone(),
        };
        toml::to_string(&doc).map_err(|e| WorldError::Serialize(e.to_string()))
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct WorldDoc {
    schema: Vec<PropertyDef>,
    #[serde(default)]
    entities: Vec<Entity>,
}

/// Free-function form of [`World::validate`].
pub fn validate_world(world: &World) -> Result<(), Vec<Violation>> {
    world.validate()
}

/// Free-function form of [`World::from_config_str`].
pub fn load_world(text: &str) -> Result<World, WorldError> {
    World::from_config_str(text)
}
