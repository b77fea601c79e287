//! Question types, the configurable question catalog, and concrete questions.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::world::{PropertyId, PropertySchema};

const DEFAULT_CATALOG: &str = include_str!("../../config/questions.toml");

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum QuestionKind {
    /// Asks for the value of a property.
    Wh,
    /// Asks whether a property has one specific value.
    Yn,
}

impl fmt::Display for QuestionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            QuestionKind::Wh => "WH",
            QuestionKind::Yn => "YN",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuestionType {
    pub name: String,
    pub kind: QuestionKind,
    pub property: String,
}

#[derive(Debug, Error)]
pub enum CatalogError {
    #[error("failed to parse question catalog: {0}")]
    Parse(String),
    #[error("question type `{0}` is listed twice")]
    Duplicate(String),
}

/// The question alphabet available to the decision node.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuestionCatalog {
    types: Vec<QuestionType>,
}

#[derive(Deserialize)]
struct CatalogDoc {
    question: Vec<QuestionType>,
}

impl QuestionCatalog {
    pub fn new(types: Vec<QuestionType>) -> Result<Self, CatalogError> {
        for (i, t) in types.iter().enumerate() {
            if types[..i].iter().any(|o| o.name == t.name) {
                return Err(CatalogError::Duplicate(t.name.clone()));
            }
        }
        Ok(Self { types })
    }

    pub fn from_toml(text: &str) -> Result<Self, CatalogError> {
        let doc: CatalogDoc =
            toml::from_str(text).map_err(|e| CatalogError::Parse(e.to_string()))?;
        Self::new(doc.question)
    }

    /// The shipped twelve-type catalog (nine WH, three YN).
    pub fn spacecraft() -> Self {
        Self::from_toml(DEFAULT_CATALOG).expect("shipped question catalog parses")
    }

    pub fn types(&self) -> &[QuestionType] {
        &self.types
    }

    /// Binds catalog entries to the properties of `schema`.
    ///
    /// Entries naming absent properties are dropped. A schema property with
    /// no WH entry gets a generic `Query:<property>` type so that every
    /// property can be asked about. The result is ordered by schema property,
    /// WH before YN, then catalog order; at most one WH type per property.
    pub fn bind(&self, schema: &PropertySchema) -> Vec<BoundQuestionType> {
        let mut out = Vec::new();
        for p in schema.ids() {
            let name = schema.name(p);
            let wh = self
                .types
                .iter()
                .find(|t| t.kind == QuestionKind::Wh && t.property == name)
                .map(|t| t.name.clone())
                .unwrap_or_else(|| format!("Query:{}", capitalize(name)));
            out.push(BoundQuestionType {
                name: wh,
                kind: QuestionKind::Wh,
                property: p,
            });
            out.extend(
                self.types
                    .iter()
                    .filter(|t| t.kind == QuestionKind::Yn && t.property == name)
                    .map(|t| BoundQuestionType {
                        name: t.name.clone(),
                        kind: QuestionKind::Yn,
                        property: p,
                    }),
            );
        }
        out
    }
}

fn capitalize(s: &str) -> String {
    let mut c = s.chars();
    match c.next() {
        Some(f) => f.to_uppercase().chain(c).collect(),
        None => String::new(),
    }
}

/// A catalog entry resolved against a concrete schema.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundQuestionType {
    pub name: String,
    pub kind: QuestionKind,
    pub property: PropertyId,
}

impl BoundQuestionType {
    /// Instantiates the type; YN types need the value being confirmed.
    pub fn instantiate(&self, schema: &PropertySchema, value: Option<&str>) -> Question {
        Question::new(&self.name, self.kind, self.property, value, schema)
    }
}

/// A question as uttered to the oracle.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Question {
    pub type_name: String,
    pub kind: QuestionKind,
    #[serde(skip)]
    pub property: PropertyId,
    #[serde(rename = "property")]
    pub property_name: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub value: Option<String>,
    pub surface: String,
}

impl Question {
    pub fn new(
        type_name: &str,
        kind: QuestionKind,
        property: PropertyId,
        value: Option<&str>,
        schema: &PropertySchema,
    ) -> Self {
        let property_name = schema.name(property).to_string();
        let value = match kind {
            QuestionKind::Wh => None,
            QuestionKind::Yn => Some(value.expect("yes/no questions carry a value").to_string()),
        };
        let surface = match &value {
            None => format!("What {property_name} is it?"),
            Some(v) => format!("Is it {v}?"),
        };
        Self {
            type_name: type_name.to_string(),
            kind,
            property,
            property_name,
            value,
            surface,
        }
    }
}

impl fmt::Display for Question {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.surface)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::world::fixtures::schema;

    #[test]
    fn shipped_catalog_has_nine_wh_and_three_yn() {
        let c = QuestionCatalog::spacecraft();
        let wh = c
            .types()
            .iter()
            .filter(|t| t.kind == QuestionKind::Wh)
            .count();
        let yn: Vec<&str> = c
            .types()
            .iter()
            .filter(|t| t.kind == QuestionKind::Yn)
            .map(|t| t.name.as_str())
            .collect();
        assert_eq!(wh, 9);
        assert_eq!(
            yn,
            vec!["Confirm:Color", "Confirm:Spatial", "Confirm:Landmark"]
        );
    }

    #[test]
    fn binding_orders_by_schema_then_kind() {
        let s = schema(&[("shape", &["a"]), ("color", &["b"]), ("weight", &["c"])]);
        let bound = QuestionCatalog::spacecraft().bind(&s);
        let names: Vec<&str> = bound.iter().map(|b| b.name.as_str()).collect();
        assert_eq!(
            names,
            vec![
                "Query:Shape",
                "Query:Color",
                "Confirm:Color",
                "Query:Weight"
            ]
        );
    }

    #[test]
    fn surfaces_follow_templates() {
        let s = schema(&[("color", &["red", "blue"])]);
        let wh = Question::new("Query:Color", QuestionKind::Wh, PropertyId(0), None, &s);
        let yn = Question::new(
            "Confirm:Color",
            QuestionKind::Yn,
            PropertyId(0),
            Some("red"),
            &s,
        );
        assert_eq!(wh.surface, "What color is it?");
        assert_eq!(yn.surface, "Is it red?");
        assert_eq!(wh.value, None);
    }

    #[test]
    fn duplicate_type_names_rejected() {
        let t = QuestionType {
            name: "Query:Color".into(),
            kind: QuestionKind::Wh,
            property: "color".into(),
        };
        assert!(QuestionCatalog::new(vec![t.clone(), t]).is_err());
    }
}
