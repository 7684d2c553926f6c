//! The JSON instance format.
//!
//! ```json
//! {
//!   "name": "grigorchuk",
//!   "A": { "kind": "table", "elements": ["e", "b", "c", "d"], "table": [["e", "b", "c", "d"], …] },
//!   "B": { "kind": "cyclic_product", "orders": [2] },
//!   "alphabet": ["0", "1"],
//!   "action": { "0": ["0", "1"], "1": ["1", "0"] },
//!   "psi": {
//!     "0": { "kind": "hom", "map": { "e": "0", "b": "1", "c": "1", "d": "0" } },
//!     "1": { "kind": "aut", "map": { "e": "e", "b": "c", "c": "d", "d": "b" } }
//!   }
//! }
//! ```
//!
//! `action` maps each `B` label to the images of the alphabet letters, in
//! alphabet order. A `cyclic_product` group lists its elements
//! lexicographically (see [`FiniteGroup::cyclic_product`]); use a `table`
//! spec when a specific element order matters.

use std::collections::BTreeMap;
use std::path::Path;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::group::{FiniteAction, FiniteGroup, GroupError, Homomorphism};
use crate::model::{LetterMap, ModelError, MultispinalInstance};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum GroupSpec {
    CyclicProduct { orders: Vec<usize> },
    Table { elements: Vec<String>, table: Vec<Vec<String>> },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum LetterSpec {
    Aut { map: BTreeMap<String, String> },
    Hom { map: BTreeMap<String, String> },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceDocument {
    #[serde(default)]
    pub name: String,
    #[serde(rename = "A")]
    pub a: GroupSpec,
    #[serde(rename = "B")]
    pub b: GroupSpec,
    pub alphabet: Vec<String>,
    pub action: BTreeMap<String, Vec<String>>,
    pub psi: BTreeMap<String, LetterSpec>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ValidationError {
    #[error("group {group}: {source}")]
    Group { group: &'static str, source: GroupError },
    #[error("{context}: unknown label {label:?}")]
    UnknownLabel { context: String, label: String },
    #[error("{context}: no entry for {label:?}")]
    MissingEntry { context: String, label: String },
    #[error("action: {0}")]
    Action(GroupError),
    #[error("psi({letter}): {source}")]
    Letter { letter: String, source: GroupError },
    #[error(transparent)]
    Model(#[from] ModelError),
}

#[derive(Debug, Error)]
pub enum LoadError {
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("parse error: {0}")]
    Parse(#[from] serde_json::Error),
    #[error("validation error: {0}")]
    Validation(#[from] ValidationError),
}

pub fn load_instance(path: impl AsRef<Path>) -> Result<MultispinalInstance, LoadError> {
    let path = path.as_ref();
    let text =
        std::fs::read_to_string(path).map_err(|source| LoadError::Io { path: path.display().to_string(), source })?;
    load_str(&text)
}

pub fn load_str(text: &str) -> Result<MultispinalInstance, LoadError> {
    let doc: InstanceDocument = serde_json::from_str(text)?;
    Ok(doc.validate()?)
}

fn unknown(context: impl Into<String>, label: &str) -> ValidationError {
    ValidationError::UnknownLabel { context: context.into(), label: label.to_string() }
}

fn missing(context: impl Into<String>, label: &str) -> ValidationError {
    ValidationError::MissingEntry { context: context.into(), label: label.to_string() }
}

impl GroupSpec {
    fn build(&self, group: &'static str) -> Result<FiniteGroup, ValidationError> {
        let wrap = |source| ValidationError::Group { group, source };
        match self {
            GroupSpec::CyclicProduct { orders } => FiniteGroup::cyclic_product(orders).map_err(wrap),
            GroupSpec::Table { elements, table } => {
                let index = |l: &String| {
                    elements.iter().position(|e| e == l).ok_or_else(|| unknown(format!("group {group} table"), l))
                };
                let rows = table
                    .iter()
                    .map(|row| row.iter().map(index).collect::<Result<Vec<_>, _>>())
                    .collect::<Result<Vec<_>, _>>()?;
                FiniteGroup::validate(elements.clone(), rows).map_err(wrap)
            }
        }
    }

    fn from_group(g: &FiniteGroup) -> Self {
        let table =
            g.table().into_iter().map(|row| row.into_iter().map(|k| g.label(k).to_string()).collect()).collect();
        GroupSpec::Table { elements: g.labels().to_vec(), table }
    }
}

/// Resolves a label-keyed map over every element of `source` into an index map.
fn resolve_map(
    context: &str,
    map: &BTreeMap<String, String>,
    source: &FiniteGroup,
    target: &FiniteGroup,
) -> Result<Vec<usize>, ValidationError> {
    if let Some(k) = map.keys().find(|k| source.index_of(k).is_none()) {
        return Err(unknown(context, k));
    }
    source
        .labels()
        .iter()
        .map(|l| {
            let v = map.get(l).ok_or_else(|| missing(context, l))?;
            target.index_of(v).ok_or_else(|| unknown(context, v))
        })
        .collect()
}

impl InstanceDocument {
    pub fn validate(&self) -> Result<MultispinalInstance, ValidationError> {
        let a = Arc::new(self.a.build("A")?);
        let b = Arc::new(self.b.build("B")?);

        if let Some(k) = self.action.keys().find(|k| b.index_of(k).is_none()) {
            return Err(unknown("action", k));
        }
        let perms = b
            .labels()
            .iter()
            .map(|l| {
                let images = self.action.get(l).ok_or_else(|| missing("action", l))?;
                images
                    .iter()
                    .map(|x| self.alphabet.iter().position(|y| y == x).ok_or_else(|| unknown("action", x)))
                    .collect::<Result<Vec<_>, _>>()
            })
            .collect::<Result<Vec<_>, _>>()?;
        let action = FiniteAction::validate(&b, self.alphabet.clone(), perms).map_err(ValidationError::Action)?;

        if let Some(k) = self.psi.keys().find(|k| !self.alphabet.contains(k)) {
            return Err(unknown("psi", k));
        }
        let psi = self
            .alphabet
            .iter()
            .map(|letter| {
                let spec = self.psi.get(letter).ok_or_else(|| missing("psi", letter))?;
                let context = format!("psi({letter})");
                let wrap = |source| ValidationError::Letter { letter: letter.clone(), source };
                Ok(match spec {
                    LetterSpec::Aut { map } => {
                        let m = resolve_map(&context, map, &a, &a)?;
                        LetterMap::Aut(Homomorphism::new(&a, &a, m).map_err(wrap)?)
                    }
                    LetterSpec::Hom { map } => {
                        let m = resolve_map(&context, map, &a, &b)?;
                        LetterMap::Hom(Homomorphism::new(&a, &b, m).map_err(wrap)?)
                    }
                })
            })
            .collect::<Result<Vec<_>, ValidationError>>()?;

        Ok(MultispinalInstance::build(a, b, action, psi)?.with_name(self.name.clone()))
    }

    /// The document of a validated instance, with both groups as tables.
    pub fn from_instance(inst: &MultispinalInstance) -> Self {
        let a = inst.group_a();
        let b = inst.group_b();
        let alphabet = inst.alphabet().to_vec();
        let action = b
            .elements()
            .map(|g| {
                let images = (0..alphabet.len()).map(|x| alphabet[inst.action().act(g, x)].clone()).collect();
                (b.label(g).to_string(), images)
            })
            .collect();
        let psi = inst
            .psi_maps()
            .iter()
            .enumerate()
            .map(|(x, m)| {
                let target = if m.is_hom() { b } else { a };
                let map = a
                    .elements()
                    .map(|g| (a.label(g).to_string(), target.label(m.map().apply(g)).to_string()))
                    .collect();
                let spec = if m.is_hom() { LetterSpec::Hom { map } } else { LetterSpec::Aut { map } };
                (alphabet[x].clone(), spec)
            })
            .collect();
        InstanceDocument {
            name: inst.name().to_string(),
            a: GroupSpec::from_group(a),
            b: GroupSpec::from_group(b),
            alphabet,
            action,
            psi,
        }
    }
}
