use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::CurveSpec;
use crate::classify::Verdict;
use crate::local::SingularityTypeClaim;

pub const CATALOG_SCHEMA: &str = "freecurve-catalog/1";

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum CatalogError {
    #[error("catalog is not valid JSON: {0}")]
    Json(String),
    #[error("unsupported catalog schema '{0}'")]
    Schema(String),
    #[error("duplicate entry id '{0}'")]
    DuplicateId(String),
    #[error("entry '{entry}' refers to unknown entry '{base}'")]
    UnknownBase { entry: String, base: String },
}

/// A claimed singular point.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PointClaim {
    pub point: String,
    #[serde(flatten)]
    pub claim: SingularityTypeClaim,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NonModularClaim {
    pub point: String,
    /// A line through the point that meets the curve badly.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

/// The curve is `base · line`, where `base` is another catalog entry.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AddedLine {
    pub base: String,
    pub line: String,
    /// Whether the line-addition predicate applies and predicts `mdr`.
    pub predicted: bool,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Expected {
    pub degree: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mdr: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tau: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub verdict: Option<Verdict>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub maximizing: Option<bool>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub modular_points: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub non_modular: Vec<NonModularClaim>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub added_line: Option<AddedLine>,
}

fn yes() -> bool {
    true
}

fn is_true(b: &bool) -> bool {
    *b
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CatalogEntry {
    pub id: String,
    /// The statement being checked, in words.
    pub claim: String,
    #[serde(flatten)]
    pub spec: CurveSpec,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub singular_points: Vec<PointClaim>,
    /// Whether `singular_points` lists every singular point; then the local
    /// Tjurina numbers must add up to the global one.
    #[serde(default = "yes", skip_serializing_if = "is_true")]
    pub singular_points_complete: bool,
    pub expected: Expected,
}

impl CatalogEntry {
    pub fn family(&self) -> &'static str {
        self.spec.recipe.family()
    }
}

#[derive(Deserialize)]
struct CatalogFile {
    schema: String,
    entries: Vec<CatalogEntry>,
}

pub fn load_catalog(text: &str) -> Result<Vec<CatalogEntry>, CatalogError> {
    let file: CatalogFile = serde_json::from_str(text).map_err(|e| CatalogError::Json(e.to_string()))?;
    if file.schema != CATALOG_SCHEMA {
        return Err(CatalogError::Schema(file.schema));
    }
    let mut seen = BTreeSet::new();
    for e in &file.entries {
        if !seen.insert(e.id.clone()) {
            return Err(CatalogError::DuplicateId(e.id.clone()));
        }
    }
    for e in &file.entries {
        if let Some(a) = &e.expected.added_line {
            if !seen.contains(&a.base) {
                return Err(CatalogError::UnknownBase {
                    entry: e.id.clone(),
                    base: a.base.clone(),
                });
            }
        }
    }
    Ok(file.entries)
}
