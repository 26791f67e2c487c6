use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

/// On-disk problem document. Indices are one-based; every coefficient is an
/// expression string.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemFile {
    pub name: String,
    pub dim: usize,
    /// `null` marks brackets that are not known yet.
    #[serde(default)]
    pub brackets: Option<Vec<BracketEntry>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub omega: Option<Vec<OmegaEntry>>,
    /// Row-major `J^i_j`, row = upper index.
    #[serde(rename = "J", default, skip_serializing_if = "Option::is_none")]
    pub j: Option<Vec<String>>,
    /// Row-major reference metric to compare against `omega(X, JY)`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub metric: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub partition: Option<PartitionEntry>,
    #[serde(default)]
    pub params: Vec<ParamEntry>,
    #[serde(default)]
    pub provenance: BTreeMap<String, Provenance>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BracketEntry {
    pub i: usize,
    pub j: usize,
    pub coeffs: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OmegaEntry {
    pub i: usize,
    pub j: usize,
    pub coeff: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PartitionEntry {
    #[serde(rename = "A")]
    pub a: Vec<usize>,
    #[serde(rename = "B")]
    pub b: Vec<usize>,
    #[serde(rename = "C")]
    pub c: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParamEntry {
    pub name: String,
    #[serde(default)]
    pub nonzero: Vec<String>,
}

/// Where a piece of data came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Provenance {
    /// Copied verbatim from the published source.
    Printed,
    /// Repaired from a typographical defect in the source.
    Reconstructed,
    /// Not in the source; must be supplied from elsewhere.
    ExternalRequired,
    User,
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Provenance::Printed => "printed",
            Provenance::Reconstructed => "reconstructed",
            Provenance::ExternalRequired => "external-required",
            Provenance::User => "user",
        })
    }
}
