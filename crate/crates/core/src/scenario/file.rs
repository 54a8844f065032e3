//! On-disk scenario format. These types mirror the JSON one to one; meaning is
//! attached when a [`super::Scenario`] is built from them.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::SchemaType;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub title: Option<String>,
    pub atoms: Vec<String>,
    pub schema: SchemaType,
    /// Names for the four schema conditions; defaults depend on the schema.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<[String; 4]>,
    pub roles: RolesSpec,
    pub distribution: DistributionSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub extension: Option<ExtensionSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub baseline: Option<BaselineSpec>,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub notes: String,
}

/// Formula strings for each role.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RolesSpec {
    pub hypothesis: String,
    pub evidence: String,
    pub bridge: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum DistributionSpec {
    Weights { weights: Vec<f64> },
    Constraints(ConstraintBlock),
}

/// Constraints to be solved by the model finder.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConstraintBlock {
    pub constraints: Vec<ConstraintEntry>,
    /// Margins by constraint label; these win over inline margins.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub margins: BTreeMap<String, f64>,
    #[serde(default = "default_seed")]
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_samples: Option<u64>,
}

fn default_seed() -> u64 {
    1
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ConstraintEntry {
    /// One of the four schema conditions, by label, with the roles substituted.
    Condition {
        condition: String,
        #[serde(default, skip_serializing_if = "is_false")]
        reversed: bool,
        /// Also require the two sides to agree within `tolerance`.
        #[serde(default, skip_serializing_if = "is_false")]
        equality: bool,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        tolerance: Option<f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        margin: Option<f64>,
    },
    /// `margin < P(target) < 1 - margin`.
    NonExtremal {
        non_extremal: String,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        margin: Option<f64>,
    },
    General(GeneralConstraint),
}

fn is_false(b: &bool) -> bool {
    !*b
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeneralConstraint {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    pub kind: crate::model::ConstraintKind,
    pub lhs: TermSpec,
    pub rhs: TermSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub margin: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum TermSpec {
    Const(f64),
    Prob {
        target: String,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        given: Option<String>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        offset: Option<f64>,
    },
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExtensionMode {
    /// Keep every joint marginal over the old atoms.
    #[default]
    Conservative,
    /// Re-solve the whole extended distribution.
    Revisionary,
}

/// Append a bridge atom to the solved base distribution.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExtensionSpec {
    pub atom: String,
    pub prior: f64,
    #[serde(default)]
    pub mode: ExtensionMode,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub constraints: Vec<ConstraintEntry>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub margins: BTreeMap<String, f64>,
    #[serde(default = "default_seed")]
    pub seed: u64,
}

/// Inputs to the symmetry-transfer baseline.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BaselineSpec {
    pub source_quotient: f64,
    pub delta: f64,
}
