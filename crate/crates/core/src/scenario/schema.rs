use serde::{Deserialize, Serialize};

use super::file::RolesSpec;
use super::{Scenario, ScenarioError, SchemaType};
use crate::confirmation::{
    check_transitivity_with, confirm, ConditionCheck, ConfirmationVerdict, Strictness,
    CONCLUSION_RELATION,
};
use crate::prob::{DistributionRecord, JointDistribution, DEFAULT_EXTREMALITY_EPSILON};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SchemaCondition {
    pub label: String,
    pub statement: String,
    #[serde(flatten)]
    pub check: ConditionCheck,
}

/// Whether the analogy licenses the conclusion through the bridge.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum AnalogicalVerdict {
    /// All four conditions hold and the bridge is uncertain.
    Established,
    /// Some condition fails or is inapplicable.
    Withheld { failing: Vec<String> },
    /// The bridge has credence 0 or 1, so there is no analogical channel.
    Degenerate,
}

impl AnalogicalVerdict {
    pub fn is_established(&self) -> bool {
        matches!(self, AnalogicalVerdict::Established)
    }

    pub fn status(&self) -> &'static str {
        match self {
            AnalogicalVerdict::Established => "established",
            AnalogicalVerdict::Withheld { .. } => "withheld",
            AnalogicalVerdict::Degenerate => "degenerate",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SchemaReport {
    pub scenario: String,
    pub schema: SchemaType,
    pub roles: RolesSpec,
    pub conditions: Vec<SchemaCondition>,
    pub bridge_prior: f64,
    /// Direct verdict for evidence → hypothesis; absent if `P(evidence) = 0`.
    pub overall: Option<ConfirmationVerdict>,
    pub analogical: AnalogicalVerdict,
    /// Roles whose credence is 0 or 1.
    pub extremal_roles: Vec<String>,
    /// An established analogy comes with a positive direct degree.
    pub coherent: bool,
    pub conclusion_relation: String,
    pub distribution: DistributionRecord,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub baseline: Option<f64>,
}

fn wrap(text: &str) -> String {
    if text.contains(['&', '|']) {
        format!("({text})")
    } else {
        text.to_string()
    }
}

fn negate(text: &str) -> String {
    if text.contains(['&', '|', '!']) {
        format!("!({text})")
    } else {
        format!("!{text}")
    }
}

/// Human-readable form of the four conditions with the roles substituted.
pub(crate) fn statements(roles: &RolesSpec) -> [String; 4] {
    let (h, e, b) = (
        wrap(&roles.hypothesis),
        wrap(&roles.evidence),
        wrap(&roles.bridge),
    );
    let nb = negate(&roles.bridge);
    [
        format!("P({h} | {b}) > P({h})"),
        format!("P({e} | {b}) > P({e} | {nb})"),
        format!("P({h} | {b} & {e}) >= P({h} | {b})"),
        format!("P({h} | {nb} & {e}) >= P({h} | {nb})"),
    ]
}

/// Evaluate the four schema conditions and the direct verdict on `dist`.
///
/// The conditions are the transitivity conditions with evidence, bridge and
/// hypothesis in the roles of X, Y and Z.
pub fn evaluate_schema(
    scenario: &Scenario,
    dist: &JointDistribution,
    strictness: Strictness,
) -> Result<SchemaReport, ScenarioError> {
    let r = scenario.roles();
    let report = check_transitivity_with(dist, &r.evidence, &r.bridge, &r.hypothesis, strictness)?;
    let roles_spec = scenario.file().roles.clone();
    let stmts = statements(&roles_spec);
    let checks = [
        &report.cond_i,
        &report.cond_ii,
        &report.cond_iii,
        &report.cond_iv,
    ];
    let conditions: Vec<SchemaCondition> = (0..4)
        .map(|i| SchemaCondition {
            label: scenario.labels()[i].clone(),
            statement: stmts[i].clone(),
            check: checks[i].clone(),
        })
        .collect();

    let bridge_prior = dist.probability(&r.bridge)?;
    let overall = match confirm(dist, &r.evidence, &r.hypothesis, strictness.margin) {
        Ok(v) => Some(v),
        Err(e) if e.is_undefined_conditional() => None,
        Err(e) => return Err(e.into()),
    };

    let mut extremal_roles = Vec::new();
    for (name, p) in [
        ("hypothesis", &r.hypothesis),
        ("evidence", &r.evidence),
        ("bridge", &r.bridge),
    ] {
        if !dist.is_non_extremal(p, DEFAULT_EXTREMALITY_EPSILON)? {
            extremal_roles.push(name.to_string());
        }
    }

    let analogical = if extremal_roles.iter().any(|n| n == "bridge") {
        AnalogicalVerdict::Degenerate
    } else {
        let failing: Vec<String> = conditions
            .iter()
            .filter(|c| !c.check.established())
            .map(|c| c.label.clone())
            .collect();
        if failing.is_empty() {
            AnalogicalVerdict::Established
        } else {
            AnalogicalVerdict::Withheld { failing }
        }
    };
    let coherent = !analogical.is_established() || overall.as_ref().is_some_and(|v| v.degree > 0.0);

    Ok(SchemaReport {
        scenario: scenario.name().to_string(),
        schema: scenario.schema(),
        roles: roles_spec,
        conditions,
        bridge_prior,
        overall,
        analogical,
        extremal_roles,
        coherent,
        conclusion_relation: CONCLUSION_RELATION.to_string(),
        distribution: DistributionRecord::from(dist),
        baseline: scenario.baseline_value(),
    })
}
