//! Incremental confirmation, the transitivity conditions and their corollary,
//! plus search for failures of naive transitivity.

mod fuzz;
mod miner;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::prob::{
    entails, JointDistribution, ProbError, Proposition, DEFAULT_EXTREMALITY_EPSILON,
};

pub use fuzz::{fuzz_corollary, fuzz_theorem, EventMode, FuzzConfig, FuzzSummary};
pub use miner::{
    mine_naive_transitivity_counterexample, mine_with, Counterexample, MinerThresholds,
};

/// Tolerance for the `≥` conditions. Float noise at exact equality must not
/// read as a failure.
pub const DEFAULT_WEAK_TOLERANCE: f64 = 1e-12;

/// The relation the conclusion of the transitivity check is judged against.
pub const CONCLUSION_RELATION: &str = "P(Z|X) > P(Z)";

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConfirmationError {
    #[error(transparent)]
    Prob(#[from] ProbError),
    #[error("corollary requires Y to entail Z")]
    NotEntailed,
    #[error("no counterexample within a budget of {budget} samples; try a larger budget")]
    NotFound { budget: u64 },
}

/// Outcome of asking whether evidence confirms a hypothesis.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConfirmationVerdict {
    pub confirms: bool,
    /// Difference measure `P(h|e) - P(h)`.
    pub degree: f64,
    pub margin: f64,
    /// Named confirmation measures; only finite values are recorded.
    pub measures: BTreeMap<String, f64>,
}

pub fn confirm(
    dist: &JointDistribution,
    evidence: &Proposition,
    hypothesis: &Proposition,
    margin: f64,
) -> Result<ConfirmationVerdict, ProbError> {
    let prior = dist.probability(hypothesis)?;
    let posterior = dist.conditional(hypothesis, evidence)?;
    let degree = posterior - prior;

    let mut measures = BTreeMap::new();
    measures.insert("difference".to_string(), degree);
    let log_ratio = (posterior / prior).ln();
    if log_ratio.is_finite() {
        measures.insert("log_ratio".to_string(), log_ratio);
    }
    if let (Ok(given_h), Ok(given_not_h)) = (
        dist.conditional(evidence, hypothesis),
        dist.conditional(evidence, &hypothesis.not()),
    ) {
        let llr = (given_h / given_not_h).ln();
        if llr.is_finite() {
            measures.insert("log_likelihood_ratio".to_string(), llr);
        }
    }

    Ok(ConfirmationVerdict {
        confirms: degree > margin,
        degree,
        margin,
        measures,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Relation {
    /// Holds when the margin exceeds the strictness margin.
    Greater,
    /// Holds when the margin is at least `-weak_tolerance`.
    AtLeast,
}

/// Thresholds used when judging condition margins.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Strictness {
    pub margin: f64,
    pub weak_tolerance: f64,
}

impl Default for Strictness {
    fn default() -> Self {
        Strictness {
            margin: 0.0,
            weak_tolerance: DEFAULT_WEAK_TOLERANCE,
        }
    }
}

impl Strictness {
    pub fn with_margin(margin: f64) -> Self {
        Strictness {
            margin,
            ..Self::default()
        }
    }
}

/// One inequality between probabilities, evaluated on a distribution.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConditionCheck {
    pub relation: Relation,
    pub applicable: bool,
    pub holds: bool,
    /// `lhs - rhs`; absent when a conditional is undefined.
    pub margin: Option<f64>,
    /// A `≥` condition sitting at equality (within the weak tolerance).
    pub at_boundary: bool,
}

impl ConditionCheck {
    /// Judge `value`. Undefined conditionals become an inapplicable check;
    /// structural errors propagate.
    pub fn judge(
        relation: Relation,
        value: Result<f64, ProbError>,
        strictness: Strictness,
    ) -> Result<Self, ProbError> {
        match value {
            Ok(m) => {
                let (holds, at_boundary) = match relation {
                    Relation::Greater => (m > strictness.margin, false),
                    Relation::AtLeast => (
                        m >= -strictness.weak_tolerance,
                        m.abs() <= strictness.weak_tolerance,
                    ),
                };
                Ok(ConditionCheck {
                    relation,
                    applicable: true,
                    holds,
                    margin: Some(m),
                    at_boundary,
                })
            }
            Err(ProbError::UndefinedConditional) => Ok(ConditionCheck {
                relation,
                applicable: false,
                holds: false,
                margin: None,
                at_boundary: false,
            }),
            Err(e) => Err(e),
        }
    }

    pub fn established(&self) -> bool {
        self.applicable && self.holds
    }
}

/// Margins of the four transitivity conditions for `(X, Y, Z)`:
///
/// * (i)   `P(Z|Y) - P(Z)`
/// * (ii)  `P(X|Y) - P(X|!Y)`
/// * (iii) `P(Z|X&Y) - P(Z|Y)`
/// * (iv)  `P(Z|X&!Y) - P(Z|!Y)`
///
/// and the conclusion `P(Z|X) - P(Z)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TransitivityReport {
    pub cond_i: ConditionCheck,
    pub cond_ii: ConditionCheck,
    pub cond_iii: ConditionCheck,
    pub cond_iv: ConditionCheck,
    pub conclusion: ConditionCheck,
    pub corollary_mode: bool,
    /// X, Y and Z all have credence strictly between ε and 1 - ε.
    pub non_extremal: bool,
    /// Every decision-relevant condition holds, so the conclusion is claimed.
    pub antecedent_holds: bool,
    pub conclusion_relation: String,
}

impl TransitivityReport {
    pub fn conditions(&self) -> [(&'static str, &ConditionCheck); 4] {
        [
            ("i", &self.cond_i),
            ("ii", &self.cond_ii),
            ("iii", &self.cond_iii),
            ("iv", &self.cond_iv),
        ]
    }

    fn decision_relevant(&self) -> Vec<(&'static str, &ConditionCheck)> {
        self.conditions()
            .into_iter()
            .filter(|(name, _)| !self.corollary_mode || *name == "ii" || *name == "iv")
            .collect()
    }

    /// Decision-relevant conditions that are inapplicable or fail.
    pub fn failing_conditions(&self) -> Vec<&'static str> {
        self.decision_relevant()
            .into_iter()
            .filter(|(_, c)| !c.established())
            .map(|(n, _)| n)
            .collect()
    }

    /// Weak conditions that hold only at equality.
    pub fn boundary_conditions(&self) -> Vec<&'static str> {
        self.conditions()
            .into_iter()
            .filter(|(_, c)| c.at_boundary)
            .map(|(n, _)| n)
            .collect()
    }

    /// The theorem's claim is violated: antecedent established, conclusion not.
    pub fn is_violation(&self) -> bool {
        self.antecedent_holds && !self.conclusion.established()
    }
}

pub fn check_transitivity(
    dist: &JointDistribution,
    x: &Proposition,
    y: &Proposition,
    z: &Proposition,
    margin: f64,
) -> Result<TransitivityReport, ProbError> {
    check_transitivity_with(dist, x, y, z, Strictness::with_margin(margin))
}

pub fn check_transitivity_with(
    dist: &JointDistribution,
    x: &Proposition,
    y: &Proposition,
    z: &Proposition,
    strictness: Strictness,
) -> Result<TransitivityReport, ProbError> {
    build_report(dist, x, y, z, strictness, false)
}

/// The limiting case where `y` entails `z`: only (ii) and (iv) decide.
pub fn check_corollary(
    dist: &JointDistribution,
    x: &Proposition,
    y: &Proposition,
    z: &Proposition,
    margin: f64,
) -> Result<TransitivityReport, ConfirmationError> {
    if !entails(y, z)? {
        return Err(ConfirmationError::NotEntailed);
    }
    Ok(build_report(
        dist,
        x,
        y,
        z,
        Strictness::with_margin(margin),
        true,
    )?)
}

fn build_report(
    dist: &JointDistribution,
    x: &Proposition,
    y: &Proposition,
    z: &Proposition,
    strictness: Strictness,
    corollary_mode: bool,
) -> Result<TransitivityReport, ProbError> {
    x.check_space(y)?;
    x.check_space(z)?;
    let not_y = y.not();
    let x_and_y = x.and(y)?;
    let x_and_not_y = x.and(&not_y)?;
    let p_z = dist.probability(z)?;

    let cond_i = ConditionCheck::judge(
        Relation::Greater,
        dist.conditional(z, y).map(|v| v - p_z),
        strictness,
    )?;
    let cond_ii = ConditionCheck::judge(
        Relation::Greater,
        diff(dist.conditional(x, y), dist.conditional(x, &not_y)),
        strictness,
    )?;
    let cond_iii = ConditionCheck::judge(
        Relation::AtLeast,
        diff(dist.conditional(z, &x_and_y), dist.conditional(z, y)),
        strictness,
    )?;
    let cond_iv = ConditionCheck::judge(
        Relation::AtLeast,
        diff(
            dist.conditional(z, &x_and_not_y),
            dist.conditional(z, &not_y),
        ),
        strictness,
    )?;
    let conclusion = ConditionCheck::judge(
        Relation::Greater,
        dist.conditional(z, x).map(|v| v - p_z),
        Strictness::default(),
    )?;

    let eps = DEFAULT_EXTREMALITY_EPSILON;
    let non_extremal = dist.is_non_extremal(x, eps)?
        && dist.is_non_extremal(y, eps)?
        && dist.is_non_extremal(z, eps)?;

    let mut report = TransitivityReport {
        cond_i,
        cond_ii,
        cond_iii,
        cond_iv,
        conclusion,
        corollary_mode,
        non_extremal,
        antecedent_holds: false,
        conclusion_relation: CONCLUSION_RELATION.to_string(),
    };
    report.antecedent_holds = non_extremal && report.failing_conditions().is_empty();
    Ok(report)
}

fn diff(a: Result<f64, ProbError>, b: Result<f64, ProbError>) -> Result<f64, ProbError> {
    Ok(a? - b?)
}
