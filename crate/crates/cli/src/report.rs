//! JSON report types. Timings are deliberately absent so that reruns with
//! the same configuration serialize byte for byte.

use analogic_core::confirmation::{ConfirmationVerdict, FuzzSummary, TransitivityReport};
use analogic_core::model::ConstraintOutcome;
use analogic_core::prob::DistributionRecord;
use analogic_core::scenario::{ExtensionSummary, SchemaReport, SweepRow};
use serde::{Deserialize, Serialize};

pub const REPORT_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunReport<R> {
    pub version: u32,
    pub command: String,
    pub config: RunConfig,
    pub results: R,
}

impl<R> RunReport<R> {
    pub fn new(command: &str, config: RunConfig, results: R) -> Self {
        RunReport {
            version: REPORT_VERSION,
            command: command.to_string(),
            config,
            results,
        }
    }
}

/// Everything needed to rerun the command. Unset fields took their defaults
/// from the scenario file.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub input: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub margin: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weak_tolerance: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub samples: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub budget: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_samples: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub events: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub param: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub range: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckResult {
    /// Seed of the solve that produced the distribution, if one ran.
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub extension: Option<ExtensionSummary>,
    pub report: SchemaReport,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FuzzResult {
    pub suite: String,
    pub conclusion_relation: String,
    pub summary: FuzzSummary,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CounterexampleResult {
    pub sample_index: u64,
    pub distribution: DistributionRecord,
    pub a_confirms_b: ConfirmationVerdict,
    pub b_confirms_c: ConfirmationVerdict,
    pub a_confirms_c: ConfirmationVerdict,
    /// Transitivity conditions with X = A, Y = B, Z = C.
    pub transitivity: TransitivityReport,
    pub failing_conditions: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StageRecord {
    /// `base` or `extension`.
    pub stage: String,
    pub seed: u64,
    pub penalty: f64,
    pub samples_used: u64,
    /// `None` when the model came from the grid seed.
    pub winning_sample: Option<u64>,
    pub refined: bool,
    pub outcomes: Vec<ConstraintOutcome>,
    pub distribution: DistributionRecord,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FindModelResult {
    pub scenario: String,
    pub stages: Vec<StageRecord>,
    pub distribution: DistributionRecord,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepResult {
    pub scenario: String,
    pub labels: [String; 4],
    pub output: String,
    pub rows: Vec<SweepRow>,
}
