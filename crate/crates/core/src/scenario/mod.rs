//! Analogy schemas, the case-study corpus, bridge extension, the symmetry
//! baseline and parameter sweeps.

mod baseline;
mod bridge;
mod build;
mod corpus;
pub mod file;
mod schema;
mod sweep;

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exec::Execution;
use crate::model::{ConstraintSet, Model, SearchConfig, SearchError};
use crate::prob::{JointDistribution, ProbError, Proposition, SpaceRef, WorldSpace};

pub use baseline::{euler_characteristic, symmetry_baseline, Solid, PLATONIC_SOLIDS};
pub use bridge::{extend_with_bridge, BridgeSpec, Extension, ExtensionSummary, MARGINAL_TOLERANCE};
pub use build::{DEFAULT_EQUALITY_TOLERANCE, DEFAULT_NON_EXTREMAL_MARGIN, DEFAULT_STRICT_MARGIN};
pub use corpus::{corpus_names, entailing_variant, load_corpus, load_corpus_dir, CORPUS_SIZE};
pub use file::{ExtensionMode, ScenarioFile};
pub use schema::{evaluate_schema, AnalogicalVerdict, SchemaCondition, SchemaReport};
pub use sweep::{sweep, RowStatus, SweepParam, SweepRange, SweepRow};

use build::Builder;
use file::{BaselineSpec, DistributionSpec};

#[derive(Debug, Clone, Error)]
pub enum ScenarioError {
    #[error("{file}: {message}")]
    Io { file: String, message: String },
    #[error("{file}: {message}")]
    Json { file: String, message: String },
    #[error("{file}: field `{field}`: {message}")]
    Field {
        file: String,
        field: String,
        message: String,
    },
    #[error("{0}")]
    Invalid(String),
    #[error(transparent)]
    Prob(#[from] ProbError),
    #[error(transparent)]
    Search(#[from] SearchError),
}

impl ScenarioError {
    pub(crate) fn field(file: &str, field: impl Into<String>, message: impl Into<String>) -> Self {
        ScenarioError::Field {
            file: file.to_string(),
            field: field.into(),
            message: message.into(),
        }
    }
}

/// Direction of the analogical inference.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SchemaType {
    /// A source result bears on a target conjecture through a bridge that
    /// links the domains.
    Type1,
    /// An observed similarity of results points to a hidden common ground.
    Type2,
}

impl SchemaType {
    pub fn default_labels(self) -> [String; 4] {
        let l = match self {
            SchemaType::Type1 => ["a", "b", "c", "d"],
            SchemaType::Type2 => ["e", "f", "g", "h"],
        };
        l.map(str::to_string)
    }

    pub fn direction(self) -> &'static str {
        match self {
            SchemaType::Type1 => "methods to results",
            SchemaType::Type2 => "results to methods",
        }
    }
}

impl fmt::Display for SchemaType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SchemaType::Type1 => "type1",
            SchemaType::Type2 => "type2",
        })
    }
}

/// The three role propositions over the scenario's final space.
#[derive(Clone, Debug)]
pub struct Roles {
    pub hypothesis: Proposition,
    pub evidence: Proposition,
    pub bridge: Proposition,
}

fn parse_roles(
    file: &str,
    space: &SpaceRef,
    spec: &file::RolesSpec,
) -> Result<Roles, ScenarioError> {
    let parse = |field: &str, text: &str| {
        Proposition::parse(space, text).map_err(|e| {
            ScenarioError::field(
                file,
                format!("roles.{field}"),
                format!("formula `{text}`: {e}"),
            )
        })
    };
    Ok(Roles {
        hypothesis: parse("hypothesis", &spec.hypothesis)?,
        evidence: parse("evidence", &spec.evidence)?,
        bridge: parse("bridge", &spec.bridge)?,
    })
}

#[derive(Clone, Debug)]
enum Base {
    Weights(JointDistribution),
    Solve {
        constraints: ConstraintSet,
        seed: u64,
        max_samples: Option<u64>,
    },
}

#[derive(Clone, Debug)]
struct ExtensionPlan {
    atom: String,
    prior: f64,
    mode: ExtensionMode,
    constraints: Option<ConstraintSet>,
    seed: u64,
}

/// A validated scenario.
#[derive(Clone, Debug)]
pub struct Scenario {
    source: String,
    file: ScenarioFile,
    base_space: SpaceRef,
    space: SpaceRef,
    roles: Roles,
    labels: [String; 4],
    base: Base,
    extension: Option<ExtensionPlan>,
}

/// Knobs shared by everything that solves a scenario.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolveOptions {
    /// Replaces every seed in the file.
    pub seed: Option<u64>,
    pub max_samples: Option<u64>,
    pub execution: Execution,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            seed: None,
            max_samples: None,
            execution: Execution::Parallel,
        }
    }
}

/// A scenario's concrete distribution and how it was obtained.
#[derive(Clone, Debug)]
pub struct Solved {
    pub distribution: JointDistribution,
    pub base_model: Option<Model>,
    pub extension: Option<Extension>,
    /// Seed of the base solve, if one ran.
    pub base_seed: Option<u64>,
    /// Seed of the extension search, if one ran.
    pub extension_seed: Option<u64>,
}

impl Scenario {
    pub fn from_json_str(text: &str, source: &str) -> Result<Scenario, ScenarioError> {
        let de = &mut serde_json::Deserializer::from_str(text);
        let file: ScenarioFile = serde_path_to_error::deserialize(de).map_err(|e| {
            let path = e.path().to_string();
            let message = if path == "." {
                e.inner().to_string()
            } else {
                format!("at `{path}`: {}", e.inner())
            };
            ScenarioError::Json {
                file: source.to_string(),
                message,
            }
        })?;
        Scenario::from_file(file, source)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Scenario, ScenarioError> {
        let path = path.as_ref();
        let name = path.display().to_string();
        let text = std::fs::read_to_string(path).map_err(|e| ScenarioError::Io {
            file: name.clone(),
            message: e.to_string(),
        })?;
        Scenario::from_json_str(&text, &name)
    }

    pub fn from_file(file: ScenarioFile, source: &str) -> Result<Scenario, ScenarioError> {
        let f = |field: &str, message: String| ScenarioError::field(source, field, message);
        if file.name.trim().is_empty() {
            return Err(f("name", "must be nonempty".into()));
        }
        let base_space =
            WorldSpace::new(file.atoms.iter().cloned()).map_err(|e| f("atoms", e.to_string()))?;
        let space = match &file.extension {
            Some(x) => base_space
                .extended(&x.atom)
                .map_err(|e| f("extension.atom", e.to_string()))?,
            None => base_space.clone(),
        };
        let roles = parse_roles(source, &space, &file.roles)?;
        let distinct = [
            (&roles.hypothesis, &roles.evidence),
            (&roles.hypothesis, &roles.bridge),
            (&roles.evidence, &roles.bridge),
        ];
        if distinct.iter().any(|(a, b)| a == b) {
            return Err(f(
                "roles",
                "hypothesis, evidence and bridge must be distinct propositions".into(),
            ));
        }
        let labels = file
            .labels
            .clone()
            .unwrap_or_else(|| file.schema.default_labels());
        for i in 0..4 {
            if labels[i].is_empty() || labels[..i].contains(&labels[i]) {
                return Err(f(
                    "labels",
                    format!("labels must be nonempty and distinct, got {labels:?}"),
                ));
            }
        }
        let base_roles = if file.extension.is_some() {
            parse_roles(source, &base_space, &file.roles).ok()
        } else {
            Some(roles.clone())
        };

        let base = match &file.distribution {
            DistributionSpec::Weights { weights } => Base::Weights(
                JointDistribution::new(&base_space, weights.clone())
                    .map_err(|e| f("distribution.weights", e.to_string()))?,
            ),
            DistributionSpec::Constraints(block) => {
                let constraints = Builder {
                    file: source,
                    field: "distribution.constraints",
                    space: &base_space,
                    roles: base_roles.as_ref(),
                    labels: &labels,
                    margins: &block.margins,
                }
                .build(&block.constraints)?;
                Base::Solve {
                    constraints,
                    seed: block.seed,
                    max_samples: block.max_samples,
                }
            }
        };

        let extension = match &file.extension {
            None => None,
            Some(x) => {
                if !(0.0..=1.0).contains(&x.prior) {
                    return Err(f("extension.prior", format!("{} outside [0, 1]", x.prior)));
                }
                let constraints = if x.constraints.is_empty() {
                    if !x.margins.is_empty() {
                        return Err(f(
                            "extension.margins",
                            "margins given without constraints".into(),
                        ));
                    }
                    None
                } else {
                    Some(
                        Builder {
                            file: source,
                            field: "extension.constraints",
                            space: &space,
                            roles: Some(&roles),
                            labels: &labels,
                            margins: &x.margins,
                        }
                        .build(&x.constraints)?,
                    )
                };
                Some(ExtensionPlan {
                    atom: x.atom.clone(),
                    prior: x.prior,
                    mode: x.mode,
                    constraints,
                    seed: x.seed,
                })
            }
        };

        if let Some(BaselineSpec {
            source_quotient,
            delta,
        }) = file.baseline
        {
            symmetry_baseline(source_quotient, delta).map_err(|e| f("baseline", e.to_string()))?;
        }

        Ok(Scenario {
            source: source.to_string(),
            file,
            base_space,
            space,
            roles,
            labels,
            base,
            extension,
        })
    }

    pub fn name(&self) -> &str {
        &self.file.name
    }

    pub fn source(&self) -> &str {
        &self.source
    }

    pub fn file(&self) -> &ScenarioFile {
        &self.file
    }

    pub fn schema(&self) -> SchemaType {
        self.file.schema
    }

    /// Space of the evaluated distribution, bridge extension included.
    pub fn space(&self) -> &SpaceRef {
        &self.space
    }

    pub fn base_space(&self) -> &SpaceRef {
        &self.base_space
    }

    pub fn roles(&self) -> &Roles {
        &self.roles
    }

    pub fn labels(&self) -> &[String; 4] {
        &self.labels
    }

    pub fn notes(&self) -> &str {
        &self.file.notes
    }

    pub fn baseline_inputs(&self) -> Option<(f64, f64)> {
        self.file.baseline.map(|b| (b.source_quotient, b.delta))
    }

    /// The symmetry baseline's target quotient, when the file supplies inputs.
    pub fn baseline_value(&self) -> Option<f64> {
        self.baseline_inputs()
            .map(|(q, d)| symmetry_baseline(q, d).expect("validated on load"))
    }

    /// Constraint sets the scenario solves: base first, then extension.
    pub fn constraint_sets(&self) -> Vec<&ConstraintSet> {
        let mut v = Vec::new();
        if let Base::Solve { constraints, .. } = &self.base {
            v.push(constraints);
        }
        if let Some(ExtensionPlan {
            constraints: Some(c),
            ..
        }) = &self.extension
        {
            v.push(c);
        }
        v
    }

    pub fn is_constraint_specified(&self) -> bool {
        !self.constraint_sets().is_empty()
    }

    /// Every constraint label across base and extension.
    pub fn constraint_labels(&self) -> Vec<String> {
        self.constraint_sets()
            .iter()
            .flat_map(|cs| {
                cs.constraints()
                    .iter()
                    .filter_map(|c| c.label().map(str::to_string))
            })
            .collect()
    }

    /// A copy with the margin (or tolerance) of constraint `label` replaced.
    pub fn with_margin(&self, label: &str, value: f64) -> Result<Scenario, ScenarioError> {
        let mut file = self.file.clone();
        let key = label.trim_end_matches(['>', '<']).to_string();
        let in_base = matches!(&self.base, Base::Solve { constraints, .. }
            if constraints.constraints().iter().any(|c| c.label() == Some(label)));
        let in_ext = self
            .extension
            .as_ref()
            .and_then(|x| x.constraints.as_ref())
            .is_some_and(|cs| cs.constraints().iter().any(|c| c.label() == Some(label)));
        let set = |m: &mut BTreeMap<String, f64>| {
            m.insert(key.clone(), value);
        };
        match (&mut file.distribution, &mut file.extension) {
            (DistributionSpec::Constraints(block), _) if in_base => set(&mut block.margins),
            (_, Some(x)) if in_ext => set(&mut x.margins),
            _ => {
                return Err(ScenarioError::Invalid(format!(
                    "no constraint labeled `{label}`; known labels: {}",
                    self.constraint_labels().join(", ")
                )))
            }
        }
        Scenario::from_file(file, &self.source)
    }

    fn search_config(
        &self,
        seed: u64,
        max_samples: Option<u64>,
        opts: &SolveOptions,
    ) -> SearchConfig {
        let mut cfg = SearchConfig::with_seed(opts.seed.unwrap_or(seed));
        if let Some(m) = opts.max_samples.or(max_samples) {
            cfg.max_samples = m;
        }
        cfg
    }

    /// The concrete distribution: given weights or a solved model, then the
    /// bridge extension if there is one.
    pub fn solve(&self, opts: &SolveOptions) -> Result<Solved, ScenarioError> {
        let (base, base_model, seed) = match &self.base {
            Base::Weights(d) => (d.clone(), None, None),
            Base::Solve {
                constraints,
                seed,
                max_samples,
            } => {
                let cfg = self.search_config(*seed, *max_samples, opts);
                let m = crate::model::find_model_with(constraints, &cfg, opts.execution)?;
                (m.distribution.clone(), Some(m), Some(cfg.seed))
            }
        };
        let Some(plan) = &self.extension else {
            return Ok(Solved {
                distribution: base,
                base_model,
                extension: None,
                base_seed: seed,
                extension_seed: None,
            });
        };
        let spec = BridgeSpec {
            new_atom: plan.atom.clone(),
            prior: plan.prior,
            constraints: plan.constraints.clone(),
            mode: plan.mode,
        };
        let cfg = self.search_config(plan.seed, None, opts);
        let ext = extend_with_bridge(&base, &spec, &cfg, opts.execution)?;
        // Re-anchor on the scenario's own space so role propositions apply.
        let distribution =
            JointDistribution::new(&self.space, ext.distribution.weights().to_vec())?;
        Ok(Solved {
            distribution,
            base_model,
            extension_seed: ext.model.as_ref().map(|_| cfg.seed),
            extension: Some(ext),
            base_seed: seed,
        })
    }

    pub fn extension_summary(&self, solved: &Solved) -> Option<ExtensionSummary> {
        let plan = self.extension.as_ref()?;
        let ext = solved.extension.as_ref()?;
        Some(ExtensionSummary {
            atom: plan.atom.clone(),
            prior: plan.prior,
            mode: plan.mode,
            marginal_shift: ext.marginal_shift,
        })
    }
}
