//! Appending a new atom to a solved distribution.

use serde::{Deserialize, Serialize};

use super::file::ExtensionMode;
use super::ScenarioError;
use crate::exec::Execution;
use crate::model::{find_model_in, Chart, ConstraintSet, Model, SearchConfig};
use crate::prob::{JointDistribution, Proposition, SpaceRef};

/// Marginals over the old atoms may drift by at most this much in
/// conservative mode, and the new atom's marginal must match the prior this
/// closely in either mode.
pub const MARGINAL_TOLERANCE: f64 = 1e-10;

#[derive(Clone, Debug)]
pub struct BridgeSpec {
    pub new_atom: String,
    pub prior: f64,
    /// Over the extended space; `None` asks for the product extension.
    pub constraints: Option<ConstraintSet>,
    pub mode: ExtensionMode,
}

#[derive(Clone, Debug)]
pub struct Extension {
    pub distribution: JointDistribution,
    /// Present when constraints were solved.
    pub model: Option<Model>,
    /// Largest change of any old-world weight after marginalizing.
    pub marginal_shift: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExtensionSummary {
    pub atom: String,
    pub prior: f64,
    pub mode: ExtensionMode,
    pub marginal_shift: f64,
}

/// The extended space: new atom appended as the highest bit.
pub fn extended_space(base: &SpaceRef, new_atom: &str) -> Result<SpaceRef, ScenarioError> {
    Ok(base.extended(new_atom)?)
}

/// Search chart that keeps `base` as the old-atom marginal and `prior` as the
/// new atom's marginal exactly.
///
/// A state on the `2n`-simplex proposes `q_w = P(new | w)` for each old world
/// `w`; the `q_w` are then rescaled toward 0 or 1 until `Σ p_w q_w = prior`.
struct Conservative<'a> {
    base: &'a [f64],
    prior: f64,
}

impl Conservative<'_> {
    fn fit(&self, q: &mut [f64]) {
        let m: f64 = self.base.iter().zip(q.iter()).map(|(p, q)| p * q).sum();
        if m > self.prior {
            let s = self.prior / m;
            q.iter_mut().for_each(|x| *x *= s);
        } else if m < self.prior {
            let s = (1.0 - self.prior) / (1.0 - m);
            q.iter_mut().for_each(|x| *x = 1.0 - (1.0 - *x) * s);
        }
    }

    fn weights_for(&self, q: &[f64]) -> Vec<f64> {
        let n = self.base.len();
        let mut w = vec![0.0; 2 * n];
        for (i, (&p, &qi)) in self.base.iter().zip(q).enumerate() {
            w[i] = p * (1.0 - qi);
            w[i + n] = p * qi;
        }
        w
    }
}

impl Chart for Conservative<'_> {
    fn dim(&self) -> usize {
        2 * self.base.len()
    }

    fn weights(&self, state: &[f64]) -> Vec<f64> {
        let n = self.base.len();
        let mut q: Vec<f64> = (0..n)
            .map(|i| {
                let (off, on) = (state[i], state[i + n]);
                if off + on > 0.0 {
                    on / (off + on)
                } else {
                    0.5
                }
            })
            .collect();
        self.fit(&mut q);
        self.weights_for(&q)
    }
}

pub fn extend_with_bridge(
    dist: &JointDistribution,
    spec: &BridgeSpec,
    config: &SearchConfig,
    exec: Execution,
) -> Result<Extension, ScenarioError> {
    if !(0.0..=1.0).contains(&spec.prior) {
        return Err(ScenarioError::Invalid(format!(
            "bridge prior {} outside [0, 1]",
            spec.prior
        )));
    }
    let base = dist.space();
    let space = extended_space(base, &spec.new_atom)?;
    let atom = Proposition::atom(&space, &spec.new_atom)?;

    let (distribution, model) = match (&spec.constraints, spec.mode) {
        (None, _) => {
            let chart = Conservative {
                base: dist.weights(),
                prior: spec.prior,
            };
            let q = vec![spec.prior; base.world_count()];
            let d = JointDistribution::from_unnormalized(&space, chart.weights_for(&q))?;
            (d, None)
        }
        (Some(cs), mode) => {
            if !crate::prob::same_space(cs.space(), &space) {
                return Err(ScenarioError::Invalid(format!(
                    "bridge constraints must be over [{}]",
                    space.atom_names().join(", ")
                )));
            }
            let model = match mode {
                ExtensionMode::Conservative => {
                    let chart = Conservative {
                        base: dist.weights(),
                        prior: spec.prior,
                    };
                    find_model_in(cs, config, exec, &chart)?
                }
                ExtensionMode::Revisionary => {
                    crate::model::find_model_pinned(cs, config, exec, &atom, spec.prior)?
                }
            };
            (model.distribution.clone(), Some(model))
        }
    };

    let got = distribution.probability(&atom)?;
    if (got - spec.prior).abs() > MARGINAL_TOLERANCE {
        return Err(ScenarioError::Invalid(format!(
            "extension gave the new atom mass {got}, expected {}",
            spec.prior
        )));
    }
    let back = distribution.marginal_over(base)?;
    let marginal_shift = back
        .weights()
        .iter()
        .zip(dist.weights())
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    if spec.mode == ExtensionMode::Conservative && marginal_shift > MARGINAL_TOLERANCE {
        return Err(ScenarioError::Invalid(format!(
            "conservative extension moved an old marginal by {marginal_shift:e}"
        )));
    }
    Ok(Extension {
        distribution,
        model,
        marginal_shift,
    })
}
