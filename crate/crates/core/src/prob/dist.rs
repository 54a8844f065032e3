use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::prop::{compensated_sum, same_space, Proposition, WorldSet};
use super::space::{SpaceRef, WorldSpace};
use super::ProbError;

/// Allowed deviation of the weight total from one.
pub const NORMALIZATION_TOLERANCE: f64 = 1e-12;

/// Default ε for [`JointDistribution::is_non_extremal`].
pub const DEFAULT_EXTREMALITY_EPSILON: f64 = 1e-9;

/// A credence function: nonnegative weights over the worlds of a space, summing to one.
#[derive(Clone, Debug)]
pub struct JointDistribution {
    space: SpaceRef,
    weights: Vec<f64>,
}

impl PartialEq for JointDistribution {
    fn eq(&self, other: &Self) -> bool {
        same_space(&self.space, &other.space) && self.weights == other.weights
    }
}

impl JointDistribution {
    pub fn new(space: &SpaceRef, weights: Vec<f64>) -> Result<Self, ProbError> {
        check_shape(space, &weights)?;
        let total = compensated_sum(weights.iter().copied());
        if (total - 1.0).abs() > NORMALIZATION_TOLERANCE {
            return Err(ProbError::NotNormalized(total));
        }
        Ok(JointDistribution {
            space: Arc::clone(space),
            weights,
        })
    }

    /// Divides nonnegative weights by their total.
    pub fn from_unnormalized(space: &SpaceRef, mut weights: Vec<f64>) -> Result<Self, ProbError> {
        check_shape(space, &weights)?;
        let total = compensated_sum(weights.iter().copied());
        if total <= 0.0 || !total.is_finite() {
            return Err(ProbError::NotNormalized(total));
        }
        for w in &mut weights {
            *w /= total;
        }
        Self::new(space, weights)
    }

    pub fn uniform(space: &SpaceRef) -> Self {
        let n = space.world_count();
        JointDistribution {
            space: Arc::clone(space),
            weights: vec![1.0 / n as f64; n],
        }
    }

    pub fn point_mass(space: &SpaceRef, world: usize) -> Result<Self, ProbError> {
        let n = space.world_count();
        if world >= n {
            return Err(ProbError::WorldOutOfRange(world));
        }
        let mut weights = vec![0.0; n];
        weights[world] = 1.0;
        Ok(JointDistribution {
            space: Arc::clone(space),
            weights,
        })
    }

    pub fn space(&self) -> &SpaceRef {
        &self.space
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    fn check(&self, p: &Proposition) -> Result<(), ProbError> {
        if same_space(&self.space, p.space()) {
            Ok(())
        } else {
            Err(ProbError::SpaceMismatch)
        }
    }

    pub fn probability(&self, a: &Proposition) -> Result<f64, ProbError> {
        self.check(a)?;
        Ok(a.extension().mass(&self.weights).clamp(0.0, 1.0))
    }

    /// `P(a | given)`. Conditioning on a zero-probability event is
    /// [`ProbError::UndefinedConditional`], kept distinct from structural errors.
    pub fn conditional(&self, a: &Proposition, given: &Proposition) -> Result<f64, ProbError> {
        self.check(a)?;
        self.check(given)?;
        conditional_on_weights(&self.weights, a.extension(), given.extension())
    }

    pub fn is_non_extremal(&self, a: &Proposition, epsilon: f64) -> Result<bool, ProbError> {
        let p = self.probability(a)?;
        Ok(p > epsilon && p < 1.0 - epsilon)
    }

    /// Marginal over `base`, whose atoms must be the leading atoms of this space.
    pub fn marginal_over(&self, base: &SpaceRef) -> Result<JointDistribution, ProbError> {
        if !base.is_prefix_of(&self.space) {
            return Err(ProbError::SpaceMismatch);
        }
        let n = base.world_count();
        let mut weights = vec![0.0; n];
        for (w, x) in self.weights.iter().enumerate() {
            weights[w % n] += x;
        }
        Ok(JointDistribution {
            space: Arc::clone(base),
            weights,
        })
    }

    /// Jeffrey update: rescale so that `P(a) = value` while every probability
    /// conditional on `a` or on `!a` is unchanged.
    pub fn with_marginal(
        &self,
        a: &Proposition,
        value: f64,
    ) -> Result<JointDistribution, ProbError> {
        self.check(a)?;
        if !(0.0..=1.0).contains(&value) {
            return Err(ProbError::ProbabilityOutOfRange(value));
        }
        let inside = a.extension().mass(&self.weights);
        let outside = 1.0 - inside;
        if (inside <= 0.0 && value > 0.0) || (outside <= 0.0 && value < 1.0) {
            return Err(ProbError::UndefinedConditional);
        }
        let weights = self
            .weights
            .iter()
            .enumerate()
            .map(|(w, x)| {
                if a.extension().contains(w) {
                    if value == 0.0 {
                        0.0
                    } else {
                        x * value / inside
                    }
                } else if value == 1.0 {
                    0.0
                } else {
                    x * (1.0 - value) / outside
                }
            })
            .collect();
        JointDistribution::from_unnormalized(&self.space, weights)
    }
}

pub(crate) fn conditional_on_weights(
    weights: &[f64],
    a: &WorldSet,
    given: &WorldSet,
) -> Result<f64, ProbError> {
    let pg = given.mass(weights);
    if pg <= 0.0 {
        return Err(ProbError::UndefinedConditional);
    }
    let joint = compensated_sum(given.iter().filter(|w| a.contains(*w)).map(|w| weights[w]));
    Ok((joint / pg).clamp(0.0, 1.0))
}

fn check_shape(space: &WorldSpace, weights: &[f64]) -> Result<(), ProbError> {
    if weights.len() != space.world_count() {
        return Err(ProbError::WeightCount {
            expected: space.world_count(),
            found: weights.len(),
        });
    }
    if let Some(bad) = weights.iter().find(|w| !w.is_finite() || **w < 0.0) {
        return Err(ProbError::InvalidWeight(*bad));
    }
    Ok(())
}

/// Serializable form of a distribution: atom names plus weights in world order.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DistributionRecord {
    pub atoms: Vec<String>,
    pub weights: Vec<f64>,
}

impl From<&JointDistribution> for DistributionRecord {
    fn from(d: &JointDistribution) -> Self {
        DistributionRecord {
            atoms: d.space.atom_names(),
            weights: d.weights.clone(),
        }
    }
}

impl DistributionRecord {
    pub fn to_distribution(&self) -> Result<JointDistribution, ProbError> {
        let space = WorldSpace::new(self.atoms.iter().cloned())?;
        JointDistribution::new(&space, self.weights.clone())
    }
}
