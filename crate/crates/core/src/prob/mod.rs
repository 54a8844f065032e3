//! Finite probability spaces over propositional atoms.

mod dist;
mod formula;
mod prop;
mod space;

use thiserror::Error;

pub use dist::{
    DistributionRecord, JointDistribution, DEFAULT_EXTREMALITY_EPSILON, NORMALIZATION_TOLERANCE,
};
pub use formula::Formula;
pub use prop::{entails, Proposition, WorldSet};
pub use space::{Atom, SpaceRef, WorldSpace, MAX_ATOMS};

pub(crate) use prop::same_space;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ProbError {
    #[error("propositions or distribution belong to different world spaces")]
    SpaceMismatch,
    #[error("conditioning event has probability zero")]
    UndefinedConditional,
    #[error("a world space needs at least one atom")]
    EmptySpace,
    #[error("{0} atoms exceeds the limit of {MAX_ATOMS}")]
    TooManyAtoms(usize),
    #[error("duplicate atom `{0}`")]
    DuplicateAtom(String),
    #[error("invalid atom name `{0}`")]
    InvalidAtomName(String),
    #[error("unknown atom `{0}`")]
    UnknownAtom(String),
    #[error("cannot parse `{input}` at byte {offset}: {message}")]
    Parse {
        input: String,
        offset: usize,
        message: String,
    },
    #[error("expected {expected} weights, found {found}")]
    WeightCount { expected: usize, found: usize },
    #[error("weight {0} is negative or not finite")]
    InvalidWeight(f64),
    #[error("weights sum to {0}, not 1")]
    NotNormalized(f64),
    #[error("world {0} out of range")]
    WorldOutOfRange(usize),
    #[error("probability {0} outside [0, 1]")]
    ProbabilityOutOfRange(f64),
}

impl ProbError {
    pub fn is_undefined_conditional(&self) -> bool {
        matches!(self, ProbError::UndefinedConditional)
    }
}
