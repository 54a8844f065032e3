//! Finding distributions that satisfy a set of probability constraints.

mod constraint;
mod grid;
mod sampler;
mod search;

pub use constraint::{
    penalty, ConstraintError, ConstraintKind, ConstraintSet, ProbConstraint, ProbTerm, Term,
    DEFAULT_UNDEFINED_PENALTY, WEAK_TOLERANCE,
};
pub use grid::{grid_enumerate, GridError, GridPoint, GRID_MAX_RESOLUTION, GRID_MAX_WORLDS};
pub use sampler::{sample_simplex, sample_simplex_with, simplex_point, stream_rng};
pub use search::{
    constraint_outcomes, find_model, find_model_pinned, find_model_with, ConstraintOutcome,
    Infeasible, Model, SearchConfig, SearchError,
};
pub(crate) use search::{find_model_in, Chart};
