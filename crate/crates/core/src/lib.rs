//! Probabilistic confirmation, the transitivity conditions for analogical
//! arguments, and a constraint-driven model finder.

pub mod confirmation;
pub mod exec;
pub mod model;
pub mod prob;
pub mod scenario;
