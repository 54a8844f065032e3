//! Exhaustive search over distributions whose weights are multiples of
//! `1/resolution`, judged in exact rational arithmetic.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::constraint::{ConstraintKind, ConstraintSet, ProbConstraint, Term};
use crate::prob::{JointDistribution, ProbError, SpaceRef, WorldSet};

pub const GRID_MAX_WORLDS: usize = 8;
pub const GRID_MAX_RESOLUTION: u32 = 20;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GridError {
    #[error("grid enumeration supports at most {GRID_MAX_WORLDS} worlds, got {0}")]
    TooManyWorlds(usize),
    #[error("grid resolution must be in 1..={GRID_MAX_RESOLUTION}, got {0}")]
    Resolution(u32),
}

/// Weights `numerators[w] / resolution`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GridPoint {
    pub numerators: Vec<u32>,
    pub resolution: u32,
}

impl GridPoint {
    pub fn to_weights(&self) -> Vec<f64> {
        let r = f64::from(self.resolution);
        self.numerators.iter().map(|&n| f64::from(n) / r).collect()
    }

    pub fn to_distribution(&self, space: &SpaceRef) -> Result<JointDistribution, ProbError> {
        JointDistribution::from_unnormalized(
            space,
            self.numerators.iter().map(|&n| f64::from(n)).collect(),
        )
    }
}

fn rational(x: f64) -> BigRational {
    BigRational::from_float(x).expect("validated finite")
}

enum ExactTerm {
    Const(BigRational),
    Prob {
        numerator: WorldSet,
        given: Option<WorldSet>,
        offset: BigRational,
    },
}

impl ExactTerm {
    fn new(t: &Term) -> Self {
        match t {
            Term::Const(c) => ExactTerm::Const(rational(*c)),
            Term::Prob(p) => ExactTerm::Prob {
                numerator: p.numerator().clone(),
                given: p.given().map(|g| g.extension().clone()),
                offset: rational(p.offset()),
            },
        }
    }

    fn eval(&self, counts: &[u32], resolution: u32) -> Option<BigRational> {
        let mass = |s: &WorldSet| -> u32 { s.iter().map(|w| counts[w]).sum() };
        match self {
            ExactTerm::Const(c) => Some(c.clone()),
            ExactTerm::Prob {
                numerator,
                given,
                offset,
            } => {
                let (num, den) = match given {
                    None => (mass(numerator), resolution),
                    Some(g) => (mass(numerator), mass(g)),
                };
                if den == 0 {
                    return None;
                }
                Some(BigRational::new(BigInt::from(num), BigInt::from(den)) + offset)
            }
        }
    }
}

struct ExactConstraint {
    kind: ConstraintKind,
    lhs: ExactTerm,
    rhs: ExactTerm,
    margin: BigRational,
}

impl ExactConstraint {
    fn new(c: &ProbConstraint) -> Self {
        ExactConstraint {
            kind: c.kind(),
            lhs: ExactTerm::new(c.lhs()),
            rhs: ExactTerm::new(c.rhs()),
            margin: rational(c.margin()),
        }
    }

    fn holds(&self, counts: &[u32], resolution: u32) -> bool {
        let (Some(l), Some(r)) = (
            self.lhs.eval(counts, resolution),
            self.rhs.eval(counts, resolution),
        ) else {
            return false;
        };
        let d = l - r;
        match self.kind {
            ConstraintKind::ProbLt => -d - &self.margin > BigRational::zero(),
            ConstraintKind::Equality => d.abs() <= self.margin,
            ConstraintKind::CondGeCond => d - &self.margin >= BigRational::zero(),
            _ => d - &self.margin > BigRational::zero(),
        }
    }
}

/// Calls `f` on every composition of `total` into `parts` nonnegative parts,
/// in lexicographic order.
fn compositions(parts: usize, total: u32, f: &mut impl FnMut(&[u32])) {
    fn go(buf: &mut Vec<u32>, parts: usize, left: u32, f: &mut impl FnMut(&[u32])) {
        if buf.len() + 1 == parts {
            buf.push(left);
            f(buf);
            buf.pop();
            return;
        }
        for k in 0..=left {
            buf.push(k);
            go(buf, parts, left - k, f);
            buf.pop();
        }
    }
    go(&mut Vec::with_capacity(parts), parts, total, f);
}

/// Every grid point of the given resolution that satisfies all constraints
/// exactly, in lexicographic order of numerators.
pub fn grid_enumerate(cs: &ConstraintSet, resolution: u32) -> Result<Vec<GridPoint>, GridError> {
    let n = cs.space().world_count();
    if n > GRID_MAX_WORLDS {
        return Err(GridError::TooManyWorlds(n));
    }
    if !(1..=GRID_MAX_RESOLUTION).contains(&resolution) {
        return Err(GridError::Resolution(resolution));
    }
    let exact: Vec<ExactConstraint> = cs.constraints().iter().map(ExactConstraint::new).collect();
    let mut found = Vec::new();
    compositions(n, resolution, &mut |counts| {
        if exact.iter().all(|c| c.holds(counts, resolution)) {
            found.push(GridPoint {
                numerators: counts.to_vec(),
                resolution,
            });
        }
    });
    Ok(found)
}
