use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::prob::{same_space, JointDistribution, ProbError, Proposition, SpaceRef, WorldSet};

/// `≥` and equality constraints tolerate this much float noise when judged.
pub const WEAK_TOLERANCE: f64 = 1e-12;

/// Penalty charged for each constraint whose conditional is undefined.
pub const DEFAULT_UNDEFINED_PENALTY: f64 = 1.0;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConstraintError {
    #[error("margin must be finite and nonnegative, got {0}")]
    InvalidMargin(f64),
    #[error("offset and constants must be finite, got {0}")]
    InvalidValue(f64),
    #[error("`{kind}` constraint: {message}")]
    Shape {
        kind: ConstraintKind,
        message: String,
    },
    #[error("constraint terms belong to different world spaces")]
    SpaceMismatch,
    #[error("a constraint set needs at least one constraint")]
    Empty,
    #[error(transparent)]
    Prob(#[from] ProbError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ConstraintKind {
    /// `lhs > rhs + margin`, typically a probability against a constant.
    ProbGt,
    /// `lhs < rhs - margin`.
    ProbLt,
    /// `P(a|b) > P(c|d) + margin`.
    CondGtCond,
    /// `P(a|b) > P(c) + margin`.
    CondGtProb,
    /// `P(a|b) >= P(c|d) + margin`.
    CondGeCond,
    /// `|lhs - rhs| <= margin`.
    Equality,
}

impl ConstraintKind {
    pub fn is_strict(self) -> bool {
        matches!(
            self,
            ConstraintKind::ProbGt
                | ConstraintKind::ProbLt
                | ConstraintKind::CondGtCond
                | ConstraintKind::CondGtProb
        )
    }

    fn symbol(self) -> &'static str {
        match self {
            ConstraintKind::ProbGt | ConstraintKind::CondGtCond | ConstraintKind::CondGtProb => ">",
            ConstraintKind::ProbLt => "<",
            ConstraintKind::CondGeCond => ">=",
            ConstraintKind::Equality => "=",
        }
    }
}

impl fmt::Display for ConstraintKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            ConstraintKind::ProbGt => "prob_gt",
            ConstraintKind::ProbLt => "prob_lt",
            ConstraintKind::CondGtCond => "cond_gt_cond",
            ConstraintKind::CondGtProb => "cond_gt_prob",
            ConstraintKind::CondGeCond => "cond_ge_cond",
            ConstraintKind::Equality => "equality",
        };
        f.write_str(s)
    }
}

/// `P(target | given) + offset`.
#[derive(Clone, Debug)]
pub struct ProbTerm {
    target: Proposition,
    given: Option<Proposition>,
    offset: f64,
    numerator: WorldSet,
}

impl ProbTerm {
    pub fn target(&self) -> &Proposition {
        &self.target
    }

    pub fn given(&self) -> Option<&Proposition> {
        self.given.as_ref()
    }

    pub fn offset(&self) -> f64 {
        self.offset
    }

    /// Worlds counted in the numerator (`target & given`).
    pub(crate) fn numerator(&self) -> &WorldSet {
        &self.numerator
    }
}

/// One side of a constraint.
#[derive(Clone, Debug)]
pub enum Term {
    Prob(ProbTerm),
    Const(f64),
}

impl Term {
    pub fn prob(target: &Proposition) -> Term {
        Term::Prob(ProbTerm {
            numerator: target.extension().clone(),
            target: target.clone(),
            given: None,
            offset: 0.0,
        })
    }

    pub fn cond(target: &Proposition, given: &Proposition) -> Result<Term, ProbError> {
        let numerator = target.and(given)?.extension().clone();
        Ok(Term::Prob(ProbTerm {
            target: target.clone(),
            given: Some(given.clone()),
            offset: 0.0,
            numerator,
        }))
    }

    pub fn constant(value: f64) -> Term {
        Term::Const(value)
    }

    /// Adds a constant to a probability term (or to a constant).
    pub fn plus(self, offset: f64) -> Term {
        match self {
            Term::Prob(mut p) => {
                p.offset += offset;
                Term::Prob(p)
            }
            Term::Const(c) => Term::Const(c + offset),
        }
    }

    fn space(&self) -> Option<&SpaceRef> {
        match self {
            Term::Prob(p) => Some(p.target.space()),
            Term::Const(_) => None,
        }
    }

    fn is_conditional(&self) -> bool {
        matches!(self, Term::Prob(p) if p.given.is_some())
    }

    fn is_prob(&self) -> bool {
        matches!(self, Term::Prob(_))
    }

    fn check_finite(&self) -> Result<(), ConstraintError> {
        let v = match self {
            Term::Prob(p) => p.offset,
            Term::Const(c) => *c,
        };
        if v.is_finite() {
            Ok(())
        } else {
            Err(ConstraintError::InvalidValue(v))
        }
    }

    /// Value on raw world weights; `None` when a conditional is undefined.
    pub(crate) fn eval_weights(&self, weights: &[f64]) -> Option<f64> {
        match self {
            Term::Const(c) => Some(*c),
            Term::Prob(p) => {
                let v = match &p.given {
                    None => p.numerator.mass(weights),
                    Some(g) => {
                        let denom = g.extension().mass(weights);
                        if denom <= 0.0 {
                            return None;
                        }
                        (p.numerator.mass(weights) / denom).min(1.0)
                    }
                };
                Some(v + p.offset)
            }
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Const(c) => write!(f, "{c}"),
            Term::Prob(p) => {
                match &p.given {
                    Some(g) => write!(f, "P({} | {})", p.target, g)?,
                    None => write!(f, "P({})", p.target)?,
                }
                if p.offset > 0.0 {
                    write!(f, " + {}", p.offset)?;
                } else if p.offset < 0.0 {
                    write!(f, " - {}", -p.offset)?;
                }
                Ok(())
            }
        }
    }
}

/// How the search side of the model finder tightens targets.
#[derive(Clone, Copy, Debug)]
pub(crate) struct Targets {
    /// Extra slack demanded of strict constraints so found points clear them strictly.
    pub strict_extra: f64,
    /// Fraction of an equality tolerance the search aims for.
    pub equality_fraction: f64,
    pub undefined_penalty: f64,
}

impl Targets {
    pub(crate) const EXACT: Targets = Targets {
        strict_extra: 0.0,
        equality_fraction: 1.0,
        undefined_penalty: DEFAULT_UNDEFINED_PENALTY,
    };
}

/// An inequality (or equality) between two probability terms.
#[derive(Clone, Debug)]
pub struct ProbConstraint {
    label: Option<String>,
    kind: ConstraintKind,
    lhs: Term,
    rhs: Term,
    margin: f64,
}

impl ProbConstraint {
    pub fn new(
        kind: ConstraintKind,
        lhs: Term,
        rhs: Term,
        margin: f64,
    ) -> Result<Self, ConstraintError> {
        if !margin.is_finite() || margin < 0.0 {
            return Err(ConstraintError::InvalidMargin(margin));
        }
        lhs.check_finite()?;
        rhs.check_finite()?;
        let shape = |message: &str| {
            Err(ConstraintError::Shape {
                kind,
                message: message.to_string(),
            })
        };
        match kind {
            ConstraintKind::CondGtCond | ConstraintKind::CondGeCond => {
                if !(lhs.is_conditional() && rhs.is_conditional()) {
                    return shape("both sides must be conditional probabilities");
                }
            }
            ConstraintKind::CondGtProb => {
                if !lhs.is_conditional() || !rhs.is_prob() || rhs.is_conditional() {
                    return shape("left side must be conditional, right side unconditional");
                }
            }
            ConstraintKind::ProbGt | ConstraintKind::ProbLt | ConstraintKind::Equality => {
                if !lhs.is_prob() {
                    return shape("left side must be a probability");
                }
            }
        }
        if let (Some(a), Some(b)) = (lhs.space(), rhs.space()) {
            if !same_space(a, b) {
                return Err(ConstraintError::SpaceMismatch);
            }
        }
        Ok(ProbConstraint {
            label: None,
            kind,
            lhs,
            rhs,
            margin,
        })
    }

    pub fn labeled(mut self, label: impl Into<String>) -> Self {
        self.label = Some(label.into());
        self
    }

    pub fn label(&self) -> Option<&str> {
        self.label.as_deref()
    }

    pub fn kind(&self) -> ConstraintKind {
        self.kind
    }

    pub fn margin(&self) -> f64 {
        self.margin
    }

    pub fn lhs(&self) -> &Term {
        &self.lhs
    }

    pub fn rhs(&self) -> &Term {
        &self.rhs
    }

    pub fn with_margin(mut self, margin: f64) -> Result<Self, ConstraintError> {
        if !margin.is_finite() || margin < 0.0 {
            return Err(ConstraintError::InvalidMargin(margin));
        }
        self.margin = margin;
        Ok(self)
    }

    pub fn space(&self) -> &SpaceRef {
        self.lhs
            .space()
            .or_else(|| self.rhs.space())
            .expect("validated: left side is a probability")
    }

    /// `lhs - rhs` on raw weights.
    pub(crate) fn difference_on(&self, weights: &[f64]) -> Option<f64> {
        Some(self.lhs.eval_weights(weights)? - self.rhs.eval_weights(weights)?)
    }

    /// How far the constraint is from failing; negative means violated.
    pub(crate) fn slack_on(&self, weights: &[f64], targets: Targets) -> Option<f64> {
        let d = self.difference_on(weights)?;
        let extra = if self.kind.is_strict() {
            targets.strict_extra
        } else {
            0.0
        };
        Some(match self.kind {
            ConstraintKind::ProbLt => -d - self.margin - extra,
            ConstraintKind::Equality => self.margin * targets.equality_fraction - d.abs(),
            _ => d - self.margin - extra,
        })
    }

    pub(crate) fn satisfied_on(&self, weights: &[f64]) -> bool {
        match self.slack_on(weights, Targets::EXACT) {
            None => false,
            Some(s) if self.kind.is_strict() => s > 0.0,
            Some(s) => s >= -WEAK_TOLERANCE,
        }
    }

    fn check_dist(&self, dist: &JointDistribution) -> Result<(), ProbError> {
        if same_space(self.space(), dist.space()) {
            Ok(())
        } else {
            Err(ProbError::SpaceMismatch)
        }
    }

    /// `lhs - rhs` on a distribution.
    pub fn difference(&self, dist: &JointDistribution) -> Result<f64, ProbError> {
        self.check_dist(dist)?;
        self.difference_on(dist.weights())
            .ok_or(ProbError::UndefinedConditional)
    }

    pub fn slack(&self, dist: &JointDistribution) -> Result<f64, ProbError> {
        self.check_dist(dist)?;
        self.slack_on(dist.weights(), Targets::EXACT)
            .ok_or(ProbError::UndefinedConditional)
    }

    /// Strict kinds need positive slack; `≥` and equality allow [`WEAK_TOLERANCE`].
    pub fn is_satisfied(&self, dist: &JointDistribution) -> bool {
        self.check_dist(dist).is_ok() && self.satisfied_on(dist.weights())
    }
}

impl fmt::Display for ProbConstraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(l) = &self.label {
            write!(f, "{l}: ")?;
        }
        write!(f, "{} {} {}", self.lhs, self.kind.symbol(), self.rhs)?;
        if self.margin > 0.0 {
            let word = if self.kind == ConstraintKind::Equality {
                "tolerance"
            } else {
                "margin"
            };
            write!(f, " ({word} {})", self.margin)?;
        }
        Ok(())
    }
}

/// Constraints sharing one world space.
#[derive(Clone, Debug)]
pub struct ConstraintSet {
    space: SpaceRef,
    constraints: Vec<ProbConstraint>,
}

impl ConstraintSet {
    pub fn new(constraints: Vec<ProbConstraint>) -> Result<Self, ConstraintError> {
        let first = constraints.first().ok_or(ConstraintError::Empty)?;
        let space = Arc::clone(first.space());
        if constraints.iter().any(|c| !same_space(&space, c.space())) {
            return Err(ConstraintError::SpaceMismatch);
        }
        Ok(ConstraintSet { space, constraints })
    }

    pub fn space(&self) -> &SpaceRef {
        &self.space
    }

    pub fn constraints(&self) -> &[ProbConstraint] {
        &self.constraints
    }

    pub fn len(&self) -> usize {
        self.constraints.len()
    }

    pub fn is_empty(&self) -> bool {
        self.constraints.is_empty()
    }

    pub(crate) fn penalty_on(&self, weights: &[f64], targets: Targets) -> f64 {
        self.constraints
            .iter()
            .map(|c| match c.slack_on(weights, targets) {
                Some(s) if s < 0.0 => s * s,
                Some(_) => 0.0,
                None => targets.undefined_penalty,
            })
            .sum()
    }

    pub(crate) fn satisfied_on(&self, weights: &[f64]) -> bool {
        self.constraints.iter().all(|c| c.satisfied_on(weights))
    }

    pub fn all_satisfied(&self, dist: &JointDistribution) -> bool {
        self.constraints.iter().all(|c| c.is_satisfied(dist))
    }
}

/// Sum of squared hinge violations `max(0, required - achieved)^2`.
///
/// An undefined conditional costs [`DEFAULT_UNDEFINED_PENALTY`]. A distribution
/// over another space is infinitely penalized.
pub fn penalty(dist: &JointDistribution, cs: &ConstraintSet) -> f64 {
    if !same_space(dist.space(), cs.space()) {
        return f64::INFINITY;
    }
    cs.penalty_on(dist.weights(), Targets::EXACT)
}
