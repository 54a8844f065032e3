use std::collections::{BTreeMap, BTreeSet};

use super::file::{ConstraintEntry, GeneralConstraint, TermSpec};
use super::{Roles, ScenarioError};
use crate::model::{ConstraintKind, ConstraintSet, ProbConstraint, Term};
use crate::prob::{Proposition, SpaceRef};

pub const DEFAULT_STRICT_MARGIN: f64 = 0.05;
pub const DEFAULT_NON_EXTREMAL_MARGIN: f64 = 0.05;
pub const DEFAULT_EQUALITY_TOLERANCE: f64 = 1e-10;

/// Everything needed to turn entries into constraints.
pub(crate) struct Builder<'a> {
    pub file: &'a str,
    /// Field prefix used in error messages, e.g. `distribution.constraints`.
    pub field: &'a str,
    pub space: &'a SpaceRef,
    /// `None` when a role names an atom outside this space.
    pub roles: Option<&'a Roles>,
    pub labels: &'a [String; 4],
    pub margins: &'a BTreeMap<String, f64>,
}

impl Builder<'_> {
    fn err(&self, index: usize, message: impl Into<String>) -> ScenarioError {
        ScenarioError::field(self.file, format!("{}[{index}]", self.field), message)
    }

    fn prop(&self, index: usize, text: &str) -> Result<Proposition, ScenarioError> {
        Proposition::parse(self.space, text)
            .map_err(|e| self.err(index, format!("formula `{text}`: {e}")))
    }

    fn margin(&self, label: &str, inline: Option<f64>, default: f64) -> f64 {
        self.margins
            .get(label)
            .copied()
            .or(inline)
            .unwrap_or(default)
    }

    pub(crate) fn build(
        &self,
        entries: &[ConstraintEntry],
    ) -> Result<ConstraintSet, ScenarioError> {
        let mut out = Vec::new();
        for (i, e) in entries.iter().enumerate() {
            self.entry(i, e, &mut out)?;
        }
        let mut seen = BTreeSet::new();
        for c in &out {
            if let Some(l) = c.label() {
                if !seen.insert(l.to_string()) {
                    return Err(ScenarioError::field(
                        self.file,
                        self.field,
                        format!("duplicate constraint label `{l}`"),
                    ));
                }
            }
        }
        if let Some(unused) = self
            .margins
            .keys()
            .find(|k| !seen.contains(*k) && !seen.contains(&format!("{k}>")))
        {
            return Err(ScenarioError::field(
                self.file,
                self.field.replace("constraints", "margins"),
                format!("no constraint is labeled `{unused}`"),
            ));
        }
        ConstraintSet::new(out)
            .map_err(|e| ScenarioError::field(self.file, self.field, e.to_string()))
    }

    fn entry(
        &self,
        i: usize,
        e: &ConstraintEntry,
        out: &mut Vec<ProbConstraint>,
    ) -> Result<(), ScenarioError> {
        let wrap = |r: Result<ProbConstraint, crate::model::ConstraintError>| {
            r.map_err(|e| self.err(i, e.to_string()))
        };
        match e {
            ConstraintEntry::Condition {
                condition,
                reversed,
                equality,
                tolerance,
                margin,
            } => {
                let pos = self
                    .labels
                    .iter()
                    .position(|l| l == condition)
                    .ok_or_else(|| {
                        self.err(
                            i,
                            format!(
                                "unknown condition `{condition}`; expected one of {:?}",
                                self.labels
                            ),
                        )
                    })?;
                let (lhs, rhs, strict) = self.condition_sides(pos).map_err(|m| self.err(i, m))?;
                let (kind, lhs_t, rhs_t, strict) = match (strict, *reversed) {
                    (true, false) => (strict_kind(pos), lhs.clone(), rhs.clone(), true),
                    // `>` negated is `<=`, written as `rhs >= lhs`
                    (true, true) => (
                        ConstraintKind::CondGeCond,
                        as_conditional(&rhs, self.space),
                        as_conditional(&lhs, self.space),
                        false,
                    ),
                    (false, false) => (ConstraintKind::CondGeCond, lhs.clone(), rhs.clone(), false),
                    // `>=` negated is `<`, written as `rhs > lhs`
                    (false, true) => (ConstraintKind::CondGtCond, rhs.clone(), lhs.clone(), true),
                };
                let default = if strict { DEFAULT_STRICT_MARGIN } else { 0.0 };
                let m = self.margin(condition, *margin, default);
                out.push(
                    wrap(ProbConstraint::new(kind, lhs_t, rhs_t, m))?.labeled(condition.clone()),
                );
                if *equality {
                    if *reversed {
                        return Err(self.err(i, "`equality` cannot be combined with `reversed`"));
                    }
                    let tol_label = format!("{condition}=");
                    let tol = self.margin(&tol_label, *tolerance, DEFAULT_EQUALITY_TOLERANCE);
                    out.push(
                        wrap(ProbConstraint::new(ConstraintKind::Equality, lhs, rhs, tol))?
                            .labeled(tol_label),
                    );
                }
            }
            ConstraintEntry::NonExtremal {
                non_extremal,
                margin,
            } => {
                let p = self.prop(i, non_extremal)?;
                let label = format!("non_extremal({non_extremal})");
                let m = self.margin(&label, *margin, DEFAULT_NON_EXTREMAL_MARGIN);
                out.push(
                    wrap(ProbConstraint::new(
                        ConstraintKind::ProbGt,
                        Term::prob(&p),
                        Term::constant(0.0),
                        m,
                    ))?
                    .labeled(format!("{label}>")),
                );
                out.push(
                    wrap(ProbConstraint::new(
                        ConstraintKind::ProbLt,
                        Term::prob(&p),
                        Term::constant(1.0),
                        m,
                    ))?
                    .labeled(format!("{label}<")),
                );
            }
            ConstraintEntry::General(g) => out.push(self.general(i, g)?),
        }
        Ok(())
    }

    /// Sides of schema condition `pos` and whether it is strict.
    fn condition_sides(&self, pos: usize) -> Result<(Term, Term, bool), String> {
        let Roles {
            hypothesis: h,
            evidence: e,
            bridge: b,
        } = self
            .roles
            .ok_or("schema conditions need every role atom in this space; state them in the extension block")?;
        let nb = b.not();
        let s = |r: Result<Term, crate::prob::ProbError>| r.map_err(|e| e.to_string());
        Ok(match pos {
            0 => (s(Term::cond(h, b))?, Term::prob(h), true),
            1 => (s(Term::cond(e, b))?, s(Term::cond(e, &nb))?, true),
            2 => {
                let be = b.and(e).map_err(|e| e.to_string())?;
                (s(Term::cond(h, &be))?, s(Term::cond(h, b))?, false)
            }
            _ => {
                let nbe = nb.and(e).map_err(|e| e.to_string())?;
                (s(Term::cond(h, &nbe))?, s(Term::cond(h, &nb))?, false)
            }
        })
    }

    fn term(&self, i: usize, t: &TermSpec, force_conditional: bool) -> Result<Term, ScenarioError> {
        match t {
            TermSpec::Const(c) => Ok(Term::constant(*c)),
            TermSpec::Prob {
                target,
                given,
                offset,
            } => {
                let target = self.prop(i, target)?;
                let term = match given {
                    Some(g) => {
                        let g = self.prop(i, g)?;
                        Term::cond(&target, &g).map_err(|e| self.err(i, e.to_string()))?
                    }
                    // Conditioning on the sure event is plain probability.
                    None if force_conditional => {
                        Term::cond(&target, &Proposition::tautology(self.space))
                            .map_err(|e| self.err(i, e.to_string()))?
                    }
                    None => Term::prob(&target),
                };
                Ok(term.plus(offset.unwrap_or(0.0)))
            }
        }
    }

    fn general(&self, i: usize, g: &GeneralConstraint) -> Result<ProbConstraint, ScenarioError> {
        let both = g.kind == ConstraintKind::CondGtCond || g.kind == ConstraintKind::CondGeCond;
        let lhs = self.term(i, &g.lhs, both || g.kind == ConstraintKind::CondGtProb)?;
        let rhs = self.term(i, &g.rhs, both)?;
        let default = if g.kind.is_strict() {
            DEFAULT_STRICT_MARGIN
        } else {
            0.0
        };
        let m = match &g.label {
            Some(l) => self.margin(l, g.margin, default),
            None => g.margin.unwrap_or(default),
        };
        let c = ProbConstraint::new(g.kind, lhs, rhs, m).map_err(|e| self.err(i, e.to_string()))?;
        Ok(match &g.label {
            Some(l) => c.labeled(l.clone()),
            None => c,
        })
    }
}

fn strict_kind(pos: usize) -> ConstraintKind {
    if pos == 0 {
        ConstraintKind::CondGtProb
    } else {
        ConstraintKind::CondGtCond
    }
}

/// `P(x)` as `P(x | true)` so it can sit on either side of a conditional comparison.
fn as_conditional(t: &Term, space: &SpaceRef) -> Term {
    match t {
        Term::Prob(p) if p.given().is_none() => {
            Term::cond(p.target(), &Proposition::tautology(space))
                .expect("same space")
                .plus(p.offset())
        }
        other => other.clone(),
    }
}
