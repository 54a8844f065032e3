use std::fmt;
use std::sync::Arc;

use super::formula::Formula;
use super::space::{SpaceRef, WorldSpace};
use super::ProbError;

/// A set of world indices stored as a bitset.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct WorldSet {
    words: Vec<u64>,
    len: usize,
}

impl WorldSet {
    pub fn empty(len: usize) -> Self {
        WorldSet {
            words: vec![0; len.div_ceil(64)],
            len,
        }
    }

    pub fn full(len: usize) -> Self {
        let mut s = Self::empty(len);
        for w in 0..len {
            s.insert(w);
        }
        s
    }

    pub fn from_fn(len: usize, mut f: impl FnMut(usize) -> bool) -> Self {
        let mut s = Self::empty(len);
        for w in 0..len {
            if f(w) {
                s.insert(w);
            }
        }
        s
    }

    /// Universe size (number of worlds), not the number of members.
    pub fn universe(&self) -> usize {
        self.len
    }

    pub fn insert(&mut self, w: usize) {
        assert!(w < self.len, "world {w} out of range");
        self.words[w / 64] |= 1 << (w % 64);
    }

    #[inline]
    pub fn contains(&self, w: usize) -> bool {
        w < self.len && (self.words[w / 64] >> (w % 64)) & 1 == 1
    }

    pub fn count(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|w| *w == 0)
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(i, &word)| {
            let mut bits = word;
            std::iter::from_fn(move || {
                if bits == 0 {
                    None
                } else {
                    let t = bits.trailing_zeros() as usize;
                    bits &= bits - 1;
                    Some(i * 64 + t)
                }
            })
        })
    }

    pub fn is_subset(&self, other: &WorldSet) -> bool {
        self.len == other.len
            && self
                .words
                .iter()
                .zip(&other.words)
                .all(|(a, b)| a & !b == 0)
    }

    pub fn intersection(&self, other: &WorldSet) -> WorldSet {
        self.zip_with(other, |a, b| a & b)
    }

    pub fn union(&self, other: &WorldSet) -> WorldSet {
        self.zip_with(other, |a, b| a | b)
    }

    pub fn complement(&self) -> WorldSet {
        let mut out = WorldSet {
            words: self.words.iter().map(|w| !w).collect(),
            len: self.len,
        };
        out.clear_tail();
        out
    }

    fn zip_with(&self, other: &WorldSet, f: impl Fn(u64, u64) -> u64) -> WorldSet {
        assert_eq!(self.len, other.len, "world sets over different universes");
        WorldSet {
            words: self
                .words
                .iter()
                .zip(&other.words)
                .map(|(a, b)| f(*a, *b))
                .collect(),
            len: self.len,
        }
    }

    fn clear_tail(&mut self) {
        let rem = self.len % 64;
        if rem != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << rem) - 1;
            }
        }
    }

    /// Compensated sum of `weights` over the members of the set.
    pub fn mass(&self, weights: &[f64]) -> f64 {
        compensated_sum(self.iter().map(|w| weights[w]))
    }
}

/// Neumaier summation.
pub(crate) fn compensated_sum(values: impl IntoIterator<Item = f64>) -> f64 {
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    for v in values {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            comp += (sum - t) + v;
        } else {
            comp += (v - t) + sum;
        }
        sum = t;
    }
    sum + comp
}

/// A formula over a world space together with its extension.
#[derive(Clone, Debug)]
pub struct Proposition {
    space: SpaceRef,
    formula: Formula,
    extension: WorldSet,
}

impl PartialEq for Proposition {
    /// Propositions are compared by the worlds they pick out, not by syntax.
    fn eq(&self, other: &Self) -> bool {
        same_space(&self.space, &other.space) && self.extension == other.extension
    }
}

pub(crate) fn same_space(a: &SpaceRef, b: &SpaceRef) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

impl Proposition {
    pub fn from_formula(space: &SpaceRef, formula: Formula) -> Self {
        let n = space.world_count();
        let extension = WorldSet::from_fn(n, |w| formula.eval(w));
        Proposition {
            space: Arc::clone(space),
            formula,
            extension,
        }
    }

    pub fn parse(space: &SpaceRef, text: &str) -> Result<Self, ProbError> {
        Ok(Self::from_formula(space, Formula::parse(space, text)?))
    }

    pub fn atom(space: &SpaceRef, name: &str) -> Result<Self, ProbError> {
        let k = space
            .index_of(name)
            .ok_or_else(|| ProbError::UnknownAtom(name.to_string()))?;
        Ok(Self::from_formula(space, Formula::Atom(k)))
    }

    pub fn tautology(space: &SpaceRef) -> Self {
        Self::from_formula(
            space,
            Formula::or(Formula::Atom(0), Formula::negate(Formula::Atom(0))),
        )
    }

    pub fn contradiction(space: &SpaceRef) -> Self {
        Self::from_formula(
            space,
            Formula::and(Formula::Atom(0), Formula::negate(Formula::Atom(0))),
        )
    }

    /// The proposition true at exactly `worlds`, written in disjunctive normal form.
    pub fn from_worlds(space: &SpaceRef, worlds: &WorldSet) -> Result<Self, ProbError> {
        if worlds.universe() != space.world_count() {
            return Err(ProbError::SpaceMismatch);
        }
        let mut members = worlds.iter();
        let Some(first) = members.next() else {
            return Ok(Self::contradiction(space));
        };
        let formula = members.fold(world_formula(space, first), |acc, w| {
            Formula::or(acc, world_formula(space, w))
        });
        Ok(Proposition {
            space: Arc::clone(space),
            formula,
            extension: worlds.clone(),
        })
    }

    pub fn space(&self) -> &SpaceRef {
        &self.space
    }

    pub fn formula(&self) -> &Formula {
        &self.formula
    }

    pub fn extension(&self) -> &WorldSet {
        &self.extension
    }

    pub fn not(&self) -> Proposition {
        Proposition {
            space: Arc::clone(&self.space),
            formula: Formula::negate(self.formula.clone()),
            extension: self.extension.complement(),
        }
    }

    pub fn and(&self, other: &Proposition) -> Result<Proposition, ProbError> {
        self.check_space(other)?;
        Ok(Proposition {
            space: Arc::clone(&self.space),
            formula: Formula::and(self.formula.clone(), other.formula.clone()),
            extension: self.extension.intersection(&other.extension),
        })
    }

    pub fn or(&self, other: &Proposition) -> Result<Proposition, ProbError> {
        self.check_space(other)?;
        Ok(Proposition {
            space: Arc::clone(&self.space),
            formula: Formula::or(self.formula.clone(), other.formula.clone()),
            extension: self.extension.union(&other.extension),
        })
    }

    pub(crate) fn check_space(&self, other: &Proposition) -> Result<(), ProbError> {
        if same_space(&self.space, &other.space) {
            Ok(())
        } else {
            Err(ProbError::SpaceMismatch)
        }
    }

    pub fn is_tautology(&self) -> bool {
        self.extension.count() == self.space.world_count()
    }

    pub fn is_contradiction(&self) -> bool {
        self.extension.is_empty()
    }
}

fn world_formula(space: &WorldSpace, world: usize) -> Formula {
    (0..space.len())
        .map(|k| {
            if WorldSpace::holds(world, k) {
                Formula::Atom(k)
            } else {
                Formula::negate(Formula::Atom(k))
            }
        })
        .reduce(Formula::and)
        .expect("spaces have at least one atom")
}

impl fmt::Display for Proposition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.formula.display(&self.space))
    }
}

/// Whether every world of `a` is a world of `b`.
pub fn entails(a: &Proposition, b: &Proposition) -> Result<bool, ProbError> {
    a.check_space(b)?;
    Ok(a.extension.is_subset(&b.extension))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn extension_matches_formula() {
        let s = WorldSpace::new(["a", "b"]).unwrap();
        let p = Proposition::parse(&s, "a & !b").unwrap();
        assert_eq!(p.extension().iter().collect::<Vec<_>>(), vec![1]);
        assert!(Proposition::tautology(&s).is_tautology());
        assert!(Proposition::contradiction(&s).is_contradiction());
    }

    #[test]
    fn entailment_examples() {
        let s = WorldSpace::new(["a", "b"]).unwrap();
        let a = Proposition::atom(&s, "a").unwrap();
        let b = Proposition::atom(&s, "b").unwrap();
        assert!(entails(&a.and(&b).unwrap(), &a).unwrap());
        assert!(entails(&a, &a.or(&b).unwrap()).unwrap());
        assert!(!entails(&a, &b).unwrap());
    }

    #[test]
    fn mismatched_spaces_are_structural_errors() {
        let s = WorldSpace::new(["a", "b"]).unwrap();
        let t = WorldSpace::new(["a", "c"]).unwrap();
        let a = Proposition::atom(&s, "a").unwrap();
        let c = Proposition::atom(&t, "c").unwrap();
        assert_eq!(entails(&a, &c), Err(ProbError::SpaceMismatch));
        assert!(a.and(&c).is_err());
    }

    #[test]
    fn from_worlds_round_trips_through_text() {
        let s = WorldSpace::new(["x", "y", "z"]).unwrap();
        let set = WorldSet::from_fn(8, |w| w % 3 == 0);
        let p = Proposition::from_worlds(&s, &set).unwrap();
        let q = Proposition::parse(&s, &p.to_string()).unwrap();
        assert_eq!(p, q);
        let none = Proposition::from_worlds(&s, &WorldSet::empty(8)).unwrap();
        assert!(Proposition::parse(&s, &none.to_string())
            .unwrap()
            .is_contradiction());
    }

    #[test]
    fn bitset_handles_multiword_universes() {
        let set = WorldSet::from_fn(200, |w| w % 7 == 0);
        assert_eq!(set.count(), 29);
        let c = set.complement();
        assert_eq!(c.count(), 171);
        assert!(set.intersection(&c).is_empty());
        assert_eq!(set.union(&c), WorldSet::full(200));
    }

    #[test]
    fn compensated_sum_beats_naive() {
        let vals = [1.0, 1e-16, 1e-16, 1e-16, 1e-16, -1.0];
        assert!((compensated_sum(vals) - 4e-16).abs() < 1e-30);
    }
}
