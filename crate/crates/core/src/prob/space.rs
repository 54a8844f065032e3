use std::fmt;
use std::sync::Arc;

use super::ProbError;

/// Dense weight vectors are used for every space, so the atom count is capped.
pub const MAX_ATOMS: usize = 20;

/// A propositional letter.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Atom(String);

impl Atom {
    pub fn new(name: impl Into<String>) -> Result<Self, ProbError> {
        let name = name.into();
        if !is_identifier(&name) {
            return Err(ProbError::InvalidAtomName(name));
        }
        Ok(Atom(name))
    }

    pub fn name(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

pub(crate) fn is_ident_start(c: char) -> bool {
    c.is_ascii_alphabetic() || c == '_'
}

pub(crate) fn is_ident_continue(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_' || c == '*' || c == '\''
}

fn is_identifier(name: &str) -> bool {
    let mut chars = name.chars();
    match chars.next() {
        Some(c) if is_ident_start(c) => chars.all(is_ident_continue),
        _ => false,
    }
}

/// Shared handle to a world space. Propositions and distributions hold one.
pub type SpaceRef = Arc<WorldSpace>;

/// An ordered list of atoms. World `w` assigns atom `k` the truth value of bit `k` of `w`.
#[derive(Debug, PartialEq, Eq, Hash)]
pub struct WorldSpace {
    atoms: Vec<Atom>,
}

impl WorldSpace {
    pub fn new<I, S>(names: I) -> Result<SpaceRef, ProbError>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let atoms = names
            .into_iter()
            .map(Atom::new)
            .collect::<Result<Vec<_>, _>>()?;
        Self::from_atoms(atoms)
    }

    pub fn from_atoms(atoms: Vec<Atom>) -> Result<SpaceRef, ProbError> {
        if atoms.is_empty() {
            return Err(ProbError::EmptySpace);
        }
        if atoms.len() > MAX_ATOMS {
            return Err(ProbError::TooManyAtoms(atoms.len()));
        }
        for (i, a) in atoms.iter().enumerate() {
            if atoms[..i].contains(a) {
                return Err(ProbError::DuplicateAtom(a.name().to_string()));
            }
        }
        Ok(Arc::new(WorldSpace { atoms }))
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn atom_names(&self) -> Vec<String> {
        self.atoms.iter().map(|a| a.name().to_string()).collect()
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn world_count(&self) -> usize {
        1usize << self.atoms.len()
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.atoms.iter().position(|a| a.name() == name)
    }

    /// Truth value of atom `atom` in world `world`.
    #[inline]
    pub fn holds(world: usize, atom: usize) -> bool {
        (world >> atom) & 1 == 1
    }

    /// A new space with `name` appended as the highest-order atom, so the old worlds
    /// occupy the lower half of the index range with the new atom false.
    pub fn extended(&self, name: &str) -> Result<SpaceRef, ProbError> {
        let mut atoms = self.atoms.clone();
        atoms.push(Atom::new(name)?);
        Self::from_atoms(atoms)
    }

    /// `self`'s atoms are exactly the leading atoms of `other`.
    pub fn is_prefix_of(&self, other: &WorldSpace) -> bool {
        other.atoms.len() >= self.atoms.len() && other.atoms[..self.atoms.len()] == self.atoms[..]
    }

    /// Conjunction of literals fixing every atom, e.g. `R & !W & G`.
    pub fn describe_world(&self, world: usize) -> String {
        self.atoms
            .iter()
            .enumerate()
            .map(|(k, a)| {
                if Self::holds(world, k) {
                    a.name().to_string()
                } else {
                    format!("!{}", a.name())
                }
            })
            .collect::<Vec<_>>()
            .join(" & ")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn world_count_is_power_of_two() {
        let s = WorldSpace::new(["R", "W", "G"]).unwrap();
        assert_eq!(s.world_count(), 8);
        assert_eq!(s.index_of("G"), Some(2));
        assert_eq!(s.describe_world(0b101), "R & !W & G");
    }

    #[test]
    fn rejects_bad_atoms() {
        assert!(matches!(
            WorldSpace::new(["a", "a"]),
            Err(ProbError::DuplicateAtom(_))
        ));
        assert!(matches!(
            WorldSpace::new([""]),
            Err(ProbError::InvalidAtomName(_))
        ));
        assert!(matches!(
            WorldSpace::new(["1x"]),
            Err(ProbError::InvalidAtomName(_))
        ));
        assert!(matches!(
            WorldSpace::new(Vec::<String>::new()),
            Err(ProbError::EmptySpace)
        ));
        let many: Vec<String> = (0..21).map(|i| format!("a{i}")).collect();
        assert!(matches!(
            WorldSpace::new(many),
            Err(ProbError::TooManyAtoms(21))
        ));
    }

    #[test]
    fn starred_names_are_identifiers() {
        let s = WorldSpace::new(["C", "E*", "B*"]).unwrap();
        assert_eq!(s.index_of("B*"), Some(2));
    }

    #[test]
    fn extension_appends_high_bit() {
        let s = WorldSpace::new(["O", "T"]).unwrap();
        let e = s.extended("J").unwrap();
        assert!(s.is_prefix_of(&e));
        assert_eq!(e.world_count(), 8);
        assert!(WorldSpace::holds(4, 2));
        assert!(s.extended("O").is_err());
    }
}
