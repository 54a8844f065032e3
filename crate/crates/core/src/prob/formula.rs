//! Boolean formulas over the atoms of a world space.
//!
//! Grammar, loosest binding first:
//!
//! ```text
//! expr   := term ('|' term)*
//! term   := factor ('&' factor)*
//! factor := '!' factor | '(' expr ')' | atom
//! ```

use std::fmt;

use super::space::{is_ident_continue, is_ident_start, WorldSpace};
use super::ProbError;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Formula {
    /// Index of an atom in the owning space.
    Atom(usize),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
}

impl Formula {
    pub fn negate(f: Formula) -> Formula {
        Formula::Not(Box::new(f))
    }

    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn eval(&self, world: usize) -> bool {
        match self {
            Formula::Atom(k) => WorldSpace::holds(world, *k),
            Formula::Not(f) => !f.eval(world),
            Formula::And(a, b) => a.eval(world) && b.eval(world),
            Formula::Or(a, b) => a.eval(world) || b.eval(world),
        }
    }

    pub fn parse(space: &WorldSpace, text: &str) -> Result<Formula, ProbError> {
        let mut p = Parser {
            space,
            src: text,
            chars: text.char_indices().collect(),
            pos: 0,
        };
        let f = p.expr()?;
        p.skip_ws();
        if p.pos < p.chars.len() {
            return Err(p.error("unexpected trailing input"));
        }
        Ok(f)
    }

    /// Renders with atom names from `space`; output re-parses to an equal formula.
    pub fn display<'a>(&'a self, space: &'a WorldSpace) -> FormulaDisplay<'a> {
        FormulaDisplay {
            formula: self,
            space,
        }
    }

    fn fmt_prec(&self, space: &WorldSpace, prec: u8, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::Atom(k) => f.write_str(space.atoms()[*k].name()),
            Formula::Not(inner) => {
                f.write_str("!")?;
                inner.fmt_prec(space, 3, f)
            }
            Formula::And(a, b) => {
                if prec > 2 {
                    f.write_str("(")?;
                }
                a.fmt_prec(space, 2, f)?;
                f.write_str(" & ")?;
                b.fmt_prec(space, 3, f)?;
                if prec > 2 {
                    f.write_str(")")?;
                }
                Ok(())
            }
            Formula::Or(a, b) => {
                if prec > 1 {
                    f.write_str("(")?;
                }
                a.fmt_prec(space, 1, f)?;
                f.write_str(" | ")?;
                b.fmt_prec(space, 2, f)?;
                if prec > 1 {
                    f.write_str(")")?;
                }
                Ok(())
            }
        }
    }
}

pub struct FormulaDisplay<'a> {
    formula: &'a Formula,
    space: &'a WorldSpace,
}

impl fmt::Display for FormulaDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.formula.fmt_prec(self.space, 0, f)
    }
}

struct Parser<'a> {
    space: &'a WorldSpace,
    src: &'a str,
    chars: Vec<(usize, char)>,
    pos: usize,
}

impl Parser<'_> {
    fn error(&self, message: &str) -> ProbError {
        let offset = self
            .chars
            .get(self.pos)
            .map(|(i, _)| *i)
            .unwrap_or(self.src.len());
        ProbError::Parse {
            input: self.src.to_string(),
            offset,
            message: message.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.chars.len() && self.chars[self.pos].1.is_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).map(|(_, c)| *c)
    }

    fn expr(&mut self) -> Result<Formula, ProbError> {
        let mut lhs = self.term()?;
        while self.peek() == Some('|') {
            self.pos += 1;
            let rhs = self.term()?;
            lhs = Formula::or(lhs, rhs);
        }
        Ok(lhs)
    }

    fn term(&mut self) -> Result<Formula, ProbError> {
        let mut lhs = self.factor()?;
        while self.peek() == Some('&') {
            self.pos += 1;
            let rhs = self.factor()?;
            lhs = Formula::and(lhs, rhs);
        }
        Ok(lhs)
    }

    fn factor(&mut self) -> Result<Formula, ProbError> {
        match self.peek() {
            Some('!') => {
                self.pos += 1;
                Ok(Formula::negate(self.factor()?))
            }
            Some('(') => {
                self.pos += 1;
                let inner = self.expr()?;
                if self.peek() != Some(')') {
                    return Err(self.error("expected ')'"));
                }
                self.pos += 1;
                Ok(inner)
            }
            Some(c) if is_ident_start(c) => {
                let start = self.pos;
                while self.pos < self.chars.len() && is_ident_continue(self.chars[self.pos].1) {
                    self.pos += 1;
                }
                let name: String = self.chars[start..self.pos].iter().map(|(_, c)| c).collect();
                match self.space.index_of(&name) {
                    Some(k) => Ok(Formula::Atom(k)),
                    None => {
                        self.pos = start;
                        Err(ProbError::UnknownAtom(name))
                    }
                }
            }
            Some(_) => Err(self.error("expected an atom, '!' or '('")),
            None => Err(self.error("unexpected end of formula")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn space() -> std::sync::Arc<WorldSpace> {
        WorldSpace::new(["a", "b", "c"]).unwrap()
    }

    #[test]
    fn and_binds_tighter_than_or() {
        let s = space();
        let f = Formula::parse(&s, "a | b & c").unwrap();
        assert_eq!(
            f,
            Formula::or(
                Formula::Atom(0),
                Formula::and(Formula::Atom(1), Formula::Atom(2))
            )
        );
    }

    #[test]
    fn display_round_trips() {
        let s = space();
        for text in [
            "!(a | b) & c",
            "a & (b | !c)",
            "!!a",
            "(a | b) & (b | c)",
            "a | b | c",
        ] {
            let f = Formula::parse(&s, text).unwrap();
            let shown = f.display(&s).to_string();
            let again = Formula::parse(&s, &shown).unwrap();
            for w in 0..8 {
                assert_eq!(f.eval(w), again.eval(w), "{text} vs {shown}");
            }
        }
    }

    #[test]
    fn parse_errors() {
        let s = space();
        assert!(matches!(
            Formula::parse(&s, "a & zz"),
            Err(ProbError::UnknownAtom(n)) if n == "zz"
        ));
        assert!(matches!(
            Formula::parse(&s, "a &"),
            Err(ProbError::Parse { .. })
        ));
        assert!(matches!(
            Formula::parse(&s, "(a | b"),
            Err(ProbError::Parse { .. })
        ));
        assert!(matches!(
            Formula::parse(&s, "a b"),
            Err(ProbError::Parse { .. })
        ));
        assert!(matches!(
            Formula::parse(&s, ""),
            Err(ProbError::Parse { .. })
        ));
    }
}
