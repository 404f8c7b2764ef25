use std::sync::Arc;

use crate::error::{Error, Result};
use crate::words::{reduce, Alphabet, Word};

use super::{kb_complete, CompletionLimits, Presentation, RewritingSystem};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OracleKind {
    Free,
    RewritingSystem,
}

/// Solves the word problem by normal forms. Normal forms are shortlex-least
/// representatives, so their length is the word metric.
#[derive(Clone, Debug)]
pub enum GroupOracle {
    Free(Alphabet),
    Rewriting(Arc<RewritingSystem>),
}

impl GroupOracle {
    pub fn free(rank: usize) -> Self {
        GroupOracle::Free(Alphabet::free(rank))
    }

    /// Free presentations use plain free reduction; anything else is completed
    /// and must come out confluent.
    pub fn from_presentation(p: &Presentation, limits: CompletionLimits) -> Result<Self> {
        if p.is_free() {
            return Ok(GroupOracle::Free(p.alphabet.clone()));
        }
        let rs = kb_complete(p, limits);
        if !rs.is_confluent() {
            return Err(Error::NotConfluent);
        }
        Ok(GroupOracle::Rewriting(Arc::new(rs)))
    }

    pub fn from_rewriting_system(rs: RewritingSystem) -> Result<Self> {
        if !rs.is_confluent() {
            return Err(Error::NotConfluent);
        }
        Ok(GroupOracle::Rewriting(Arc::new(rs)))
    }

    pub fn kind(&self) -> OracleKind {
        match self {
            GroupOracle::Free(_) => OracleKind::Free,
            GroupOracle::Rewriting(_) => OracleKind::RewritingSystem,
        }
    }

    pub fn is_free(&self) -> bool {
        self.kind() == OracleKind::Free
    }

    pub fn alphabet(&self) -> &Alphabet {
        match self {
            GroupOracle::Free(a) => a,
            GroupOracle::Rewriting(rs) => rs.alphabet(),
        }
    }

    pub fn normal_form(&self, w: &Word) -> Word {
        match self {
            GroupOracle::Free(_) => reduce(w),
            GroupOracle::Rewriting(rs) => rs.rewrite(w),
        }
    }

    pub fn multiply(&self, a: &Word, b: &Word) -> Word {
        self.normal_form(&a.concat(b))
    }

    /// Word length `|g|`.
    pub fn length(&self, w: &Word) -> usize {
        self.normal_form(w).len()
    }

    /// `d(x, y) = |x⁻¹ y|`.
    pub fn distance(&self, x: &Word, y: &Word) -> usize {
        self.distance_word(x, y).len()
    }

    /// Normal form of `x⁻¹ y`.
    pub fn distance_word(&self, x: &Word, y: &Word) -> Word {
        self.normal_form(&x.inverse().concat(y))
    }
}

pub fn equal(oracle: &GroupOracle, w1: &Word, w2: &Word) -> bool {
    oracle.normal_form(w1) == oracle.normal_form(w2)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn equality_examples() {
        let f2 = GroupOracle::free(2);
        let a = f2.alphabet().clone();
        let w = |s: &str| a.parse_word(s).unwrap();
        assert!(equal(&f2, &w("ab"), &w("ab")));
        assert!(!equal(&f2, &w("ab"), &w("ba")));

        let z2 = GroupOracle::from_presentation(
            &Presentation::parse("gens: a b\nrel: abAB").unwrap(),
            CompletionLimits::default(),
        )
        .unwrap();
        assert_eq!(z2.kind(), OracleKind::RewritingSystem);
        assert!(equal(&z2, &w("ab"), &w("ba")));
        assert_eq!(z2.distance(&w("a"), &w("b")), 2);
    }
}
