//! Monomial and module term orders.
//!
//! Scalar monomials are compared by a block order eliminating the Ore
//! variable: the D-power decides first, ties broken on the base exponents by
//! grevlex (default) or lex, the first listed variable being the most
//! significant. Module monomials are compared position-over-term: a higher
//! position beats any term comparison.

use std::cmp::Ordering;

use crate::basepoly::{grevlex, lex};
use crate::error::OreError;

/// Key of one normal-form monomial x^alpha D^b.
pub type OreKey = (Vec<u32>, u32);

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum XTieBreak {
    GrevLex,
    Lex,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TermOrder {
    pub tiebreak: XTieBreak,
}

impl Default for TermOrder {
    fn default() -> Self {
        TermOrder { tiebreak: XTieBreak::GrevLex }
    }
}

impl TermOrder {
    pub fn cmp_key(&self, a: &OreKey, b: &OreKey) -> Ordering {
        a.1.cmp(&b.1).then_with(|| match self.tiebreak {
            XTieBreak::GrevLex => grevlex(&a.0, &b.0),
            XTieBreak::Lex => lex(&a.0, &b.0),
        })
    }
}

/// A module monomial: term key at a component position.
pub type ModMono = (usize, OreKey);

/// Position-over-term order on module monomials of a fixed rank.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ModuleOrder {
    pub rank: usize,
    pub term: TermOrder,
}

impl ModuleOrder {
    pub fn new(rank: usize, term: TermOrder) -> Self {
        ModuleOrder { rank, term }
    }

    pub fn cmp_mono(&self, a: &ModMono, b: &ModMono) -> Ordering {
        a.0.cmp(&b.0).then_with(|| self.term.cmp_key(&a.1, &b.1))
    }

    /// Checked comparison, rejecting monomials outside the module rank.
    pub fn compare(&self, a: &ModMono, b: &ModMono) -> Result<Ordering, OreError> {
        if a.0 >= self.rank || b.0 >= self.rank {
            return Err(OreError::RankMismatch(a.0.max(b.0) + 1, self.rank));
        }
        Ok(self.cmp_mono(a, b))
    }
}

/// Componentwise divisibility of term keys.
pub fn key_divides(d: &OreKey, m: &OreKey) -> bool {
    d.1 <= m.1 && d.0.iter().zip(&m.0).all(|(x, y)| x <= y)
}

pub fn key_lcm(a: &OreKey, b: &OreKey) -> OreKey {
    (
        a.0.iter().zip(&b.0).map(|(x, y)| *x.max(y)).collect(),
        a.1.max(b.1),
    )
}

pub fn key_sub(m: &OreKey, d: &OreKey) -> OreKey {
    (
        m.0.iter().zip(&d.0).map(|(x, y)| x - y).collect(),
        m.1 - d.1,
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn position_dominates() {
        // x e_0 vs D e_1: the higher position wins regardless of the term
        let ord = ModuleOrder::new(2, TermOrder::default());
        let xe0: ModMono = (0, (vec![1], 0));
        let de1: ModMono = (1, (vec![0], 1));
        assert_eq!(ord.compare(&xe0, &de1).unwrap(), Ordering::Less);
    }

    #[test]
    fn oper_eliminates_base_variables() {
        // x^5 vs D within one position
        let ord = ModuleOrder::new(1, TermOrder::default());
        let x5: ModMono = (0, (vec![5], 0));
        let d: ModMono = (0, (vec![0], 1));
        assert_eq!(ord.compare(&x5, &d).unwrap(), Ordering::Less);
    }

    #[test]
    fn grevlex_breaks_base_ties() {
        // x^2 y > x y^2 with x listed first
        let ord = ModuleOrder::new(1, TermOrder::default());
        let a: ModMono = (0, (vec![2, 1], 0));
        let b: ModMono = (0, (vec![1, 2], 0));
        assert_eq!(ord.compare(&a, &b).unwrap(), Ordering::Greater);
    }

    #[test]
    fn rank_is_checked() {
        let ord = ModuleOrder::new(1, TermOrder::default());
        let a: ModMono = (1, (vec![0], 0));
        assert!(ord.compare(&a, &a).is_err());
    }

    #[test]
    fn lex_tiebreak_differs() {
        let t = TermOrder { tiebreak: XTieBreak::Lex };
        // x y^2 vs x^2: lex with x most significant says x^2 bigger
        assert_eq!(t.cmp_key(&(vec![1, 2], 0), &(vec![2, 0], 0)), Ordering::Less);
        // grevlex compares total degree first, so x y^2 (degree 3) wins
        let g = TermOrder::default();
        assert_eq!(g.cmp_key(&(vec![1, 2], 0), &(vec![2, 0], 0)), Ordering::Greater);
    }
}
