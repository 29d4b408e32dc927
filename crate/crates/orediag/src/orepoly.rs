//! Normal-form elements of the skew polynomial ring: finite sums of
//! c * x^alpha * D^b with all base powers left of all D powers.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::algebra::Algebra;
use crate::basepoly::{exp_add, BasePoly};
use crate::error::OreError;
use crate::order::{OreKey, TermOrder};
use crate::scalar::Scalar;

#[derive(Debug, Clone)]
pub struct OrePoly {
    pub alg: Arc<Algebra>,
    pub terms: BTreeMap<OreKey, Scalar>,
}

impl PartialEq for OrePoly {
    fn eq(&self, other: &Self) -> bool {
        self.alg.id() == other.alg.id() && self.terms == other.terms
    }
}

impl Eq for OrePoly {}

impl OrePoly {
    pub fn zero(alg: &Arc<Algebra>) -> Self {
        OrePoly { alg: alg.clone(), terms: BTreeMap::new() }
    }

    pub fn constant(alg: &Arc<Algebra>, c: Scalar) -> Self {
        let mut p = Self::zero(alg);
        p.add_term((vec![0; alg.nvars()], 0), c);
        p
    }

    pub fn one(alg: &Arc<Algebra>) -> Self {
        Self::constant(alg, alg.field().one())
    }

    /// The Ore variable D.
    pub fn oper(alg: &Arc<Algebra>) -> Self {
        let mut p = Self::zero(alg);
        p.add_term((vec![0; alg.nvars()], 1), alg.field().one());
        p
    }

    /// The i-th base variable.
    pub fn base_var(alg: &Arc<Algebra>, i: usize) -> Self {
        let mut e = vec![0; alg.nvars()];
        e[i] = 1;
        let mut p = Self::zero(alg);
        p.add_term((e, 0), alg.field().one());
        p
    }

    pub fn monomial(alg: &Arc<Algebra>, exps: Vec<u32>, dpow: u32, c: Scalar) -> Self {
        assert_eq!(exps.len(), alg.nvars());
        let mut p = Self::zero(alg);
        p.add_term((exps, dpow), c);
        p
    }

    pub fn from_base(alg: &Arc<Algebra>, p: &BasePoly) -> Self {
        assert_eq!(p.nvars, alg.nvars());
        let mut out = Self::zero(alg);
        for (e, c) in &p.terms {
            out.add_term((e.clone(), 0), c.clone());
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1
            && self
                .terms
                .iter()
                .all(|((e, b), c)| e.iter().all(|&x| x == 0) && *b == 0 && c.is_one())
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    /// D-weighted degree: weight 0 on base variables, weight 1 on D.
    /// None encodes the degree of the zero polynomial.
    pub fn ddeg(&self) -> Option<u32> {
        self.terms.keys().map(|(_, b)| *b).max()
    }

    /// True when no term carries a power of D.
    pub fn is_base(&self) -> bool {
        self.terms.keys().all(|(_, b)| *b == 0)
    }

    /// The base polynomial content of a D-free element.
    pub fn to_base(&self) -> Option<BasePoly> {
        if !self.is_base() {
            return None;
        }
        let mut p = BasePoly::zero(self.alg.nvars());
        for ((e, _), c) in &self.terms {
            p.add_term(e.clone(), c.clone());
        }
        Some(p)
    }

    /// Coefficients grouped by D-power.
    pub fn levels(&self) -> BTreeMap<u32, BasePoly> {
        let mut out: BTreeMap<u32, BasePoly> = BTreeMap::new();
        let n = self.alg.nvars();
        for ((e, b), c) in &self.terms {
            out.entry(*b)
                .or_insert_with(|| BasePoly::zero(n))
                .add_term(e.clone(), c.clone());
        }
        out.retain(|_, p| !p.is_zero());
        out
    }

    pub fn from_levels(alg: &Arc<Algebra>, levels: &BTreeMap<u32, BasePoly>) -> Self {
        let mut out = Self::zero(alg);
        for (b, p) in levels {
            for (e, c) in &p.terms {
                out.add_term((e.clone(), *b), c.clone());
            }
        }
        out
    }

    pub fn add_term(&mut self, key: OreKey, c: Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(key) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = o.get().add(&c);
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    fn assert_same_algebra(&self, other: &OrePoly) {
        assert_eq!(self.alg.id(), other.alg.id(), "operands from different algebras");
    }

    pub fn add(&self, other: &OrePoly) -> OrePoly {
        self.assert_same_algebra(other);
        let mut out = self.clone();
        for (k, c) in &other.terms {
            out.add_term(k.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &OrePoly) -> OrePoly {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> OrePoly {
        OrePoly {
            alg: self.alg.clone(),
            terms: self.terms.iter().map(|(k, c)| (k.clone(), c.neg())).collect(),
        }
    }

    pub fn scale(&self, c: &Scalar) -> OrePoly {
        if c.is_zero() {
            return Self::zero(&self.alg);
        }
        OrePoly {
            alg: self.alg.clone(),
            terms: self.terms.iter().map(|(k, s)| (k.clone(), s.mul(c))).collect(),
        }
    }

    /// Left multiplication by a base polynomial (acts on coefficients).
    pub fn base_mul_left(&self, p: &BasePoly) -> OrePoly {
        let mut out = Self::zero(&self.alg);
        for (pe, pc) in &p.terms {
            for ((e, b), c) in &self.terms {
                out.add_term((exp_add(pe, e), *b), pc.mul(c));
            }
        }
        out
    }

    /// The ring product, renormalized to the x-left normal form via the
    /// commutation rule D a = sigma(a) D + delta(a).
    pub fn mul(&self, other: &OrePoly) -> OrePoly {
        self.assert_same_algebra(other);
        let mut out = Self::zero(&self.alg);
        if self.is_zero() || other.is_zero() {
            return out;
        }
        // D^b * other for every b used by self, built incrementally
        let mut shifted: Vec<BTreeMap<u32, BasePoly>> = vec![other.levels()];
        let max_b = self.terms.keys().map(|(_, b)| *b).max().unwrap();
        while shifted.len() <= max_b as usize {
            let prev = shifted.last().unwrap();
            let mut next: BTreeMap<u32, BasePoly> = BTreeMap::new();
            for (j, q) in prev {
                let s = self.alg.sigma(q);
                if !s.is_zero() {
                    let slot = next.entry(j + 1).or_insert_with(|| BasePoly::zero(q.nvars));
                    *slot = slot.add(&s);
                }
                let d = self.alg.delta(q);
                if !d.is_zero() {
                    let slot = next.entry(*j).or_insert_with(|| BasePoly::zero(q.nvars));
                    *slot = slot.add(&d);
                }
            }
            next.retain(|_, p| !p.is_zero());
            shifted.push(next);
        }
        for ((e, b), c) in &self.terms {
            for (j, q) in &shifted[*b as usize] {
                for (qe, qc) in &q.terms {
                    out.add_term((exp_add(e, qe), *j), c.mul(qc));
                }
            }
        }
        out
    }

    /// Like `mul` but reports mismatched algebras instead of panicking.
    pub fn checked_mul(&self, other: &OrePoly) -> Result<OrePoly, OreError> {
        if self.alg.id() != other.alg.id() {
            return Err(OreError::AlgebraMismatch);
        }
        Ok(self.mul(other))
    }

    pub fn pow(&self, e: u32) -> OrePoly {
        let mut acc = Self::one(&self.alg);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Largest term under the given order; None for zero.
    pub fn leading_term(&self, order: &TermOrder) -> Option<(&OreKey, &Scalar)> {
        self.terms.iter().max_by(|a, b| order.cmp_key(a.0, b.0))
    }

    /// Leading monomial, leading coefficient and D-weighted degree.
    pub fn leading_data(&self, order: &TermOrder) -> Result<(OreKey, Scalar, u32), OreError> {
        let (k, c) = self.leading_term(order).ok_or(OreError::ZeroPolynomial)?;
        Ok((k.clone(), c.clone(), k.1))
    }

    /// Scales so the leading coefficient becomes 1.
    pub fn monic(&self, order: &TermOrder) -> OrePoly {
        match self.leading_term(order) {
            None => self.clone(),
            Some((_, c)) => self.scale(&c.clone().inv()),
        }
    }

    pub fn max_coeff_bits(&self) -> u64 {
        self.terms.values().map(|c| c.bit_length()).max().unwrap_or(0)
    }

    /// Substitutes scalars for the base variables, leaving D; returns the
    /// D-power -> coefficient map of the result.
    pub fn eval_base(&self, values: &[Scalar]) -> BTreeMap<u32, Scalar> {
        let field = self.alg.field();
        let mut out: BTreeMap<u32, Scalar> = BTreeMap::new();
        for (b, p) in self.levels() {
            let v = p.eval(values, &field);
            if !v.is_zero() {
                out.insert(b, v);
            }
        }
        out
    }
}
