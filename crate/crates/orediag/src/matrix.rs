//! Rectangular matrices over the skew polynomial ring.

use std::sync::Arc;

use crate::algebra::Algebra;
use crate::basepoly::BasePoly;
use crate::error::OreError;
use crate::orepoly::OrePoly;

#[derive(Debug, Clone)]
pub struct OreMatrix {
    pub alg: Arc<Algebra>,
    rows: usize,
    cols: usize,
    entries: Vec<OrePoly>,
}

impl PartialEq for OreMatrix {
    fn eq(&self, other: &Self) -> bool {
        self.alg.id() == other.alg.id()
            && self.rows == other.rows
            && self.cols == other.cols
            && self.entries == other.entries
    }
}

impl Eq for OreMatrix {}

impl OreMatrix {
    pub fn from_rows(alg: &Arc<Algebra>, rows: Vec<Vec<OrePoly>>) -> Result<Self, OreError> {
        let r = rows.len();
        if r == 0 || rows[0].is_empty() {
            return Err(OreError::BadMatrixShape);
        }
        let c = rows[0].len();
        if rows.iter().any(|row| row.len() != c) {
            return Err(OreError::BadMatrixShape);
        }
        let entries: Vec<OrePoly> = rows.into_iter().flatten().collect();
        if entries.iter().any(|e| e.alg.id() != alg.id()) {
            return Err(OreError::AlgebraMismatch);
        }
        Ok(OreMatrix { alg: alg.clone(), rows: r, cols: c, entries })
    }

    pub fn zero(alg: &Arc<Algebra>, rows: usize, cols: usize) -> Self {
        OreMatrix {
            alg: alg.clone(),
            rows,
            cols,
            entries: vec![OrePoly::zero(alg); rows * cols],
        }
    }

    pub fn identity(alg: &Arc<Algebra>, n: usize) -> Self {
        let mut m = Self::zero(alg, n, n);
        for i in 0..n {
            *m.at_mut(i, i) = OrePoly::one(alg);
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn at(&self, r: usize, c: usize) -> &OrePoly {
        &self.entries[r * self.cols + c]
    }

    pub fn at_mut(&mut self, r: usize, c: usize) -> &mut OrePoly {
        &mut self.entries[r * self.cols + c]
    }

    pub fn row(&self, r: usize) -> Vec<OrePoly> {
        (0..self.cols).map(|c| self.at(r, c).clone()).collect()
    }

    pub fn mul(&self, other: &OreMatrix) -> OreMatrix {
        assert_eq!(self.cols, other.rows, "matrix dimension mismatch");
        assert_eq!(self.alg.id(), other.alg.id());
        let mut out = Self::zero(&self.alg, self.rows, other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = OrePoly::zero(&self.alg);
                for k in 0..self.cols {
                    acc = acc.add(&self.at(i, k).mul(other.at(k, j)));
                }
                *out.at_mut(i, j) = acc;
            }
        }
        out
    }

    pub fn is_diagonal(&self) -> bool {
        (0..self.rows).all(|i| (0..self.cols).all(|j| i == j || self.at(i, j).is_zero()))
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| {
                (0..self.cols).all(|j| {
                    if i == j {
                        self.at(i, j).is_one()
                    } else {
                        self.at(i, j).is_zero()
                    }
                })
            })
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|e| e.is_zero())
    }

    pub fn diagonal(&self) -> Vec<OrePoly> {
        (0..self.rows.min(self.cols)).map(|i| self.at(i, i).clone()).collect()
    }

    pub fn map<F: Fn(&OrePoly) -> OrePoly>(&self, f: F) -> OreMatrix {
        OreMatrix {
            alg: self.alg.clone(),
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(f).collect(),
        }
    }

    /// Applies row permutation `perm` (new row i = old row perm[i]).
    pub fn permute_rows(&self, perm: &[usize]) -> OreMatrix {
        assert_eq!(perm.len(), self.rows);
        let mut out = Self::zero(&self.alg, self.rows, self.cols);
        for (new_r, &old_r) in perm.iter().enumerate() {
            for c in 0..self.cols {
                *out.at_mut(new_r, c) = self.at(old_r, c).clone();
            }
        }
        out
    }

    /// Applies column permutation `perm` (new col j = old col perm[j]).
    pub fn permute_cols(&self, perm: &[usize]) -> OreMatrix {
        assert_eq!(perm.len(), self.cols);
        let mut out = Self::zero(&self.alg, self.rows, self.cols);
        for r in 0..self.rows {
            for (new_c, &old_c) in perm.iter().enumerate() {
                *out.at_mut(r, new_c) = self.at(r, old_c).clone();
            }
        }
        out
    }

    pub fn max_coeff_bits(&self) -> u64 {
        self.entries.iter().map(|e| e.max_coeff_bits()).max().unwrap_or(0)
    }

    pub fn max_ddeg(&self) -> Option<u32> {
        self.entries.iter().filter_map(|e| e.ddeg()).max()
    }

    pub fn max_term_count(&self) -> usize {
        self.entries.iter().map(|e| e.term_count()).max().unwrap_or(0)
    }
}

/// A matrix entry of the form den^{-1} * num with a base-ring denominator.
#[derive(Debug, Clone, PartialEq)]
pub struct FracEntry {
    pub den: BasePoly,
    pub num: OrePoly,
}

impl FracEntry {
    pub fn poly(num: OrePoly) -> Self {
        let den = BasePoly::one(num.alg.nvars(), &num.alg.field());
        FracEntry { den, num }
    }

    pub fn is_poly(&self) -> bool {
        self.den.as_scalar().is_some()
    }

    /// Folds a scalar denominator into the numerator.
    pub fn normalized(&self) -> FracEntry {
        match self.den.as_scalar() {
            Some(c) if !c.is_one() => FracEntry {
                den: BasePoly::one(self.den.nvars, &self.num.alg.field()),
                num: self.num.scale(&c.clone().inv()),
            },
            _ => self.clone(),
        }
    }
}

/// Input matrix whose entries may carry base-polynomial denominators.
#[derive(Debug, Clone)]
pub struct RatioMatrix {
    pub alg: Arc<Algebra>,
    rows: usize,
    cols: usize,
    entries: Vec<FracEntry>,
}

impl RatioMatrix {
    pub fn from_rows(alg: &Arc<Algebra>, rows: Vec<Vec<FracEntry>>) -> Result<Self, OreError> {
        let r = rows.len();
        if r == 0 || rows[0].is_empty() {
            return Err(OreError::BadMatrixShape);
        }
        let c = rows[0].len();
        if rows.iter().any(|row| row.len() != c) {
            return Err(OreError::BadMatrixShape);
        }
        let entries: Vec<FracEntry> = rows.into_iter().flatten().collect();
        for e in &entries {
            if e.den.is_zero() {
                return Err(OreError::ZeroDenominator);
            }
        }
        Ok(RatioMatrix { alg: alg.clone(), rows: r, cols: c, entries })
    }

    pub fn from_poly(m: &OreMatrix) -> Self {
        RatioMatrix {
            alg: m.alg.clone(),
            rows: m.rows(),
            cols: m.cols(),
            entries: (0..m.rows())
                .flat_map(|i| (0..m.cols()).map(move |j| (i, j)))
                .map(|(i, j)| FracEntry::poly(m.at(i, j).clone()))
                .collect(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn at(&self, r: usize, c: usize) -> &FracEntry {
        &self.entries[r * self.cols + c]
    }

    /// The polynomial matrix, provided every entry has a scalar denominator.
    pub fn as_poly(&self) -> Option<OreMatrix> {
        let mut out = OreMatrix::zero(&self.alg, self.rows, self.cols);
        for r in 0..self.rows {
            for c in 0..self.cols {
                let e = self.at(r, c).normalized();
                if !e.is_poly() {
                    return None;
                }
                *out.at_mut(r, c) = e.num;
            }
        }
        Some(out)
    }

}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{validate_algebra_spec, AlgebraSpec, Preset};
    use crate::scalar::Field;

    fn weyl() -> Arc<Algebra> {
        validate_algebra_spec(
            AlgebraSpec::preset(Preset::Weyl, Field::Rational, vec!["x".into()], "d".into(), None)
                .unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn identity_multiplication() {
        let alg = weyl();
        let id = OreMatrix::identity(&alg, 2);
        let m = OreMatrix::from_rows(
            &alg,
            vec![
                vec![OrePoly::oper(&alg), OrePoly::one(&alg)],
                vec![OrePoly::base_var(&alg, 0), OrePoly::zero(&alg)],
            ],
        )
        .unwrap();
        assert_eq!(id.mul(&m), m);
        assert_eq!(m.mul(&id), m);
        assert!(!m.is_diagonal());
        assert!(id.is_diagonal() && id.is_identity());
    }

    #[test]
    fn noncommutative_product_entries() {
        // [d] * [x] = [xd + 1] as a 1x1 product
        let alg = weyl();
        let a = OreMatrix::from_rows(&alg, vec![vec![OrePoly::oper(&alg)]]).unwrap();
        let b = OreMatrix::from_rows(&alg, vec![vec![OrePoly::base_var(&alg, 0)]]).unwrap();
        let p = a.mul(&b);
        let expect = OrePoly::oper(&alg).mul(&OrePoly::base_var(&alg, 0));
        assert_eq!(p.at(0, 0), &expect);
    }

    #[test]
    fn ragged_rows_rejected() {
        let alg = weyl();
        let bad = OreMatrix::from_rows(
            &alg,
            vec![vec![OrePoly::one(&alg)], vec![OrePoly::one(&alg), OrePoly::one(&alg)]],
        );
        assert!(matches!(bad, Err(OreError::BadMatrixShape)));
    }
}
