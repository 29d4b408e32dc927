//! The rational-coefficient baseline: arithmetic in K(x)[D; sigma, delta]
//! for one base variable, left/right Euclidean division, extended gcd and
//! least common left multiples, and the diagonalization loop over the PID.
//! It serves as the independent oracle against the fraction-free pipeline
//! and as the coefficient-swell comparison subject.

use std::sync::Arc;

use crate::algebra::{Algebra, Preset};
use crate::basepoly::BasePoly;
use crate::error::{OreError, VerifyCheck};
use crate::matrix::FracEntry;
use crate::orepoly::OrePoly;
use crate::scalar::{Field, Scalar};

/// A reduced fraction of univariate base polynomials with monic denominator.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RatFunc {
    pub num: BasePoly,
    pub den: BasePoly,
}

impl RatFunc {
    pub fn new(num: BasePoly, den: BasePoly) -> Result<RatFunc, OreError> {
        if den.is_zero() {
            return Err(OreError::ZeroDenominator);
        }
        Ok(RatFunc { num, den }.reduced())
    }

    pub fn zero(field: &Field) -> RatFunc {
        RatFunc { num: BasePoly::zero(1), den: BasePoly::one(1, field) }
    }

    pub fn one(field: &Field) -> RatFunc {
        RatFunc { num: BasePoly::one(1, field), den: BasePoly::one(1, field) }
    }

    pub fn from_base(p: &BasePoly) -> RatFunc {
        debug_assert_eq!(p.nvars, 1);
        let field = p.terms.values().next().map(|c| c.field()).unwrap_or(Field::Rational);
        RatFunc { num: p.clone(), den: BasePoly::one(1, &field) }
    }

    pub fn from_scalar(c: &Scalar) -> RatFunc {
        RatFunc {
            num: BasePoly::constant(1, c.clone()),
            den: BasePoly::one(1, &c.field()),
        }
    }

    fn reduced(self) -> RatFunc {
        if self.num.is_zero() {
            let field = self
                .den
                .terms
                .values()
                .next()
                .map(|c| c.field())
                .unwrap_or(Field::Rational);
            return RatFunc::zero(&field);
        }
        // constant numerator or denominator needs no gcd
        let (num, den) = if let Some(c) = self.den.as_scalar() {
            let inv = c.clone().inv();
            let field = c.field();
            return RatFunc { num: self.num.scale(&inv), den: BasePoly::one(1, &field) };
        } else if self.num.as_scalar().is_some() {
            (self.num, self.den)
        } else {
            let g = self.num.gcd1(&self.den);
            if g.total_degree() == Some(0) {
                (self.num, self.den)
            } else {
                (
                    self.num.div_rem1(&g).unwrap().0,
                    self.den.div_rem1(&g).unwrap().0,
                )
            }
        };
        // monic denominator
        let lead = den.leading_term().unwrap().1.clone();
        if lead.is_one() {
            RatFunc { num, den }
        } else {
            RatFunc { num: num.scale(&lead.inv()), den: den.scale(&lead.inv()) }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num == self.den
    }

    pub fn add(&self, other: &RatFunc) -> RatFunc {
        RatFunc {
            num: self.num.mul(&other.den).add(&other.num.mul(&self.den)),
            den: self.den.mul(&other.den),
        }
        .reduced()
    }

    pub fn sub(&self, other: &RatFunc) -> RatFunc {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> RatFunc {
        RatFunc { num: self.num.neg(), den: self.den.clone() }
    }

    pub fn mul(&self, other: &RatFunc) -> RatFunc {
        RatFunc { num: self.num.mul(&other.num), den: self.den.mul(&other.den) }.reduced()
    }

    pub fn inv(&self) -> RatFunc {
        assert!(!self.is_zero(), "inverse of zero rational function");
        RatFunc { num: self.den.clone(), den: self.num.clone() }.reduced()
    }

    pub fn div(&self, other: &RatFunc) -> RatFunc {
        self.mul(&other.inv())
    }

    pub fn max_coeff_bits(&self) -> u64 {
        self.num.max_coeff_bits().max(self.den.max_coeff_bits())
    }
}

/// sigma and delta extended to rational functions: sigma(p/q) = sigma(p)/sigma(q),
/// delta(p/q) = (delta(p) q - delta(q) p) / (sigma(q) q).
pub fn rat_sigma_delta(alg: &Arc<Algebra>, r: &RatFunc) -> Result<(RatFunc, RatFunc), OreError> {
    if alg.nvars() != 1 {
        return Err(OreError::NotUnivariate(alg.nvars()));
    }
    if r.den.is_zero() {
        return Err(OreError::ZeroDenominator);
    }
    let sp = alg.sigma(&r.num);
    let sq = alg.sigma(&r.den);
    let sigma = RatFunc::new(sp, sq)?;
    let dp = alg.delta(&r.num);
    let dq = alg.delta(&r.den);
    let delta = RatFunc::new(
        dp.mul(&r.den).sub(&dq.mul(&r.num)),
        alg.sigma(&r.den).mul(&r.den),
    )?;
    Ok((sigma, delta))
}

fn rat_sigma(alg: &Arc<Algebra>, r: &RatFunc) -> RatFunc {
    rat_sigma_delta(alg, r).unwrap().0
}

fn rat_sigma_inv(alg: &Arc<Algebra>, r: &RatFunc) -> RatFunc {
    let inv = alg.endo_inverse();
    let field = alg.field();
    RatFunc::new(inv.apply(&r.num, &field).unwrap(), inv.apply(&r.den, &field).unwrap()).unwrap()
}

/// Element of K(x)[D]: coefficient f_i of D^i at index i, trailing
/// coefficient nonzero.
#[derive(Debug, Clone)]
pub struct RatOrePoly {
    pub alg: Arc<Algebra>,
    pub coeffs: Vec<RatFunc>,
}

impl PartialEq for RatOrePoly {
    fn eq(&self, other: &Self) -> bool {
        self.alg.id() == other.alg.id() && self.coeffs == other.coeffs
    }
}

impl Eq for RatOrePoly {}

impl RatOrePoly {
    pub fn zero(alg: &Arc<Algebra>) -> Self {
        RatOrePoly { alg: alg.clone(), coeffs: Vec::new() }
    }

    pub fn from_coeffs(alg: &Arc<Algebra>, mut coeffs: Vec<RatFunc>) -> Self {
        while coeffs.last().map(|c| c.is_zero()).unwrap_or(false) {
            coeffs.pop();
        }
        RatOrePoly { alg: alg.clone(), coeffs }
    }

    pub fn constant(alg: &Arc<Algebra>, c: RatFunc) -> Self {
        Self::from_coeffs(alg, vec![c])
    }

    pub fn one(alg: &Arc<Algebra>) -> Self {
        Self::constant(alg, RatFunc::one(&alg.field()))
    }

    pub fn oper(alg: &Arc<Algebra>) -> Self {
        Self::from_coeffs(alg, vec![RatFunc::zero(&alg.field()), RatFunc::one(&alg.field())])
    }

    /// D-degree; None for zero.
    pub fn deg(&self) -> Option<usize> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_unit(&self) -> bool {
        self.deg() == Some(0)
    }

    pub fn lc(&self) -> &RatFunc {
        self.coeffs.last().expect("leading coefficient of zero")
    }

    pub fn coeff(&self, k: usize) -> RatFunc {
        self.coeffs.get(k).cloned().unwrap_or_else(|| RatFunc::zero(&self.alg.field()))
    }

    pub fn from_ore(f: &OrePoly) -> Result<RatOrePoly, OreError> {
        if f.alg.nvars() != 1 {
            return Err(OreError::NotUnivariate(f.alg.nvars()));
        }
        let levels = f.levels();
        let max = levels.keys().max().copied().unwrap_or(0);
        let mut coeffs = vec![RatFunc::zero(&f.alg.field()); max as usize + 1];
        for (b, p) in levels {
            coeffs[b as usize] = RatFunc::from_base(&p);
        }
        Ok(Self::from_coeffs(&f.alg, coeffs))
    }

    /// Clears coefficient denominators: returns (den, num) with
    /// self = den^{-1} * num and num polynomial.
    pub fn clear_denominators(&self) -> FracEntry {
        let field = self.alg.field();
        let mut den = BasePoly::one(1, &field);
        for c in &self.coeffs {
            den = den.lcm1(&c.den);
        }
        let mut num = OrePoly::zero(&self.alg);
        for (i, c) in self.coeffs.iter().enumerate() {
            let scaled = den.div_rem1(&c.den).unwrap().0.mul(&c.num);
            for (e, s) in &scaled.terms {
                num.add_term((e.clone(), i as u32), s.clone());
            }
        }
        FracEntry { den, num }
    }

    pub fn add(&self, other: &RatOrePoly) -> RatOrePoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n).map(|i| self.coeff(i).add(&other.coeff(i))).collect();
        Self::from_coeffs(&self.alg, coeffs)
    }

    pub fn sub(&self, other: &RatOrePoly) -> RatOrePoly {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> RatOrePoly {
        RatOrePoly {
            alg: self.alg.clone(),
            coeffs: self.coeffs.iter().map(|c| c.neg()).collect(),
        }
    }

    /// Left multiplication by an element of K(x).
    pub fn scale_left(&self, c: &RatFunc) -> RatOrePoly {
        if c.is_zero() {
            return Self::zero(&self.alg);
        }
        RatOrePoly {
            alg: self.alg.clone(),
            coeffs: self.coeffs.iter().map(|f| c.mul(f)).collect(),
        }
    }

    /// Left multiplication by D: D (f D^j) = sigma(f) D^{j+1} + delta(f) D^j.
    fn oper_shift(&self) -> RatOrePoly {
        let field = self.alg.field();
        let mut coeffs = vec![RatFunc::zero(&field); self.coeffs.len() + 1];
        for (j, f) in self.coeffs.iter().enumerate() {
            let (s, d) = rat_sigma_delta(&self.alg, f).unwrap();
            coeffs[j + 1] = coeffs[j + 1].add(&s);
            coeffs[j] = coeffs[j].add(&d);
        }
        Self::from_coeffs(&self.alg, coeffs)
    }

    pub fn mul(&self, other: &RatOrePoly) -> RatOrePoly {
        assert_eq!(self.alg.id(), other.alg.id());
        let mut out = Self::zero(&self.alg);
        if self.is_zero() || other.is_zero() {
            return out;
        }
        let mut shifted = other.clone();
        for (i, f) in self.coeffs.iter().enumerate() {
            if i > 0 {
                shifted = shifted.oper_shift();
            }
            if !f.is_zero() {
                out = out.add(&shifted.scale_left(f));
            }
        }
        out
    }

    pub fn monic(&self) -> RatOrePoly {
        if self.is_zero() {
            return self.clone();
        }
        self.scale_left(&self.lc().inv())
    }

    pub fn max_coeff_bits(&self) -> u64 {
        self.coeffs.iter().map(|c| c.max_coeff_bits()).max().unwrap_or(0)
    }
}

/// Right division b = q*a + r with deg r < deg a.
pub fn right_divide(b: &RatOrePoly, a: &RatOrePoly) -> Result<(RatOrePoly, RatOrePoly), OreError> {
    if a.is_zero() {
        return Err(OreError::DivisionByZero);
    }
    let alg = b.alg.clone();
    let da = a.deg().unwrap();
    let mut q = RatOrePoly::zero(&alg);
    let mut r = b.clone();
    while let Some(dr) = r.deg() {
        if dr < da {
            break;
        }
        let k = dr - da;
        // lt(c D^k * a) = c sigma^k(lc a) D^dr
        let mut sk = a.lc().clone();
        for _ in 0..k {
            sk = rat_sigma(&alg, &sk);
        }
        let c = r.lc().div(&sk);
        let mut piece = vec![RatFunc::zero(&alg.field()); k + 1];
        piece[k] = c;
        let piece = RatOrePoly::from_coeffs(&alg, piece);
        r = r.sub(&piece.mul(a));
        q = q.add(&piece);
    }
    Ok((q, r))
}

/// Left division b = a*q + r with deg r < deg a.
pub fn left_divide(b: &RatOrePoly, a: &RatOrePoly) -> Result<(RatOrePoly, RatOrePoly), OreError> {
    if a.is_zero() {
        return Err(OreError::DivisionByZero);
    }
    let alg = b.alg.clone();
    let da = a.deg().unwrap();
    let mut q = RatOrePoly::zero(&alg);
    let mut r = b.clone();
    while let Some(dr) = r.deg() {
        if dr < da {
            break;
        }
        let k = dr - da;
        // lt(a * c D^k) = lc(a) sigma^da(c) D^dr
        let mut c = r.lc().div(a.lc());
        for _ in 0..da {
            c = rat_sigma_inv(&alg, &c);
        }
        let mut piece = vec![RatFunc::zero(&alg.field()); k + 1];
        piece[k] = c;
        let piece = RatOrePoly::from_coeffs(&alg, piece);
        r = r.sub(&a.mul(&piece));
        q = q.add(&piece);
    }
    Ok((q, r))
}

/// Extended right Euclid: the monic right gcd with Bezout cofactors
/// g = s*a + t*b, plus the least common left multiple with its cofactors
/// lclm = u*a = w*b.
#[derive(Debug, Clone)]
pub struct GcdLclm {
    pub gcd: RatOrePoly,
    pub s: RatOrePoly,
    pub t: RatOrePoly,
    pub lclm: RatOrePoly,
    pub lclm_cof_a: RatOrePoly,
    pub lclm_cof_b: RatOrePoly,
}

pub fn gcd_lclm(a: &RatOrePoly, b: &RatOrePoly) -> Result<GcdLclm, OreError> {
    if a.is_zero() && b.is_zero() {
        return Err(OreError::DivisionByZero);
    }
    let alg = a.alg.clone();
    let one = RatOrePoly::one(&alg);
    let zero = RatOrePoly::zero(&alg);
    let (mut r0, mut s0, mut t0) = (a.clone(), one.clone(), zero.clone());
    let (mut r1, mut s1, mut t1) = (b.clone(), zero, one);
    while !r1.is_zero() {
        let (q, r2) = right_divide(&r0, &r1)?;
        let s2 = s0.sub(&q.mul(&s1));
        let t2 = t0.sub(&q.mul(&t1));
        (r0, s0, t0) = (r1, s1, t1);
        (r1, s1, t1) = (r2, s2, t2);
    }
    // normalize the gcd monic, scaling the Bezout row along
    let scale = r0.lc().inv();
    let gcd = r0.scale_left(&scale);
    let s = s0.scale_left(&scale);
    let t = t0.scale_left(&scale);
    // the terminating row satisfies s1*a + t1*b = 0, so s1*a = -t1*b is a
    // common left multiple of smallest degree; it vanishes only when one
    // input is zero, in which case 0 is the only common left multiple
    let lclm_raw = s1.mul(a);
    let (lclm, u, w) = if lclm_raw.is_zero() {
        (RatOrePoly::zero(&alg), s1, t1.neg())
    } else {
        let c = lclm_raw.lc().inv();
        (lclm_raw.scale_left(&c), s1.scale_left(&c), t1.neg().scale_left(&c))
    };
    Ok(GcdLclm { gcd, s, t, lclm, lclm_cof_a: u, lclm_cof_b: w })
}

/// Matrix over K(x)[D].
#[derive(Debug, Clone)]
pub struct RatMatrix {
    pub alg: Arc<Algebra>,
    rows: usize,
    cols: usize,
    entries: Vec<RatOrePoly>,
}

impl PartialEq for RatMatrix {
    fn eq(&self, other: &Self) -> bool {
        self.alg.id() == other.alg.id()
            && self.rows == other.rows
            && self.cols == other.cols
            && self.entries == other.entries
    }
}

impl Eq for RatMatrix {}

impl RatMatrix {
    pub fn from_rows(alg: &Arc<Algebra>, rows: Vec<Vec<RatOrePoly>>) -> Result<Self, OreError> {
        let r = rows.len();
        if r == 0 || rows[0].is_empty() {
            return Err(OreError::BadMatrixShape);
        }
        let c = rows[0].len();
        if rows.iter().any(|row| row.len() != c) {
            return Err(OreError::BadMatrixShape);
        }
        Ok(RatMatrix { alg: alg.clone(), rows: r, cols: c, entries: rows.into_iter().flatten().collect() })
    }

    pub fn zero(alg: &Arc<Algebra>, rows: usize, cols: usize) -> Self {
        RatMatrix { alg: alg.clone(), rows, cols, entries: vec![RatOrePoly::zero(alg); rows * cols] }
    }

    pub fn identity(alg: &Arc<Algebra>, n: usize) -> Self {
        let mut m = Self::zero(alg, n, n);
        for i in 0..n {
            *m.at_mut(i, i) = RatOrePoly::one(alg);
        }
        m
    }

    /// Reads a polynomial matrix as a rational one (requires one variable).
    pub fn from_ore_matrix(m: &crate::matrix::OreMatrix) -> Result<Self, OreError> {
        let mut rows = Vec::with_capacity(m.rows());
        for i in 0..m.rows() {
            let mut row = Vec::with_capacity(m.cols());
            for j in 0..m.cols() {
                row.push(RatOrePoly::from_ore(m.at(i, j))?);
            }
            rows.push(row);
        }
        Self::from_rows(&m.alg, rows)
    }

    /// Reads a fraction-entry matrix: each entry den^{-1} * num.
    pub fn from_ratio_matrix(m: &crate::matrix::RatioMatrix) -> Result<Self, OreError> {
        let mut rows = Vec::with_capacity(m.rows());
        for i in 0..m.rows() {
            let mut row = Vec::with_capacity(m.cols());
            for j in 0..m.cols() {
                let e = m.at(i, j);
                let num = RatOrePoly::from_ore(&e.num)?;
                let dinv = RatFunc::new(
                    BasePoly::one(1, &m.alg.field()),
                    e.den.clone(),
                )?;
                row.push(num.scale_left(&dinv));
            }
            rows.push(row);
        }
        Self::from_rows(&m.alg, rows)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn at(&self, r: usize, c: usize) -> &RatOrePoly {
        &self.entries[r * self.cols + c]
    }

    pub fn at_mut(&mut self, r: usize, c: usize) -> &mut RatOrePoly {
        &mut self.entries[r * self.cols + c]
    }

    pub fn mul(&self, other: &RatMatrix) -> RatMatrix {
        assert_eq!(self.cols, other.rows);
        let mut out = Self::zero(&self.alg, self.rows, other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = RatOrePoly::zero(&self.alg);
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

    pub fn diagonal(&self) -> Vec<RatOrePoly> {
        (0..self.rows.min(self.cols)).map(|i| self.at(i, i).clone()).collect()
    }

    pub fn permute_rows(&self, perm: &[usize]) -> RatMatrix {
        let mut out = Self::zero(&self.alg, self.rows, self.cols);
        for (new_r, &old_r) in perm.iter().enumerate() {
            for c in 0..self.cols {
                *out.at_mut(new_r, c) = self.at(old_r, c).clone();
            }
        }
        out
    }

    pub fn permute_cols(&self, perm: &[usize]) -> RatMatrix {
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

    pub fn max_deg(&self) -> Option<usize> {
        self.entries.iter().filter_map(|e| e.deg()).max()
    }

    pub fn max_term_count(&self) -> usize {
        self.entries.iter().map(|e| e.coeffs.iter().filter(|c| !c.is_zero()).count()).max().unwrap_or(0)
    }
}

fn row_lpos(row: &[RatOrePoly]) -> Option<usize> {
    (0..row.len()).rev().find(|&j| !row[j].is_zero())
}

fn row_sub_mul(a: &[RatOrePoly], q: &RatOrePoly, b: &[RatOrePoly]) -> Vec<RatOrePoly> {
    a.iter().zip(b).map(|(x, y)| x.sub(&q.mul(y))).collect()
}

/// Euclidean triangularization of extended rows [e_i | M_i] over the PID:
/// one reduced pivot per occupied position, with cofactors and syzygies.
pub struct RatGB {
    pub gb: Vec<Vec<RatOrePoly>>,
    pub cofactors: Vec<Vec<RatOrePoly>>,
    pub syzygies: Vec<Vec<RatOrePoly>>,
    pub positions: Vec<usize>,
}

pub fn rat_groebner_extended(rows: &[Vec<RatOrePoly>]) -> Result<RatGB, OreError> {
    if rows.is_empty() {
        return Err(OreError::BadMatrixShape);
    }
    let rank = rows[0].len();
    if rows.iter().any(|r| r.len() != rank) {
        return Err(OreError::RankMismatch(rank, rows.len()));
    }
    let alg = rows[0][0].alg.clone();
    let s = rows.len();
    let ext = s + rank;

    let mut basis: Vec<Vec<RatOrePoly>> = rows
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut ext_row = Vec::with_capacity(ext);
            for k in 0..s {
                ext_row.push(if k == i {
                    RatOrePoly::one(&alg)
                } else {
                    RatOrePoly::zero(&alg)
                });
            }
            ext_row.extend(row.iter().cloned());
            ext_row
        })
        .collect();

    // downward elimination: at most one row keeps each leading position
    for p in (0..ext).rev() {
        loop {
            let mut at_p: Vec<usize> = (0..basis.len())
                .filter(|&i| row_lpos(&basis[i]) == Some(p))
                .collect();
            if at_p.len() < 2 {
                break;
            }
            at_p.sort_by_key(|&i| (basis[i][p].deg().unwrap(), i));
            let pivot = basis[at_p[0]].clone();
            for &i in &at_p[1..] {
                let (q, _) = right_divide(&basis[i][p], &pivot[p])?;
                basis[i] = row_sub_mul(&basis[i], &q, &pivot);
            }
        }
    }
    basis.retain(|r| row_lpos(r).is_some());

    // tail reduction per row, positions descending
    let pivot_of: std::collections::BTreeMap<usize, usize> = basis
        .iter()
        .enumerate()
        .map(|(i, r)| (row_lpos(r).unwrap(), i))
        .collect();
    for i in 0..basis.len() {
        let own = row_lpos(&basis[i]).unwrap();
        for (&p, &w) in pivot_of.iter().rev() {
            if p == own || w == i || basis[i][p].is_zero() {
                continue;
            }
            let pivot = basis[w].clone();
            let (q, _) = right_divide(&basis[i][p], &pivot[p])?;
            if !q.is_zero() {
                basis[i] = row_sub_mul(&basis[i], &q, &pivot);
            }
        }
    }

    // monic normalization and ascending sort by leading position
    for row in basis.iter_mut() {
        let p = row_lpos(row).unwrap();
        let c = row[p].lc().inv();
        for e in row.iter_mut() {
            *e = e.scale_left(&c);
        }
    }
    basis.sort_by_key(|r| row_lpos(r).unwrap());

    let mut gb = Vec::new();
    let mut cofactors = Vec::new();
    let mut syzygies = Vec::new();
    let mut positions = Vec::new();
    for row in basis {
        let p = row_lpos(&row).unwrap();
        if p < s {
            debug_assert!(row[s..].iter().all(|e| e.is_zero()));
            syzygies.push(row[..s].to_vec());
        } else {
            positions.push(p - s);
            cofactors.push(row[..s].to_vec());
            gb.push(row[s..].to_vec());
        }
    }
    Ok(RatGB { gb, cofactors, syzygies, positions })
}

/// Rational side swap: an involution on K(x)[D] given by an affine base
/// substitution and a sign on D, or opposite-algebra transport.
#[derive(Debug, Clone)]
pub enum RatSwap {
    Involution { base: crate::basepoly::EndoSpec, oper_sign: Scalar },
    Opposite { forward: Arc<Algebra>, backward: Arc<Algebra> },
}

impl RatSwap {
    pub fn for_algebra(alg: &Arc<Algebra>) -> Result<RatSwap, OreError> {
        let field = alg.field();
        let candidate = match alg.preset() {
            Preset::Shift => Some(RatSwap::Involution {
                base: crate::basepoly::EndoSpec {
                    scales: vec![field.one().neg()],
                    shifts: vec![field.zero()],
                },
                oper_sign: field.one(),
            }),
            _ if alg.sigma_is_identity()
                && alg.deriv().images.iter().all(|p| p.is_zero() || p.is_constant()) =>
            {
                Some(RatSwap::Involution {
                    base: crate::basepoly::EndoSpec::identity(1, &field),
                    oper_sign: field.one().neg(),
                })
            }
            _ => None,
        };
        if let Some(sw) = candidate {
            if sw.validates(alg) {
                return Ok(sw);
            }
        }
        let op = alg.opposite()?;
        Ok(RatSwap::Opposite { forward: alg.clone(), backward: op })
    }

    /// Checks theta(D*x) = theta(x)*theta(D) on the generator relation.
    fn validates(&self, alg: &Arc<Algebra>) -> bool {
        let x = RatOrePoly::constant(alg, RatFunc::from_base(&BasePoly::var(1, 0, &alg.field())));
        let d = RatOrePoly::oper(alg);
        let lhs = self.apply_poly(&d.mul(&x), alg);
        let rhs = self.apply_poly(&x, alg).mul(&self.apply_poly(&d, alg));
        lhs == rhs
    }

    pub fn mechanism(&self) -> &'static str {
        match self {
            RatSwap::Involution { .. } => "involution",
            RatSwap::Opposite { .. } => "opposite",
        }
    }

    fn apply_poly(&self, f: &RatOrePoly, current: &Arc<Algebra>) -> RatOrePoly {
        match self {
            RatSwap::Involution { base, oper_sign } => {
                let field = current.field();
                let mut out = RatOrePoly::zero(current);
                let mut sign = field.one();
                for (i, c) in f.coeffs.iter().enumerate() {
                    if i > 0 {
                        sign = sign.mul(oper_sign);
                    }
                    if c.is_zero() {
                        continue;
                    }
                    let tb = RatFunc::new(
                        base.apply(&c.num, &field).unwrap(),
                        base.apply(&c.den, &field).unwrap(),
                    )
                    .unwrap();
                    // theta(c D^i) = sign^i D^i theta(c)
                    let mut term = RatOrePoly::constant(current, tb.mul(&RatFunc::from_scalar(&sign)));
                    for _ in 0..i {
                        term = term.oper_shift();
                    }
                    out = out.add(&term);
                }
                out
            }
            RatSwap::Opposite { forward, backward } => {
                let target = if f.alg.id() == forward.id() { backward } else { forward };
                let mut out = RatOrePoly::zero(target);
                for (i, c) in f.coeffs.iter().enumerate() {
                    if c.is_zero() {
                        continue;
                    }
                    let mut term = RatOrePoly::constant(target, c.clone());
                    for _ in 0..i {
                        term = term.oper_shift();
                    }
                    out = out.add(&term);
                }
                out
            }
        }
    }

    pub fn apply_matrix(&self, m: &RatMatrix) -> RatMatrix {
        let target = match self {
            RatSwap::Involution { .. } => m.alg.clone(),
            RatSwap::Opposite { forward, backward } => {
                if m.alg.id() == forward.id() {
                    backward.clone()
                } else {
                    forward.clone()
                }
            }
        };
        let mut rows = Vec::with_capacity(m.cols());
        for j in 0..m.cols() {
            let mut row = Vec::with_capacity(m.rows());
            for i in 0..m.rows() {
                row.push(self.apply_poly(m.at(i, j), &m.alg));
            }
            rows.push(row);
        }
        RatMatrix::from_rows(&target, rows).unwrap()
    }
}

#[derive(Debug, Clone)]
pub struct RatDiagResult {
    pub u: RatMatrix,
    pub v: RatMatrix,
    pub d: RatMatrix,
    pub iterations: usize,
    pub sideswap: &'static str,
    pub stats: crate::diag::RunStats,
}

/// Diagonalization over the rational algebra (the PID case of the loop),
/// used as the independent baseline.
pub fn diagonalize_rational(
    m: &RatMatrix,
    opts: &crate::diag::DiagOptions,
) -> Result<RatDiagResult, OreError> {
    if m.alg.nvars() != 1 {
        return Err(OreError::NotUnivariate(m.alg.nvars()));
    }
    let swap = RatSwap::for_algebra(&m.alg)?;
    let p = m.rows();
    let q = m.cols();
    let mut u = RatMatrix::identity(&m.alg, p);
    let mut v = RatMatrix::identity(&m.alg, q);
    let mut cur = m.clone();
    let mut stats = crate::diag::RunStats::default();
    let mut i = 0usize;
    while !(cur.is_diagonal() && i % 2 == 0) {
        if i >= opts.max_iterations {
            return Err(OreError::IterationCapExceeded(opts.max_iterations));
        }
        i += 1;
        let started = std::time::Instant::now();
        let s = cur.rows();
        let t_cols = cur.cols();
        let rows: Vec<Vec<RatOrePoly>> =
            (0..s).map(|r| (0..t_cols).map(|c| cur.at(r, c).clone()).collect()).collect();
        let gbr = rat_groebner_extended(&rows)?;

        // slot placement as in the polynomial pipeline
        let mut slot_rows: Vec<Option<usize>> = vec![None; s];
        let mut leftover: Vec<usize> = Vec::new();
        for (k, &pos) in gbr.positions.iter().enumerate() {
            if pos < s && slot_rows[pos].is_none() {
                slot_rows[pos] = Some(k);
            } else {
                leftover.push(k);
            }
        }
        let mut free: Vec<usize> = (0..s).filter(|&i| slot_rows[i].is_none()).collect();
        for k in leftover {
            let slot = free.remove(0);
            slot_rows[slot] = Some(k);
        }
        let mut g = RatMatrix::zero(&cur.alg, s, t_cols);
        let mut w = RatMatrix::zero(&cur.alg, s, s);
        let mut syz_iter = gbr.syzygies.iter();
        for slot in 0..s {
            match slot_rows[slot] {
                Some(k) => {
                    for j in 0..t_cols {
                        *g.at_mut(slot, j) = gbr.gb[k][j].clone();
                    }
                    for j in 0..s {
                        *w.at_mut(slot, j) = gbr.cofactors[k][j].clone();
                    }
                }
                None => {
                    let z = syz_iter.next().expect("missing syzygy for zero row");
                    for j in 0..s {
                        *w.at_mut(slot, j) = z[j].clone();
                    }
                }
            }
        }
        stats.iterations.push(crate::diag::IterStat {
            iteration: i,
            gb_size: gbr.gb.len(),
            max_ddeg: g.max_deg().unwrap_or(0) as u32,
            max_terms: g.max_term_count(),
            max_coeff_bits: g.max_coeff_bits(),
            wall_ms: started.elapsed().as_millis(),
        });
        cur = swap.apply_matrix(&g);
        if i % 2 == 0 {
            v = v.mul(&swap.apply_matrix(&w));
        } else {
            u = w.mul(&u);
        }
    }
    // zero diagonal entries last
    let n = cur.rows().min(cur.cols());
    let mut order: Vec<usize> = (0..n).filter(|&k| !cur.at(k, k).is_zero()).collect();
    let zeros: Vec<usize> = (0..n).filter(|&k| cur.at(k, k).is_zero()).collect();
    order.extend(zeros);
    if !order.iter().enumerate().all(|(a, &b)| a == b) {
        let mut row_perm: Vec<usize> = (0..cur.rows()).collect();
        let mut col_perm: Vec<usize> = (0..cur.cols()).collect();
        for (new_k, &old_k) in order.iter().enumerate() {
            row_perm[new_k] = old_k;
            col_perm[new_k] = old_k;
        }
        cur = cur.permute_rows(&row_perm).permute_cols(&col_perm);
        u = u.permute_rows(&row_perm);
        v = v.permute_cols(&col_perm);
    }
    if opts.verify_identity {
        let lhs = u.mul(m).mul(&v);
        if lhs != cur {
            return Err(OreError::VerificationFailed(VerifyCheck::ProductIdentity));
        }
    }
    Ok(RatDiagResult { u, v, d: cur, iterations: i, sideswap: swap.mechanism(), stats })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{validate_algebra_spec, AlgebraSpec};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn make(preset: Preset, var: &str, oper: &str) -> Arc<Algebra> {
        validate_algebra_spec(
            AlgebraSpec::preset(preset, Field::Rational, vec![var.into()], oper.into(), None)
                .unwrap(),
        )
        .unwrap()
    }

    fn weyl() -> Arc<Algebra> {
        make(Preset::Weyl, "x", "d")
    }

    fn rf(num: &[i64], den: &[i64]) -> RatFunc {
        let f = Field::Rational;
        let mut n = BasePoly::zero(1);
        for (i, &c) in num.iter().enumerate() {
            n.add_term(vec![i as u32], f.from_i64(c));
        }
        let mut d = BasePoly::zero(1);
        for (i, &c) in den.iter().enumerate() {
            d.add_term(vec![i as u32], f.from_i64(c));
        }
        RatFunc::new(n, d).unwrap()
    }

    fn rop(alg: &Arc<Algebra>, coeffs: &[RatFunc]) -> RatOrePoly {
        RatOrePoly::from_coeffs(alg, coeffs.to_vec())
    }

    #[test]
    fn sigma_delta_on_fractions() {
        let alg = weyl();
        // delta(1/x) = -1/x^2
        let r = rf(&[1], &[0, 1]);
        let (s, d) = rat_sigma_delta(&alg, &r).unwrap();
        assert_eq!(s, r);
        assert_eq!(d, rf(&[-1], &[0, 0, 1]));

        // shift: sigma(1/t) = 1/(t+1)
        let shift = make(Preset::Shift, "t", "S");
        let (s, d) = rat_sigma_delta(&shift, &r).unwrap();
        assert_eq!(s, rf(&[1], &[1, 1]));
        assert!(d.is_zero());
    }

    #[test]
    fn right_division_examples() {
        let alg = weyl();
        let f = Field::Rational;
        // (x d + 1) / d -> q = x, r = 1
        let b = rop(&alg, &[rf(&[1], &[1]), rf(&[0, 1], &[1])]);
        let a = RatOrePoly::oper(&alg);
        let (q, r) = right_divide(&b, &a).unwrap();
        assert_eq!(q, RatOrePoly::constant(&alg, rf(&[0, 1], &[1])));
        assert_eq!(r, RatOrePoly::one(&alg));

        // d^2 / (x d) -> q = (1/x) d - 1/x^2, r = 0, checked by multiply-back
        let b = rop(&alg, &[RatFunc::zero(&f), RatFunc::zero(&f), RatFunc::one(&f)]);
        let a = rop(&alg, &[RatFunc::zero(&f), rf(&[0, 1], &[1])]);
        let (q, r) = right_divide(&b, &a).unwrap();
        assert!(r.is_zero());
        assert_eq!(q, rop(&alg, &[rf(&[-1], &[0, 0, 1]), rf(&[1], &[0, 1])]));
        assert_eq!(q.mul(&a).add(&r), b);

        // d / d -> (1, 0)
        let d = RatOrePoly::oper(&alg);
        let (q, r) = right_divide(&d, &d).unwrap();
        assert!(q.is_unit() && q.lc().is_one());
        assert!(r.is_zero());
    }

    fn random_rop(alg: &Arc<Algebra>, rng: &mut ChaCha8Rng, maxdeg: usize) -> RatOrePoly {
        let f = Field::Rational;
        let deg = rng.gen_range(0..=maxdeg);
        let coeffs: Vec<RatFunc> = (0..=deg)
            .map(|_| {
                let num: Vec<i64> = (0..=rng.gen_range(0..=1)).map(|_| rng.gen_range(-3..=3)).collect();
                let den = vec![rng.gen_range(1..=2), rng.gen_range(0..=1)];
                RatFunc::new(
                    {
                        let mut p = BasePoly::zero(1);
                        for (i, &c) in num.iter().enumerate() {
                            p.add_term(vec![i as u32], f.from_i64(c));
                        }
                        p
                    },
                    {
                        let mut p = BasePoly::zero(1);
                        for (i, &c) in den.iter().enumerate() {
                            p.add_term(vec![i as u32], f.from_i64(c));
                        }
                        p
                    },
                )
                .unwrap()
            })
            .collect();
        RatOrePoly::from_coeffs(alg, coeffs)
    }

    #[test]
    fn division_identities_random() {
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        for preset in [Preset::Weyl, Preset::Shift, Preset::Difference] {
            let alg = make(preset, "x", "d");
            for _ in 0..25 {
                let b = random_rop(&alg, &mut rng, 4);
                let a = loop {
                    let a = random_rop(&alg, &mut rng, 2);
                    if !a.is_zero() {
                        break a;
                    }
                };
                let (q, r) = right_divide(&b, &a).unwrap();
                assert_eq!(q.mul(&a).add(&r), b);
                assert!(r.deg().unwrap_or(0) < a.deg().unwrap() || r.is_zero() || a.deg() == Some(0));
                let (q2, r2) = left_divide(&b, &a).unwrap();
                assert_eq!(a.mul(&q2).add(&r2), b);
            }
        }
    }

    #[test]
    fn gcd_examples() {
        let alg = weyl();
        let d = RatOrePoly::oper(&alg);
        // (d, d): gcd d, lclm d
        let g = gcd_lclm(&d, &d).unwrap();
        assert_eq!(g.gcd, d);
        assert_eq!(g.lclm, d);

        // (d^2 - 1, d - 1): gcd = d - 1 monic
        let f = Field::Rational;
        let b = rop(&alg, &[rf(&[-1], &[1]), RatFunc::zero(&f), RatFunc::one(&f)]);
        let a = rop(&alg, &[rf(&[-1], &[1]), RatFunc::one(&f)]);
        let g = gcd_lclm(&b, &a).unwrap();
        assert_eq!(g.gcd, a);
        // Bezout: g = s*b + t*a
        assert_eq!(g.s.mul(&b).add(&g.t.mul(&a)), g.gcd);
        // remainder of b by gcd is zero
        let (_, r) = right_divide(&b, &g.gcd).unwrap();
        assert!(r.is_zero());

        // (d, d - 1): gcd 1, lclm degree 2
        let a2 = rop(&alg, &[rf(&[-1], &[1]), RatFunc::one(&f)]);
        let g = gcd_lclm(&d, &a2).unwrap();
        assert!(g.gcd.is_unit());
        assert_eq!(g.lclm.deg(), Some(2));
        let (_, r) = right_divide(&g.lclm, &d).unwrap();
        assert!(r.is_zero());
        let (_, r) = right_divide(&g.lclm, &a2).unwrap();
        assert!(r.is_zero());
    }

    #[test]
    fn gcd_lclm_random_identities() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        let alg = weyl();
        for _ in 0..20 {
            let a = loop {
                let a = random_rop(&alg, &mut rng, 3);
                if !a.is_zero() {
                    break a;
                }
            };
            let b = loop {
                let b = random_rop(&alg, &mut rng, 3);
                if !b.is_zero() {
                    break b;
                }
            };
            let g = gcd_lclm(&a, &b).unwrap();
            assert_eq!(g.s.mul(&a).add(&g.t.mul(&b)), g.gcd);
            let (_, ra) = right_divide(&a, &g.gcd).unwrap();
            let (_, rb) = right_divide(&b, &g.gcd).unwrap();
            assert!(ra.is_zero() && rb.is_zero());
            // lclm = u*a = w*b and its degree is deg a + deg b - deg gcd
            assert_eq!(g.lclm_cof_a.mul(&a), g.lclm);
            assert_eq!(g.lclm_cof_b.mul(&b), g.lclm);
            assert_eq!(
                g.lclm.deg().unwrap(),
                a.deg().unwrap() + b.deg().unwrap() - g.gcd.deg().unwrap()
            );
        }
    }

    #[test]
    fn rational_diagonalization_of_running_example() {
        let alg = weyl();
        let f = Field::Rational;
        // [[d^2 - 1, d + 1], [d^2 + 1, d - x]]
        let e = |coeffs: &[RatFunc]| RatOrePoly::from_coeffs(&alg, coeffs.to_vec());
        let m = RatMatrix::from_rows(
            &alg,
            vec![
                vec![
                    e(&[rf(&[-1], &[1]), RatFunc::zero(&f), RatFunc::one(&f)]),
                    e(&[RatFunc::one(&f), RatFunc::one(&f)]),
                ],
                vec![
                    e(&[RatFunc::one(&f), RatFunc::zero(&f), RatFunc::one(&f)]),
                    e(&[rf(&[0, -1], &[1]), RatFunc::one(&f)]),
                ],
            ],
        )
        .unwrap();
        let res = diagonalize_rational(&m, &crate::diag::DiagOptions::default()).unwrap();
        assert!(res.d.is_diagonal());
        let mut degs: Vec<Option<usize>> = res.d.diagonal().iter().map(|e| e.deg()).collect();
        degs.sort();
        assert_eq!(degs, vec![Some(0), Some(2)]);
        assert_eq!(res.u.mul(&m).mul(&res.v), res.d);
    }

    #[test]
    fn rational_diagonalization_identity_and_diagonal() {
        let alg = weyl();
        let id = RatMatrix::identity(&alg, 2);
        let res = diagonalize_rational(&id, &crate::diag::DiagOptions::default()).unwrap();
        assert_eq!(res.iterations, 0);
        assert_eq!(res.d, id);

        let d = RatOrePoly::oper(&alg);
        let m = RatMatrix::from_rows(
            &alg,
            vec![
                vec![d.clone(), RatOrePoly::zero(&alg)],
                vec![RatOrePoly::zero(&alg), d.clone()],
            ],
        )
        .unwrap();
        let res = diagonalize_rational(&m, &crate::diag::DiagOptions::default()).unwrap();
        assert_eq!(res.iterations, 0);
        assert_eq!(res.d, m);
    }

    #[test]
    fn rational_swap_selection_and_validity() {
        assert_eq!(RatSwap::for_algebra(&weyl()).unwrap().mechanism(), "involution");
        assert_eq!(
            RatSwap::for_algebra(&make(Preset::Shift, "t", "S")).unwrap().mechanism(),
            "involution"
        );
        assert_eq!(
            RatSwap::for_algebra(&make(Preset::Difference, "x", "D")).unwrap().mechanism(),
            "opposite"
        );
        // theta is anti-multiplicative on random pairs
        let mut rng = ChaCha8Rng::seed_from_u64(45);
        for alg in [weyl(), make(Preset::Shift, "t", "S")] {
            let swap = RatSwap::for_algebra(&alg).unwrap();
            for _ in 0..15 {
                let a = random_rop(&alg, &mut rng, 2);
                let b = random_rop(&alg, &mut rng, 2);
                let lhs = swap.apply_poly(&a.mul(&b), &alg);
                let rhs = swap.apply_poly(&b, &alg).mul(&swap.apply_poly(&a, &alg));
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn ore_round_trip_and_clearing() {
        let alg = weyl();
        let f = Field::Rational;
        let mut p = OrePoly::zero(&alg);
        p.add_term((vec![1], 1), f.one());
        p.add_term((vec![0], 0), f.from_i64(-3));
        let r = RatOrePoly::from_ore(&p).unwrap();
        assert_eq!(r.deg(), Some(1));
        let cleared = r.clear_denominators();
        assert!(cleared.den.as_scalar().map(|c| c.is_one()).unwrap());
        assert_eq!(cleared.num, p);

        // (1/x) d clears to den x, num d
        let q = rop(&alg, &[RatFunc::zero(&f), rf(&[1], &[0, 1])]);
        let cleared = q.clear_denominators();
        assert_eq!(cleared.den, BasePoly::var(1, 0, &f));
        assert_eq!(cleared.num, OrePoly::oper(&alg));
    }
}
