//! Commutative multivariate polynomials over the coefficient field, together
//! with the endomorphism and skew-derivation data that define an Ore algebra.

use std::collections::BTreeMap;

use crate::error::OreError;
use crate::scalar::{Field, Scalar};

/// A polynomial in the base variables, stored as exponent vector -> coefficient.
///
/// No zero coefficients are stored and every exponent vector has length
/// `nvars`; BTreeMap keys give a canonical iteration order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BasePoly {
    pub nvars: usize,
    pub terms: BTreeMap<Vec<u32>, Scalar>,
}

pub fn exp_add(a: &[u32], b: &[u32]) -> Vec<u32> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn exp_sub(a: &[u32], b: &[u32]) -> Option<Vec<u32>> {
    a.iter()
        .zip(b)
        .map(|(x, y)| x.checked_sub(*y))
        .collect::<Option<Vec<u32>>>()
}

pub fn exp_divides(d: &[u32], m: &[u32]) -> bool {
    d.iter().zip(m).all(|(x, y)| x <= y)
}

/// Graded reverse lexicographic comparison; the first listed variable is the
/// most significant one.
pub fn grevlex(a: &[u32], b: &[u32]) -> std::cmp::Ordering {
    let da: u64 = a.iter().map(|&e| e as u64).sum();
    let db: u64 = b.iter().map(|&e| e as u64).sum();
    da.cmp(&db).then_with(|| {
        for (x, y) in a.iter().zip(b).rev() {
            if x != y {
                // smaller exponent in the least significant differing
                // variable means the larger monomial
                return y.cmp(x);
            }
        }
        std::cmp::Ordering::Equal
    })
}

/// Plain lexicographic comparison, first variable most significant.
pub fn lex(a: &[u32], b: &[u32]) -> std::cmp::Ordering {
    a.cmp(b)
}

impl BasePoly {
    pub fn zero(nvars: usize) -> Self {
        BasePoly { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: Scalar) -> Self {
        let mut p = Self::zero(nvars);
        if !c.is_zero() {
            p.terms.insert(vec![0; nvars], c);
        }
        p
    }

    pub fn one(nvars: usize, field: &Field) -> Self {
        Self::constant(nvars, field.one())
    }

    pub fn var(nvars: usize, index: usize, field: &Field) -> Self {
        let mut exps = vec![0; nvars];
        exps[index] = 1;
        Self::monomial(nvars, exps, field.one())
    }

    pub fn monomial(nvars: usize, exps: Vec<u32>, c: Scalar) -> Self {
        assert_eq!(exps.len(), nvars);
        let mut p = Self::zero(nvars);
        if !c.is_zero() {
            p.terms.insert(exps, c);
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|e| e.iter().all(|&x| x == 0))
    }

    /// The constant coefficient when the polynomial is constant.
    pub fn as_scalar(&self) -> Option<&Scalar> {
        if self.is_zero() || !self.is_constant() {
            return None;
        }
        self.terms.values().next()
    }

    pub fn total_degree(&self) -> Option<u64> {
        self.terms
            .keys()
            .map(|e| e.iter().map(|&x| x as u64).sum())
            .max()
    }

    pub fn add_term(&mut self, exps: Vec<u32>, c: Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(exps) {
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

    pub fn add(&self, other: &BasePoly) -> BasePoly {
        assert_eq!(self.nvars, other.nvars);
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &BasePoly) -> BasePoly {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> BasePoly {
        BasePoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), c.neg())).collect(),
        }
    }

    pub fn scale(&self, c: &Scalar) -> BasePoly {
        if c.is_zero() {
            return Self::zero(self.nvars);
        }
        BasePoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, k)| (e.clone(), k.mul(c))).collect(),
        }
    }

    pub fn mul(&self, other: &BasePoly) -> BasePoly {
        assert_eq!(self.nvars, other.nvars);
        if self.nvars == 1 {
            return self.mul1(other);
        }
        let mut out = Self::zero(self.nvars);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                out.add_term(exp_add(ea, eb), ca.mul(cb));
            }
        }
        out
    }

    fn mul1(&self, other: &BasePoly) -> BasePoly {
        if self.is_zero() || other.is_zero() {
            return Self::zero(1);
        }
        let da = self.deg1().unwrap() as usize;
        let db = other.deg1().unwrap() as usize;
        let mut acc: Vec<Option<Scalar>> = vec![None; da + db + 1];
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let k = (ea[0] + eb[0]) as usize;
                let prod = ca.mul(cb);
                acc[k] = Some(match acc[k].take() {
                    None => prod,
                    Some(s) => s.add(&prod),
                });
            }
        }
        let mut out = Self::zero(1);
        for (k, c) in acc.into_iter().enumerate() {
            if let Some(c) = c {
                if !c.is_zero() {
                    out.terms.insert(vec![k as u32], c);
                }
            }
        }
        out
    }

    pub fn pow(&self, e: u32, field: &Field) -> BasePoly {
        let mut acc = Self::one(self.nvars, field);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Leading term under grevlex; None for the zero polynomial.
    pub fn leading_term(&self) -> Option<(&Vec<u32>, &Scalar)> {
        self.terms.iter().max_by(|a, b| grevlex(a.0, b.0))
    }

    /// Exact division: Some(q) with q*d = self, or None.
    pub fn div_exact(&self, d: &BasePoly) -> Option<BasePoly> {
        assert_eq!(self.nvars, d.nvars);
        assert!(!d.is_zero(), "division by zero polynomial");
        let (dexp, dc) = d.leading_term().unwrap();
        let dexp = dexp.clone();
        let dc = dc.clone();
        let mut rem = self.clone();
        let mut quo = Self::zero(self.nvars);
        while !rem.is_zero() {
            let (rexp, rc) = rem.leading_term().unwrap();
            let m = exp_sub(rexp, &dexp)?;
            let c = rc.div(&dc);
            let piece = BasePoly::monomial(self.nvars, m, c);
            rem = rem.sub(&piece.mul(d));
            quo = quo.add(&piece);
        }
        Some(quo)
    }

    /// Substitutes scalar values for all base variables.
    pub fn eval(&self, values: &[Scalar], field: &Field) -> Scalar {
        assert_eq!(values.len(), self.nvars);
        let mut acc = field.zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (i, &p) in e.iter().enumerate() {
                if p > 0 {
                    t = t.mul(&values[i].pow(p));
                }
            }
            acc = acc.add(&t);
        }
        acc
    }

    pub fn max_coeff_bits(&self) -> u64 {
        self.terms.values().map(|c| c.bit_length()).max().unwrap_or(0)
    }

    /// Scales so the grevlex-leading coefficient becomes 1.
    pub fn monic(&self) -> BasePoly {
        match self.leading_term() {
            None => self.clone(),
            Some((_, c)) => self.scale(&c.inv()),
        }
    }

    // ---- univariate helpers (nvars == 1) ----

    pub fn deg1(&self) -> Option<u32> {
        debug_assert_eq!(self.nvars, 1);
        self.terms.keys().map(|e| e[0]).max()
    }

    pub fn coeff1(&self, k: u32) -> Scalar {
        let field = self
            .terms
            .values()
            .next()
            .map(|c| c.field())
            .unwrap_or(Field::Rational);
        self.terms.get(&vec![k]).cloned().unwrap_or_else(|| field.zero())
    }

    /// Univariate division with remainder (dense synthetic division).
    pub fn div_rem1(&self, d: &BasePoly) -> Result<(BasePoly, BasePoly), OreError> {
        assert_eq!(self.nvars, 1);
        assert_eq!(d.nvars, 1);
        if d.is_zero() {
            return Err(OreError::DivisionByZero);
        }
        let dd = d.deg1().unwrap() as usize;
        let dc = d.coeff1(dd as u32);
        let field = dc.field();
        let sd = match self.deg1() {
            None => return Ok((Self::zero(1), Self::zero(1))),
            Some(sd) => sd as usize,
        };
        if sd < dd {
            return Ok((Self::zero(1), self.clone()));
        }
        let mut rem: Vec<Scalar> = vec![field.zero(); sd + 1];
        for (e, c) in &self.terms {
            rem[e[0] as usize] = c.clone();
        }
        let div: Vec<(usize, Scalar)> =
            d.terms.iter().map(|(e, c)| (e[0] as usize, c.clone())).collect();
        let mut quo: Vec<Scalar> = vec![field.zero(); sd - dd + 1];
        for k in (dd..=sd).rev() {
            if rem[k].is_zero() {
                continue;
            }
            let c = rem[k].div(&dc);
            for (j, dcoef) in &div {
                let idx = k - dd + j;
                rem[idx] = rem[idx].sub(&c.mul(dcoef));
            }
            quo[k - dd] = c;
        }
        let rebuild = |v: Vec<Scalar>| {
            let mut p = Self::zero(1);
            for (k, c) in v.into_iter().enumerate() {
                if !c.is_zero() {
                    p.terms.insert(vec![k as u32], c);
                }
            }
            p
        };
        Ok((rebuild(quo), rebuild(rem)))
    }

    /// Rescales by a nonzero constant so rational coefficients become
    /// coprime integers (residue coefficients become monic); keeps remainder
    /// sequences from blowing up.
    pub fn primitive_scaled(&self) -> BasePoly {
        if self.is_zero() {
            return self.clone();
        }
        match self.terms.values().next().unwrap() {
            Scalar::Mod { .. } => self.monic(),
            Scalar::Rat(_) => {
                use num_bigint::BigInt;
                use num_integer::Integer;
                use num_traits::{One, Zero};
                let mut den_lcm = BigInt::one();
                let mut num_gcd = BigInt::zero();
                for c in self.terms.values() {
                    if let Scalar::Rat(r) = c {
                        den_lcm = den_lcm.lcm(r.denom());
                        num_gcd = num_gcd.gcd(r.numer());
                    }
                }
                let factor = Scalar::Rat(num_rational::BigRational::new(den_lcm, num_gcd));
                let scaled = self.scale(&factor);
                // leading coefficient positive
                match scaled.leading_term().unwrap().1 {
                    c if c.is_negative() => scaled.neg(),
                    _ => scaled,
                }
            }
        }
    }

    /// Monic univariate gcd. Over Q this runs the primitive pseudo-remainder
    /// sequence in integer arithmetic so intermediate coefficients stay
    /// bounded; over a prime field plain monic Euclid is fine.
    pub fn gcd1(&self, other: &BasePoly) -> BasePoly {
        if self.is_zero() {
            return other.monic();
        }
        if other.is_zero() {
            return self.monic();
        }
        let rational = matches!(self.terms.values().next(), Some(Scalar::Rat(_)));
        if !rational {
            let mut a = self.monic();
            let mut b = other.monic();
            while !b.is_zero() {
                let (_, r) = a.div_rem1(&b).unwrap();
                a = b;
                b = r.monic();
            }
            return a.monic();
        }
        use num_bigint::BigInt;
        use num_traits::Zero;
        let dense = |p: &BasePoly| -> Vec<BigInt> {
            let q = p.primitive_scaled();
            let deg = q.deg1().unwrap() as usize;
            let mut v = vec![BigInt::zero(); deg + 1];
            for (e, c) in &q.terms {
                if let Scalar::Rat(r) = c {
                    debug_assert!(num_traits::One::is_one(r.denom()));
                    v[e[0] as usize] = r.numer().clone();
                }
            }
            v
        };
        let deg = |v: &[BigInt]| v.len().checked_sub(1);
        let trim = |mut v: Vec<BigInt>| -> Vec<BigInt> {
            while v.last().map(|c| c.is_zero()).unwrap_or(false) {
                v.pop();
            }
            v
        };
        let primitive = |v: Vec<BigInt>| -> Vec<BigInt> {
            use num_integer::Integer;
            let mut g = BigInt::zero();
            for c in &v {
                g = g.gcd(c);
            }
            if g.is_zero() {
                return v;
            }
            let mut out: Vec<BigInt> = v.iter().map(|c| c / &g).collect();
            if out.last().map(|c| c < &BigInt::zero()).unwrap_or(false) {
                for c in out.iter_mut() {
                    *c = -(c.clone());
                }
            }
            out
        };
        // pseudo-remainder: lc(b)^(da-db+1) * a mod b, exact in Z
        let prem = |a: &[BigInt], b: &[BigInt]| -> Vec<BigInt> {
            let mut r = a.to_vec();
            let db = b.len() - 1;
            let lc = b[db].clone();
            while let Some(dr) = deg(&r) {
                if dr < db {
                    break;
                }
                let c = r[dr].clone();
                for x in r.iter_mut() {
                    *x = &*x * &lc;
                }
                for (j, bc) in b.iter().enumerate() {
                    r[dr - db + j] -= &c * bc;
                }
                r = trim(r);
            }
            r
        };
        let mut a = primitive(dense(self));
        let mut b = primitive(dense(other));
        while !b.is_empty() {
            let r = primitive(trim(prem(&a, &b)));
            a = b;
            b = r;
        }
        let field = Field::Rational;
        let mut out = BasePoly::zero(1);
        for (k, c) in a.iter().enumerate() {
            if !c.is_zero() {
                out.terms.insert(vec![k as u32], field.from_bigint(c));
            }
        }
        out.monic()
    }

    pub fn lcm1(&self, other: &BasePoly) -> BasePoly {
        if self.is_zero() || other.is_zero() {
            return Self::zero(1);
        }
        let g = self.gcd1(other);
        let q = self.div_rem1(&g).unwrap().0;
        q.mul(other).monic()
    }
}

/// Per-variable affine endomorphism images sigma(x_i) = u_i*x_i + v_i.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EndoSpec {
    pub scales: Vec<Scalar>,
    pub shifts: Vec<Scalar>,
}

impl EndoSpec {
    pub fn identity(nvars: usize, field: &Field) -> Self {
        EndoSpec {
            scales: vec![field.one(); nvars],
            shifts: vec![field.zero(); nvars],
        }
    }

    pub fn nvars(&self) -> usize {
        self.scales.len()
    }

    pub fn is_identity(&self) -> bool {
        self.scales.iter().all(|u| u.is_one()) && self.shifts.iter().all(|v| v.is_zero())
    }

    pub fn image_of_var(&self, i: usize) -> BasePoly {
        let n = self.nvars();
        let mut p = BasePoly::monomial(
            n,
            {
                let mut e = vec![0; n];
                e[i] = 1;
                e
            },
            self.scales[i].clone(),
        );
        p.add_term(vec![0; n], self.shifts[i].clone());
        p
    }

    /// sigma(x^alpha) = prod (u_i x_i + v_i)^alpha_i.
    pub fn apply_monomial(&self, exps: &[u32], field: &Field) -> BasePoly {
        let n = self.nvars();
        let mut acc = BasePoly::one(n, field);
        for (i, &e) in exps.iter().enumerate() {
            if e > 0 {
                acc = acc.mul(&self.image_of_var(i).pow(e, field));
            }
        }
        acc
    }

    pub fn apply(&self, p: &BasePoly, field: &Field) -> Result<BasePoly, OreError> {
        if p.nvars != self.nvars() {
            return Err(OreError::VariableMismatch { expected: self.nvars(), got: p.nvars });
        }
        if self.is_identity() {
            return Ok(p.clone());
        }
        let mut out = BasePoly::zero(p.nvars);
        for (e, c) in &p.terms {
            out = out.add(&self.apply_monomial(e, field).scale(c));
        }
        Ok(out)
    }

    /// The inverse affine map; requires every scale invertible.
    pub fn inverse(&self, field: &Field) -> EndoSpec {
        let scales: Vec<Scalar> = self.scales.iter().map(|u| u.inv()).collect();
        let shifts: Vec<Scalar> = self
            .shifts
            .iter()
            .zip(&scales)
            .map(|(v, uinv)| v.neg().mul(uinv))
            .collect();
        let _ = field;
        EndoSpec { scales, shifts }
    }
}

/// Per-variable skew-derivation images delta(x_i).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DerivSpec {
    pub images: Vec<BasePoly>,
}

impl DerivSpec {
    pub fn zero(nvars: usize) -> Self {
        DerivSpec { images: vec![BasePoly::zero(nvars); nvars] }
    }

    pub fn nvars(&self) -> usize {
        self.images.len()
    }

    pub fn is_zero(&self) -> bool {
        self.images.iter().all(|p| p.is_zero())
    }

    /// Pairwise well-definedness: delta(x_i)(sigma(x_j)-x_j) = delta(x_j)(sigma(x_i)-x_i).
    pub fn check_compatible(&self, endo: &EndoSpec, field: &Field) -> Result<(), (usize, usize)> {
        let n = self.nvars();
        let moved: Vec<BasePoly> = (0..n)
            .map(|i| {
                let xi = BasePoly::var(n, i, field);
                endo.image_of_var(i).sub(&xi)
            })
            .collect();
        for i in 0..n {
            for j in (i + 1)..n {
                let lhs = self.images[i].mul(&moved[j]);
                let rhs = self.images[j].mul(&moved[i]);
                if lhs != rhs {
                    return Err((i, j));
                }
            }
        }
        Ok(())
    }

    /// delta(x^alpha) via the skew Leibniz rule, peeling the first variable
    /// with a positive exponent: delta(x_i m) = sigma(x_i) delta(m) + delta(x_i) m.
    pub fn apply_monomial(&self, endo: &EndoSpec, exps: &[u32], field: &Field) -> BasePoly {
        let n = self.nvars();
        let i = match exps.iter().position(|&e| e > 0) {
            None => return BasePoly::zero(n),
            Some(i) => i,
        };
        let mut rest = exps.to_vec();
        rest[i] -= 1;
        let rest_poly = BasePoly::monomial(n, rest.clone(), field.one());
        let inner = self.apply_monomial(endo, &rest, field);
        endo.image_of_var(i)
            .mul(&inner)
            .add(&self.images[i].mul(&rest_poly))
    }

    pub fn apply(&self, endo: &EndoSpec, p: &BasePoly, field: &Field) -> Result<BasePoly, OreError> {
        if p.nvars != self.nvars() {
            return Err(OreError::VariableMismatch { expected: self.nvars(), got: p.nvars });
        }
        if self.is_zero() {
            return Ok(BasePoly::zero(p.nvars));
        }
        let mut out = BasePoly::zero(p.nvars);
        for (e, c) in &p.terms {
            out = out.add(&self.apply_monomial(endo, e, field).scale(c));
        }
        Ok(out)
    }
}

/// A nonzero polynomial divisible by every input denominator.
///
/// Denominators are normalized monic and deduplicated, then multiplied; in
/// one variable the exact lcm is taken instead.
pub fn common_denominator(dens: &[BasePoly], nvars: usize, field: &Field) -> Result<BasePoly, OreError> {
    if dens.iter().any(|d| d.is_zero()) {
        return Err(OreError::ZeroDenominator);
    }
    if dens.is_empty() {
        return Ok(BasePoly::one(nvars, field));
    }
    if nvars == 1 {
        let mut acc = BasePoly::one(1, field);
        for d in dens {
            acc = acc.lcm1(d);
        }
        return Ok(acc);
    }
    let mut seen: Vec<BasePoly> = Vec::new();
    let mut acc = BasePoly::one(nvars, field);
    for d in dens {
        let m = d.monic();
        if m.is_constant() || seen.contains(&m) {
            continue;
        }
        acc = acc.mul(&m);
        seen.push(m);
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn q() -> Field {
        Field::Rational
    }

    fn random_poly(nvars: usize, rng: &mut ChaCha8Rng) -> BasePoly {
        let f = q();
        let mut p = BasePoly::zero(nvars);
        for _ in 0..rng.gen_range(1..=4) {
            let exps: Vec<u32> = (0..nvars).map(|_| rng.gen_range(0..=3)).collect();
            p.add_term(exps, f.from_i64(rng.gen_range(-5i64..=5)));
        }
        p
    }

    // x^2 + 1 in one variable
    fn x2_plus_1() -> BasePoly {
        let f = q();
        let mut p = BasePoly::monomial(1, vec![2], f.one());
        p.add_term(vec![0], f.one());
        p
    }

    #[test]
    fn endo_identity_fixes_polynomials() {
        let e = EndoSpec::identity(1, &q());
        let p = x2_plus_1();
        assert_eq!(e.apply(&p, &q()).unwrap(), p);
    }

    #[test]
    fn endo_shift_expands_square() {
        // sigma(t) = t + 1 applied to t^2 gives t^2 + 2t + 1
        let f = q();
        let e = EndoSpec { scales: vec![f.one()], shifts: vec![f.one()] };
        let t2 = BasePoly::monomial(1, vec![2], f.one());
        let mut expect = BasePoly::monomial(1, vec![2], f.one());
        expect.add_term(vec![1], f.from_i64(2));
        expect.add_term(vec![0], f.one());
        assert_eq!(e.apply(&t2, &f).unwrap(), expect);
    }

    #[test]
    fn endo_qweyl_scales_cube() {
        // sigma(x) = 2x applied to x^3 gives 8x^3
        let f = q();
        let e = EndoSpec { scales: vec![f.from_i64(2)], shifts: vec![f.zero()] };
        let x3 = BasePoly::monomial(1, vec![3], f.one());
        assert_eq!(e.apply(&x3, &f).unwrap(), BasePoly::monomial(1, vec![3], f.from_i64(8)));
    }

    #[test]
    fn endo_is_multiplicative() {
        let f = q();
        let e = EndoSpec { scales: vec![f.from_i64(2), f.one()], shifts: vec![f.one(), f.from_i64(-3)] };
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..60 {
            let p = random_poly(2, &mut rng);
            let r = random_poly(2, &mut rng);
            assert_eq!(
                e.apply(&p.mul(&r), &f).unwrap(),
                e.apply(&p, &f).unwrap().mul(&e.apply(&r, &f).unwrap())
            );
        }
    }

    #[test]
    fn deriv_weyl_is_ordinary_derivative() {
        // sigma = id, delta(x) = 1: delta(x^3) = 3x^2
        let f = q();
        let e = EndoSpec::identity(1, &f);
        let d = DerivSpec { images: vec![BasePoly::one(1, &f)] };
        let x3 = BasePoly::monomial(1, vec![3], f.one());
        assert_eq!(d.apply(&e, &x3, &f).unwrap(), BasePoly::monomial(1, vec![2], f.from_i64(3)));
    }

    #[test]
    fn deriv_difference_on_square() {
        // sigma(x) = x+1, delta(x) = 1: delta(x^2) = 2x + 1
        let f = q();
        let e = EndoSpec { scales: vec![f.one()], shifts: vec![f.one()] };
        let d = DerivSpec { images: vec![BasePoly::one(1, &f)] };
        let x2 = BasePoly::monomial(1, vec![2], f.one());
        let mut expect = BasePoly::monomial(1, vec![1], f.from_i64(2));
        expect.add_term(vec![0], f.one());
        assert_eq!(d.apply(&e, &x2, &f).unwrap(), expect);
    }

    #[test]
    fn deriv_qweyl_on_square() {
        // sigma(x) = 2x, delta(x) = 1: delta(x^2) = sigma(x)*1 + 1*x = 3x
        let f = q();
        let e = EndoSpec { scales: vec![f.from_i64(2)], shifts: vec![f.zero()] };
        let d = DerivSpec { images: vec![BasePoly::one(1, &f)] };
        let x2 = BasePoly::monomial(1, vec![2], f.one());
        assert_eq!(d.apply(&e, &x2, &f).unwrap(), BasePoly::monomial(1, vec![1], f.from_i64(3)));
    }

    #[test]
    fn deriv_skew_leibniz_random() {
        let f = q();
        let e = EndoSpec { scales: vec![f.one(), f.one()], shifts: vec![f.one(), f.zero()] };
        // delta(x) = y, delta(y) = 0 is compatible with sigma(x) = x+1, sigma(y) = y
        let y = BasePoly::var(2, 1, &f);
        let d = DerivSpec { images: vec![y, BasePoly::zero(2)] };
        d.check_compatible(&e, &f).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..60 {
            let p = random_poly(2, &mut rng);
            let r = random_poly(2, &mut rng);
            let lhs = d.apply(&e, &p.mul(&r), &f).unwrap();
            let rhs = e
                .apply(&p, &f)
                .unwrap()
                .mul(&d.apply(&e, &r, &f).unwrap())
                .add(&d.apply(&e, &p, &f).unwrap().mul(&r));
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn common_denominator_examples() {
        let f = q();
        let one = BasePoly::one(1, &f);
        assert_eq!(common_denominator(&[one.clone()], 1, &f).unwrap(), one);

        // {x, x-1} -> x^2 - x
        let x = BasePoly::var(1, 0, &f);
        let mut xm1 = BasePoly::var(1, 0, &f);
        xm1.add_term(vec![0], f.from_i64(-1));
        let d = common_denominator(&[x.clone(), xm1.clone()], 1, &f).unwrap();
        assert_eq!(d, x.mul(&xm1));

        // {x, x^2+x} -> x^2+x, and x divides it exactly
        let x2x = x.mul(&x).add(&x);
        let d = common_denominator(&[x.clone(), x2x.clone()], 1, &f).unwrap();
        assert_eq!(d, x2x);
        let quot = d.div_exact(&x).unwrap();
        assert_eq!(quot.mul(&x), d);

        assert!(common_denominator(&[BasePoly::zero(1)], 1, &f).is_err());
    }

    #[test]
    fn common_denominator_divisibility_random() {
        let f = q();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..40 {
            let dens: Vec<BasePoly> = (0..3)
                .map(|_| loop {
                    let p = random_poly(2, &mut rng);
                    if !p.is_zero() {
                        break p;
                    }
                })
                .collect();
            let d = common_denominator(&dens, 2, &f).unwrap();
            for den in &dens {
                let qt = d.div_exact(&den.monic()).expect("common denominator not divisible");
                assert_eq!(qt.mul(&den.monic()), d);
            }
        }
    }

    #[test]
    fn univariate_division_and_gcd() {
        let f = q();
        let x = BasePoly::var(1, 0, &f);
        let x2x = x.mul(&x).add(&x);
        let (quo, rem) = x2x.div_rem1(&x).unwrap();
        assert!(rem.is_zero());
        assert_eq!(quo.mul(&x), x2x);
        assert_eq!(x.gcd1(&x2x), x);
        assert_eq!(x.lcm1(&x2x), x2x.monic());
    }

    #[test]
    fn grevlex_tiebreak() {
        // x^2 y vs x y^2 with x listed first: x^2 y is larger
        assert_eq!(grevlex(&[2, 1], &[1, 2]), std::cmp::Ordering::Greater);
        assert_eq!(grevlex(&[1, 1], &[2, 0]), std::cmp::Ordering::Less);
    }
}
