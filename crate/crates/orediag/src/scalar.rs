//! Exact coefficient arithmetic: arbitrary-precision rationals and prime fields.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::fmt;

use crate::error::OreError;

/// The coefficient field of an algebra: the rationals or Z/p for a prime p.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Field {
    Rational,
    Prime(u64),
}

impl Field {
    pub fn characteristic(&self) -> u64 {
        match self {
            Field::Rational => 0,
            Field::Prime(p) => *p,
        }
    }

    pub fn zero(&self) -> Scalar {
        match self {
            Field::Rational => Scalar::Rat(BigRational::zero()),
            Field::Prime(p) => Scalar::Mod { value: 0, prime: *p },
        }
    }

    pub fn one(&self) -> Scalar {
        match self {
            Field::Rational => Scalar::Rat(BigRational::one()),
            Field::Prime(p) => Scalar::Mod { value: 1 % *p, prime: *p },
        }
    }

    pub fn from_i64(&self, n: i64) -> Scalar {
        match self {
            Field::Rational => Scalar::Rat(BigRational::from_integer(BigInt::from(n))),
            Field::Prime(p) => {
                let p = *p;
                let r = n.rem_euclid(p as i64) as u64;
                Scalar::Mod { value: r, prime: p }
            }
        }
    }

    pub fn from_bigint(&self, n: &BigInt) -> Scalar {
        match self {
            Field::Rational => Scalar::Rat(BigRational::from_integer(n.clone())),
            Field::Prime(p) => {
                let m = BigInt::from(*p);
                let mut r = n % &m;
                if r.is_negative() {
                    r += &m;
                }
                let digits = r.to_u64_digits().1;
                let value = digits.first().copied().unwrap_or(0);
                Scalar::Mod { value, prime: *p }
            }
        }
    }

    /// Parses "a" or "a/b" into a field element.
    pub fn parse_ratio(&self, text: &str) -> Result<Scalar, OreError> {
        let parse_int = |s: &str| -> Result<BigInt, OreError> {
            s.trim()
                .parse::<BigInt>()
                .map_err(|_| OreError::InvalidFieldElement(text.to_string()))
        };
        let value = match text.split_once('/') {
            None => self.from_bigint(&parse_int(text)?),
            Some((num, den)) => {
                let num = self.from_bigint(&parse_int(num)?);
                let den = self.from_bigint(&parse_int(den)?);
                if den.is_zero() {
                    return Err(OreError::InvalidFieldElement(text.to_string()));
                }
                num.div(&den)
            }
        };
        Ok(value)
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Rational => write!(f, "Q"),
            Field::Prime(p) => write!(f, "F{}", p),
        }
    }
}

/// An element of the coefficient field.
///
/// Rationals are kept reduced with positive denominator (num-rational
/// maintains that invariant); residues are kept in `[0, p)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Scalar {
    Rat(BigRational),
    Mod { value: u64, prime: u64 },
}

fn mod_mul(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn mod_inv(a: u64, p: u64) -> u64 {
    // extended Euclid on (a, p); p prime and a != 0 mod p
    let (mut r0, mut r1) = (a as i128, p as i128);
    let (mut s0, mut s1) = (1i128, 0i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
    }
    debug_assert_eq!(r0, 1, "inverse of a non-unit mod {}", p);
    s0.rem_euclid(p as i128) as u64
}

impl Scalar {
    pub fn field(&self) -> Field {
        match self {
            Scalar::Rat(_) => Field::Rational,
            Scalar::Mod { prime, .. } => Field::Prime(*prime),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rat(r) => r.is_zero(),
            Scalar::Mod { value, .. } => *value == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Rat(r) => r.is_one(),
            Scalar::Mod { value, prime } => *value == 1 % *prime,
        }
    }

    pub fn add(&self, other: &Scalar) -> Scalar {
        match (self, other) {
            (Scalar::Rat(a), Scalar::Rat(b)) => Scalar::Rat(a + b),
            (Scalar::Mod { value: a, prime: p }, Scalar::Mod { value: b, prime: q }) => {
                assert_eq!(p, q, "mixed prime fields");
                Scalar::Mod { value: (a + b) % p, prime: *p }
            }
            _ => panic!("mixed scalar fields"),
        }
    }

    pub fn sub(&self, other: &Scalar) -> Scalar {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Scalar) -> Scalar {
        match (self, other) {
            (Scalar::Rat(a), Scalar::Rat(b)) => Scalar::Rat(a * b),
            (Scalar::Mod { value: a, prime: p }, Scalar::Mod { value: b, prime: q }) => {
                assert_eq!(p, q, "mixed prime fields");
                Scalar::Mod { value: mod_mul(*a, *b, *p), prime: *p }
            }
            _ => panic!("mixed scalar fields"),
        }
    }

    pub fn div(&self, other: &Scalar) -> Scalar {
        self.mul(&other.inv())
    }

    pub fn neg(&self) -> Scalar {
        match self {
            Scalar::Rat(a) => Scalar::Rat(-a),
            Scalar::Mod { value, prime } => Scalar::Mod {
                value: if *value == 0 { 0 } else { prime - value },
                prime: *prime,
            },
        }
    }

    pub fn inv(&self) -> Scalar {
        match self {
            Scalar::Rat(a) => {
                assert!(!a.is_zero(), "inverse of zero");
                Scalar::Rat(a.recip())
            }
            Scalar::Mod { value, prime } => {
                assert!(*value != 0, "inverse of zero");
                Scalar::Mod { value: mod_inv(*value, *prime), prime: *prime }
            }
        }
    }

    pub fn pow(&self, e: u32) -> Scalar {
        let mut acc = self.field().one();
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Bit length of the largest integer in the reduced representation.
    pub fn bit_length(&self) -> u64 {
        match self {
            Scalar::Rat(r) => r.numer().bits().max(r.denom().bits()),
            Scalar::Mod { value, .. } => 64 - value.leading_zeros() as u64,
        }
    }

    /// Numerator and denominator as decimal strings (residues get denominator "1").
    pub fn decimal_parts(&self) -> (String, String) {
        match self {
            Scalar::Rat(r) => (r.numer().to_string(), r.denom().to_string()),
            Scalar::Mod { value, .. } => (value.to_string(), "1".to_string()),
        }
    }

    /// True when the rational is negative (residues are never negative).
    pub fn is_negative(&self) -> bool {
        match self {
            Scalar::Rat(r) => r.is_negative(),
            Scalar::Mod { .. } => false,
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rat(r) => {
                if r.denom().is_one() {
                    write!(f, "{}", r.numer())
                } else {
                    write!(f, "{}/{}", r.numer(), r.denom())
                }
            }
            Scalar::Mod { value, .. } => write!(f, "{}", value),
        }
    }
}

pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d.saturating_mul(d) <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}
