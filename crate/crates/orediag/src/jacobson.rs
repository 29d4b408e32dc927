//! Strengthening a diagonal matrix over the rational Weyl algebra to the
//! Jacobson normal form Diag(1, ..., 1, m), plus the probabilistic
//! cyclic-vector probe. Other presets are refused: the shift algebra's
//! Diag(s, s) is annihilated by the two-sided ideal generated by s, so no
//! such strengthening can exist outside simple domains.

use std::sync::Arc;

use crate::algebra::{Algebra, Preset};
use crate::basepoly::BasePoly;
use crate::diag::{diagonalize, DiagOptions};
use crate::error::OreError;
use crate::matrix::{FracEntry, RatioMatrix};
use crate::rational::{
    diagonalize_rational, gcd_lclm, right_divide, RatFunc, RatMatrix, RatOrePoly,
};
use crate::scalar::Field;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// One round of the shift-and-rediagonalize iteration.
#[derive(Debug, Clone)]
pub struct TfRound {
    pub pair: (usize, usize),
    pub shift_exponent: u32,
    pub remainder_degree: usize,
    pub degree_before: usize,
    pub degree_after: usize,
}

#[derive(Debug, Clone)]
pub struct JacobsonResult {
    pub u: RatMatrix,
    pub v: RatMatrix,
    pub diagonal: RatMatrix,
    pub trace: Vec<TfRound>,
    pub degree_sum_input: usize,
    pub final_degree: usize,
    /// deg m equals the input degree sum.
    pub degree_certificate: bool,
    /// Pairs the best-effort mode could not improve (non-simple domains).
    pub stalled_pairs: Vec<(usize, usize)>,
}

/// Smallest i such that m1 x^i has a nonzero remainder under right division
/// by m2; returns (i, quotient, remainder).
pub fn find_shift_exponent(
    m1: &RatOrePoly,
    m2: &RatOrePoly,
) -> Result<(u32, RatOrePoly, RatOrePoly), OreError> {
    let d1 = m1.deg().ok_or(OreError::ZeroPolynomial)?;
    let d2 = m2.deg().ok_or(OreError::ZeroPolynomial)?;
    if d2 == 0 {
        return Err(OreError::Precondition("the divisor entry is a unit".into()));
    }
    if d2 > d1 {
        return Err(OreError::Precondition(
            "divisor entry must not exceed the dividend degree".into(),
        ));
    }
    let alg = m1.alg.clone();
    let x = RatOrePoly::constant(&alg, RatFunc::from_base(&BasePoly::var(1, 0, &alg.field())));
    let mut shifted = m1.clone();
    for i in 0..=(d1 - d2 + 1) as u32 {
        let (a, b) = right_divide(&shifted, m2)?;
        if !b.is_zero() {
            return Ok((i, a, b));
        }
        shifted = shifted.mul(&x);
    }
    Err(OreError::NoExponentFound)
}

fn embed2(alg: &Arc<Algebra>, n: usize, i: usize, j: usize, m: &RatMatrix) -> RatMatrix {
    let mut out = RatMatrix::identity(alg, n);
    *out.at_mut(i, i) = m.at(0, 0).clone();
    *out.at_mut(i, j) = m.at(0, 1).clone();
    *out.at_mut(j, i) = m.at(1, 0).clone();
    *out.at_mut(j, j) = m.at(1, 1).clone();
    out
}

/// Rediagonalizes a rational 2x2 block through the fraction-free pipeline:
/// denominators are cleared entrywise, the polynomial result is lifted back.
fn rediagonalize2(
    b: &RatMatrix,
    opts: &DiagOptions,
) -> Result<(RatMatrix, RatMatrix, RatMatrix), OreError> {
    let alg = b.alg.clone();
    let mut rows = Vec::new();
    for i in 0..2 {
        let mut row = Vec::new();
        for j in 0..2 {
            let FracEntry { den, num } = b.at(i, j).clear_denominators();
            row.push(FracEntry { den, num });
        }
        rows.push(row);
    }
    let ratio = RatioMatrix::from_rows(&alg, rows)?;
    let res = diagonalize(&ratio, opts)?;
    let u = RatMatrix::from_ore_matrix(&res.u)?.mul(&RatMatrix::from_ore_matrix(&res.t)?);
    let v = RatMatrix::from_ore_matrix(&res.v)?;
    let d = RatMatrix::from_ore_matrix(&res.d)?;
    Ok((u, v, d))
}

pub fn strengthen_diagonal(
    d: &RatMatrix,
    opts: &DiagOptions,
) -> Result<JacobsonResult, OreError> {
    strengthen_diagonal_with(d, opts, false)
}

/// With `best_effort` the same loop runs over a non-simple algebra and
/// reports stalled pairs instead of failing.
pub fn strengthen_diagonal_with(
    d: &RatMatrix,
    opts: &DiagOptions,
    best_effort: bool,
) -> Result<JacobsonResult, OreError> {
    let alg = d.alg.clone();
    if alg.nvars() != 1 {
        return Err(OreError::NotUnivariate(alg.nvars()));
    }
    let simple = alg.preset() == Preset::Weyl && alg.field() == Field::Rational;
    if !simple && !best_effort {
        return Err(OreError::NotSimpleDomain(alg.preset().name().to_string()));
    }
    if !d.is_diagonal() {
        return Err(OreError::Precondition("input matrix is not diagonal".into()));
    }
    let n = d.rows().min(d.cols());
    let mut entries: Vec<RatOrePoly> = (0..n).map(|k| d.at(k, k).clone()).collect();
    for (k, e) in entries.iter().enumerate() {
        if e.is_zero() {
            return Err(OreError::ZeroDiagonalEntry(k));
        }
    }
    let degree_sum_input: usize = entries.iter().map(|e| e.deg().unwrap()).sum();

    let mut u = RatMatrix::identity(&alg, d.rows());
    let mut v = RatMatrix::identity(&alg, d.cols());
    let mut trace = Vec::new();
    let mut stalled: Vec<(usize, usize)> = Vec::new();

    loop {
        let mut nonunits: Vec<usize> =
            (0..n).filter(|&k| entries[k].deg().unwrap() > 0).collect();
        nonunits.sort_by_key(|&k| (entries[k].deg().unwrap(), k));
        let pair = nonunits
            .iter()
            .flat_map(|&a| nonunits.iter().map(move |&b| (a, b)))
            .find(|&(a, b)| a != b && !stalled.contains(&(a.min(b), a.max(b))));
        let Some((small, large)) = pair else { break };
        // larger-degree entry plays the dividend role
        let (i1, i2) = (large, small);
        loop {
            let m1 = entries[i1].clone();
            let m2 = entries[i2].clone();
            if m2.deg() == Some(0) {
                break;
            }
            let (shift, a, b) = match find_shift_exponent(&m1, &m2) {
                Ok(v) => v,
                Err(OreError::NoExponentFound) if best_effort => {
                    stalled.push((i1.min(i2), i1.max(i2)));
                    break;
                }
                Err(e) => return Err(e),
            };
            // [1 -a; 0 1] Diag(m1, m2) [1 x^shift; 0 1] = [m1 b; 0 m2]
            let e1 = {
                let mut m = RatMatrix::identity(&alg, 2);
                *m.at_mut(0, 1) = a.neg();
                m
            };
            let e2 = {
                let mut m = RatMatrix::identity(&alg, 2);
                let x = RatOrePoly::constant(
                    &alg,
                    RatFunc::from_base(&BasePoly::var(1, 0, &alg.field())),
                );
                let mut xs = RatOrePoly::one(&alg);
                for _ in 0..shift {
                    xs = xs.mul(&x);
                }
                *m.at_mut(0, 1) = xs;
                m
            };
            let block = RatMatrix::from_rows(
                &alg,
                vec![
                    vec![m1.clone(), b.clone()],
                    vec![RatOrePoly::zero(&alg), m2.clone()],
                ],
            )
            .unwrap();
            let (iu, iv, id) = rediagonalize2(&block, opts)?;
            debug_assert_eq!(iu.mul(&block).mul(&iv), id);
            let (mut d0, mut d1) = (id.at(0, 0).clone(), id.at(1, 1).clone());
            let mut u2 = iu.mul(&e1);
            let mut v2 = e2.mul(&iv);
            if d0.deg().unwrap() < d1.deg().unwrap() {
                // keep the smaller-degree entry in the m2 slot
                let p = {
                    let mut m = RatMatrix::zero(&alg, 2, 2);
                    *m.at_mut(0, 1) = RatOrePoly::one(&alg);
                    *m.at_mut(1, 0) = RatOrePoly::one(&alg);
                    m
                };
                u2 = p.mul(&u2);
                v2 = v2.mul(&p);
                std::mem::swap(&mut d0, &mut d1);
            }
            let new_small = d1.deg().unwrap();
            trace.push(TfRound {
                pair: (i1, i2),
                shift_exponent: shift,
                remainder_degree: b.deg().unwrap(),
                degree_before: m2.deg().unwrap(),
                degree_after: new_small,
            });
            assert!(
                new_small < m2.deg().unwrap(),
                "shift iteration failed to reduce the degree"
            );
            entries[i1] = d0;
            entries[i2] = d1;
            u = embed2(&alg, d.rows(), i1, i2, &u2).mul(&u);
            v = v.mul(&embed2(&alg, d.cols(), i1, i2, &v2));
        }
    }

    // normalize units to 1 and make the remaining entry monic
    for k in 0..n {
        if !entries[k].lc().is_one() || entries[k].deg() == Some(0) {
            let c = if entries[k].deg() == Some(0) {
                entries[k].coeff(0).inv()
            } else {
                entries[k].lc().inv()
            };
            entries[k] = entries[k].scale_left(&c);
            let scaled: Vec<RatOrePoly> = (0..u.cols())
                .map(|j| u.at(k, j).scale_left(&c))
                .collect();
            for (j, e) in scaled.into_iter().enumerate() {
                *u.at_mut(k, j) = e;
            }
        }
    }
    // units first, the non-unit entry last
    let mut order: Vec<usize> = (0..n).filter(|&k| entries[k].deg() == Some(0)).collect();
    let tail: Vec<usize> = (0..n).filter(|&k| entries[k].deg() != Some(0)).collect();
    order.extend(tail);
    if !order.iter().enumerate().all(|(a, &b)| a == b) {
        let mut row_perm: Vec<usize> = (0..d.rows()).collect();
        let mut col_perm: Vec<usize> = (0..d.cols()).collect();
        for (new_k, &old_k) in order.iter().enumerate() {
            row_perm[new_k] = old_k;
            col_perm[new_k] = old_k;
        }
        u = u.permute_rows(&row_perm);
        v = v.permute_cols(&col_perm);
        entries = order.iter().map(|&k| entries[k].clone()).collect();
    }

    let mut diagonal = RatMatrix::zero(&alg, d.rows(), d.cols());
    for (k, e) in entries.iter().enumerate() {
        *diagonal.at_mut(k, k) = e.clone();
    }
    let lhs = u.mul(d).mul(&v);
    if lhs != diagonal {
        return Err(OreError::VerificationFailed(crate::error::VerifyCheck::ProductIdentity));
    }
    let final_degree = entries.last().and_then(|e| e.deg()).unwrap_or(0);
    Ok(JacobsonResult {
        u,
        v,
        diagonal,
        trace,
        degree_sum_input,
        final_degree,
        degree_certificate: final_degree == degree_sum_input && stalled.is_empty(),
        stalled_pairs: stalled,
    })
}

#[derive(Debug, Clone)]
pub struct CyclicProbeResult {
    pub annihilator: RatOrePoly,
    pub probe: Vec<RatOrePoly>,
    /// deg c equals the diagonal degree sum.
    pub certificate: bool,
    /// c annihilates every probe component modulo the diagonal.
    pub annihilates: bool,
}

/// The cyclic-vector experiment: a random (or supplied) probe vector with
/// component degrees below the diagonal entries, the generator c of its left
/// annihilator, and the degree certificate. A failed certificate signals
/// that another probe should be drawn.
pub fn cyclic_vector_probe(
    d: &RatMatrix,
    probe: Option<Vec<RatOrePoly>>,
    seed: u64,
) -> Result<CyclicProbeResult, OreError> {
    let alg = d.alg.clone();
    if alg.nvars() != 1 {
        return Err(OreError::NotUnivariate(alg.nvars()));
    }
    if alg.preset() != Preset::Weyl || alg.field() != Field::Rational {
        return Err(OreError::NotSimpleDomain(alg.preset().name().to_string()));
    }
    if !d.is_diagonal() {
        return Err(OreError::Precondition("input matrix is not diagonal".into()));
    }
    let n = d.rows().min(d.cols());
    let entries: Vec<RatOrePoly> = (0..n).map(|k| d.at(k, k).clone()).collect();
    for (k, e) in entries.iter().enumerate() {
        if e.is_zero() {
            return Err(OreError::ZeroDiagonalEntry(k));
        }
    }
    let field = alg.field();
    let probe: Vec<RatOrePoly> = match probe {
        Some(p) => {
            if p.len() != n {
                return Err(OreError::RankMismatch(p.len(), n));
            }
            for (k, (pi, mi)) in p.iter().zip(&entries).enumerate() {
                if pi.deg().map(|dp| dp + 1).unwrap_or(0) > mi.deg().unwrap() {
                    return Err(OreError::Precondition(format!(
                        "probe component {} does not have degree below the diagonal entry",
                        k
                    )));
                }
            }
            p
        }
        None => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            entries
                .iter()
                .map(|mi| {
                    let deg = mi.deg().unwrap();
                    if deg == 0 {
                        return RatOrePoly::zero(&alg);
                    }
                    let coeffs: Vec<RatFunc> = (0..deg)
                        .map(|_| {
                            RatFunc::from_scalar(&field.from_i64(rng.gen_range(-10i64..=10)))
                        })
                        .collect();
                    RatOrePoly::from_coeffs(&alg, coeffs)
                })
                .collect()
        }
    };

    // per-component annihilator: smallest u with u p in R m, i.e.
    // lclm(p, m) = u p; the zero probe component is annihilated by 1
    let mut c: Option<RatOrePoly> = None;
    for (pi, mi) in probe.iter().zip(&entries) {
        let ui = if pi.is_zero() {
            RatOrePoly::one(&alg)
        } else {
            gcd_lclm(pi, mi)?.lclm_cof_a
        };
        c = Some(match c {
            None => ui,
            Some(prev) => gcd_lclm(&prev, &ui)?.lclm,
        });
    }
    let c = c.ok_or(OreError::BadMatrixShape)?.monic();
    let degree_sum: usize = entries.iter().map(|e| e.deg().unwrap()).sum();
    let certificate = c.deg() == Some(degree_sum);
    let mut annihilates = true;
    for (pi, mi) in probe.iter().zip(&entries) {
        let (_, r) = right_divide(&c.mul(pi), mi)?;
        if !r.is_zero() {
            annihilates = false;
        }
    }
    Ok(CyclicProbeResult { annihilator: c, probe, certificate, annihilates })
}
