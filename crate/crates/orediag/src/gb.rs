//! Left Groebner bases for submodules of R^q with transformation tracking.
//!
//! Cofactors and syzygies come from one mechanism: Buchberger runs on the
//! extended rows [e_i | M_i] with the M block placed at the higher,
//! POT-dominant positions. Rows whose leading monomial lands in the M block
//! project to the reduced basis of the row module together with their
//! cofactors; rows whose M block is zero are syzygies.

use std::collections::HashSet;
use std::sync::Arc;

use crate::algebra::Algebra;
use crate::error::OreError;
use crate::matrix::OreMatrix;
use crate::order::{key_divides, key_lcm, key_sub, ModMono, ModuleOrder, OreKey, TermOrder};
use crate::orepoly::OrePoly;
use crate::scalar::Scalar;

/// An element of the free module R^rank.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VecPoly {
    pub comps: Vec<OrePoly>,
}

impl VecPoly {
    pub fn zero(alg: &Arc<Algebra>, rank: usize) -> Self {
        VecPoly { comps: vec![OrePoly::zero(alg); rank] }
    }

    pub fn unit(alg: &Arc<Algebra>, rank: usize, pos: usize) -> Self {
        let mut v = Self::zero(alg, rank);
        v.comps[pos] = OrePoly::one(alg);
        v
    }

    pub fn rank(&self) -> usize {
        self.comps.len()
    }

    pub fn alg(&self) -> &Arc<Algebra> {
        &self.comps[0].alg
    }

    pub fn is_zero(&self) -> bool {
        self.comps.iter().all(|c| c.is_zero())
    }

    pub fn add(&self, other: &VecPoly) -> VecPoly {
        assert_eq!(self.rank(), other.rank());
        VecPoly {
            comps: self.comps.iter().zip(&other.comps).map(|(a, b)| a.add(b)).collect(),
        }
    }

    pub fn sub(&self, other: &VecPoly) -> VecPoly {
        assert_eq!(self.rank(), other.rank());
        VecPoly {
            comps: self.comps.iter().zip(&other.comps).map(|(a, b)| a.sub(b)).collect(),
        }
    }

    pub fn scale(&self, c: &Scalar) -> VecPoly {
        VecPoly { comps: self.comps.iter().map(|p| p.scale(c)).collect() }
    }

    /// Left multiplication by the monomial with the given key.
    pub fn mul_mono_left(&self, key: &OreKey) -> VecPoly {
        let alg = self.alg();
        let mono = OrePoly::monomial(alg, key.0.clone(), key.1, alg.field().one());
        VecPoly { comps: self.comps.iter().map(|p| mono.mul(p)).collect() }
    }

    pub fn mul_poly_left(&self, p: &OrePoly) -> VecPoly {
        VecPoly { comps: self.comps.iter().map(|c| p.mul(c)).collect() }
    }

    /// Leading module monomial and coefficient under POT.
    pub fn lm(&self, order: &ModuleOrder) -> Option<(ModMono, Scalar)> {
        for pos in (0..self.rank()).rev() {
            if let Some((k, c)) = self.comps[pos].leading_term(&order.term) {
                return Some(((pos, k.clone()), c.clone()));
            }
        }
        None
    }

    pub fn lpos(&self, order: &ModuleOrder) -> Option<usize> {
        self.lm(order).map(|((p, _), _)| p)
    }

    pub fn monic(&self, order: &ModuleOrder) -> VecPoly {
        match self.lm(order) {
            None => self.clone(),
            Some((_, c)) => self.scale(&c.inv()),
        }
    }

    pub fn max_ddeg(&self) -> Option<u32> {
        self.comps.iter().filter_map(|c| c.ddeg()).max()
    }
}

/// Result of a Groebner run over the rows of a matrix.
#[derive(Debug, Clone)]
pub struct GBResult {
    pub order: ModuleOrder,
    /// Reduced basis of the row module, ascending by leading monomial.
    pub gb: Vec<VecPoly>,
    /// cofactors[k] * input = gb[k], rows of length s = number of inputs.
    pub cofactors: Vec<Vec<OrePoly>>,
    /// Rows z with z * input = 0, a basis of the syzygy module.
    pub syzygies: Vec<VecPoly>,
    /// Indices of input rows that were zero and were dropped.
    pub dropped: Vec<usize>,
}

/// Deterministic full left reduction of `f` by `basis`.
///
/// Repeatedly reduces the largest reducible monomial, preferring the basis
/// element with the smallest index; returns the normal form and the cofactor
/// row with f = r + sum cof_k * basis_k.
pub fn left_reduce(
    f: &VecPoly,
    basis: &[VecPoly],
    order: &ModuleOrder,
) -> (VecPoly, Vec<OrePoly>) {
    let alg = f.alg().clone();
    let mut cof = vec![OrePoly::zero(&alg); basis.len()];
    let mut r = f.clone();
    // leading data of the basis, grouped for the scan
    let lead: Vec<Option<(ModMono, Scalar)>> = basis.iter().map(|g| g.lm(order)).collect();
    for pos in (0..f.rank()).rev() {
        loop {
            // largest reducible key at this position
            let mut best: Option<(OreKey, usize)> = None;
            for key in r.comps[pos].terms.keys() {
                let mut reducer: Option<usize> = None;
                for (idx, lm) in lead.iter().enumerate() {
                    if let Some(((gpos, gkey), _)) = lm {
                        if *gpos == pos && key_divides(gkey, key) {
                            reducer = Some(idx);
                            break;
                        }
                    }
                }
                if let Some(idx) = reducer {
                    let better = match &best {
                        None => true,
                        Some((bk, _)) => order.term.cmp_key(key, bk) == std::cmp::Ordering::Greater,
                    };
                    if better {
                        best = Some((key.clone(), idx));
                    }
                }
            }
            let Some((key, idx)) = best else { break };
            let ((_, gkey), _) = lead[idx].as_ref().unwrap();
            let shift = key_sub(&key, gkey);
            let gm = basis[idx].mul_mono_left(&shift);
            let ((_, gmkey), gmc) = gm.lm(order).unwrap();
            debug_assert_eq!(gmkey, key);
            let c = r.comps[pos].terms.get(&key).unwrap().clone();
            let factor = c.div(&gmc);
            r = r.sub(&gm.scale(&factor));
            cof[idx] = cof[idx].add(&OrePoly::monomial(&alg, shift.0, shift.1, factor));
        }
    }
    (r, cof)
}

fn spoly(f: &VecPoly, g: &VecPoly, order: &ModuleOrder) -> VecPoly {
    let ((pf, kf), _) = f.lm(order).unwrap();
    let ((pg, kg), _) = g.lm(order).unwrap();
    assert_eq!(pf, pg, "s-pair of different leading positions");
    let l = key_lcm(&kf, &kg);
    let af = f.mul_mono_left(&key_sub(&l, &kf));
    let ag = g.mul_mono_left(&key_sub(&l, &kg));
    let (_, ca) = af.lm(order).unwrap();
    let (_, cg) = ag.lm(order).unwrap();
    af.scale(&ca.inv()).sub(&ag.scale(&cg.inv()))
}

/// Buchberger with normal pair selection and the chain criterion applied at
/// insertion time; the coprimality criterion is not used because it is
/// unsound over skew polynomial rings.
fn buchberger(
    input: Vec<VecPoly>,
    order: &ModuleOrder,
    pair_limit: usize,
) -> Result<Vec<VecPoly>, OreError> {
    let mut basis: Vec<VecPoly> = Vec::new();
    let mut lms: Vec<ModMono> = Vec::new();
    // pending pairs (i, j) with i < j, lcm key cached
    let mut pairs: Vec<(usize, usize, OreKey)> = Vec::new();

    let mut insert = |basis: &mut Vec<VecPoly>,
                      lms: &mut Vec<ModMono>,
                      pairs: &mut Vec<(usize, usize, OreKey)>,
                      h: VecPoly| {
        let (lm, _) = h.lm(order).unwrap();
        let k = basis.len();
        // chain criterion: drop a pending pair whose lcm the new leading
        // monomial divides, unless it coincides with one of the new lcms
        pairs.retain(|(i, j, lcm_ij)| {
            let same_pos = lms[*i].0 == lm.0;
            if !same_pos || !key_divides(&lm.1, lcm_ij) {
                return true;
            }
            let lcm_ik = key_lcm(&lms[*i].1, &lm.1);
            let lcm_jk = key_lcm(&lms[*j].1, &lm.1);
            lcm_ik == *lcm_ij || lcm_jk == *lcm_ij
        });
        for i in 0..k {
            if lms[i].0 == lm.0 {
                pairs.push((i, k, key_lcm(&lms[i].1, &lm.1)));
            }
        }
        lms.push(lm);
        basis.push(h);
    };

    for row in input {
        if row.is_zero() {
            continue;
        }
        let (r, _) = left_reduce(&row, &basis, order);
        if !r.is_zero() {
            insert(&mut basis, &mut lms, &mut pairs, r.monic(order));
        }
    }

    let mut processed = 0usize;
    while !pairs.is_empty() {
        processed += 1;
        if processed > pair_limit {
            return Err(OreError::PairLimitExceeded(pair_limit));
        }
        // normal strategy: smallest lcm first, ties by indices
        let mut best = 0;
        for idx in 1..pairs.len() {
            let a = &pairs[idx];
            let b = &pairs[best];
            let ord = (lms[a.0].0)
                .cmp(&lms[b.0].0)
                .then_with(|| order.term.cmp_key(&a.2, &b.2))
                .then_with(|| (a.0, a.1).cmp(&(b.0, b.1)));
            if ord == std::cmp::Ordering::Less {
                best = idx;
            }
        }
        let (i, j, _) = pairs.swap_remove(best);
        let s = spoly(&basis[i], &basis[j], order);
        let (r, _) = left_reduce(&s, &basis, order);
        if !r.is_zero() {
            insert(&mut basis, &mut lms, &mut pairs, r.monic(order));
        }
    }
    Ok(basis)
}

/// Minimalizes and tail-reduces a basis into the unique reduced form,
/// sorted ascending by leading monomial.
fn inter_reduce(mut basis: Vec<VecPoly>, order: &ModuleOrder) -> Vec<VecPoly> {
    // minimalize: drop rows whose lm another row's lm divides
    let mut keep: Vec<bool> = vec![true; basis.len()];
    let lms: Vec<ModMono> = basis.iter().map(|g| g.lm(order).unwrap().0).collect();
    for i in 0..basis.len() {
        if !keep[i] {
            continue;
        }
        for j in 0..basis.len() {
            if i == j || !keep[j] {
                continue;
            }
            if lms[j].0 == lms[i].0 && key_divides(&lms[j].1, &lms[i].1) && lms[j].1 != lms[i].1 {
                keep[i] = false;
                break;
            }
        }
    }
    let mut kept: Vec<VecPoly> = basis
        .drain(..)
        .zip(keep)
        .filter_map(|(g, k)| if k { Some(g) } else { None })
        .collect();
    // tail-reduce every element against the others
    for i in 0..kept.len() {
        let others: Vec<VecPoly> = kept
            .iter()
            .enumerate()
            .filter_map(|(j, g)| if j != i { Some(g.clone()) } else { None })
            .collect();
        let (r, _) = left_reduce(&kept[i], &others, order);
        kept[i] = r.monic(order);
    }
    kept.sort_by(|a, b| {
        let (la, _) = a.lm(order).unwrap();
        let (lb, _) = b.lm(order).unwrap();
        order.cmp_mono(&la, &lb)
    });
    kept
}

/// Groebner basis of the row module of `rows` with cofactors and syzygies,
/// via Buchberger on the extended rows [e_i | row_i].
pub fn groebner_extended(
    rows: &[VecPoly],
    term: TermOrder,
    pair_limit: usize,
) -> Result<GBResult, OreError> {
    if rows.is_empty() {
        return Err(OreError::BadMatrixShape);
    }
    let rank = rows[0].rank();
    if rows.iter().any(|r| r.rank() != rank) {
        return Err(OreError::RankMismatch(rows[0].rank(), rank));
    }
    let alg = rows[0].alg().clone();
    let s = rows.len();
    let ext_order = ModuleOrder::new(s + rank, term);
    let order = ModuleOrder::new(rank, term);

    let dropped: Vec<usize> = (0..s).filter(|&i| rows[i].is_zero()).collect();

    let ext_rows: Vec<VecPoly> = rows
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut comps = Vec::with_capacity(s + rank);
            for k in 0..s {
                comps.push(if k == i { OrePoly::one(&alg) } else { OrePoly::zero(&alg) });
            }
            comps.extend(row.comps.iter().cloned());
            VecPoly { comps }
        })
        .collect();

    let basis = buchberger(ext_rows, &ext_order, pair_limit)?;
    let reduced = inter_reduce(basis, &ext_order);

    let mut gb = Vec::new();
    let mut cofactors = Vec::new();
    let mut syzygies = Vec::new();
    for row in reduced {
        let (lm, _) = row.lm(&ext_order).unwrap();
        let id_part: Vec<OrePoly> = row.comps[..s].to_vec();
        let m_part = VecPoly { comps: row.comps[s..].to_vec() };
        if lm.0 < s {
            debug_assert!(m_part.is_zero(), "syzygy row with nonzero module part");
            syzygies.push(VecPoly { comps: id_part });
        } else {
            gb.push(m_part);
            cofactors.push(id_part);
        }
    }
    Ok(GBResult { order, gb, cofactors, syzygies, dropped })
}

/// Verifies the reduced-basis property: pairwise distinct leading monomials
/// and no leading monomial divides any monomial of another element.
pub fn check_reduced(gb: &[VecPoly], order: &ModuleOrder) -> Result<(), OreError> {
    let lms: Vec<ModMono> = gb
        .iter()
        .map(|g| g.lm(order).map(|(m, _)| m))
        .collect::<Option<Vec<_>>>()
        .ok_or_else(|| OreError::NotReduced("zero element in basis".into()))?;
    for i in 0..gb.len() {
        for j in 0..gb.len() {
            if i == j {
                continue;
            }
            if lms[i] == lms[j] {
                return Err(OreError::NotReduced(format!(
                    "elements {} and {} share a leading monomial",
                    i, j
                )));
            }
            let (pos, key) = &lms[i];
            for (mkey, _) in gb[j].comps[*pos].terms.iter() {
                if key_divides(key, mkey) {
                    return Err(OreError::NotReduced(format!(
                        "lm of element {} divides a monomial of element {}",
                        i, j
                    )));
                }
            }
        }
    }
    Ok(())
}

/// The order-minimal basis row per occupied leading position together with
/// its cofactor row (the boxed rows of the block triangular form).
#[derive(Debug, Clone)]
pub struct GStar {
    pub rows: Vec<VecPoly>,
    pub cofactor_rows: Vec<Vec<OrePoly>>,
    pub positions: Vec<usize>,
}

pub fn select_gstar(gbr: &GBResult) -> Result<GStar, OreError> {
    check_reduced(&gbr.gb, &gbr.order)?;
    let mut rows = Vec::new();
    let mut cof = Vec::new();
    let mut positions = Vec::new();
    // gb is ascending, so the first row seen per position is the minimum
    for (row, c) in gbr.gb.iter().zip(&gbr.cofactors) {
        let pos = row.lpos(&gbr.order).unwrap();
        if positions.last() != Some(&pos) {
            rows.push(row.clone());
            cof.push(c.clone());
            positions.push(pos);
        }
    }
    Ok(GStar { rows, cofactor_rows: cof, positions })
}

/// Rows of a matrix as module elements.
pub fn matrix_rows(m: &OreMatrix) -> Vec<VecPoly> {
    (0..m.rows()).map(|i| VecPoly { comps: m.row(i) }).collect()
}

/// Applies a cofactor row to input rows: sum cof_k * rows_k.
pub fn combine(cof: &[OrePoly], rows: &[VecPoly]) -> VecPoly {
    assert_eq!(cof.len(), rows.len());
    let mut acc = VecPoly::zero(rows[0].alg(), rows[0].rank());
    for (c, r) in cof.iter().zip(rows) {
        acc = acc.add(&r.mul_poly_left(c));
    }
    acc
}
