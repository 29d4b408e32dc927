//! Side swapping between left and right modules: involutive
//! anti-automorphisms where available, opposite-algebra transport otherwise.

use std::sync::Arc;

use crate::algebra::{Algebra, Preset};
use crate::basepoly::BasePoly;
use crate::error::OreError;
use crate::matrix::OreMatrix;
use crate::orepoly::OrePoly;

/// An involutive anti-automorphism given by its images on the generators.
/// Base variables must map to base polynomials; the Ore variable must map to
/// an element of D-degree one.
#[derive(Debug, Clone)]
pub struct Involution {
    pub alg: Arc<Algebra>,
    pub var_images: Vec<BasePoly>,
    pub oper_image: OrePoly,
}

impl Involution {
    /// Validates candidate images: theta must respect every defining relation
    /// (as an anti-automorphism) and square to the identity on generators.
    pub fn validate(
        alg: &Arc<Algebra>,
        var_images: Vec<BasePoly>,
        oper_image: OrePoly,
    ) -> Result<Involution, OreError> {
        let n = alg.nvars();
        if var_images.len() != n {
            return Err(OreError::VariableMismatch { expected: n, got: var_images.len() });
        }
        if oper_image.ddeg() != Some(1) {
            return Err(OreError::InvalidInvolution(
                "image of the Ore variable must have D-degree 1".into(),
            ));
        }
        let theta = Involution { alg: alg.clone(), var_images, oper_image };
        let field = alg.field();
        for i in 0..n {
            // theta(D x_i) = theta(x_i) theta(D) must match
            // theta(sigma(x_i) D + delta(x_i)) = theta(D) theta(sigma(x_i)) + theta(delta(x_i))
            let tx = OrePoly::from_base(alg, &theta.var_images[i]);
            let lhs = tx.mul(&theta.oper_image);
            let e = {
                let mut e = vec![0u32; n];
                e[i] = 1;
                e
            };
            let sigma_xi = alg.endo().apply_monomial(&e, &field);
            let rhs = theta
                .oper_image
                .mul(&OrePoly::from_base(alg, &theta.apply_base(&sigma_xi)))
                .add(&OrePoly::from_base(alg, &theta.apply_base(&alg.deriv().images[i])));
            if lhs != rhs {
                return Err(OreError::InvalidInvolution(format!(
                    "relation for {} is not preserved",
                    alg.var_names()[i]
                )));
            }
            // theta^2 = id on x_i
            let twice = theta.apply(&OrePoly::base_var(alg, i));
            let twice = theta.apply(&twice);
            if twice != OrePoly::base_var(alg, i) {
                return Err(OreError::InvalidInvolution(format!(
                    "theta^2 moves {}",
                    alg.var_names()[i]
                )));
            }
        }
        let twice = theta.apply(&theta.apply(&OrePoly::oper(alg)));
        if twice != OrePoly::oper(alg) {
            return Err(OreError::InvalidInvolution("theta^2 moves the Ore variable".into()));
        }
        Ok(theta)
    }

    /// Built-in involutions: Weyl-type algebras (sigma = id, constant delta
    /// images) use theta(x_i) = x_i, theta(D) = -D; the shift algebra uses
    /// theta(t) = -t on the shifted variable and theta(S) = S.
    pub fn builtin(alg: &Arc<Algebra>) -> Option<Involution> {
        let n = alg.nvars();
        let field = alg.field();
        let candidates: Vec<(Vec<BasePoly>, OrePoly)> = match alg.preset() {
            Preset::Shift => {
                let mut vars: Vec<BasePoly> =
                    (0..n).map(|i| BasePoly::var(n, i, &field)).collect();
                vars[n - 1] = vars[n - 1].neg();
                vec![(vars, OrePoly::oper(alg))]
            }
            _ if alg.sigma_is_identity()
                && alg.deriv().images.iter().all(|p| p.is_zero() || p.is_constant()) =>
            {
                let vars = (0..n).map(|i| BasePoly::var(n, i, &field)).collect();
                vec![(vars, OrePoly::oper(alg).neg())]
            }
            _ => vec![],
        };
        for (vars, oper) in candidates {
            if let Ok(theta) = Involution::validate(alg, vars, oper) {
                return Some(theta);
            }
        }
        None
    }

    /// theta of a base polynomial: variables are replaced by their images
    /// (the images commute, so no ordering concerns arise).
    pub fn apply_base(&self, p: &BasePoly) -> BasePoly {
        let field = self.alg.field();
        let mut out = BasePoly::zero(p.nvars);
        for (e, c) in &p.terms {
            let mut m = BasePoly::one(p.nvars, &field);
            for (i, &k) in e.iter().enumerate() {
                if k > 0 {
                    m = m.mul(&self.var_images[i].pow(k, &field));
                }
            }
            out = out.add(&m.scale(c));
        }
        out
    }

    /// theta(x^alpha D^b) = theta(D)^b * theta(x^alpha), extended linearly.
    pub fn apply(&self, f: &OrePoly) -> OrePoly {
        assert_eq!(f.alg.id(), self.alg.id(), "involution applied across algebras");
        let mut out = OrePoly::zero(&self.alg);
        let mut oper_pow: Vec<OrePoly> = vec![OrePoly::one(&self.alg)];
        for ((e, b), c) in &f.terms {
            while oper_pow.len() <= *b as usize {
                let next = oper_pow.last().unwrap().mul(&self.oper_image);
                oper_pow.push(next);
            }
            let base = BasePoly::monomial(self.alg.nvars(), e.clone(), c.clone());
            let img = oper_pow[*b as usize].mul(&OrePoly::from_base(&self.alg, &self.apply_base(&base)));
            out = out.add(&img);
        }
        out
    }

    /// The matrix map M -> theta(M)^T.
    pub fn apply_matrix(&self, m: &OreMatrix) -> OreMatrix {
        let mut rows = Vec::with_capacity(m.cols());
        for j in 0..m.cols() {
            let mut row = Vec::with_capacity(m.rows());
            for i in 0..m.rows() {
                row.push(self.apply(m.at(i, j)));
            }
            rows.push(row);
        }
        OreMatrix::from_rows(&self.alg, rows).unwrap()
    }
}

/// Re-reads an element of `from` in its opposite algebra `to`: the
/// normal-form word x^alpha D^b is the opposite product D^b * x^alpha, which
/// gets renormalized under the opposite commutation rule.
pub fn transport_poly(f: &OrePoly, to: &Arc<Algebra>) -> OrePoly {
    let mut out = OrePoly::zero(to);
    for ((e, b), c) in &f.terms {
        let dpow = OrePoly::monomial(to, vec![0; to.nvars()], *b, to.field().one());
        let xpart = OrePoly::monomial(to, e.clone(), 0, c.clone());
        out = out.add(&dpow.mul(&xpart));
    }
    out
}

/// Opposite transport of a matrix: transpose and re-read every entry in the
/// opposite algebra. Applying it twice (with the round-trip algebra) is the
/// identity.
pub fn opposite_transport(m: &OreMatrix, to: &Arc<Algebra>) -> OreMatrix {
    let mut rows = Vec::with_capacity(m.cols());
    for j in 0..m.cols() {
        let mut row = Vec::with_capacity(m.rows());
        for i in 0..m.rows() {
            row.push(transport_poly(m.at(i, j), to));
        }
        rows.push(row);
    }
    OreMatrix::from_rows(to, rows).unwrap()
}

/// The side-swap mechanism a diagonalization run uses.
#[derive(Debug, Clone)]
pub enum SideSwap {
    Involution(Involution),
    /// The algebra paired with its opposite; `apply_matrix` maps between the
    /// two directions depending on which algebra the argument lives in.
    Opposite { forward: Arc<Algebra>, backward: Arc<Algebra> },
}

impl SideSwap {
    /// Picks the involution when one is known for the algebra, otherwise
    /// falls back to opposite transport.
    pub fn for_algebra(alg: &Arc<Algebra>) -> Result<SideSwap, OreError> {
        if let Some(theta) = Involution::builtin(alg) {
            return Ok(SideSwap::Involution(theta));
        }
        let op = alg.opposite()?;
        Ok(SideSwap::Opposite { forward: alg.clone(), backward: op })
    }

    pub fn mechanism(&self) -> &'static str {
        match self {
            SideSwap::Involution(_) => "involution",
            SideSwap::Opposite { .. } => "opposite",
        }
    }

    pub fn apply_matrix(&self, m: &OreMatrix) -> OreMatrix {
        match self {
            SideSwap::Involution(theta) => theta.apply_matrix(m),
            SideSwap::Opposite { forward, backward } => {
                let target = if m.alg.id() == forward.id() { backward } else { forward };
                opposite_transport(m, target)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{validate_algebra_spec, AlgebraSpec};
    use crate::scalar::{Field, Scalar};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn make(preset: Preset, var: &str, oper: &str, q: Option<Scalar>) -> Arc<Algebra> {
        validate_algebra_spec(
            AlgebraSpec::preset(preset, Field::Rational, vec![var.into()], oper.into(), q).unwrap(),
        )
        .unwrap()
    }

    fn random_ore(alg: &Arc<Algebra>, rng: &mut ChaCha8Rng) -> OrePoly {
        let f = alg.field();
        let mut p = OrePoly::zero(alg);
        for _ in 0..rng.gen_range(1..=4) {
            p.add_term(
                (vec![rng.gen_range(0..=3)], rng.gen_range(0..=3)),
                f.from_i64(rng.gen_range(-4i64..=4)),
            );
        }
        p
    }

    #[test]
    fn weyl_involution_on_oper() {
        let alg = make(Preset::Weyl, "x", "d", None);
        let theta = Involution::builtin(&alg).unwrap();
        let d = OrePoly::oper(&alg);
        assert_eq!(theta.apply(&d), d.neg());
        // identity matrix is fixed
        let id = OreMatrix::identity(&alg, 3);
        assert_eq!(theta.apply_matrix(&id), id);
        // theta(x d) = theta(d) theta(x) = -dx = -xd - 1
        let xd = OrePoly::base_var(&alg, 0).mul(&d);
        let mut expect = xd.neg();
        expect.add_term((vec![0], 0), Field::Rational.from_i64(-1));
        assert_eq!(theta.apply(&xd), expect);
    }

    #[test]
    fn involution_is_anti_multiplicative_and_involutive() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for alg in [make(Preset::Weyl, "x", "d", None), make(Preset::Shift, "t", "S", None)] {
            let theta = Involution::builtin(&alg).expect("builtin involution");
            for _ in 0..40 {
                let f = random_ore(&alg, &mut rng);
                let g = random_ore(&alg, &mut rng);
                assert_eq!(theta.apply(&f.mul(&g)), theta.apply(&g).mul(&theta.apply(&f)));
                assert_eq!(theta.apply(&theta.apply(&f)), f);
            }
        }
    }

    #[test]
    fn q_algebras_have_no_builtin_involution() {
        let q = Field::Rational.from_i64(2);
        let alg = make(Preset::QWeyl, "x", "d", Some(q));
        assert!(Involution::builtin(&alg).is_none());
    }

    #[test]
    fn opposite_weyl_relation() {
        // in the opposite Weyl algebra D x = x D - 1
        let alg = make(Preset::Weyl, "x", "d", None);
        let op = alg.opposite().unwrap();
        let d = OrePoly::oper(&op);
        let x = OrePoly::base_var(&op, 0);
        let mut expect = OrePoly::monomial(&op, vec![1], 1, Field::Rational.one());
        expect.add_term((vec![0], 0), Field::Rational.from_i64(-1));
        assert_eq!(d.mul(&x), expect);
    }

    #[test]
    fn transport_reverses_products() {
        let mut rng = ChaCha8Rng::seed_from_u64(22);
        for alg in [
            make(Preset::Weyl, "x", "d", None),
            make(Preset::Shift, "t", "S", None),
            make(Preset::Difference, "x", "D", None),
            make(Preset::QWeyl, "x", "d", Some(Field::Rational.from_i64(3))),
        ] {
            let op = alg.opposite().unwrap();
            for _ in 0..10 {
                let f = random_ore(&alg, &mut rng);
                let g = random_ore(&alg, &mut rng);
                let lhs = transport_poly(&f.mul(&g), &op);
                let rhs = transport_poly(&g, &op).mul(&transport_poly(&f, &op));
                assert_eq!(lhs, rhs, "a*b = op(b) op(a) fails for {:?}", alg.preset());
                // round trip is exact
                let back = transport_poly(&transport_poly(&f, &op), &alg);
                assert_eq!(back, f);
            }
        }
    }

    #[test]
    fn shift_opposite_relation_is_sigma_inverse() {
        // shift algebra S t = (t+1) S has delta = 0, so the opposite relation
        // is S t = (t-1) S with no derivation term
        let alg = make(Preset::Shift, "t", "S", None);
        let op = alg.opposite().unwrap();
        let s = OrePoly::oper(&op);
        let t = OrePoly::base_var(&op, 0);
        let mut expect = OrePoly::monomial(&op, vec![1], 1, Field::Rational.one());
        expect.add_term((vec![0], 1), Field::Rational.from_i64(-1));
        assert_eq!(s.mul(&t), expect);
        // the difference algebra does pick up a constant: D x = (x-1) D - 1
        let diff = make(Preset::Difference, "x", "D", None);
        let dop = diff.opposite().unwrap();
        let dd = OrePoly::oper(&dop);
        let x = OrePoly::base_var(&dop, 0);
        let mut expect = OrePoly::monomial(&dop, vec![1], 1, Field::Rational.one());
        expect.add_term((vec![0], 1), Field::Rational.from_i64(-1));
        expect.add_term((vec![0], 0), Field::Rational.from_i64(-1));
        assert_eq!(dd.mul(&x), expect);
    }

    #[test]
    fn scalar_matrix_transport_fixed() {
        let alg = make(Preset::Weyl, "x", "d", None);
        let op = alg.opposite().unwrap();
        let five = OrePoly::constant(&alg, Field::Rational.from_i64(5));
        let m = OreMatrix::from_rows(&alg, vec![vec![five]]).unwrap();
        let t = opposite_transport(&m, &op);
        assert_eq!(t.at(0, 0).terms, m.at(0, 0).terms);
        let back = opposite_transport(&t, &alg);
        assert_eq!(back, m);
    }

    #[test]
    fn matrix_transport_round_trip_bit_exact() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        let alg = make(Preset::QWeyl, "x", "d", Some(Field::Rational.from_i64(2)));
        let op = alg.opposite().unwrap();
        let rows: Vec<Vec<OrePoly>> = (0..2)
            .map(|_| (0..3).map(|_| random_ore(&alg, &mut rng)).collect())
            .collect();
        let m = OreMatrix::from_rows(&alg, rows).unwrap();
        let t = opposite_transport(&m, &op);
        assert_eq!(t.rows(), 3);
        assert_eq!(t.cols(), 2);
        assert_eq!(opposite_transport(&t, &alg), m);
    }

    #[test]
    fn sideswap_selection() {
        assert_eq!(
            SideSwap::for_algebra(&make(Preset::Weyl, "x", "d", None)).unwrap().mechanism(),
            "involution"
        );
        assert_eq!(
            SideSwap::for_algebra(&make(Preset::Shift, "t", "S", None)).unwrap().mechanism(),
            "involution"
        );
        assert_eq!(
            SideSwap::for_algebra(&make(Preset::QWeyl, "x", "d", Some(Field::Rational.from_i64(2))))
                .unwrap()
                .mechanism(),
            "opposite"
        );
        assert_eq!(
            SideSwap::for_algebra(&make(Preset::Difference, "x", "D", None)).unwrap().mechanism(),
            "opposite"
        );
    }

    #[test]
    fn degree_preserved_by_swaps() {
        let mut rng = ChaCha8Rng::seed_from_u64(24);
        for alg in [
            make(Preset::Weyl, "x", "d", None),
            make(Preset::QWeyl, "x", "d", Some(Field::Rational.from_i64(2))),
        ] {
            let swap = SideSwap::for_algebra(&alg).unwrap();
            for _ in 0..20 {
                let f = random_ore(&alg, &mut rng);
                let m = OreMatrix::from_rows(&alg, vec![vec![f.clone()]]).unwrap();
                let t = swap.apply_matrix(&m);
                assert_eq!(t.at(0, 0).ddeg(), f.ddeg());
            }
        }
    }
}
