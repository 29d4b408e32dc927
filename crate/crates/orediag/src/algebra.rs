//! Algebra descriptions: the skew polynomial ring K[x_1..x_n][D; sigma, delta]
//! given by per-variable affine sigma images and polynomial delta images.

use std::collections::HashMap;
use std::sync::atomic::{AtomicU64, Ordering as AtomicOrdering};
use std::sync::{Arc, Mutex};

use crate::basepoly::{BasePoly, DerivSpec, EndoSpec};
use crate::error::OreError;
use crate::scalar::{is_prime, Field, Scalar};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Preset {
    Weyl,
    Shift,
    Difference,
    QWeyl,
    QDifference,
    Custom,
}

impl Preset {
    pub fn name(&self) -> &'static str {
        match self {
            Preset::Weyl => "weyl",
            Preset::Shift => "shift",
            Preset::Difference => "difference",
            Preset::QWeyl => "qweyl",
            Preset::QDifference => "qdifference",
            Preset::Custom => "custom",
        }
    }
}

/// Unvalidated description of an Ore algebra.
#[derive(Debug, Clone)]
pub struct AlgebraSpec {
    pub field: Field,
    pub var_names: Vec<String>,
    pub oper_name: String,
    pub endo: EndoSpec,
    pub deriv: DerivSpec,
    pub preset: Preset,
    pub q: Option<Scalar>,
}

impl AlgebraSpec {
    /// Builds a preset spec. The commutation relation acts on the last listed
    /// variable; any preceding variables are inert constants (sigma = id,
    /// delta = 0). `q` is required for the q-presets and must be nonzero.
    pub fn preset(
        preset: Preset,
        field: Field,
        var_names: Vec<String>,
        oper_name: String,
        q: Option<Scalar>,
    ) -> Result<AlgebraSpec, OreError> {
        let n = var_names.len();
        if n == 0 {
            return Err(OreError::VariableMismatch { expected: 1, got: 0 });
        }
        let mut endo = EndoSpec::identity(n, &field);
        let mut deriv = DerivSpec::zero(n);
        let last = n - 1;
        let one = BasePoly::one(n, &field);
        let q_val = || -> Result<Scalar, OreError> {
            let v = q.clone().ok_or_else(|| OreError::InvalidFieldElement("missing q".into()))?;
            if v.is_zero() {
                return Err(OreError::InvalidFieldElement("q must be nonzero".into()));
            }
            Ok(v)
        };
        match preset {
            Preset::Weyl => {
                deriv.images[last] = one;
            }
            Preset::Shift => {
                endo.shifts[last] = field.one();
            }
            Preset::Difference => {
                endo.shifts[last] = field.one();
                deriv.images[last] = one;
            }
            Preset::QWeyl => {
                endo.scales[last] = q_val()?;
                deriv.images[last] = one;
            }
            Preset::QDifference => {
                let qv = q_val()?;
                endo.scales[last] = qv.clone();
                // delta(x) = (q-1)x
                deriv.images[last] = BasePoly::var(n, last, &field).scale(&qv.sub(&field.one()));
            }
            Preset::Custom => {}
        }
        Ok(AlgebraSpec { field, var_names, oper_name, endo, deriv, preset, q })
    }
}

static NEXT_ALGEBRA_ID: AtomicU64 = AtomicU64::new(1);

/// A validated algebra; shared behind `Arc` and immutable apart from the
/// internal sigma/delta evaluation caches, which are mutex-guarded so values
/// can be used from several threads.
pub struct Algebra {
    spec: AlgebraSpec,
    id: u64,
    endo_inv: EndoSpec,
    sigma_cache: Mutex<HashMap<Vec<u32>, BasePoly>>,
    delta_cache: Mutex<HashMap<Vec<u32>, BasePoly>>,
}

impl std::fmt::Debug for Algebra {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Algebra")
            .field("preset", &self.spec.preset)
            .field("vars", &self.spec.var_names)
            .field("oper", &self.spec.oper_name)
            .finish()
    }
}

/// Validates a spec: every sigma scale must be invertible and the delta
/// images must satisfy the pairwise skew-Leibniz compatibility condition.
pub fn validate_algebra_spec(spec: AlgebraSpec) -> Result<Arc<Algebra>, OreError> {
    let n = spec.var_names.len();
    if n == 0 || spec.endo.nvars() != n || spec.deriv.nvars() != n {
        return Err(OreError::VariableMismatch { expected: n.max(1), got: spec.endo.nvars() });
    }
    if let Field::Prime(p) = spec.field {
        if !is_prime(p) {
            return Err(OreError::NotPrime(p));
        }
    }
    for (i, u) in spec.endo.scales.iter().enumerate() {
        if u.is_zero() {
            return Err(OreError::NonInvertibleSigma(spec.var_names[i].clone()));
        }
    }
    if let Err((i, j)) = spec.deriv.check_compatible(&spec.endo, &spec.field) {
        return Err(OreError::IncompatibleDerivation(
            spec.var_names[i].clone(),
            spec.var_names[j].clone(),
        ));
    }
    let endo_inv = spec.endo.inverse(&spec.field);
    Ok(Arc::new(Algebra {
        spec,
        id: NEXT_ALGEBRA_ID.fetch_add(1, AtomicOrdering::Relaxed),
        endo_inv,
        sigma_cache: Mutex::new(HashMap::new()),
        delta_cache: Mutex::new(HashMap::new()),
    }))
}

impl Algebra {
    pub fn id(&self) -> u64 {
        self.id
    }

    pub fn spec(&self) -> &AlgebraSpec {
        &self.spec
    }

    pub fn field(&self) -> Field {
        self.spec.field
    }

    pub fn nvars(&self) -> usize {
        self.spec.var_names.len()
    }

    pub fn var_names(&self) -> &[String] {
        &self.spec.var_names
    }

    pub fn oper_name(&self) -> &str {
        &self.spec.oper_name
    }

    pub fn preset(&self) -> Preset {
        self.spec.preset
    }

    /// Only the Weyl algebra over a characteristic-zero field is simple.
    pub fn is_simple(&self) -> bool {
        self.spec.preset == Preset::Weyl && self.spec.field == Field::Rational
    }

    pub fn sigma_is_identity(&self) -> bool {
        self.spec.endo.is_identity()
    }

    pub fn delta_is_zero(&self) -> bool {
        self.spec.deriv.is_zero()
    }

    pub fn endo(&self) -> &EndoSpec {
        &self.spec.endo
    }

    pub fn endo_inverse(&self) -> &EndoSpec {
        &self.endo_inv
    }

    pub fn deriv(&self) -> &DerivSpec {
        &self.spec.deriv
    }

    pub fn sigma(&self, p: &BasePoly) -> BasePoly {
        if self.sigma_is_identity() {
            return p.clone();
        }
        let field = self.field();
        let mut cache = self.sigma_cache.lock().unwrap();
        let mut out = BasePoly::zero(p.nvars);
        for (e, c) in &p.terms {
            let image = cache
                .entry(e.clone())
                .or_insert_with(|| self.spec.endo.apply_monomial(e, &field))
                .clone();
            out = out.add(&image.scale(c));
        }
        out
    }

    pub fn delta(&self, p: &BasePoly) -> BasePoly {
        if self.delta_is_zero() {
            return BasePoly::zero(p.nvars);
        }
        let field = self.field();
        let mut cache = self.delta_cache.lock().unwrap();
        let mut out = BasePoly::zero(p.nvars);
        for (e, c) in &p.terms {
            let image = delta_monomial_cached(&mut cache, &self.spec, e, &field);
            out = out.add(&image.scale(c));
        }
        out
    }

    pub fn sigma_pow(&self, p: &BasePoly, k: u32) -> BasePoly {
        let mut out = p.clone();
        for _ in 0..k {
            out = self.sigma(&out);
        }
        out
    }

    /// The opposite algebra: sigma_op = sigma^{-1} and
    /// delta_op(x_i) = -delta(x_i)/u_i, which presents the same vector space
    /// with the reversed multiplication inside the same ring class.
    pub fn opposite(self: &Arc<Self>) -> Result<Arc<Algebra>, OreError> {
        let field = self.field();
        let endo_op = self.spec.endo.inverse(&field);
        let images = self
            .spec
            .deriv
            .images
            .iter()
            .zip(&self.spec.endo.scales)
            .map(|(d, u)| d.scale(&u.inv().neg()))
            .collect();
        validate_algebra_spec(AlgebraSpec {
            field,
            var_names: self.spec.var_names.clone(),
            oper_name: self.spec.oper_name.clone(),
            endo: endo_op,
            deriv: DerivSpec { images },
            preset: Preset::Custom,
            q: self.spec.q.clone(),
        })
    }
}

fn delta_monomial_cached(
    cache: &mut HashMap<Vec<u32>, BasePoly>,
    spec: &AlgebraSpec,
    exps: &[u32],
    field: &Field,
) -> BasePoly {
    if let Some(hit) = cache.get(exps) {
        return hit.clone();
    }
    let n = exps.len();
    let result = match exps.iter().position(|&e| e > 0) {
        None => BasePoly::zero(n),
        Some(i) => {
            let mut rest = exps.to_vec();
            rest[i] -= 1;
            let inner = delta_monomial_cached(cache, spec, &rest, field);
            let rest_poly = BasePoly::monomial(n, rest, field.one());
            spec.endo
                .image_of_var(i)
                .mul(&inner)
                .add(&spec.deriv.images[i].mul(&rest_poly))
        }
    };
    cache.insert(exps.to_vec(), result.clone());
    result
}

#[cfg(test)]
mod tests {
    use super::*;

    fn weyl() -> Arc<Algebra> {
        validate_algebra_spec(
            AlgebraSpec::preset(
                Preset::Weyl,
                Field::Rational,
                vec!["x".into()],
                "d".into(),
                None,
            )
            .unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn weyl_preset_is_valid() {
        let alg = weyl();
        assert!(alg.is_simple());
        assert!(alg.sigma_is_identity());
        // delta(x^3) = 3x^2
        let f = Field::Rational;
        let x3 = BasePoly::monomial(1, vec![3], f.one());
        assert_eq!(alg.delta(&x3), BasePoly::monomial(1, vec![2], f.from_i64(3)));
    }

    #[test]
    fn incompatible_derivation_is_rejected() {
        // sigma(x) = x+1, sigma(y) = y, delta(x) = y, delta(y) = 1:
        // delta(y)(sigma(x)-x) = 1 but delta(x)(sigma(y)-y) = 0
        let f = Field::Rational;
        let endo = EndoSpec { scales: vec![f.one(), f.one()], shifts: vec![f.one(), f.zero()] };
        let deriv = DerivSpec { images: vec![BasePoly::var(2, 1, &f), BasePoly::one(2, &f)] };
        let spec = AlgebraSpec {
            field: f,
            var_names: vec!["x".into(), "y".into()],
            oper_name: "d".into(),
            endo,
            deriv,
            preset: Preset::Custom,
            q: None,
        };
        match validate_algebra_spec(spec) {
            Err(OreError::IncompatibleDerivation(a, b)) => {
                assert_eq!((a.as_str(), b.as_str()), ("x", "y"));
            }
            other => panic!("expected IncompatibleDerivation, got {:?}", other.map(|_| ())),
        }
    }

    #[test]
    fn zero_sigma_scale_is_rejected() {
        let f = Field::Rational;
        let endo = EndoSpec { scales: vec![f.zero()], shifts: vec![f.one()] };
        let spec = AlgebraSpec {
            field: f,
            var_names: vec!["x".into()],
            oper_name: "d".into(),
            endo,
            deriv: DerivSpec::zero(1),
            preset: Preset::Custom,
            q: None,
        };
        match validate_algebra_spec(spec) {
            Err(OreError::NonInvertibleSigma(v)) => assert_eq!(v, "x"),
            other => panic!("expected NonInvertibleSigma, got {:?}", other.map(|_| ())),
        }
    }

    #[test]
    fn opposite_of_shift_has_inverse_shift() {
        let alg = validate_algebra_spec(
            AlgebraSpec::preset(
                Preset::Shift,
                Field::Rational,
                vec!["t".into()],
                "S".into(),
                None,
            )
            .unwrap(),
        )
        .unwrap();
        let op = alg.opposite().unwrap();
        let f = Field::Rational;
        // sigma_op(t) = t - 1, delta_op(t) = 0
        let t = BasePoly::var(1, 0, &f);
        let mut tm1 = t.clone();
        tm1.add_term(vec![0], f.from_i64(-1));
        assert_eq!(op.sigma(&t), tm1);
        assert!(op.delta(&t).is_zero());
        // opposite of the opposite is the original relation data
        let opop = op.opposite().unwrap();
        assert_eq!(opop.spec().endo, alg.spec().endo);
        assert_eq!(opop.spec().deriv, alg.spec().deriv);
    }

    #[test]
    fn composite_modulus_is_rejected() {
        let spec = AlgebraSpec::preset(
            Preset::Weyl,
            Field::Prime(15),
            vec!["x".into()],
            "d".into(),
            None,
        )
        .unwrap();
        assert!(matches!(validate_algebra_spec(spec), Err(OreError::NotPrime(15))));
    }
}
