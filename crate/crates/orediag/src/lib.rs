//! Exact computation of diagonal forms (and Jacobson normal forms over the
//! rational Weyl algebra) for matrices over skew polynomial rings
//! K[x_1..x_n][D; sigma, delta], using module Groebner bases with
//! transformation tracking. Everything runs in exact arithmetic over Q or a
//! prime field; the fraction-free pipeline keeps all intermediate data
//! polynomial after an initial denominator-clearing step.

pub mod algebra;
pub mod basepoly;
pub mod diag;
pub mod error;
pub mod jacobson;
pub mod matrix;
pub mod order;
pub mod orepoly;
pub mod rational;
pub mod scalar;
pub mod gb;
pub mod swap;

pub use algebra::{validate_algebra_spec, Algebra, AlgebraSpec, Preset};
pub use basepoly::{common_denominator, BasePoly, DerivSpec, EndoSpec};
pub use diag::{clear_denominators, diagonalize, is_unimodular_over_rstar, verify_decomposition, DiagOptions, DiagResult, RunStats, VerifyReport};
pub use error::{OreError, ParseError, VerifyCheck};
pub use gb::{groebner_extended, left_reduce, select_gstar, GBResult, GStar, VecPoly};
pub use jacobson::{cyclic_vector_probe, find_shift_exponent, strengthen_diagonal, strengthen_diagonal_with, CyclicProbeResult, JacobsonResult};
pub use matrix::{FracEntry, OreMatrix, RatioMatrix};
pub use order::{ModuleOrder, OreKey, TermOrder, XTieBreak};
pub use orepoly::OrePoly;
pub use rational::{diagonalize_rational, gcd_lclm, left_divide, rat_sigma_delta, right_divide, RatDiagResult, RatFunc, RatMatrix, RatOrePoly};
pub use scalar::{Field, Scalar};
pub use swap::{opposite_transport, Involution, SideSwap};
