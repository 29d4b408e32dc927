//! Error types shared across the engine.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OreError {
    #[error("sigma image of {0} has a non-invertible linear coefficient")]
    NonInvertibleSigma(String),
    #[error("delta images of {0} and {1} violate the skew-Leibniz compatibility condition")]
    IncompatibleDerivation(String, String),
    #[error("operands belong to different algebras")]
    AlgebraMismatch,
    #[error("variable count mismatch: expected {expected}, got {got}")]
    VariableMismatch { expected: usize, got: usize },
    #[error("module ranks differ: {0} vs {1}")]
    RankMismatch(usize, usize),
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("division by zero")]
    DivisionByZero,
    #[error("zero polynomial has no leading data")]
    ZeroPolynomial,
    #[error("invalid field element: {0}")]
    InvalidFieldElement(String),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("no involution is available for this algebra")]
    NoInvolution,
    #[error("involution images fail validation: {0}")]
    InvalidInvolution(String),
    #[error("iteration cap of {0} exceeded")]
    IterationCapExceeded(usize),
    #[error("Groebner pair limit of {0} exceeded")]
    PairLimitExceeded(usize),
    #[error("basis is not reduced: {0}")]
    NotReduced(String),
    #[error(
        "the {0} algebra is not a simple domain (Diag(s,s) over the shift algebra \
         is annihilated by a proper two-sided ideal, so no Jacobson form exists); \
         only the Weyl algebra over a characteristic-zero field is supported"
    )]
    NotSimpleDomain(String),
    #[error("rational arithmetic requires exactly one base variable, this algebra has {0}")]
    NotUnivariate(usize),
    #[error("zero diagonal entry at position {0}")]
    ZeroDiagonalEntry(usize),
    #[error("no shift exponent with nonzero remainder exists (internal error)")]
    NoExponentFound,
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("matrix is empty or ragged")]
    BadMatrixShape,
    #[error("verification failed: {0}")]
    VerificationFailed(VerifyCheck),
}

/// The identity or property a failed verification names.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VerifyCheck {
    ProductIdentity,
    NotDiagonal,
    NonPolynomialEntry,
    UnimodularU,
    UnimodularV,
    DegreeSum,
}

impl std::fmt::Display for VerifyCheck {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let name = match self {
            VerifyCheck::ProductIdentity => "U*(T*M)*V = D",
            VerifyCheck::NotDiagonal => "D is diagonal",
            VerifyCheck::NonPolynomialEntry => "entries of U, V, D are polynomial",
            VerifyCheck::UnimodularU => "U is unimodular over the rational algebra",
            VerifyCheck::UnimodularV => "V is unimodular over the rational algebra",
            VerifyCheck::DegreeSum => "diagonal degree sums agree",
        };
        f.write_str(name)
    }
}

/// Parse errors carry the byte offset of the offending token.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("parse error at byte {offset}: {message}")]
pub struct ParseError {
    pub offset: usize,
    pub message: String,
}
