use thiserror::Error;

/// Errors surfaced by the library. Each variant names the violated
/// precondition so CLI consumers can report it verbatim.
#[derive(Debug, Error)]
pub enum Error {
    #[error("characteristic must be an odd prime, got {0}")]
    NotOddPrime(u64),
    #[error("extension degree must be at least 1")]
    ZeroDegree,
    #[error("operands belong to different fields (F_{p0}^{k0} vs F_{p1}^{k1})")]
    FieldMismatch { p0: u64, k0: usize, p1: u64, k1: usize },
    #[error("division by zero in F_{p}^{k}")]
    DivisionByZero { p: u64, k: usize },
    #[error("the quadratic character is undefined at zero")]
    LegendreOfZero,
    #[error("{0} does not divide {1}")]
    NotADivisor(usize, usize),
    #[error("element does not lie in the requested subfield")]
    NotInSubfield,
    #[error("the zero polynomial cannot be factored")]
    ZeroPolynomial,
    #[error("polynomial is not irreducible")]
    NotIrreducible,
    #[error("polynomial must be monic of positive degree")]
    NotMonic,
    #[error("coefficient {0} is not reduced modulo p = {1}")]
    CoefficientOutOfRange(u64, u64),
    #[error("Gram matrix must be symmetric")]
    NotSymmetric,
    #[error("form is degenerate (zero determinant)")]
    DegenerateForm,
    #[error("multiplication by the field generator is not self-adjoint for this form")]
    NotSelfAdjointMultiplication,
    #[error("matrix is not persymmetric (self-adjoint for the antidiagonal form)")]
    NotPersymmetric,
    #[error("operator dimension must be at least 2, got {0}")]
    DimensionTooSmall(usize),
    #[error("characteristic polynomial is not squarefree: operator is not regular semisimple")]
    NotRegularSemisimple,
    #[error("factor index {0} out of range ({1} irreducible factors)")]
    FactorIndexOutOfRange(usize, usize),
    #[error("operators have different stable classes")]
    StableClassMismatch,
    #[error("sign characters live on different stable classes")]
    SignCharacterMismatch,
    #[error("operation requires odd n, got n = {0}")]
    EvenRank(usize),
    #[error("enumeration budget exceeded: q^(n^2) = {0} > {1}")]
    BudgetExceeded(u128, u128),
    #[error("size bound exceeded: q^d = {0} > {1}")]
    SizeBoundExceeded(u128, u128),
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;
