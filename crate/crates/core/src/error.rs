use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("Gram matrix is not symmetric")]
    NotSymmetric,
    #[error("Gram matrix is degenerate (det = 0)")]
    Degenerate,
    #[error("scale factor must be non-zero")]
    ZeroScale,
    #[error("vectors are linearly dependent")]
    DependentVectors,
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("integer overflow in {0}")]
    Overflow(&'static str),
    #[error("lattice is not even")]
    NotEven,
    #[error("subgroup is not isotropic: {0}")]
    NotIsotropic(String),
    #[error("not a subgroup element: {0}")]
    NotSubgroup(String),
    #[error("group of order {order} exceeds bound {bound}")]
    TooLarge { order: u64, bound: u64 },
    #[error("Gauss sum does not have modulus sqrt|A| (degenerate quadratic form)")]
    NonWitt,
    #[error("finite form is not a 2-group")]
    NotTwoGroup,
    #[error("unsupported input: {0}")]
    Unsupported(String),
    #[error("malformed finite quadratic form: {0}")]
    InvalidForm(String),
    #[error("unknown standard lattice tag `{0}`")]
    UnknownTag(String),
    #[error("expected a vector of length {expected}, got {got}")]
    BadLength { expected: usize, got: usize },
    #[error("lattice is not definite")]
    NotDefinite,
    #[error("enumeration cap exceeded ({count} vectors found before stopping)")]
    CapExceeded { count: usize },
    #[error("images are not isometric to the source lattice")]
    GramMismatch,
    #[error("embedding is not primitive (index {index})")]
    NotPrimitive { index: u64 },
    #[error("orthogonal complement is degenerate")]
    DegenerateComplement,
    #[error("target Gram matrix has the wrong shape: {0}")]
    BadShape(String),
    #[error("no vectors found: {0}")]
    NotFound(String),
    #[error("bad parameters: {0}")]
    BadParams(String),
    #[error("bad label: {0}")]
    BadLabel(String),
    #[error("rank {0} exceeds the supported maximum of 20")]
    RankTooLarge(usize),
    #[error("prime {p} divides 2*discr(L)")]
    BadPrime { p: u64 },
    #[error("no vector with norm prime to {p} among small combinations")]
    NoUnitVector { p: u64 },
    #[error("not a sublattice: {0}")]
    NotSublattice(String),
    #[error("condition (*) fails for this sublattice")]
    StarViolated,
    #[error("lattice existence check failed: {0}")]
    ExistenceFails(String),
    #[error("index {0} is even")]
    EvenIndex(u64),
    #[error("embedding datum rejected: {0}")]
    DatumInvalid(String),
    #[error("discriminant is not fundamental: {0}")]
    NotFundamental(i64),
    #[error("discriminant must be negative: {0}")]
    NotImaginary(i64),
    #[error("discriminant {0} is not 0 or 1 mod 4")]
    BadCongruence(i64),
    #[error("Gram matrix is not of the form [[2a,b],[b,2c]]")]
    NotEvenGram,
    #[error("Gram matrix is not positive definite")]
    NotPositiveDefinite,
}

pub type Result<T> = std::result::Result<T, Error>;
