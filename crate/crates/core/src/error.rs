use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid ring parameters: {0}")]
    InvalidRingParams(String),
    #[error("elements belong to different rings")]
    RingMismatch,
    #[error("element is not a unit")]
    NotUnit,
    #[error("matrix is not invertible")]
    NotInvertible,
    #[error("bad level {requested}; available level is {available}")]
    BadLevel { requested: u32, available: u32 },
    #[error("unsupported family: {0}")]
    UnsupportedFamily(String),
    #[error("not instantiable: {0}")]
    NotInstantiable(String),
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("order overflows 128 bits")]
    SizeOverflow,
    #[error("vector is not in the Lie algebra")]
    NotInLieAlgebra,
    #[error("element is not in the reduction kernel at the requested layer")]
    NotInKernel,
    #[error("operation requires p = 2")]
    WrongParity,
    #[error("{0} is not an element of the group")]
    NotInGroup(String),
    #[error("enumeration bound exceeded: {size} > {bound}")]
    TooLarge { size: u128, bound: u128 },
    #[error("missing hypothesis: {0}")]
    MissingHypothesis(String),
    #[error("unknown fixture: {0}")]
    UnknownFixture(String),
    #[error("ambiguous or unknown reduction: {0}")]
    AmbiguousReduction(String),
    #[error("bad prime {0}")]
    BadPrime(u64),
    #[error("curve degree {0} is outside the supported range")]
    DegreeOutOfRange(usize),
    #[error("maximal subgroup data unavailable: {0}")]
    MaximalSubgroupDataUnavailable(String),
    #[error("generators do not lie in the group: {0}")]
    NotGenerating(String),
    #[error("incomplete datum: {0}")]
    IncompleteDatum(String),
    #[error("exception list hit: {0}")]
    ExceptionListHit(String),
    #[error("filtration is not exact: {0}")]
    NotExactFiltration(String),
    #[error("zero discriminant")]
    ZeroDiscriminant,
    #[error("budget exhausted: {0}")]
    BudgetExhausted(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
