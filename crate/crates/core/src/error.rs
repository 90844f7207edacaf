use thiserror::Error;

/// Errors shared across the library.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum Error {
    /// A decimal-literal generator cannot supply the working precision an
    /// operation needs.
    #[error("generator `{generator}` declares {declared} bits but {needed} are required")]
    PrecisionUnavailable {
        generator: String,
        declared: u32,
        needed: u32,
    },

    /// The working precision cap (EQUIDIST_MAX_BITS) would be exceeded.
    #[error("working precision {needed} exceeds the configured cap of {cap} bits")]
    PrecisionCapExceeded { needed: u32, cap: u32 },

    /// 1/period is not expressible over the declared basis.
    #[error("reciprocal of period `{period}` is not representable over the declared basis")]
    InverseNotRepresentable { period: String },

    /// A product of two irrational symbolic values was requested.
    #[error("product {lhs} * {rhs} is not representable (no symbolic multiplication)")]
    ProductNotRepresentable { lhs: String, rhs: String },

    /// Winding samples too sparse to track the lifted argument.
    #[error("winding samples too coarse: lifted increment {increment} >= 1/4 at sample {index}")]
    GridTooCoarse { index: usize, increment: String },

    /// Subset enumeration over 2^d subsets refused.
    #[error("total Q-independence over {d} tuples needs 2^{d} subsets; the cap is {cap}")]
    SubsetBlowup { d: usize, cap: usize },

    /// No rational relation exists, so the requested counterexample cannot be built.
    #[error("no rational relation: {context}")]
    NoRelation { context: String },

    /// The tuples are totally Q-independent, so no violating subset exists.
    #[error("no violating subset: {context}")]
    NoViolation { context: String },

    /// A construction scan hit its limit before the required margin certified.
    #[error("scan limit {limit} reached while searching for {what}")]
    ScanExhausted { what: String, limit: u64 },

    /// Malformed configuration or request data.
    #[error("config error: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }

    /// True for errors that should map to the "precision failure" exit code.
    pub fn is_precision(&self) -> bool {
        matches!(
            self,
            Error::PrecisionUnavailable { .. } | Error::PrecisionCapExceeded { .. }
        )
    }
}
