use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum Error {
    #[error("invalid field: {0}")]
    InvalidField(String),
    #[error("parse error in `{input}` at byte {pos}: {msg}")]
    Parse { input: String, pos: usize, msg: String },
    #[error("series is not a unit (zero constant term)")]
    NotAUnit,
    #[error("truncation underflow: requested order {requested}, certified only to {available}")]
    TruncationUnderflow { requested: u32, available: i64 },
    #[error("variable mismatch: {0}")]
    VariableMismatch(String),
    #[error("local dimension did not stabilize below the ceiling (last two values {prev:?}, {last:?})")]
    CeilingExceeded { prev: Option<usize>, last: Option<usize> },
    #[error("truncation too low: degree bound {needed} exceeds order {order}")]
    TruncationTooLow { needed: u32, order: u32 },
    #[error("derivation is not p-closed up to witness degree {bound}")]
    NotPClosed { bound: u32 },
    #[error("claimed p-closure witness rejected on variable {var}: residual {residual}")]
    WitnessRejected { var: String, residual: String },
    #[error("fixed-locus analysis inconclusive at order {order}; raise the truncation")]
    Inconclusive { order: u32 },
    #[error("resolution exceeded depth {0}")]
    DepthExceeded(u32),
    #[error("singularity is not isolated")]
    NotIsolated,
    #[error("coindex ambiguous for {family}{n} in characteristic {p}: candidates {candidates:?}")]
    CoindexAmbiguous { family: char, n: u32, p: u64, candidates: Vec<u32> },
    #[error("generator {generator} is not killed by the derivation: residual {residual}")]
    NotInvariant { generator: String, residual: String },
    #[error("quotient is not a hypersurface at the searched bound: {0}")]
    NotHypersurface(String),
    #[error("parameter out of range: {0}")]
    OutOfRange(String),
    #[error("characteristic mismatch: {0}")]
    CharMismatch(String),
    #[error("no common cofactor: {0}")]
    NoCommonCofactor(String),
    #[error("rho(g) has order {found}, expected {expected}")]
    RhoOrderMismatch { expected: u64, found: u64 },
    #[error("unknown RDP type: {0}")]
    UnknownType(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
}
