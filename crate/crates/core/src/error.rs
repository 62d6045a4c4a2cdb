use alloc::string::String;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("rank {0} is not supported (need n >= 2)")]
    RankTooSmall(usize),
    #[error("syntax error at byte {position}: {message}")]
    Syntax { position: usize, message: String },
    #[error("index {index} of `{letter}` is out of range (1..={max})")]
    IndexOutOfRange { letter: char, index: usize, max: usize },
    #[error("rank mismatch: {0} vs {1}")]
    RankMismatch(usize, usize),
    #[error("move not applicable: {0}")]
    MoveNotApplicable(String),
    #[error("trace step {step} does not reproduce the recorded word")]
    TraceMismatch { step: usize },
    #[error("invalid window: {0}")]
    InvalidWindow(String),
    #[error("element is not a translation (finite part is not the identity)")]
    NotATranslation,
    #[error("no block relation applies to g_{j} and block a_{start}..a_{end}")]
    NoBlockRelation { start: usize, end: usize, j: usize },
    #[error("invalid block a_{start}..a_{end} for rank {rank}")]
    InvalidBlock { start: usize, end: usize, rank: usize },
    #[error("arity mismatch: {0} vs {1}")]
    ArityMismatch(usize, usize),
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("matrix is singular")]
    Singular,
    #[error("invalid representation: {0}")]
    InvalidRepresentation(String),
    #[error("unknown representation spec `{0}`")]
    UnknownRep(String),
    #[error("{0}")]
    RepSpec(String),
    #[error("modulus {prime} is unusable: {reason}")]
    BadPrime { prime: u64, reason: &'static str },
    #[error("denominator vanishes modulo {0}")]
    DenominatorVanishes(u64),
    #[error("symbolic limits exceeded ({dim}x{dim} pencil in {vars} variables, limits {max_dim}/{max_vars}); use the pit method")]
    FeasibilityExceeded { dim: usize, vars: usize, max_dim: usize, max_vars: usize },
    #[error("signature weight {weight} exceeds bound {bound}")]
    SignatureBound { weight: usize, bound: usize },
    #[error("probe set mismatch")]
    ProbeSetMismatch,
    #[error("duplicate probe word `{0}`")]
    DuplicateProbe(String),
}
