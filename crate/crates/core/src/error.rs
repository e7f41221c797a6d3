use thiserror::Error;

/// Errors raised anywhere in the engine. Every message names the module
/// that produced it and the cap or precondition that was violated.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IgusaError {
    #[error("polynomial: syntax error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },

    #[error("polynomial: unknown variable `{name}` at position {pos}")]
    UnknownVariable { name: String, pos: usize },

    #[error("polynomial: non-integer coefficient at position {pos}")]
    NonIntegerCoefficient { pos: usize },

    #[error("polynomial: constant term present but f(0) = 0 is required for Newton analysis")]
    ConstantTerm,

    #[error("polynomial: the zero polynomial is not allowed here ({context})")]
    ZeroPolynomial { context: &'static str },

    #[error("polynomial: variable count mismatch (expected {expected}, found {found})")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("{module}: enumeration cap exceeded ({needed} points needed, cap {cap})")]
    CapExceeded {
        module: &'static str,
        needed: u128,
        cap: u64,
    },

    #[error("spf: recursion depth {0} exceeded (K-singular point in the domain, or caps too small)")]
    SpfDepthExceeded(usize),

    #[error("spf: unsupported recursion structure: {0}")]
    UnsupportedRecursion(String),

    #[error("newton: {0}")]
    Geometry(String),

    #[error("ratfun: q mismatch ({0} vs {1})")]
    QMismatch(u64, u64),

    #[error("ratfun: limit is infinite (pole order {order} exceeds rho = {rho})")]
    InfiniteLimit { order: u32, rho: u32 },

    #[error("ratfun: {0}")]
    RatFun(String),

    #[error("config: {0}")]
    Config(String),

    #[error("engine: {0}")]
    Engine(String),

    #[error("analysis: {0}")]
    OutOfScope(String),
}

impl IgusaError {
    /// Process exit code used by the command line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            IgusaError::CapExceeded { .. } | IgusaError::SpfDepthExceeded(_) => 3,
            _ => 2,
        }
    }
}

pub type Result<T> = std::result::Result<T, IgusaError>;
