use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("polynomials live over different variable sets")]
    VariableMismatch,
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("invalid variable set: {0}")]
    InvalidVariables(String),
    #[error("resource limit exceeded: {what} (limit {limit})")]
    ResourceLimit { what: &'static str, limit: usize },
    #[error("the ideal is the unit ideal (empty variety)")]
    EmptyVariety,
    #[error("cannot saturate by the zero ideal")]
    ZeroIdeal,
    #[error("{0}")]
    OutOfRange(String),
    #[error("matrix is rank deficient")]
    RankDeficient,
    #[error("power iteration did not converge in {0} iterations")]
    NoConvergence(usize),
    #[error("plane is not transversal to the chart's complement W1")]
    NotTransversal,
    #[error("chart mismatch: {0}")]
    ChartMismatch(String),
    #[error("the subvariety has no smooth points")]
    EmptySmoothLocus,
    #[error("point is not on the variety")]
    NotOnVariety,
    #[error("found only {found} smooth samples out of {wanted}")]
    InsufficientSamples { found: usize, wanted: usize },
    #[error("generic Jacobian rank {rank} does not match codimension {codim} (non-reduced or non-equidimensional input)")]
    JacobianRank { rank: usize, codim: usize },
    #[error("syntax error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
}
