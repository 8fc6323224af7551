use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("axis {axis} cannot be halved (sub-scale is 0)")]
    IndivisibleAxis { axis: usize },

    #[error("axis {axis} out of range for {nvars} variables")]
    AxisOutOfRange { axis: usize, nvars: usize },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("polynomial of multi-degree {poly:?} does not fit multi-degree {degree:?}")]
    DegreeOverflow { poly: Vec<u32>, degree: Vec<u32> },

    #[error("{what} of multi-degree {poly:?} does not fit multi-degree {degree:?}")]
    ConstraintDegreeOverflow { what: String, poly: Vec<u32>, degree: Vec<u32> },

    #[error("cannot lower multi-degree {from:?} to {to:?}")]
    DegreeDecrease { from: Vec<u32>, to: Vec<u32> },

    #[error("multi-degree mismatch: {left:?} vs {right:?}")]
    DegreeMismatch { left: Vec<u32>, right: Vec<u32> },

    #[error("point coordinate {axis} lies outside [0, 1]")]
    OutsideUnitBox { axis: usize },

    #[error("degenerate box along axis {axis}: lower corner is not below upper corner")]
    DegenerateBox { axis: usize },

    #[error("offset {offset} out of range for 2^{exponent} along axis {axis}")]
    OffsetOutOfRange { axis: usize, offset: u64, exponent: u32 },

    #[error("box exponent {exponent} on axis {axis} exceeds the limit {limit}")]
    ExponentTooLarge { axis: usize, exponent: u32, limit: u32 },

    #[error("problem has no variables")]
    NoVariables,

    #[error("variable `{name}` is unbounded")]
    UnboundedVariable { name: String },

    #[error("variable `{name}` has empty bounds [{lo}, {hi}]")]
    EmptyBounds { name: String, lo: String, hi: String },

    #[error("raw-box semantics need bounds [a, a + 2^k]; variable `{name}` has [{lo}, {hi}]")]
    NotDyadic { name: String, lo: String, hi: String },

    #[error("brute force would scan {count} points, above the cap of {cap}")]
    OracleCapExceeded { count: String, cap: u64 },

    #[error("complexity number must lie in [0, 1], got {0}")]
    LambdaOutOfRange(String),

    #[error("exact analytics support K <= {limit}, got {k}")]
    GenerationLimit { k: u32, limit: u32 },

    #[error("default degree {degree} on axis {axis} exceeds the cap {cap}; pass an explicit degree or raise the cap")]
    DegreeCapExceeded { axis: usize, degree: u32, cap: u32 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("invalid rational literal `{0}`")]
    InvalidRational(String),

    #[error("{line}:{column}: {message}")]
    Parse { line: usize, column: usize, message: String },

    #[error("basis cache: {0}")]
    Cache(String),

    #[error("i/o: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
