use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("empty system: at least one magnon mode is required")]
    EmptySystem,

    #[error("invalid value for `{field}`: {reason}")]
    InvalidParameter { field: String, reason: String },

    #[error("index {index} out of range 1..={count}")]
    IndexOutOfRange { index: usize, count: usize },

    #[error("no bright mode: all couplings are zero")]
    NoBrightMode,

    #[error("pole on real axis at ω = {omega} rad/s (lossless mode {mode})")]
    PoleOnRealAxis { omega: f64, mode: usize },

    #[error("grid too coarse: phase jump of {jump:.3} rad between points {index} and {}", index + 1)]
    GridTooCoarse { index: usize, jump: f64 },

    #[error("frequency grid must be strictly increasing (point {index})")]
    NonMonotoneGrid { index: usize },

    #[error("degenerate gradient: frequency spacing is zero")]
    DegenerateGradient,

    #[error("non-uniform system: {0}")]
    NonUniform(String),

    #[error("step control failed near t = {time:e} s: error {error:e} above tolerance {tolerance:e}")]
    StepControl { time: f64, error: f64, tolerance: f64 },

    #[error("unsupported by oracle: {0}")]
    UnsupportedByOracle(String),

    #[error("time {t:e} s outside covered range [0, {max:e}] s")]
    OutOfRange { t: f64, max: f64 },

    #[error("pulse shorter than cavity response: t_p·κ' = {product:.4} ≤ 1")]
    PulseTooShort { product: f64 },

    #[error("efficiency zones overlap: {0}")]
    ZonesOverlap(String),

    #[error("trace too short: covers up to {covered:e} s, needs {required:e} s")]
    TraceTooShort { covered: f64, required: f64 },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("undefined visibility: {0}")]
    UndefinedVisibility(String),

    #[error("unresolvable peaks: {0}")]
    UnresolvablePeaks(String),

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("{0}")]
    Io(String),
}

impl Error {
    pub(crate) fn invalid(field: &str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            field: field.to_string(),
            reason: reason.into(),
        }
    }

    /// True for failures of the numerics rather than of the inputs.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::PoleOnRealAxis { .. }
                | Error::GridTooCoarse { .. }
                | Error::StepControl { .. }
                | Error::UndefinedVisibility(_)
                | Error::UnresolvablePeaks(_)
                | Error::Numerical(_)
        )
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
