use thiserror::Error;

/// Every failure the solver can report.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("non-positive density {0}")]
    NonPositiveDensity(f64),
    #[error("non-positive {which} pressure {value}")]
    NonPositivePressure { which: &'static str, value: f64 },
    #[error("magnetic field too weak: |B|^2 = {0}")]
    DegenerateField(f64),
    #[error("entropy variables do not describe a valid state (V6 = {0})")]
    DegenerateEntropyState(f64),
    #[error("complex wave speed, radicand {radicand}")]
    ComplexSpeed { radicand: f64 },
    #[error("log mean needs positive arguments, got {0} and {1}")]
    NonPositiveInput(f64, f64),
    #[error("stencil needs {need} ghost cells, have {have}")]
    InsufficientGhostWidth { need: usize, have: usize },
    #[error("matrix square root branch failure")]
    SqrtBranch,
    #[error("scaled eigenvector matrix is singular (condition estimate {0:e})")]
    SingularScaling(f64),
    #[error("{0} reconstructed jumps changed sign")]
    SignViolation(u64),
    #[error("inadmissible state in cell ({i}, {j}) at stage {stage}: {source}")]
    InadmissibleState {
        i: usize,
        j: usize,
        stage: usize,
        source: Box<Error>,
    },
    #[error("implicit source solve failed after {iterations} iterations (residual {residual:e})")]
    ImplicitSolveFailure { iterations: usize, residual: f64 },
    #[error("implicit source solve produced non-positive p_par {0}")]
    NonPositiveResult(f64),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("non-positive error norm {0}")]
    NonPositiveError(f64),
    #[error("unknown case `{0}`")]
    UnknownCase(String),
    #[error("unknown scheme `{0}`")]
    UnknownScheme(String),
    #[error("config: {0}")]
    Config(String),
    #[error("io: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
