use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("cells are not square: dx = {dx}, dy = {dy}")]
    NonSquareCells { dx: f64, dy: f64 },

    #[error("ghost width {ghost} is below the stencil half-width {required}")]
    GhostTooSmall { ghost: usize, required: usize },

    #[error("grid of {nx}x{ny} cells is too small (need at least 8 per axis)")]
    GridTooSmall { nx: usize, ny: usize },

    #[error("invalid domain extents {lx} x {ly}")]
    InvalidDomain { lx: f64, ly: f64 },

    #[error("narrow band of {k} cells is narrower than the minimum {min}")]
    BandTooNarrow { k: usize, min: usize },

    #[error("region {0} does not occur in the near neighborhood")]
    MissingRegion(u32),

    #[error("reconstruction needs at least one candidate value")]
    EmptyCandidates,

    #[error("point set is empty")]
    EmptyPointSet,

    #[error("error band contains no cells")]
    EmptyBand,

    #[error("backtrace from cell ({i}, {j}) leaves the ghost region")]
    BacktraceOutOfRange { i: isize, j: isize },

    #[error("non-finite value in field at step {step} (t = {time})")]
    NonFinite { step: usize, time: f64 },

    #[error("configuration error: {0}")]
    Config(String),

    #[error("unknown scenario `{name}`; valid scenarios: {valid}")]
    UnknownScenario { name: String, valid: String },

    #[error("scenario `{0}` is not supported")]
    Unsupported(String),

    #[error("run at resolution {n} failed: {source}")]
    StudyFailed {
        n: usize,
        #[source]
        source: Box<Error>,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Process exit code: 2 for configuration problems, 1 for numerical failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config(_)
            | Error::UnknownScenario { .. }
            | Error::Unsupported(_)
            | Error::NonSquareCells { .. }
            | Error::GhostTooSmall { .. }
            | Error::GridTooSmall { .. }
            | Error::InvalidDomain { .. }
            | Error::BandTooNarrow { .. } => 2,
            Error::StudyFailed { source, .. } => source.exit_code(),
            _ => 1,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
