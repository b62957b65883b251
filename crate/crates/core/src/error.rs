use thiserror::Error;

/// Errors raised by the solver and its input layer.
///
/// Numeric context (`q`, `t`) is carried as `f64` regardless of the scalar
/// type the computation ran in.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("degenerate medium: {0}")]
    Degenerate(String),

    #[error("incident prefactor is singular at q = {re} + {im}i (branch point)")]
    SingularPrefactor { re: f64, im: f64 },

    #[error("interface matrix is singular at q = {re} + {im}i")]
    SingularMatrix { re: f64, im: f64 },

    #[error("source projection is ill-conditioned (condition estimate {0:e})")]
    IllConditioned(f64),

    #[error("contour solve did not converge at t = {t} s ({path})")]
    NoConvergence { t: f64, path: String },

    #[error("no head-wave root satisfies the sign rule at t = {t} s ({path})")]
    RootSelection { t: f64, path: String },

    #[error("dq/dt is undefined at the saddle point (|F_q| = {0:e})")]
    Saddle(f64),

    #[error("time grid does not cover the requested window: {0}")]
    GridCoverage(String),

    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("{context}: {source}")]
    Context {
        context: String,
        #[source]
        source: Box<Error>,
    },

    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    pub fn context(self, context: impl Into<String>) -> Self {
        Error::Context {
            context: context.into(),
            source: Box::new(self),
        }
    }

    /// True for errors caused by the user's configuration rather than the computation.
    pub fn is_config_error(&self) -> bool {
        match self {
            Error::Parse { .. } | Error::Config(_) => true,
            Error::Context { source, .. } => source.is_config_error(),
            _ => false,
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
