use nfisac_sdp::SolverError;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("configuration error: {0}")]
    Config(String),
    #[error(transparent)]
    Solver(#[from] SolverError),
    /// The rank-relaxed problem has no feasible point; no rank-one design
    /// can exist either.
    #[error("infeasible: {0}")]
    Infeasible(String),
    #[error("stalled at iteration {iteration}: step size {delta:.3e} fell below the floor with v = {v:?}")]
    Stall { iteration: usize, delta: f64, v: Vec<f64> },
    #[error("no convergence within {iterations} iterations (v = {v:?})")]
    MaxIterations { iterations: usize, v: Vec<f64> },
    #[error("matrix is not rank-one: eigenvalue ratio {ratio:.3e} exceeds {tol:.3e}")]
    NotRankOne { ratio: f64, tol: f64 },
    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    pub fn io(path: &std::path::Path, source: std::io::Error) -> Self {
        Error::Io {
            path: path.display().to_string(),
            source,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
