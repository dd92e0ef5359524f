use thiserror::Error;

/// Errors raised by the simulator. Each variant maps onto one CLI exit code.
#[derive(Debug, Error)]
pub enum Error {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("truncation error: {0}")]
    Truncation(String),
    #[error("pinch at tau={tau}: v^2={v2} at y={y}, omega={omega:?}")]
    Pinch {
        tau: f64,
        y: f64,
        omega: [f64; 4],
        v2: f64,
    },
    #[error("degenerate frame: |1+D|={0:e}")]
    DegenerateFrame(f64),
    #[error("newton failed to converge: {context} (residual {residual:e})")]
    Newton { context: String, residual: f64 },
    #[error("singular patch: det g = {0:e}")]
    SingularPatch(f64),
    #[error("ill-conditioned Gram system (condition {0:e})")]
    IllConditioned(f64),
    #[error("numerical abort: {0}")]
    Numerical(String),
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("verification failed: {0}")]
    Verification(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
