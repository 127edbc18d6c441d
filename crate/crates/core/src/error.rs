use thiserror::Error;

/// Errors surfaced by the solver library.
#[derive(Debug, Error)]
pub enum SwellError {
    #[error("configuration error: {0}")]
    Config(String),

    #[error("negative water height h = {h:.6e} in cell ({i}, {j}) at t = {time:.6e} (step {step}): first-order positivity violated")]
    NegativeHeight {
        i: usize,
        j: usize,
        h: f64,
        time: f64,
        step: usize,
    },

    #[error("non-finite state in cell ({i}, {j}) at t = {time:.6e} (step {step})")]
    NonFinite {
        i: usize,
        j: usize,
        time: f64,
        step: usize,
    },

    #[error("reconstruction stencil for degree {degree} yields a rank-deficient geometry matrix ({rows}x{cols})")]
    RankDeficient {
        degree: u32,
        rows: usize,
        cols: usize,
    },

    #[error("root find failed for {what}: no sign change in [{lo:.3e}, {hi:.3e}]")]
    RootFind { what: String, lo: f64, hi: f64 },

    #[error("dirichlet boundary requested without an analytic solution handle")]
    MissingAnalyticHandle,

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, SwellError>;
