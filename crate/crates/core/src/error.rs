use thiserror::Error;

#[derive(Error, Debug)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("input error: {0}")]
    Input(String),

    #[error("declared hermitian but M[{row}][{col}] != conj(M[{col}][{row}])")]
    NotHermitian { row: usize, col: usize },

    #[error("root finding did not converge after {iterations} iterations (best residual {residual:e})")]
    NonConvergence { iterations: usize, residual: f64 },

    #[error("degenerate map: determinant polynomial is identically zero")]
    DegenerateMap,

    #[error("infeasible prescription: {0}")]
    Infeasible(String),

    #[error("basepoint at operator spectrum: p0(A*) is singular")]
    BasepointAtSpectrum,

    #[error("theorem check failed: {0}")]
    TheoremCheck(String),

    #[error("internal error: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
