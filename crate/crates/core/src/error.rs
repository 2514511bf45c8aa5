use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero polynomial")]
    DivisionByZero,
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix is not symmetric")]
    NotSymmetric,
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("leading coefficient is not invertible")]
    NotInvertible,
    #[error("series is not composable: inner series has a nonzero constant term")]
    NotComposable,
    #[error("coefficient of exponent {exponent} is beyond the known order {order}")]
    BeyondOrder { exponent: i64, order: i64 },
    #[error("degenerate Verma module: {0}")]
    Degenerate(String),
    #[error("pole of q_R = 1/(2h-1) at h = 1/2")]
    QrPole,
    #[error("variable c1 is not admissible in realization {0}")]
    Inadmissible(String),
    #[error("index out of range: {0}")]
    OutOfRange(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("truncation too short: {0}")]
    Truncation(String),
}

pub type Result<T> = std::result::Result<T, Error>;
