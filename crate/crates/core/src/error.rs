use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("shape mismatch: expected {expected}, got {found}")]
    ShapeMismatch { expected: String, found: String },

    #[error("matrix is not Hermitian (relative residual {residual:e})")]
    NotHermitian { residual: f64 },

    #[error("matrix contains non-finite entries")]
    NonFinite,

    #[error("Jacobi eigensolver did not converge after {sweeps} sweeps (off-diagonal norm {off_norm:e})")]
    NoConvergence { sweeps: usize, off_norm: f64 },

    #[error("lattice dimension must be odd and at least 3, got {0}")]
    InvalidDimension(usize),

    #[error("index {value} outside the representative range [-{s}, {s}]")]
    OutOfRange { value: i64, s: i64 },

    #[error("covariance matrix is not positive definite")]
    NotPositiveDefinite,

    #[error("covariance matrix is singular (determinant {det:e})")]
    SingularCovariance { det: f64 },

    #[error("lattice sum did not converge within a window of {window}")]
    TruncationDiverged { window: i64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("two-mode dimension {d} exceeds the cap {cap}")]
    DimensionCap { d: usize, cap: usize },

    #[error("no commutator eigenvalue below epsilon = {epsilon:e}")]
    EmptySubspace { epsilon: f64 },

    #[error("Wigner function has imaginary residue {residue:e}")]
    ImaginaryResidue { residue: f64 },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error("malformed grid file: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
