use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("no sign change for eigenvalue index {index} on [{lo}, {hi}]")]
    Bracketing { index: i64, lo: f64, hi: f64 },

    #[error("position {x} lies outside the domain [{a_minus}, {a_plus}]")]
    OutOfDomain { x: f64, a_minus: f64, a_plus: f64 },

    #[error("degenerate domain: {0}")]
    DegenerateDomain(String),

    #[error("mesh has no node at the interface x = 0")]
    MissingInterfaceNode,

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("matrix is not positive definite (Cholesky failed)")]
    NotPositiveDefinite,

    #[error("eigenvalue iteration did not converge within {max_iter} iterations")]
    NoConvergence { max_iter: usize },

    #[error("eigen-residual check failed: {0}")]
    ResidualCheck(String),

    #[error("analytic eigenvalue λ_{index} = {lambda} has no discrete partner")]
    MatchFailure { index: i64, lambda: f64 },

    #[error("eigenvalues λ_{i} and λ_{j} coincide; closed form is singular")]
    CoincidentEigenvalues { i: i64, j: i64 },

    #[error("singular linear system: {0}")]
    Singular(String),

    #[error("bordered system singular at λ = {lambda} (fold or branch point)")]
    BorderedSingular { lambda: f64 },

    #[error("Newton iteration failed: {0}")]
    NewtonFailure(String),

    #[error("vector is identically zero")]
    ZeroVector,

    #[error("parse error: {0}")]
    Parse(String),
}
