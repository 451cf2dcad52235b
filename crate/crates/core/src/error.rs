use thiserror::Error;

/// Errors raised by symbol evaluation, the modal oracle, the discrete solver
/// and the Krylov layer.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// `√(k²−s²)·ℓ/2` sits on a multiple of π, where the cavity DtN symbol blows up.
    #[error("cotangent pole of the cavity symbol at s = {s}")]
    Pole { s: f64 },

    /// `λ(s) + λ_ref(s)` vanished, so the convergence radius is undefined.
    #[error("degenerate convergence radius at s = {s}: |λ + λ_ref| = {denominator:e}")]
    Degenerate { s: f64, denominator: f64 },

    #[error("Padé term {term} has a vanishing denominator at s = {s}")]
    DivergentTerm { term: usize, s: f64 },

    /// `sinh(αℓ/2)` vanished: the mode is resonant in a half cavity.
    #[error("mode m = {m} is resonant with the subdomain length")]
    ResonantMode { m: usize },

    #[error("modal iteration diverged: |P| exceeded 1e300 after {iterations} steps")]
    DivergenceOverflow { iterations: usize },

    #[error("OO2 fit failed: best max |ρ_open| = {max_rho}")]
    OptimizationFailure { max_rho: f64 },

    #[error("singular matrix: zero pivot in column {column}")]
    SingularMatrix { column: usize },

    #[error("tridiagonal system singular at row {row}")]
    TridiagonalSingular { row: usize },

    #[error("GMRES breakdown at iteration {iteration} with residual estimate {residual:e}")]
    Breakdown { iteration: usize, residual: f64 },

    #[error("dimension {dim} exceeds the dense assembly cap {cap}")]
    DimensionGuard { dim: usize, cap: usize },

    #[error("QR eigenvalue iteration did not converge after {iterations} sweeps")]
    NonConvergence { iterations: usize },

    #[error("configuration error: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Whether this error is a configuration problem rather than a numerical failure.
    pub fn is_config(&self) -> bool {
        matches!(self, Error::Config(_) | Error::InvalidInput(_))
    }
}
