use thiserror::Error;

/// Failures raised by the spectrum, transformation, and oracle routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid couplings: {0}")]
    InvalidCouplings(String),

    #[error("invalid channel: {0}")]
    InvalidChannel(String),

    #[error("invalid level: {0}")]
    InvalidLevel(String),

    /// K² − A₁² + A₂² ≤ 0: no regular bound-state solution.
    #[error("gamma is imaginary: K^2 = {k_squared} must exceed A1^2 - A2^2 = {critical} for bound states")]
    ImaginaryGamma { k_squared: f64, critical: f64 },

    #[error("no real energy root: discriminant {discriminant} < 0")]
    NoRealRoot { discriminant: f64 },

    #[error("couplings do not match the {0} special case")]
    CaseMismatch(&'static str),

    #[error("degenerate transformation: |K^2 - A1^2| = {0} is below the guard")]
    DegenerateDenominator(f64),

    #[error("cosh(theta) = {0} < 1 has no real half-angle mixer")]
    InvalidCosh(f64),

    #[error("constant xi factor vanishes (xi = {0}); the level is a first-order (nodeless) state")]
    SingularElimination(f64),

    #[error("xi factor vanishes on the evaluation grid (xi = {0})")]
    SingularXi(f64),

    #[error("no bound state in the energy window [{lo}, {hi}]")]
    NoStateInWindow { lo: f64, hi: f64 },

    #[error("root search did not converge: {0}")]
    NonConvergent(String),

    #[error("effective charge {0} is not attractive; no bound level")]
    NoBoundLevel(f64),

    #[error("finite-difference box holds only {found} bound levels, level {requested} requested")]
    TooFewLevels { found: usize, requested: usize },

    #[error("no self-consistent energy root: {0}")]
    NoRoot(String),

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("level is not physical: {0}")]
    Unphysical(String),
}

pub type Result<T> = std::result::Result<T, Error>;
