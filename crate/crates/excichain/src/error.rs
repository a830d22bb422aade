//! Error type shared by all modules of the crate.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, ChainError>;

#[derive(Debug, Error)]
pub enum ChainError {
    #[error("chain needs at least 2 sites, got {0}")]
    TooFewSites(usize),

    #[error("dephasing rate must be nonnegative, got {0}")]
    NegativeDephasing(f64),

    #[error("periodic boundaries are only defined for nearest-neighbor coupling")]
    PeriodicRequiresNearestNeighbor,

    #[error("custom coupling profiles are only defined for open boundaries")]
    CustomRequiresOpen,

    #[error("coupling profile has {got} entries, expected {expected} (n_sites - 1)")]
    ProfileLength { expected: usize, got: usize },

    #[error("coupling profile entry {index} is not finite: {value}")]
    NonFiniteCoupling { index: usize, value: f64 },

    #[error("power-law exponent must be positive, got {0}")]
    NonPositiveExponent(f64),

    #[error("focusing profile needs an even site count >= 4, got {0}")]
    FocusingSize(usize),

    #[error("profile file line {line}: cannot parse `{content}` as a number")]
    ProfileParse { line: usize, content: String },

    #[error("site populations must lie in [0, 1] and sum to 1, got {rho_left} + {rho_right}")]
    BadPopulations { rho_left: f64, rho_right: f64 },

    #[error("coherence magnitude {coherence} exceeds positivity bound sqrt(rho_l*rho_r) = {bound}")]
    PositivityViolation { coherence: f64, bound: f64 },

    #[error("site index {site} out of range for a chain of {n_sites} sites")]
    SiteOutOfRange { site: usize, n_sites: usize },

    #[error("k-space analytics are defined for even site counts only, got {0}")]
    OddSites(usize),

    #[error("matrix dimension {got} does not match chain size {expected}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("hamiltonian matrix must be square and symmetric")]
    NotSymmetric,

    #[error("hamiltonian contains non-finite entries")]
    NonFiniteHamiltonian,

    #[error("invalid propagation setup: {0}")]
    BadPropagationConfig(String),

    #[error("stability guard violated: dt * max(|H|_inf, gamma) = {product} > {limit}; reduce dt")]
    StabilityGuard { product: f64, limit: f64 },

    #[error("numerical failure at t = {time}: {what}")]
    NumericalAbort { time: f64, what: String },

    #[error("populations sum to {sum}, expected 1 within 1e-8")]
    NormalizationViolation { sum: f64 },

    #[error("split index {split} invalid for {n_sites} sites (need 1 <= split < n_sites)")]
    BadSplitIndex { split: usize, n_sites: usize },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
