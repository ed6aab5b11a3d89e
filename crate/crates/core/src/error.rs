use thiserror::Error;

/// Errors raised by the numerical routines of this crate.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("density positivity violated: {0}")]
    PositivityViolation(String),

    #[error("kernel construction failed: {0}")]
    ConstructionFailure(String),

    #[error("only dimension d = 1 is supported by this routine (got d = {0})")]
    UnsupportedDimension(usize),

    #[error(
        "symbol truncation: |â| = {value:.3e} at the box edge K = {k_edge} exceeds {threshold:.1e}"
    )]
    Truncation {
        k_edge: f64,
        value: f64,
        threshold: f64,
    },

    #[error("domain too small: mass leakage {leakage:.3e} at convolution power n = {n}")]
    DomainTooSmall { n: usize, leakage: f64 },

    #[error("the underlying walk is recurrent; the λ = 0 resolvent does not exist")]
    RecurrentResolvent,

    #[error("series truncation bound {bound:.3e} exceeds tolerance {tol:.1e}; increase n_max")]
    InsufficientTerms { bound: f64, tol: f64 },

    #[error("grid under-resolves the requested feature: {0}")]
    Resolution(String),

    #[error("power iteration did not converge in {iterations} steps (last Rayleigh change {last_change:.3e}, estimate {estimate:.12e})")]
    IterationLimit {
        iterations: usize,
        last_change: f64,
        estimate: f64,
    },

    #[error("tilt ν = {nu} is outside the analyticity range of the moment generating function")]
    TiltOutOfRange { nu: f64 },

    #[error("p = {p} lies outside the open hull (s⁺ = {s_plus})")]
    HullViolation { p: f64, s_plus: f64 },

    #[error("solver failure: {0}")]
    Solver(String),

    #[error("domain exhausted: front reached the kill zone at t = {t}")]
    DomainExhausted { t: f64 },

    #[error("front-law window too short: {points} usable samples")]
    WindowTooShort { points: usize },

    #[error("contraction violated: ‖G₀v‖ bound = {bound} ≥ 1")]
    ContractionViolated { bound: f64 },

    #[error("numerical positivity lost: {0}")]
    NumericalPositivity(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter {
        name,
        reason: reason.into(),
    }
}
