//! Numerical toolkit for fractional conformally covariant operators on the
//! round sphere and the Poincaré ball.
//!
//! The crate is organized around the spectral calculus of the operators
//! `P_2γ` acting on zonal (axially symmetric) functions:
//!
//! * [`specfun`] — signed log-Gamma arithmetic, Gauss hypergeometric `2F1`,
//!   Gegenbauer polynomials and Gauss–Jacobi quadrature rules;
//! * [`zonal`] — zonal function algebra on `S^n` (transforms, integration,
//!   `L^p` norms including negative exponents);
//! * [`conformal`] — the axis Möbius subgroup, conformal factors, weighted
//!   pushforwards and the center-of-mass normalization;
//! * [`gjms`] — spectral/kernel realizations of `P_2γ`, Funk–Hecke
//!   eigenvalues and the conformal energy;
//! * [`inequalities`] — deficit evaluators for the sharp Sobolev, reverse
//!   Sobolev, Onofri–Beckner, reverse HLS and duality inequalities, the
//!   stability decomposition, and a counterexample search;
//! * [`scattering`] — the Poisson problem on the ball (integral and series
//!   solutions), ρ-expansion jets and the scattering operator;
//! * [`boundary`] — the two-branch ρ-jet algebra, boundary operators,
//!   Dirichlet extension, Dirichlet form and trace-inequality evaluators.

pub mod boundary;
pub mod conformal;
pub mod exec;
pub mod gjms;
pub mod inequalities;
pub mod scattering;
pub mod specfun;
pub mod zonal;

/// Crate-wide error type.
#[derive(Debug, Clone, thiserror::Error)]
pub enum Error {
    #[error("argument outside supported domain: {0}")]
    Domain(String),
    #[error("Gamma pole encountered: {0}")]
    Pole(String),
    #[error("0/0 Gamma ratio is ambiguous: numerator {num} and denominator {den} are both at poles")]
    AmbiguousPole { num: f64, den: f64 },
    #[error("quadrature rule did not converge: {0}")]
    Convergence(String),
    #[error("grid does not match: {0}")]
    GridMismatch(String),
    #[error("values must be strictly positive for this operation: {0}")]
    NonPositiveValue(String),
    #[error("no sign change bracketed for the center-of-mass root: {0}")]
    Bracketing(String),
    #[error("kernel quadrature diverges: {0}")]
    KernelSingularity(String),
    #[error("gamma {0} is unsupported here: {1}")]
    UnsupportedGamma(f64, String),
    #[error("search budget exhausted; best deficit so far {best}")]
    BudgetExhausted { best: f64 },
    #[error("integer gamma {0} not allowed for the two-branch expansion")]
    IntegerGamma(f64),
    #[error("jets are misaligned: {0}")]
    MisalignedJets(String),
    #[error("interior term required but no global evaluator provided")]
    NotPolyharmonic,
    #[error("unimplemented trace-inequality case: {0}")]
    UnimplementedCase(String),
}

pub type Result<T> = std::result::Result<T, Error>;
