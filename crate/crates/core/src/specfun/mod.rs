//! Self-contained special-function kernel: Gamma with pole conventions,
//! Pochhammer symbols, Gauss hypergeometric `2F1`, Gegenbauer polynomials
//! and Gauss–Jacobi/Gegenbauer quadrature rules.

mod dd;
mod gamma;
mod gegenbauer;
mod hyp2f1;
mod quad;

pub use gamma::{
    gamma_ratio, gamma_signed, is_nonpositive_integer, ln_gamma, pochhammer, reciprocal_gamma,
    SignedLogValue, POLE_TOL,
};
pub use gegenbauer::{gegenbauer_eval, gegenbauer_norm};
pub use hyp2f1::{hyp2f1, hyp2f1_series_coefficients};
pub use dd::Dd;
pub use quad::{gauss_gegenbauer_rule, gauss_jacobi_rule, gauss_jacobi_rule_dd, DdQuadratureRule, QuadratureRule};
