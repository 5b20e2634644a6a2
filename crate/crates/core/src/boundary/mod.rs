//! Conformal boundary-operator calculus on the Poincaré ball.
//!
//! Functions of the class `C^∞_even + ρ^{2[γ]} C^∞_even` are represented
//! near the boundary by truncated two-branch ρ-jets with zonal
//! coefficients. The shifted Laplacian `Δ̃₊ = Δ₊ + n²/4` acts on jets
//! exactly order by order, which makes the annihilation and normalization
//! identities of the boundary operators exact rather than approximate;
//! global functions enter only through the 2D-quadrature Green/Hardy
//! checks.

mod atoms;
mod coeffs;
mod dirichlet;
mod form;
mod jet;
mod ops;
mod trace;

pub use atoms::{green_identity_check, hardy_check, interior_energy, RadialAtom};
pub use coeffs::{boundary_coeffs, c_gamma, c_gamma_inv, BoundaryCoefficients};
pub use dirichlet::{dirichlet_extend, BoundaryData};
pub use form::{
    dirichlet_form_polyharmonic, dirichlet_form_sigma_route, dirichlet_form_with_interior,
};
pub use jet::{even_jet_exp, jet_laplacian, EvenJet, RhoJet};
pub use ops::{boundary_op_frac, boundary_op_int, boundary_op_large_frac, boundary_op_large_int};
pub use trace::{conformal_covariance_check, trace_deficit, TraceCase};
