//! The Dirichlet form `Q_2γ` on two-branch jets.
//!
//! For polyharmonic arguments the interior term drops and `Q` collapses to
//! boundary integrals: the ζ-weighted quadratic terms
//! `Σ ζ_j ∫ B U P B V` (the sharp lower bound of the trace inequalities),
//! equivalently the σ-weighted cross terms through the definition. Both
//! routes are implemented; their agreement encodes the coefficient
//! identity `ζ_j = −c⁻¹ σ_j` and the symmetry of `Q`.

use super::coeffs::BoundaryCoefficients;
use super::dirichlet::BoundaryData;
use super::jet::RhoJet;
use super::ops::{
    apply_gjms_order, boundary_op_frac, boundary_op_int, boundary_op_large_frac,
    boundary_op_large_int,
};
use crate::zonal::ZonalFunction;
use crate::{Error, Result};

/// `∫_{S^n} u v dV` as a mode sum.
pub(crate) fn sphere_inner(u: &ZonalFunction, v: &ZonalFunction) -> f64 {
    let degree = u.degree().min(v.degree());
    (0..=degree)
        .map(|l| u.coeffs[l] * v.coeffs[l] * u.geometry.basis_norm(l))
        .sum()
}

/// `Q_2γ(U, V)` for polyharmonic jets given by their Dirichlet data:
/// `Σ_{j≤⌊γ/2⌋} ζ_j ∫ f_u^{(2j)} P_{2γ−4j} f_v^{(2j)}
///  + Σ_{j>⌊γ/2⌋} ζ_j ∫ φ_u^{(⌊γ⌋−j)} P_{4j−2γ} φ_v^{(⌊γ⌋−j)}`.
pub fn dirichlet_form_polyharmonic(
    data_u: &BoundaryData,
    data_v: &BoundaryData,
    coeffs: &BoundaryCoefficients,
) -> Result<f64> {
    let gamma = coeffs.gamma;
    let mut total = 0.0;
    for j in 0..=coeffs.half_floor() {
        let order = gamma - 2.0 * j as f64;
        let pv = apply_gjms_order(&data_v.f2j[j], order)?;
        total += coeffs.zeta[j] * sphere_inner(&data_u.f2j[j], &pv);
    }
    for j in coeffs.half_floor() + 1..=coeffs.floor() {
        let order = 2.0 * j as f64 - gamma;
        let idx = coeffs.floor() - j;
        let pv = apply_gjms_order(&data_v.phi2m[idx], order)?;
        total += coeffs.zeta[j] * sphere_inner(&data_u.phi2m[idx], &pv);
    }
    Ok(total)
}

/// `Q_2γ(U, V)` through its definition, for polyharmonic jets: the
/// interior term vanishes and
/// `Q = −Σ_{j≤⌊γ/2⌋} σ_j ∫ B_{2j}U B_{2γ−2j}V − Σ_{j>⌊γ/2⌋} σ_j ∫ B_{2j}V B_{2γ−2j}U`,
/// with the large-index operators computed through the Π-extraction route
/// on the jets.
pub fn dirichlet_form_sigma_route(
    jet_u: &RhoJet,
    ext_u: &RhoJet,
    jet_v: &RhoJet,
    ext_v: &RhoJet,
    coeffs: &BoundaryCoefficients,
) -> Result<f64> {
    let mut total = 0.0;
    for j in 0..=coeffs.half_floor() {
        let bu = boundary_op_int(jet_u, j, coeffs)?;
        let bv = boundary_op_large_frac(jet_v, ext_v, j, coeffs)?;
        total -= coeffs.sigma[j] * sphere_inner(&bu, &bv);
    }
    for j in coeffs.half_floor() + 1..=coeffs.floor() {
        let bv = boundary_op_large_int(jet_v, ext_v, j, coeffs)?;
        let bu = boundary_op_frac(jet_u, coeffs.floor() - j, coeffs)?;
        total -= coeffs.sigma[j] * sphere_inner(&bv, &bu);
    }
    let _ = ext_u;
    Ok(total)
}

/// `Q_2γ(U, U)` for a non-polyharmonic jet: the caller supplies the
/// interior energy `A₁ = ∫ ρ^{n/2−γ}(U−Ũ) L⁺_{2k}(ρ^{n/2−γ}(U−Ũ)) dV_{g_𝔹}`
/// from a global evaluator; without it the interior term is unknown.
pub fn dirichlet_form_with_interior(
    jet_u: &RhoJet,
    coeffs: &BoundaryCoefficients,
    interior: Option<f64>,
) -> Result<f64> {
    let gamma = coeffs.gamma;
    let a1 = interior.ok_or(Error::NotPolyharmonic)?;
    let mut total = a1;
    for j in 0..=coeffs.half_floor() {
        let b = boundary_op_int(jet_u, j, coeffs)?;
        let pb = apply_gjms_order(&b, gamma - 2.0 * j as f64)?;
        total += coeffs.zeta[j] * sphere_inner(&b, &pb);
    }
    for j in coeffs.half_floor() + 1..=coeffs.floor() {
        let b = boundary_op_frac(jet_u, coeffs.floor() - j, coeffs)?;
        let pb = apply_gjms_order(&b, 2.0 * j as f64 - gamma)?;
        total += coeffs.zeta[j] * sphere_inner(&b, &pb);
    }
    Ok(total)
}
