//! Boundary operators acting on two-branch jets.
//!
//! Small indices extract a coefficient of
//! `Π (Δ̃₊ − c²) (ρ^{n/2−γ} U)` at its designated exponent and divide by
//! the normalization product; large indices add the Π-extraction on
//! `U − Ũ` to the scattering-operator term `c⁻¹ P B` of the matching
//! small-index datum. Branch disjointness makes the cross-branch
//! annihilation exact zeros, not merely small values.

use super::coeffs::{c_gamma_inv, BoundaryCoefficients};
use super::jet::{shifted_laplacian, RhoJet};
use crate::gjms::gjms_multiplier;
use crate::zonal::ZonalFunction;
use crate::{Error, Result};

fn check_range(j: usize, lo: usize, hi_inclusive: usize, what: &str) -> Result<()> {
    if j < lo || j > hi_inclusive {
        return Err(Error::Domain(format!(
            "index {j} outside the {what} range {lo}..={hi_inclusive}"
        )));
    }
    Ok(())
}

/// `P_{2δ}` applied mode-wise (multiplier `Γ(l+n/2+δ)/Γ(l+n/2−δ)`).
pub(crate) fn apply_gjms_order(f: &ZonalFunction, delta: f64) -> Result<ZonalFunction> {
    let coeffs = f
        .coeffs
        .iter()
        .enumerate()
        .map(|(l, &a)| Ok(a * gjms_multiplier(f.geometry.n, delta, l)?))
        .collect::<Result<Vec<_>>>()?;
    Ok(ZonalFunction::new(f.geometry, coeffs))
}

/// Small-index integer-family operator `B^{2γ}_{2j}(U)`,
/// `0 ≤ j ≤ ⌊γ/2⌋`, for a U-level jet (base exponent 0).
pub fn boundary_op_int(
    u: &RhoJet,
    j: usize,
    coeffs: &BoundaryCoefficients,
) -> Result<ZonalFunction> {
    let n = u.geometry.n as f64;
    small_int_from_shifted(&u.shift(n / 2.0 - coeffs.gamma), j, coeffs)
}

/// The integer-family extraction on a jet already carrying the
/// `ρ^{n/2−γ}` weight (the conformal-covariance check weights the jet
/// before shifting, so the two steps are kept separable).
pub(crate) fn small_int_from_shifted(
    v: &RhoJet,
    j: usize,
    coeffs: &BoundaryCoefficients,
) -> Result<ZonalFunction> {
    check_range(j, 0, coeffs.half_floor(), "small integer-family")?;
    let gamma = coeffs.gamma;
    let n = v.geometry.n as f64;
    let floor = coeffs.floor() as f64;
    let mut v = v.clone();
    for l in 0..j {
        v = shifted_laplacian(&v, gamma - 2.0 * l as f64);
        v = shifted_laplacian(&v, gamma - 2.0 * (floor - l as f64));
    }
    let target = n / 2.0 - gamma + 2.0 * j as f64;
    let extracted = v
        .coefficient_at(target)
        .ok_or_else(|| Error::MisalignedJets(format!("no coefficient at exponent {target}")))?;
    Ok(extracted.scale(1.0 / coeffs.b_int[j]))
}

/// Small-index fractional-family operator `B^{2γ}_{2j+2[γ]}(U)`,
/// `0 ≤ j ≤ ⌊γ⌋−⌊γ/2⌋−1`.
pub fn boundary_op_frac(
    u: &RhoJet,
    j: usize,
    coeffs: &BoundaryCoefficients,
) -> Result<ZonalFunction> {
    let n = u.geometry.n as f64;
    small_frac_from_shifted(&u.shift(n / 2.0 - coeffs.gamma), j, coeffs)
}

pub(crate) fn small_frac_from_shifted(
    v: &RhoJet,
    j: usize,
    coeffs: &BoundaryCoefficients,
) -> Result<ZonalFunction> {
    let hi = coeffs.floor() - coeffs.half_floor();
    if hi == 0 {
        return Err(Error::Domain(
            "fractional family is empty for this gamma".into(),
        ));
    }
    check_range(j, 0, hi - 1, "small fractional-family")?;
    let gamma = coeffs.gamma;
    let n = v.geometry.n as f64;
    let floor = coeffs.floor() as f64;
    let frac = gamma - gamma.floor();
    let mut v = v.clone();
    for l in 0..=j {
        v = shifted_laplacian(&v, gamma - 2.0 * l as f64);
    }
    for l in 0..j {
        v = shifted_laplacian(&v, gamma - 2.0 * (floor - l as f64));
    }
    let target = n / 2.0 - gamma + 2.0 * j as f64 + 2.0 * frac;
    let extracted = v
        .coefficient_at(target)
        .ok_or_else(|| Error::MisalignedJets(format!("no coefficient at exponent {target}")))?;
    Ok(extracted.scale(1.0 / coeffs.b_frac[j]))
}

/// `Π^γ_j = (−1)^{⌊γ⌋} Π_{l≠j} (Δ̃₊ − (γ−2l)²)` applied to a jet.
pub(crate) fn pi_operator(v: &RhoJet, j: usize, coeffs: &BoundaryCoefficients) -> RhoJet {
    let gamma = coeffs.gamma;
    let mut out = v.clone();
    for l in 0..=coeffs.floor() {
        if l != j {
            out = shifted_laplacian(&out, gamma - 2.0 * l as f64);
        }
    }
    if coeffs.floor() % 2 == 1 {
        out = out.scale(-1.0);
    }
    out
}

/// Large-index integer-family operator `B^{2γ}_{2j}(U)`,
/// `⌊γ/2⌋+1 ≤ j ≤ ⌊γ⌋`:
/// `(1/q_j) ρ^{−n/2+γ−2j} Π^γ_j(ρ^{n/2−γ}(U−Ũ))|₀ + c⁻¹_{2j−γ} P_{4j−2γ} B_{2γ−2j}(U)`.
pub fn boundary_op_large_int(
    u: &RhoJet,
    u_tilde: &RhoJet,
    j: usize,
    coeffs: &BoundaryCoefficients,
) -> Result<ZonalFunction> {
    check_range(j, coeffs.half_floor() + 1, coeffs.floor(), "large integer-family")?;
    let gamma = coeffs.gamma;
    let n = u.geometry.n as f64;
    let diff = u.sub(u_tilde)?.shift(n / 2.0 - gamma);
    let pi = pi_operator(&diff, j, coeffs);
    let target = n / 2.0 - gamma + 2.0 * j as f64;
    let extracted = pi
        .coefficient_at(target)
        .ok_or_else(|| Error::MisalignedJets(format!("no coefficient at exponent {target}")))?
        .scale(1.0 / coeffs.q[j]);
    // the scattering-term counterpart uses the small fractional datum at
    // index 2γ−2j = 2(⌊γ⌋−j) + 2[γ]
    let small = boundary_op_frac(u, coeffs.floor() - j, coeffs)?;
    let order = 2.0 * j as f64 - gamma;
    let p_applied = apply_gjms_order(&small, order)?;
    Ok(extracted.add(&p_applied.scale(c_gamma_inv(order))))
}

/// Large-index fractional-family operator `B^{2γ}_{2γ−2j}(U)`,
/// `0 ≤ j ≤ ⌊γ/2⌋`:
/// `(1/q_j) ρ^{−n/2−γ+2j} Π^γ_j(ρ^{n/2−γ}(U−Ũ))|₀ + c⁻¹_{γ−2j} P_{2γ−4j} B_{2j}(U)`.
pub fn boundary_op_large_frac(
    u: &RhoJet,
    u_tilde: &RhoJet,
    j: usize,
    coeffs: &BoundaryCoefficients,
) -> Result<ZonalFunction> {
    check_range(j, 0, coeffs.half_floor(), "large fractional-family")?;
    let gamma = coeffs.gamma;
    let n = u.geometry.n as f64;
    let diff = u.sub(u_tilde)?.shift(n / 2.0 - gamma);
    let pi = pi_operator(&diff, j, coeffs);
    let target = n / 2.0 + gamma - 2.0 * j as f64;
    let extracted = pi
        .coefficient_at(target)
        .ok_or_else(|| Error::MisalignedJets(format!("no coefficient at exponent {target}")))?
        .scale(1.0 / coeffs.q[j]);
    let small = boundary_op_int(u, j, coeffs)?;
    let order = gamma - 2.0 * j as f64;
    let p_applied = apply_gjms_order(&small, order)?;
    Ok(extracted.add(&p_applied.scale(c_gamma_inv(order))))
}
