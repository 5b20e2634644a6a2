//! The polyharmonic Dirichlet problem `L_{2k} U = 0` with prescribed
//! small-index boundary data, solved by superposing shifted scattering
//! extensions mode by mode.

use super::coeffs::BoundaryCoefficients;
use super::jet::RhoJet;
use crate::scattering::extension_jet;
use crate::zonal::{SphereGeometry, ZonalFunction};
use crate::{Error, Result};

/// Dirichlet data: `f^{(2j)}` for the integer family and `φ^{(2m)}` for
/// the fractional family, with the γ-determined index ranges enforced.
#[derive(Debug, Clone)]
pub struct BoundaryData {
    pub f2j: Vec<ZonalFunction>,
    pub phi2m: Vec<ZonalFunction>,
}

impl BoundaryData {
    pub fn new(
        f2j: Vec<ZonalFunction>,
        phi2m: Vec<ZonalFunction>,
        coeffs: &BoundaryCoefficients,
    ) -> Result<Self> {
        let want_f = coeffs.half_floor() + 1;
        let want_phi = coeffs.floor() - coeffs.half_floor();
        if f2j.len() != want_f || phi2m.len() != want_phi {
            return Err(Error::Domain(format!(
                "boundary data lengths ({}, {}) do not match the gamma = {} ranges ({}, {})",
                f2j.len(),
                phi2m.len(),
                coeffs.gamma,
                want_f,
                want_phi
            )));
        }
        Ok(BoundaryData { f2j, phi2m })
    }

    pub fn zero(geometry: SphereGeometry, degree: usize, coeffs: &BoundaryCoefficients) -> Self {
        let zero = ZonalFunction::constant(geometry, 0.0, degree);
        BoundaryData {
            f2j: vec![zero.clone(); coeffs.half_floor() + 1],
            phi2m: vec![zero; coeffs.floor() - coeffs.half_floor()],
        }
    }
}

/// Assemble the unique polyharmonic solution
/// `Ũ = Σ_j ρ^{−n/2+γ} 𝒫(n/2+γ−2j) f^{(2j)} + Σ_m ρ^{−n/2+γ} 𝒫(n/2+⌊γ⌋−[γ]−2m) φ^{(2m)}`
/// as a U-level two-branch jet (base exponent 0) of the given order.
pub fn dirichlet_extend(
    data: &BoundaryData,
    coeffs: &BoundaryCoefficients,
    geometry: SphereGeometry,
    order: usize,
) -> Result<RhoJet> {
    let gamma = coeffs.gamma;
    let floor = coeffs.floor();
    let degree = data
        .f2j
        .iter()
        .chain(&data.phi2m)
        .map(|f| f.degree())
        .max()
        .unwrap_or(0);
    let mut jet = RhoJet::zero(geometry, gamma, 0.0, order, degree);

    // integer-family data: branch 1 of the mode extension lands at
    // ρ^{2j+2m}, branch 2 at ρ^{2[γ]+2(⌊γ⌋−j+m)}
    for (j, f) in data.f2j.iter().enumerate() {
        let gamma_prime = gamma - 2.0 * j as f64;
        for (l, &a) in f.coeffs.iter().enumerate() {
            if a == 0.0 {
                continue;
            }
            let ext = extension_jet(l, gamma_prime, geometry, order)?;
            for (m, &c) in ext.branch1.iter().enumerate() {
                let slot = j + m;
                if slot <= order {
                    let mut coeffs_vec = vec![0.0; degree + 1];
                    coeffs_vec[l] = a * c;
                    jet.branch1[slot] =
                        jet.branch1[slot].add(&ZonalFunction::new(geometry, coeffs_vec));
                }
            }
            for (m, &c) in ext.branch2.iter().enumerate() {
                let slot = floor - j + m;
                if slot <= order {
                    let mut coeffs_vec = vec![0.0; degree + 1];
                    coeffs_vec[l] = a * c;
                    jet.branch2[slot] =
                        jet.branch2[slot].add(&ZonalFunction::new(geometry, coeffs_vec));
                }
            }
        }
    }

    // fractional-family data: branch 1 lands at ρ^{2[γ]+2(m+i)}, branch 2
    // at ρ^{2(⌊γ⌋−m+i)}
    for (m, phi) in data.phi2m.iter().enumerate() {
        let gamma_prime = floor as f64 - (gamma - gamma.floor()) - 2.0 * m as f64;
        for (l, &a) in phi.coeffs.iter().enumerate() {
            if a == 0.0 {
                continue;
            }
            let ext = extension_jet(l, gamma_prime, geometry, order)?;
            for (i, &c) in ext.branch1.iter().enumerate() {
                let slot = m + i;
                if slot <= order {
                    let mut coeffs_vec = vec![0.0; degree + 1];
                    coeffs_vec[l] = a * c;
                    jet.branch2[slot] =
                        jet.branch2[slot].add(&ZonalFunction::new(geometry, coeffs_vec));
                }
            }
            for (i, &c) in ext.branch2.iter().enumerate() {
                let slot = floor - m + i;
                if slot <= order {
                    let mut coeffs_vec = vec![0.0; degree + 1];
                    coeffs_vec[l] = a * c;
                    jet.branch1[slot] =
                        jet.branch1[slot].add(&ZonalFunction::new(geometry, coeffs_vec));
                }
            }
        }
    }

    Ok(jet)
}
