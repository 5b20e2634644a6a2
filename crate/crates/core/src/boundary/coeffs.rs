//! Normalization constants of the boundary operators and the σ/ζ weights
//! of the Dirichlet form.
//!
//! The authoritative definitions are the indicial-eigenvalue products: the
//! constant `b` dividing each operator is exactly the product of factors
//! `((target)² − (γ−2l)²)` the operator produces on its normalization
//! monomial, which pins `B(ρ^{2j}) = 1` by construction. The Gamma closed
//! forms printed alongside are cross-checked against these products where
//! the two agree; the small fractional-index display differs from the
//! defining product by an exact factor 4 (regression-pinned in the tests),
//! so the product form is the one used everywhere.

use crate::specfun::gamma_signed;
use crate::{Error, Result};

/// `c_δ = 2^{2δ} Γ(δ)/Γ(−δ)`.
pub fn c_gamma(delta: f64) -> f64 {
    gamma_signed(delta)
        .div(gamma_signed(-delta))
        .mul(crate::specfun::SignedLogValue {
            sign: 1,
            log_mag: 2.0 * delta * 2.0f64.ln(),
        })
        .to_real()
}

/// `c_δ^{-1} = 2^{-2δ} Γ(−δ)/Γ(δ)`.
pub fn c_gamma_inv(delta: f64) -> f64 {
    gamma_signed(-delta)
        .div(gamma_signed(delta))
        .mul(crate::specfun::SignedLogValue {
            sign: 1,
            log_mag: -2.0 * delta * 2.0f64.ln(),
        })
        .to_real()
}

/// All boundary-operator constants for one γ.
#[derive(Debug, Clone, serde::Serialize)]
pub struct BoundaryCoefficients {
    pub gamma: f64,
    /// `q_j = (−1)^{⌊γ⌋} Π_{i≠j} ((γ−2j)² − (γ−2i)²)`, `j = 0..=⌊γ⌋`; this
    /// is the large-index `b_{2j}` and simultaneously the fractional-family
    /// `b_{2γ−2j}`.
    pub q: Vec<f64>,
    /// Small-index integer-family normalizations `b_{2j}`, `j = 0..=⌊γ/2⌋`.
    pub b_int: Vec<f64>,
    /// Small-index fractional-family normalizations `b_{2j+2[γ]}`,
    /// `j = 0..⌊γ⌋−⌊γ/2⌋−1`.
    pub b_frac: Vec<f64>,
    /// `σ_{j,γ}`, `j = 0..=⌊γ⌋`.
    pub sigma: Vec<f64>,
    /// `ζ_{j,γ} > 0`, `j = 0..=⌊γ⌋`.
    pub zeta: Vec<f64>,
}

impl BoundaryCoefficients {
    pub fn floor(&self) -> usize {
        self.gamma.floor() as usize
    }

    pub fn half_floor(&self) -> usize {
        (self.gamma / 2.0).floor() as usize
    }
}

pub fn boundary_coeffs(gamma: f64) -> Result<BoundaryCoefficients> {
    if gamma <= 0.0 || (gamma - gamma.round()).abs() < 1e-9 {
        return Err(Error::Domain(format!(
            "boundary coefficients need gamma in (0,inf) off the integers, got {gamma}"
        )));
    }
    let floor = gamma.floor() as usize;
    let half_floor = (gamma / 2.0).floor() as usize;
    let sign = if floor % 2 == 0 { 1.0 } else { -1.0 };

    let q: Vec<f64> = (0..=floor)
        .map(|j| {
            let target = (gamma - 2.0 * j as f64).powi(2);
            sign * (0..=floor)
                .filter(|&i| i != j)
                .map(|i| target - (gamma - 2.0 * i as f64).powi(2))
                .product::<f64>()
        })
        .collect();

    let b_int: Vec<f64> = (0..=half_floor)
        .map(|j| {
            let target = (gamma - 2.0 * j as f64).powi(2);
            (0..j)
                .map(|l| {
                    (target - (gamma - 2.0 * l as f64).powi(2))
                        * (target - (gamma - 2.0 * (floor - l) as f64).powi(2))
                })
                .product::<f64>()
        })
        .collect();

    let frac_count = floor - half_floor; // indices j = 0..frac_count-1
    let b_frac: Vec<f64> = (0..frac_count)
        .map(|j| {
            let delta = floor as f64 - (gamma - gamma.floor()) - 2.0 * j as f64;
            let target = delta * delta;
            let first: f64 = (0..=j)
                .map(|l| target - (gamma - 2.0 * l as f64).powi(2))
                .product();
            let second: f64 = (0..j)
                .map(|l| target - (gamma - 2.0 * (floor - l) as f64).powi(2))
                .product();
            first * second
        })
        .collect();

    let sigma: Vec<f64> = (0..=floor)
        .map(|j| {
            let shift = gamma - 2.0 * j as f64;
            if j <= half_floor {
                2.0 * shift * q[j]
            } else {
                2.0 * (-shift) * q[j]
            }
        })
        .collect();

    let zeta: Vec<f64> = (0..=floor)
        .map(|j| {
            let shift = gamma - 2.0 * j as f64;
            if j <= half_floor {
                -2.0 * c_gamma_inv(shift) * shift * q[j]
            } else {
                -2.0 * c_gamma_inv(-shift) * (-shift) * q[j]
            }
        })
        .collect();

    Ok(BoundaryCoefficients {
        gamma,
        q,
        b_int,
        b_frac,
        sigma,
        zeta,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::ln_gamma;
    use approx::assert_relative_eq;

    /// Paper-style Gamma closed form of the small integer-family b.
    fn b_int_gamma_form(gamma: f64, j: usize) -> f64 {
        let frac = gamma - gamma.floor();
        let floor = gamma.floor();
        let jf = j as f64;
        16.0f64.powi(j as i32)
            * gamma_signed(jf + 1.0).to_real()
            * gamma_signed(jf + 1.0 - frac)
                .div(gamma_signed(1.0 - frac))
                .to_real()
            * gamma_signed(gamma + 1.0 - jf)
                .div(gamma_signed(gamma + 1.0 - 2.0 * jf))
                .to_real()
            * gamma_signed(floor + 1.0 - jf)
                .div(gamma_signed(floor + 1.0 - 2.0 * jf))
                .to_real()
    }

    /// Paper-style Gamma closed form of the small fractional-family b.
    fn b_frac_gamma_form(gamma: f64, j: usize) -> f64 {
        let frac = gamma - gamma.floor();
        let floor = gamma.floor();
        let jf = j as f64;
        -16.0f64.powi(j as i32)
            * gamma_signed(jf + 1.0).to_real()
            * gamma_signed(jf + 1.0 + frac).div(gamma_signed(frac)).to_real()
            * gamma_signed(floor + 1.0 - jf)
                .div(gamma_signed(floor - 2.0 * jf))
                .to_real()
            * gamma_signed(floor + 1.0 - jf - frac)
                .div(gamma_signed(floor + 1.0 - 2.0 * jf - frac))
                .to_real()
    }

    /// Paper-style Gamma closed form of σ (same magnitude both ranges).
    fn sigma_gamma_form(gamma: f64, j: usize) -> f64 {
        let frac = gamma - gamma.floor();
        let floor = gamma.floor() as usize;
        let jf = j as f64;
        let magnitude = (2.0f64.ln() * (2.0 * floor as f64 + 1.0)
            + ln_gamma(jf + 1.0)
            + ln_gamma((floor - j) as f64 + 1.0))
        .exp()
            * gamma_signed(gamma + 1.0 - jf)
                .div(gamma_signed(gamma - 2.0 * jf))
                .to_real()
            * gamma_signed(jf + 1.0 - frac)
                .div(gamma_signed(2.0 * jf + 1.0 - gamma))
                .to_real();
        if j <= (gamma / 2.0).floor() as usize {
            magnitude
        } else {
            -magnitude
        }
    }

    /// Paper-style Gamma closed form of ζ in the small range.
    fn zeta_gamma_form_small(gamma: f64, j: usize) -> f64 {
        let frac = gamma - gamma.floor();
        let floor = gamma.floor() as usize;
        let jf = j as f64;
        (2.0f64.ln() * (4.0 * jf - 2.0 * frac + 1.0)
            + ln_gamma(jf + 1.0)
            + ln_gamma((floor - j) as f64 + 1.0))
        .exp()
            * gamma_signed(gamma + 1.0 - jf)
                .div(gamma_signed(gamma + 1.0 - 2.0 * jf))
                .to_real()
            * gamma_signed(jf + 1.0 - frac)
                .div(gamma_signed(gamma - 2.0 * jf))
                .to_real()
    }

    #[test]
    fn b_zero_is_one() {
        for &gamma in &[0.5, 1.3, 2.6, 3.4] {
            let c = boundary_coeffs(gamma).unwrap();
            assert_eq!(c.b_int[0], 1.0);
        }
    }

    #[test]
    fn half_gamma_values() {
        // γ = 1/2: σ_0 = ζ_0 = 1 and c_{1/2} = −1
        let c = boundary_coeffs(0.5).unwrap();
        assert_relative_eq!(c.sigma[0], 1.0, max_relative = 1e-13);
        assert_relative_eq!(c.zeta[0], 1.0, max_relative = 1e-13);
        assert_relative_eq!(super::c_gamma(0.5), -1.0, max_relative = 1e-13);
    }

    #[test]
    fn integer_family_b_matches_gamma_form() {
        for &gamma in &[1.3, 2.6, 3.4, 3.9] {
            let c = boundary_coeffs(gamma).unwrap();
            for (j, &b) in c.b_int.iter().enumerate() {
                let g = b_int_gamma_form(gamma, j);
                assert_relative_eq!(b, g, max_relative = 1e-12);
            }
        }
    }

    #[test]
    fn fractional_family_b_is_four_times_gamma_form() {
        // the defining eigenvalue product exceeds the printed closed form
        // by exactly 4; the product is what normalizes B(ρ^{2j+2[γ]}) = 1,
        // so it wins and the factor is pinned here
        for &gamma in &[1.3, 2.6, 3.4, 3.9] {
            let c = boundary_coeffs(gamma).unwrap();
            for (j, &b) in c.b_frac.iter().enumerate() {
                let g = b_frac_gamma_form(gamma, j);
                assert_relative_eq!(b, 4.0 * g, max_relative = 1e-12);
            }
        }
    }

    #[test]
    fn sigma_matches_gamma_form() {
        for &gamma in &[0.5, 1.3, 2.6, 3.4] {
            let c = boundary_coeffs(gamma).unwrap();
            for (j, &s) in c.sigma.iter().enumerate() {
                let g = sigma_gamma_form(gamma, j);
                assert_relative_eq!(s, g, max_relative = 1e-12);
            }
        }
    }

    #[test]
    fn zeta_small_range_matches_gamma_form() {
        for &gamma in &[0.5, 1.3, 2.6, 3.4] {
            let c = boundary_coeffs(gamma).unwrap();
            for j in 0..=c.half_floor() {
                let g = zeta_gamma_form_small(gamma, j);
                assert_relative_eq!(c.zeta[j], g, max_relative = 1e-12);
            }
        }
    }

    #[test]
    fn zeta_positive_on_grid() {
        // ζ_{j,γ} > 0 for all j on a 400-point γ-grid in (0,4) off ℕ
        for i in 0..400 {
            let gamma = 0.005 + 3.99 * i as f64 / 399.0;
            if (gamma - gamma.round()).abs() < 2e-2 {
                continue;
            }
            let c = boundary_coeffs(gamma).unwrap();
            for (j, &z) in c.zeta.iter().enumerate() {
                assert!(z > 0.0, "zeta_{j} at gamma = {gamma}: {z}");
            }
        }
    }

    #[test]
    fn sigma_is_sign_flipped_zeta_times_c() {
        // ζ_j = −c⁻¹ σ_j with the matching order shift in both ranges
        for &gamma in &[1.3, 2.6, 3.4] {
            let c = boundary_coeffs(gamma).unwrap();
            for j in 0..=c.floor() {
                let shift = gamma - 2.0 * j as f64;
                let cg = if j <= c.half_floor() {
                    super::c_gamma(shift)
                } else {
                    super::c_gamma(-shift)
                };
                assert_relative_eq!(c.zeta[j], -c.sigma[j] / cg, max_relative = 1e-12);
            }
        }
    }

    #[test]
    fn rejects_integer_gamma() {
        assert!(boundary_coeffs(2.0).is_err());
        assert!(boundary_coeffs(-0.5).is_err());
    }
}
