//! Sobolev trace inequalities on the ball: the sharp lower bound of the
//! Dirichlet form assembled from the per-index sharp inequalities on the
//! boundary sphere, and the conformal-covariance check of the small-index
//! boundary operators.

use super::coeffs::{boundary_coeffs, BoundaryCoefficients};
use super::dirichlet::BoundaryData;
use super::form::dirichlet_form_polyharmonic;
use super::jet::{even_jet_exp, jet_mul_even, zonal_product, EvenJet, RhoJet};
use super::ops::{small_frac_from_shifted, small_int_from_shifted};
use crate::inequalities::{beckner_deficit, DeficitReport};
use crate::specfun::gamma_signed;
use crate::zonal::{lp_norm, synthesize, SphereGeometry, ZonalFunction};
use crate::{Error, Result};

/// Which branch of the trace corollary an evaluation went through.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub enum TraceCase {
    /// `[γ] ≠ 1/2` or n even: only Sobolev/reverse-Sobolev terms.
    CaseII,
    /// `[γ] = 1/2`, n odd, `γ − n/2 ∈ 2ℕ ∪ {0}`: an Onofri term at `j₁`.
    CaseIOnofri,
}

fn j1_j2(gamma: f64, n: usize) -> (i64, i64) {
    let nf = n as f64;
    (
        (gamma / 2.0 - nf / 4.0).floor() as i64,
        (gamma / 2.0 + nf / 4.0).floor() as i64 + 1,
    )
}

/// Sharp right-hand side `Γ(n/2+δ)/Γ(n/2−δ) |S^n|^{2δ/n} ‖f‖²_{L^{2n/(n−2δ)}}`
/// of the order-δ inequality; `reverse` demands positivity of the datum.
fn sharp_term(f: &ZonalFunction, delta: f64, m: usize) -> Result<f64> {
    let geometry = f.geometry;
    let n = geometry.n as f64;
    let constant = crate::gjms::gjms_multiplier(geometry.n, delta, 0)?
        * geometry.volume().powf(2.0 * delta / n);
    let p = 2.0 * n / (n - 2.0 * delta);
    let grid = geometry.grid(m)?;
    let norm = lp_norm(&synthesize(f, &grid), &grid, geometry, p)?;
    Ok(constant * norm * norm)
}

fn is_positive(f: &ZonalFunction, m: usize) -> Result<bool> {
    let grid = f.geometry.grid(m)?;
    Ok(synthesize(f, &grid).iter().all(|&v| v > 0.0))
}

fn is_zero(f: &ZonalFunction) -> bool {
    f.coeffs.iter().all(|&c| c == 0.0)
}

/// Trace-inequality deficit `Q_2γ(Ũ, Ũ) − RHS` for the polyharmonic
/// extension of the given data, with the right-hand side dispatched per
/// index: usual sharp Sobolev for orders below n/2, reverse Sobolev in
/// `(n/2, n/2+2) ∖ {n/2+1}`, and the Onofri term in the resonant case I
/// subcase with `j₁ ≥ 0`. Unsupported cells and violated positivity/zero
/// constraints report `UnimplementedCase`.
pub fn trace_deficit(
    data: &BoundaryData,
    gamma: f64,
    geometry: SphereGeometry,
    m: usize,
) -> Result<(DeficitReport, TraceCase)> {
    let coeffs = boundary_coeffs(gamma)?;
    let n = geometry.n;
    let nf = n as f64;
    let frac = gamma - gamma.floor();
    let (j1, j2) = j1_j2(gamma, n);
    let lhs = dirichlet_form_polyharmonic(data, data, &coeffs)?;

    let resonant = (frac - 0.5).abs() < 1e-9 && n % 2 == 1;
    let case = if resonant {
        let excess = gamma - nf / 2.0;
        let even_excess = excess >= -1e-9 && (excess / 2.0 - (excess / 2.0).round()).abs() < 1e-9;
        if !even_excess || j1 < 0 {
            return Err(Error::UnimplementedCase(format!(
                "resonant cell [gamma]=1/2, n odd with gamma-n/2 = {excess} not in 2N u {{0}} or j1 = {j1} < 0"
            )));
        }
        TraceCase::CaseIOnofri
    } else {
        TraceCase::CaseII
    };

    let mut rhs = 0.0;
    match case {
        TraceCase::CaseII => {
            // admissibility constraints of the data class for γ > n/2
            if gamma > nf / 2.0 {
                for j in 0..j1.max(0) as usize {
                    if !is_zero(&data.f2j[j]) {
                        return Err(Error::UnimplementedCase(format!(
                            "datum f^({}) must vanish for indices below j1 = {j1}",
                            2 * j
                        )));
                    }
                }
                let j1u = j1.max(0) as usize;
                if j1 >= 0 && j1u <= coeffs.half_floor() && !is_positive(&data.f2j[j1u], m)? {
                    return Err(Error::UnimplementedCase(format!(
                        "datum f^({}) at j1 must be positive",
                        2 * j1u
                    )));
                }
                for j in (j2.max(0) as usize + 1)..=coeffs.floor() {
                    if j > coeffs.half_floor() {
                        let idx = coeffs.floor() - j;
                        if !is_zero(&data.phi2m[idx]) {
                            return Err(Error::UnimplementedCase(format!(
                                "datum phi^({}) must vanish for indices beyond j2 = {j2}",
                                2 * idx
                            )));
                        }
                    }
                }
                let j2u = j2 as usize;
                if j2u > coeffs.half_floor() && j2u <= coeffs.floor() {
                    let idx = coeffs.floor() - j2u;
                    if !is_positive(&data.phi2m[idx], m)? {
                        return Err(Error::UnimplementedCase(format!(
                            "datum phi^({}) at j2 must be positive",
                            2 * idx
                        )));
                    }
                }
            }
            for j in j1.max(0) as usize..=coeffs.half_floor() {
                let delta = gamma - 2.0 * j as f64;
                if delta > nf / 2.0 + 2.0 {
                    return Err(Error::UnimplementedCase(format!(
                        "order {delta} at index {j} beyond the reverse-Sobolev range"
                    )));
                }
                rhs += coeffs.zeta[j] * sharp_term(&data.f2j[j], delta, m)?;
            }
            let hi = (j2.min(coeffs.floor() as i64)) as usize;
            for j in coeffs.half_floor() + 1..=hi {
                let delta = 2.0 * j as f64 - gamma;
                rhs += coeffs.zeta[j] * sharp_term(&data.phi2m[coeffs.floor() - j], delta, m)?;
            }
        }
        TraceCase::CaseIOnofri => {
            let j1 = j1 as usize;
            // Onofri term at j1: ζ_{j1} 2 n! |S^n| log ⨍ e^{f − f̄}
            let f = &data.f2j[j1];
            let beckner = beckner_deficit(f, m)?;
            let n_factorial = gamma_signed(nf + 1.0).to_real();
            rhs += coeffs.zeta[j1] * 2.0 * n_factorial * geometry.volume() * beckner.rhs;
            for j in j1 + 1..=coeffs.half_floor() {
                rhs += coeffs.zeta[j] * sharp_term(&data.f2j[j], gamma - 2.0 * j as f64, m)?;
            }
            let hi = ((j2 - 1).min(coeffs.floor() as i64)) as usize;
            for j in coeffs.half_floor() + 1..=hi {
                let delta = 2.0 * j as f64 - gamma;
                rhs += coeffs.zeta[j] * sharp_term(&data.phi2m[coeffs.floor() - j], delta, m)?;
            }
        }
    }

    Ok((
        DeficitReport::new(lhs, rhs, geometry, gamma, m, 0),
        case,
    ))
}

/// Conformal covariance of the small-index boundary operators: compare
/// `B̂^{2γ}(U)` computed with `ρ̂ = e^τ ρ` against
/// `e^{(−n/2+γ−2j)τ|∂} B^{2γ}(e^{(n/2−γ)τ} U)`; returns the max-norm
/// residual. `fractional` selects the `B_{2j+2[γ]}` family.
pub fn conformal_covariance_check(
    u: &RhoJet,
    tau: &EvenJet,
    j: usize,
    fractional: bool,
    coeffs: &BoundaryCoefficients,
) -> Result<f64> {
    let gamma = coeffs.gamma;
    let n = u.geometry.n as f64;
    let order = u.order();
    let weight = n / 2.0 - gamma;
    let scale_exp = if fractional {
        -n / 2.0 + gamma - 2.0 * j as f64 - 2.0 * (gamma - gamma.floor())
    } else {
        -n / 2.0 + gamma - 2.0 * j as f64
    };

    let exp_weight = even_jet_exp(tau, weight, order);
    // hatted route: multiply the shifted jet, extract, then restore the
    // conformal factor of the prefactor at the boundary
    let hatted_inner = jet_mul_even(&u.shift(weight), &exp_weight);
    let hatted_raw = if fractional {
        small_frac_from_shifted(&hatted_inner, j, coeffs)?
    } else {
        small_int_from_shifted(&hatted_inner, j, coeffs)?
    };
    let boundary_factor = exp_zonal(&tau.coeffs[0], scale_exp);
    let hatted = zonal_product(&hatted_raw, &boundary_factor);

    // plain route: conformally weight U first, then apply the flat operator
    let weighted_u = jet_mul_even(u, &exp_weight);
    let plain_raw = if fractional {
        small_frac_from_shifted(&weighted_u.shift(weight), j, coeffs)?
    } else {
        small_int_from_shifted(&weighted_u.shift(weight), j, coeffs)?
    };
    let plain = zonal_product(&plain_raw, &boundary_factor);

    let resid = hatted
        .coeffs
        .iter()
        .zip(&plain.coeffs)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0f64, f64::max);
    Ok(resid)
}

/// Pointwise `e^{c f}` of a zonal function.
fn exp_zonal(f: &ZonalFunction, c: f64) -> ZonalFunction {
    let geometry = f.geometry;
    let degree = f.degree();
    let grid = geometry.grid((4 * degree + 4).max(64)).expect("grid");
    let values: Vec<f64> = synthesize(f, &grid).iter().map(|&v| (c * v).exp()).collect();
    crate::zonal::analyze(&values, &grid, geometry, degree).expect("analysis")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boundary::dirichlet::dirichlet_extend;
    use crate::conformal::ConformalMap;
    use crate::inequalities::{extremal_profile, random_positive};
    use crate::zonal::analyze;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn escobar_cell() {
        // n = 2, γ = 1/2: Q ≥ (n−1)/2 |S^n|^{1/n} ‖f‖²_{L^{2n/(n−1)}};
        // equality at the harmonic extension of the order-1/2 extremals
        let geom = SphereGeometry::new(2);
        let gamma = 0.5;
        let coeffs = boundary_coeffs(gamma).unwrap();
        // constants are extremal
        let c = ZonalFunction::constant(geom, 1.3, 8);
        let data = BoundaryData::new(vec![c], vec![], &coeffs).unwrap();
        let (rep, case) = trace_deficit(&data, gamma, geom, 256).unwrap();
        assert_eq!(case, TraceCase::CaseII);
        assert!(rep.relative.abs() < 1e-10, "constant: {:e}", rep.relative);
        // conformal extremal family
        let prof = extremal_profile(0.4, gamma, geom, 48).unwrap();
        let data = BoundaryData::new(vec![prof], vec![], &coeffs).unwrap();
        let (rep, _) = trace_deficit(&data, gamma, geom, 512).unwrap();
        assert!(rep.relative.abs() < 1e-6, "extremal: {:e}", rep.relative);
        // random data: nonnegative deficit
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..10 {
            let f = random_positive(geom, 24, 5, 0.6, &mut rng);
            let data = BoundaryData::new(vec![f], vec![], &coeffs).unwrap();
            let (rep, _) = trace_deficit(&data, gamma, geom, 256).unwrap();
            assert!(rep.deficit >= -1e-8 * rep.lhs.abs().max(1.0));
        }
    }

    #[test]
    fn lebedev_milin_cell() {
        // n = 1, γ = 1/2: log ⨍ e^f ≤ (1/4π) ∫|∇u|² + f̄
        let geom = SphereGeometry::new(1);
        let gamma = 0.5;
        let coeffs = boundary_coeffs(gamma).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..10 {
            let f = random_positive(geom, 24, 6, 1.0, &mut rng);
            let data = BoundaryData::new(vec![f], vec![], &coeffs).unwrap();
            let (rep, case) = trace_deficit(&data, gamma, geom, 512).unwrap();
            assert_eq!(case, TraceCase::CaseIOnofri);
            assert!(rep.deficit >= -1e-8 * rep.lhs.abs().max(1.0), "{:e}", rep.relative);
        }
        // equality family: f = c + log det dφ
        let map = ConformalMap::new(geom, 0.4);
        let grid = geom.grid(512).unwrap();
        let values: Vec<f64> = grid
            .nodes
            .iter()
            .map(|&t| 0.3 + map.conformal_factor(t).ln())
            .collect();
        let f = analyze(&values, &grid, geom, 64).unwrap();
        let data = BoundaryData::new(vec![f], vec![], &coeffs).unwrap();
        let (rep, _) = trace_deficit(&data, gamma, geom, 512).unwrap();
        assert!(rep.deficit.abs() < 1e-6 * rep.lhs.abs().max(1.0), "{:e}", rep.relative);
    }

    #[test]
    fn full_case_ii_cell() {
        // γ = 2.6, n = 3: reverse term at j = 0, usual terms at j = 1, 2
        let geom = SphereGeometry::new(3);
        let gamma = 2.6;
        let coeffs = boundary_coeffs(gamma).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..6 {
            let f0 = random_positive(geom, 24, 4, 0.3, &mut rng);
            let f2 = random_positive(geom, 24, 4, 0.5, &mut rng);
            let phi0 = random_positive(geom, 24, 4, 0.5, &mut rng);
            let data = BoundaryData::new(vec![f0, f2], vec![phi0], &coeffs).unwrap();
            let (rep, case) = trace_deficit(&data, gamma, geom, 256).unwrap();
            assert_eq!(case, TraceCase::CaseII);
            assert!(
                rep.deficit >= -1e-8 * rep.lhs.abs().max(1.0),
                "relative {:e}",
                rep.relative
            );
        }
    }

    #[test]
    fn case_ii_extremal_data() {
        // every datum set to its own sharp-profile: deficit ≈ 0
        let geom = SphereGeometry::new(3);
        let gamma = 2.6;
        let coeffs = boundary_coeffs(gamma).unwrap();
        let orders = [gamma, gamma - 2.0, 1.4]; // f0, f2, phi0 orders
        let f0 = extremal_profile(0.3, orders[0], geom, 48).unwrap();
        let f2 = extremal_profile(0.3, orders[1], geom, 48).unwrap();
        let phi0 = extremal_profile(0.3, orders[2], geom, 48).unwrap();
        let data = BoundaryData::new(vec![f0, f2], vec![phi0], &coeffs).unwrap();
        let (rep, _) = trace_deficit(&data, gamma, geom, 512).unwrap();
        assert!(rep.relative.abs() < 1e-6, "{:e}", rep.relative);
    }

    #[test]
    fn unimplemented_cells_are_reported() {
        // n = 3, γ = 1/2: resonant case I but γ − n/2 < 0 (subcase 2 shape)
        let geom = SphereGeometry::new(3);
        let coeffs = boundary_coeffs(0.5).unwrap();
        let f = ZonalFunction::constant(geom, 1.0, 4);
        let data = BoundaryData::new(vec![f], vec![], &coeffs).unwrap();
        assert!(matches!(
            trace_deficit(&data, 0.5, geom, 128),
            Err(Error::UnimplementedCase(_))
        ));
        // violated positivity at j1 for a reverse cell
        let geom = SphereGeometry::new(1);
        let coeffs = boundary_coeffs(1.3).unwrap();
        let mut f0 = ZonalFunction::constant(geom, 1.0, 4);
        f0.coeffs[1] = 2.0; // dips negative
        let phi0 = ZonalFunction::constant(geom, 1.0, 4);
        let data = BoundaryData::new(vec![f0], vec![phi0], &coeffs).unwrap();
        assert!(matches!(
            trace_deficit(&data, 1.3, geom, 128),
            Err(Error::UnimplementedCase(_))
        ));
    }

    #[test]
    fn euclidean_dirichlet_energy_oracle() {
        // the γ = 1/2 form is Escobar's quadratic form: for the harmonic
        // extension u = Σ a_l r^l B_l on the Euclidean ball,
        // ∫_B |∇u|² dx = Σ_l l a_l² ∫|B_l|², computed here by independent
        // 2D quadrature, and Q = ζ_0 Σ (l+(n−1)/2) a_l² ∫|B_l|²
        let geom = SphereGeometry::new(2);
        let nf = geom.n as f64;
        let f = ZonalFunction::new(geom, vec![0.7, 0.5, -0.3, 0.2]);
        let r_rule = crate::specfun::gauss_gegenbauer_rule(0.5, 48).unwrap();
        let t_rule = geom.grid(48).unwrap();
        let mut energy = 0.0;
        for (&x, &wr) in r_rule.nodes.iter().zip(&r_rule.weights) {
            let r = 0.5 + 0.5 * x;
            let wr = 0.5 * wr;
            for (&t, &wt) in t_rule.nodes.iter().zip(&t_rule.weights) {
                let ur: f64 = (1..=3)
                    .map(|l| f.coeffs[l] * l as f64 * r.powi(l as i32 - 1) * geom.basis_eval(l, t))
                    .sum();
                let h = 1e-6;
                let u_t = |tv: f64| -> f64 {
                    (0..=3)
                        .map(|l| f.coeffs[l] * r.powi(l as i32) * geom.basis_eval(l, tv))
                        .sum()
                };
                let ut = (u_t(t + h) - u_t(t - h)) / (2.0 * h);
                energy += wr * wt * (ur * ur + (1.0 - t * t) * ut * ut / (r * r)) * r.powf(nf);
            }
        }
        energy *= geom.boundary_volume();
        let expect: f64 = (0..=3)
            .map(|l| l as f64 * f.coeffs[l] * f.coeffs[l] * geom.basis_norm(l))
            .sum();
        approx::assert_relative_eq!(energy, expect, max_relative = 1e-6);

        // and the trace form equals the Euclidean energy plus the mass term
        let coeffs = boundary_coeffs(0.5).unwrap();
        let data = BoundaryData::new(vec![f.clone()], vec![], &coeffs).unwrap();
        let q = dirichlet_form_polyharmonic(&data, &data, &coeffs).unwrap();
        let mass: f64 = (0..=3)
            .map(|l| f.coeffs[l] * f.coeffs[l] * geom.basis_norm(l))
            .sum();
        approx::assert_relative_eq!(
            q,
            expect + (nf - 1.0) / 2.0 * mass,
            max_relative = 1e-12
        );
    }

    #[test]
    fn covariance_constant_tau() {
        // τ ≡ const: both routes reduce to the same scaling, residual ~ 0
        let geom = SphereGeometry::new(2);
        let gamma = 1.3;
        let coeffs = boundary_coeffs(gamma).unwrap();
        let order = 2 * coeffs.floor() + 6;
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let data = BoundaryData::new(
            vec![random_positive(geom, 6, 3, 0.5, &mut rng)],
            vec![random_positive(geom, 6, 3, 0.5, &mut rng)],
            &coeffs,
        )
        .unwrap();
        let jet = dirichlet_extend(&data, &coeffs, geom, order).unwrap();
        let tau = EvenJet::constant_in_rho(&ZonalFunction::constant(geom, 0.37, 6), order);
        let resid = conformal_covariance_check(&jet, &tau, 0, false, &coeffs).unwrap();
        assert!(resid < 1e-12, "residual {resid:e}");
        // τ = 0 is the exact identity
        let zero = EvenJet::constant_in_rho(&ZonalFunction::constant(geom, 0.0, 6), order);
        let resid = conformal_covariance_check(&jet, &zero, 0, true, &coeffs).unwrap();
        assert!(resid < 1e-13);
    }

    #[test]
    fn covariance_mode_tau() {
        // τ = 0.3 · mode(l=1), ρ-independent: residual < 1e-8 at γ = 1.3
        let geom = SphereGeometry::new(2);
        let gamma = 1.3;
        let coeffs = boundary_coeffs(gamma).unwrap();
        let order = 2 * coeffs.floor() + 6;
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        let data = BoundaryData::new(
            vec![random_positive(geom, 8, 4, 0.5, &mut rng)],
            vec![random_positive(geom, 8, 4, 0.5, &mut rng)],
            &coeffs,
        )
        .unwrap();
        let jet = dirichlet_extend(&data, &coeffs, geom, order).unwrap();
        let tau = EvenJet::constant_in_rho(&ZonalFunction::mode(geom, 1, 0.3, 8), order);
        for (j, fractional) in [(0usize, false), (0, true)] {
            let resid = conformal_covariance_check(&jet, &tau, j, fractional, &coeffs).unwrap();
            assert!(resid < 1e-8, "fractional={fractional}: residual {resid:e}");
        }
    }
}
