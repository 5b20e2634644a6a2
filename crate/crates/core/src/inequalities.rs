//! Deficit evaluators for the sharp inequalities on `S^n`: Sobolev and
//! reverse Sobolev, Onofri–Beckner, reverse Hardy–Littlewood–Sobolev, the
//! duality lemma pairing `P_2γ` with its inverse, the quantitative
//! stability decomposition, and a best-effort counterexample search in the
//! range where the reverse inequality is known to fail.
//!
//! Every evaluator returns `lhs`, `rhs` and `deficit = lhs − rhs`; the
//! inequality under test is always `deficit ≥ 0`. Whenever a negative
//! Lebesgue exponent enters, the report carries the deficit at grid sizes
//! M and 2M so that discretization error is distinguishable from genuine
//! negativity.

use crate::conformal::{critical_norm, normalize_center_of_mass, ConformalMap};
use crate::gjms::{chord_kernel_eigenvalue, conformal_energy, gjms_multiplier, gjms_spectrum};
use crate::specfun::{gamma_signed, is_nonpositive_integer, pochhammer};
use crate::zonal::{analyze, integrate, synthesize, SphereGeometry, ZonalFunction};
use crate::{Error, Result};
use rand::Rng;
use std::f64::consts::PI;

/// Default latitude grid size for the norm quadratures.
pub const DEFAULT_GRID: usize = 256;

/// LHS/RHS/deficit record for an inequality evaluation.
#[derive(Debug, Clone, serde::Serialize)]
pub struct DeficitReport {
    pub lhs: f64,
    pub rhs: f64,
    /// `lhs − rhs`, exactly as stored.
    pub deficit: f64,
    /// `deficit / max(|lhs|, |rhs|, 1e-300)`.
    pub relative: f64,
    pub n: usize,
    pub gamma: f64,
    pub grid: usize,
    pub modes: usize,
    /// Deficits at grid sizes M and 2M; present whenever a negative-power
    /// norm entered the computation.
    pub refinement: Option<[f64; 2]>,
}

impl DeficitReport {
    pub(crate) fn new(
        lhs: f64,
        rhs: f64,
        geometry: SphereGeometry,
        gamma: f64,
        grid: usize,
        modes: usize,
    ) -> Self {
        let deficit = lhs - rhs;
        DeficitReport {
            lhs,
            rhs,
            deficit,
            relative: deficit / lhs.abs().max(rhs.abs()).max(1e-300),
            n: geometry.n,
            gamma,
            grid,
            modes,
            refinement: None,
        }
    }
}

/// Sharp Sobolev constant `Γ(n/2+γ)/Γ(n/2−γ) |S^n|^{2γ/n}`.
pub fn sharp_constant(geometry: SphereGeometry, gamma: f64) -> Result<f64> {
    let n = geometry.n as f64;
    Ok(gjms_multiplier(geometry.n, gamma, 0)? * geometry.volume().powf(2.0 * gamma / n))
}

/// Extremal family member `J_a^{(n−2γ)/2} = (det dφ_a)^{(n−2γ)/(2n)}`,
/// analyzed to `degree` coefficients.
pub fn extremal_profile(
    a: f64,
    gamma: f64,
    geometry: SphereGeometry,
    degree: usize,
) -> Result<ZonalFunction> {
    let map = ConformalMap::new(geometry, a);
    let grid = geometry.grid((4 * degree + 4).max(DEFAULT_GRID))?;
    let power = (geometry.n as f64 - 2.0 * gamma) / 2.0;
    let values: Vec<f64> = grid
        .nodes
        .iter()
        .map(|&t| map.conformal_factor(t).powf(power))
        .collect();
    analyze(&values, &grid, geometry, degree)
}

/// Sobolev / reverse-Sobolev deficit
/// `a_2γ(f) − Γ(n/2+γ)/Γ(n/2−γ) |S^n|^{2γ/n} ‖f‖²_{L^{2n/(n−2γ)}}`.
///
/// Supported ranges: `γ ∈ (0, n/2)` (classical) and the reverse side
/// `γ ∈ (n/2, n/2+2]` (positivity of `f` required there; the resonant
/// endpoints go through the zero-multiplier convention transparently). For
/// nonnegative `f` touching zero use [`nonneg_energy_check`]; for
/// `γ > n/2+2` use [`counterexample_search`].
pub fn sobolev_deficit(f: &ZonalFunction, gamma: f64, m: usize) -> Result<DeficitReport> {
    let geometry = f.geometry;
    let n = geometry.n as f64;
    if gamma <= 0.0 || (gamma - n / 2.0).abs() < 1e-12 {
        return Err(Error::UnsupportedGamma(
            gamma,
            "Sobolev deficit needs gamma in (0, n/2) or (n/2, n/2+2]".into(),
        ));
    }
    if gamma > n / 2.0 + 2.0 && !is_nonpositive_integer(n / 2.0 - gamma) {
        return Err(Error::UnsupportedGamma(
            gamma,
            "reverse Sobolev fails beyond n/2+2; route to counterexample_search".into(),
        ));
    }
    let reverse = gamma > n / 2.0;
    let lhs = conformal_energy(f, gamma)?;
    let constant = sharp_constant(geometry, gamma)?;
    let norm = critical_norm(f, gamma, m)?;
    let rhs = constant * norm * norm;
    let mut report = DeficitReport::new(lhs, rhs, geometry, gamma, m, f.degree());
    if reverse {
        let norm2 = critical_norm(f, gamma, 2 * m)?;
        report.refinement = Some([report.deficit, lhs - constant * norm2 * norm2]);
    }
    Ok(report)
}

/// Onofri–Beckner deficit
/// `(1/(2n!)) ⨍ f P_n f − log ⨍ e^{f−f̄}` for the critical operator
/// `P_n` with multipliers `Γ(l+n)/Γ(l) = (l)_n`.
pub fn beckner_deficit(f: &ZonalFunction, m: usize) -> Result<DeficitReport> {
    let geometry = f.geometry;
    let n = geometry.n as f64;
    let n_factorial = gamma_signed(n + 1.0).to_real();
    let energy: f64 = (0..=f.degree())
        .map(|l| pochhammer(l as f64, geometry.n) * f.mode_l2(l))
        .sum();
    let lhs = energy / (2.0 * n_factorial * geometry.volume());

    let grid = geometry.grid(m)?;
    let values = synthesize(f, &grid);
    let mean = f.mean();
    // log-sum-exp shift guards the exponential against overflow
    let peak = values
        .iter()
        .fold(f64::NEG_INFINITY, |acc, &v| acc.max(v - mean));
    let shifted: Vec<f64> = values.iter().map(|&v| (v - mean - peak).exp()).collect();
    let rhs = peak + (integrate(&shifted, &grid, geometry) / geometry.volume()).ln();

    Ok(DeficitReport::new(lhs, rhs, geometry, n / 2.0, m, f.degree()))
}

/// Sharp reverse-HLS constant
/// `π^{−λ/2} Γ((n+λ)/2)/Γ(n+λ/2) (Γ(n)/Γ(n/2))^{1+λ/n}`.
pub fn reverse_hls_constant(geometry: SphereGeometry, lambda: f64) -> f64 {
    let n = geometry.n as f64;
    let log = -0.5 * lambda * PI.ln() + gamma_signed((n + lambda) / 2.0).log_mag
        - gamma_signed(n + lambda / 2.0).log_mag
        + (1.0 + lambda / n) * (gamma_signed(n).log_mag - gamma_signed(n / 2.0).log_mag);
    log.exp()
}

/// Reverse HLS pairing
/// `∬ f(ξ) g(η) |ξ−η|^λ dV dV − C_{n,λ} ‖f‖_{2n/(2n+λ)} ‖g‖_{2n/(2n+λ)}`.
///
/// The double integral is evaluated spectrally: `Σ_l λ_l ∫ Y_l(f) Y_l(g)`
/// with `λ_l` the Funk–Hecke eigenvalues of the chord kernel at
/// `γ = (n+λ)/2`, reusing the verified eigenvalue path instead of an
/// O(M²) 2D quadrature.
pub fn reverse_hls_ratio(
    f: &ZonalFunction,
    g: &ZonalFunction,
    lambda: f64,
    m: usize,
) -> Result<DeficitReport> {
    if lambda <= 0.0 {
        return Err(Error::Domain(format!(
            "reverse HLS needs lambda > 0, got {lambda}"
        )));
    }
    let geometry = f.geometry;
    let n = geometry.n as f64;
    let gamma_eq = (n + lambda) / 2.0;
    let degree = f.degree().max(g.degree());
    let quad_m = (degree / 2 + 16).max(48);
    let lhs: f64 = (0..=degree)
        .map(|l| {
            let lam = chord_kernel_eigenvalue(gamma_eq, l, geometry, quad_m)?;
            let fa = f.coeffs.get(l).copied().unwrap_or(0.0);
            let gb = g.coeffs.get(l).copied().unwrap_or(0.0);
            Ok(lam * fa * gb * geometry.basis_norm(l))
        })
        .sum::<Result<f64>>()?;

    let p = 2.0 * n / (2.0 * n + lambda);
    let norm_p = |h: &ZonalFunction, grid_m: usize| -> Result<f64> {
        let grid = geometry.grid(grid_m)?;
        crate::zonal::lp_norm(&synthesize(h, &grid), &grid, geometry, p)
    };
    let rhs = reverse_hls_constant(geometry, lambda) * norm_p(f, m)? * norm_p(g, m)?;
    let mut report = DeficitReport::new(lhs, rhs, geometry, gamma_eq, m, degree);
    let rhs2 = reverse_hls_constant(geometry, lambda) * norm_p(f, 2 * m)? * norm_p(g, 2 * m)?;
    report.refinement = Some([report.deficit, lhs - rhs2]);
    Ok(report)
}

/// Quadratic forms of the duality lemma for `γ ∈ (n/2, n/2+1)`.
#[derive(Debug, Clone, serde::Serialize)]
pub struct DualityReport {
    /// `(∫ f g)² − ∫f(−P)f · ∫g(−P⁻¹)g ≥ 0`.
    pub report: DeficitReport,
    /// `a_f − |𝐚|² = ∫ f (−P_2γ) f`.
    pub f_form: f64,
    /// `b_g − |𝐛|² = ∫ g (−P⁻¹_2γ) g`.
    pub g_form: f64,
    /// `∫ f g`.
    pub mixed: f64,
    /// Residual of the decomposition identity
    /// `(a_f−|𝐚|²)(b_g−|𝐛|²) − (√(a_f b_g) − |𝐚||𝐛|)² + (|𝐚|√b_g − |𝐛|√a_f)²`.
    pub decomposition_residual: f64,
}

/// Duality gap `(∫fg)² − ∫f(−P_2γ)f ∫g(−P⁻¹_2γ)g` for positive `f`, `g`
/// and `γ ∈ (n/2, n/2+1)`; equality holds exactly at `f = −c P⁻¹_2γ g`.
pub fn duality_gap(
    f: &ZonalFunction,
    g: &ZonalFunction,
    gamma: f64,
    m: usize,
) -> Result<DualityReport> {
    let geometry = f.geometry;
    let n = geometry.n as f64;
    if gamma <= n / 2.0 || gamma >= n / 2.0 + 1.0 {
        return Err(Error::UnsupportedGamma(
            gamma,
            "duality lemma needs gamma in (n/2, n/2+1)".into(),
        ));
    }
    for (name, h) in [("f", f), ("g", g)] {
        let grid = geometry.grid(m)?;
        if synthesize(h, &grid).iter().any(|&v| v <= 0.0) {
            return Err(Error::NonPositiveValue(format!("{name} must be positive")));
        }
    }
    let degree = f.degree().max(g.degree());
    let spec = gjms_spectrum(geometry, gamma, degree)?;

    // a_f = −m_0 ∫|Y_0(f)|², |𝐚|² = Σ_{l≥1} m_l ∫|Y_l(f)|²  (m_0 < 0, m_l > 0)
    let a_f = -spec.multipliers[0] * f.mode_l2(0);
    let a_vec_sq: f64 = (1..=f.degree())
        .map(|l| spec.multipliers[l] * f.mode_l2(l))
        .sum();
    let b_g = -(1.0 / spec.multipliers[0]) * g.mode_l2(0);
    let b_vec_sq: f64 = (1..=g.degree())
        .map(|l| (1.0 / spec.multipliers[l]) * g.mode_l2(l))
        .sum();

    let f_form = a_f - a_vec_sq;
    let g_form = b_g - b_vec_sq;
    let mixed: f64 = (0..=degree)
        .map(|l| {
            f.coeffs.get(l).copied().unwrap_or(0.0)
                * g.coeffs.get(l).copied().unwrap_or(0.0)
                * geometry.basis_norm(l)
        })
        .sum();

    let lhs = mixed * mixed;
    let rhs = f_form * g_form;
    let report = DeficitReport::new(lhs, rhs, geometry, gamma, m, degree);

    let cross = (a_f * b_g).sqrt() - (a_vec_sq * b_vec_sq).sqrt();
    let decomposition_residual = f_form * g_form - cross * cross
        + ((a_vec_sq.sqrt() * b_g.sqrt()) - (b_vec_sq.sqrt() * a_f.sqrt())).powi(2);

    Ok(DualityReport {
        report,
        f_form,
        g_form,
        mixed,
        decomposition_residual,
    })
}

/// Stability decomposition of the reverse Sobolev inequality for
/// `γ ∈ (n/2+1, n/2+2)`.
#[derive(Debug, Clone, serde::Serialize)]
pub struct StabilityReport {
    /// Sobolev deficit of `f`.
    pub deficit: f64,
    /// `a_2γ(f_φ − f̄_φ) = Σ_{l≥2} m_l ∫|Y_l(f_φ)|² ≥ 0`.
    pub lower_bound: f64,
    /// The same quantity through the conformal-invariance route
    /// `a_2γ(f − c (det dφ⁻¹)^{(n−2γ)/(2n)})`.
    pub lower_bound_pushforward: f64,
    /// Möbius parameter of the center-of-mass normalization.
    pub a_star: f64,
    /// Mean `c = f̄_φ` of the normalized pushforward.
    pub c: f64,
    /// Center-of-mass residual after normalization.
    pub residual_mode1: f64,
}

/// Runs the center-of-mass normalization and evaluates both sides of the
/// stability chain `deficit ≥ a_2γ(f_φ − f̄_φ) ≥ 0`.
pub fn stability_bound(f: &ZonalFunction, gamma: f64, m: usize) -> Result<StabilityReport> {
    let geometry = f.geometry;
    let n = geometry.n as f64;
    if gamma <= n / 2.0 + 1.0 || gamma >= n / 2.0 + 2.0 {
        return Err(Error::UnsupportedGamma(
            gamma,
            "stability bound needs gamma in (n/2+1, n/2+2)".into(),
        ));
    }
    let deficit = sobolev_deficit(f, gamma, m)?.deficit;
    let norm = normalize_center_of_mass(f, gamma)?;
    let f_phi = &norm.f_norm;
    let spec = gjms_spectrum(geometry, gamma, f_phi.degree())?;
    let lower_bound: f64 = (2..=f_phi.degree())
        .map(|l| spec.multipliers[l] * f_phi.mode_l2(l))
        .sum();

    // Route 2: a_2γ(f − c (det dφ⁻¹)^{(n−2γ)/(2n)}) with c = f̄_φ
    let c = f_phi.mean();
    let profile = extremal_profile(-norm.a_star, gamma, geometry, f.degree())?;
    let diff = f.sub(&profile.scale(c));
    let lower_bound_pushforward = conformal_energy(&diff, gamma)?;

    Ok(StabilityReport {
        deficit,
        lower_bound,
        lower_bound_pushforward,
        a_star: norm.a_star,
        c,
        residual_mode1: norm.residual,
    })
}

/// `a_2γ(f) ≥ 0` check for nonnegative `f` attaining zero (where the
/// critical norm degenerates to 0 and the sharp inequality collapses to
/// plain nonnegativity of the energy).
pub fn nonneg_energy_check(f: &ZonalFunction, gamma: f64, m: usize) -> Result<DeficitReport> {
    let geometry = f.geometry;
    let grid = geometry.grid(m)?;
    let values = synthesize(f, &grid);
    let min = values.iter().cloned().fold(f64::INFINITY, f64::min);
    if min < -1e-9 {
        return Err(Error::NonPositiveValue(format!(
            "nonneg_energy_check needs f >= 0, found min {min}"
        )));
    }
    let lhs = conformal_energy(f, gamma)?;
    Ok(DeficitReport::new(lhs, 0.0, geometry, gamma, m, f.degree()))
}

/// Outcome of the counterexample search for `γ > n/2 + 2`.
#[derive(Debug, Clone, serde::Serialize)]
pub struct SearchReport {
    pub report: DeficitReport,
    pub coeffs: Vec<f64>,
    /// Negative deficit confirmed at grid sizes M and 2M.
    pub certified: bool,
    pub evaluations: usize,
}

/// Best-effort search for a positive `f` violating the reverse Sobolev
/// inequality in the range `γ ∈ (n/2+2, ∞) ∖ (n/2+ℕ)` where violations
/// are known to exist. Random restarts plus coordinate descent over
/// band-limited coefficients, projected to positivity by flooring values
/// at `1e-6 · max`.
pub fn counterexample_search(
    gamma: f64,
    geometry: SphereGeometry,
    budget: usize,
    rng: &mut impl Rng,
) -> Result<SearchReport> {
    let n = geometry.n as f64;
    let excess = gamma - n / 2.0;
    if (excess - excess.round()).abs() < 1e-9 && excess.round() > 0.0 {
        return Err(Error::UnsupportedGamma(
            gamma,
            "resonant gamma in n/2 + N: the reverse inequality holds there".into(),
        ));
    }
    if excess <= 2.0 {
        return Err(Error::UnsupportedGamma(
            gamma,
            "gamma <= n/2 + 2 is covered by the reverse Sobolev inequality".into(),
        ));
    }

    const DEGREE: usize = 12;
    let m = DEFAULT_GRID;
    let mut evaluations = 0usize;
    let mut best: Option<(f64, Vec<f64>)> = None;

    // `sobolev_deficit` refuses this γ range by design; evaluate the raw
    // deficit directly.
    let raw_deficit = |f: &ZonalFunction, grid_m: usize| -> Result<f64> {
        let lhs = conformal_energy(f, gamma)?;
        let norm = critical_norm(f, gamma, grid_m)?;
        Ok(lhs - sharp_constant(geometry, gamma)? * norm * norm)
    };
    let evaluate = |coeffs: &[f64], evaluations: &mut usize| -> Result<f64> {
        *evaluations += 1;
        let f = project_positive(&ZonalFunction::new(geometry, coeffs.to_vec()))?;
        raw_deficit(&f, m)
    };

    // seeds: constants perturbed along each negative-multiplier mode, then
    // random restarts with coordinate descent
    let spec = gjms_spectrum(geometry, gamma, DEGREE)?;
    let mut seeds: Vec<Vec<f64>> = Vec::new();
    for l in 2..=DEGREE {
        if spec.multipliers[l] < 0.0 {
            for amp in [0.02, 0.1] {
                let mut c = vec![0.0; DEGREE + 1];
                c[0] = 1.0;
                c[l] = amp / geometry.basis_eval(l, 1.0).abs().max(1.0);
                seeds.push(c);
            }
        }
    }
    while seeds.len() < 8 {
        let c: Vec<f64> = std::iter::once(1.0)
            .chain((1..=DEGREE).map(|l| {
                rng.gen_range(-0.15..0.15) / geometry.basis_eval(l, 1.0).abs().max(1.0)
            }))
            .collect();
        seeds.push(c);
    }

    'seeds: for seed in seeds {
        if evaluations >= budget {
            break;
        }
        let mut coeffs = seed;
        let mut current = evaluate(&coeffs, &mut evaluations)?;
        if best.as_ref().map_or(true, |(b, _)| current < *b) {
            best = Some((current, coeffs.clone()));
        }
        // coordinate descent with shrinking steps
        let mut step = 0.05;
        for _ in 0..6 {
            for l in 0..=DEGREE {
                for dir in [-1.0, 1.0] {
                    if evaluations >= budget {
                        break 'seeds;
                    }
                    let mut trial = coeffs.clone();
                    trial[l] += dir * step / geometry.basis_eval(l.max(1), 1.0).abs().max(1.0);
                    let d = evaluate(&trial, &mut evaluations)?;
                    if d < current {
                        current = d;
                        coeffs = trial;
                        if best.as_ref().map_or(true, |(b, _)| current < *b) {
                            best = Some((current, coeffs.clone()));
                        }
                    }
                }
            }
            step *= 0.5;
        }
        if let Some((b, _)) = &best {
            if *b < 0.0 {
                break;
            }
        }
    }

    let (best_deficit, best_coeffs) = best.ok_or(Error::BudgetExhausted { best: f64::NAN })?;
    if best_deficit >= 0.0 {
        return Err(Error::BudgetExhausted { best: best_deficit });
    }
    let f = project_positive(&ZonalFunction::new(geometry, best_coeffs.clone()))?;
    let coarse = raw_deficit(&f, m)?;
    let fine = raw_deficit(&f, 2 * m)?;
    let certified =
        coarse < 0.0 && fine < 0.0 && (coarse - fine).abs() < 0.1 * coarse.abs();
    let lhs = conformal_energy(&f, gamma)?;
    let mut report = DeficitReport::new(lhs, lhs - coarse, geometry, gamma, m, DEGREE);
    report.refinement = Some([coarse, fine]);
    Ok(SearchReport {
        report,
        coeffs: best_coeffs,
        certified,
        evaluations,
    })
}

/// Floor the function values at `1e-6 · max` and re-analyze, preserving the
/// positivity hypothesis of the reverse inequalities.
fn project_positive(f: &ZonalFunction) -> Result<ZonalFunction> {
    let geometry = f.geometry;
    let grid = geometry.grid((4 * f.degree() + 4).max(DEFAULT_GRID))?;
    let values = synthesize(f, &grid);
    let max = values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let floor = 1e-6 * max.max(1e-12);
    if values.iter().all(|&v| v >= floor) {
        return Ok(f.clone());
    }
    let clipped: Vec<f64> = values.iter().map(|&v| v.max(floor)).collect();
    analyze(&clipped, &grid, geometry, f.degree())
}

/// Random positive band-limited test function: `1 + Σ_l u_l B_l` with the
/// amplitudes scaled by `1/B_l(1)` so positivity is kept by construction.
pub fn random_positive(
    geometry: SphereGeometry,
    degree: usize,
    active_modes: usize,
    amplitude: f64,
    rng: &mut impl Rng,
) -> ZonalFunction {
    let mut coeffs = vec![0.0; degree + 1];
    coeffs[0] = rng.gen_range(0.8..1.6);
    let per_mode = amplitude / active_modes.max(1) as f64;
    for l in 1..=active_modes.min(degree) {
        let cap = geometry.basis_eval(l, 1.0).abs().max(1.0);
        coeffs[l] = rng.gen_range(-per_mode..per_mode) / cap;
    }
    ZonalFunction::new(geometry, coeffs)
}
