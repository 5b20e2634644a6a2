//! The Poisson problem `−Δ₊u − s(n−s)u = 0`, `ρ0^{s−n}u → f`, on the
//! Poincaré ball, with `s = n/2 + γ`.
//!
//! Two independent solution routes are implemented: the explicit integral
//! kernel `((1−|x|²)/|x−ξ|²)^s` and the hypergeometric mode series. The
//! two-branch ρ-expansion of the mode solutions carries the whole
//! boundary-operator calculus, and its second indicial branch defines the
//! scattering operator `S(s) = c_γ^{-1} P_2γ`.

use crate::specfun::{gamma_signed, hyp2f1, hyp2f1_series_coefficients, is_nonpositive_integer};
use crate::zonal::{SphereGeometry, ZonalFunction};
use crate::{Error, Result};
use std::f64::consts::PI;

/// Point of the open unit ball in zonal coordinates: radius `r` and the
/// latitude `t` of `x/|x|` against the north-pole axis.
#[derive(Debug, Clone, Copy)]
pub struct BallPoint {
    pub r: f64,
    pub t: f64,
}

impl BallPoint {
    pub fn new(r: f64, t: f64) -> Self {
        assert!((0.0..1.0).contains(&r), "r must lie in [0, 1)");
        assert!((-1.0..=1.0).contains(&t), "t must lie in [-1, 1]");
        BallPoint { r, t }
    }

    /// Geodesic normal defining function `ρ = 2(1−r)/(1+r) ∈ (0, 2]`.
    pub fn rho(&self) -> f64 {
        2.0 * (1.0 - self.r) / (1.0 + self.r)
    }

    /// Flat defining function `ρ0 = (1−r²)/2`.
    pub fn rho0(&self) -> f64 {
        (1.0 - self.r * self.r) / 2.0
    }

    /// Radius with a given geodesic defining-function value.
    pub fn from_rho(rho: f64, t: f64) -> Self {
        BallPoint::new((2.0 - rho) / (2.0 + rho), t)
    }
}

/// Scattering-parameter solution data: boundary value `f` and order γ.
#[derive(Debug, Clone)]
pub struct PoissonSolution {
    pub boundary: ZonalFunction,
    pub gamma: f64,
}

impl PoissonSolution {
    pub fn new(boundary: ZonalFunction, gamma: f64) -> Self {
        PoissonSolution { boundary, gamma }
    }

    pub fn s(&self) -> f64 {
        self.boundary.geometry.n as f64 / 2.0 + self.gamma
    }
}

/// Normalized mode profile
/// `φ_l(z) = Γ(γ+1/2)Γ(l+γ+n/2)/(Γ(2γ)Γ(l+(n+1)/2)) F(l+n/2−γ, 1/2−γ; l+(n+1)/2; z)`
/// with `φ_l(1) = 1`.
pub fn mode_profile(l: usize, gamma: f64, geometry: SphereGeometry, z: f64) -> Result<f64> {
    let n = geometry.n as f64;
    let lf = l as f64;
    let prefactor = gamma_signed(gamma + 0.5)
        .mul(gamma_signed(lf + gamma + n / 2.0))
        .div(gamma_signed(2.0 * gamma))
        .div(gamma_signed(lf + (n + 1.0) / 2.0))
        .to_real();
    Ok(prefactor * hyp2f1(lf + n / 2.0 - gamma, 0.5 - gamma, lf + (n + 1.0) / 2.0, z)?)
}

/// Series evaluation `u = ρ0^{n−s} Σ_l φ_l(r²) r^l a_l B_l(t)`, truncated
/// when a term drops below `1e-16` of the running maximum.
pub fn poisson_eval_series(sol: &PoissonSolution, p: BallPoint) -> Result<f64> {
    let geometry = sol.boundary.geometry;
    let s = sol.s();
    let z = p.r * p.r;
    let mut sum = 0.0f64;
    let mut peak = 0.0f64;
    for (l, &a) in sol.boundary.coeffs.iter().enumerate() {
        if a == 0.0 {
            continue;
        }
        // truncation watches the t-independent mode amplitude, so a basis
        // zero at this particular latitude cannot cut the series short
        let amp = a * mode_profile(l, sol.gamma, geometry, z)? * p.r.powi(l as i32);
        sum += amp * geometry.basis_eval(l, p.t);
        peak = peak.max(amp.abs());
        if l > 0 && amp.abs() < 1e-16 * peak {
            break;
        }
    }
    Ok(p.rho0().powf(geometry.n as f64 - s) * sum)
}

/// Integral evaluation through the explicit kernel. For zonal data the
/// solution is assembled mode by mode: the radial factor of mode l is the
/// axis integral
/// `k_l(r) = pre(s) |S^{n-1}| ∫ ((1−r²)/(1+r²−2rτ))^s B_l(τ) w(τ) dτ / B_l(1)`,
/// which keeps every quadrature one-dimensional.
pub fn poisson_eval_integral(
    sol: &PoissonSolution,
    p: BallPoint,
    m: usize,
) -> Result<f64> {
    let geometry = sol.boundary.geometry;
    if p.r > 0.99 {
        return Err(Error::Domain(format!(
            "integral route is unstable for r = {} > 0.99; use the series",
            p.r
        )));
    }
    let s = sol.s();
    let n = geometry.n as f64;
    let prefactor = (-(n / 2.0) * PI.ln() - s * 2.0f64.ln() + gamma_signed(n / 2.0 + sol.gamma).log_mag
        - gamma_signed(sol.gamma).log_mag)
        .exp();
    let grid = geometry.grid(m)?;
    let kernel = |tau: f64| -> f64 {
        ((1.0 - p.r * p.r) / (1.0 + p.r * p.r - 2.0 * p.r * tau)).powf(s)
    };
    let mut total = 0.0;
    for (l, &a) in sol.boundary.coeffs.iter().enumerate() {
        if a == 0.0 {
            continue;
        }
        let inner = grid.integrate_fn(|tau| kernel(tau) * geometry.basis_eval(l, tau));
        let k_l = prefactor * geometry.boundary_volume() * inner / geometry.basis_eval(l, 1.0);
        total += a * k_l * geometry.basis_eval(l, p.t);
    }
    Ok(total)
}

/// Closed form of `u(0)` for `f ≡ 1` through the series route,
/// `2^{s−n} Γ(γ+1/2) Γ(n/2+γ) / (Γ(2γ) Γ((n+1)/2))`; must agree with the
/// integral route by the duplication formula.
pub fn center_value_series(geometry: SphereGeometry, gamma: f64) -> f64 {
    let n = geometry.n as f64;
    let s = n / 2.0 + gamma;
    ((s - n) * 2.0f64.ln() + gamma_signed(gamma + 0.5).log_mag
        + gamma_signed(n / 2.0 + gamma).log_mag
        - gamma_signed(2.0 * gamma).log_mag
        - gamma_signed((n + 1.0) / 2.0).log_mag)
        .exp()
}

/// `u(0)` for `f ≡ 1` through the integral route,
/// `π^{−n/2} 2^{−s} Γ(n/2+γ)/Γ(γ) |S^n|`.
pub fn center_value_integral(geometry: SphereGeometry, gamma: f64) -> f64 {
    let n = geometry.n as f64;
    let s = n / 2.0 + gamma;
    (-(n / 2.0) * PI.ln() - s * 2.0f64.ln() + gamma_signed(n / 2.0 + gamma).log_mag
        - gamma_signed(gamma).log_mag)
        .exp()
        * geometry.volume()
}

/// Two-branch ρ-expansion of the mode-l solution of
/// `(Δ̃₊ − γ'²)(ρ^{n/2−γ'} ...) = 0`: scalar coefficient sequences of
/// `ρ^{n/2−γ'+2m}` (branch 1, leading coefficient 1) and
/// `ρ^{n/2+γ'+2m}` (branch 2, leading coefficient
/// `c_{γ'}^{-1} Γ(l+n/2+γ')/Γ(l+n/2−γ')`).
#[derive(Debug, Clone)]
pub struct ModeJet {
    pub l: usize,
    pub gamma_prime: f64,
    pub n: usize,
    /// Coefficients of `ρ^{n/2−γ'+2m}`, `m = 0..=order`.
    pub branch1: Vec<f64>,
    /// Coefficients of `ρ^{n/2+γ'+2m}`.
    pub branch2: Vec<f64>,
}

/// Build the mode-l extension jet to the given order in ρ².
///
/// Branch 1 carries `(1−ρ²/4)^l F(l+n/2−γ', l+n/2; 1−γ'; ρ²/4)`, branch 2
/// carries `c_{γ'}^{-1} Γ(l+n/2+γ')/Γ(l+n/2−γ')` times
/// `(1−ρ²/4)^l F(l+n/2+γ', l+n/2; 1+γ'; ρ²/4)`.
pub fn extension_jet(
    l: usize,
    gamma_prime: f64,
    geometry: SphereGeometry,
    order: usize,
) -> Result<ModeJet> {
    if (gamma_prime - gamma_prime.round()).abs() < 1e-9 {
        return Err(Error::IntegerGamma(gamma_prime));
    }
    let n = geometry.n as f64;
    let lf = l as f64;
    let branch1 = jet_series(lf + n / 2.0 - gamma_prime, lf + n / 2.0, 1.0 - gamma_prime, l, order)?;
    let scale = scattering_multiplier(geometry.n, gamma_prime, l)?;
    let mut branch2 = jet_series(lf + n / 2.0 + gamma_prime, lf + n / 2.0, 1.0 + gamma_prime, l, order)?;
    for c in &mut branch2 {
        *c *= scale;
    }
    Ok(ModeJet {
        l,
        gamma_prime,
        n: geometry.n,
        branch1,
        branch2,
    })
}

/// ρ²-coefficients of `(1−z)^l F(a,b;c;z)` at `z = ρ²/4`: the binomial and
/// hypergeometric series are convolved exactly and the `4^{-m}` from
/// `z^m = ρ^{2m}/4^m` is folded in.
fn jet_series(a: f64, b: f64, c: f64, l: usize, order: usize) -> Result<Vec<f64>> {
    let f_coeffs = hyp2f1_series_coefficients(a, b, c, order + 1)?;
    let mut out = vec![0.0; order + 1];
    for (m, slot) in out.iter_mut().enumerate() {
        let mut acc = 0.0;
        // binomial (1−z)^l term j paired with series term m−j
        for j in 0..=m.min(l) {
            let binom = binomial(l, j);
            acc += (if j % 2 == 0 { 1.0 } else { -1.0 }) * binom * f_coeffs[m - j];
        }
        *slot = acc / 4.0f64.powi(m as i32);
    }
    Ok(out)
}

fn binomial(n: usize, k: usize) -> f64 {
    let mut acc = 1.0f64;
    for i in 0..k {
        acc = acc * (n - i) as f64 / (i + 1) as f64;
    }
    acc
}

/// Mode multiplier of the scattering operator,
/// `c_γ^{-1} Γ(l+n/2+γ)/Γ(l+n/2−γ)` with `c_γ = 2^{2γ} Γ(γ)/Γ(−γ)`.
pub fn scattering_multiplier(n: usize, gamma: f64, l: usize) -> Result<f64> {
    if is_nonpositive_integer(-gamma) || is_nonpositive_integer(gamma) {
        return Err(Error::IntegerGamma(gamma));
    }
    let c_inv = gamma_signed(-gamma)
        .div(gamma_signed(gamma))
        .mul(crate::specfun::SignedLogValue {
            sign: 1,
            log_mag: -2.0 * gamma * 2.0f64.ln(),
        });
    let ratio = crate::specfun::gamma_ratio(
        l as f64 + n as f64 / 2.0 + gamma,
        l as f64 + n as f64 / 2.0 - gamma,
    )?;
    Ok(c_inv.mul(ratio).to_real())
}

/// `S(s) f = c_γ^{-1} P_2γ f` applied spectrally.
pub fn scattering_apply(f: &ZonalFunction, gamma: f64) -> Result<ZonalFunction> {
    let coeffs = f
        .coeffs
        .iter()
        .enumerate()
        .map(|(l, &a)| Ok(a * scattering_multiplier(f.geometry.n, gamma, l)?))
        .collect::<Result<Vec<_>>>()?;
    Ok(ZonalFunction::new(f.geometry, coeffs))
}

/// The hyperbolic Laplacian applied to a zonal function `u(r,t)` by central
/// finite differences:
/// `Δ₊ = ((1−r²)/4)[(1−r²)(∂_rr + (n/r)∂_r + r^{-2}Δ_{S^n}) + 2(n−1) r ∂_r]`
/// with `Δ_{S^n}u = (1−t²)u_tt − n t u_t` on zonal functions.
pub fn hyperbolic_laplacian_fd(
    u: &impl Fn(f64, f64) -> f64,
    r: f64,
    t: f64,
    n: usize,
    h: f64,
) -> f64 {
    let nf = n as f64;
    let u0 = u(r, t);
    let ur = (u(r + h, t) - u(r - h, t)) / (2.0 * h);
    let urr = (u(r + h, t) - 2.0 * u0 + u(r - h, t)) / (h * h);
    let ut = (u(r, t + h) - u(r, t - h)) / (2.0 * h);
    let utt = (u(r, t + h) - 2.0 * u0 + u(r, t - h)) / (h * h);
    let sphere = (1.0 - t * t) * utt - nf * t * ut;
    let euclid = urr + nf / r * ur + sphere / (r * r);
    let w = 1.0 - r * r;
    w / 4.0 * (w * euclid + 2.0 * (nf - 1.0) * r * ur)
}
