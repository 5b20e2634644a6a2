//! Closed-form radial atoms `ρ^a (1−ρ²/4)^c B_l(t)` on the ball.
//!
//! The family with fixed `(a, l)` and descending `(1−ρ²/4)`-exponents is
//! closed under `Δ̃₊`, so polyharmonic energies of atoms reduce to exact
//! Beta integrals. Atoms are the global test functions behind the
//! Green-identity and Hardy quadrature checks and the interior term of the
//! energy inequality.

use super::coeffs::BoundaryCoefficients;
use crate::inequalities::DeficitReport;
use crate::specfun::{gauss_gegenbauer_rule, ln_gamma};
use crate::zonal::SphereGeometry;
use crate::{Error, Result};

/// `Σ_k coeffs[k] ρ^a (1−ρ²/4)^{c_top−k} B_l(t)`.
#[derive(Debug, Clone)]
pub struct RadialAtom {
    pub geometry: SphereGeometry,
    pub l: usize,
    pub a: f64,
    pub c_top: f64,
    pub coeffs: Vec<f64>,
}

impl RadialAtom {
    pub fn new(geometry: SphereGeometry, l: usize, a: f64, c: f64) -> Self {
        RadialAtom {
            geometry,
            l,
            a,
            c_top: c,
            coeffs: vec![1.0],
        }
    }

    pub fn scale(&self, s: f64) -> Self {
        RadialAtom {
            coeffs: self.coeffs.iter().map(|c| c * s).collect(),
            ..self.clone()
        }
    }

    fn add_term(&mut self, c_exp: f64, value: f64) {
        let k = (self.c_top - c_exp).round() as i64;
        debug_assert!((self.c_top - c_exp - k as f64).abs() < 1e-9);
        debug_assert!(k >= 0);
        let k = k as usize;
        if self.coeffs.len() <= k {
            self.coeffs.resize(k + 1, 0.0);
        }
        self.coeffs[k] += value;
    }

    pub fn eval(&self, rho: f64, t: f64) -> f64 {
        let y = rho * rho / 4.0;
        let radial: f64 = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(k, &c)| c * (1.0 - y).powf(self.c_top - k as f64))
            .sum();
        rho.powf(self.a) * radial * self.geometry.basis_eval(self.l, t)
    }

    pub fn eval_radial(&self, rho: f64) -> f64 {
        let y = rho * rho / 4.0;
        rho.powf(self.a)
            * self
                .coeffs
                .iter()
                .enumerate()
                .map(|(k, &c)| c * (1.0 - y).powf(self.c_top - k as f64))
                .sum::<f64>()
    }

    /// `∂_ρ` of the radial part, for the Green boundary term.
    pub fn eval_radial_derivative(&self, rho: f64) -> f64 {
        let y = rho * rho / 4.0;
        let mut total = 0.0;
        for (k, &coef) in self.coeffs.iter().enumerate() {
            let c = self.c_top - k as f64;
            total += coef
                * (self.a * rho.powf(self.a - 1.0) * (1.0 - y).powf(c)
                    - rho.powf(self.a + 1.0) * c / 2.0 * (1.0 - y).powf(c - 1.0));
        }
        total
    }

    /// Exact `Δ̃₊` on the atom: stays in the same `(a, l)` family with the
    /// `(1−y)`-exponent range extended down by 2.
    pub fn delta_tilde(&self) -> Self {
        let n = self.geometry.n as f64;
        let lam = self.l as f64 * (self.l as f64 + n - 1.0);
        let a = self.a;
        let mut out = RadialAtom {
            geometry: self.geometry,
            l: self.l,
            a,
            c_top: self.c_top,
            coeffs: vec![0.0],
        };
        for (k, &coef) in self.coeffs.iter().enumerate() {
            if coef == 0.0 {
                continue;
            }
            let c = self.c_top - k as f64;
            // collected coefficients of (1−y)^{c−2}, (1−y)^{c−1}, (1−y)^{c}
            let low = 4.0 * c * (n + c - 1.0) - 4.0 * lam;
            let mid = -2.0 * c * (a - n) - 2.0 * (n + c - 1.0) * (a + 4.0 * c)
                - 2.0 * (a + 2.0 * c)
                + 4.0 * lam;
            let high = (a + 2.0 * c) * (a + n + 2.0 * c) + n * n / 4.0;
            out.add_term(c - 2.0, coef * low);
            out.add_term(c - 1.0, coef * mid);
            out.add_term(c, coef * high);
        }
        out
    }

    fn add_atom(&mut self, other: &Self) {
        debug_assert_eq!(self.l, other.l);
        debug_assert!((self.a - other.a).abs() < 1e-12);
        for (k, &c) in other.coeffs.iter().enumerate() {
            self.add_term(other.c_top - k as f64, c);
        }
    }

    /// `L⁺_{2k} = Π_{j=0}^{⌊γ⌋} ((γ−2j)² − Δ̃₊)` applied to the atom.
    pub fn l_plus(&self, gamma: f64) -> Self {
        let floor = gamma.floor() as usize;
        let mut acc = self.clone();
        for j in 0..=floor {
            let shift = (gamma - 2.0 * j as f64).powi(2);
            let mut next = acc.delta_tilde().scale(-1.0);
            next.add_atom(&acc.scale(shift));
            acc = next;
        }
        acc
    }
}

/// `∫₀² ρ^p (1−ρ²/4)^q dρ = 2^p B((p+1)/2, q+1)`.
fn rho_beta_integral(p: f64, q: f64) -> Result<f64> {
    if p <= -1.0 || q <= -1.0 {
        return Err(Error::KernelSingularity(format!(
            "rho integral diverges: exponents ({p}, {q})"
        )));
    }
    Ok((p * 2.0f64.ln() + ln_gamma((p + 1.0) / 2.0) + ln_gamma(q + 1.0)
        - ln_gamma((p + 1.0) / 2.0 + q + 1.0))
    .exp())
}

/// Exact `∫ X Y dV_{g_𝔹}` for atoms with the same mode l:
/// `basis_norm(l) Σ_{jk} x_j y_k ∫ ρ^{a_x+a_y−n−1} (1−y)^{c_j+c_k+n} dρ`.
pub fn pair_integral(x: &RadialAtom, y: &RadialAtom) -> Result<f64> {
    if x.l != y.l {
        return Ok(0.0);
    }
    let n = x.geometry.n as f64;
    let p = x.a + y.a - n - 1.0;
    let mut total = 0.0;
    for (j, &cx) in x.coeffs.iter().enumerate() {
        for (k, &cy) in y.coeffs.iter().enumerate() {
            if cx == 0.0 || cy == 0.0 {
                continue;
            }
            let q = (x.c_top - j as f64) + (y.c_top - k as f64) + n;
            total += cx * cy * rho_beta_integral(p, q)?;
        }
    }
    Ok(total * x.geometry.basis_norm(x.l))
}

/// Exact interior energy `A₁ = ∫ X L⁺_{2k} X dV_{g_𝔹}` of an atom.
pub fn interior_energy(x: &RadialAtom, coeffs: &BoundaryCoefficients) -> Result<f64> {
    pair_integral(x, &x.l_plus(coeffs.gamma))
}

/// Composite Gauss–Legendre nodes on (0, 2], geometrically graded toward
/// the boundary ρ = 0 where the integrands have algebraic behavior.
fn graded_rho_cells(cells: usize, points_per_cell: usize) -> Vec<(f64, f64)> {
    let rule = gauss_gegenbauer_rule(0.5, points_per_cell).expect("legendre rule");
    let mut nodes = Vec::new();
    let mut right = 2.0f64;
    for i in 0..cells {
        let left = if i + 1 == cells { 0.0 } else { right / 2.0 };
        let half = (right - left) / 2.0;
        let mid = (right + left) / 2.0;
        for (&x, &w) in rule.nodes.iter().zip(&rule.weights) {
            nodes.push((mid + half * x, half * w));
        }
        right = left;
    }
    nodes
}

/// Green-type identity residual
/// `|∫(U Δ̃₊V − V Δ̃₊U) dV_{g_𝔹} + ∫_{S^n} ρ^{1−n}(U ∂_ρ V − V ∂_ρ U)|₀ dV|`,
/// the interior integral by graded 2D (ρ, t) quadrature and the boundary
/// term in closed form. Atoms with `a_U + a_V < n` make the boundary term
/// divergent and are rejected.
pub fn green_identity_check(u: &[RadialAtom], v: &[RadialAtom], cells: usize) -> Result<f64> {
    let geometry = u[0].geometry;
    let n = geometry.n as f64;

    // boundary term: only pairs with a_U + a_V = n contribute in the limit
    let mut boundary = 0.0;
    for x in u {
        for y in v {
            if x.l != y.l {
                continue;
            }
            let s = x.a + y.a;
            if s < n - 1e-9 {
                return Err(Error::KernelSingularity(format!(
                    "boundary term diverges: exponent sum {s} < n"
                )));
            }
            if (s - n).abs() < 1e-9 {
                let cx: f64 = x.coeffs.iter().sum();
                let cy: f64 = y.coeffs.iter().sum();
                boundary += (y.a - x.a) * cx * cy * geometry.basis_norm(x.l);
            }
        }
    }

    // interior by quadrature
    let du: Vec<RadialAtom> = u.iter().map(RadialAtom::delta_tilde).collect();
    let dv: Vec<RadialAtom> = v.iter().map(RadialAtom::delta_tilde).collect();
    let t_rule = geometry.grid(64)?;
    let rho_nodes = graded_rho_cells(cells, 24);
    let mut interior = 0.0;
    for &(rho, w_rho) in &rho_nodes {
        let y = rho * rho / 4.0;
        let measure = rho.powf(-(n + 1.0)) * (1.0 - y).powf(n);
        for (&t, &w_t) in t_rule.nodes.iter().zip(&t_rule.weights) {
            let uu: f64 = u.iter().map(|x| x.eval(rho, t)).sum();
            let vv: f64 = v.iter().map(|x| x.eval(rho, t)).sum();
            let duu: f64 = du.iter().map(|x| x.eval(rho, t)).sum();
            let dvv: f64 = dv.iter().map(|x| x.eval(rho, t)).sum();
            interior += w_rho * w_t * measure * (uu * dvv - vv * duu);
        }
    }
    interior *= geometry.boundary_volume();

    Ok((interior + boundary).abs())
}

/// Hardy-inequality deficit on the ball for `V = (1−r²)^p`:
/// `∫|∇V|² dx − ∫ V²/(1−|x|²)² dx ≥ 0` for `p > 1/2`. Both integrands
/// carry the endpoint factor `(1−r)^{2p−2}` with exponent in (−1, 0), so
/// it is absorbed into a Gauss–Jacobi weight on r ∈ [0, 1]; graded plain
/// rules cannot reach the tolerance for exponents near −1.
pub fn hardy_check(p: f64, geometry: SphereGeometry, points: usize) -> Result<DeficitReport> {
    if p <= 0.5 {
        return Err(Error::Domain(format!(
            "Hardy test function needs exponent > 1/2, got {p}"
        )));
    }
    let n1 = geometry.n as f64 + 1.0; // ambient dimension of the ball
    let beta = 2.0 * p - 2.0;
    let rule = crate::specfun::gauss_jacobi_rule(beta, 0.0, points)?;
    // ∫₀¹ (1−r)^β G(r) dr = 2^{−β−1} Σ w_i G((1+x_i)/2)
    let scale = 2.0f64.powf(-beta - 1.0);
    let mut lhs = 0.0;
    let mut rhs = 0.0;
    for (&x, &w) in rule.nodes.iter().zip(&rule.weights) {
        let r = (1.0 + x) / 2.0;
        let smooth = (1.0 + r).powf(beta) * r.powf(n1 - 1.0);
        lhs += w * scale * 4.0 * p * p * r * r * smooth;
        rhs += w * scale * smooth;
    }
    let volume = geometry.volume(); // |S^n| is the ball's boundary measure
    Ok(DeficitReport::new(
        volume * lhs,
        volume * rhs,
        geometry,
        p,
        points,
        0,
    ))
}
