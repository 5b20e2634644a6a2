//! Zonal (axially symmetric) function algebra on `S^n`.
//!
//! A zonal function depends only on the latitude `t = ξ·e` and expands in
//! the Gegenbauer basis `C_l^{(n−1)/2}` (Chebyshev `cos(l θ)` on the
//! circle). The canonical representation is spectral; grids are transient
//! views, since every operator downstream is a spectral multiplier.

use crate::specfun::{
    gauss_gegenbauer_rule, gegenbauer_eval, gegenbauer_norm, ln_gamma, QuadratureRule,
};
use crate::{Error, Result};
use std::f64::consts::PI;

/// Dimension-dependent constants of the round sphere `S^n`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SphereGeometry {
    pub n: usize,
}

impl SphereGeometry {
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "sphere dimension must be >= 1");
        SphereGeometry { n }
    }

    /// Gegenbauer index μ = (n−1)/2.
    pub fn mu(&self) -> f64 {
        (self.n as f64 - 1.0) / 2.0
    }

    /// `|S^n| = 2 π^{(n+1)/2} / Γ((n+1)/2)`.
    pub fn volume(&self) -> f64 {
        sphere_volume(self.n)
    }

    /// `|S^{n−1}|`; for n = 1 this is `|S^0| = 2`, which makes
    /// `∫_{S^n} F dV = |S^{n−1}| ∫ F(t) (1−t²)^{(n−2)/2} dt` uniform in n.
    pub fn boundary_volume(&self) -> f64 {
        sphere_volume(self.n - 1)
    }

    /// `∫_{S^n} B_l² dV` for the zonal basis function of degree l.
    pub fn basis_norm(&self, l: usize) -> f64 {
        if self.n == 1 {
            if l == 0 {
                2.0 * PI
            } else {
                PI
            }
        } else {
            self.boundary_volume() * gegenbauer_norm(l, self.mu())
        }
    }

    /// Latitude-weight orthogonality constant `∫ B_l² (1−t²)^{μ−1/2} dt`.
    fn latitude_norm(&self, l: usize) -> f64 {
        if self.n == 1 {
            if l == 0 {
                PI
            } else {
                PI / 2.0
            }
        } else {
            gegenbauer_norm(l, self.mu())
        }
    }

    /// Zonal basis value `B_l(t)`.
    pub fn basis_eval(&self, l: usize, t: f64) -> f64 {
        gegenbauer_eval(l, if self.n == 1 { 0.0 } else { self.mu() }, t)
    }

    /// Default latitude grid: the Gauss–Gegenbauer rule matching the sphere
    /// measure (the 512-point Chebyshev rule on the circle).
    pub fn grid(&self, m: usize) -> Result<QuadratureRule> {
        gauss_gegenbauer_rule(if self.n == 1 { 0.0 } else { self.mu() }, m)
    }
}

fn sphere_volume(n: usize) -> f64 {
    let nf = n as f64;
    (2.0f64.ln() + 0.5 * (nf + 1.0) * PI.ln() - ln_gamma((nf + 1.0) / 2.0)).exp()
}

/// Axially symmetric function on `S^n`, stored as basis coefficients
/// `f(t) = Σ_{l=0}^{L} a_l B_l(t)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ZonalFunction {
    pub geometry: SphereGeometry,
    pub coeffs: Vec<f64>,
}

impl ZonalFunction {
    pub fn new(geometry: SphereGeometry, coeffs: Vec<f64>) -> Self {
        assert!(!coeffs.is_empty());
        ZonalFunction { geometry, coeffs }
    }

    pub fn constant(geometry: SphereGeometry, value: f64, degree: usize) -> Self {
        let mut coeffs = vec![0.0; degree + 1];
        coeffs[0] = value;
        ZonalFunction { geometry, coeffs }
    }

    /// Single basis mode `c·B_l` embedded in degree `L`.
    pub fn mode(geometry: SphereGeometry, l: usize, c: f64, degree: usize) -> Self {
        assert!(l <= degree);
        let mut coeffs = vec![0.0; degree + 1];
        coeffs[l] = c;
        ZonalFunction { geometry, coeffs }
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Pointwise evaluation by Gegenbauer recurrence (O(L) per point).
    pub fn eval(&self, t: f64) -> f64 {
        self.coeffs
            .iter()
            .enumerate()
            .map(|(l, &a)| a * self.geometry.basis_eval(l, t))
            .sum()
    }

    /// `∫_{S^n} |Y_l|² dV = a_l² · ∫ B_l² dV`.
    pub fn mode_l2(&self, l: usize) -> f64 {
        let a = self.coeffs.get(l).copied().unwrap_or(0.0);
        a * a * self.geometry.basis_norm(l)
    }

    /// `∫_{S^n} f dV`; only the l = 0 mode contributes.
    pub fn total_integral(&self) -> f64 {
        self.coeffs[0] * self.geometry.volume()
    }

    /// Spherical mean `⨍ f dV = a_0`.
    pub fn mean(&self) -> f64 {
        self.coeffs[0]
    }

    /// `∫ |f|² dV` by Parseval.
    pub fn l2_squared(&self) -> f64 {
        (0..self.coeffs.len()).map(|l| self.mode_l2(l)).sum()
    }

    pub fn scale(&self, c: f64) -> Self {
        ZonalFunction {
            geometry: self.geometry,
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.geometry, other.geometry);
        let len = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..len)
            .map(|l| {
                self.coeffs.get(l).copied().unwrap_or(0.0)
                    + other.coeffs.get(l).copied().unwrap_or(0.0)
            })
            .collect();
        ZonalFunction {
            geometry: self.geometry,
            coeffs,
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(-1.0))
    }

    /// Fraction of the Parseval energy sitting in the top quarter of the
    /// spectrum; a crude truncation diagnostic for re-analyzed functions.
    pub fn tail_energy_fraction(&self) -> f64 {
        let total = self.l2_squared();
        if total == 0.0 {
            return 0.0;
        }
        let start = self.coeffs.len() - self.coeffs.len() / 4 - 1;
        let tail: f64 = (start..self.coeffs.len()).map(|l| self.mode_l2(l)).sum();
        tail / total
    }
}

/// Values `F(t_i) = Σ a_l B_l(t_i)` on the grid nodes.
pub fn synthesize(f: &ZonalFunction, grid: &QuadratureRule) -> Vec<f64> {
    grid.nodes.iter().map(|&t| f.eval(t)).collect()
}

/// Coefficients `a_l = ⟨F, B_l⟩ / h_l` by quadrature, exact for
/// band-limited input of degree ≤ 2M−1−L.
pub fn analyze(
    values: &[f64],
    grid: &QuadratureRule,
    geometry: SphereGeometry,
    degree: usize,
) -> Result<ZonalFunction> {
    check_grid(grid, geometry, values.len())?;
    let coeffs = (0..=degree)
        .map(|l| {
            let inner: f64 = grid
                .nodes
                .iter()
                .zip(&grid.weights)
                .zip(values)
                .map(|((&t, &w), &v)| w * v * geometry.basis_eval(l, t))
                .sum();
            inner / geometry.latitude_norm(l)
        })
        .collect();
    Ok(ZonalFunction { geometry, coeffs })
}

/// Aliasing probe: re-analyze on a doubled grid and compare. Band-limited
/// input reproduces; under-resolved input does not.
pub fn aliasing_detected(
    f_values: impl Fn(f64) -> f64,
    geometry: SphereGeometry,
    degree: usize,
    m: usize,
) -> Result<bool> {
    let coarse_grid = geometry.grid(m)?;
    let fine_grid = geometry.grid(2 * m + 1)?;
    let coarse_vals: Vec<f64> = coarse_grid.nodes.iter().map(|&t| f_values(t)).collect();
    let fine_vals: Vec<f64> = fine_grid.nodes.iter().map(|&t| f_values(t)).collect();
    let coarse = analyze(&coarse_vals, &coarse_grid, geometry, degree)?;
    let fine = analyze(&fine_vals, &fine_grid, geometry, degree)?;
    let diff: f64 = coarse
        .coeffs
        .iter()
        .zip(&fine.coeffs)
        .map(|(a, b)| (a - b) * (a - b))
        .sum::<f64>()
        .sqrt();
    let scale: f64 = fine.coeffs.iter().map(|a| a * a).sum::<f64>().sqrt();
    Ok(diff > 1e-8 * scale.max(1e-30))
}

/// `∫_{S^n} F(ξ·e) dV = |S^{n−1}| Σ w_i F(t_i)`.
pub fn integrate(values: &[f64], grid: &QuadratureRule, geometry: SphereGeometry) -> f64 {
    geometry.boundary_volume() * grid.integrate(values)
}

/// `(∫ |F|^p dV)^{1/p}` for `p ≠ 0`; negative exponents require strictly
/// positive samples (positive parts of touching-zero functions diverge,
/// see the refinement diagnostics in the deficit reports).
pub fn lp_norm(
    values: &[f64],
    grid: &QuadratureRule,
    geometry: SphereGeometry,
    p: f64,
) -> Result<f64> {
    assert!(p != 0.0, "p must be nonzero");
    if p < 0.0 {
        if let Some(bad) = values.iter().find(|&&v| v <= 0.0) {
            return Err(Error::NonPositiveValue(format!(
                "L^{p} norm needs positive values, found {bad}"
            )));
        }
    }
    let integral: f64 = geometry.boundary_volume()
        * grid
            .nodes
            .iter()
            .zip(&grid.weights)
            .zip(values)
            .map(|((_, &w), &v)| w * v.abs().powf(p))
            .sum::<f64>();
    Ok(integral.powf(1.0 / p))
}

/// `L^p` norm of a spectral function at grid resolution `m`.
pub fn lp_norm_of(f: &ZonalFunction, p: f64, m: usize) -> Result<f64> {
    let grid = f.geometry.grid(m)?;
    let values = synthesize(f, &grid);
    lp_norm(&values, &grid, f.geometry, p)
}

fn check_grid(grid: &QuadratureRule, geometry: SphereGeometry, len: usize) -> Result<()> {
    if grid.order != len {
        return Err(Error::GridMismatch(format!(
            "grid has {} nodes but {} values were supplied",
            grid.order, len
        )));
    }
    let expected = if geometry.n == 1 {
        -0.5
    } else {
        geometry.mu() - 0.5
    };
    if (grid.weight_exponent - expected).abs() > 1e-12 {
        return Err(Error::GridMismatch(format!(
            "grid weight exponent {} does not match sphere dimension n = {}",
            grid.weight_exponent, geometry.n
        )));
    }
    Ok(())
}

/// Write `(t, value)` sample rows as CSV.
pub fn samples_to_csv(grid: &QuadratureRule, values: &[f64]) -> String {
    let mut out = String::from("t,value\n");
    for (t, v) in grid.nodes.iter().zip(values) {
        out.push_str(&format!("{t:.17e},{v:.17e}\n"));
    }
    out
}

/// Read `(t, value)` sample rows from CSV (header optional).
pub fn samples_from_csv(text: &str) -> Result<(Vec<f64>, Vec<f64>)> {
    let mut ts = Vec::new();
    let mut vs = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || (i == 0 && line.starts_with(|c: char| c.is_alphabetic())) {
            continue;
        }
        let mut parts = line.split(',');
        let t = parts
            .next()
            .and_then(|s| s.trim().parse::<f64>().ok())
            .ok_or_else(|| Error::Domain(format!("bad CSV row {i}: {line}")))?;
        let v = parts
            .next()
            .and_then(|s| s.trim().parse::<f64>().ok())
            .ok_or_else(|| Error::Domain(format!("bad CSV row {i}: {line}")))?;
        ts.push(t);
        vs.push(v);
    }
    Ok((ts, vs))
}

/// Coefficient vector as one-column CSV.
pub fn coeffs_to_csv(f: &ZonalFunction) -> String {
    let mut out = String::from("l,coeff\n");
    for (l, a) in f.coeffs.iter().enumerate() {
        out.push_str(&format!("{l},{a:.17e}\n"));
    }
    out
}

/// Parse a coefficient CSV back into a zonal function.
pub fn coeffs_from_csv(text: &str, geometry: SphereGeometry) -> Result<ZonalFunction> {
    let mut coeffs = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || (i == 0 && line.starts_with(|c: char| c.is_alphabetic())) {
            continue;
        }
        let a = line
            .split(',')
            .nth(1)
            .and_then(|s| s.trim().parse::<f64>().ok())
            .ok_or_else(|| Error::Domain(format!("bad coefficient row {i}: {line}")))?;
        coeffs.push(a);
    }
    if coeffs.is_empty() {
        return Err(Error::Domain("no coefficients in CSV".into()));
    }
    Ok(ZonalFunction { geometry, coeffs })
}
