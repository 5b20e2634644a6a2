//! Two-branch truncated ρ-jets and the exact action of `Δ̃₊` on them.

use crate::zonal::{analyze, synthesize, SphereGeometry, ZonalFunction};
use crate::{Error, Result};

/// Matching tolerance for jet exponents.
const EXP_TOL: f64 = 1e-9;

/// Truncated expansion
/// `Σ_{m=0}^{M} ρ^{α+2m} f_m + Σ_{m=0}^{M} ρ^{α+2[γ]+2m} g_m`
/// with zonal coefficients. The fractional part `[γ] ∈ (0,1)` keeps the
/// two exponent sets disjoint, so coefficient extraction is unambiguous.
#[derive(Debug, Clone)]
pub struct RhoJet {
    pub geometry: SphereGeometry,
    pub gamma: f64,
    /// Base exponent α of the integer-offset branch.
    pub base_exp: f64,
    /// Coefficients of `ρ^{α+2m}`.
    pub branch1: Vec<ZonalFunction>,
    /// Coefficients of `ρ^{α+2[γ]+2m}`.
    pub branch2: Vec<ZonalFunction>,
}

impl RhoJet {
    /// Fractional part `[γ]`.
    pub fn frac(&self) -> f64 {
        self.gamma - self.gamma.floor()
    }

    pub fn order(&self) -> usize {
        self.branch1.len() - 1
    }

    pub fn degree(&self) -> usize {
        self.branch1[0].degree()
    }

    /// Zero jet of the given order and zonal degree.
    pub fn zero(
        geometry: SphereGeometry,
        gamma: f64,
        base_exp: f64,
        order: usize,
        degree: usize,
    ) -> Self {
        let zero = ZonalFunction::constant(geometry, 0.0, degree);
        RhoJet {
            geometry,
            gamma,
            base_exp,
            branch1: vec![zero.clone(); order + 1],
            branch2: vec![zero; order + 1],
        }
    }

    /// Jet `ρ^{exponent} f`, assigned to whichever branch the exponent
    /// aligns with (an error if it aligns with neither).
    pub fn monomial(
        f: &ZonalFunction,
        exponent: f64,
        gamma: f64,
        base_exp: f64,
        order: usize,
    ) -> Result<Self> {
        let mut jet = RhoJet::zero(f.geometry, gamma, base_exp, order, f.degree());
        jet.deposit(f, exponent)?;
        Ok(jet)
    }

    /// Add `ρ^{exponent} f` into the jet.
    pub fn deposit(&mut self, f: &ZonalFunction, exponent: f64) -> Result<()> {
        let rel1 = (exponent - self.base_exp) / 2.0;
        let rel2 = (exponent - self.base_exp - 2.0 * self.frac()) / 2.0;
        if (rel1 - rel1.round()).abs() < EXP_TOL && rel1.round() >= 0.0 {
            let m = rel1.round() as usize;
            if m <= self.order() {
                self.branch1[m] = self.branch1[m].add(f);
            }
            Ok(())
        } else if (rel2 - rel2.round()).abs() < EXP_TOL && rel2.round() >= 0.0 {
            let m = rel2.round() as usize;
            if m <= self.order() {
                self.branch2[m] = self.branch2[m].add(f);
            }
            Ok(())
        } else {
            Err(Error::MisalignedJets(format!(
                "exponent {exponent} aligns with neither branch (base {}, frac {})",
                self.base_exp,
                self.frac()
            )))
        }
    }

    /// Coefficient at the exact exponent, from whichever branch it lies on;
    /// `None` when the exponent misses both exponent lattices.
    pub fn coefficient_at(&self, exponent: f64) -> Option<&ZonalFunction> {
        let rel1 = (exponent - self.base_exp) / 2.0;
        if (rel1 - rel1.round()).abs() < EXP_TOL && rel1.round() >= 0.0 {
            return self.branch1.get(rel1.round() as usize);
        }
        let rel2 = (exponent - self.base_exp - 2.0 * self.frac()) / 2.0;
        if (rel2 - rel2.round()).abs() < EXP_TOL && rel2.round() >= 0.0 {
            return self.branch2.get(rel2.round() as usize);
        }
        None
    }

    /// Multiply by `ρ^{delta}`: shifts the base exponent.
    pub fn shift(&self, delta: f64) -> Self {
        let mut out = self.clone();
        out.base_exp += delta;
        out
    }

    pub fn scale(&self, c: f64) -> Self {
        RhoJet {
            geometry: self.geometry,
            gamma: self.gamma,
            base_exp: self.base_exp,
            branch1: self.branch1.iter().map(|f| f.scale(c)).collect(),
            branch2: self.branch2.iter().map(|f| f.scale(c)).collect(),
        }
    }

    /// Jet sum; requires identical `(γ, base_exp)` alignment — a mismatch
    /// is an error, never a silent cast.
    pub fn try_add(&self, other: &Self) -> Result<Self> {
        if (self.gamma - other.gamma).abs() > EXP_TOL
            || (self.base_exp - other.base_exp).abs() > EXP_TOL
        {
            return Err(Error::MisalignedJets(format!(
                "jet alignment (gamma {}, base {}) vs (gamma {}, base {})",
                self.gamma, self.base_exp, other.gamma, other.base_exp
            )));
        }
        let order = self.order().min(other.order());
        Ok(RhoJet {
            geometry: self.geometry,
            gamma: self.gamma,
            base_exp: self.base_exp,
            branch1: (0..=order)
                .map(|m| self.branch1[m].add(&other.branch1[m]))
                .collect(),
            branch2: (0..=order)
                .map(|m| self.branch2[m].add(&other.branch2[m]))
                .collect(),
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.try_add(&other.scale(-1.0))
    }

    /// Pointwise evaluation of the truncated jet at `(ρ, t)`.
    pub fn eval(&self, rho: f64, t: f64) -> f64 {
        let mut total = 0.0;
        for (m, f) in self.branch1.iter().enumerate() {
            total += rho.powf(self.base_exp + 2.0 * m as f64) * f.eval(t);
        }
        for (m, g) in self.branch2.iter().enumerate() {
            total += rho.powf(self.base_exp + 2.0 * self.frac() + 2.0 * m as f64) * g.eval(t);
        }
        total
    }

    /// Max-norm of all coefficients, for residual reporting.
    pub fn max_coeff(&self) -> f64 {
        self.branch1
            .iter()
            .chain(&self.branch2)
            .flat_map(|f| f.coeffs.iter())
            .fold(0.0f64, |acc, &c| acc.max(c.abs()))
    }
}

/// Spherical Laplacian acting spectrally: mode l scales by `−l(l+n−1)`.
fn sphere_laplacian(f: &ZonalFunction) -> ZonalFunction {
    let n = f.geometry.n as f64;
    let coeffs = f
        .coeffs
        .iter()
        .enumerate()
        .map(|(l, &a)| -(l as f64) * (l as f64 + n - 1.0) * a)
        .collect();
    ZonalFunction::new(f.geometry, coeffs)
}

/// Exact truncated action of `Δ̃₊ = Δ₊ + n²/4` on a jet. Per branch with
/// base exponent β, the output coefficient at `ρ^{β+2m}` is
/// `(β+2m−n/2)² h_m + Σ_{k=1}^{m} 4^{1−k} (−(β+2(m−k)) n/2 · h_{m−k} + k Δ_{S^n} h_{m−k})`.
/// `Δ̃₊` never lowers exponents, so order M in gives exact order M out.
pub fn jet_laplacian(jet: &RhoJet) -> RhoJet {
    let n = jet.geometry.n as f64;
    let order = jet.order();
    let act = |branch: &[ZonalFunction], beta: f64| -> Vec<ZonalFunction> {
        (0..=order)
            .map(|m| {
                let indicial = beta + 2.0 * m as f64 - n / 2.0;
                let mut out = branch[m].scale(indicial * indicial);
                for k in 1..=m {
                    let h = &branch[m - k];
                    let four = 4.0f64.powi(1 - k as i32);
                    let radial = h.scale(-(beta + 2.0 * (m - k) as f64) * n / 2.0 * four);
                    let angular = sphere_laplacian(h).scale(k as f64 * four);
                    out = out.add(&radial).add(&angular);
                }
                out
            })
            .collect()
    };
    RhoJet {
        geometry: jet.geometry,
        gamma: jet.gamma,
        base_exp: jet.base_exp,
        branch1: act(&jet.branch1, jet.base_exp),
        branch2: act(&jet.branch2, jet.base_exp + 2.0 * jet.frac()),
    }
}

/// `(Δ̃₊ − c²)` applied to a jet.
pub fn shifted_laplacian(jet: &RhoJet, c: f64) -> RhoJet {
    jet_laplacian(jet)
        .try_add(&jet.scale(-c * c))
        .expect("same alignment by construction")
}

/// Even scalar jet `Σ ρ^{2m} w_m` with zonal coefficients, used for the
/// conformal factors `e^{cτ}`.
#[derive(Debug, Clone)]
pub struct EvenJet {
    pub geometry: SphereGeometry,
    pub coeffs: Vec<ZonalFunction>,
}

impl EvenJet {
    pub fn constant_in_rho(f: &ZonalFunction, order: usize) -> Self {
        let mut coeffs = vec![ZonalFunction::constant(f.geometry, 0.0, f.degree()); order + 1];
        coeffs[0] = f.clone();
        EvenJet {
            geometry: f.geometry,
            coeffs,
        }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }
}

/// Pointwise product of zonal functions, re-analyzed at their max degree.
pub(crate) fn zonal_product(a: &ZonalFunction, b: &ZonalFunction) -> ZonalFunction {
    let geometry = a.geometry;
    let degree = a.degree().max(b.degree());
    let grid = geometry
        .grid((2 * (a.degree() + b.degree()) + 8).max(64))
        .expect("grid construction");
    let values: Vec<f64> = grid
        .nodes
        .iter()
        .map(|&t| a.eval(t) * b.eval(t))
        .collect();
    analyze(&values, &grid, geometry, degree).expect("analysis on matching grid")
}

fn even_jet_product(a: &EvenJet, b: &EvenJet, order: usize) -> EvenJet {
    let geometry = a.geometry;
    let degree = a.coeffs[0].degree().max(b.coeffs[0].degree());
    let mut coeffs = vec![ZonalFunction::constant(geometry, 0.0, degree); order + 1];
    for (i, ai) in a.coeffs.iter().enumerate() {
        for (j, bj) in b.coeffs.iter().enumerate() {
            if i + j <= order {
                coeffs[i + j] = coeffs[i + j].add(&zonal_product(ai, bj));
            }
        }
    }
    EvenJet { geometry, coeffs }
}

/// `e^{c τ}` as an even jet: `e^{c τ_0} Σ_j (c (τ − τ_0))^j / j!`, the tail
/// being nilpotent to the truncation order since `τ − τ_0 = O(ρ²)`.
pub fn even_jet_exp(tau: &EvenJet, c: f64, order: usize) -> EvenJet {
    let geometry = tau.geometry;
    let degree = tau.coeffs[0].degree();
    let grid = geometry.grid((4 * degree + 4).max(64)).expect("grid");
    let boundary_vals: Vec<f64> = synthesize(&tau.coeffs[0], &grid)
        .iter()
        .map(|&v| (c * v).exp())
        .collect();
    let boundary = analyze(&boundary_vals, &grid, geometry, degree).expect("analysis");

    // nilpotent part c(τ − τ_0), starting at ρ²
    let mut nil = tau.clone();
    nil.coeffs[0] = ZonalFunction::constant(geometry, 0.0, degree);
    let nil = EvenJet {
        geometry,
        coeffs: nil.coeffs.iter().map(|f| f.scale(c)).collect(),
    };

    let mut series = EvenJet::constant_in_rho(&ZonalFunction::constant(geometry, 1.0, degree), order);
    let mut power = EvenJet::constant_in_rho(&ZonalFunction::constant(geometry, 1.0, degree), order);
    let mut factorial = 1.0;
    for j in 1..=order {
        power = even_jet_product(&power, &nil, order);
        factorial *= j as f64;
        if power.coeffs.iter().all(|f| f.coeffs.iter().all(|&c| c == 0.0)) {
            break;
        }
        for (m, p) in power.coeffs.iter().enumerate() {
            series.coeffs[m] = series.coeffs[m].add(&p.scale(1.0 / factorial));
        }
    }
    even_jet_product(&series, &EvenJet::constant_in_rho(&boundary, order), order)
}

/// Multiply a two-branch jet by an even scalar jet.
pub fn jet_mul_even(jet: &RhoJet, w: &EvenJet) -> RhoJet {
    let order = jet.order();
    let mul_branch = |branch: &[ZonalFunction]| -> Vec<ZonalFunction> {
        let degree = branch[0].degree().max(w.coeffs[0].degree());
        let zero = ZonalFunction::constant(jet.geometry, 0.0, degree);
        let mut out = vec![zero; order + 1];
        for (m, h) in branch.iter().enumerate() {
            for (k, wk) in w.coeffs.iter().enumerate() {
                if m + k <= order {
                    out[m + k] = out[m + k].add(&zonal_product(h, wk));
                }
            }
        }
        out
    };
    RhoJet {
        geometry: jet.geometry,
        gamma: jet.gamma,
        base_exp: jet.base_exp,
        branch1: mul_branch(&jet.branch1),
        branch2: mul_branch(&jet.branch2),
    }
}
