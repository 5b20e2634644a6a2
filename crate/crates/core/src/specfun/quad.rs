//! Gauss–Jacobi quadrature by Golub–Welsch eigen-decomposition.
//!
//! A rule for the weight `(1−t)^α (1+t)^β` integrates polynomials of degree
//! ≤ 2M−1 exactly. The Gegenbauer rules (α = β = μ−1/2) carry the sphere
//! measure `(1−t²)^{(n−2)/2}`; asymmetric rules absorb the weakly singular
//! chord kernels `(2−2t)^{γ−n/2}` so their Funk–Hecke integrals stay
//! spectrally accurate.

use super::dd::Dd;
use super::gamma::ln_gamma;
use crate::{Error, Result};
use nalgebra::DMatrix;

/// Nodes and weights against the Gegenbauer weight `(1−t²)^{μ−1/2}` (or the
/// asymmetric Jacobi weight the rule was built with).
#[derive(Debug, Clone)]
pub struct QuadratureRule {
    /// Strictly increasing nodes in (−1, 1).
    pub nodes: Vec<f64>,
    /// Positive weights.
    pub weights: Vec<f64>,
    /// Gegenbauer exponent μ − 1/2 (equals both Jacobi exponents for the
    /// symmetric rules).
    pub weight_exponent: f64,
    /// Number of points M.
    pub order: usize,
}

impl QuadratureRule {
    /// Quadrature of tabulated values against the rule's weight.
    pub fn integrate(&self, values: &[f64]) -> f64 {
        self.weights
            .iter()
            .zip(values)
            .map(|(w, v)| w * v)
            .sum()
    }

    /// Quadrature of a function against the rule's weight.
    pub fn integrate_fn(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&t, &w)| w * f(t))
            .sum()
    }
}

/// First moment `∫ (1−t)^α (1+t)^β dt = 2^{α+β+1} B(α+1, β+1)`.
fn jacobi_mu0(alpha: f64, beta: f64) -> f64 {
    ((alpha + beta + 1.0) * 2.0f64.ln() + ln_gamma(alpha + 1.0) + ln_gamma(beta + 1.0)
        - ln_gamma(alpha + beta + 2.0))
    .exp()
}

/// M-point Gauss–Jacobi rule for the weight `(1−t)^α (1+t)^β`, α, β > −1.
pub fn gauss_jacobi_rule(alpha: f64, beta: f64, m: usize) -> Result<QuadratureRule> {
    if m == 0 {
        return Err(Error::Domain("quadrature order must be >= 1".into()));
    }
    if alpha <= -1.0 || beta <= -1.0 {
        return Err(Error::Domain(format!(
            "Jacobi exponents must exceed -1, got alpha = {alpha}, beta = {beta}"
        )));
    }

    // Symmetric tridiagonal Jacobi matrix of the orthonormal recurrence.
    let mut tri = DMatrix::<f64>::zeros(m, m);
    let ab = alpha + beta;
    tri[(0, 0)] = (beta - alpha) / (ab + 2.0);
    for i in 1..m {
        let idx = i as f64;
        let denom = 2.0 * idx + ab;
        if i < m {
            let off = 2.0 / denom
                * (idx * (idx + alpha) * (idx + beta) * (idx + ab)
                    / ((denom + 1.0) * (denom - 1.0)))
                    .sqrt();
            tri[(i - 1, i)] = off;
            tri[(i, i - 1)] = off;
        }
        tri[(i, i)] = (beta * beta - alpha * alpha) / (denom * (denom + 2.0));
    }

    let eigen = nalgebra::SymmetricEigen::try_new(tri, 1e-14, 10_000)
        .ok_or_else(|| Error::Convergence("Golub-Welsch eigen iteration stalled".into()))?;

    let mu0 = jacobi_mu0(alpha, beta);
    let mut pairs: Vec<(f64, f64)> = (0..m)
        .map(|i| {
            let q0 = eigen.eigenvectors[(0, i)];
            (eigen.eigenvalues[i], mu0 * q0 * q0)
        })
        .collect();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));

    let (nodes, weights): (Vec<f64>, Vec<f64>) = pairs.into_iter().unzip();
    Ok(QuadratureRule {
        nodes,
        weights,
        weight_exponent: if alpha == beta { alpha } else { f64::NAN },
        order: m,
    })
}

/// Gauss–Jacobi rule carried in double-double precision.
///
/// Built from the f64 Golub–Welsch nodes, Newton-polished against the
/// orthonormal-recurrence polynomial `q_M` evaluated in double-double, with
/// Christoffel weights `w_i = μ0 / Σ_{k<M} q_k(x_i)²`. The overall scale
/// μ0 multiplies at the end, so only well-conditioned dd arithmetic feeds
/// the cancellation-prone mode sums downstream.
#[derive(Debug, Clone)]
pub struct DdQuadratureRule {
    pub nodes: Vec<Dd>,
    pub weights: Vec<Dd>,
    pub mu0: f64,
}

impl DdQuadratureRule {
    /// `∫ (1−t)^α (1+t)^β f(t) dt` with the integrand mapped in dd.
    pub fn integrate_dd(&self, f: impl Fn(Dd) -> Dd) -> f64 {
        let mut acc = Dd::ZERO;
        for (&x, &w) in self.nodes.iter().zip(&self.weights) {
            acc = acc.add(w.mul(f(x)));
        }
        acc.value() * self.mu0
    }
}

/// Orthonormal-recurrence coefficients of the Jacobi weight: diagonal
/// `a_j`, off-diagonal `b_j` (coupling j−1 and j), all in dd.
fn jacobi_recurrence_dd(alpha: f64, beta: f64, m: usize) -> (Vec<Dd>, Vec<Dd>) {
    let ab = Dd::from(alpha).add(Dd::from(beta));
    let mut a = Vec::with_capacity(m);
    let mut b = vec![Dd::ZERO]; // b_0 unused
    a.push(Dd::from(beta - alpha).div(ab.add(Dd::from(2.0))));
    for j in 1..m {
        let jf = Dd::from(j as f64);
        let denom = jf.scale(2.0).add(ab);
        a.push(
            Dd::from(beta)
                .mul(Dd::from(beta))
                .sub(Dd::from(alpha).mul(Dd::from(alpha)))
                .div(denom.mul(denom.add(Dd::from(2.0)))),
        );
        let inner = jf
            .mul(jf.add(Dd::from(alpha)))
            .mul(jf.add(Dd::from(beta)))
            .mul(jf.add(ab))
            .div(denom.add(Dd::ONE).mul(denom.sub(Dd::ONE)));
        b.push(inner.sqrt().scale(2.0).div(denom));
    }
    (a, b)
}

/// `q_M(x)`, `q'_M(x)` and `Σ_{k<M} q_k(x)²` for the unnormalized
/// orthonormal recurrence `q_0 = 1`, `b_{j+1} q_{j+1} = (x−a_j) q_j − b_j q_{j−1}`.
fn eval_recurrence_dd(a: &[Dd], b: &[Dd], x: Dd) -> (Dd, Dd, Dd) {
    let m = a.len();
    let mut q_prev = Dd::ZERO;
    let mut q = Dd::ONE;
    let mut dq_prev = Dd::ZERO;
    let mut dq = Dd::ZERO;
    let mut christoffel = Dd::ONE; // q_0²
    for j in 0..m {
        let bj1 = if j + 1 < m { b[j + 1] } else { Dd::ONE };
        let xm = x.sub(a[j]);
        let q_next = xm.mul(q).sub(b[j].mul(q_prev)).div(bj1);
        let dq_next = q.add(xm.mul(dq)).sub(b[j].mul(dq_prev)).div(bj1);
        q_prev = q;
        q = q_next;
        dq_prev = dq;
        dq = dq_next;
        if j + 1 < m {
            christoffel = christoffel.add(q.mul(q));
        }
    }
    (q, dq, christoffel)
}

/// M-point Gauss–Jacobi rule in double-double precision.
pub fn gauss_jacobi_rule_dd(alpha: f64, beta: f64, m: usize) -> Result<DdQuadratureRule> {
    let seed = gauss_jacobi_rule(alpha, beta, m)?;
    let (a, b) = jacobi_recurrence_dd(alpha, beta, m);
    let mut nodes = Vec::with_capacity(m);
    let mut weights = Vec::with_capacity(m);
    for &x0 in &seed.nodes {
        let mut x = Dd::from(x0);
        // three Newton steps from the f64 eigenvalue: quadratic convergence
        // lands well below the dd unit roundoff
        for _ in 0..3 {
            let (q, dq, _) = eval_recurrence_dd(&a, &b, x);
            x = x.sub(q.div(dq));
        }
        let (_, _, christoffel) = eval_recurrence_dd(&a, &b, x);
        nodes.push(x);
        weights.push(Dd::ONE.div(christoffel));
    }
    Ok(DdQuadratureRule {
        nodes,
        weights,
        mu0: jacobi_mu0(alpha, beta),
    })
}

/// M-point Gauss–Gegenbauer rule for `(1−t²)^{μ−1/2}`, μ ≥ 0. μ = 0 is the
/// Chebyshev rule with closed-form nodes `cos(π(2i+1)/2M)` and weights π/M.
pub fn gauss_gegenbauer_rule(mu: f64, m: usize) -> Result<QuadratureRule> {
    if mu < 0.0 {
        return Err(Error::Domain(format!("Gegenbauer index mu = {mu} < 0")));
    }
    if mu == 0.0 {
        if m == 0 {
            return Err(Error::Domain("quadrature order must be >= 1".into()));
        }
        let nodes: Vec<f64> = (0..m)
            .rev()
            .map(|i| (std::f64::consts::PI * (2.0 * i as f64 + 1.0) / (2.0 * m as f64)).cos())
            .collect();
        let weights = vec![std::f64::consts::PI / m as f64; m];
        return Ok(QuadratureRule {
            nodes,
            weights,
            weight_exponent: -0.5,
            order: m,
        });
    }
    gauss_jacobi_rule(mu - 0.5, mu - 0.5, m)
}
