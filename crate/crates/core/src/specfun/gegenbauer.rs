//! Gegenbauer polynomials `C_l^μ` and their orthogonality constants.
//!
//! The degenerate case μ = 0 (the circle, n = 1) uses the Chebyshev
//! convention `C_l^0 ↦ T_l = cos(l arccos t)`: the vanishing μ → 0 limit
//! would kill every mode with l ≥ 1 and the circle needs a nondegenerate
//! basis.

use super::gamma::{gamma_signed, ln_gamma};
use std::f64::consts::PI;

/// `C_l^μ(t)` by the three-term recurrence
/// `(l+1) C_{l+1} = 2(l+μ) t C_l − (l+2μ−1) C_{l−1}`; Chebyshev `T_l` when
/// μ = 0.
pub fn gegenbauer_eval(l: usize, mu: f64, t: f64) -> f64 {
    if mu == 0.0 {
        return chebyshev_eval(l, t);
    }
    match l {
        0 => 1.0,
        1 => 2.0 * mu * t,
        _ => {
            let mut prev = 1.0;
            let mut cur = 2.0 * mu * t;
            for k in 1..l {
                let kf = k as f64;
                let next = (2.0 * (kf + mu) * t * cur - (kf + 2.0 * mu - 1.0) * prev) / (kf + 1.0);
                prev = cur;
                cur = next;
            }
            cur
        }
    }
}

fn chebyshev_eval(l: usize, t: f64) -> f64 {
    match l {
        0 => 1.0,
        1 => t,
        _ => {
            let mut prev = 1.0;
            let mut cur = t;
            for _ in 1..l {
                let next = 2.0 * t * cur - prev;
                prev = cur;
                cur = next;
            }
            cur
        }
    }
}

/// Orthogonality constant `h_l^μ = ∫_{-1}^{1} C_l^μ(t)² (1−t²)^{μ−1/2} dt
/// = π 2^{1−2μ} Γ(l+2μ) / (l! (l+μ) Γ(μ)²)` for μ > 0.
pub fn gegenbauer_norm(l: usize, mu: f64) -> f64 {
    assert!(mu > 0.0, "gegenbauer_norm requires mu > 0");
    let lf = l as f64;
    let log = PI.ln() + (1.0 - 2.0 * mu) * 2.0f64.ln() + ln_gamma(lf + 2.0 * mu)
        - ln_gamma(lf + 1.0)
        - (lf + mu).ln()
        - 2.0 * gamma_signed(mu).log_mag;
    log.exp()
}

/// Chebyshev orthogonality constants for the μ = 0 circle convention:
/// `∫ T_l² (1−t²)^{-1/2} dt` = π for l = 0, π/2 for l ≥ 1.
#[cfg(test)]
pub(crate) fn chebyshev_norm(l: usize) -> f64 {
    if l == 0 {
        PI
    } else {
        PI / 2.0
    }
}
