//! Closed forms of the bounds and their inversions for the unknown constant.
//! Most functions work with natural logarithms so that huge dimensions and
//! tiny ratios stay representable.

use num_bigint::BigUint;

use crate::error::{Error, Result};
use crate::exact::ln_biguint;

/// `ln(d^d χ(1) / n^d)`, with `0^0 = 1`.
pub fn ln_normalized_dim(n: usize, d: usize, ln_dim: f64) -> f64 {
    if d == 0 {
        return ln_dim;
    }
    let d_f = d as f64;
    d_f * d_f.ln() + ln_dim - d_f * (n as f64).ln()
}

fn check_q(q: f64) -> Result<()> {
    if q.is_nan() || q < 2.0 {
        return Err(Error::InvalidArgument(format!("q must be >= 2, got {q}")));
    }
    Ok(())
}

/// `ln((Cq/ln q)^d (d^d χ(1)/n^d)^{1-2/q})`; zero for `q = 2` or `d = 0`.
pub fn ln_main_bound(n: usize, d: usize, q: f64, ln_dim: f64, c: f64) -> Result<f64> {
    check_q(q)?;
    if q == 2.0 || d == 0 {
        return Ok(0.0);
    }
    let d_f = d as f64;
    Ok(d_f * (c * q / q.ln()).ln() + (1.0 - 2.0 / q) * ln_normalized_dim(n, d, ln_dim))
}

/// Upper bound on `‖χ‖_q` for a level-`d` character of dimension `dim`.
pub fn main_bound_rhs(n: usize, d: usize, q: f64, dim: &BigUint, c: f64) -> Result<f64> {
    Ok(ln_main_bound(n, d, q, ln_biguint(dim), c)?.exp())
}

/// `ln((cq/ln(qd))^d (d^d χ(1)/n^d)^{1-2/q})`; zero for `d = 0`.
pub fn ln_main_lower(n: usize, d: usize, q: f64, ln_dim: f64, c: f64) -> Result<f64> {
    check_q(q)?;
    if d == 0 {
        return Ok(0.0);
    }
    let d_f = d as f64;
    Ok(d_f * (c * q / (q * d_f).ln()).ln() + (1.0 - 2.0 / q) * ln_normalized_dim(n, d, ln_dim))
}

/// The `C` making the upper bound tight at `ln ‖χ‖_q = ln_norm`.
pub fn main_bound_constant(n: usize, d: usize, q: f64, ln_dim: f64, ln_norm: f64) -> f64 {
    let slack = ln_norm - (1.0 - 2.0 / q) * ln_normalized_dim(n, d, ln_dim);
    q.ln() / q * (slack / d as f64).exp()
}

/// The `c` making the lower bound tight at `ln ‖χ‖_q = ln_norm`.
pub fn main_lower_constant(n: usize, d: usize, q: f64, ln_dim: f64, ln_norm: f64) -> f64 {
    let slack = ln_norm - (1.0 - 2.0 / q) * ln_normalized_dim(n, d, ln_dim);
    (q * d as f64).ln() / q * (slack / d as f64).exp()
}

/// `ℓ = ⌈α n^α⌉`, the cycle budget attached to `α`.
pub fn cycle_budget(n: usize, alpha: f64) -> usize {
    (alpha * (n as f64).powf(alpha)).ceil() as usize
}

/// The `α ∈ (0, 1)` with `c α n^α = k`, found by bisection. `None` when
/// `k >= c n`, where no admissible `α` exists.
pub fn cycle_alpha(n: usize, k: f64, c: f64) -> Option<f64> {
    let n_f = n as f64;
    if n < 2 || k <= 0.0 || k >= c * n_f {
        return None;
    }
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    for _ in 0..100 {
        let mid = 0.5 * (lo + hi);
        if c * mid * n_f.powf(mid) < k {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Some(0.5 * (lo + hi))
}

/// `ln` of the few-cycles bound `χ(1)^{α-1}`.
pub fn ln_few_cycles_rhs(alpha: f64, ln_dim: f64) -> f64 {
    (alpha - 1.0) * ln_dim
}

/// The exponent `α*` with `|χ(σ)/χ(1)| = χ(1)^{α*-1}`.
pub fn ratio_exponent(ln_ratio: f64, ln_dim: f64) -> f64 {
    1.0 + ln_ratio / ln_dim
}

/// Denominator `ln(α n^α ln n) - ln d` of the dense-class bound, when positive.
fn dense_denominator(n: usize, d: usize, alpha: f64) -> Option<f64> {
    let ln_n = (n as f64).ln();
    let den = (alpha * (n as f64).powf(alpha) * ln_n).ln() - (d as f64).ln();
    (den > 0.0).then_some(den)
}

/// `ln(n^{d(α-1)} (Cα ln n / (ln(α n^α ln n) - ln d))^d)`.
pub fn ln_dense_ratio_rhs(n: usize, d: usize, alpha: f64, c: f64) -> Option<f64> {
    let den = dense_denominator(n, d, alpha)?;
    let ln_n = (n as f64).ln();
    let d_f = d as f64;
    Some(d_f * (alpha - 1.0) * ln_n + d_f * (c * alpha * ln_n / den).ln())
}

/// The `C` making the dense-class bound tight at `ln_ratio`.
pub fn dense_ratio_constant(n: usize, d: usize, alpha: f64, ln_ratio: f64) -> Option<f64> {
    let den = dense_denominator(n, d, alpha)?;
    let ln_n = (n as f64).ln();
    Some((ln_ratio / d as f64 + (1.0 - alpha) * ln_n).exp() * den / (alpha * ln_n))
}

/// `ln(n^{d(α-1)} (cα)^d)`.
pub fn ln_lower_ratio_rhs(n: usize, d: usize, alpha: f64, c: f64) -> f64 {
    let d_f = d as f64;
    d_f * (alpha - 1.0) * (n as f64).ln() + d_f * (c * alpha).ln()
}

/// The `c` making the lower character-ratio bound tight at `ln_ratio`.
pub fn lower_ratio_constant(n: usize, d: usize, alpha: f64, ln_ratio: f64) -> f64 {
    (ln_ratio / d as f64 + (1.0 - alpha) * (n as f64).ln()).exp() / alpha
}

/// `ln` of `χ(1)‖f‖₁ (C ln M / (n ln(ln M / d)))^d`, defined for `ln M > d`.
pub fn ln_fourier_rhs(n: usize, d: usize, ln_m: f64, ln_dim: f64, ln_l1: f64, c: f64) -> Option<f64> {
    let d_f = d as f64;
    let inner = (ln_m / d_f).ln();
    (inner > 0.0).then(|| ln_dim + ln_l1 + d_f * (c * ln_m / (n as f64 * inner)).ln())
}

/// The `C` making the Fourier bound tight at `ln(|⟨f,χ⟩| / (χ(1)‖f‖₁))`.
pub fn fourier_constant(n: usize, d: usize, ln_m: f64, ln_ratio: f64) -> Option<f64> {
    let d_f = d as f64;
    let inner = (ln_m / d_f).ln();
    (inner > 0.0).then(|| n as f64 * inner / ln_m * (ln_ratio / d_f).exp())
}

/// Regime `d <= (ln ‖f‖₂)^{0.9}`, `‖f‖₂ > e`: `(C ln‖f‖₂ / (n ln ln‖f‖₂))^d`.
pub fn fourier_regime1_constant(n: usize, d: usize, ln_l2: f64, ln_ratio: f64) -> Option<f64> {
    let d_f = d as f64;
    (ln_l2 > 1.0 && d_f <= ln_l2.powf(0.9))
        .then(|| n as f64 * ln_l2.ln() / ln_l2 * (ln_ratio / d_f).exp())
}

/// Regime `d <= ln ‖f‖₂`: `(C ln‖f‖₂ / n)^d`.
pub fn fourier_regime2_constant(n: usize, d: usize, ln_l2: f64, ln_ratio: f64) -> Option<f64> {
    let d_f = d as f64;
    (ln_l2 > 0.0 && d_f <= ln_l2).then(|| n as f64 / ln_l2 * (ln_ratio / d_f).exp())
}

/// `ln(max(ε^d, 2^{-n^{3/5}}) χ(1)^{α-1})`.
pub fn ln_mixing_envelope(n: usize, d: usize, eps: f64, alpha: f64, ln_dim: f64) -> f64 {
    let floor = -(n as f64).powf(0.6) * std::f64::consts::LN_2;
    (d as f64 * eps.ln()).max(floor) + (alpha - 1.0) * ln_dim
}

/// Minimal `C` in `g <= (C^{Σd} ∏ d_i^{d_i} / n^{Σd})^{1/3} (χ_λ χ_μ χ_ν (1))^{1/3}`.
pub fn kronecker_sym_constant(n: usize, ds: [usize; 3], ln_dims: [f64; 3], ln_g: f64) -> Option<f64> {
    let total: usize = ds.iter().sum();
    if total == 0 {
        return None;
    }
    let self_powers: f64 = ds.iter().filter(|&&d| d > 0).map(|&d| d as f64 * (d as f64).ln()).sum();
    let ln_c = (3.0 * ln_g - self_powers + total as f64 * (n as f64).ln() - ln_dims.iter().sum::<f64>())
        / total as f64;
    Some(ln_c.exp())
}

/// Minimal `C` in `g <= (C^{d1+d2} d1^{d1} d2^{d2} / n^{d1+d2})^{1/2} (χ_λ(1) χ_μ(1))^{1/2}`.
pub fn kronecker_pair_constant(n: usize, ds: [usize; 2], ln_dims: [f64; 2], ln_g: f64) -> Option<f64> {
    let total: usize = ds.iter().sum();
    if total == 0 {
        return None;
    }
    let self_powers: f64 = ds.iter().filter(|&&d| d > 0).map(|&d| d as f64 * (d as f64).ln()).sum();
    let ln_c = (2.0 * ln_g - self_powers + total as f64 * (n as f64).ln() - ln_dims.iter().sum::<f64>())
        / total as f64;
    Some(ln_c.exp())
}

/// The exponent `q = ln(χ_μ(1) χ_ν(1)) / d` of the asymmetric bound.
pub fn kronecker_q(d: usize, ln_dim_mu: f64, ln_dim_nu: f64) -> f64 {
    (ln_dim_mu + ln_dim_nu) / d as f64
}

/// Lower bound `(n/(ed))^d` on the dimension of a level-`d` character, as a log.
pub fn ln_dimension_growth(n: usize, d: usize) -> f64 {
    let d_f = d as f64;
    d_f * ((n as f64).ln() - 1.0 - d_f.ln())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn main_bound_arithmetic() {
        let v = main_bound_rhs(20, 1, 4.0, &BigUint::from(19u8), 1.0).unwrap();
        let expect = 4.0 / 4f64.ln() * (19.0f64 / 20.0).sqrt();
        assert!((v - expect).abs() < 1e-12 * expect);
        assert_eq!(main_bound_rhs(20, 0, 6.0, &BigUint::from(1u8), 3.0).unwrap(), 1.0);
        assert_eq!(main_bound_rhs(20, 3, 2.0, &BigUint::from(1000u32), 3.0).unwrap(), 1.0);
        assert!(main_bound_rhs(20, 1, 1.5, &BigUint::from(19u8), 1.0).is_err());
    }

    #[test]
    fn main_bound_grows_with_q() {
        let dim = BigUint::from(170u32);
        let mut last = 0.0;
        for q in [3.0, 4.0, 6.0, 8.0, 16.0] {
            let v = main_bound_rhs(20, 2, q, &dim, 5.0).unwrap();
            assert!(v > last);
            last = v;
        }
    }

    #[test]
    fn inversions_are_tight() {
        let (n, d, q, ln_dim) = (18, 2, 6.0, (119f64).ln());
        let ln_norm = 0.7;
        let c = main_bound_constant(n, d, q, ln_dim, ln_norm);
        assert!((ln_main_bound(n, d, q, ln_dim, c).unwrap() - ln_norm).abs() < 1e-12);
        let c = main_lower_constant(n, d, q, ln_dim, ln_norm);
        assert!((ln_main_lower(n, d, q, ln_dim, c).unwrap() - ln_norm).abs() < 1e-12);

        let ln_ratio = -2.5;
        let c = dense_ratio_constant(20, 2, 0.5, ln_ratio).unwrap();
        assert!((ln_dense_ratio_rhs(20, 2, 0.5, c).unwrap() - ln_ratio).abs() < 1e-12);
        let c = lower_ratio_constant(20, 2, 0.5, ln_ratio);
        assert!((ln_lower_ratio_rhs(20, 2, 0.5, c) - ln_ratio).abs() < 1e-12);
        let c = fourier_constant(12, 2, 9.0, ln_ratio).unwrap();
        assert!((ln_fourier_rhs(12, 2, 9.0, 0.0, 0.0, c).unwrap() - ln_ratio).abs() < 1e-12);
    }

    #[test]
    fn cycle_alpha_solves_budget() {
        let a = cycle_alpha(20, 3.0, 1.0).unwrap();
        assert!((a * 20f64.powf(a) - 3.0).abs() < 1e-9);
        assert!(cycle_alpha(20, 20.0, 1.0).is_none());
        assert_eq!(cycle_budget(20, 0.5), 3);
    }

    #[test]
    fn kronecker_constants_invert() {
        // g = 1 for λ = μ = ν = (11,1): C^3 / 12^3 * 11^3 = 1
        let c = kronecker_sym_constant(12, [1, 1, 1], [11f64.ln(); 3], 0.0).unwrap();
        assert!((c - 12.0 / 11.0).abs() < 1e-12);
        let c = kronecker_pair_constant(12, [1, 1], [11f64.ln(); 2], 0.0).unwrap();
        assert!((c - 12.0 / 11.0).abs() < 1e-12);
        assert!(kronecker_sym_constant(12, [0, 0, 0], [0.0; 3], 0.0).is_none());
    }
}
