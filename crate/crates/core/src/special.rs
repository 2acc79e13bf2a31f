//! Gamma-function helpers and compensated/pairwise summation.
//!
//! All ratios of factorial-like quantities go through `ln_gamma` so that
//! degrees in the thousands with shifted Jacobi parameters stay finite.

use std::f64::consts::PI;

/// log Γ(x) for x > 0.
pub fn ln_gamma(x: f64) -> f64 {
    debug_assert!(x > 0.0, "ln_gamma called with non-positive argument {x}");
    libm::lgamma(x)
}

/// Γ(x) for real x (poles at non-positive integers return ±inf/NaN).
pub fn gamma(x: f64) -> f64 {
    libm::tgamma(x)
}

/// ln of the Pochhammer symbol (a)_n = Γ(a+n)/Γ(a) for a > 0.
pub fn ln_pochhammer(a: f64, n: f64) -> f64 {
    ln_gamma(a + n) - ln_gamma(a)
}

/// Generalized binomial coefficient C(m + δ, m) = Γ(m+δ+1)/(Γ(m+1)Γ(δ+1)), δ > -1.
pub fn ln_binom_shift(m: usize, delta: f64) -> f64 {
    let m = m as f64;
    ln_gamma(m + delta + 1.0) - ln_gamma(m + 1.0) - ln_gamma(delta + 1.0)
}

/// Integer binomial with the convention C(a, b) = 0 when b < 0 or b > a.
pub fn binom_i(a: i64, b: i64) -> u128 {
    if b < 0 || a < 0 || b > a {
        return 0;
    }
    let b = b.min(a - b) as u128;
    let a = a as u128;
    let mut r: u128 = 1;
    for i in 0..b {
        r = r * (a - i) / (i + 1);
    }
    r
}

/// Surface area of the unit sphere S^{d-1}: ω_d = 2π^{d/2}/Γ(d/2).
pub fn sphere_area(d: usize) -> f64 {
    let h = d as f64 / 2.0;
    2.0 * PI.powf(h) / gamma(h)
}

/// Pairwise summation with a fixed split pattern; run-to-run identical.
pub fn pairwise_sum(values: &[f64]) -> f64 {
    const BLOCK: usize = 32;
    if values.len() <= BLOCK {
        let mut s = 0.0;
        let mut c = 0.0;
        for &v in values {
            // Neumaier
            let t = s + v;
            if s.abs() >= v.abs() {
                c += (s - t) + v;
            } else {
                c += (v - t) + s;
            }
            s = t;
        }
        return s + c;
    }
    let mid = values.len() / 2;
    pairwise_sum(&values[..mid]) + pairwise_sum(&values[mid..])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gamma_values() {
        assert!((gamma(5.0) - 24.0).abs() < 1e-12);
        assert!((gamma(0.5) - PI.sqrt()).abs() < 1e-14);
        assert!((ln_gamma(101.0) - 363.739_375_555_563_5).abs() < 1e-10);
    }

    #[test]
    fn binomials() {
        assert_eq!(binom_i(5, 2), 10);
        assert_eq!(binom_i(3, -1), 0);
        assert_eq!(binom_i(-1, -2), 0);
        assert_eq!(binom_i(2, 3), 0);
        // C(2+δ, 2) at δ = 1 is C(3,2) = 3
        assert!((ln_binom_shift(2, 1.0).exp() - 3.0).abs() < 1e-12);
    }

    #[test]
    fn sphere_areas() {
        assert!((sphere_area(2) - 2.0 * PI).abs() < 1e-13);
        assert!((sphere_area(3) - 4.0 * PI).abs() < 1e-13);
        assert!((sphere_area(4) - 2.0 * PI * PI).abs() < 1e-12);
    }

    #[test]
    fn pairwise_matches_naive_on_small_input() {
        let v: Vec<f64> = (0..1000).map(|i| 1.0 / (i as f64 + 1.0)).collect();
        let naive: f64 = v.iter().sum();
        assert!((pairwise_sum(&v) - naive).abs() < 1e-12);
    }
}
