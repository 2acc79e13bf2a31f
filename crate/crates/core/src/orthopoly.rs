//! Jacobi and Gegenbauer polynomials, the zonal kernel Z_n^λ, and the endpoint
//! Cesàro kernel k_n^δ(w_{α,β}; t, 1) of Fourier–Jacobi series.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::special::ln_gamma;

/// Tolerance for accepting arguments marginally outside [−1, 1].
const DOMAIN_SLACK: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct JacobiParams {
    alpha: f64,
    beta: f64,
}

impl JacobiParams {
    pub fn new(alpha: f64, beta: f64) -> Result<Self> {
        if !(alpha > -1.0 && beta > -1.0) || !alpha.is_finite() || !beta.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "Jacobi parameters must exceed -1, got alpha={alpha}, beta={beta}"
            )));
        }
        Ok(Self { alpha, beta })
    }

    /// α = β = λ − ½, the Gegenbauer weight (1 − t²)^{λ−½}.
    pub fn gegenbauer(lambda: f64) -> Result<Self> {
        Self::new(lambda - 0.5, lambda - 0.5)
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn swapped(&self) -> Self {
        Self {
            alpha: self.beta,
            beta: self.alpha,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CesaroOrder {
    delta: f64,
}

impl CesaroOrder {
    pub fn new(delta: f64) -> Result<Self> {
        if !(delta > -1.0) || !delta.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "Cesaro order must exceed -1, got {delta}"
            )));
        }
        Ok(Self { delta })
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }
}

/// Coefficients of P_{m+1} = (a x + b) P_m − c P_{m−1}, valid for m ≥ 1.
#[inline]
pub(crate) fn jacobi_rec(m: usize, alpha: f64, beta: f64) -> (f64, f64, f64) {
    let m = m as f64;
    let s = 2.0 * m + alpha + beta;
    let den = 2.0 * (m + 1.0) * (m + alpha + beta + 1.0) * s;
    let a = (s + 1.0) * (s + 2.0) * s / den;
    let b = (s + 1.0) * (alpha * alpha - beta * beta) / den;
    let c = 2.0 * (m + alpha) * (m + beta) * (s + 2.0) / den;
    (a, b, c)
}

/// P_1^{(α,β)}(t) = ((α+β+2)t + α − β)/2.
#[inline]
pub(crate) fn jacobi_p1(alpha: f64, beta: f64, t: f64) -> f64 {
    0.5 * ((alpha + beta + 2.0) * t + alpha - beta)
}

/// (P_n(t), P_{n−1}(t)) by forward recurrence; P_{−1} is reported as 0.
pub fn jacobi_pair(n: usize, alpha: f64, beta: f64, t: f64) -> (f64, f64) {
    if n == 0 {
        return (1.0, 0.0);
    }
    let mut p0 = 1.0;
    let mut p1 = jacobi_p1(alpha, beta, t);
    for m in 1..n {
        let (a, b, c) = jacobi_rec(m, alpha, beta);
        let p2 = (a * t + b) * p1 - c * p0;
        p0 = p1;
        p1 = p2;
    }
    (p1, p0)
}

/// P_n^{(α,β)}(t) without a domain check (the polynomial is defined everywhere).
pub fn jacobi_eval_unchecked(n: usize, alpha: f64, beta: f64, t: f64) -> f64 {
    jacobi_pair(n, alpha, beta, t).0
}

fn check_domain(t: f64) -> Result<()> {
    if !(t.abs() <= 1.0 + DOMAIN_SLACK) {
        return Err(Error::Domain(format!("argument {t} outside [-1, 1]")));
    }
    Ok(())
}

/// P_n^{(α,β)}(t) on [−1, 1] via the three-term recurrence.
pub fn jacobi_eval(n: usize, jp: JacobiParams, t: f64) -> Result<f64> {
    check_domain(t)?;
    Ok(jacobi_eval_unchecked(n, jp.alpha, jp.beta, t))
}

/// Writes P_0(t), …, P_{len−1}(t) into `out`.
pub fn jacobi_values_into(alpha: f64, beta: f64, t: f64, out: &mut [f64]) {
    let len = out.len();
    if len == 0 {
        return;
    }
    out[0] = 1.0;
    if len == 1 {
        return;
    }
    out[1] = jacobi_p1(alpha, beta, t);
    for m in 1..len - 1 {
        let (a, b, c) = jacobi_rec(m, alpha, beta);
        out[m + 1] = (a * t + b) * out[m] - c * out[m - 1];
    }
}

/// P_n^{(α,β)}(1) = (α+1)_n / n!.
pub fn jacobi_at_one(n: usize, jp: JacobiParams) -> f64 {
    let n = n as f64;
    (ln_gamma(n + jp.alpha + 1.0) - ln_gamma(jp.alpha + 1.0) - ln_gamma(n + 1.0)).exp()
}

/// C_n^λ(t) = ((2λ)_n/(λ+½)_n) P_n^{(λ−½,λ−½)}(t).
pub fn gegenbauer_eval(n: usize, lambda: f64, t: f64) -> Result<f64> {
    if !(lambda > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "Gegenbauer index must be positive, got {lambda}"
        )));
    }
    let jp = JacobiParams::gegenbauer(lambda)?;
    let p = jacobi_eval(n, jp, t)?;
    Ok(gegenbauer_ratio(n, lambda) * p)
}

fn gegenbauer_ratio(n: usize, lambda: f64) -> f64 {
    let nf = n as f64;
    (ln_gamma(2.0 * lambda + nf) - ln_gamma(2.0 * lambda) - ln_gamma(lambda + 0.5 + nf) + ln_gamma(lambda + 0.5)).exp()
}

/// Z_n^λ(t) = ((n+λ)/λ) C_n^λ(t).
pub fn zn_eval(n: usize, lambda: f64, t: f64) -> Result<f64> {
    let c = gegenbauer_eval(n, lambda, t)?;
    Ok((n as f64 + lambda) / lambda * c)
}

/// Z_n^λ extended to λ = 0 by its limit: 1 for n = 0 and 2T_n(t) otherwise.
/// This is the zonal kernel of the circle, needed for d = 2, κ = 0.
pub fn zonal_kernel(n: usize, lambda: f64, t: f64) -> Result<f64> {
    if lambda == 0.0 {
        check_domain(t)?;
        if n == 0 {
            return Ok(1.0);
        }
        let theta = t.clamp(-1.0, 1.0).acos();
        return Ok(2.0 * (n as f64 * theta).cos());
    }
    zn_eval(n, lambda, t)
}

/// Squared L²(w_{α,β}) norm h_n = ∫ P_n² (1−t)^α (1+t)^β dt.
pub fn jacobi_h_norm(n: usize, jp: JacobiParams) -> f64 {
    ln_jacobi_h_norm(n, jp.alpha, jp.beta).exp()
}

pub(crate) fn ln_jacobi_h_norm(n: usize, a: f64, b: f64) -> f64 {
    let ln2 = std::f64::consts::LN_2;
    if n == 0 {
        return (a + b + 1.0) * ln2 + ln_gamma(a + 1.0) + ln_gamma(b + 1.0) - ln_gamma(a + b + 2.0);
    }
    let nf = n as f64;
    (a + b + 1.0) * ln2 - (2.0 * nf + a + b + 1.0).ln() + ln_gamma(nf + a + 1.0) + ln_gamma(nf + b + 1.0)
        - ln_gamma(nf + a + b + 1.0)
        - ln_gamma(nf + 1.0)
}

/// h_n / h_0: the squared norm for the probability-normalized weight.
pub fn jacobi_h_norm_normalized(n: usize, jp: JacobiParams) -> f64 {
    (ln_jacobi_h_norm(n, jp.alpha, jp.beta) - ln_jacobi_h_norm(0, jp.alpha, jp.beta)).exp()
}

/// Cesàro weights r_{n,k} = C(n−k+δ, n−k)/C(n+δ, n), k = 0..=n, applied to the terms of a series,
/// by the product r_{n,k} = r_{n,k−1} (n−k+1)/(n−k+1+δ).
pub fn cesaro_weights(n: usize, delta: CesaroOrder) -> Vec<f64> {
    let mut r = vec![1.0; n + 1];
    for k in 1..=n {
        let j = (n - k + 1) as f64;
        r[k] = r[k - 1] * j / (j + delta.delta);
    }
    r
}

/// Weights A^{δ−1}_{n−k}/A^δ_n applied to the partial sums s_0..s_n; they sum to 1.
pub fn cesaro_partial_sum_weights(n: usize, delta: CesaroOrder) -> Vec<f64> {
    let d = delta.delta;
    // A^{δ−1}_j by its product recurrence (handles δ ≤ 0 without Γ(δ)).
    let mut a = vec![1.0; n + 1];
    for j in 1..=n {
        a[j] = a[j - 1] * (j as f64 + d - 1.0) / j as f64;
    }
    let mut top = 1.0;
    for j in 1..=n {
        top *= (j as f64 + d) / j as f64;
    }
    (0..=n).map(|k| a[n - k] / top).collect()
}

/// Coefficients e_k = P_k(1)/h̃_k (normalized squared norm) for k = 0..=n_max,
/// so that k_n^δ(t, 1) = Σ_k r_{n,k} e_k P_k(t). In closed form
/// e_k = (2k+α+β+1)(α+β+2)_{k−1}/(β+1)_k for k ≥ 1; the product recurrence
/// keeps the relative errors smooth in k, which matters where the series
/// cancels heavily.
pub fn endpoint_coefficients(n_max: usize, jp: JacobiParams) -> Vec<f64> {
    let (a, b) = (jp.alpha, jp.beta);
    let mut e = vec![1.0; n_max + 1];
    let mut q = 1.0 / (b + 1.0);
    for (k, ek) in e.iter_mut().enumerate().skip(1) {
        let kf = k as f64;
        if k > 1 {
            q *= (a + b + kf) / (b + kf);
        }
        *ek = (2.0 * kf + a + b + 1.0) * q;
    }
    e
}

/// Cesàro kernel at the endpoint,
/// k_n^δ(w_{α,β}; t, 1) = (1/C(n+δ,n)) Σ_k C(n−k+δ,n−k) P_k(t)P_k(1)/h̃_k,
/// with h̃_k the squared norm under the probability-normalized weight, so k_0 = 1.
pub fn cesaro_kernel_endpoint(n: usize, jp: JacobiParams, delta: CesaroOrder, t: f64) -> Result<f64> {
    check_domain(t)?;
    let r = cesaro_weights(n, delta);
    let e = endpoint_coefficients(n, jp);
    let mut p = vec![0.0; n + 1];
    jacobi_values_into(jp.alpha, jp.beta, t, &mut p);
    Ok(crate::special::pairwise_sum(
        &(0..=n).map(|k| r[k] * e[k] * p[k]).collect::<Vec<_>>(),
    ))
}

/// Reusable evaluator for t ↦ k_n^δ(w_{α,β}; t, 1) at fixed (n, δ, α, β).
#[derive(Clone, Debug)]
pub struct EndpointKernel {
    alpha: f64,
    beta: f64,
    coef: Vec<f64>,
}

impl EndpointKernel {
    pub fn new(n: usize, jp: JacobiParams, delta: CesaroOrder) -> Self {
        let r = cesaro_weights(n, delta);
        let e = endpoint_coefficients(n, jp);
        Self {
            alpha: jp.alpha,
            beta: jp.beta,
            coef: r.iter().zip(&e).map(|(a, b)| a * b).collect(),
        }
    }

    /// The partial sums grow like n^{α+3/2} while the kernel is small away
    /// from t = 1, so the terms are accumulated with Neumaier compensation.
    pub fn eval(&self, t: f64) -> f64 {
        let n = self.coef.len() - 1;
        let mut acc = self.coef[0];
        if n == 0 {
            return acc;
        }
        let mut comp = 0.0;
        let mut add = |acc: &mut f64, v: f64| {
            let s = *acc + v;
            comp += if acc.abs() >= v.abs() {
                (*acc - s) + v
            } else {
                (v - s) + *acc
            };
            *acc = s;
        };
        let mut p0 = 1.0;
        let mut p1 = jacobi_p1(self.alpha, self.beta, t);
        add(&mut acc, self.coef[1] * p1);
        for m in 1..n {
            let (a, b, c) = jacobi_rec(m, self.alpha, self.beta);
            let p2 = (a * t + b) * p1 - c * p0;
            p0 = p1;
            p1 = p2;
            add(&mut acc, self.coef[m + 1] * p1);
        }
        acc + comp
    }
}

/// Self-test of P_n^{(α+1,β+1)} = (2/(n+α+β+2)) d/dt P_{n+1}^{(α,β)} on a grid of
/// [−1, 1]; the derivative is an eighth-order central difference. Returns the
/// largest residual relative to max(1, |LHS|).
pub fn jacobi_derivative_shift(n: usize, jp: JacobiParams) -> f64 {
    const STENCIL: [f64; 4] = [4.0 / 5.0, -1.0 / 5.0, 4.0 / 105.0, -1.0 / 280.0];
    let (a, b) = (jp.alpha, jp.beta);
    let nf = n as f64;
    // Oscillation near the endpoints scales like n², so the step shrinks with n.
    let h = (0.05 / ((nf + 2.0) * (nf + 2.0))).min(1e-3);
    let scale = 2.0 / (nf + a + b + 2.0);
    let mut worst: f64 = 0.0;
    let grid = 200;
    for g in 0..=grid {
        let t = -1.0 + 2.0 * g as f64 / grid as f64;
        let mut deriv = 0.0;
        for (k, c) in STENCIL.iter().enumerate() {
            let s = (k + 1) as f64 * h;
            deriv += c * (jacobi_eval_unchecked(n + 1, a, b, t + s) - jacobi_eval_unchecked(n + 1, a, b, t - s));
        }
        deriv /= h;
        let lhs = jacobi_eval_unchecked(n, a + 1.0, b + 1.0, t);
        let r = (lhs - scale * deriv).abs() / lhs.abs().max(1.0);
        worst = worst.max(r);
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;

    fn jp(a: f64, b: f64) -> JacobiParams {
        JacobiParams::new(a, b).unwrap()
    }

    #[test]
    fn low_degrees() {
        assert_eq!(jacobi_eval(0, jp(0.3, 1.2), 0.4).unwrap(), 1.0);
        assert!((jacobi_eval(1, jp(0.0, 0.0), 0.5).unwrap() - 0.5).abs() < 1e-15);
        // Legendre P_2(t) = (3t² − 1)/2
        let t = 0.3;
        assert!((jacobi_eval(2, jp(0.0, 0.0), t).unwrap() - (3.0 * t * t - 1.0) / 2.0).abs() < 1e-15);
        assert!(jacobi_eval(3, jp(0.0, 0.0), 1.5).is_err());
        assert!(JacobiParams::new(-1.0, 0.0).is_err());
    }

    #[test]
    fn at_one() {
        for n in [0usize, 1, 5, 40] {
            let p = jp(1.5, -0.3);
            let direct = jacobi_eval(n, p, 1.0).unwrap();
            assert!((direct - jacobi_at_one(n, p)).abs() <= 1e-12 * direct.abs());
        }
    }

    #[test]
    fn gegenbauer_basics() {
        assert_eq!(gegenbauer_eval(0, 0.7, 0.2).unwrap(), 1.0);
        let l = 1.3;
        assert!((gegenbauer_eval(1, l, 0.4).unwrap() - 2.0 * l * 0.4).abs() < 1e-14);
        assert!((zn_eval(1, l, 0.4).unwrap() - 2.0 * (1.0 + l) * 0.4).abs() < 1e-13);
        assert!(gegenbauer_eval(2, 0.0, 0.1).is_err());
        // λ = 1 gives Chebyshev U_n: U_3(t) = 8t³ − 4t
        let t = 0.35;
        assert!((gegenbauer_eval(3, 1.0, t).unwrap() - (8.0 * t * t * t - 4.0 * t)).abs() < 1e-13);
    }

    #[test]
    fn zonal_limit_at_lambda_zero() {
        assert_eq!(zonal_kernel(0, 0.0, 0.3).unwrap(), 1.0);
        let t: f64 = 0.3;
        assert!((zonal_kernel(2, 0.0, t).unwrap() - 2.0 * (2.0 * t * t - 1.0)).abs() < 1e-14);
        // small λ approaches the limit
        let z = zonal_kernel(3, 1e-7, t).unwrap();
        assert!((z - zonal_kernel(3, 0.0, t).unwrap()).abs() < 1e-5);
    }

    #[test]
    fn h_norms() {
        assert!((jacobi_h_norm(0, jp(0.0, 0.0)) - 2.0).abs() < 1e-15);
        // Legendre: 2/(2n+1)
        assert!((jacobi_h_norm(3, jp(0.0, 0.0)) - 2.0 / 7.0).abs() < 1e-14);
        assert!((jacobi_h_norm_normalized(3, jp(0.0, 0.0)) - 1.0 / 7.0).abs() < 1e-14);
        // α + β + 1 = 0 is fine at n = 0
        assert!(jacobi_h_norm(0, jp(-0.5, -0.5)).is_finite());
    }

    #[test]
    fn cesaro_weights_reduce_and_sum() {
        let w = cesaro_weights(4, CesaroOrder::new(0.0).unwrap());
        assert!(w.iter().all(|&x| (x - 1.0).abs() < 1e-14));
        for delta in [-0.5, 0.0, 0.7, 2.0, 5.5] {
            for n in [0usize, 1, 10, 300] {
                let s: f64 = cesaro_partial_sum_weights(n, CesaroOrder::new(delta).unwrap())
                    .iter()
                    .sum();
                assert!((s - 1.0).abs() < 1e-12, "delta {delta} n {n}: {s}");
            }
        }
        assert!(CesaroOrder::new(-1.0).is_err());
    }

    #[test]
    fn endpoint_kernel_small_cases() {
        let p = jp(0.0, 0.0);
        let d0 = CesaroOrder::new(0.0).unwrap();
        assert!((cesaro_kernel_endpoint(0, p, d0, 0.3).unwrap() - 1.0).abs() < 1e-15);
        // δ = 0, n = 2, Legendre, normalized norms 1, 1/3, 1/5.
        let t: f64 = 0.3;
        let expect = 1.0 + 3.0 * t + 5.0 * (3.0 * t * t - 1.0) / 2.0;
        assert!((cesaro_kernel_endpoint(2, p, d0, t).unwrap() - expect).abs() < 1e-13);
        let k = EndpointKernel::new(2, p, d0);
        assert!((k.eval(t) - expect).abs() < 1e-13);
    }

    #[test]
    fn derivative_shift_identity() {
        assert!(jacobi_derivative_shift(0, jp(0.0, 0.0)) < 1e-10);
        for a in [-0.4, 0.0, 1.5, 3.0] {
            for b in [-0.4, 0.0, 1.5, 3.0] {
                for n in [1usize, 7, 20, 40] {
                    let r = jacobi_derivative_shift(n, jp(a, b));
                    assert!(r < 1e-8, "n={n} a={a} b={b}: {r}");
                }
            }
        }
    }
}
