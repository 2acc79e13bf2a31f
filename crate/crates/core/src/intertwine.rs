//! The intertwining operator V_κ of S_d.
//!
//! For F(x) = f(x_ℓ),
//! V_κF(x) = c_κ ∫ f(x_1t_0 + ⋯ + x_dt_{d−1}) t_{ℓ−1} (t_0⋯t_{d−1})^{κ−1} dt
//! over the homogeneous simplex. For d = 2 every function has the representation
//! V_κf(x) = c_κ ∫ f(x_1t_0 + x_2t_1, x_1t_1 + x_2t_0) t_0 (t_0t_1)^{κ−1} dt.
//! A representation for generic functions of d > 2 variables is not known, so
//! the d > 2 entry points only accept functions of one coordinate.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gauss::gauss_jacobi;
use crate::harmonics::SphereRule;
use crate::params::KappaParams;
use crate::poly::{monomials_of_degree, Monomial, Polynomial};
use crate::simplex::{moment_ratio, SimplexRule};
use crate::special::{gamma, ln_gamma};

/// F(x_1, …, x_d) = f(x_ℓ), with ℓ 1-based.
#[derive(Clone, Copy)]
pub struct AxisFunction<F> {
    pub axis: usize,
    pub f: F,
}

impl<F: Fn(f64) -> f64> AxisFunction<F> {
    pub fn new(axis: usize, f: F) -> Self {
        Self { axis, f }
    }
}

fn check_rule(params: &KappaParams, rule: &SimplexRule) -> Result<()> {
    if rule.d() != params.d() || (rule.kappa() - params.kappa_f64()).abs() > 1e-12 * params.kappa_f64().max(1.0) {
        return Err(Error::RuleMismatch(format!(
            "rule built for (d={}, kappa={}), parameters are (d={}, kappa={})",
            rule.d(),
            rule.kappa(),
            params.d(),
            params.kappa_f64()
        )));
    }
    Ok(())
}

fn check_point(x: &[f64], d: usize) -> Result<()> {
    if x.len() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            got: x.len(),
        });
    }
    Ok(())
}

fn check_axis(axis: usize, d: usize) -> Result<()> {
    if axis == 0 || axis > d {
        return Err(Error::AxisOutOfRange { axis, dim: d });
    }
    Ok(())
}

#[inline]
pub(crate) fn dot(x: &[f64], t: &[f64]) -> f64 {
    x.iter().zip(t).map(|(a, b)| a * b).sum()
}

/// V_κ[f(x_ℓ)](x) by simplex quadrature; κ = 0 returns f(x_ℓ) directly.
pub fn vk_axis<F: Fn(f64) -> f64>(
    func: &AxisFunction<F>,
    x: &[f64],
    params: &KappaParams,
    rule: &SimplexRule,
) -> Result<f64> {
    let d = params.d();
    check_axis(func.axis, d)?;
    check_point(x, d)?;
    if params.is_zero() {
        return Ok((func.f)(x[func.axis - 1]));
    }
    check_rule(params, rule)?;
    let l = func.axis - 1;
    let s = rule.integrate(|t| (func.f)(dot(x, t)) * t[l])?;
    Ok(params.c_kappa() * s)
}

/// Complex-valued profile version of [`vk_axis`].
pub fn vk_axis_complex<F: Fn(f64) -> Complex64>(
    axis: usize,
    f: F,
    x: &[f64],
    params: &KappaParams,
    rule: &SimplexRule,
) -> Result<Complex64> {
    let d = params.d();
    check_axis(axis, d)?;
    check_point(x, d)?;
    if params.is_zero() {
        return Ok(f(x[axis - 1]));
    }
    check_rule(params, rule)?;
    let l = axis - 1;
    let s = rule.integrate_complex(|t| f(dot(x, t)) * t[l])?;
    Ok(s * params.c_kappa())
}

/// c_κ ∫ t^β (t_0⋯t_{d−1})^{κ−1} dt = d · Π(κ)_{β_i}/(dκ)_{|β|}, exact.
fn normalized_moment(d: usize, kappa: &BigRational, beta: &[u32]) -> BigRational {
    BigRational::from_integer(d.into()) * moment_ratio(d, kappa, beta)
}

fn multinomial(n: u32, parts: &[u32]) -> BigInt {
    let mut r = factorial(n);
    for &p in parts {
        r /= factorial(p);
    }
    r
}

fn factorial(n: u32) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

fn binomial(n: u32, k: u32) -> BigInt {
    factorial(n) / (factorial(k) * factorial(n - k))
}

/// V_κ[x_ℓ^n] as an exact polynomial:
/// Σ_{|α|=n} (n choose α) x^α · c_κ∫ t^{α+e_{ℓ−1}} (t_0⋯t_{d−1})^{κ−1} dt.
pub fn vk_monomial_exact(n: u32, axis: usize, params: &KappaParams) -> Result<Polynomial> {
    let d = params.d();
    check_axis(axis, d)?;
    if params.is_zero() {
        let mut e = vec![0; d];
        e[axis - 1] = n;
        return Polynomial::from_terms(d, [(e, BigRational::one())]);
    }
    let mut out = Polynomial::zero(d);
    for m in monomials_of_degree(d, n) {
        let mut beta = m.exponents().to_vec();
        beta[axis - 1] += 1;
        let c = BigRational::from_integer(multinomial(n, m.exponents())) * normalized_moment(d, params.kappa(), &beta);
        out.add_term(m, c);
    }
    Ok(out)
}

/// V_κ applied to a polynomial in x_ℓ, Σ_k c_k x_ℓ^k, exactly.
pub fn vk_axis_polynomial_exact(coeffs: &[BigRational], axis: usize, params: &KappaParams) -> Result<Polynomial> {
    let mut out = Polynomial::zero(params.d());
    for (k, c) in coeffs.iter().enumerate() {
        if !c.is_zero() {
            out = out + vk_monomial_exact(k as u32, axis, params)?.scale(c);
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntertwiningFailure {
    pub d: usize,
    pub kappa: String,
    pub ell: usize,
    pub n: u32,
    pub i: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntertwiningReport {
    pub passed: bool,
    pub checked: usize,
    pub failed: Vec<IntertwiningFailure>,
}

/// Checks D_i V_κ[x_ℓ^n] = V_κ[∂_i x_ℓ^n] exactly for all ℓ, i ≤ d and n ≤ n_max.
pub fn verify_intertwining(n_max: u32, params: &KappaParams) -> Result<IntertwiningReport> {
    let d = params.d();
    let mut failed = Vec::new();
    let mut checked = 0;
    for ell in 1..=d {
        let mut images = Vec::with_capacity(n_max as usize + 1);
        for n in 0..=n_max {
            images.push(vk_monomial_exact(n, ell, params)?);
        }
        for n in 0..=n_max {
            for i in 1..=d {
                let lhs = images[n as usize].dunkl_apply(i, params)?;
                let rhs = if i == ell && n > 0 {
                    images[n as usize - 1].scale(&BigRational::from_integer(n.into()))
                } else {
                    Polynomial::zero(d)
                };
                checked += 1;
                if lhs != rhs {
                    failed.push(IntertwiningFailure {
                        d,
                        kappa: params.kappa().to_string(),
                        ell,
                        n,
                        i,
                    });
                }
            }
        }
    }
    Ok(IntertwiningReport {
        passed: failed.is_empty(),
        checked,
        failed,
    })
}

fn check_d2(params: &KappaParams) -> Result<()> {
    if params.d() != 2 {
        return Err(Error::Unsupported(format!(
            "the generic representation is only available for d = 2, got d = {}",
            params.d()
        )));
    }
    Ok(())
}

/// V_κ f(x) for an arbitrary function of two variables (d = 2).
pub fn vk_d2_generic<F: Fn(f64, f64) -> f64>(f: F, x: &[f64], params: &KappaParams, rule: &SimplexRule) -> Result<f64> {
    check_d2(params)?;
    check_point(x, 2)?;
    if params.is_zero() {
        return Ok(f(x[0], x[1]));
    }
    check_rule(params, rule)?;
    let s = rule.integrate(|t| f(x[0] * t[0] + x[1] * t[1], x[0] * t[1] + x[1] * t[0]) * t[0])?;
    Ok(params.c_kappa() * s)
}

pub fn vk_d2_generic_complex<F: Fn(f64, f64) -> Complex64>(
    f: F,
    x: &[f64],
    params: &KappaParams,
    rule: &SimplexRule,
) -> Result<Complex64> {
    check_d2(params)?;
    check_point(x, 2)?;
    if params.is_zero() {
        return Ok(f(x[0], x[1]));
    }
    check_rule(params, rule)?;
    let s = rule.integrate_complex(|t| f(x[0] * t[0] + x[1] * t[1], x[0] * t[1] + x[1] * t[0]) * t[0])?;
    Ok(s * params.c_kappa())
}

/// Exact image of a polynomial under the d = 2 representation: each
/// y_1^a y_2^b is expanded binomially in (t_0, t_1) and integrated in closed form.
pub fn vk_d2_exact(p: &Polynomial, params: &KappaParams) -> Result<Polynomial> {
    check_d2(params)?;
    if p.dim() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            got: p.dim(),
        });
    }
    if params.is_zero() {
        return Ok(p.clone());
    }
    let mut out = Polynomial::zero(2);
    for (m, c) in p.terms() {
        let (a, b) = (m.exponents()[0], m.exponents()[1]);
        for i in 0..=a {
            for j in 0..=b {
                // y_1^a: C(a,i) x_1^i t_0^i x_2^{a−i} t_1^{a−i}
                // y_2^b: C(b,j) x_1^j t_1^j x_2^{b−j} t_0^{b−j}
                let beta = [i + b - j + 1, a - i + j];
                let coef = BigRational::from_integer(binomial(a, i) * binomial(b, j))
                    * normalized_moment(2, params.kappa(), &beta)
                    * c;
                out.add_term(Monomial::new(vec![i + j, a + b - i - j]), coef);
            }
        }
    }
    Ok(out)
}

/// Product formula for the sign-change group Z_2^d:
/// V_κf(x) = c ∫_{[−1,1]^d} f(x_1t_1, …, x_dt_d) Π (1+t_i)(1−t_i²)^{κ_i−1} dt,
/// normalized so that f ≡ 1 maps to 1. Axes with κ_i = 0 are point masses at t_i = 1.
pub fn vk_z2d<F: Fn(&[f64]) -> f64>(f: F, x: &[f64], kappas: &[f64], order: usize) -> Result<f64> {
    if x.len() != kappas.len() {
        return Err(Error::DimensionMismatch {
            expected: kappas.len(),
            got: x.len(),
        });
    }
    if let Some(k) = kappas.iter().find(|&&k| !(k >= 0.0)) {
        return Err(Error::InvalidParameter(format!(
            "multiplicities must be non-negative, got {k}"
        )));
    }
    let d = x.len();
    // Per axis: nodes t and normalized weights of (1+t)(1−t²)^{κ−1}.
    let mut axes: Vec<(Vec<f64>, Vec<f64>)> = Vec::with_capacity(d);
    for &k in kappas {
        if k == 0.0 {
            axes.push((vec![1.0], vec![1.0]));
            continue;
        }
        let r = gauss_jacobi(order, k - 1.0, k - 1.0)?;
        let w: Vec<f64> = r.nodes.iter().zip(&r.weights).map(|(t, w)| w * (1.0 + t)).collect();
        let total: f64 = w.iter().sum();
        axes.push((r.nodes, w.into_iter().map(|v| v / total).collect()));
    }
    let count: usize = axes.iter().map(|a| a.0.len()).product();
    let mut idx = vec![0usize; d];
    let mut y = vec![0.0; d];
    let mut terms = Vec::with_capacity(count);
    for k in 0..count {
        let mut w = 1.0;
        for i in 0..d {
            y[i] = x[i] * axes[i].0[idx[i]];
            w *= axes[i].1[idx[i]];
        }
        let v = f(&y);
        if !v.is_finite() {
            return Err(Error::NonFinite(k));
        }
        terms.push(w * v);
        for i in (0..d).rev() {
            idx[i] += 1;
            if idx[i] < axes[i].0.len() {
                break;
            }
            idx[i] = 0;
        }
    }
    Ok(crate::special::pairwise_sum(&terms))
}

/// b_λ = Γ(λ+1)/(√π Γ(λ+½)), normalizing (1−t²)^{λ−½} on [−1, 1].
pub fn b_lambda(lambda: f64) -> f64 {
    (ln_gamma(lambda + 1.0) - ln_gamma(lambda + 0.5)).exp() / gamma(0.5)
}

/// Both sides of the sphere-average identity
/// a_κ ∫_S V_κ[f(⟨x,·⟩)](y) h_κ²(y) dσ(y) = b_λ ∫_{−1}^{1} f(‖x‖t)(1−t²)^{λ−½} dt.
///
/// For d > 2 the left side needs V_κ of a ridge function, which is available
/// only when x is a multiple of a coordinate vector; d = 2 accepts any x.
pub fn vk_sphere_average<F: Fn(f64) -> f64 + Sync>(
    f: F,
    x: &[f64],
    params: &KappaParams,
    sphere: &SphereRule,
    simplex: &SimplexRule,
    line_order: usize,
) -> Result<(f64, f64)> {
    let d = params.d();
    check_point(x, d)?;
    if sphere.d() != d {
        return Err(Error::RuleMismatch(format!(
            "sphere rule has d={}, parameters d={d}",
            sphere.d()
        )));
    }
    let norm = x.iter().map(|v| v * v).sum::<f64>().sqrt();
    let a = params.a_kappa();

    let lhs = if d == 2 {
        let inner = |y: &[f64]| vk_d2_generic(|z1, z2| f(x[0] * z1 + x[1] * z2), y, params, simplex);
        sphere_integral(sphere, params, inner)?
    } else {
        let nonzero: Vec<usize> = (0..d).filter(|&i| x[i] != 0.0).collect();
        match nonzero.as_slice() {
            [] => {
                let f0 = f(0.0);
                sphere_integral(sphere, params, |_| Ok(f0))?
            }
            [l] => {
                let c = x[*l];
                let func = AxisFunction::new(l + 1, |s: f64| f(c * s));
                sphere_integral(sphere, params, |y| vk_axis(&func, y, params, simplex))?
            }
            _ => {
                return Err(Error::Unsupported(
                    "for d > 2 the sphere average needs x on a coordinate axis".into(),
                ))
            }
        }
    } * a;

    let lambda = params.lambda();
    let rhs = if lambda == 0.0 {
        // b_λ(1−t²)^{−½}dt → dt/π on [−1,1]; Gauss–Chebyshev.
        let r = gauss_jacobi(line_order, -0.5, -0.5)?;
        r.integrate(|t| f(norm * t)) / std::f64::consts::PI
    } else {
        let r = gauss_jacobi(line_order, lambda - 0.5, lambda - 0.5)?;
        b_lambda(lambda) * r.integrate(|t| f(norm * t))
    };
    Ok((lhs, rhs))
}

fn sphere_integral<G: Fn(&[f64]) -> Result<f64> + Sync>(
    sphere: &SphereRule,
    params: &KappaParams,
    g: G,
) -> Result<f64> {
    use rayon::prelude::*;
    let vals: Vec<Result<f64>> = sphere
        .nodes_flat()
        .par_chunks_exact(sphere.d())
        .zip(sphere.weights().par_iter())
        .map(|(y, w)| Ok(w * crate::harmonics::hweight_sq(y, params) * g(y)?))
        .collect();
    let vals: Vec<f64> = vals.into_iter().collect::<Result<_>>()?;
    Ok(crate::special::pairwise_sum(&vals))
}
