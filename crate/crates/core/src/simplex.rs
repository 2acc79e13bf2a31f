//! Integration over the homogeneous simplex {t ∈ ℝ^d : t_i ≥ 0, Σ t_i = 1}
//! against the Dirichlet weight (t_0 ⋯ t_{d−1})^{κ−1}.
//!
//! The tensor rule uses the triangular substitution
//! t_j = u_j Π_{i<j}(1−u_i) for j = 1..d−1, t_0 = Π_i (1−u_i).
//! Collecting the Jacobian Π_j (1−u_j)^{d−1−j} with the weight, axis j carries
//! u_j^{κ−1}(1−u_j)^{(d−j)κ−1}, so every singular power is absorbed by a
//! Gauss–Jacobi rule.

use std::fmt::Write as _;

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::gauss::gauss_jacobi_unit;
use crate::params::rational_to_f64;
use crate::poly::monomials_of_degree;
use crate::special::{ln_gamma, pairwise_sum};

/// Highest total degree checked against the closed-form moments when a rule is built.
pub const VALIDATION_DEGREE: u32 = 6;
pub const VALIDATION_TOL: f64 = 1e-10;

/// Default per-axis order for integrands f(⟨x,t⟩) with f of degree n.
pub fn default_order(n: usize) -> usize {
    32.max(n.div_ceil(2) + 10)
}

/// Closed-form Dirichlet moment ∫ t^α (t_0⋯t_{d−1})^{κ−1} dt = Π Γ(κ+α_i)/Γ(dκ+|α|).
#[derive(Clone, Debug, PartialEq)]
pub struct DirichletMoment {
    /// The moment as a float.
    pub value: f64,
    /// Total mass Γ(κ)^d/Γ(dκ), the common transcendental factor.
    pub mass: f64,
    /// Exact ratio value/mass = Π (κ)_{α_i} / (dκ)_{|α|}.
    pub ratio: BigRational,
}

pub fn dirichlet_moment(d: usize, kappa: &BigRational, alpha: &[u32]) -> Result<DirichletMoment> {
    if alpha.len() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            got: alpha.len(),
        });
    }
    if kappa <= &BigRational::zero() {
        return Err(Error::InvalidParameter(format!(
            "Dirichlet weight needs kappa > 0, got {kappa}"
        )));
    }
    let ratio = moment_ratio(d, kappa, alpha);
    let k = rational_to_f64(kappa);
    let mass = (d as f64 * ln_gamma(k) - ln_gamma(d as f64 * k)).exp();
    Ok(DirichletMoment {
        value: mass * rational_to_f64(&ratio),
        mass,
        ratio,
    })
}

/// Π_i (κ)_{α_i} / (dκ)_{|α|}, exact.
pub fn moment_ratio(d: usize, kappa: &BigRational, alpha: &[u32]) -> BigRational {
    let mut num = BigRational::one();
    for &a in alpha {
        num *= rising(kappa, a);
    }
    let dk = kappa * BigRational::from_integer(d.into());
    num / rising(&dk, alpha.iter().sum())
}

/// Rising factorial (a)_n.
pub fn rising(a: &BigRational, n: u32) -> BigRational {
    let mut r = BigRational::one();
    let mut x = a.clone();
    for _ in 0..n {
        r *= &x;
        x += BigRational::one();
    }
    r
}

#[derive(Clone, Debug)]
pub struct SimplexRule {
    d: usize,
    kappa: f64,
    order: usize,
    /// Row-major, d homogeneous coordinates per node.
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl SimplexRule {
    /// Tensor Gauss–Jacobi rule with `order` points per axis, validated against
    /// the closed-form moments of total degree ≤ min(6, 2·order−1).
    pub fn build(d: usize, kappa: &BigRational, order: usize) -> Result<Self> {
        let rule = Self::build_unchecked(d, rational_to_f64(kappa), order)?;
        rule.validate(kappa)?;
        Ok(rule)
    }

    /// Same construction for a floating κ; validation uses float moments.
    pub fn build_f64(d: usize, kappa: f64, order: usize) -> Result<Self> {
        let rule = Self::build_unchecked(d, kappa, order)?;
        let exact =
            BigRational::from_float(kappa).ok_or_else(|| Error::InvalidParameter(format!("bad kappa {kappa}")))?;
        rule.validate(&exact)?;
        Ok(rule)
    }

    fn build_unchecked(d: usize, kappa: f64, order: usize) -> Result<Self> {
        if d < 2 {
            return Err(Error::InvalidParameter(format!("simplex rule needs d >= 2, got {d}")));
        }
        if !(kappa > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "simplex rule needs kappa > 0, got {kappa}"
            )));
        }
        if order == 0 {
            return Err(Error::InvalidParameter("per-axis order must be at least 1".into()));
        }
        let axes: Vec<_> = (1..d)
            .map(|j| gauss_jacobi_unit(order, kappa - 1.0, (d - j) as f64 * kappa - 1.0))
            .collect::<Result<_>>()?;
        let count = order.pow((d - 1) as u32);
        let mut nodes = Vec::with_capacity(count * d);
        let mut weights = Vec::with_capacity(count);
        let mut idx = vec![0usize; d - 1];
        for _ in 0..count {
            let mut rest = 1.0;
            let mut w = 1.0;
            let start = nodes.len();
            nodes.push(0.0);
            for (j, axis) in axes.iter().enumerate() {
                let u = axis.nodes[idx[j]];
                w *= axis.weights[idx[j]];
                nodes.push(rest * u);
                rest *= 1.0 - u;
            }
            nodes[start] = rest;
            weights.push(w);
            // odometer, last axis fastest
            for j in (0..d - 1).rev() {
                idx[j] += 1;
                if idx[j] < order {
                    break;
                }
                idx[j] = 0;
            }
        }
        Ok(Self {
            d,
            kappa,
            order,
            nodes,
            weights,
        })
    }

    fn validate(&self, kappa: &BigRational) -> Result<()> {
        let top = VALIDATION_DEGREE.min(2 * self.order as u32 - 1);
        for deg in 0..=top {
            for m in monomials_of_degree(self.d, deg) {
                let exact = dirichlet_moment(self.d, kappa, m.exponents())?;
                let got = self.integrate(|t| t.iter().zip(m.exponents()).map(|(&x, &e)| x.powi(e as i32)).product())?;
                let rel = ((got - exact.value) / exact.value).abs();
                if !(rel <= VALIDATION_TOL) {
                    return Err(Error::MomentValidation {
                        alpha: m.exponents().to_vec(),
                        rel_err: rel,
                    });
                }
            }
        }
        Ok(())
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn kappa(&self) -> f64 {
        self.kappa
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn node(&self, k: usize) -> &[f64] {
        &self.nodes[k * self.d..(k + 1) * self.d]
    }

    pub fn nodes(&self) -> impl Iterator<Item = &[f64]> {
        self.nodes.chunks_exact(self.d)
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn mass(&self) -> f64 {
        pairwise_sum(&self.weights)
    }

    /// Σ_k w_k g(t_k), summed pairwise in node order.
    pub fn integrate<G: Fn(&[f64]) -> f64>(&self, g: G) -> Result<f64> {
        let mut terms = Vec::with_capacity(self.len());
        for (k, (t, w)) in self.nodes().zip(&self.weights).enumerate() {
            let v = g(t);
            if !v.is_finite() {
                return Err(Error::NonFinite(k));
            }
            terms.push(w * v);
        }
        Ok(pairwise_sum(&terms))
    }

    /// Parallel node evaluation; the reduction is the same pairwise tree, so the
    /// result is identical to [`SimplexRule::integrate`].
    pub fn integrate_par<G: Fn(&[f64]) -> f64 + Sync>(&self, g: G) -> Result<f64> {
        let vals: Vec<f64> = self.nodes.par_chunks_exact(self.d).map(&g).collect();
        let mut terms = Vec::with_capacity(vals.len());
        for (k, (v, w)) in vals.iter().zip(&self.weights).enumerate() {
            if !v.is_finite() {
                return Err(Error::NonFinite(k));
            }
            terms.push(w * v);
        }
        Ok(pairwise_sum(&terms))
    }

    pub fn integrate_complex<G: Fn(&[f64]) -> Complex64>(&self, g: G) -> Result<Complex64> {
        let mut re = Vec::with_capacity(self.len());
        let mut im = Vec::with_capacity(self.len());
        for (k, (t, w)) in self.nodes().zip(&self.weights).enumerate() {
            let v = g(t);
            if !(v.re.is_finite() && v.im.is_finite()) {
                return Err(Error::NonFinite(k));
            }
            re.push(w * v.re);
            im.push(w * v.im);
        }
        Ok(Complex64::new(pairwise_sum(&re), pairwise_sum(&im)))
    }

    /// Debug dump: header `w,t0,...` then one node per line.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("w");
        for i in 0..self.d {
            let _ = write!(s, ",t{i}");
        }
        s.push('\n');
        for (t, w) in self.nodes().zip(&self.weights) {
            let _ = write!(s, "{w:e}");
            for x in t {
                let _ = write!(s, ",{x:e}");
            }
            s.push('\n');
        }
        s
    }
}
