//! Cesàro kernels K_n^δ(h_κ²; x, e_ℓ) = V_κ[k_n^δ(w_{λ_κ}; ⟨·, e_ℓ⟩, 1)](x).
//!
//! Two routes compute the projection kernels P_k(h_κ²; x, e_ℓ) for all k ≤ K:
//! simplex quadrature for any κ, and, for integer κ and d ≥ 3, an exact
//! evaluation through confluent divided differences. With integer κ the
//! integral representation is a Hermite–Genocchi formula,
//! V_κ g(x) = (dκ)! G[x_1^{(κ)}, …, x_ℓ^{(κ+1)}, …, x_d^{(κ)}], G^{(dκ)} = g,
//! and the dκ-fold antiderivative of P_k^{(a,a)} is again a Jacobi polynomial:
//! P_k^{(a,a)} = d^N/dt^N [Π_{j=1}^N 2/(k+2a−j+1) · P_{k+N}^{(a−N,a−N)}].

use crate::error::{Error, Result};
use crate::harmonics::{check_unit, hweight_sq, SphereRule};
use crate::intertwine::{vk_axis, AxisFunction};
use crate::orthopoly::{
    endpoint_coefficients, jacobi_rec, jacobi_values_into, CesaroOrder, EndpointKernel, JacobiParams,
};
use crate::params::KappaParams;
use crate::simplex::{default_order, SimplexRule};

/// K_n^δ(h_κ²; x, e_ℓ) by simplex quadrature of the endpoint kernel,
/// c_κ ∫ k_n^δ(w_{λ_κ}; ⟨x,t⟩, 1) t_{ℓ−1} (t_0⋯t_{d−1})^{κ−1} dt.
pub fn cesaro_kernel_axis(
    n: usize,
    delta: CesaroOrder,
    ell: usize,
    x: &[f64],
    params: &KappaParams,
    rule: &SimplexRule,
) -> Result<f64> {
    check_unit(x)?;
    let jp = JacobiParams::gegenbauer(params.lambda().max(0.0))?;
    let k = EndpointKernel::new(n, jp, delta);
    vk_axis(
        &AxisFunction::new(ell, |s: f64| k.eval(s.clamp(-1.0, 1.0))),
        x,
        params,
        rule,
    )
}

/// S_n^δ(h_κ²; f)(e_ℓ) = a_κ ∫ f(y) K_n^δ(h_κ²; y, e_ℓ) h_κ²(y) dσ(y) by the
/// sphere rule; exact when the rule integrates f K_n^δ h_κ² exactly.
pub fn cesaro_mean_axis<F: Fn(&[f64]) -> f64>(
    f: F,
    n: usize,
    delta: CesaroOrder,
    ell: usize,
    params: &KappaParams,
    rule: &SphereRule,
) -> Result<f64> {
    if rule.d() != params.d() {
        return Err(Error::RuleMismatch(format!(
            "sphere rule d={}, parameters d={}",
            rule.d(),
            params.d()
        )));
    }
    let proj = AxisProjections::new(params, ell, n)?;
    let table = CesaroTable::new(n, delta.delta());
    let mut v = vec![0.0; n + 1];
    let (mut scratch, mut k) = (Vec::new(), Vec::with_capacity(1));
    let mut terms = Vec::with_capacity(rule.len());
    for (y, w) in rule.nodes().zip(rule.weights()) {
        proj.values_into(y, &mut v, &mut scratch)?;
        table.means(&v, n..=n, &mut k);
        terms.push(w * f(y) * k[0] * hweight_sq(y, params));
    }
    Ok(params.a_kappa() * crate::special::pairwise_sum(&terms))
}

/// A^δ_j = C(j+δ, j) for j = 0..=n by the product recurrence.
pub fn cesaro_numbers(n: usize, delta: f64) -> Vec<f64> {
    let mut a = Vec::with_capacity(n + 1);
    a.push(1.0);
    for j in 1..=n {
        a.push(a[j - 1] * (j as f64 + delta) / j as f64);
    }
    a
}

/// Cesàro numbers A^δ_0..A^δ_n together with their reversal, so each mean is
/// a forward dot product.
#[derive(Clone, Debug)]
pub struct CesaroTable {
    a: Vec<f64>,
    rev: Vec<f64>,
}

impl CesaroTable {
    pub fn new(n: usize, delta: f64) -> Self {
        let a = cesaro_numbers(n, delta);
        let rev = a.iter().rev().copied().collect();
        Self { a, rev }
    }

    pub fn n_max(&self) -> usize {
        self.a.len() - 1
    }

    /// K_m^δ = Σ_{k≤m} (A^δ_{m−k}/A^δ_m) v_k for m in `rows`, given v_0..v_{max row}.
    pub fn means(&self, v: &[f64], rows: std::ops::RangeInclusive<usize>, out: &mut Vec<f64>) {
        let top = self.n_max();
        out.clear();
        for m in rows {
            let s = dot4(&self.rev[top - m..], &v[..=m]);
            out.push(s / self.a[m]);
        }
    }
}

/// Dot product with four independent accumulators.
#[inline]
fn dot4(a: &[f64], b: &[f64]) -> f64 {
    let n = b.len();
    let (mut s0, mut s1, mut s2, mut s3) = (0.0, 0.0, 0.0, 0.0);
    let mut i = 0;
    while i + 4 <= n {
        s0 += a[i] * b[i];
        s1 += a[i + 1] * b[i + 1];
        s2 += a[i + 2] * b[i + 2];
        s3 += a[i + 3] * b[i + 3];
        i += 4;
    }
    while i < n {
        s0 += a[i] * b[i];
        i += 1;
    }
    (s0 + s1) + (s2 + s3)
}

/// How the projection kernels are evaluated.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum KernelRoute {
    /// κ = 0: P_k(x, e_ℓ) = Z_k^λ(x_ℓ).
    Identity,
    DividedDifference,
    Quadrature,
}

impl KernelRoute {
    pub fn name(&self) -> &'static str {
        match self {
            KernelRoute::Identity => "identity",
            KernelRoute::DividedDifference => "divided-difference",
            KernelRoute::Quadrature => "quadrature",
        }
    }
}

/// Evaluator of v_k(x) = P_k(h_κ²; x, e_ℓ) for k = 0..=k_max.
#[derive(Clone, Debug)]
pub struct AxisProjections {
    d: usize,
    ell: usize,
    k_max: usize,
    route: KernelRoute,
    /// e_k = P_k(1)/h̃_k for the Gegenbauer weight of index λ_κ.
    e: Vec<f64>,
    a: f64,
    c_kappa: f64,
    rule: Option<SimplexRule>,
    dd: Option<DividedDifference>,
}

#[derive(Clone, Debug)]
struct DividedDifference {
    /// Multiplicity of each coordinate among the N+1 nodes.
    mult: Vec<usize>,
    n_nodes: usize,
    /// P_1^{(b,b)}(t) = c1·t.
    c1: f64,
    /// Recurrence coefficients (A_m, B_m, C_m) for m = 1..k_max+N.
    rec: Vec<(f64, f64, f64)>,
    /// e_k · Π_{j=1}^N 2j/(k+2a−j+1).
    scale: Vec<f64>,
}

impl AxisProjections {
    /// Picks the exact route when κ is an integer and d ≥ 3, quadrature otherwise.
    pub fn new(params: &KappaParams, ell: usize, k_max: usize) -> Result<Self> {
        if params.is_zero() {
            return Self::build(params, ell, k_max, KernelRoute::Identity, None);
        }
        match params.integer_kappa() {
            Some(_) if params.d() >= 3 => Self::build(params, ell, k_max, KernelRoute::DividedDifference, None),
            _ => {
                let rule = SimplexRule::build(params.d(), params.kappa(), default_order(k_max + 1))?;
                Self::build(params, ell, k_max, KernelRoute::Quadrature, Some(rule))
            }
        }
    }

    /// Forces the quadrature route with a given rule.
    pub fn with_rule(params: &KappaParams, ell: usize, k_max: usize, rule: SimplexRule) -> Result<Self> {
        if params.is_zero() {
            return Self::build(params, ell, k_max, KernelRoute::Identity, None);
        }
        Self::build(params, ell, k_max, KernelRoute::Quadrature, Some(rule))
    }

    fn build(
        params: &KappaParams,
        ell: usize,
        k_max: usize,
        route: KernelRoute,
        rule: Option<SimplexRule>,
    ) -> Result<Self> {
        let d = params.d();
        if ell == 0 || ell > d {
            return Err(Error::AxisOutOfRange { axis: ell, dim: d });
        }
        if let Some(r) = &rule {
            if r.d() != d || (r.kappa() - params.kappa_f64()).abs() > 1e-12 * params.kappa_f64().max(1.0) {
                return Err(Error::RuleMismatch(format!(
                    "rule built for (d={}, kappa={}), parameters are (d={}, kappa={})",
                    r.d(),
                    r.kappa(),
                    d,
                    params.kappa_f64()
                )));
            }
        }
        let lambda = params.lambda();
        let a = lambda - 0.5;
        let jp = JacobiParams::new(a, a)?;
        let e = endpoint_coefficients(k_max, jp);
        let dd = if route == KernelRoute::DividedDifference {
            let kappa = params
                .integer_kappa()
                .ok_or_else(|| Error::Unsupported("the divided-difference route needs an integer kappa".into()))?
                as usize;
            if d < 3 {
                return Err(Error::Unsupported("the divided-difference route needs d >= 3".into()));
            }
            let big_n = d * kappa;
            let b = a - big_n as f64;
            let mut mult = vec![kappa; d];
            mult[ell - 1] += 1;
            let rec = (1..k_max + big_n).map(|m| jacobi_rec(m, b, b)).collect();
            let scale = (0..=k_max)
                .map(|k| {
                    let mut s = e[k];
                    for j in 1..=big_n {
                        s *= 2.0 * j as f64 / (k as f64 + 2.0 * a - j as f64 + 1.0);
                    }
                    s
                })
                .collect();
            Some(DividedDifference {
                mult,
                n_nodes: big_n + 1,
                c1: b + 1.0,
                rec,
                scale,
            })
        } else {
            None
        };
        Ok(Self {
            d,
            ell,
            k_max,
            route,
            e,
            a,
            c_kappa: params.c_kappa(),
            rule,
            dd,
        })
    }

    pub fn route(&self) -> KernelRoute {
        self.route
    }

    pub fn k_max(&self) -> usize {
        self.k_max
    }

    pub fn ell(&self) -> usize {
        self.ell
    }

    /// Fills out[k] = P_k(h_κ²; x, e_ℓ) for k < out.len() ≤ k_max + 1.
    /// `scratch` is reused across calls to avoid allocation.
    pub fn values_into(&self, x: &[f64], out: &mut [f64], scratch: &mut Vec<f64>) -> Result<()> {
        if x.len() != self.d {
            return Err(Error::DimensionMismatch {
                expected: self.d,
                got: x.len(),
            });
        }
        let len = out.len();
        if len == 0 {
            return Ok(());
        }
        if len > self.k_max + 1 {
            return Err(Error::InvalidParameter(format!(
                "requested {} kernels, evaluator built for k <= {}",
                len - 1,
                self.k_max
            )));
        }
        match self.route {
            KernelRoute::Identity => {
                jacobi_values_into(self.a, self.a, x[self.ell - 1].clamp(-1.0, 1.0), out);
                for (v, e) in out.iter_mut().zip(&self.e) {
                    *v *= e;
                }
            }
            KernelRoute::DividedDifference => {
                self.dd.as_ref().expect("route has tables").eval(x, out, scratch);
            }
            KernelRoute::Quadrature => {
                let rule = self.rule.as_ref().expect("route has a rule");
                let l = self.ell - 1;
                out.iter_mut().for_each(|v| *v = 0.0);
                scratch.resize(len, 0.0);
                for (k, (t, w)) in rule.nodes().zip(rule.weights()).enumerate() {
                    let s: f64 = x.iter().zip(t).map(|(a, b)| a * b).sum();
                    jacobi_values_into(self.a, self.a, s.clamp(-1.0, 1.0), scratch);
                    let wt = w * t[l];
                    for (o, p) in out.iter_mut().zip(scratch.iter()) {
                        *o += wt * p;
                    }
                    if !scratch[len - 1].is_finite() {
                        return Err(Error::NonFinite(k));
                    }
                }
                for (v, e) in out.iter_mut().zip(&self.e) {
                    *v *= self.c_kappa * e;
                }
            }
        }
        Ok(())
    }

    pub fn values(&self, x: &[f64], count: usize) -> Result<Vec<f64>> {
        let mut out = vec![0.0; count];
        let mut scratch = Vec::new();
        self.values_into(x, &mut out, &mut scratch)?;
        Ok(out)
    }
}

impl DividedDifference {
    /// D_m[i] = P_m^{(b,b)}[y_i, …, y_N] over the node list y, advanced in m by
    /// (t f)[y_i..y_N] = y_i f[y_i..y_N] + f[y_{i+1}..y_N] applied to the
    /// three-term recurrence. Needs no node differences, so confluent and
    /// nearly equal nodes are handled alike.
    fn eval(&self, x: &[f64], out: &mut [f64], scratch: &mut Vec<f64>) {
        let nn = self.n_nodes;
        let big_n = nn - 1;
        scratch.clear();
        scratch.resize(3 * nn + nn, 0.0);
        let (y, rest) = scratch.split_at_mut(nn);
        let mut p = 0;
        for (xi, &m) in x.iter().zip(&self.mult) {
            for _ in 0..m {
                y[p] = *xi;
                p += 1;
            }
        }
        let (prev, rest) = rest.split_at_mut(nn);
        let (cur, next) = rest.split_at_mut(nn);
        let (mut prev, mut cur, mut next) = (prev, cur, &mut next[..nn]);
        // D_0 = [0, …, 0, 1], D_1 = [0, …, c1, c1·y_N]
        prev[big_n] = 1.0;
        cur[big_n] = self.c1 * y[big_n];
        if big_n >= 1 {
            cur[big_n - 1] = self.c1;
        }
        let top = big_n + out.len() - 1;
        let mut emit = |m: usize, dm: &[f64]| {
            if m >= big_n && m - big_n < out.len() {
                out[m - big_n] = self.scale[m - big_n] * dm[0];
            }
        };
        if big_n == 0 {
            emit(0, prev);
        }
        emit(1, cur);
        for m in 1..top {
            let (a, b, c) = self.rec[m - 1];
            for i in 0..nn {
                let shifted = if i + 1 < nn { cur[i + 1] } else { 0.0 };
                next[i] = a * (y[i] * cur[i] + shifted) + b * cur[i] - c * prev[i];
            }
            std::mem::swap(&mut prev, &mut cur);
            std::mem::swap(&mut cur, &mut next);
            emit(m + 1, cur);
        }
    }
}
