//! Gauss–Jacobi quadrature by Golub–Welsch with Newton polishing.

use nalgebra::{DMatrix, SymmetricEigen};

use crate::error::{Error, Result};
use crate::orthopoly::{jacobi_pair, ln_jacobi_h_norm};
use crate::special::ln_gamma;

/// Nodes and weights of a one-dimensional rule, nodes ascending.
#[derive(Clone, Debug, PartialEq)]
pub struct GaussRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussRule {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn integrate<F: Fn(f64) -> f64>(&self, f: F) -> f64 {
        let v: Vec<f64> = self.nodes.iter().zip(&self.weights).map(|(&x, &w)| w * f(x)).collect();
        crate::special::pairwise_sum(&v)
    }
}

/// n-point rule for ∫_{−1}^{1} f(x) (1−x)^α (1+x)^β dx.
pub fn gauss_jacobi(n: usize, alpha: f64, beta: f64) -> Result<GaussRule> {
    if !(alpha > -1.0 && beta > -1.0) {
        return Err(Error::InvalidParameter(format!(
            "Gauss-Jacobi needs alpha, beta > -1, got ({alpha}, {beta})"
        )));
    }
    if n == 0 {
        return Err(Error::InvalidParameter("quadrature order must be at least 1".into()));
    }
    let ab = alpha + beta;
    if n == 1 {
        return Ok(GaussRule {
            nodes: vec![(beta - alpha) / (ab + 2.0)],
            weights: vec![ln_jacobi_h_norm(0, alpha, beta).exp()],
        });
    }

    // Symmetric Jacobi matrix of the monic recurrence.
    let mut j = DMatrix::<f64>::zeros(n, n);
    for k in 0..n {
        let kf = k as f64;
        let s = 2.0 * kf + ab;
        j[(k, k)] = if k == 0 {
            (beta - alpha) / (ab + 2.0)
        } else {
            (beta * beta - alpha * alpha) / (s * (s + 2.0))
        };
        if k + 1 < n {
            let m = kf + 1.0;
            let s = 2.0 * m + ab;
            let b2 = if m == 1.0 {
                4.0 * (1.0 + alpha) * (1.0 + beta) / ((2.0 + ab).powi(2) * (3.0 + ab))
            } else {
                4.0 * m * (m + alpha) * (m + beta) * (m + ab) / (s * s * (s + 1.0) * (s - 1.0))
            };
            let b = b2.sqrt();
            j[(k, k + 1)] = b;
            j[(k + 1, k)] = b;
        }
    }
    let eig = SymmetricEigen::new(j);
    let mut nodes: Vec<f64> = eig.eigenvalues.iter().copied().collect();
    nodes.sort_by(|a, b| a.partial_cmp(b).expect("finite eigenvalues"));

    // Newton polishing and closed-form weights
    // w_i = C / ((1 − x_i²) P_n'(x_i)²), C = 2^{α+β+1} Γ(n+α+1)Γ(n+β+1)/(Γ(n+α+β+1) n!).
    let nf = n as f64;
    let ln_c = (ab + 1.0) * std::f64::consts::LN_2 + ln_gamma(nf + alpha + 1.0) + ln_gamma(nf + beta + 1.0)
        - ln_gamma(nf + ab + 1.0)
        - ln_gamma(nf + 1.0);
    let mut weights = Vec::with_capacity(n);
    for x in nodes.iter_mut() {
        let mut dp = 0.0;
        for iter in 0..3 {
            let (p, dpv) = value_and_derivative(n, alpha, beta, *x);
            dp = dpv;
            if iter < 2 {
                let step = p / dpv;
                if step.is_finite() {
                    *x -= step;
                }
            }
        }
        let w = ln_c - ((1.0 - *x) * (1.0 + *x)).ln() - 2.0 * dp.abs().ln();
        weights.push(w.exp());
    }
    Ok(GaussRule { nodes, weights })
}

/// P_n and P_n' from (2n+α+β)(1−x²)P_n' = n[(α−β) − (2n+α+β)x]P_n + 2(n+α)(n+β)P_{n−1}.
fn value_and_derivative(n: usize, alpha: f64, beta: f64, x: f64) -> (f64, f64) {
    let (p, pm1) = jacobi_pair(n, alpha, beta, x);
    let nf = n as f64;
    let s = 2.0 * nf + alpha + beta;
    let dp =
        (nf * ((alpha - beta) - s * x) * p + 2.0 * (nf + alpha) * (nf + beta) * pm1) / (s * ((1.0 - x) * (1.0 + x)));
    (p, dp)
}

pub fn gauss_legendre(n: usize) -> Result<GaussRule> {
    gauss_jacobi(n, 0.0, 0.0)
}

/// n-point rule for ∫_0^1 f(u) u^a (1−u)^b du.
pub fn gauss_jacobi_unit(n: usize, a: f64, b: f64) -> Result<GaussRule> {
    let r = gauss_jacobi(n, b, a)?;
    let scale = 2f64.powf(-(a + b + 1.0));
    Ok(GaussRule {
        nodes: r.nodes.iter().map(|x| 0.5 * (1.0 + x)).collect(),
        weights: r.weights.iter().map(|w| w * scale).collect(),
    })
}
