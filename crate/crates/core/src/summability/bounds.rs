//! Numerical checks of the pointwise bounds behind the summability results:
//! Szegő's estimate for Jacobi polynomials, the bound on the endpoint Cesàro
//! kernel k_n^δ, the estimate of Jacobi polynomials integrated over the
//! simplex, and the bound on K_n^δ(h_κ²; x, e_ℓ). Each check reports the ratio
//! |value| / (bound without its constant) as a series in n; the fitted
//! constant is the largest ratio.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::harmonics::check_unit;
use crate::intertwine::{vk_axis, AxisFunction};
use crate::orthopoly::{jacobi_eval_unchecked, jacobi_values_into, CesaroOrder, EndpointKernel, JacobiParams};
use crate::params::KappaParams;
use crate::simplex::{default_order, SimplexRule};

use super::kernel::{AxisProjections, CesaroTable};

/// Largest acceptable growth of the fitted constant when the n-range doubles.
pub const STABILITY_FACTOR: f64 = 2.0;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RatioPoint {
    pub n: usize,
    pub ratio: f64,
}

/// Fitted constant of a bound over a range of n and its behaviour when the
/// range is halved.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundFit {
    /// max ratio over the whole series
    pub fitted_c: f64,
    /// max ratio over n ≤ n_top/2
    pub half_c: f64,
    /// fitted_c / half_c
    pub doubling_factor: f64,
    pub stable: bool,
    pub ratio_series: Vec<RatioPoint>,
}

impl BoundFit {
    pub fn from_series(ratio_series: Vec<RatioPoint>) -> Result<Self> {
        let top = ratio_series
            .iter()
            .map(|p| p.n)
            .max()
            .ok_or_else(|| Error::InvalidParameter("bound fit needs a non-empty series".into()))?;
        if let Some(p) = ratio_series.iter().find(|p| !p.ratio.is_finite() || p.ratio < 0.0) {
            return Err(Error::Domain(format!("ratio at n={} is {}", p.n, p.ratio)));
        }
        let max_upto = |m: usize| {
            ratio_series
                .iter()
                .filter(|p| p.n <= m)
                .map(|p| p.ratio)
                .fold(0.0, f64::max)
        };
        let fitted_c = max_upto(top);
        let half_c = max_upto(top / 2);
        let doubling_factor = if half_c > 0.0 {
            fitted_c / half_c
        } else if fitted_c > 0.0 {
            f64::INFINITY
        } else {
            1.0
        };
        Ok(Self {
            fitted_c,
            half_c,
            doubling_factor,
            stable: doubling_factor < STABILITY_FACTOR,
            ratio_series,
        })
    }
}

/// θ_j = π j / m for j = 0..=m.
fn angle_grid(m: usize, top: f64) -> Vec<f64> {
    (0..=m).map(|j| top * j as f64 / m as f64).collect()
}

/// Szegő's estimate |P_n^{(α,β)}(t)| ≤ c n^{−½}(1−t+n^{−2})^{−(α+½)/2} on
/// t ∈ [0, 1]: the ratio series for n = 1..=n_max on t = cos θ, θ ∈ [0, π/2]
/// sampled at `grid` + 1 points.
pub fn szego_check(jp: JacobiParams, n_max: usize, grid: usize) -> Result<BoundFit> {
    if n_max == 0 || grid == 0 {
        return Err(Error::InvalidParameter(
            "szego check needs n_max >= 1 and a non-empty grid".into(),
        ));
    }
    let (a, b) = (jp.alpha(), jp.beta());
    let mut best = vec![0.0f64; n_max + 1];
    let mut p = vec![0.0; n_max + 1];
    for theta in angle_grid(grid, 0.5 * PI) {
        let t = theta.cos();
        jacobi_values_into(a, b, t, &mut p);
        for n in 1..=n_max {
            let nf = n as f64;
            let bound = nf.powf(-0.5) * (1.0 - t + nf.powi(-2)).powf(-(a + 0.5) / 2.0);
            best[n] = best[n].max(p[n].abs() / bound);
        }
    }
    BoundFit::from_series((1..=n_max).map(|n| RatioPoint { n, ratio: best[n] }).collect())
}

/// Outcome of the endpoint-kernel check.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct KndReport {
    pub alpha: f64,
    pub beta: f64,
    pub delta: f64,
    /// smallest k_n^δ(t, 1) over the grid and all n ≤ n_max
    pub min_value: f64,
    pub min_n: usize,
    pub min_t: f64,
    /// largest k_n^δ(t, 1), attained at t = 1; rounding makes values of order
    /// 1e−16 × max_value appear where the kernel is near zero
    pub max_value: f64,
    /// min_value ≥ −max(1e−12, 1e−16 × max_value)
    pub nonnegative: bool,
    pub fit: BoundFit,
}

/// Largest negative k_n^δ value still read as rounding of a zero, given the
/// kernel's maximum.
pub fn knd_floor(max_value: f64) -> f64 {
    -(1e-12f64).max(1e-16 * max_value)
}

/// For δ ≥ α+β+2 and α, β ≥ −½: 0 ≤ k_n^δ(w_{α,β}; t, 1) ≤ c n^{−1}(1−t+n^{−2})^{−(α+3/2)}.
/// Evaluates k_n^δ for n = 1..=n_max at t = cos θ, θ ∈ [0, π] on `grid` + 1 points.
pub fn knd_positivity_check(n_max: usize, jp: JacobiParams, delta: CesaroOrder, grid: usize) -> Result<KndReport> {
    let (a, b, dl) = (jp.alpha(), jp.beta(), delta.delta());
    if a < -0.5 || b < -0.5 {
        return Err(Error::Hypothesis(format!(
            "need alpha, beta >= -1/2, got alpha={a}, beta={b}"
        )));
    }
    if dl < a + b + 2.0 - 1e-12 {
        return Err(Error::Hypothesis(format!(
            "need delta >= alpha + beta + 2 = {}, got {dl}",
            a + b + 2.0
        )));
    }
    if n_max == 0 || grid == 0 {
        return Err(Error::InvalidParameter(
            "knd check needs n_max >= 1 and a non-empty grid".into(),
        ));
    }
    let ts: Vec<f64> = angle_grid(grid, PI).iter().map(|th| th.cos()).collect();
    let mut series = Vec::with_capacity(n_max);
    let (mut min_value, mut min_n, mut min_t) = (f64::INFINITY, 0, 1.0);
    let mut max_value = f64::NEG_INFINITY;
    for n in 1..=n_max {
        let k = EndpointKernel::new(n, jp, delta);
        let nf = n as f64;
        let mut best: f64 = 0.0;
        for &t in &ts {
            let v = k.eval(t);
            max_value = max_value.max(v);
            if v < min_value {
                (min_value, min_n, min_t) = (v, n, t);
            }
            let bound = (1.0 - t + nf.powi(-2)).powf(-(a + 1.5)) / nf;
            best = best.max(v.abs() / bound);
        }
        series.push(RatioPoint { n, ratio: best });
    }
    let nonnegative = min_value >= knd_floor(max_value);
    Ok(KndReport {
        alpha: a,
        beta: b,
        delta: dl,
        min_value,
        min_n,
        min_t,
        max_value,
        nonnegative,
        fit: BoundFit::from_series(series)?,
    })
}

/// Σ_i Π_{j≠i}|x_j − x_i|^{−κ} / (√(1−|x_i|) + n^{−1})^{e}; a coincidence
/// x_j = x_i makes its term infinite.
fn coordinate_sum(x: &[f64], kappa: f64, n: usize, e: f64) -> f64 {
    let inv_n = 1.0 / n as f64;
    let mut sum = 0.0;
    for (i, xi) in x.iter().enumerate() {
        let mut prod = 1.0;
        for (j, xj) in x.iter().enumerate() {
            if j != i {
                prod *= (xj - xi).abs().powf(-kappa);
            }
        }
        let base = (1.0 - xi.abs()).max(0.0).sqrt() + inv_n;
        sum += prod / base.powf(e);
    }
    sum
}

/// n^{−(d−1)κ−½} Σ_i Π_{j≠i}|x_j − x_i|^{−κ} / (√(1−|x_i|) + n^{−1})^{α+½−(d−1)κ}.
pub fn estimate_rhs(n: usize, x: &[f64], params: &KappaParams, alpha: f64) -> f64 {
    let (d, k) = (params.d() as f64, params.kappa_f64());
    let e = alpha + 0.5 - (d - 1.0) * k;
    (n as f64).powf(-(d - 1.0) * k - 0.5) * coordinate_sum(x, k, n, e)
}

fn check_estimate_hypotheses(params: &KappaParams, alpha: f64, beta: f64) -> Result<()> {
    let k = params.kappa_f64();
    if k <= 0.0 {
        return Err(Error::Hypothesis("the estimate needs kappa > 0".into()));
    }
    let floor = (params.d() as f64 - 1.0) * k - 0.5;
    if alpha < beta {
        return Err(Error::Hypothesis(format!(
            "need alpha >= beta, got alpha={alpha}, beta={beta}"
        )));
    }
    if alpha < floor {
        return Err(Error::Hypothesis(format!(
            "need alpha >= (d-1)kappa - 1/2 = {floor}, got {alpha}"
        )));
    }
    JacobiParams::new(alpha, beta)?;
    Ok(())
}

/// Simplex rule for Dirichlet-weighted integrands of polynomial degree `deg`.
fn simplex_rule(params: &KappaParams, deg: usize) -> Result<SimplexRule> {
    SimplexRule::build(params.d(), params.kappa(), default_order(deg))
}

/// |∫ P_n^{(α,β)}(⟨x,t⟩) t_{ℓ−1} (t_0⋯t_{d−1})^{κ−1} dt| at each sample.
pub fn estimate_lhs(
    n: usize,
    params: &KappaParams,
    alpha: f64,
    beta: f64,
    ell: usize,
    x: &[f64],
    rule: &SimplexRule,
) -> Result<f64> {
    if ell == 0 || ell > params.d() {
        return Err(Error::AxisOutOfRange {
            axis: ell,
            dim: params.d(),
        });
    }
    let l = ell - 1;
    let v = rule.integrate(|t| {
        let s: f64 = x.iter().zip(t).map(|(a, b)| a * b).sum();
        jacobi_eval_unchecked(n, alpha, beta, s.clamp(-1.0, 1.0)) * t[l]
    })?;
    Ok(v.abs())
}

/// max over samples of LHS / RHS_no_c for the simplex-integral estimate with
/// φ(t) = t_{ℓ−1}. Samples where RHS is infinite contribute 0.
pub fn estimate_check(
    n: usize,
    params: &KappaParams,
    alpha: f64,
    beta: f64,
    ell: usize,
    x_samples: &[Vec<f64>],
) -> Result<f64> {
    check_estimate_hypotheses(params, alpha, beta)?;
    let rule = simplex_rule(params, n + 1)?;
    let mut best: f64 = 0.0;
    for x in x_samples {
        check_unit(x)?;
        let lhs = estimate_lhs(n, params, alpha, beta, ell, x, &rule)?;
        let rhs = estimate_rhs(n, x, params, alpha);
        if rhs.is_finite() {
            best = best.max(lhs / rhs);
        }
    }
    Ok(best)
}

pub fn estimate_sweep(
    ns: &[usize],
    params: &KappaParams,
    alpha: f64,
    beta: f64,
    ell: usize,
    x_samples: &[Vec<f64>],
) -> Result<BoundFit> {
    let series = ns
        .iter()
        .map(|&n| {
            Ok(RatioPoint {
                n,
                ratio: estimate_check(n, params, alpha, beta, ell, x_samples)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    BoundFit::from_series(series)
}

/// The two terms of the kernel bound without their constants:
/// n^{λ−(d−1)κ−δ} Σ_i Π_{j≠i}|x_j − x_i|^{−κ} / (√(1−|x_i|) + n^{−1})^{λ−(d−1)κ+δ+1}
/// and n^{−1} V_κ[(1 − ⟨·, e_ℓ⟩ + n^{−2})^{−(λ+1)}](x).
pub fn kernel_bound_terms(
    n: usize,
    delta: CesaroOrder,
    ell: usize,
    x: &[f64],
    params: &KappaParams,
    rule: &SimplexRule,
) -> Result<(f64, f64)> {
    let (d, k, lam, dl) = (params.d() as f64, params.kappa_f64(), params.lambda(), delta.delta());
    let crit = lam - (d - 1.0) * k;
    let nf = n as f64;
    let first = nf.powf(crit - dl) * coordinate_sum(x, k, n, crit + dl + 1.0);
    let eps = nf.powi(-2);
    let profile = |s: f64| (1.0 - s + eps).powf(-(lam + 1.0));
    let second = vk_axis(&AxisFunction::new(ell, profile), x, params, rule)? / nf;
    Ok((first, second))
}

/// max over samples of |K_n^δ(h_κ²; x, e_ℓ)| / (first + second bound term).
pub fn kernel_bound_check(
    n: usize,
    delta: CesaroOrder,
    ell: usize,
    params: &KappaParams,
    x_samples: &[Vec<f64>],
) -> Result<f64> {
    if params.kappa_f64() <= 0.0 {
        return Err(Error::Hypothesis("the kernel bound needs kappa > 0".into()));
    }
    let proj = AxisProjections::new(params, ell, n)?;
    let table = CesaroTable::new(n, delta.delta());
    // The second profile peaks like n^{2λ+2} at s = 1; a finer rule resolves it.
    let rule = simplex_rule(params, 4 * n + 8)?;
    let mut means = Vec::with_capacity(1);
    let mut best: f64 = 0.0;
    for x in x_samples {
        check_unit(x)?;
        let v = proj.values(x, n + 1)?;
        table.means(&v, n..=n, &mut means);
        let (first, second) = kernel_bound_terms(n, delta, ell, x, params, &rule)?;
        let rhs = first + second;
        if rhs.is_finite() {
            best = best.max(means[0].abs() / rhs);
        }
    }
    Ok(best)
}

pub fn kernel_bound_sweep(
    ns: &[usize],
    delta: CesaroOrder,
    ell: usize,
    params: &KappaParams,
    x_samples: &[Vec<f64>],
) -> Result<BoundFit> {
    let series = ns
        .iter()
        .map(|&n| {
            Ok(RatioPoint {
                n,
                ratio: kernel_bound_check(n, delta, ell, params, x_samples)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    BoundFit::from_series(series)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harmonics::random_sphere_points;

    #[test]
    fn fit_uses_halved_range() {
        let s = vec![
            RatioPoint { n: 1, ratio: 1.0 },
            RatioPoint { n: 2, ratio: 3.0 },
            RatioPoint { n: 4, ratio: 2.5 },
        ];
        let f = BoundFit::from_series(s).unwrap();
        assert_eq!((f.fitted_c, f.half_c), (3.0, 3.0));
        assert!(f.stable);
        let s = vec![RatioPoint { n: 2, ratio: 1.0 }, RatioPoint { n: 4, ratio: 2.5 }];
        assert!(!BoundFit::from_series(s).unwrap().stable);
        assert!(BoundFit::from_series(vec![]).is_err());
    }

    #[test]
    fn szego_legendre_is_stable() {
        let f = szego_check(JacobiParams::new(0.0, 0.0).unwrap(), 100, 400).unwrap();
        assert!(f.stable, "{}", f.doubling_factor);
        // |P_n| ≤ 1 and the bound is ≥ n^{−1/2}(2)^{−1/4} ⇒ ratios stay below √n 2^{1/4}
        assert!(f
            .ratio_series
            .iter()
            .all(|p| p.ratio <= (p.n as f64).sqrt() * 2f64.powf(0.25) + 1e-12));
    }

    #[test]
    fn knd_hypotheses_and_positivity() {
        let jp = JacobiParams::new(0.0, 0.0).unwrap();
        assert!(matches!(
            knd_positivity_check(10, jp, CesaroOrder::new(1.5).unwrap(), 50),
            Err(Error::Hypothesis(_))
        ));
        let jp_bad = JacobiParams::new(-0.7, 0.0).unwrap();
        assert!(matches!(
            knd_positivity_check(10, jp_bad, CesaroOrder::new(3.0).unwrap(), 50),
            Err(Error::Hypothesis(_))
        ));
        let r = knd_positivity_check(40, jp, CesaroOrder::new(2.0).unwrap(), 400).unwrap();
        assert!(r.min_value >= -1e-12 && r.nonnegative, "{}", r.min_value);
        assert_eq!(knd_floor(1.0), -1e-12);
        assert_eq!(knd_floor(1e6), -1e-10);
    }

    #[test]
    fn estimate_structure_at_axis_and_hypotheses() {
        let p = KappaParams::from_ratio(3, 1, 1).unwrap();
        // at e_1 the i=1 term is finite and the others blow up
        assert!(estimate_rhs(16, &[1.0, 0.0, 0.0], &p, 2.0).is_infinite());
        assert!(estimate_check(16, &p, 2.0, 1.0, 1, &[vec![1.0, 0.0, 0.0]])
            .unwrap()
            .is_finite());
        assert!(matches!(
            estimate_check(16, &p, 1.0, 0.5, 1, &[]),
            Err(Error::Hypothesis(_))
        ));
        assert!(matches!(
            estimate_check(16, &p, 2.0, 3.0, 1, &[]),
            Err(Error::Hypothesis(_))
        ));
    }

    #[test]
    fn estimate_lhs_matches_monomial_moments() {
        // P_1^{(α,β)}(s) = ((α+β+2)s + α − β)/2 and ∫ t_i t_0 w dt = Γ(κ)^d (κ+δ_{i0})κ / Γ(dκ+2)
        let p = KappaParams::from_ratio(3, 1, 1).unwrap();
        let rule = simplex_rule(&p, 4).unwrap();
        let (a, b) = (2.0, 1.0);
        let x = [0.6, 0.8, 0.0];
        let lhs = estimate_lhs(1, &p, a, b, 1, &x, &rule).unwrap();
        // κ = 1, d = 3: ∫ t_0 dt = 1/6, ∫ t_0² dt = 1/12, ∫ t_0 t_1 dt = 1/24
        let m_s = x[0] / 12.0 + x[1] / 24.0 + x[2] / 24.0;
        let want = 0.5 * ((a + b + 2.0) * m_s + (a - b) / 6.0);
        assert!((lhs - want.abs()).abs() < 1e-14, "{lhs} {want}");
    }

    #[test]
    fn kernel_bound_ratio_finite() {
        let p = KappaParams::from_ratio(3, 1, 1).unwrap();
        let xs = random_sphere_points(3, 8, 7);
        let delta = CesaroOrder::new(1.6).unwrap();
        let r = kernel_bound_check(16, delta, 1, &p, &xs).unwrap();
        assert!(r.is_finite() && r > 0.0);
        // at e_ℓ two coordinates coincide, so the first term is infinite
        assert_eq!(
            kernel_bound_check(16, delta, 1, &p, &[vec![1.0, 0.0, 0.0]]).unwrap(),
            0.0
        );
    }
}
