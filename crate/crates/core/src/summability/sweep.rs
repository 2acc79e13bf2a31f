//! Lebesgue constants I_n = a_κ ∫ |K_n^δ(h_κ²; x, e_ℓ)| h_κ²(x) dσ(x), sweeps
//! over (n, δ) and the growth classification of I_n.

use std::sync::atomic::{AtomicBool, Ordering};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::harmonics::{hweight_sq, SphereRule};
use crate::orthopoly::CesaroOrder;
use crate::params::KappaParams;
use crate::simplex::SimplexRule;
use crate::special::pairwise_sum;

use super::kernel::{AxisProjections, CesaroTable};

/// Sphere nodes handed to one task; fixed so the reduction order never
/// depends on the number of workers.
const CHUNK: usize = 256;
/// Rows of n computed per pass before they are reported.
const ROW_BLOCK: usize = 50;
/// Smallest n_max accepted by [`critical_sweep`].
pub const MIN_CRITICAL_N_MAX: usize = 64;

/// Environment variable holding the default worker count.
pub const WORKERS_ENV: &str = "SYMDUNKL_WORKERS";

/// One row of a sweep: I_n (or a bound ratio) at (n, δ) for the recorded parameters.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepRecord {
    pub d: usize,
    pub kappa: String,
    pub ell: usize,
    pub n: usize,
    pub delta: f64,
    pub value: f64,
    pub err_est: f64,
}

/// Quadrature nodes with the factor a_κ h_κ²(x) w folded into the weights.
struct WeightedNodes {
    d: usize,
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl WeightedNodes {
    fn new(rule: &SphereRule, params: &KappaParams) -> Self {
        let a = params.a_kappa();
        let weights = rule
            .nodes()
            .zip(rule.weights())
            .map(|(x, w)| a * w * hweight_sq(x, params))
            .collect();
        Self {
            d: rule.d(),
            nodes: rule.nodes_flat().to_vec(),
            weights,
        }
    }

    /// Σ_x w(x) |K_m^δ(x)| for each δ (outer) and m in `rows` (inner).
    fn integrate_rows(
        &self,
        proj: &AxisProjections,
        cesaro: &[CesaroTable],
        rows: std::ops::RangeInclusive<usize>,
    ) -> Result<Vec<f64>> {
        let width = rows.end() - rows.start() + 1;
        let out_len = cesaro.len() * width;
        let top = *rows.end();
        let partials: Vec<Result<Vec<f64>>> = self
            .nodes
            .par_chunks(CHUNK * self.d)
            .zip(self.weights.par_chunks(CHUNK))
            .map(|(xs, ws)| {
                let mut acc = vec![0.0; out_len];
                let mut v = vec![0.0; top + 1];
                let mut scratch = Vec::new();
                let mut k = Vec::with_capacity(width);
                for (x, w) in xs.chunks_exact(self.d).zip(ws) {
                    proj.values_into(x, &mut v, &mut scratch)?;
                    for (j, a) in cesaro.iter().enumerate() {
                        a.means(&v, rows.clone(), &mut k);
                        for (slot, kv) in acc[j * width..(j + 1) * width].iter_mut().zip(&k) {
                            *slot += w * kv.abs();
                        }
                    }
                }
                Ok(acc)
            })
            .collect();
        let mut cols: Vec<Vec<f64>> = vec![Vec::with_capacity(partials.len()); out_len];
        for p in partials {
            let p = p?;
            for (c, v) in cols.iter_mut().zip(p) {
                c.push(v);
            }
        }
        let sums: Vec<f64> = cols.iter().map(|c| pairwise_sum(c)).collect();
        if let Some(i) = sums.iter().position(|s| !s.is_finite()) {
            return Err(Error::NonFinite(i));
        }
        Ok(sums)
    }
}

/// Sphere rules for the sweep at axis ℓ: a product rule with `m_s` Gauss nodes
/// per polar direction and its pole at e_ℓ when h_κ² is smooth, the
/// kink-aligned rule otherwise (d ≤ 3). `n_phi` equispaced angles on the
/// innermost circle. Returns (fine, coarse).
pub fn sweep_rules(params: &KappaParams, ell: usize, m_s: usize, n_phi: usize) -> Result<(SphereRule, SphereRule)> {
    let d = params.d();
    if ell == 0 || ell > d {
        return Err(Error::AxisOutOfRange { axis: ell, dim: d });
    }
    let smooth = params.is_zero() || params.integer_kappa().is_some();
    let fine = if smooth || d > 3 {
        SphereRule::product_with(d, m_s, n_phi)?.rotated_to_axis(ell)?
    } else {
        SphereRule::kink_aligned(d, 2 * m_s)?
    };
    let coarse = fine.coarsened()?;
    Ok((fine, coarse))
}

/// Default Gauss nodes per polar direction for a sweep up to n_max. |K_n^δ|
/// has kinks on its nodal set, which the Gauss rule only resolves once there
/// are a few nodes per oscillation of length π/n near e_ℓ.
pub fn default_sweep_order(n_max: usize) -> usize {
    6 * n_max + 24
}

/// Default number of azimuths; the error is insensitive to it beyond the
/// polynomial degree.
pub fn default_azimuth_order(n_max: usize) -> usize {
    2 * (n_max + 24)
}

/// Worker count from [`WORKERS_ENV`], if set to a positive integer.
pub fn workers_from_env() -> Option<usize> {
    std::env::var(WORKERS_ENV)
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .filter(|&w| w > 0)
}

fn pool(workers: Option<usize>) -> Result<rayon::ThreadPool> {
    let mut b = rayon::ThreadPoolBuilder::new();
    if let Some(w) = workers.or_else(workers_from_env) {
        b = b.num_threads(w);
    }
    b.build()
        .map_err(|e| Error::InvalidParameter(format!("cannot start worker pool: {e}")))
}

/// I_n for one (n, δ) on the given sphere rule, with the projection kernels
/// from the given simplex rule; err_est compares against the coarsened rule.
pub fn lebesgue_constant(
    n: usize,
    delta: CesaroOrder,
    ell: usize,
    params: &KappaParams,
    sphere_rule: &SphereRule,
    simplex_rule: &SimplexRule,
) -> Result<SweepRecord> {
    if sphere_rule.d() != params.d() {
        return Err(Error::RuleMismatch(format!(
            "sphere rule d={}, parameters d={}",
            sphere_rule.d(),
            params.d()
        )));
    }
    let proj = AxisProjections::with_rule(params, ell, n, simplex_rule.clone())?;
    let cesaro = vec![CesaroTable::new(n, delta.delta())];
    let fine = WeightedNodes::new(sphere_rule, params).integrate_rows(&proj, &cesaro, n..=n)?[0];
    let coarse = WeightedNodes::new(&sphere_rule.coarsened()?, params).integrate_rows(&proj, &cesaro, n..=n)?[0];
    Ok(SweepRecord {
        d: params.d(),
        kappa: params.kappa().to_string(),
        ell,
        n,
        delta: delta.delta(),
        value: fine,
        err_est: (fine - coarse).abs(),
    })
}

/// Settings of a Lebesgue sweep.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SweepSpec {
    pub params: KappaParams,
    pub ell: usize,
    pub deltas: Vec<f64>,
    pub n_max: usize,
    /// Gauss nodes per polar direction; [`default_sweep_order`] when absent.
    pub quad_order: Option<usize>,
    /// Angles on the innermost circle; [`default_azimuth_order`] when absent.
    pub azimuth_order: Option<usize>,
    pub workers: Option<usize>,
}

impl SweepSpec {
    pub fn new(params: KappaParams, ell: usize, deltas: Vec<f64>, n_max: usize) -> Self {
        Self {
            params,
            ell,
            deltas,
            n_max,
            quad_order: None,
            azimuth_order: None,
            workers: None,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.deltas.is_empty() {
            return Err(Error::InvalidParameter("empty delta grid".into()));
        }
        for &d in &self.deltas {
            CesaroOrder::new(d)?;
        }
        if self.n_max == 0 {
            return Err(Error::InvalidParameter("n_max must be positive".into()));
        }
        Ok(())
    }
}

/// Runs I_n for n = 1..=n_max and every δ. Rows are handed to `sink` in blocks
/// of increasing n, δ in grid order within each n, as soon as a block is
/// finished; a set `cancel` flag stops the sweep after the current block
/// with [`Error::Cancelled`], so everything already reported is complete.
pub fn lebesgue_sweep(
    spec: &SweepSpec,
    sink: &mut dyn FnMut(&SweepRecord) -> Result<()>,
    cancel: Option<&AtomicBool>,
) -> Result<Vec<SweepRecord>> {
    spec.validate()?;
    let params = &spec.params;
    let m_s = spec.quad_order.unwrap_or_else(|| default_sweep_order(spec.n_max));
    let n_phi = spec.azimuth_order.unwrap_or_else(|| default_azimuth_order(spec.n_max));
    let (fine_rule, coarse_rule) = sweep_rules(params, spec.ell, m_s, n_phi)?;
    lebesgue_sweep_on(spec, &fine_rule, &coarse_rule, sink, cancel)
}

/// [`lebesgue_sweep`] on caller-supplied sphere rules; err_est is the
/// difference between the two.
pub fn lebesgue_sweep_on(
    spec: &SweepSpec,
    fine_rule: &SphereRule,
    coarse_rule: &SphereRule,
    sink: &mut dyn FnMut(&SweepRecord) -> Result<()>,
    cancel: Option<&AtomicBool>,
) -> Result<Vec<SweepRecord>> {
    spec.validate()?;
    let params = &spec.params;
    for r in [fine_rule, coarse_rule] {
        if r.d() != params.d() {
            return Err(Error::RuleMismatch(format!(
                "sphere rule d={}, parameters d={}",
                r.d(),
                params.d()
            )));
        }
    }
    let fine = WeightedNodes::new(fine_rule, params);
    let coarse = WeightedNodes::new(coarse_rule, params);
    let proj = AxisProjections::new(params, spec.ell, spec.n_max)?;
    let cesaro: Vec<CesaroTable> = spec.deltas.iter().map(|&d| CesaroTable::new(spec.n_max, d)).collect();
    let kappa = params.kappa().to_string();
    let pool = pool(spec.workers)?;
    let mut all = Vec::with_capacity(spec.n_max * spec.deltas.len());
    let mut start = 1;
    while start <= spec.n_max {
        if cancel.is_some_and(|c| c.load(Ordering::Relaxed)) {
            return Err(Error::Cancelled);
        }
        let end = (start + ROW_BLOCK - 1).min(spec.n_max);
        let (f, c) = pool.install(|| -> Result<_> {
            Ok((
                fine.integrate_rows(&proj, &cesaro, start..=end)?,
                coarse.integrate_rows(&proj, &cesaro, start..=end)?,
            ))
        })?;
        let width = end - start + 1;
        for i in 0..width {
            for (j, &delta) in spec.deltas.iter().enumerate() {
                let rec = SweepRecord {
                    d: params.d(),
                    kappa: kappa.clone(),
                    ell: spec.ell,
                    n: start + i,
                    delta,
                    value: f[j * width + i],
                    err_est: (f[j * width + i] - c[j * width + i]).abs(),
                };
                sink(&rec)?;
                all.push(rec);
            }
        }
        start = end + 1;
    }
    Ok(all)
}

/// Growth label of an I_n series.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Growth {
    Bounded,
    Logarithmic,
    Growing,
}

impl Growth {
    pub fn as_str(&self) -> &'static str {
        match self {
            Growth::Bounded => "bounded",
            Growth::Logarithmic => "logarithmic",
            Growth::Growing => "growing",
        }
    }
}

/// Least-squares fits of I_n on the window n ∈ [n_max/4, n_max] against a
/// constant, a + b log n and a n^p (the last fitted as a line in log–log).
/// Residuals are sums of squares in the I_n scale.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GrowthFit {
    pub delta: f64,
    pub n_lo: usize,
    pub n_hi: usize,
    pub mean: f64,
    pub rss_bounded: f64,
    pub log_a: f64,
    pub log_b: f64,
    pub log_b_se: f64,
    pub rss_log: f64,
    pub pow_a: f64,
    pub pow_p: f64,
    pub pow_p_se: f64,
    pub rss_power: f64,
    /// I_n ≈ A + B (n/n_hi)^r with r free: r < 0 converges, r > 0 grows,
    /// r → 0 is the logarithmic limit.
    pub shift_a: f64,
    pub shift_b: f64,
    pub shift_r: f64,
    pub shift_r_se: f64,
    pub rss_shift: f64,
    /// Largest drop I_n − I_{n+1} inside the window (≤ 0 when non-decreasing).
    pub max_drop: f64,
    /// Largest I_n − I_m − (err_n + err_m) over n < m in the window; ≤ 0 when
    /// the series is non-decreasing up to its quadrature error estimates.
    pub max_drop_beyond_err: f64,
    pub class: Growth,
}

/// Slope, its standard error, intercept and residual sum of squares of y on x.
fn line_fit(x: &[f64], y: &[f64]) -> (f64, f64, f64, f64) {
    let m = x.len() as f64;
    let mx = x.iter().sum::<f64>() / m;
    let my = y.iter().sum::<f64>() / m;
    let sxx: f64 = x.iter().map(|v| (v - mx) * (v - mx)).sum();
    let sxy: f64 = x.iter().zip(y).map(|(u, v)| (u - mx) * (v - my)).sum();
    let b = sxy / sxx;
    let a = my - b * mx;
    let rss: f64 = x.iter().zip(y).map(|(u, v)| (v - a - b * u).powi(2)).sum();
    let se = (rss / (m - 2.0) / sxx).sqrt();
    (b, se, a, rss)
}

/// Standard error of the least-squares slope of y on x when the y_i carry
/// independent errors σ_i: (Σ (x_i − x̄)² σ_i²)^{1/2} / Σ (x_i − x̄)².
fn propagated_slope_se(x: &[f64], sigma: &[f64]) -> f64 {
    let mx = x.iter().sum::<f64>() / x.len() as f64;
    let sxx: f64 = x.iter().map(|v| (v - mx) * (v - mx)).sum();
    let var: f64 = x.iter().zip(sigma).map(|(u, s)| (u - mx) * (u - mx) * s * s).sum();
    var.sqrt() / sxx
}

/// A, B and the residual of the linear fit y ≈ A + B g.
fn two_term_fit(g: &[f64], y: &[f64]) -> (f64, f64, f64) {
    let m = g.len() as f64;
    let mg = g.iter().sum::<f64>() / m;
    let my = y.iter().sum::<f64>() / m;
    let sgg: f64 = g.iter().map(|v| (v - mg) * (v - mg)).sum();
    let sgy: f64 = g.iter().zip(y).map(|(u, v)| (u - mg) * (v - my)).sum();
    let b = if sgg > 0.0 { sgy / sgg } else { 0.0 };
    let a = my - b * mg;
    let rss = g.iter().zip(y).map(|(u, v)| (v - a - b * u).powi(2)).sum();
    (a, b, rss)
}

/// Profile least squares for y ≈ A + B u^r over r ∈ [−3, 3], u = n/n_hi;
/// r = 0 stands for the limit A + B ln u. Returns (A, B, r, se_r, rss).
fn shifted_power_fit(u: &[f64], y: &[f64]) -> (f64, f64, f64, f64, f64) {
    let basis = |r: f64| -> Vec<f64> {
        if r.abs() < 1e-9 {
            u.iter().map(|v| v.ln()).collect()
        } else {
            u.iter().map(|v| v.powf(r)).collect()
        }
    };
    let rss_at = |r: f64| two_term_fit(&basis(r), y).2;
    let mut best = (f64::INFINITY, 0.0);
    for i in -300..=300 {
        let r = i as f64 / 100.0;
        let v = rss_at(r);
        if v < best.0 {
            best = (v, r);
        }
    }
    // golden-section refinement on the bracketing grid cell
    let (mut lo, mut hi) = (best.1 - 0.01, best.1 + 0.01);
    let g = 0.5 * (5f64.sqrt() - 1.0);
    for _ in 0..60 {
        let (c, d) = (hi - g * (hi - lo), lo + g * (hi - lo));
        if rss_at(c) < rss_at(d) {
            hi = d;
        } else {
            lo = c;
        }
    }
    let r = 0.5 * (lo + hi);
    let (a, b, rss) = two_term_fit(&basis(r), y);
    // Gauss–Newton covariance with columns ∂/∂A, ∂/∂B, ∂/∂r.
    let mut jtj = nalgebra::Matrix3::<f64>::zeros();
    for &v in u {
        let p = v.powf(r);
        let row = nalgebra::Vector3::new(1.0, p, b * p * v.ln());
        jtj += row * row.transpose();
    }
    let dof = (u.len() as f64 - 3.0).max(1.0);
    let se = jtj
        .try_inverse()
        .map(|inv| (rss / dof * inv[(2, 2)]).sqrt())
        .unwrap_or(f64::INFINITY);
    (a, b, r, if se.is_finite() { se } else { f64::INFINITY }, rss)
}

/// Fits and labels one series. `bounded` when neither the log slope nor the
/// power exceeds twice its standard error; otherwise `logarithmic` or
/// `growing`, whichever of the log and power fits has the smaller residual.
/// The shifted-power fit A + B n^r is reported but does not set the label.
/// `errs` are per-point quadrature error estimates; each standard error is the
/// larger of the residual-based one and the one propagated from
/// max(err_n, 64ε I_n), so rounding-level drifts are not significant.
pub fn classify_growth(delta: f64, ns: &[usize], values: &[f64], errs: &[f64]) -> Result<GrowthFit> {
    if ns.len() != values.len() || ns.len() != errs.len() || ns.is_empty() {
        return Err(Error::InvalidParameter(
            "growth fit needs matching, non-empty series".into(),
        ));
    }
    let n_max = *ns.iter().max().expect("non-empty");
    let n_lo = (n_max / 4).max(1);
    let mut pts: Vec<(f64, f64, f64)> = ns
        .iter()
        .zip(values)
        .zip(errs)
        .filter(|((n, _), _)| **n >= n_lo)
        .map(|((&n, &v), &e)| (n as f64, v, e))
        .collect();
    pts.sort_by(|a, b| a.0.total_cmp(&b.0));
    if pts.len() < 4 {
        return Err(Error::InvalidParameter(
            "growth fit needs at least 4 points in the window".into(),
        ));
    }
    let xs: Vec<f64> = pts.iter().map(|p| p.0).collect();
    let ys: Vec<f64> = pts.iter().map(|p| p.1).collect();
    if ys.iter().any(|v| !(v.is_finite() && *v > 0.0)) {
        return Err(Error::Domain("growth fit needs positive finite values".into()));
    }
    let m = ys.len() as f64;
    let mean = ys.iter().sum::<f64>() / m;
    let rss_bounded: f64 = ys.iter().map(|v| (v - mean).powi(2)).sum();
    let lx: Vec<f64> = xs.iter().map(|v| v.ln()).collect();
    let sigma: Vec<f64> = pts.iter().map(|p| p.2.max(64.0 * f64::EPSILON * p.1)).collect();
    let (log_b, log_b_se, log_a, rss_log) = line_fit(&lx, &ys);
    let log_b_se = log_b_se.max(propagated_slope_se(&lx, &sigma));
    let ly: Vec<f64> = ys.iter().map(|v| v.ln()).collect();
    let (pow_p, pow_p_se, ln_a, _) = line_fit(&lx, &ly);
    let rel: Vec<f64> = sigma.iter().zip(&ys).map(|(s, y)| s / y).collect();
    let pow_p_se = pow_p_se.max(propagated_slope_se(&lx, &rel));
    let pow_a = ln_a.exp();
    let rss_power: f64 = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| (y - pow_a * x.powf(pow_p)).powi(2))
        .sum();
    let u: Vec<f64> = xs.iter().map(|x| x / n_max as f64).collect();
    let (shift_a, shift_b, shift_r, shift_r_se, rss_shift) = shifted_power_fit(&u, &ys);
    let max_drop = ys.windows(2).map(|w| w[0] - w[1]).fold(f64::NEG_INFINITY, f64::max);
    let mut max_drop_beyond_err = f64::NEG_INFINITY;
    for i in 0..pts.len() {
        for j in i + 1..pts.len() {
            max_drop_beyond_err = max_drop_beyond_err.max(pts[i].1 - pts[j].1 - (pts[i].2 + pts[j].2));
        }
    }
    let class = if log_b < 2.0 * log_b_se && pow_p < 2.0 * pow_p_se {
        Growth::Bounded
    } else if rss_power < rss_log {
        Growth::Growing
    } else {
        Growth::Logarithmic
    };
    Ok(GrowthFit {
        delta,
        n_lo,
        n_hi: n_max,
        mean,
        rss_bounded,
        log_a,
        log_b,
        log_b_se,
        rss_log,
        pow_a,
        pow_p,
        pow_p_se,
        rss_power,
        shift_a,
        shift_b,
        shift_r,
        shift_r_se,
        rss_shift,
        max_drop,
        max_drop_beyond_err,
        class,
    })
}

/// Sweep records with one growth fit per δ, plus the thresholds for context.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CriticalSweep {
    pub critical_delta: f64,
    /// λ_κ − min κ_i for Z_2^d with equal parameters; display only.
    pub z2d_threshold: f64,
    pub records: Vec<SweepRecord>,
    pub fits: Vec<GrowthFit>,
}

/// Fits every δ of a finished sweep.
pub fn fit_records(deltas: &[f64], records: &[SweepRecord]) -> Result<Vec<GrowthFit>> {
    deltas
        .iter()
        .map(|&delta| {
            let rows: Vec<&SweepRecord> = records.iter().filter(|r| r.delta == delta).collect();
            let ns: Vec<usize> = rows.iter().map(|r| r.n).collect();
            let vs: Vec<f64> = rows.iter().map(|r| r.value).collect();
            let es: Vec<f64> = rows.iter().map(|r| r.err_est).collect();
            classify_growth(delta, &ns, &vs, &es)
        })
        .collect()
}

/// Lebesgue sweep over a δ grid straddling the critical index, classified per δ.
pub fn critical_sweep(
    spec: &SweepSpec,
    sink: &mut dyn FnMut(&SweepRecord) -> Result<()>,
    cancel: Option<&AtomicBool>,
) -> Result<CriticalSweep> {
    if spec.n_max < MIN_CRITICAL_N_MAX {
        return Err(Error::InvalidParameter(format!(
            "critical sweep needs n_max >= {MIN_CRITICAL_N_MAX}, got {}",
            spec.n_max
        )));
    }
    let crit = spec.params.critical_delta();
    let lo = spec.deltas.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = spec.deltas.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if !(lo <= crit && crit <= hi) {
        return Err(Error::Hypothesis(format!(
            "delta grid [{lo}, {hi}] does not straddle the critical index {crit}"
        )));
    }
    let records = lebesgue_sweep(spec, sink, cancel)?;
    let fits = fit_records(&spec.deltas, &records)?;
    Ok(CriticalSweep {
        critical_delta: crit,
        z2d_threshold: spec.params.z2d_threshold(),
        records,
        fits,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn kp(d: usize, n: i64, den: i64) -> KappaParams {
        KappaParams::from_ratio(d, n, den).unwrap()
    }

    #[test]
    fn degree_zero_constant_is_one() {
        let p = kp(3, 1, 1);
        let (fine, _) = sweep_rules(&p, 1, 12, 24).unwrap();
        let simplex = SimplexRule::build(3, p.kappa(), 8).unwrap();
        let r = lebesgue_constant(0, CesaroOrder::new(1.0).unwrap(), 1, &p, &fine, &simplex).unwrap();
        assert!((r.value - 1.0).abs() < 1e-12, "{}", r.value);
    }

    #[test]
    fn sweep_matches_single_point_route() {
        let p = kp(3, 1, 1);
        let mut spec = SweepSpec::new(p.clone(), 2, vec![1.2, 2.5], 10);
        spec.quad_order = Some(30);
        spec.azimuth_order = Some(60);
        let recs = lebesgue_sweep(&spec, &mut |_| Ok(()), None).unwrap();
        assert_eq!(recs.len(), 20);
        let (fine, _) = sweep_rules(&p, 2, 30, 60).unwrap();
        let simplex = SimplexRule::build(3, p.kappa(), 12).unwrap();
        let one = lebesgue_constant(7, CesaroOrder::new(2.5).unwrap(), 2, &p, &fine, &simplex).unwrap();
        let row = recs.iter().find(|r| r.n == 7 && r.delta == 2.5).unwrap();
        assert!((row.value - one.value).abs() < 1e-9 * one.value);
        assert!(recs.iter().all(|r| r.value >= 1.0 - 1e-9 && r.value.is_finite()));
    }

    #[test]
    fn worker_count_does_not_change_bits() {
        let p = kp(3, 1, 1);
        let mut spec = SweepSpec::new(p, 1, vec![1.5], 40);
        spec.workers = Some(1);
        let a = lebesgue_sweep(&spec, &mut |_| Ok(()), None).unwrap();
        spec.workers = Some(3);
        let b = lebesgue_sweep(&spec, &mut |_| Ok(()), None).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn cancellation_keeps_completed_blocks() {
        let p = kp(3, 1, 1);
        let spec = SweepSpec::new(p, 1, vec![1.5, 2.0], 70);
        let flag = AtomicBool::new(false);
        let mut seen = Vec::new();
        let err = lebesgue_sweep(
            &spec,
            &mut |r| {
                seen.push(r.n);
                if r.n == ROW_BLOCK {
                    flag.store(true, Ordering::Relaxed);
                }
                Ok(())
            },
            Some(&flag),
        )
        .unwrap_err();
        assert!(matches!(err, Error::Cancelled));
        assert_eq!(seen.len(), 2 * ROW_BLOCK);
    }

    #[test]
    fn classification_of_synthetic_series() {
        let ns: Vec<usize> = (1..=200).collect();
        let flat: Vec<f64> = ns.iter().map(|_| 3.0).collect();
        let mut flat_noisy = flat.clone();
        for (i, v) in flat_noisy.iter_mut().enumerate() {
            *v += if i % 2 == 0 { 1e-3 } else { -1e-3 };
        }
        let zero = vec![0.0; ns.len()];
        assert_eq!(
            classify_growth(2.0, &ns, &flat_noisy, &zero).unwrap().class,
            Growth::Bounded
        );
        let wobble: Vec<f64> = ns
            .iter()
            .map(|&n| 1.0 + (n as f64).ln() * 0.1 + (n as f64 * 0.7).sin() * 1e-3)
            .collect();
        let conv: Vec<f64> = ns.iter().map(|&n| 1.07 - 0.28 / (n as f64).sqrt()).collect();
        let f = classify_growth(2.0, &ns, &conv, &zero).unwrap();
        assert!((f.shift_r + 0.5).abs() < 1e-3, "{}", f.shift_r);
        let pow: Vec<f64> = ns.iter().map(|&n| 0.7 * (n as f64).powf(0.5)).collect();
        let f = classify_growth(1.0, &ns, &pow, &zero).unwrap();
        assert_eq!(f.class, Growth::Growing);
        assert!((f.pow_p - 0.5).abs() < 1e-10);
        let f = classify_growth(1.5, &ns, &wobble, &zero).unwrap();
        assert_eq!(f.class, Growth::Logarithmic, "{f:?}");
        assert!(f.rss_log <= f.rss_bounded && f.max_drop > 0.0);
        assert!(
            classify_growth(1.5, &ns, &wobble, &vec![2e-3; ns.len()])
                .unwrap()
                .max_drop_beyond_err
                <= 0.0
        );
    }

    #[test]
    fn critical_sweep_preconditions() {
        let p = kp(3, 1, 1);
        let spec = SweepSpec::new(p.clone(), 1, vec![1.6, 2.0], 64);
        assert!(matches!(
            critical_sweep(&spec, &mut |_| Ok(()), None),
            Err(Error::Hypothesis(_))
        ));
        let spec = SweepSpec::new(p, 1, vec![1.0, 2.0], 32);
        assert!(critical_sweep(&spec, &mut |_| Ok(()), None).is_err());
    }
}
