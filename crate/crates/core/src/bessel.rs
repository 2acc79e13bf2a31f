//! The Dunkl exponential at coordinate vectors, the generalized Bessel function
//! K_{κ,d}, its closed form for d = 2 and the recursion in d.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gauss::{gauss_jacobi, gauss_jacobi_unit};
use crate::intertwine::{b_lambda, dot, vk_axis_complex, vk_d2_generic_complex};
use crate::params::KappaParams;
use crate::simplex::SimplexRule;
use crate::special::{gamma, ln_gamma};

/// Whether y enters as e^{⟨y,t⟩} or as e^{i⟨y,t⟩}.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Argument {
    Real,
    Imaginary,
}

fn exp_arg(arg: Argument, s: f64) -> Complex64 {
    match arg {
        Argument::Real => Complex64::new(s.exp(), 0.0),
        Argument::Imaginary => Complex64::new(s.cos(), s.sin()),
    }
}

/// E_κ(e_ℓ, y) = c_κ ∫ e^{⟨y,t⟩} t_{ℓ−1} (t_0⋯t_{d−1})^{κ−1} dt (or e^{i⟨y,t⟩}).
pub fn dunkl_exp_axis(
    ell: usize,
    y: &[f64],
    arg: Argument,
    params: &KappaParams,
    rule: &SimplexRule,
) -> Result<Complex64> {
    vk_axis_complex(ell, |s| exp_arg(arg, s), y, params, rule)
}

/// K_{κ,d}(e_1, y) by two routes.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BesselK {
    /// (c_κ/d) ∫ e^{⟨y,t⟩} (t_0⋯t_{d−1})^{κ−1} dt.
    pub direct: Complex64,
    /// (1/d) Σ_j E_κ(e_1, y(1,j)).
    pub coset_average: Complex64,
}

pub fn bessel_k(y: &[f64], arg: Argument, params: &KappaParams, rule: &SimplexRule) -> Result<BesselK> {
    bessel_k_axis(1, y, arg, params, rule)
}

/// K_{κ,d}(e_ℓ, y): the direct integral does not depend on ℓ; the coset average
/// uses E_κ(e_ℓ, y(ℓ,j)).
pub fn bessel_k_axis(
    ell: usize,
    y: &[f64],
    arg: Argument,
    params: &KappaParams,
    rule: &SimplexRule,
) -> Result<BesselK> {
    let d = params.d();
    if y.len() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            got: y.len(),
        });
    }
    if ell == 0 || ell > d {
        return Err(Error::AxisOutOfRange { axis: ell, dim: d });
    }
    if params.is_zero() {
        // V_0 = id: K(e_ℓ, y) is the average of e^{y_j}.
        let s: Complex64 = y.iter().map(|&v| exp_arg(arg, v)).sum::<Complex64>() / d as f64;
        return Ok(BesselK {
            direct: s,
            coset_average: s,
        });
    }
    let direct = {
        // Reuse E with a unit profile weight by integrating against Σ t_j = 1.
        let s = rule.integrate_complex(|t| exp_arg(arg, dot(y, t)))?;
        s * (params.c_kappa() / d as f64)
    };
    let mut acc = Complex64::new(0.0, 0.0);
    let mut ys = y.to_vec();
    for j in 0..d {
        ys.copy_from_slice(y);
        ys.swap(ell - 1, j);
        acc += dunkl_exp_axis(ell, &ys, arg, params, rule)?;
    }
    Ok(BesselK {
        direct,
        coset_average: acc / d as f64,
    })
}

/// J_ν(z) by the ascending series.
pub fn bessel_j_series(nu: f64, z: f64) -> f64 {
    let h = 0.5 * z;
    if h == 0.0 {
        return if nu == 0.0 { 1.0 } else { 0.0 };
    }
    let mut term = (nu * h.abs().ln() - ln_gamma(nu + 1.0)).exp();
    if h < 0.0 && nu.fract() == 0.0 && (nu as i64) % 2 != 0 {
        term = -term;
    }
    series_sum(term, nu, h * h)
}

/// Σ_k term_0 (−q)^k / (k! (ν+1)_k).
fn series_sum(term0: f64, nu: f64, q: f64) -> f64 {
    let mut term = term0;
    let mut sum = term;
    let mut comp = 0.0;
    for k in 1..400 {
        let kf = k as f64;
        term *= -q / (kf * (kf + nu));
        let y = term - comp;
        let t = sum + y;
        comp = (t - sum) - y;
        sum = t;
        if term.abs() < 1e-18 * sum.abs() && kf > q.sqrt() {
            break;
        }
    }
    sum
}

/// J_ν(z) from the Poisson integral, ν > −½:
/// J_ν(z) = (z/2)^ν/(√π Γ(ν+½)) ∫_{−1}^{1} cos(zt)(1−t²)^{ν−½} dt.
pub fn bessel_j_poisson(nu: f64, z: f64) -> Result<f64> {
    if !(nu > -0.5) {
        return Err(Error::InvalidParameter(format!(
            "Poisson integral needs nu > -1/2, got {nu}"
        )));
    }
    if z < 0.0 {
        return Err(Error::Domain("Poisson integral path expects z >= 0".into()));
    }
    let m = (z.abs() as usize) + 30;
    let r = gauss_jacobi(m, nu - 0.5, nu - 0.5)?;
    let integral = r.integrate(|t| (z * t).cos());
    let pref = (nu * (0.5 * z).ln() - 0.5 * std::f64::consts::PI.ln() - ln_gamma(nu + 0.5)).exp();
    Ok(pref * integral)
}

/// Classical Bessel function J_ν(z), ν ≥ −½: ascending series for |z| ≤ 12,
/// Poisson integral beyond. Negative z is accepted for integer ν.
pub fn classical_bessel_j(nu: f64, z: f64) -> Result<f64> {
    if !(nu >= -0.5) {
        return Err(Error::InvalidParameter(format!("nu must be >= -1/2, got {nu}")));
    }
    if !z.is_finite() {
        return Err(Error::Domain(format!("non-finite argument {z}")));
    }
    if z < 0.0 {
        if nu.fract() != 0.0 {
            return Err(Error::Domain(format!(
                "J_nu(z) is not real for z < 0 and non-integer nu = {nu}"
            )));
        }
        let v = classical_bessel_j(nu, -z)?;
        return Ok(if (nu as i64) % 2 == 0 { v } else { -v });
    }
    if nu == -0.5 {
        if z == 0.0 {
            return Err(Error::Domain("J_{-1/2} is singular at 0".into()));
        }
        return Ok((2.0 / (std::f64::consts::PI * z)).sqrt() * z.cos());
    }
    if z <= 12.0 {
        Ok(bessel_j_series(nu, z))
    } else {
        bessel_j_poisson(nu, z)
    }
}

/// Λ_ν(w) = Γ(ν+1)(2/w)^ν J_ν(w), even and entire with Λ_ν(0) = 1.
pub fn normalized_bessel(nu: f64, w: f64) -> Result<f64> {
    if !(nu >= -0.5) {
        return Err(Error::InvalidParameter(format!("nu must be >= -1/2, got {nu}")));
    }
    let w = w.abs();
    if nu == -0.5 {
        return Ok(w.cos());
    }
    if w < 1e-3 {
        // 1 − w²/(4(ν+1)) + w⁴/(32(ν+1)(ν+2))
        let q = w * w / 4.0;
        return Ok(1.0 - q / (nu + 1.0) + q * q / (2.0 * (nu + 1.0) * (nu + 2.0)));
    }
    if w <= 12.0 {
        return Ok(series_sum(1.0, nu, w * w / 4.0));
    }
    let m = (w as usize) + 30;
    let r = gauss_jacobi(m, nu - 0.5, nu - 0.5)?;
    Ok(b_lambda(nu + 0.5) * r.integrate(|t| (w * t).cos()))
}

/// K_{κ,2}(x, iy) in closed form, in both constant conventions.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct K2Closed {
    /// e^{i(x_1+x_2)(y_1+y_2)/2} Γ(κ+½)(4/z)^{κ−½} J_{κ−½}(z/2), z = (x_1−x_2)(y_1−y_2);
    /// equals 1 at y = 0.
    pub reconciled: Complex64,
    /// The same expression with prefactor √π Γ(κ+½)(2/z)^{κ−½}: √π 2^{−(κ−½)} × reconciled.
    pub printed: Complex64,
    /// printed / reconciled.
    pub constant_ratio: f64,
}

pub fn bessel_k2_closed(params: &KappaParams, x: &[f64], y: &[f64]) -> Result<K2Closed> {
    if params.d() != 2 || x.len() != 2 || y.len() != 2 {
        return Err(Error::Unsupported("closed form is for d = 2".into()));
    }
    let nu = params.kappa_f64() - 0.5;
    let z = (x[0] - x[1]) * (y[0] - y[1]);
    let phase = 0.5 * (x[0] + x[1]) * (y[0] + y[1]);
    let reconciled = Complex64::new(phase.cos(), phase.sin()) * normalized_bessel(nu, 0.5 * z)?;
    let ratio = gamma(0.5) * 2f64.powf(-nu);
    Ok(K2Closed {
        reconciled,
        printed: reconciled * ratio,
        constant_ratio: ratio,
    })
}

/// K_{κ,2}(x, iy) for general x ∈ ℝ² by the d = 2 integral representation:
/// ½ Σ_σ V_κ[z ↦ e^{i⟨yσ, z⟩}](x).
pub fn bessel_k2_direct(params: &KappaParams, x: &[f64], y: &[f64], rule: &SimplexRule) -> Result<Complex64> {
    if y.len() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            got: y.len(),
        });
    }
    let mut acc = Complex64::new(0.0, 0.0);
    for (a, b) in [(y[0], y[1]), (y[1], y[0])] {
        acc += vk_d2_generic_complex(
            |z1, z2| {
                let s = a * z1 + b * z2;
                Complex64::new(s.cos(), s.sin())
            },
            x,
            params,
            rule,
        )?;
    }
    Ok(acc * 0.5)
}

/// K_{κ,d}(e_1, iy) for d ≥ 3 by recursion in the dimension,
/// K_d(e_1, iy) = ((d−1)/d)(c_{κ,d}/c_{κ,d−1}) ∫_0^1 e^{iry_d} K_{d−1}(e_1, i(1−r)y′) r^{κ−1}(1−r)^{(d−1)κ−1} dr,
/// bottoming out in the d = 2 closed form. The factor (d−1)/d is what makes
/// K_d(e_1, 0) = 1.
pub fn bessel_recursive(params: &KappaParams, y: &[f64], order: usize) -> Result<Complex64> {
    let d = params.d();
    if d < 3 {
        return Err(Error::InvalidParameter(format!("recursion needs d >= 3, got {d}")));
    }
    if y.len() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            got: y.len(),
        });
    }
    if params.is_zero() {
        let s: Complex64 = y.iter().map(|&v| Complex64::new(v.cos(), v.sin())).sum();
        return Ok(s / d as f64);
    }
    recursive_inner(params.kappa_f64(), y, order)
}

fn c_kappa_d(kappa: f64, d: usize) -> f64 {
    let df = d as f64;
    (ln_gamma(df * kappa + 1.0) - kappa.ln() - df * ln_gamma(kappa)).exp()
}

fn recursive_inner(kappa: f64, y: &[f64], order: usize) -> Result<Complex64> {
    let d = y.len();
    if d == 2 {
        let p = KappaParams::from_f64(2, kappa)?;
        return Ok(bessel_k2_closed(&p, &[1.0, 0.0], y)?.reconciled);
    }
    let rule = gauss_jacobi_unit(order, kappa - 1.0, (d - 1) as f64 * kappa - 1.0)?;
    let scale = (d - 1) as f64 / d as f64 * c_kappa_d(kappa, d) / c_kappa_d(kappa, d - 1);
    let (yp, yd) = (&y[..d - 1], y[d - 1]);
    let mut re = Vec::with_capacity(rule.len());
    let mut im = Vec::with_capacity(rule.len());
    let mut shrunk = vec![0.0; d - 1];
    for (r, w) in rule.nodes.iter().zip(&rule.weights) {
        for (s, v) in shrunk.iter_mut().zip(yp) {
            *s = (1.0 - r) * v;
        }
        let inner = recursive_inner(kappa, &shrunk, order)?;
        let v = Complex64::new((r * yd).cos(), (r * yd).sin()) * inner * *w;
        re.push(v.re);
        im.push(v.im);
    }
    Ok(Complex64::new(crate::special::pairwise_sum(&re), crate::special::pairwise_sum(&im)) * scale)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    fn kp(d: usize, n: i64, den: i64) -> KappaParams {
        KappaParams::from_ratio(d, n, den).unwrap()
    }

    #[test]
    fn half_order_closed_form() {
        for z in [0.5, 1.0, 2.0, 5.0, 15.0, 30.0] {
            let exact = (2.0 / (std::f64::consts::PI * z)).sqrt() * z.sin();
            let got = classical_bessel_j(0.5, z).unwrap();
            assert!((got - exact).abs() < 1e-12, "z={z}: {got} vs {exact}");
        }
        assert_eq!(classical_bessel_j(0.0, 0.0).unwrap(), 1.0);
        assert_eq!(classical_bessel_j(2.5, 0.0).unwrap(), 0.0);
        assert!(classical_bessel_j(-0.7, 1.0).is_err());
    }

    #[test]
    fn series_and_poisson_overlap() {
        for nu in [0.0, 0.5, 1.0, 2.5, 4.0] {
            for z in [8.0, 9.5, 11.0, 12.0] {
                let s = bessel_j_series(nu, z);
                let p = bessel_j_poisson(nu, z).unwrap();
                assert!((s - p).abs() < 1e-10, "nu={nu} z={z}");
            }
        }
    }

    #[test]
    fn normalized_bessel_limits() {
        for nu in [-0.5, 0.0, 0.5, 1.5] {
            assert_eq!(normalized_bessel(nu, 0.0).unwrap(), 1.0);
            let small = normalized_bessel(nu, 2e-3).unwrap();
            let direct = gamma(nu + 1.0) * (2.0 / 2e-3f64).powf(nu) * classical_bessel_j(nu, 2e-3).unwrap();
            assert!((small - direct).abs() < 1e-12);
        }
    }

    #[test]
    fn exponential_normalized_and_bounded() {
        let p = kp(3, 1, 1);
        let rule = SimplexRule::build(3, p.kappa(), 20).unwrap();
        let e = dunkl_exp_axis(2, &[0.0; 3], Argument::Imaginary, &p, &rule).unwrap();
        assert!((e - Complex64::new(1.0, 0.0)).norm() < 1e-13);
        let e = dunkl_exp_axis(2, &[1.3, -2.0, 0.4], Argument::Imaginary, &p, &rule).unwrap();
        assert!(e.norm() <= 1.0 + 1e-12);
    }

    #[test]
    fn k_routes_agree() {
        let p = kp(3, 3, 2);
        let rule = SimplexRule::build(3, p.kappa(), 24).unwrap();
        let y = [0.9, -1.4, 2.1];
        let k1 = bessel_k(&y, Argument::Imaginary, &p, &rule).unwrap();
        assert!((k1.direct - k1.coset_average).norm() < 1e-12);
        let k3 = bessel_k_axis(3, &y, Argument::Imaginary, &p, &rule).unwrap();
        assert!((k3.coset_average - k1.direct).norm() < 1e-12);
    }

    #[test]
    fn closed_form_matches_direct_d2() {
        for (n, den) in [(1, 2), (1, 1), (3, 2)] {
            let p = kp(2, n, den);
            let rule = SimplexRule::build(2, p.kappa(), 40).unwrap();
            let (x, y) = ([0.7, -0.3], [1.9, 0.4]);
            let c = bessel_k2_closed(&p, &x, &y).unwrap();
            let d = bessel_k2_direct(&p, &x, &y, &rule).unwrap();
            assert!((c.reconciled - d).norm() < 1e-12, "kappa {n}/{den}");
            let zero = bessel_k2_closed(&p, &x, &[0.0, 0.0]).unwrap();
            assert!((zero.reconciled - Complex64::new(1.0, 0.0)).norm() < 1e-15);
        }
    }

    #[test]
    fn recursion_matches_direct_d3() {
        let p = kp(3, 1, 1);
        let rule = SimplexRule::build(3, &BigRational::from_integer(1.into()), 32).unwrap();
        for y in [[0.0, 0.0, 0.0], [0.5, -1.2, 2.0], [1.5, 0.3, 0.0]] {
            let rec = bessel_recursive(&p, &y, 40).unwrap();
            let dir = bessel_k(&y, Argument::Imaginary, &p, &rule).unwrap().direct;
            assert!((rec - dir).norm() < 1e-12, "{y:?}: {rec} vs {dir}");
        }
        assert!(bessel_recursive(&kp(2, 1, 1), &[0.0, 0.0], 10).is_err());
    }
}
