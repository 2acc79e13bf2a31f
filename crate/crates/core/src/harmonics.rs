//! The weight h_κ(x) = Π_{i<j} |x_i − x_j|^κ, quadrature on S^{d−1}, bases of
//! h-harmonics and the reproducing kernels P_n(h_κ²; ·, ·).

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_rational::BigRational;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gauss::{gauss_jacobi, gauss_legendre};
use crate::intertwine::{vk_axis, AxisFunction};
use crate::linalg::nullspace;
use crate::orthopoly::zonal_kernel;
use crate::params::{rational_to_f64, KappaParams};
use crate::poly::{monomials_of_degree, Monomial, Polynomial};
use crate::simplex::SimplexRule;
use crate::special::{binom_i, pairwise_sum, sphere_area};

/// h_κ(x) = Π_{i<j} |x_i − x_j|^κ.
pub fn hweight(x: &[f64], params: &KappaParams) -> f64 {
    hweight_sq(x, params).sqrt()
}

/// h_κ(x)², the integration weight.
pub fn hweight_sq(x: &[f64], params: &KappaParams) -> f64 {
    let k = params.kappa_f64();
    if k == 0.0 {
        return 1.0;
    }
    let mut prod = 1.0;
    for i in 0..x.len() {
        for j in i + 1..x.len() {
            prod *= (x[i] - x[j]).abs();
        }
    }
    if let Some(m) = params.integer_kappa() {
        prod.powi(2 * m as i32)
    } else {
        prod.powf(2.0 * k)
    }
}

/// `count` points uniformly distributed on S^{d−1}, normalized Gaussian
/// vectors from a ChaCha8 stream seeded with `seed`.
pub fn random_sphere_points(d: usize, count: usize, seed: u64) -> Vec<Vec<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let v: Vec<f64> = (0..d).map(|_| StandardNormal.sample(&mut rng)).collect();
        let r = v.iter().map(|a| a * a).sum::<f64>().sqrt();
        if r > 1e-8 {
            out.push(v.into_iter().map(|a| a / r).collect());
        }
    }
    out
}

/// dim H_n^d = C(n+d−1, n) − C(n+d−3, n−2).
pub fn harmonic_dim(n: usize, d: usize) -> usize {
    let (n, d) = (n as i64, d as i64);
    (binom_i(n + d - 1, n) - binom_i(n + d - 3, n - 2)) as usize
}

/// Nodes on S^{d−1} with surface-measure weights.
#[derive(Clone, Debug)]
pub struct SphereRule {
    d: usize,
    order: usize,
    recipe: Recipe,
    /// Coordinate exchanged with the last one after construction (1-based).
    pole_axis: usize,
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

#[derive(Clone, Copy, Debug)]
enum Recipe {
    Product { m_s: usize, n_phi: usize },
    Kink { order: usize },
}

impl SphereRule {
    /// Product rule exact for polynomials of degree ≤ `order`; the Gauss
    /// direction's pole is e_d.
    pub fn product(d: usize, order: usize) -> Result<Self> {
        if !(2..=4).contains(&d) {
            return Err(Error::Unsupported(format!(
                "sphere rules are implemented for d in 2..=4, got {d}"
            )));
        }
        Self::product_with(d, order / 2 + 1, order + 1).map(|mut r| {
            r.order = order;
            r
        })
    }

    /// Product rule with `m_s` Gauss nodes per polar direction and `n_phi`
    /// equispaced angles on the innermost circle.
    pub fn product_with(d: usize, m_s: usize, n_phi: usize) -> Result<Self> {
        if d < 2 {
            return Err(Error::Unsupported(format!("sphere rules need d >= 2, got {d}")));
        }
        if n_phi == 0 || m_s == 0 {
            return Err(Error::InvalidParameter("sphere rule sizes must be positive".into()));
        }
        let mut nodes = Vec::with_capacity(2 * n_phi);
        let mut weights = Vec::with_capacity(n_phi);
        let h = 2.0 * PI / n_phi as f64;
        for k in 0..n_phi {
            let phi = k as f64 * h;
            nodes.push(phi.cos());
            nodes.push(phi.sin());
            weights.push(h);
        }
        let mut dim = 2;
        while dim < d {
            // x = (√(1−s²) y, s), dσ_{dim+1} = (1−s²)^{(dim−2)/2} ds dσ_dim(y)
            let a = (dim as f64 - 2.0) / 2.0;
            let g = gauss_jacobi(m_s, a, a)?;
            let mut nn = Vec::with_capacity(nodes.len() / dim * (dim + 1) * m_s);
            let mut nw = Vec::with_capacity(weights.len() * m_s);
            for (s, ws) in g.nodes.iter().zip(&g.weights) {
                let c = (1.0 - s * s).sqrt();
                for (y, wy) in nodes.chunks_exact(dim).zip(&weights) {
                    nn.extend(y.iter().map(|v| c * v));
                    nn.push(*s);
                    nw.push(ws * wy);
                }
            }
            nodes = nn;
            weights = nw;
            dim += 1;
        }
        Ok(Self {
            d,
            order: (2 * m_s - 1).min(n_phi - 1),
            recipe: Recipe::Product { m_s, n_phi },
            pole_axis: d,
            nodes,
            weights,
        })
    }

    /// Rule whose cell boundaries follow the planes x_i = x_j, where h_κ² is not
    /// smooth for non-integer κ. d = 2: two arcs split at θ = π/4, 5π/4.
    /// d = 3: polar axis (1,1,1)/√3 and six azimuthal sectors of width π/3,
    /// Gauss–Legendre in the polar angle θ with the sin θ Jacobian in the weight.
    pub fn kink_aligned(d: usize, order: usize) -> Result<Self> {
        match d {
            2 => {
                let g = gauss_legendre(order + 10)?;
                let mut nodes = Vec::new();
                let mut weights = Vec::new();
                for arc in 0..2 {
                    let start = PI / 4.0 + arc as f64 * PI;
                    for (x, w) in g.nodes.iter().zip(&g.weights) {
                        let th = start + 0.5 * PI * (x + 1.0);
                        nodes.push(th.cos());
                        nodes.push(th.sin());
                        weights.push(0.5 * PI * w);
                    }
                }
                Ok(Self {
                    d,
                    order,
                    recipe: Recipe::Kink { order },
                    pole_axis: d,
                    nodes,
                    weights,
                })
            }
            3 => {
                let gt = gauss_legendre(order + 10)?;
                let gp = gauss_legendre(order / 2 + 10)?;
                let s3 = 3f64.sqrt();
                let pole = [1.0 / s3, 1.0 / s3, 1.0 / s3];
                let s6 = 6f64.sqrt();
                let ea = [1.0 / s6, 1.0 / s6, -2.0 / s6];
                let eb = [1.0 / 2f64.sqrt(), -1.0 / 2f64.sqrt(), 0.0];
                let mut nodes = Vec::new();
                let mut weights = Vec::new();
                for (xt, wt) in gt.nodes.iter().zip(&gt.weights) {
                    let th = 0.5 * PI * (xt + 1.0);
                    let (st, ct) = th.sin_cos();
                    for sector in 0..6 {
                        let start = sector as f64 * PI / 3.0;
                        for (xp, wp) in gp.nodes.iter().zip(&gp.weights) {
                            let ph = start + PI / 6.0 * (xp + 1.0);
                            let (sp, cp) = ph.sin_cos();
                            for i in 0..3 {
                                nodes.push(ct * pole[i] + st * (cp * ea[i] + sp * eb[i]));
                            }
                            weights.push(0.5 * PI * wt * st * PI / 6.0 * wp);
                        }
                    }
                }
                Ok(Self {
                    d,
                    order,
                    recipe: Recipe::Kink { order },
                    pole_axis: d,
                    nodes,
                    weights,
                })
            }
            _ => Err(Error::Unsupported(format!(
                "kink-aligned sphere rules exist for d = 2, 3; got {d}"
            ))),
        }
    }

    /// Exchanges coordinates ℓ and d, moving the product rule's pole to e_ℓ.
    pub fn rotated_to_axis(&self, ell: usize) -> Result<Self> {
        if ell == 0 || ell > self.d {
            return Err(Error::AxisOutOfRange { axis: ell, dim: self.d });
        }
        let mut r = self.clone();
        let (a, b) = (ell - 1, self.d - 1);
        for x in r.nodes.chunks_exact_mut(self.d) {
            x.swap(a, b);
        }
        r.pole_axis = ell;
        Ok(r)
    }

    /// The same construction at about three quarters of the resolution, with
    /// the same pole; used for quadrature error estimates.
    pub fn coarsened(&self) -> Result<Self> {
        let shrink = |m: usize| (3 * m / 4).max(2);
        let r = match self.recipe {
            Recipe::Product { m_s, n_phi } => Self::product_with(self.d, shrink(m_s), shrink(n_phi))?,
            Recipe::Kink { order } => Self::kink_aligned(self.d, shrink(order))?,
        };
        if self.pole_axis == self.d {
            Ok(r)
        } else {
            r.rotated_to_axis(self.pole_axis)
        }
    }

    pub fn d(&self) -> usize {
        self.d
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

    pub fn nodes(&self) -> impl Iterator<Item = &[f64]> {
        self.nodes.chunks_exact(self.d)
    }

    pub fn nodes_flat(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn integrate<G: Fn(&[f64]) -> f64>(&self, g: G) -> f64 {
        let v: Vec<f64> = self.nodes().zip(&self.weights).map(|(x, w)| w * g(x)).collect();
        pairwise_sum(&v)
    }
}

/// Sphere rule for (d, order): a product rule when h_κ² is a polynomial
/// (2κ even) or no κ is given, the kink-aligned rule with doubled angular
/// resolution otherwise.
pub fn build_sphere_rule(d: usize, order: usize, kappa_hint: Option<f64>) -> Result<SphereRule> {
    let smooth = match kappa_hint {
        None => true,
        Some(k) => k == 0.0 || (k.fract() == 0.0),
    };
    if smooth || d == 4 {
        SphereRule::product(d, order)
    } else {
        SphereRule::kink_aligned(d, 2 * order)
    }
}

/// Sphere order integrating Y_iY_jh_κ² exactly for degree-n h-harmonics when κ is an integer.
pub fn default_sphere_order(n: usize, params: &KappaParams) -> usize {
    let d = params.d();
    let weight_deg = (d * (d - 1)) as f64 * params.kappa_f64();
    2 * n + weight_deg.ceil() as usize + 4
}

/// Closed-form a_κ and 1/∫h_κ² dσ by quadrature.
pub fn norm_const_a(params: &KappaParams, rule: &SphereRule) -> Result<(f64, f64)> {
    if rule.d() != params.d() {
        return Err(Error::RuleMismatch(format!(
            "sphere rule d={}, parameters d={}",
            rule.d(),
            params.d()
        )));
    }
    let integral = rule.integrate(|x| hweight_sq(x, params));
    if !(integral > 0.0 && integral.is_finite()) {
        return Err(Error::NonFinite(0));
    }
    Ok((params.a_kappa(), 1.0 / integral))
}

/// (row monomials, column monomials, matrix).
pub type LaplacianMatrix = (Vec<Monomial>, Vec<Monomial>, Vec<Vec<BigRational>>);

/// Exact matrix of Δ_κ from degree-n to degree-(n−2) homogeneous polynomials in
/// the ascending monomial bases; returns (rows, cols, matrix).
pub fn laplacian_matrix(n: u32, params: &KappaParams) -> Result<LaplacianMatrix> {
    let d = params.d();
    let cols = monomials_of_degree(d, n);
    let rows = if n >= 2 {
        monomials_of_degree(d, n - 2)
    } else {
        Vec::new()
    };
    let mut mat = vec![vec![num_traits::Zero::zero(); cols.len()]; rows.len()];
    for (c, m) in cols.iter().enumerate() {
        let p = Polynomial::from_terms(d, [(m.exponents().to_vec(), num_traits::One::one())])?;
        let lap = p.dunkl_laplacian(params)?;
        for (mono, coef) in lap.terms() {
            let r = rows
                .binary_search(mono)
                .map_err(|_| Error::Domain("Dunkl Laplacian left the homogeneous degree n-2 space".into()))?;
            mat[r][c] = coef.clone();
        }
    }
    Ok((rows, cols, mat))
}

/// Orthonormal basis of H_n^d(h_κ²).
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct HarmonicBasis {
    pub n: usize,
    pub d: usize,
    #[serde(with = "kappa_str")]
    pub kappa: BigRational,
    pub monomials: Vec<Vec<u32>>,
    /// Exact h-harmonics spanning the space (integer coefficients).
    pub nullspace: Vec<Polynomial>,
    /// Orthonormal basis as float coefficients over `monomials`.
    pub coefficients: Vec<Vec<f64>>,
    /// max |⟨Y_i, Y_j⟩_κ − δ_ij| recomputed after orthonormalization.
    pub gram_residual: f64,
    /// Spectral condition number of the Gram matrix of the normalized nullspace vectors.
    pub gram_condition: f64,
}

mod kappa_str {
    use num_rational::BigRational;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &BigRational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&r.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigRational, D::Error> {
        let s = String::deserialize(d)?;
        crate::params::parse_rational(&s).map_err(serde::de::Error::custom)
    }
}

impl HarmonicBasis {
    pub fn dim(&self) -> usize {
        self.coefficients.len()
    }

    fn monomial_values(&self, x: &[f64]) -> Vec<f64> {
        self.monomials
            .iter()
            .map(|e| e.iter().zip(x).map(|(&k, &xi)| xi.powi(k as i32)).product())
            .collect()
    }

    /// Values Y_1(x), …, Y_dim(x) of the orthonormal basis.
    pub fn eval_all(&self, x: &[f64]) -> Vec<f64> {
        let m = self.monomial_values(x);
        self.coefficients
            .iter()
            .map(|c| c.iter().zip(&m).map(|(a, b)| a * b).sum())
            .collect()
    }

    pub fn eval(&self, i: usize, x: &[f64]) -> f64 {
        let m = self.monomial_values(x);
        self.coefficients[i].iter().zip(&m).map(|(a, b)| a * b).sum()
    }

    /// Orthonormal elements as polynomials (each float coefficient converted exactly).
    pub fn polynomials(&self) -> Vec<Polynomial> {
        self.coefficients
            .iter()
            .map(|c| {
                let mut p = Polynomial::zero(self.d);
                for (e, v) in self.monomials.iter().zip(c) {
                    if let Some(r) = BigRational::from_float(*v) {
                        p.add_term(Monomial::new(e.clone()), r);
                    }
                }
                p
            })
            .collect()
    }
}

/// Basis of H_n^d(h_κ²): exact nullspace of Δ_κ, then Cholesky orthonormalization
/// of its Gram matrix under ⟨f,g⟩_κ = a_κ ∫ f g h_κ² dσ.
pub fn hharmonic_basis(n: usize, params: &KappaParams, rule: &SphereRule) -> Result<HarmonicBasis> {
    let d = params.d();
    if rule.d() != d {
        return Err(Error::RuleMismatch(format!(
            "sphere rule d={}, parameters d={d}",
            rule.d()
        )));
    }
    let (_, cols, mat) = laplacian_matrix(n as u32, params)?;
    let ns = nullspace(&mat, cols.len());
    let expected = harmonic_dim(n, d);
    if ns.len() != expected {
        return Err(Error::NullspaceDimension {
            expected,
            got: ns.len(),
        });
    }
    let nullspace_polys: Vec<Polynomial> = ns
        .iter()
        .map(|v| {
            let mut p = Polynomial::zero(d);
            for (m, c) in cols.iter().zip(v) {
                p.add_term(m.clone(), c.clone());
            }
            p.primitive_part()
        })
        .collect();

    // Float coefficient rows, scaled to unit Euclidean norm.
    let k = expected;
    let nc = cols.len();
    let mut c = DMatrix::<f64>::zeros(k, nc);
    for (i, p) in nullspace_polys.iter().enumerate() {
        for (j, m) in cols.iter().enumerate() {
            c[(i, j)] = rational_to_f64(&p.coeff(m));
        }
        let norm = c.row(i).norm();
        c.row_mut(i).scale_mut(1.0 / norm);
    }

    let a = params.a_kappa();
    let moment = monomial_gram(rule, &cols, params, a);
    let gram = &c * &moment * c.transpose();
    let eig = SymmetricEigen::new(gram.clone());
    let (lo, hi) = eig
        .eigenvalues
        .iter()
        .fold((f64::INFINITY, 0f64), |(lo, hi), &v| (lo.min(v), hi.max(v)));
    let chol = gram.clone().cholesky().ok_or(Error::GramNotPositiveDefinite)?;
    let l_inv = chol.l().try_inverse().ok_or(Error::GramNotPositiveDefinite)?;
    let ortho = &l_inv * &c;
    let check = &ortho * &moment * ortho.transpose();
    let mut residual: f64 = 0.0;
    for i in 0..k {
        for j in 0..k {
            let target = if i == j { 1.0 } else { 0.0 };
            residual = residual.max((check[(i, j)] - target).abs());
        }
    }
    Ok(HarmonicBasis {
        n,
        d,
        kappa: params.kappa().clone(),
        monomials: cols.iter().map(|m| m.exponents().to_vec()).collect(),
        nullspace: nullspace_polys,
        coefficients: (0..k).map(|i| ortho.row(i).iter().copied().collect()).collect(),
        gram_residual: residual,
        gram_condition: if lo > 0.0 { hi / lo } else { f64::INFINITY },
    })
}

/// M_{ab} = a_κ ∫ x^a x^b h_κ² dσ over the given monomials.
fn monomial_gram(rule: &SphereRule, monos: &[Monomial], params: &KappaParams, a: f64) -> DMatrix<f64> {
    let n = monos.len();
    let mut m = DMatrix::<f64>::zeros(n, n);
    for (x, w) in rule.nodes().zip(rule.weights()) {
        let v = DVector::from_iterator(n, monos.iter().map(|mo| mo.eval(x)));
        let s = a * w * hweight_sq(x, params);
        m.ger(s, &v, &v, 1.0);
    }
    m
}

pub(crate) fn check_unit(x: &[f64]) -> Result<()> {
    let r = x.iter().map(|v| v * v).sum::<f64>().sqrt();
    if (r - 1.0).abs() > 1e-10 {
        return Err(Error::Domain(format!("point must lie on the unit sphere, |x| = {r}")));
    }
    Ok(())
}

/// P_n(h_κ²; x, e_ℓ) = c_κ ∫ Z_n^{λ_κ}(⟨x,t⟩) t_{ℓ−1} (t_0⋯t_{d−1})^{κ−1} dt.
pub fn repro_kernel_axis(n: usize, ell: usize, x: &[f64], params: &KappaParams, rule: &SimplexRule) -> Result<f64> {
    check_unit(x)?;
    let lambda = params.lambda();
    // Rounding can push ⟨x,t⟩ a hair outside [−1, 1].
    let func = AxisFunction::new(ell, |s: f64| {
        zonal_kernel(n, lambda, s.clamp(-1.0, 1.0)).unwrap_or(f64::NAN)
    });
    vk_axis(&func, x, params, rule)
}

/// P_n(h_κ²; x, y) = Σ_i Y_i(x) Y_i(y).
pub fn repro_kernel_basis(x: &[f64], y: &[f64], basis: &HarmonicBasis) -> f64 {
    let a = basis.eval_all(x);
    let b = basis.eval_all(y);
    a.iter().zip(&b).map(|(u, v)| u * v).sum()
}

/// ω_d for convenience next to the rules.
pub fn omega(d: usize) -> f64 {
    sphere_area(d)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn kp(d: usize, n: i64, den: i64) -> KappaParams {
        KappaParams::from_ratio(d, n, den).unwrap()
    }

    #[test]
    fn weight_basics() {
        let p = kp(2, 1, 1);
        assert!((hweight(&[1.0, 0.0], &p) - 1.0).abs() < 1e-15);
        let p3 = kp(3, 3, 2);
        assert_eq!(hweight(&[0.5, 0.5, 0.1], &p3), 0.0);
        let x = [0.3, -0.7, 0.2];
        let xs = [-0.7, 0.2, 0.3];
        assert!((hweight(&x, &p3) - hweight(&xs, &p3)).abs() < 1e-15);
    }

    #[test]
    fn dims() {
        assert_eq!(harmonic_dim(0, 3), 1);
        assert_eq!(harmonic_dim(2, 3), 5);
        assert_eq!(harmonic_dim(4, 2), 2);
        assert_eq!(harmonic_dim(3, 4), 16);
    }

    #[test]
    fn sphere_mass_and_second_moment() {
        for d in 2..=4 {
            for order in [4usize, 10, 21] {
                let r = SphereRule::product(d, order).unwrap();
                let w = omega(d);
                assert!((r.integrate(|_| 1.0) - w).abs() < 1e-12 * w);
                assert!((r.integrate(|x| x[0] * x[0]) - w / d as f64).abs() < 1e-12 * w);
                for x in r.nodes() {
                    assert!((x.iter().map(|v| v * v).sum::<f64>() - 1.0).abs() < 1e-14);
                }
            }
        }
        for d in [2, 3] {
            let r = SphereRule::kink_aligned(d, 20).unwrap();
            assert!((r.integrate(|_| 1.0) - omega(d)).abs() < 1e-12 * omega(d));
            assert!((r.integrate(|x| x[1].powi(4)) - r.integrate(|x| x[0].powi(4))).abs() < 1e-12);
        }
        assert!(SphereRule::product(5, 4).is_err());
    }

    #[test]
    fn a_kappa_quadrature() {
        let p = kp(2, 1, 1);
        let r = SphereRule::product(2, 8).unwrap();
        let (closed, quad) = norm_const_a(&p, &r).unwrap();
        assert!((closed - quad).abs() < 1e-13);
        for (n, den) in [(1, 2), (1, 1)] {
            let p = kp(3, n, den);
            let r = build_sphere_rule(3, 30, Some(p.kappa_f64())).unwrap();
            let (closed, quad) = norm_const_a(&p, &r).unwrap();
            assert!(((closed - quad) / closed).abs() < 1e-8, "{closed} {quad}");
        }
    }

    #[test]
    fn basis_dimensions_and_annihilation() {
        let p = kp(3, 1, 1);
        let r = SphereRule::product(3, 20).unwrap();
        let b = hharmonic_basis(2, &p, &r).unwrap();
        assert_eq!(b.dim(), 5);
        for y in &b.nullspace {
            assert!(y.dunkl_laplacian(&p).unwrap().is_zero());
        }
        assert!(b.gram_residual < 1e-10);
        let b0 = hharmonic_basis(0, &p, &r).unwrap();
        assert_eq!(b0.dim(), 1);
        assert!((b0.eval(0, &[0.0, 0.0, 1.0]).abs() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn d2_degree2_contains_difference_of_squares() {
        let p = kp(2, 3, 2);
        let (_, cols, mat) = laplacian_matrix(2, &p).unwrap();
        // x1² − x2² in ascending monomial order [x2², x1x2, x1²]
        let v: Vec<BigRational> = cols
            .iter()
            .map(|m| match m.exponents() {
                [2, 0] => BigRational::from_integer(1.into()),
                [0, 2] => BigRational::from_integer((-1).into()),
                _ => BigRational::from_integer(0.into()),
            })
            .collect();
        for row in &mat {
            let s: BigRational = row.iter().zip(&v).map(|(a, b)| a * b).sum();
            assert_eq!(s, BigRational::from_integer(0.into()));
        }
    }

    #[test]
    fn kernel_at_degree_zero_and_kappa_zero() {
        let p = kp(3, 1, 1);
        let rule = SimplexRule::build(3, p.kappa(), 16).unwrap();
        let x = [0.6, 0.0, 0.8];
        assert!((repro_kernel_axis(0, 2, &x, &p, &rule).unwrap() - 1.0).abs() < 1e-12);
        assert!(repro_kernel_axis(1, 2, &[1.0, 1.0, 0.0], &p, &rule).is_err());
        let p0 = kp(3, 0, 1);
        let v = repro_kernel_axis(3, 3, &x, &p0, &rule).unwrap();
        assert!((v - crate::orthopoly::zn_eval(3, 0.5, 0.8).unwrap()).abs() < 1e-12);
    }
}
