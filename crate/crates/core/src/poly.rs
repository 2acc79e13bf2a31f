//! Sparse multivariate polynomials over exact rationals, and the Dunkl operators
//! for the symmetric group acting on them.
//!
//! Axes are 1-based in the public API (matching x_1, …, x_d); exponent vectors
//! are stored 0-based.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::params::{rational_to_f64, KappaParams};

pub type Rational = BigRational;

/// Exponent vector of x^α.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn new(exponents: Vec<u32>) -> Self {
        Monomial(exponents)
    }

    pub fn one(dim: usize) -> Self {
        Monomial(vec![0; dim])
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        self.0.iter().zip(x).map(|(&e, &xi)| xi.powi(e as i32)).product()
    }
}

/// All exponent vectors of total degree `n` in `dim` variables, in ascending order.
pub fn monomials_of_degree(dim: usize, n: u32) -> Vec<Monomial> {
    fn rec(dim: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Monomial>) {
        if cur.len() == dim - 1 {
            cur.push(left);
            out.push(Monomial(cur.clone()));
            cur.pop();
            return;
        }
        for e in 0..=left {
            cur.push(e);
            rec(dim, left - e, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if dim == 0 {
        return out;
    }
    rec(dim, n, &mut Vec::with_capacity(dim), &mut out);
    out.sort();
    out
}

#[derive(Clone, PartialEq, Eq)]
pub struct Polynomial {
    dim: usize,
    terms: BTreeMap<Monomial, Rational>,
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({c})")?;
            for (i, &e) in m.0.iter().enumerate() {
                match e {
                    0 => {}
                    1 => write!(f, "*x{}", i + 1)?,
                    _ => write!(f, "*x{}^{}", i + 1, e)?,
                }
            }
        }
        Ok(())
    }
}

impl Polynomial {
    pub fn zero(dim: usize) -> Self {
        Self {
            dim,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(dim: usize, c: Rational) -> Self {
        let mut p = Self::zero(dim);
        p.add_term(Monomial::one(dim), c);
        p
    }

    pub fn one(dim: usize) -> Self {
        Self::constant(dim, Rational::one())
    }

    /// The coordinate function x_axis (1-based).
    pub fn var(dim: usize, axis: usize) -> Result<Self> {
        check_axis(axis, dim)?;
        let mut e = vec![0; dim];
        e[axis - 1] = 1;
        let mut p = Self::zero(dim);
        p.add_term(Monomial(e), Rational::one());
        Ok(p)
    }

    pub fn from_terms<I>(dim: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vec<u32>, Rational)>,
    {
        let mut p = Self::zero(dim);
        for (e, c) in terms {
            if e.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    got: e.len(),
                });
            }
            p.add_term(Monomial(e), c);
        }
        Ok(p)
    }

    /// Convenience constructor with integer coefficients.
    pub fn from_int_terms(dim: usize, terms: &[(&[u32], i64)]) -> Result<Self> {
        Self::from_terms(
            dim,
            terms
                .iter()
                .map(|(e, c)| (e.to_vec(), Rational::from_integer(BigInt::from(*c)))),
        )
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    /// Adds c·m, dropping the entry if it cancels.
    pub fn add_term(&mut self, m: Monomial, c: Rational) {
        debug_assert_eq!(m.dim(), self.dim);
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).max()
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut degs = self.terms.keys().map(Monomial::degree);
        match degs.next() {
            None => true,
            Some(d0) => degs.all(|d| d == d0),
        }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero(self.dim);
        }
        Self {
            dim: self.dim,
            terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect(),
        }
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        self.terms.iter().map(|(m, c)| rational_to_f64(c) * m.eval(x)).sum()
    }

    pub fn eval_exact(&self, x: &[Rational]) -> Rational {
        let mut acc = Rational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (&e, xi) in m.0.iter().zip(x) {
                for _ in 0..e {
                    t *= xi;
                }
            }
            acc += t;
        }
        acc
    }

    /// Formal partial derivative ∂/∂x_axis.
    pub fn partial_derivative(&self, axis: usize) -> Result<Self> {
        check_axis(axis, self.dim)?;
        let i = axis - 1;
        let mut out = Self::zero(self.dim);
        for (m, c) in &self.terms {
            let e = m.0[i];
            if e == 0 {
                continue;
            }
            let mut nm = m.0.clone();
            nm[i] -= 1;
            out.add_term(Monomial(nm), c * Rational::from_integer(BigInt::from(e)));
        }
        Ok(out)
    }

    /// p(x(i,j)): variables i and j exchanged.
    pub fn transposition_action(&self, i: usize, j: usize) -> Result<Self> {
        check_pair(i, j, self.dim)?;
        let mut out = Self::zero(self.dim);
        for (m, c) in &self.terms {
            let mut nm = m.0.clone();
            nm.swap(i - 1, j - 1);
            out.add_term(Monomial(nm), c.clone());
        }
        Ok(out)
    }

    /// Exact quotient (p − p∘(i,j)) / (x_i − x_j), term by term via
    /// x_i^a x_j^b − x_i^b x_j^a = (x_i − x_j) x_i^m x_j^m Σ_{k<|a−b|} x_i^{|a−b|−1−k} x_j^k · sign.
    pub fn divided_difference(&self, i: usize, j: usize) -> Result<Self> {
        check_pair(i, j, self.dim)?;
        let (ii, jj) = (i - 1, j - 1);
        let mut out = Self::zero(self.dim);
        for (m, c) in &self.terms {
            let (a, b) = (m.0[ii], m.0[jj]);
            if a == b {
                continue;
            }
            let (lo, gap, coef) = if a > b {
                (b, a - b, c.clone())
            } else {
                (a, b - a, -c.clone())
            };
            for k in 0..gap {
                let mut nm = m.0.clone();
                nm[ii] = lo + gap - 1 - k;
                nm[jj] = lo + k;
                out.add_term(Monomial(nm), coef.clone());
            }
        }
        Ok(out)
    }

    /// D_i p = ∂_i p + κ Σ_{j≠i} (p − p∘(i,j))/(x_i − x_j).
    pub fn dunkl_apply(&self, axis: usize, params: &KappaParams) -> Result<Self> {
        if params.d() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: params.d(),
                got: self.dim,
            });
        }
        let mut out = self.partial_derivative(axis)?;
        if params.is_zero() {
            return Ok(out);
        }
        let mut diff = Self::zero(self.dim);
        for j in 1..=self.dim {
            if j != axis {
                diff = diff + self.divided_difference(axis, j)?;
            }
        }
        out = out + diff.scale(params.kappa());
        Ok(out)
    }

    /// Δ_κ p = Σ_i D_i² p.
    pub fn dunkl_laplacian(&self, params: &KappaParams) -> Result<Self> {
        let mut out = Self::zero(self.dim);
        for i in 1..=self.dim {
            out = out + self.dunkl_apply(i, params)?.dunkl_apply(i, params)?;
        }
        Ok(out)
    }

    /// Multiplies through so that all coefficients are coprime integers with a
    /// positive leading (largest-monomial) coefficient.
    pub fn primitive_part(&self) -> Self {
        use num_integer::Integer;
        if self.is_zero() {
            return self.clone();
        }
        let mut l = BigInt::one();
        for c in self.terms.values() {
            l = l.lcm(c.denom());
        }
        let mut g = BigInt::zero();
        for c in self.terms.values() {
            let n = (c * Rational::from_integer(l.clone())).to_integer();
            g = g.gcd(&n);
        }
        let lead_neg = self
            .terms
            .values()
            .next_back()
            .map(|c| c.is_negative())
            .unwrap_or(false);
        let mut s = Rational::new(l, g);
        if lead_neg {
            s = -s;
        }
        self.scale(&s)
    }
}

fn check_axis(axis: usize, dim: usize) -> Result<()> {
    if axis == 0 || axis > dim {
        return Err(Error::AxisOutOfRange { axis, dim });
    }
    Ok(())
}

fn check_pair(i: usize, j: usize, dim: usize) -> Result<()> {
    check_axis(i, dim)?;
    check_axis(j, dim)?;
    if i == j {
        return Err(Error::SameAxis(i));
    }
    Ok(())
}

impl Add for Polynomial {
    type Output = Polynomial;
    fn add(mut self, rhs: Polynomial) -> Polynomial {
        assert_eq!(self.dim, rhs.dim, "polynomial dimension mismatch");
        for (m, c) in rhs.terms {
            self.add_term(m, c);
        }
        self
    }
}

impl<'a> Add<&'a Polynomial> for &'a Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        self.clone() + rhs.clone()
    }
}

impl Neg for Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        self.scale(&-Rational::one())
    }
}

impl Sub for Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: Polynomial) -> Polynomial {
        self + (-rhs)
    }
}

impl<'a> Sub<&'a Polynomial> for &'a Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        self.clone() - rhs.clone()
    }
}

impl<'a> Mul<&'a Polynomial> for &'a Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        assert_eq!(self.dim, rhs.dim, "polynomial dimension mismatch");
        let mut out = Polynomial::zero(self.dim);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                let e = ma.0.iter().zip(&mb.0).map(|(a, b)| a + b).collect();
                out.add_term(Monomial(e), ca * cb);
            }
        }
        out
    }
}

impl Mul for Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: Polynomial) -> Polynomial {
        &self * &rhs
    }
}

// JSON: {"d": int, "terms": [{"exp": [..], "num": int, "den": int}]}, canonical order.

#[derive(Serialize, Deserialize)]
struct TermJson {
    exp: Vec<u32>,
    num: serde_json::Number,
    den: serde_json::Number,
}

#[derive(Serialize, Deserialize)]
struct PolyJson {
    d: usize,
    terms: Vec<TermJson>,
}

fn bigint_number(n: &BigInt) -> serde_json::Number {
    serde_json::Number::from_str(&n.to_string()).expect("integer literal is a valid JSON number")
}

impl Serialize for Polynomial {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        PolyJson {
            d: self.dim,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| TermJson {
                    exp: m.0.clone(),
                    num: bigint_number(c.numer()),
                    den: bigint_number(c.denom()),
                })
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Polynomial {
    fn deserialize<D: Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        let pj = PolyJson::deserialize(de)?;
        let mut terms = Vec::with_capacity(pj.terms.len());
        for t in pj.terms {
            let num = BigInt::from_str(&t.num.to_string()).map_err(D::Error::custom)?;
            let den = BigInt::from_str(&t.den.to_string()).map_err(D::Error::custom)?;
            if den.is_zero() {
                return Err(D::Error::custom("zero denominator"));
            }
            terms.push((t.exp, Rational::new(num, den)));
        }
        Polynomial::from_terms(pj.d, terms).map_err(D::Error::custom)
    }
}
