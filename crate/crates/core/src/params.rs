//! Multiplicity parameter κ for the symmetric group S_d and the constants derived from it.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::special::{ln_gamma, sphere_area};

/// Largest denominator used when a decimal κ is snapped to a rational.
pub const MAX_DECIMAL_DENOMINATOR: i64 = 1_000_000;

/// Parses `"p/q"` exactly, or a decimal (optionally with exponent) into the
/// nearest rational whose denominator is at most [`MAX_DECIMAL_DENOMINATOR`].
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    if s.is_empty() {
        return Err(Error::Parse("empty rational".into()));
    }
    if let Some((p, q)) = s.split_once('/') {
        let p = BigInt::from_str(p.trim()).map_err(|e| Error::Parse(format!("{s}: {e}")))?;
        let q = BigInt::from_str(q.trim()).map_err(|e| Error::Parse(format!("{s}: {e}")))?;
        if q.is_zero() {
            return Err(Error::Parse(format!("{s}: zero denominator")));
        }
        return Ok(BigRational::new(p, q));
    }
    let exact = parse_decimal_exact(s)?;
    Ok(limit_denominator(&exact, &BigInt::from(MAX_DECIMAL_DENOMINATOR)))
}

fn parse_decimal_exact(s: &str) -> Result<BigRational> {
    let bad = || Error::Parse(format!("not a number: {s}"));
    let (mantissa, exp) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i32>().map_err(|_| bad())?),
        None => (s, 0),
    };
    let (neg, body) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = body.split_once('.').unwrap_or((body, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad());
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let digits = format!("{int_part}{frac_part}");
    let mut num = BigInt::from_str(if digits.is_empty() { "0" } else { &digits }).map_err(|_| bad())?;
    if neg {
        num = -num;
    }
    let scale = exp - frac_part.len() as i32;
    let ten = BigInt::from(10);
    let r = if scale >= 0 {
        BigRational::from_integer(num * num_traits::pow(ten, scale as usize))
    } else {
        BigRational::new(num, num_traits::pow(ten, (-scale) as usize))
    };
    Ok(r)
}

/// Closest rational to `x` with denominator at most `max_den` (continued fractions
/// with a final semiconvergent check).
pub fn limit_denominator(x: &BigRational, max_den: &BigInt) -> BigRational {
    if x.denom() <= max_den {
        return x.clone();
    }
    let neg = x.is_negative();
    let ax = x.abs();
    let (mut p0, mut q0, mut p1, mut q1) = (BigInt::zero(), BigInt::one(), BigInt::one(), BigInt::zero());
    let (mut n, mut d) = (ax.numer().clone(), ax.denom().clone());
    loop {
        let a = n.div_floor(&d);
        let q2 = &q0 + &a * &q1;
        if &q2 > max_den {
            break;
        }
        let p2 = &p0 + &a * &p1;
        p0 = std::mem::replace(&mut p1, p2);
        q0 = std::mem::replace(&mut q1, q2);
        let r = &n - &a * &d;
        n = std::mem::replace(&mut d, r);
        if d.is_zero() {
            break;
        }
    }
    let k = (max_den - &q0).div_floor(&q1);
    let b1 = BigRational::new(&p0 + &k * &p1, &q0 + &k * &q1);
    let b2 = BigRational::new(p1, q1);
    let best = if (&b2 - &ax).abs() <= (&b1 - &ax).abs() { b2 } else { b1 };
    if neg {
        -best
    } else {
        best
    }
}

pub fn rational_to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        // very large numerator/denominator: divide in log space
        let n = r.numer().to_f64().unwrap_or(f64::INFINITY);
        let d = r.denom().to_f64().unwrap_or(f64::INFINITY);
        n / d
    })
}

/// Group parameters (d, κ) with exact κ and its floating mirror.
#[derive(Clone, PartialEq, Serialize, Deserialize)]
pub struct KappaParams {
    d: usize,
    #[serde(with = "rational_string")]
    kappa: BigRational,
    kappa_f: f64,
}

impl fmt::Debug for KappaParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "KappaParams(d={}, kappa={})", self.d, self.kappa)
    }
}

impl KappaParams {
    pub fn new(d: usize, kappa: BigRational) -> Result<Self> {
        if d < 2 {
            return Err(Error::InvalidParameter(format!("d must be >= 2, got {d}")));
        }
        if kappa.is_negative() {
            return Err(Error::InvalidParameter(format!("kappa must be >= 0, got {kappa}")));
        }
        let kappa_f = rational_to_f64(&kappa);
        Ok(Self { d, kappa, kappa_f })
    }

    pub fn from_ratio(d: usize, num: i64, den: i64) -> Result<Self> {
        if den == 0 {
            return Err(Error::InvalidParameter("zero denominator".into()));
        }
        Self::new(d, BigRational::new(num.into(), den.into()))
    }

    /// κ given as a float: the exact side is the nearest rational with bounded
    /// denominator, the numeric side keeps the float untouched.
    pub fn from_f64(d: usize, kappa: f64) -> Result<Self> {
        if !kappa.is_finite() {
            return Err(Error::InvalidParameter(format!("kappa must be finite, got {kappa}")));
        }
        let exact = BigRational::from_float(kappa)
            .map(|r| limit_denominator(&r, &BigInt::from(MAX_DECIMAL_DENOMINATOR)))
            .ok_or_else(|| Error::InvalidParameter(format!("bad kappa {kappa}")))?;
        let mut p = Self::new(d, exact)?;
        p.kappa_f = kappa;
        Ok(p)
    }

    pub fn parse(d: usize, kappa: &str) -> Result<Self> {
        Self::new(d, parse_rational(kappa)?)
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn kappa(&self) -> &BigRational {
        &self.kappa
    }

    pub fn kappa_f64(&self) -> f64 {
        self.kappa_f
    }

    pub fn is_zero(&self) -> bool {
        self.kappa.is_zero()
    }

    /// κ as a non-negative integer, when it is one.
    pub fn integer_kappa(&self) -> Option<u32> {
        if self.kappa.is_integer() {
            self.kappa.to_integer().to_u32()
        } else {
            None
        }
    }

    fn pairs(&self) -> usize {
        self.d * (self.d - 1) / 2
    }

    /// λ_κ = C(d,2)κ + (d−2)/2.
    pub fn lambda_exact(&self) -> BigRational {
        BigRational::from_integer(self.pairs().into()) * &self.kappa
            + BigRational::new((self.d as i64 - 2).into(), 2.into())
    }

    pub fn lambda(&self) -> f64 {
        self.pairs() as f64 * self.kappa_f + (self.d as f64 - 2.0) / 2.0
    }

    /// Critical Cesàro index at coordinate vectors: λ_κ − (d−1)κ = C(d−1,2)κ + (d−2)/2.
    pub fn critical_delta_exact(&self) -> BigRational {
        self.lambda_exact() - BigRational::from_integer((self.d as i64 - 1).into()) * &self.kappa
    }

    pub fn critical_delta(&self) -> f64 {
        let m = (self.d - 1) * (self.d - 2) / 2;
        m as f64 * self.kappa_f + (self.d as f64 - 2.0) / 2.0
    }

    /// c_κ = Γ(dκ+1)/(κ Γ(κ)^d); undefined (NaN) at κ = 0.
    pub fn c_kappa(&self) -> f64 {
        let k = self.kappa_f;
        if k <= 0.0 {
            return f64::NAN;
        }
        let d = self.d as f64;
        (ln_gamma(d * k + 1.0) - k.ln() - d * ln_gamma(k)).exp()
    }

    /// Closed-form normalization a_κ with a_κ ∫_{S^{d-1}} h_κ² dσ = 1.
    pub fn a_kappa(&self) -> f64 {
        let k = self.kappa_f;
        let d = self.d as f64;
        let m = self.pairs() as f64 * k;
        let mut ln = m * std::f64::consts::LN_2 - sphere_area(self.d).ln() + ln_gamma(m + d / 2.0) - ln_gamma(d / 2.0);
        for j in 2..=self.d {
            ln += ln_gamma(k + 1.0) - ln_gamma(j as f64 * k + 1.0);
        }
        ln.exp()
    }

    /// Threshold λ_κ − min κ_i for the sign-change group Z_2^d with all κ_i = κ
    /// (displayed for comparison only).
    pub fn z2d_threshold(&self) -> f64 {
        // For Z_2^d, λ_κ = Σκ_i + (d−2)/2.
        self.d as f64 * self.kappa_f + (self.d as f64 - 2.0) / 2.0 - self.kappa_f
    }
}

mod rational_string {
    use super::*;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &BigRational, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&r.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<BigRational, D::Error> {
        let s = String::deserialize(d)?;
        parse_rational(&s).map_err(serde::de::Error::custom)
    }
}
