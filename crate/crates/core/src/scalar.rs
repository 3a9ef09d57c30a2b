//! Coefficient fields.
//!
//! Two complex coefficient types are supported: exact complex rationals
//! ([`ExactComplex`]) and binary floating point ([`Complex64`]). Every
//! series, deck and solver in the crate is generic over [`Coeff`], so a
//! computation runs entirely in one mode.

use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_complex::{Complex, Complex64};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

/// Complex number with arbitrary-precision rational parts.
pub type ExactComplex = Complex<BigRational>;

/// Relative threshold under which float coefficients are treated as noise.
pub const FLOAT_CLEANUP: f64 = 1e-14;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Exact,
    Float,
}

impl Mode {
    pub fn as_str(self) -> &'static str {
        match self {
            Mode::Exact => "exact",
            Mode::Float => "float",
        }
    }
}

impl FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "exact" => Ok(Mode::Exact),
            "float" => Ok(Mode::Float),
            other => Err(format!("unknown coefficient mode `{other}`")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("cannot parse `{0}` as a decimal number")]
pub struct ParseScalarError(pub String);

/// Operations the series and solver layers need from a coefficient field.
pub trait Coeff:
    Clone
    + Debug
    + PartialEq
    + Send
    + Sync
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + 'static
{
    const MODE: Mode;

    fn zero() -> Self;
    fn one() -> Self;
    fn from_i64(v: i64) -> Self;
    /// Rational `num/den` (exact in exact mode).
    fn from_ratio(num: i64, den: i64) -> Self;
    fn from_parts(re: Self, im: Self) -> Self;
    fn i() -> Self;
    fn is_zero(&self) -> bool;
    fn to_c64(&self) -> Complex64;
    fn conj(&self) -> Self;
    fn re_im_strings(&self) -> (String, String);
    fn parse_parts(re: &str, im: &str) -> Result<Self, ParseScalarError>;

    /// Float-mode noise test relative to `scale` (the largest magnitude in
    /// the surrounding object). Exact mode only drops true zeros.
    fn negligible(&self, scale: f64) -> bool;

    fn abs_f64(&self) -> f64 {
        self.to_c64().norm()
    }

    fn add_ref(&self, other: &Self) -> Self {
        self.clone() + other.clone()
    }

    fn mul_ref(&self, other: &Self) -> Self {
        self.clone() * other.clone()
    }

    fn inv(&self) -> Self {
        Self::one() / self.clone()
    }

    /// Integer power; negative exponents invert.
    fn pow_int(&self, e: i64) -> Self {
        if e < 0 {
            return self.inv().pow_int(-e);
        }
        let mut base = self.clone();
        let mut acc = Self::one();
        let mut k = e as u64;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc * base.clone();
            }
            k >>= 1;
            if k > 0 {
                base = base.clone() * base;
            }
        }
        acc
    }

    /// Approximate equality used by membership tests: exact equality in
    /// exact mode, relative tolerance `tol` (scaled by the larger modulus) in
    /// float mode.
    fn approx_eq(&self, other: &Self, tol: f64) -> bool;
}

fn parse_rational(s: &str) -> Result<BigRational, ParseScalarError> {
    let err = || ParseScalarError(s.to_string());
    let t = s.trim();
    if t.is_empty() {
        return Err(err());
    }
    if let Some((n, d)) = t.split_once('/') {
        let n = BigInt::from_str(n.trim()).map_err(|_| err())?;
        let d = BigInt::from_str(d.trim()).map_err(|_| err())?;
        if d.is_zero() {
            return Err(err());
        }
        return Ok(BigRational::new(n, d));
    }
    let (mantissa, exp) = match t.find(['e', 'E']) {
        Some(pos) => {
            let e: i64 = t[pos + 1..].parse().map_err(|_| err())?;
            (&t[..pos], e)
        }
        None => (t, 0),
    };
    let (neg, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(err());
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return Err(err());
    }
    let all: String = format!("{int_part}{frac_part}");
    let mut num = BigInt::from_str(if all.is_empty() { "0" } else { &all }).map_err(|_| err())?;
    if neg {
        num = -num;
    }
    let scale = exp - frac_part.len() as i64;
    let ten = BigInt::from(10u8);
    let r = if scale >= 0 {
        BigRational::from_integer(num * num_traits::pow(ten, scale as usize))
    } else {
        BigRational::new(num, num_traits::pow(ten, (-scale) as usize))
    };
    Ok(r)
}

fn rational_string(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parses a decimal (`"-1.25"`, `"3e-2"`) or fraction (`"1/3"`) string
/// into an exact rational.
pub fn parse_exact(s: &str) -> Result<BigRational, ParseScalarError> {
    parse_rational(s)
}

/// Parses a decimal string into a float.
pub fn parse_float(s: &str) -> Result<f64, ParseScalarError> {
    let t = s.trim();
    if t.contains('/') {
        return parse_rational(t)?
            .to_f64()
            .ok_or_else(|| ParseScalarError(s.to_string()));
    }
    t.parse::<f64>().map_err(|_| ParseScalarError(s.to_string()))
}

fn rat_to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        if r.is_negative() {
            f64::NEG_INFINITY
        } else {
            f64::INFINITY
        }
    })
}

impl Coeff for ExactComplex {
    const MODE: Mode = Mode::Exact;

    fn zero() -> Self {
        Complex::new(BigRational::zero(), BigRational::zero())
    }

    fn one() -> Self {
        Complex::new(BigRational::one(), BigRational::zero())
    }

    fn from_i64(v: i64) -> Self {
        Complex::new(BigRational::from_integer(v.into()), BigRational::zero())
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        Complex::new(
            BigRational::new(num.into(), den.into()),
            BigRational::zero(),
        )
    }

    fn from_parts(re: Self, im: Self) -> Self {
        re + im * Self::i()
    }

    fn i() -> Self {
        Complex::new(BigRational::zero(), BigRational::one())
    }

    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    fn to_c64(&self) -> Complex64 {
        Complex64::new(rat_to_f64(&self.re), rat_to_f64(&self.im))
    }

    fn conj(&self) -> Self {
        Complex::new(self.re.clone(), -self.im.clone())
    }

    fn re_im_strings(&self) -> (String, String) {
        (rational_string(&self.re), rational_string(&self.im))
    }

    fn parse_parts(re: &str, im: &str) -> Result<Self, ParseScalarError> {
        Ok(Complex::new(parse_rational(re)?, parse_rational(im)?))
    }

    fn negligible(&self, _scale: f64) -> bool {
        Coeff::is_zero(self)
    }

    fn add_ref(&self, other: &Self) -> Self {
        Complex::new(&self.re + &other.re, &self.im + &other.im)
    }

    fn mul_ref(&self, other: &Self) -> Self {
        Complex::new(
            &self.re * &other.re - &self.im * &other.im,
            &self.re * &other.im + &self.im * &other.re,
        )
    }

    fn approx_eq(&self, other: &Self, _tol: f64) -> bool {
        self == other
    }
}

impl Coeff for Complex64 {
    const MODE: Mode = Mode::Float;

    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }

    fn one() -> Self {
        Complex64::new(1.0, 0.0)
    }

    fn from_i64(v: i64) -> Self {
        Complex64::new(v as f64, 0.0)
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        Complex64::new(num as f64 / den as f64, 0.0)
    }

    fn from_parts(re: Self, im: Self) -> Self {
        re + im * Complex64::i()
    }

    fn i() -> Self {
        Complex64::i()
    }

    fn is_zero(&self) -> bool {
        self.re == 0.0 && self.im == 0.0
    }

    fn to_c64(&self) -> Complex64 {
        *self
    }

    fn conj(&self) -> Self {
        Complex64::conj(self)
    }

    fn re_im_strings(&self) -> (String, String) {
        // `Display` for f64 prints the shortest string that round-trips.
        (format!("{}", self.re), format!("{}", self.im))
    }

    fn parse_parts(re: &str, im: &str) -> Result<Self, ParseScalarError> {
        Ok(Complex64::new(parse_float(re)?, parse_float(im)?))
    }

    fn negligible(&self, scale: f64) -> bool {
        self.norm() < FLOAT_CLEANUP * scale || Coeff::is_zero(self)
    }

    fn pow_int(&self, e: i64) -> Self {
        self.powi(e as i32)
    }

    fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        let scale = self.norm().max(other.norm());
        (self - other).norm() <= tol * scale.max(f64::MIN_POSITIVE)
    }
}

/// Converts a float into an exact rational (exact binary expansion).
pub fn exact_from_f64(x: f64) -> BigRational {
    BigRational::from_float(x).unwrap_or_else(BigRational::zero)
}

/// A complex value given as a pair of decimal strings, the interchange
/// form for every JSON input in the crate.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum DecimalComplex {
    Real(String),
    Parts { re: String, im: String },
}

impl DecimalComplex {
    pub fn parse<C: Coeff>(&self) -> Result<C, ParseScalarError> {
        match self {
            DecimalComplex::Real(s) => C::parse_parts(s, "0"),
            DecimalComplex::Parts { re, im } => C::parse_parts(re, im),
        }
    }

    pub fn from_coeff<C: Coeff>(c: &C) -> Self {
        let (re, im) = c.re_im_strings();
        if im == "0" {
            DecimalComplex::Real(re)
        } else {
            DecimalComplex::Parts { re, im }
        }
    }
}
