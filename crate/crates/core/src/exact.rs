//! Exact scalars: rationals, the quadratic field slice `Q + Q*sqrt(3)`, and
//! angle cosines represented without floating point.

use std::cmp::Ordering;
use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExactError {
    #[error("zero vector has no direction")]
    ZeroVector,
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("cannot parse rational from {0:?}")]
    Parse(String),
    #[error("division by zero")]
    DivisionByZero,
}

/// Arbitrary-precision rational number, always kept in lowest terms with a
/// positive denominator.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Rational(BigRational);

impl Rational {
    pub fn new(numer: i64, denom: i64) -> Self {
        assert!(denom != 0, "zero denominator");
        Rational(BigRational::new(BigInt::from(numer), BigInt::from(denom)))
    }

    pub fn from_integer(n: i64) -> Self {
        Rational(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn zero() -> Self {
        Rational(BigRational::zero())
    }

    pub fn one() -> Self {
        Rational(BigRational::one())
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_positive(&self) -> bool {
        self.0.is_positive()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    /// -1, 0 or +1.
    pub fn signum(&self) -> i8 {
        if self.0.is_zero() {
            0
        } else if self.0.is_positive() {
            1
        } else {
            -1
        }
    }

    pub fn abs(&self) -> Self {
        Rational(self.0.abs())
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn recip(&self) -> Result<Self, ExactError> {
        if self.is_zero() {
            return Err(ExactError::DivisionByZero);
        }
        Ok(Rational(self.0.recip()))
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }

    /// Numerator as `i64`, if the value is an integer that fits.
    pub fn to_i64(&self) -> Option<i64> {
        if self.0.is_integer() {
            self.0.numer().to_i64()
        } else {
            None
        }
    }

    pub fn min(self, other: Self) -> Self {
        if other < self {
            other
        } else {
            self
        }
    }

    pub fn max(self, other: Self) -> Self {
        if other > self {
            other
        } else {
            self
        }
    }

    pub fn half(&self) -> Self {
        Rational(&self.0 / BigRational::from_integer(BigInt::from(2)))
    }
}

/// Least common multiple of the denominators of `values`.
pub fn common_denominator<'a>(values: impl IntoIterator<Item = &'a Rational>) -> BigInt {
    values
        .into_iter()
        .fold(BigInt::one(), |acc, v| acc.lcm(v.denom()))
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.0.numer(), self.0.denom())
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl FromStr for Rational {
    type Err = ExactError;

    /// Accepts `"p/q"` or a bare integer `"p"`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || ExactError::Parse(s.to_string());
        let t = s.trim();
        match t.split_once('/') {
            Some((n, d)) => {
                let n: BigInt = n.trim().parse().map_err(|_| err())?;
                let d: BigInt = d.trim().parse().map_err(|_| err())?;
                if d.is_zero() {
                    return Err(err());
                }
                Ok(Rational(BigRational::new(n, d)))
            }
            None => {
                let n: BigInt = t.parse().map_err(|_| err())?;
                Ok(Rational(BigRational::from_integer(n)))
            }
        }
    }
}

impl Serialize for Rational {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Rational {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

impl From<i64> for Rational {
    fn from(n: i64) -> Self {
        Rational::from_integer(n)
    }
}

impl From<BigInt> for Rational {
    fn from(n: BigInt) -> Self {
        Rational(BigRational::from_integer(n))
    }
}

macro_rules! rational_binop {
    ($trait:ident, $method:ident) => {
        impl $trait<Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational(self.0.$method(rhs.0))
            }
        }
        impl<'a> $trait<&'a Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: &'a Rational) -> Rational {
                Rational(self.0.$method(&rhs.0))
            }
        }
        impl<'a> $trait<Rational> for &'a Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational((&self.0).$method(rhs.0))
            }
        }
        impl<'a, 'b> $trait<&'b Rational> for &'a Rational {
            type Output = Rational;
            fn $method(self, rhs: &'b Rational) -> Rational {
                Rational((&self.0).$method(&rhs.0))
            }
        }
    };
}

rational_binop!(Add, add);
rational_binop!(Sub, sub);
rational_binop!(Mul, mul);
rational_binop!(Div, div);

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-self.0)
    }
}

impl Neg for &Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-&self.0)
    }
}

impl AddAssign<&Rational> for Rational {
    fn add_assign(&mut self, rhs: &Rational) {
        self.0 += &rhs.0;
    }
}

impl SubAssign<&Rational> for Rational {
    fn sub_assign(&mut self, rhs: &Rational) {
        self.0 -= &rhs.0;
    }
}

impl Sum for Rational {
    fn sum<I: Iterator<Item = Rational>>(iter: I) -> Self {
        iter.fold(Rational::zero(), |acc, x| acc + x)
    }
}

/// A number `a + b*sqrt(3)` with rational `a`, `b`.
#[derive(Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct Sqrt3Scalar {
    pub rational: Rational,
    pub sqrt3: Rational,
}

impl Sqrt3Scalar {
    pub fn new(rational: Rational, sqrt3: Rational) -> Self {
        Sqrt3Scalar { rational, sqrt3 }
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn from_rational(a: Rational) -> Self {
        Sqrt3Scalar {
            rational: a,
            sqrt3: Rational::zero(),
        }
    }

    /// `(sqrt(3)/2) * x`.
    pub fn half_sqrt3_times(x: &Rational) -> Self {
        Sqrt3Scalar {
            rational: Rational::zero(),
            sqrt3: x.half(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.rational.is_zero() && self.sqrt3.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.sqrt3.is_zero()
    }

    pub fn scale(&self, k: &Rational) -> Self {
        Sqrt3Scalar {
            rational: &self.rational * k,
            sqrt3: &self.sqrt3 * k,
        }
    }

    /// Exact division by `sqrt(3)`: `(a + b*sqrt3)/sqrt3 = b + (a/3)*sqrt3`.
    pub fn div_sqrt3(&self) -> Self {
        Sqrt3Scalar {
            rational: self.sqrt3.clone(),
            sqrt3: &self.rational / Rational::from_integer(3),
        }
    }

    /// Sign of `a + b*sqrt(3)`, decided by comparing `a^2` with `3 b^2`.
    pub fn signum(&self) -> i8 {
        let sa = self.rational.signum();
        let sb = self.sqrt3.signum();
        if sa == 0 {
            return sb;
        }
        if sb == 0 || sa == sb {
            return sa;
        }
        let a2 = &self.rational * &self.rational;
        let b2 = &self.sqrt3 * &self.sqrt3 * Rational::from_integer(3);
        match a2.cmp(&b2) {
            Ordering::Greater => sa,
            Ordering::Less => sb,
            Ordering::Equal => 0,
        }
    }

    pub fn to_f64(&self) -> f64 {
        self.rational.to_f64() + self.sqrt3.to_f64() * 3f64.sqrt()
    }
}

impl fmt::Display for Sqrt3Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.rational.is_zero(), self.sqrt3.is_zero()) {
            (_, true) => write!(f, "{}", self.rational),
            (true, false) => write!(f, "{}*sqrt3", self.sqrt3),
            (false, false) => write!(f, "{} + {}*sqrt3", self.rational, self.sqrt3),
        }
    }
}

impl fmt::Debug for Sqrt3Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl Add for Sqrt3Scalar {
    type Output = Sqrt3Scalar;
    fn add(self, rhs: Sqrt3Scalar) -> Sqrt3Scalar {
        Sqrt3Scalar {
            rational: self.rational + rhs.rational,
            sqrt3: self.sqrt3 + rhs.sqrt3,
        }
    }
}

impl Sub for Sqrt3Scalar {
    type Output = Sqrt3Scalar;
    fn sub(self, rhs: Sqrt3Scalar) -> Sqrt3Scalar {
        Sqrt3Scalar {
            rational: self.rational - rhs.rational,
            sqrt3: self.sqrt3 - rhs.sqrt3,
        }
    }
}

impl Mul for Sqrt3Scalar {
    type Output = Sqrt3Scalar;
    fn mul(self, rhs: Sqrt3Scalar) -> Sqrt3Scalar {
        let three = Rational::from_integer(3);
        Sqrt3Scalar {
            rational: &self.rational * &rhs.rational + &self.sqrt3 * &rhs.sqrt3 * three,
            sqrt3: &self.rational * &rhs.sqrt3 + &self.sqrt3 * &rhs.rational,
        }
    }
}

impl PartialOrd for Sqrt3Scalar {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Sqrt3Scalar {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.clone() - other.clone()).signum().cmp(&0)
    }
}

/// The five angles that occur between roots of equal length in a
/// crystallographic root system.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum NamedAngle {
    Zero,
    PiThird,
    PiHalf,
    TwoPiThird,
    Pi,
}

impl NamedAngle {
    pub const ALL: [NamedAngle; 5] = [
        NamedAngle::Zero,
        NamedAngle::PiThird,
        NamedAngle::PiHalf,
        NamedAngle::TwoPiThird,
        NamedAngle::Pi,
    ];

    pub fn cosine(self) -> ExactCosine {
        let (sign, c2) = match self {
            NamedAngle::Zero => (1, Rational::one()),
            NamedAngle::PiThird => (1, Rational::new(1, 4)),
            NamedAngle::PiHalf => (0, Rational::zero()),
            NamedAngle::TwoPiThird => (-1, Rational::new(1, 4)),
            NamedAngle::Pi => (-1, Rational::one()),
        };
        ExactCosine {
            sign,
            cos_squared: c2,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            NamedAngle::Zero => "0",
            NamedAngle::PiThird => "pi/3",
            NamedAngle::PiHalf => "pi/2",
            NamedAngle::TwoPiThird => "2pi/3",
            NamedAngle::Pi => "pi",
        }
    }
}

impl fmt::Display for NamedAngle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// The cosine of an angle, stored as its sign and its square.
///
/// Ordering follows the signed cosine, so a *larger* `ExactCosine` is a
/// *smaller* angle.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ExactCosine {
    pub sign: i8,
    pub cos_squared: Rational,
}

impl ExactCosine {
    /// Builds the cosine `ip / sqrt(nu * nv)` from an inner product and two
    /// squared norms.
    pub fn from_inner_products(ip: &Rational, nu: &Rational, nv: &Rational) -> Self {
        ExactCosine {
            sign: ip.signum(),
            cos_squared: ip * ip / (nu * nv),
        }
    }

    pub fn is_angle(&self, named: NamedAngle) -> bool {
        *self == named.cosine()
    }

    pub fn named(&self) -> Option<NamedAngle> {
        NamedAngle::ALL.into_iter().find(|a| self.is_angle(*a))
    }

    pub fn to_f64(&self) -> f64 {
        f64::from(self.sign) * self.cos_squared.to_f64().sqrt()
    }

    /// Angle in radians; for display only.
    pub fn approx_radians(&self) -> f64 {
        self.to_f64().clamp(-1.0, 1.0).acos()
    }
}

impl fmt::Display for ExactCosine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self.sign {
            1 => "+",
            -1 => "-",
            _ => "",
        };
        write!(f, "{}sqrt({})", s, self.cos_squared)
    }
}

impl fmt::Debug for ExactCosine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.named() {
            Some(a) => write!(f, "cos({})", a),
            None => write!(f, "{}", self),
        }
    }
}

impl PartialOrd for ExactCosine {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ExactCosine {
    fn cmp(&self, other: &Self) -> Ordering {
        match self.sign.cmp(&other.sign) {
            Ordering::Equal => match self.sign {
                1 => self.cos_squared.cmp(&other.cos_squared),
                -1 => other.cos_squared.cmp(&self.cos_squared),
                _ => Ordering::Equal,
            },
            o => o,
        }
    }
}

pub type RationalVector = Vec<Rational>;
pub type RationalMatrix = Vec<Vec<Rational>>;

/// `u^T * gram * v`.
pub fn bilinear(
    u: &[Rational],
    v: &[Rational],
    gram: &[Vec<Rational>],
) -> Result<Rational, ExactError> {
    if u.len() != gram.len() {
        return Err(ExactError::DimensionMismatch(u.len(), gram.len()));
    }
    if v.len() != gram.len() {
        return Err(ExactError::DimensionMismatch(v.len(), gram.len()));
    }
    let mut acc = Rational::zero();
    for (i, ui) in u.iter().enumerate() {
        if ui.is_zero() {
            continue;
        }
        let row: Rational = gram[i]
            .iter()
            .zip(v)
            .filter(|(g, x)| !g.is_zero() && !x.is_zero())
            .map(|(g, x)| g * x)
            .sum();
        acc += &(ui * row);
    }
    Ok(acc)
}

/// Exact cosine of the angle between `u` and `v` under the inner product
/// given by `gram`.
pub fn cos_between(
    u: &[Rational],
    v: &[Rational],
    gram: &[Vec<Rational>],
) -> Result<ExactCosine, ExactError> {
    if u.iter().all(Rational::is_zero) || v.iter().all(Rational::is_zero) {
        return Err(ExactError::ZeroVector);
    }
    let ip = bilinear(u, v, gram)?;
    let nu = bilinear(u, u, gram)?;
    let nv = bilinear(v, v, gram)?;
    Ok(ExactCosine::from_inner_products(&ip, &nu, &nv))
}

pub fn is_angle(c: &ExactCosine, named: NamedAngle) -> bool {
    c.is_angle(named)
}

/// Solves `m * x = rhs` for every column of `rhs` by Gauss-Jordan
/// elimination; returns `None` when `m` is singular.
pub fn solve(m: &[Vec<Rational>], rhs: &[Vec<Rational>]) -> Option<RationalMatrix> {
    let n = m.len();
    let mut a: Vec<Vec<Rational>> = m
        .iter()
        .zip(rhs)
        .map(|(row, r)| row.iter().chain(r.iter()).cloned().collect())
        .collect();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, pivot);
        let inv = a[col][col].recip().ok()?;
        for x in a[col].iter_mut() {
            *x = &*x * &inv;
        }
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                let pivot = a[col].clone();
                for (x, p) in a[r].iter_mut().zip(&pivot) {
                    *x -= &(&f * p);
                }
            }
        }
    }
    Some(a.into_iter().map(|row| row[n..].to_vec()).collect())
}

pub fn identity(n: usize) -> RationalMatrix {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if i == j {
                        Rational::one()
                    } else {
                        Rational::zero()
                    }
                })
                .collect()
        })
        .collect()
}
