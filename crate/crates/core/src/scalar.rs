//! Exact rational scalars.
//!
//! Values that fit in a machine-word ratio are stored inline and operated on
//! with checked arithmetic; anything that would overflow is promoted to an
//! arbitrary-precision ratio and demoted again once it fits. The
//! representation is canonical: equal values always have equal
//! representations, so derived `Eq`/`Hash` agree with numeric equality.

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::iter::Sum;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::{BigRational, Ratio};
use num_traits::{CheckedAdd, CheckedDiv, CheckedMul, CheckedSub, One, Signed, ToPrimitive, Zero};
use thiserror::Error;

type Small = Ratio<i64>;

#[derive(Clone)]
enum Repr {
    Small(Small),
    Big(BigRational),
}

/// An exact rational number in canonical reduced form.
#[derive(Clone)]
pub struct Scalar(Repr);

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScalarParseError {
    #[error("empty number")]
    Empty,
    #[error("malformed number `{0}`")]
    Malformed(String),
    #[error("more than 12 fractional digits in `{0}`")]
    TooPrecise(String),
    #[error("zero denominator in `{0}`")]
    ZeroDenominator(String),
}

/// Largest magnitude kept in the inline representation. Staying well inside
/// `i64` keeps `Ratio::<i64>::new` from overflowing while reducing.
const SMALL_LIMIT: i64 = 1 << 62;

fn fits_small(v: &BigInt) -> Option<i64> {
    let x = v.to_i64()?;
    (x > -SMALL_LIMIT && x < SMALL_LIMIT).then_some(x)
}

impl Scalar {
    pub fn zero() -> Self {
        Scalar(Repr::Small(Small::from_integer(0)))
    }

    pub fn one() -> Self {
        Scalar(Repr::Small(Small::from_integer(1)))
    }

    pub fn from_int(v: i64) -> Self {
        Scalar::from_big(BigRational::from_integer(BigInt::from(v)))
    }

    /// `numer / denom`. Panics on a zero denominator.
    pub fn ratio(numer: i64, denom: i64) -> Self {
        assert!(denom != 0, "zero denominator");
        Scalar::from_big(BigRational::new(BigInt::from(numer), BigInt::from(denom)))
    }

    pub fn from_bigint_ratio(numer: BigInt, denom: BigInt) -> Self {
        assert!(!denom.is_zero(), "zero denominator");
        Scalar::from_big(BigRational::new(numer, denom))
    }

    fn from_small(v: Small) -> Self {
        let fits = *v.numer() > -SMALL_LIMIT
            && *v.numer() < SMALL_LIMIT
            && *v.denom() < SMALL_LIMIT;
        if fits {
            Scalar(Repr::Small(v))
        } else {
            Scalar::from_big(BigRational::new_raw(
                BigInt::from(*v.numer()),
                BigInt::from(*v.denom()),
            ))
        }
    }

    fn from_big(v: BigRational) -> Self {
        if let (Some(n), Some(d)) = (fits_small(v.numer()), fits_small(v.denom())) {
            Scalar(Repr::Small(Small::new_raw(n, d)))
        } else {
            Scalar(Repr::Big(v))
        }
    }

    fn to_big(&self) -> BigRational {
        match &self.0 {
            Repr::Small(v) => BigRational::new_raw(BigInt::from(*v.numer()), BigInt::from(*v.denom())),
            Repr::Big(v) => v.clone(),
        }
    }

    pub fn numer(&self) -> BigInt {
        match &self.0 {
            Repr::Small(v) => BigInt::from(*v.numer()),
            Repr::Big(v) => v.numer().clone(),
        }
    }

    pub fn denom(&self) -> BigInt {
        match &self.0 {
            Repr::Small(v) => BigInt::from(*v.denom()),
            Repr::Big(v) => v.denom().clone(),
        }
    }

    pub fn is_zero(&self) -> bool {
        match &self.0 {
            Repr::Small(v) => v.is_zero(),
            Repr::Big(v) => v.is_zero(),
        }
    }

    pub fn is_integer(&self) -> bool {
        match &self.0 {
            Repr::Small(v) => v.is_integer(),
            Repr::Big(v) => v.is_integer(),
        }
    }

    pub fn is_negative(&self) -> bool {
        match &self.0 {
            Repr::Small(v) => v.is_negative(),
            Repr::Big(v) => v.is_negative(),
        }
    }

    pub fn is_positive(&self) -> bool {
        match &self.0 {
            Repr::Small(v) => v.is_positive(),
            Repr::Big(v) => v.is_positive(),
        }
    }

    pub fn abs(&self) -> Scalar {
        if self.is_negative() {
            -self
        } else {
            self.clone()
        }
    }

    pub fn floor(&self) -> Scalar {
        match &self.0 {
            Repr::Small(v) => Scalar::from_small(v.floor()),
            Repr::Big(v) => Scalar::from_big(v.floor()),
        }
    }

    pub fn ceil(&self) -> Scalar {
        match &self.0 {
            Repr::Small(v) => Scalar::from_small(v.ceil()),
            Repr::Big(v) => Scalar::from_big(v.ceil()),
        }
    }

    /// Integer part of `floor(self)`; `None` if it does not fit in `i64`.
    pub fn floor_i64(&self) -> Option<i64> {
        match &self.0 {
            Repr::Small(v) => Some(Integer::div_floor(v.numer(), v.denom())),
            Repr::Big(v) => v.floor().to_integer().to_i64(),
        }
    }

    pub fn ceil_i64(&self) -> Option<i64> {
        match &self.0 {
            Repr::Small(v) => Some(-Integer::div_floor(&-*v.numer(), v.denom())),
            Repr::Big(v) => v.ceil().to_integer().to_i64(),
        }
    }

    pub fn to_f64(&self) -> f64 {
        match &self.0 {
            Repr::Small(v) => *v.numer() as f64 / *v.denom() as f64,
            Repr::Big(v) => v.to_f64().unwrap_or(f64::NAN),
        }
    }

    pub fn min(self, other: Scalar) -> Scalar {
        if other < self {
            other
        } else {
            self
        }
    }

    pub fn max(self, other: Scalar) -> Scalar {
        if other > self {
            other
        } else {
            self
        }
    }

    /// Decimal rendering with at most `digits` fractional digits, if exact.
    fn exact_decimal(&self, digits: u32) -> Option<String> {
        let denom = self.denom();
        let scale = BigInt::from(10u32).pow(digits);
        if !(&scale % &denom).is_zero() {
            return None;
        }
        let scaled = self.numer() * (&scale / &denom);
        let negative = scaled.is_negative();
        let mag = scaled.abs();
        let (int_part, frac_part) = mag.div_rem(&scale);
        let mut frac = format!("{:0>width$}", frac_part.to_string(), width = digits as usize);
        while frac.ends_with('0') {
            frac.pop();
        }
        let sign = if negative { "-" } else { "" };
        Some(format!("{sign}{int_part}.{frac}"))
    }
}

impl Default for Scalar {
    fn default() -> Self {
        Scalar::zero()
    }
}

impl From<i64> for Scalar {
    fn from(v: i64) -> Self {
        Scalar::from_int(v)
    }
}

impl From<i32> for Scalar {
    fn from(v: i32) -> Self {
        Scalar::from_int(v as i64)
    }
}

impl From<usize> for Scalar {
    fn from(v: usize) -> Self {
        Scalar::from_big(BigRational::from_integer(BigInt::from(v)))
    }
}

impl PartialEq for Scalar {
    fn eq(&self, other: &Self) -> bool {
        match (&self.0, &other.0) {
            (Repr::Small(a), Repr::Small(b)) => a == b,
            (Repr::Big(a), Repr::Big(b)) => a == b,
            // canonical form: a value has exactly one representation
            _ => false,
        }
    }
}

impl Eq for Scalar {}

impl Hash for Scalar {
    fn hash<H: Hasher>(&self, state: &mut H) {
        match &self.0 {
            Repr::Small(v) => {
                0u8.hash(state);
                v.numer().hash(state);
                v.denom().hash(state);
            }
            Repr::Big(v) => {
                1u8.hash(state);
                v.numer().hash(state);
                v.denom().hash(state);
            }
        }
    }
}

impl Ord for Scalar {
    fn cmp(&self, other: &Self) -> Ordering {
        match (&self.0, &other.0) {
            (Repr::Small(a), Repr::Small(b)) => a.cmp(b),
            _ => self.to_big().cmp(&other.to_big()),
        }
    }
}

impl PartialOrd for Scalar {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

macro_rules! binop {
    ($trait:ident, $method:ident, $checked:ident) => {
        impl<'a> $trait<&'a Scalar> for &'a Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &'a Scalar) -> Scalar {
                if let (Repr::Small(a), Repr::Small(b)) = (&self.0, &rhs.0) {
                    if let Some(v) = a.$checked(b) {
                        return Scalar::from_small(v);
                    }
                }
                Scalar::from_big(self.to_big().$method(rhs.to_big()))
            }
        }
        impl $trait<Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                (&self).$method(&rhs)
            }
        }
        impl<'a> $trait<&'a Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &'a Scalar) -> Scalar {
                (&self).$method(rhs)
            }
        }
        impl<'a> $trait<Scalar> for &'a Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                self.$method(&rhs)
            }
        }
    };
}

binop!(Add, add, checked_add);
binop!(Sub, sub, checked_sub);
binop!(Mul, mul, checked_mul);

impl<'a> Div<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn div(self, rhs: &'a Scalar) -> Scalar {
        assert!(!rhs.is_zero(), "division by zero");
        if let (Repr::Small(a), Repr::Small(b)) = (&self.0, &rhs.0) {
            if let Some(v) = a.checked_div(b) {
                return Scalar::from_small(v);
            }
        }
        Scalar::from_big(self.to_big() / rhs.to_big())
    }
}

impl Div<Scalar> for Scalar {
    type Output = Scalar;
    fn div(self, rhs: Scalar) -> Scalar {
        &self / &rhs
    }
}

impl<'a> Div<&'a Scalar> for Scalar {
    type Output = Scalar;
    fn div(self, rhs: &'a Scalar) -> Scalar {
        &self / rhs
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match &self.0 {
            Repr::Small(v) => Scalar::from_small(-*v),
            Repr::Big(v) => Scalar::from_big(-v.clone()),
        }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

impl AddAssign<&Scalar> for Scalar {
    fn add_assign(&mut self, rhs: &Scalar) {
        *self = &*self + rhs;
    }
}

impl SubAssign<&Scalar> for Scalar {
    fn sub_assign(&mut self, rhs: &Scalar) {
        *self = &*self - rhs;
    }
}

impl MulAssign<&Scalar> for Scalar {
    fn mul_assign(&mut self, rhs: &Scalar) {
        *self = &*self * rhs;
    }
}

impl Sum for Scalar {
    fn sum<I: Iterator<Item = Scalar>>(iter: I) -> Scalar {
        iter.fold(Scalar::zero(), |acc, v| acc + v)
    }
}

impl<'a> Sum<&'a Scalar> for Scalar {
    fn sum<I: Iterator<Item = &'a Scalar>>(iter: I) -> Scalar {
        iter.fold(Scalar::zero(), |acc, v| acc + v)
    }
}

/// Canonical text form: integers plainly, short terminating fractions as
/// decimals (at most 12 fractional digits), everything else as `p/q`.
impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_integer() {
            return write!(f, "{}", self.numer());
        }
        match self.exact_decimal(12) {
            Some(s) => f.write_str(&s),
            None => write!(f, "{}/{}", self.numer(), self.denom()),
        }
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

fn parse_digits(s: &str, whole: &str) -> Result<BigInt, ScalarParseError> {
    if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
        return Err(ScalarParseError::Malformed(whole.to_string()));
    }
    BigInt::from_str(s).map_err(|_| ScalarParseError::Malformed(whole.to_string()))
}

/// Accepts `[-]digits`, `[-]digits.digits` (at most 12 fractional digits)
/// and `[-]digits/digits`.
impl FromStr for Scalar {
    type Err = ScalarParseError;

    fn from_str(text: &str) -> Result<Self, Self::Err> {
        if text.is_empty() {
            return Err(ScalarParseError::Empty);
        }
        let (negative, body) = match text.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, text),
        };
        let value = if let Some((p, q)) = body.split_once('/') {
            let numer = parse_digits(p, text)?;
            let denom = parse_digits(q, text)?;
            if denom.is_zero() {
                return Err(ScalarParseError::ZeroDenominator(text.to_string()));
            }
            Scalar::from_bigint_ratio(numer, denom)
        } else if let Some((int_part, frac_part)) = body.split_once('.') {
            let int = parse_digits(int_part, text)?;
            let frac = parse_digits(frac_part, text)?;
            if frac_part.len() > 12 {
                return Err(ScalarParseError::TooPrecise(text.to_string()));
            }
            let scale = BigInt::from(10u32).pow(frac_part.len() as u32);
            Scalar::from_bigint_ratio(int * &scale + frac, scale)
        } else {
            let int = parse_digits(body, text)?;
            Scalar::from_big(BigRational::from_integer(int))
        };
        Ok(if negative { -value } else { value })
    }
}

impl Zero for Scalar {
    fn zero() -> Self {
        Scalar::zero()
    }
    fn is_zero(&self) -> bool {
        Scalar::is_zero(self)
    }
}

impl One for Scalar {
    fn one() -> Self {
        Scalar::one()
    }
}
