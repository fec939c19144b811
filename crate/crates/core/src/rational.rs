//! Exact rationals, extended rationals and the mixed exact/approximate
//! magnitudes produced by power distortions.

use alloc::string::{String, ToString};
use core::cmp::Ordering;
use core::fmt;
use core::ops::{Add, Mul};
use core::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Exact rational number used throughout the finite engine.
pub type Q = BigRational;

/// `n / d` as an exact rational. Panics if `d == 0`.
pub fn q(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

pub fn qi(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

/// Parses `"p/q"` or an integer string.
pub fn parse_q(text: &str) -> Option<Q> {
    let text = text.trim();
    match text.split_once('/') {
        Some((n, d)) => {
            let n = BigInt::from_str(n.trim()).ok()?;
            let d = BigInt::from_str(d.trim()).ok()?;
            if d.is_zero() {
                return None;
            }
            Some(Q::new(n, d))
        }
        None => BigInt::from_str(text).ok().map(Q::from_integer),
    }
}

/// Canonical text form: `"p/q"` in lowest terms, or `"p"` for integers.
pub fn format_q(value: &Q) -> String {
    value.to_string()
}

pub fn to_f64(value: &Q) -> f64 {
    value.to_f64().unwrap_or(f64::NAN)
}

/// Exact `base^exponent` when it is rational: integer exponents always,
/// fractional exponents when numerator and denominator are perfect roots.
pub fn pow_exact(base: &Q, exponent: &Q) -> Option<Q> {
    if base.is_zero() {
        return if exponent.is_positive() { Some(Q::zero()) } else { None };
    }
    if base.is_one() {
        return Some(Q::one());
    }
    if exponent.is_integer() {
        let e = exponent.to_integer().to_i32()?;
        return Some(pow_int(base, e));
    }
    if base.is_negative() {
        return None;
    }
    let root = exponent.denom().to_u32()?;
    let power = exponent.numer().to_i32()?;
    let n = base.numer().nth_root(root);
    let d = base.denom().nth_root(root);
    if num_traits::pow(n.clone(), root as usize) != *base.numer()
        || num_traits::pow(d.clone(), root as usize) != *base.denom()
    {
        return None;
    }
    Some(pow_int(&Q::new(n, d), power))
}

fn pow_int(base: &Q, e: i32) -> Q {
    if e >= 0 {
        num_traits::pow(base.clone(), e as usize)
    } else {
        num_traits::pow(base.recip(), (-e) as usize)
    }
}

/// Non-negative rational extended with `+inf`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Extended {
    Finite(Q),
    Infinite,
}

impl Extended {
    pub fn zero() -> Self {
        Extended::Finite(Q::zero())
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, Extended::Finite(_))
    }

    pub fn finite(&self) -> Option<&Q> {
        match self {
            Extended::Finite(v) => Some(v),
            Extended::Infinite => None,
        }
    }

    /// Product with the convention `0 * inf = 0`.
    pub fn scale(&self, k: &Q) -> Self {
        match self {
            Extended::Finite(v) => Extended::Finite(v * k),
            Extended::Infinite if k.is_zero() => Extended::zero(),
            Extended::Infinite => Extended::Infinite,
        }
    }
}

impl Add for Extended {
    type Output = Extended;
    fn add(self, rhs: Extended) -> Extended {
        match (self, rhs) {
            (Extended::Finite(a), Extended::Finite(b)) => Extended::Finite(a + b),
            _ => Extended::Infinite,
        }
    }
}

impl PartialOrd for Extended {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Extended {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Extended::Finite(a), Extended::Finite(b)) => a.cmp(b),
            (Extended::Finite(_), Extended::Infinite) => Ordering::Less,
            (Extended::Infinite, Extended::Finite(_)) => Ordering::Greater,
            (Extended::Infinite, Extended::Infinite) => Ordering::Equal,
        }
    }
}

impl fmt::Display for Extended {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Extended::Finite(v) => write!(f, "{v}"),
            Extended::Infinite => f.write_str("inf"),
        }
    }
}

/// A non-negative quantity that is exact when it can be, approximate with a
/// tracked absolute error bound otherwise, or `+inf`.
#[derive(Clone, Debug, PartialEq)]
pub enum Magnitude {
    Exact(Q),
    Approx { value: f64, error: f64 },
    Infinite,
}

/// Relative error charged to one floating-point `pow`.
const POW_REL_ERROR: f64 = 8.0 * f64::EPSILON;

impl Magnitude {
    pub fn zero() -> Self {
        Magnitude::Exact(Q::zero())
    }

    pub fn approx(value: f64, error: f64) -> Self {
        Magnitude::Approx { value, error }
    }

    /// `base^exponent` for `base >= 0`, `exponent > 0`; exact where possible.
    pub fn pow(base: &Q, exponent: &Q) -> Self {
        match pow_exact(base, exponent) {
            Some(v) => Magnitude::Exact(v),
            None => {
                let value = libm::pow(to_f64(base), to_f64(exponent));
                Magnitude::approx(value, value.abs() * POW_REL_ERROR)
            }
        }
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, Magnitude::Infinite)
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Magnitude::Exact(v) => v.is_zero(),
            Magnitude::Approx { value, error } => *value == 0.0 && *error == 0.0,
            Magnitude::Infinite => false,
        }
    }

    pub fn exact(&self) -> Option<&Q> {
        match self {
            Magnitude::Exact(v) => Some(v),
            _ => None,
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Magnitude::Exact(v) => to_f64(v),
            Magnitude::Approx { value, .. } => *value,
            Magnitude::Infinite => f64::INFINITY,
        }
    }

    pub fn error_bound(&self) -> f64 {
        match self {
            Magnitude::Approx { error, .. } => *error,
            _ => 0.0,
        }
    }

    /// Product with a non-negative rational, `0 * inf = 0`.
    pub fn scale(&self, k: &Q) -> Self {
        if k.is_zero() {
            return Magnitude::zero();
        }
        match self {
            Magnitude::Exact(v) => Magnitude::Exact(v * k),
            Magnitude::Approx { value, error } => {
                let k = to_f64(k);
                Magnitude::approx(value * k, error * k + (value * k).abs() * f64::EPSILON)
            }
            Magnitude::Infinite => Magnitude::Infinite,
        }
    }

    /// Product of two magnitudes, `0 * inf = 0`.
    pub fn times(&self, other: &Magnitude) -> Self {
        match (self, other) {
            (Magnitude::Exact(k), m) | (m, Magnitude::Exact(k)) => m.scale(k),
            (Magnitude::Infinite, m) | (m, Magnitude::Infinite) => {
                if m.is_zero() {
                    Magnitude::zero()
                } else {
                    Magnitude::Infinite
                }
            }
            (
                Magnitude::Approx { value: a, error: ea },
                Magnitude::Approx { value: b, error: eb },
            ) => {
                let v = a * b;
                Magnitude::approx(v, a.abs() * eb + b.abs() * ea + ea * eb + v.abs() * f64::EPSILON)
            }
        }
    }
}

impl From<Q> for Magnitude {
    fn from(v: Q) -> Self {
        Magnitude::Exact(v)
    }
}

impl From<Extended> for Magnitude {
    fn from(v: Extended) -> Self {
        match v {
            Extended::Finite(v) => Magnitude::Exact(v),
            Extended::Infinite => Magnitude::Infinite,
        }
    }
}

impl Add for Magnitude {
    type Output = Magnitude;
    fn add(self, rhs: Magnitude) -> Magnitude {
        match (self, rhs) {
            (Magnitude::Infinite, _) | (_, Magnitude::Infinite) => Magnitude::Infinite,
            (Magnitude::Exact(a), Magnitude::Exact(b)) => Magnitude::Exact(a + b),
            (a, b) => {
                let v = a.to_f64() + b.to_f64();
                Magnitude::approx(v, a.error_bound() + b.error_bound() + v.abs() * f64::EPSILON)
            }
        }
    }
}

impl Mul for Magnitude {
    type Output = Magnitude;
    fn mul(self, rhs: Magnitude) -> Magnitude {
        self.times(&rhs)
    }
}

impl core::iter::Sum for Magnitude {
    fn sum<I: Iterator<Item = Magnitude>>(iter: I) -> Magnitude {
        iter.fold(Magnitude::zero(), |acc, m| acc + m)
    }
}

impl fmt::Display for Magnitude {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Magnitude::Exact(v) => write!(f, "{v}"),
            Magnitude::Approx { value, error } => write!(f, "{value:e} (+/- {error:e})"),
            Magnitude::Infinite => f.write_str("inf"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format() {
        assert_eq!(parse_q("6/4"), Some(q(3, 2)));
        assert_eq!(parse_q(" 7 "), Some(qi(7)));
        assert_eq!(parse_q("1/0"), None);
        assert_eq!(parse_q("abc"), None);
        assert_eq!(format_q(&q(3, 2)), "3/2");
        assert_eq!(format_q(&q(4, 2)), "2");
    }

    #[test]
    fn exact_powers() {
        assert_eq!(pow_exact(&q(1, 4), &q(1, 2)), Some(q(1, 2)));
        assert_eq!(pow_exact(&q(8, 27), &q(2, 3)), Some(q(4, 9)));
        assert_eq!(pow_exact(&q(2, 1), &q(1, 2)), None);
        assert_eq!(pow_exact(&q(2, 3), &qi(3)), Some(q(8, 27)));
        assert_eq!(pow_exact(&Q::zero(), &q(1, 2)), Some(Q::zero()));
    }

    #[test]
    fn zero_times_infinity_is_zero() {
        assert_eq!(Magnitude::Infinite.scale(&Q::zero()), Magnitude::zero());
        assert_eq!(Extended::Infinite.scale(&Q::zero()), Extended::zero());
        assert_eq!(Magnitude::zero() * Magnitude::Infinite, Magnitude::zero());
        assert_eq!(Magnitude::Exact(qi(2)) * Magnitude::Infinite, Magnitude::Infinite);
    }

    #[test]
    fn approximate_sum_tracks_error() {
        let two_sqrt = Magnitude::pow(&qi(2), &q(1, 2)) + Magnitude::pow(&qi(2), &q(1, 2));
        let err = two_sqrt.error_bound();
        assert!(err > 0.0 && err < 1e-14);
        assert!((two_sqrt.to_f64() - 2.0 * core::f64::consts::SQRT_2).abs() <= err);
    }
}
