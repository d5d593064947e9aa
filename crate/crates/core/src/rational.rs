//! Exact rationals with unbounded numerator and denominator.
//!
//! Every [`Rational`] is stored in lowest terms with a positive denominator,
//! so structural equality is numeric equality. The text form is
//! `p/q` (bare `p` when `q = 1`); the parser additionally accepts finite
//! decimals such as `-0.75`, which are converted exactly.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer as _;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

/// Unbounded signed integer. Orbit values, fixed points, and region indices
/// all live here.
pub type Integer = BigInt;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseRationalError {
    #[error("empty rational literal")]
    Empty,
    #[error("malformed rational literal `{0}`")]
    Malformed(String),
    #[error("zero denominator in `{0}`")]
    ZeroDenominator(String),
}

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Rational(BigRational);

impl Rational {
    /// Builds `numer/denom` in canonical form. Returns `None` when `denom` is zero.
    pub fn new(numer: impl Into<Integer>, denom: impl Into<Integer>) -> Option<Self> {
        let denom = denom.into();
        if denom.is_zero() {
            return None;
        }
        Some(Rational(BigRational::new(numer.into(), denom)))
    }

    pub fn from_integer(value: impl Into<Integer>) -> Self {
        Rational(BigRational::from_integer(value.into()))
    }

    pub fn zero() -> Self {
        Rational(BigRational::zero())
    }

    pub fn one() -> Self {
        Rational(BigRational::one())
    }

    pub fn numer(&self) -> &Integer {
        self.0.numer()
    }

    /// Always strictly positive.
    pub fn denom(&self) -> &Integer {
        self.0.denom()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
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

    /// Greatest integer `r` with `r <= self`.
    pub fn floor(&self) -> Integer {
        self.numer().div_floor(self.denom())
    }

    /// Least integer `r` with `self <= r`.
    pub fn ceil(&self) -> Integer {
        self.numer().div_ceil(self.denom())
    }

    pub fn abs(&self) -> Self {
        Rational(self.0.abs())
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn recip(&self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Some(Rational(self.0.recip()))
        }
    }

    /// Exact quotient; `None` when `rhs` is zero.
    pub fn checked_div(&self, rhs: &Rational) -> Option<Self> {
        if rhs.is_zero() {
            None
        } else {
            Some(Rational(&self.0 / &rhs.0))
        }
    }

    /// `floor(self * value)` for an integer `value`, without building the
    /// intermediate rational.
    pub fn floor_mul_int(&self, value: &Integer) -> Integer {
        (self.numer() * value).div_floor(self.denom())
    }

    pub fn midpoint(&self, other: &Rational) -> Self {
        Rational((&self.0 + &other.0) / BigRational::from_integer(BigInt::from(2)))
    }

    /// `true` when the stored fields are in lowest terms with a positive
    /// denominator. Holds for every value this module hands out.
    pub fn is_canonical(&self) -> bool {
        self.denom().is_positive() && self.numer().gcd(self.denom()).is_one()
    }

    /// Parses the literal grammar `INT`, `INT/POSINT`, or `[-]DIGITS.DIGITS`.
    pub fn parse(text: &str) -> Result<Self, ParseRationalError> {
        text.parse()
    }
}

/// Exact product.
pub fn rat_mul(a: &Rational, b: &Rational) -> Rational {
    a * b
}

pub fn rat_cmp(a: &Rational, b: &Rational) -> Ordering {
    a.cmp(b)
}

pub fn rat_floor(q: &Rational) -> Integer {
    q.floor()
}

pub fn rat_parse(text: &str) -> Result<Rational, ParseRationalError> {
    text.parse()
}

fn all_digits(s: &str) -> bool {
    !s.is_empty() && s.bytes().all(|b| b.is_ascii_digit())
}

fn parse_int(s: &str) -> Option<Integer> {
    let digits = s.strip_prefix('-').unwrap_or(s);
    if !all_digits(digits) {
        return None;
    }
    s.parse().ok()
}

impl FromStr for Rational {
    type Err = ParseRationalError;

    fn from_str(text: &str) -> Result<Self, Self::Err> {
        let s = text.trim();
        if s.is_empty() {
            return Err(ParseRationalError::Empty);
        }
        let malformed = || ParseRationalError::Malformed(s.to_string());

        if let Some((num, den)) = s.split_once('/') {
            let num = parse_int(num).ok_or_else(malformed)?;
            if !all_digits(den) {
                return Err(malformed());
            }
            let den: Integer = den.parse().map_err(|_| malformed())?;
            return Rational::new(num, den)
                .ok_or_else(|| ParseRationalError::ZeroDenominator(s.to_string()));
        }

        if let Some((int_part, frac_part)) = s.split_once('.') {
            let (negative, int_digits) = match int_part.strip_prefix('-') {
                Some(rest) => (true, rest),
                None => (false, int_part),
            };
            if !all_digits(int_digits) || !all_digits(frac_part) {
                return Err(malformed());
            }
            let scale = num_traits::pow(Integer::from(10), frac_part.len());
            let mantissa: Integer = format!("{int_digits}{frac_part}")
                .parse()
                .map_err(|_| malformed())?;
            let mantissa = if negative { -mantissa } else { mantissa };
            return Ok(Rational::new(mantissa, scale).expect("power of ten is nonzero"));
        }

        parse_int(s)
            .map(Rational::from_integer)
            .ok_or_else(malformed)
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_integer() {
            write!(f, "{}", self.numer())
        } else {
            write!(f, "{}/{}", self.numer(), self.denom())
        }
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl From<Integer> for Rational {
    fn from(value: Integer) -> Self {
        Rational::from_integer(value)
    }
}

impl From<&Integer> for Rational {
    fn from(value: &Integer) -> Self {
        Rational::from_integer(value.clone())
    }
}

impl From<i64> for Rational {
    fn from(value: i64) -> Self {
        Rational::from_integer(value)
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident) => {
        impl $trait<&Rational> for &Rational {
            type Output = Rational;
            fn $method(self, rhs: &Rational) -> Rational {
                Rational($trait::$method(&self.0, &rhs.0))
            }
        }

        impl $trait for Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational($trait::$method(self.0, rhs.0))
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);

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

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(s: &str) -> Rational {
        s.parse().unwrap()
    }

    #[test]
    fn floor_examples() {
        assert_eq!(rat_floor(&q("7/2")), Integer::from(3));
        assert_eq!(rat_floor(&q("-7/2")), Integer::from(-4));
        assert_eq!(rat_floor(&q("5")), Integer::from(5));
        assert_eq!(rat_floor(&q("-5")), Integer::from(-5));
        assert_eq!(q("-7/2").ceil(), Integer::from(-3));
    }

    #[test]
    fn parse_examples() {
        assert_eq!(q("3/4"), Rational::new(3, 4).unwrap());
        assert_eq!(q("-0.75"), Rational::new(-3, 4).unwrap());
        assert_eq!(q("0.75"), Rational::new(3, 4).unwrap());
        assert_eq!(q("6/8"), Rational::new(3, 4).unwrap());
        assert_eq!(q("-12"), Rational::from_integer(-12));
        assert_eq!(q(" 2.50 "), Rational::new(5, 2).unwrap());
        assert_eq!(
            q("123456789012345678901234567890/3").numer().to_string(),
            "41152263004115226300411522630"
        );
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(
            rat_parse("1/0"),
            Err(ParseRationalError::ZeroDenominator(_))
        ));
        assert_eq!(rat_parse(""), Err(ParseRationalError::Empty));
        for bad in [
            "abc", "1/", "/2", "1/-2", "--1", "1.", ".5", "1.2.3", "1/2/3", "+1", "1e3", "0x10",
            "- 1", "-.5",
        ] {
            assert!(
                matches!(rat_parse(bad), Err(ParseRationalError::Malformed(_))),
                "{bad} should be malformed"
            );
        }
    }

    #[test]
    fn mul_and_cmp_examples() {
        assert_eq!(rat_mul(&q("-3/2"), &q("5/2")), q("-15/4"));
        assert_eq!(rat_cmp(&q("2/3"), &q("3/4")), Ordering::Less);
        let x = q("-22/7");
        assert_eq!(rat_mul(&x, &Rational::one()), x);
    }

    #[test]
    fn render_is_canonical() {
        assert_eq!(q("4/2").to_string(), "2");
        assert_eq!(q("-6/4").to_string(), "-3/2");
        assert_eq!(q("0/5").to_string(), "0");
        assert_eq!(Rational::new(3, -6).unwrap().to_string(), "-1/2");
        assert!(Rational::new(1, 0).is_none());
    }

    fn arb_rational() -> impl Strategy<Value = Rational> {
        (any::<i64>(), 1i64..=i64::MAX)
            .prop_map(|(p, q)| Rational::new(p, q).unwrap())
    }

    proptest! {
        #[test]
        fn floor_brackets_value(x in arb_rational()) {
            let r = Rational::from_integer(x.floor());
            prop_assert!(r <= x);
            prop_assert!(x < &r + &Rational::one());
        }

        #[test]
        fn integer_le_iff_le_floor(x in arb_rational(), n in any::<i64>()) {
            let n = Integer::from(n);
            prop_assert_eq!(Rational::from(&n) <= x, n <= x.floor());
        }

        #[test]
        fn render_parse_round_trip(x in arb_rational()) {
            prop_assert_eq!(rat_parse(&x.to_string()).unwrap(), x);
        }

        #[test]
        fn arithmetic_stays_canonical(a in arb_rational(), b in arb_rational()) {
            for v in [&a * &b, &a + &b, &a - &b, a.checked_div(&b).unwrap_or_default(), a.midpoint(&b)] {
                prop_assert!(v.is_canonical());
            }
        }

        #[test]
        fn floor_mul_int_matches_rational_path(a in arb_rational(), n in any::<i64>()) {
            let n = Integer::from(n);
            prop_assert_eq!(a.floor_mul_int(&n), (&a * &Rational::from(&n)).floor());
        }

        #[test]
        fn decimal_literal_is_exact(int in -10_000i64..10_000, frac in 0u32..10_000) {
            let text = format!("{int}.{frac:04}");
            let expected_num = if text.starts_with('-') {
                int * 10_000 - i64::from(frac)
            } else {
                int * 10_000 + i64::from(frac)
            };
            prop_assert_eq!(rat_parse(&text).unwrap(), Rational::new(expected_num, 10_000).unwrap());
        }
    }
}
