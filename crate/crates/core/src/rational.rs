//! Exact rational scalars.
//!
//! [`Rational`] wraps an arbitrary-precision [`BigRational`], which is kept in
//! lowest terms with a positive denominator after every operation. The textual
//! form is canonical: `"-3/7"`, `"2"`, `"0"`. Parsing is strict and rejects any
//! other spelling of the same number (`"4/2"`, `"+1"`, `"-0"`, `"07"`, ...), so
//! that string equality and numeric equality coincide.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::de::{self, Deserializer, Visitor};
use serde::{Deserialize, Serialize, Serializer};

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Rational(BigRational);

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid rational {text:?} at byte {offset}: {reason}")]
pub struct ParseRationalError {
    pub text: String,
    pub offset: usize,
    pub reason: &'static str,
}

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

    pub fn from_big(value: BigRational) -> Self {
        Rational(value)
    }

    pub fn as_big(&self) -> &BigRational {
        &self.0
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn is_positive(&self) -> bool {
        self.0.is_positive()
    }

    pub fn signum(&self) -> Ordering {
        self.0.numer().sign().cmp(&num_bigint::Sign::NoSign)
    }

    pub fn abs(&self) -> Self {
        Rational(self.0.abs())
    }

    pub fn recip(&self) -> Self {
        Rational(self.0.recip())
    }

    /// Midpoint of `self` and `other`.
    pub fn midpoint(&self, other: &Rational) -> Self {
        Rational((&self.0 + &other.0) / BigInt::from(2))
    }

    pub fn min_ref<'a>(&'a self, other: &'a Rational) -> &'a Rational {
        if other < self {
            other
        } else {
            self
        }
    }

    pub fn max_ref<'a>(&'a self, other: &'a Rational) -> &'a Rational {
        if other > self {
            other
        } else {
            self
        }
    }

    /// Nearest `f64`; used only for human-readable diagnostics.
    pub fn to_f64_lossy(&self) -> f64 {
        use num_traits::ToPrimitive;
        self.0.to_f64().unwrap_or(f64::NAN)
    }
}

fn parse_digits(text: &str, start: usize, allow_zero: bool) -> Result<BigInt, ParseRationalError> {
    let bytes = text.as_bytes();
    let err = |offset, reason| ParseRationalError {
        text: text.to_owned(),
        offset,
        reason,
    };
    if start >= bytes.len() {
        return Err(err(start, "expected digits"));
    }
    for (i, b) in bytes[start..].iter().enumerate() {
        if !b.is_ascii_digit() {
            return Err(err(start + i, "unexpected character"));
        }
    }
    if bytes[start] == b'0' && bytes.len() - start > 1 {
        return Err(err(start, "leading zero"));
    }
    if !allow_zero && bytes[start] == b'0' {
        return Err(err(start, "zero denominator"));
    }
    // digits validated above
    Ok(text[start..]
        .parse::<BigInt>()
        .expect("validated decimal digits"))
}

impl FromStr for Rational {
    type Err = ParseRationalError;

    fn from_str(text: &str) -> Result<Self, Self::Err> {
        let err = |offset, reason| ParseRationalError {
            text: text.to_owned(),
            offset,
            reason,
        };
        let (negative, body_start) = match text.as_bytes().first() {
            Some(b'-') => (true, 1),
            Some(_) => (false, 0),
            None => return Err(err(0, "empty string")),
        };
        let (numer_text, denom_at) = match text[body_start..].find('/') {
            Some(slash) => (&text[..body_start + slash], Some(body_start + slash + 1)),
            None => (text, None),
        };
        let numer = parse_digits(numer_text, body_start, true)?;
        if negative && numer.is_zero() {
            return Err(err(0, "negative zero"));
        }
        let numer = if negative { -numer } else { numer };
        let Some(denom_at) = denom_at else {
            return Ok(Rational(BigRational::from_integer(numer)));
        };
        if numer.is_zero() {
            return Err(err(0, "zero must be written as \"0\""));
        }
        let denom = parse_digits(text, denom_at, false)?;
        if denom.is_one() {
            return Err(err(denom_at, "denominator 1 must be omitted"));
        }
        let value = BigRational::new(numer.clone(), denom.clone());
        if value.denom() != &denom {
            return Err(err(denom_at, "not in lowest terms"));
        }
        Ok(Rational(value))
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.denom().is_one() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Serialize for Rational {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Rational {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        struct RationalVisitor;

        impl Visitor<'_> for RationalVisitor {
            type Value = Rational;

            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("a canonical rational string such as \"-3/7\"")
            }

            fn visit_str<E: de::Error>(self, v: &str) -> Result<Rational, E> {
                v.parse().map_err(E::custom)
            }
        }

        deserializer.deserialize_str(RationalVisitor)
    }
}

impl From<i64> for Rational {
    fn from(n: i64) -> Self {
        Rational::from_integer(n)
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident) => {
        impl $trait<&Rational> for &Rational {
            type Output = Rational;
            fn $method(self, rhs: &Rational) -> Rational {
                Rational((&self.0).$method(&rhs.0))
            }
        }
        impl $trait<Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational(self.0.$method(rhs.0))
            }
        }
        impl $trait<&Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: &Rational) -> Rational {
                Rational(self.0.$method(&rhs.0))
            }
        }
        impl $trait<Rational> for &Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational((&self.0).$method(rhs.0))
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);
forward_binop!(Div, div);

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

/// Shorthand for `Rational::new(n, d)`.
pub fn q(numer: i64, denom: i64) -> Rational {
    Rational::new(numer, denom)
}
