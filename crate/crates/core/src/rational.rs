//! Exact rational scalars and their extension with `+∞`.
//!
//! [`Rational`] keeps small values in a pair of machine words and promotes to
//! arbitrary precision only when an operation would overflow. The two
//! representations are never mixed for the same value: anything that fits in
//! `i64/i64` is stored inline, so derived equality and hashing stay canonical.

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

#[derive(Clone)]
enum Repr {
    Small(i64, i64),
    Big(BigRational),
}

/// An exact, always-reduced rational number with a positive denominator.
#[derive(Clone)]
pub struct Rational(Repr);

impl Rational {
    pub fn zero() -> Self {
        Rational(Repr::Small(0, 1))
    }

    pub fn one() -> Self {
        Rational(Repr::Small(1, 1))
    }

    pub fn from_int(v: i64) -> Self {
        Rational(Repr::Small(v, 1))
    }

    /// Builds `num/den`. Panics if `den == 0`.
    pub fn new(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        Self::from_i128(num as i128, den as i128)
    }

    pub fn from_bigints(num: BigInt, den: BigInt) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        Self::from_big(BigRational::new(num, den))
    }

    fn from_i128(num: i128, den: i128) -> Self {
        debug_assert!(den != 0);
        let g = num.gcd(&den);
        let (mut n, mut d) = (num / g, den / g);
        if d < 0 {
            n = -n;
            d = -d;
        }
        match (i64::try_from(n), i64::try_from(d)) {
            (Ok(n), Ok(d)) => Rational(Repr::Small(n, d)),
            _ => Rational(Repr::Big(BigRational::new(BigInt::from(n), BigInt::from(d)))),
        }
    }

    fn from_big(r: BigRational) -> Self {
        // BigRational::new already reduces and normalizes the sign.
        match (r.numer().to_i64(), r.denom().to_i64()) {
            (Some(n), Some(d)) => Rational(Repr::Small(n, d)),
            _ => Rational(Repr::Big(r)),
        }
    }

    fn to_big(&self) -> BigRational {
        match &self.0 {
            Repr::Small(n, d) => BigRational::new_raw(BigInt::from(*n), BigInt::from(*d)),
            Repr::Big(r) => r.clone(),
        }
    }

    pub fn numer(&self) -> BigInt {
        match &self.0 {
            Repr::Small(n, _) => BigInt::from(*n),
            Repr::Big(r) => r.numer().clone(),
        }
    }

    pub fn denom(&self) -> BigInt {
        match &self.0 {
            Repr::Small(_, d) => BigInt::from(*d),
            Repr::Big(r) => r.denom().clone(),
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self.0, Repr::Small(0, _))
    }

    pub fn is_integer(&self) -> bool {
        match &self.0 {
            Repr::Small(_, d) => *d == 1,
            Repr::Big(r) => r.is_integer(),
        }
    }

    pub fn signum(&self) -> i32 {
        match &self.0 {
            Repr::Small(n, _) => n.signum() as i32,
            Repr::Big(r) => {
                if r.is_positive() {
                    1
                } else if r.is_negative() {
                    -1
                } else {
                    0
                }
            }
        }
    }

    pub fn is_positive(&self) -> bool {
        self.signum() > 0
    }

    pub fn is_negative(&self) -> bool {
        self.signum() < 0
    }

    pub fn abs(&self) -> Self {
        if self.is_negative() {
            -self
        } else {
            self.clone()
        }
    }

    pub fn recip(&self) -> Self {
        assert!(!self.is_zero(), "reciprocal of zero");
        match &self.0 {
            Repr::Small(n, d) => Self::from_i128(*d as i128, *n as i128),
            Repr::Big(r) => Self::from_big(r.recip()),
        }
    }

    pub fn floor(&self) -> Self {
        match &self.0 {
            Repr::Small(n, d) => Rational(Repr::Small(Integer::div_floor(n, d), 1)),
            Repr::Big(r) => Self::from_big(r.floor()),
        }
    }

    pub fn ceil(&self) -> Self {
        match &self.0 {
            Repr::Small(n, d) => Self::from_i128(-Integer::div_floor(&-(*n as i128), &(*d as i128)), 1),
            Repr::Big(r) => Self::from_big(r.ceil()),
        }
    }

    /// Returns the value as an `i64` when it is an integer in range.
    pub fn to_i64(&self) -> Option<i64> {
        match &self.0 {
            Repr::Small(n, 1) => Some(*n),
            _ => None,
        }
    }

    pub fn to_f64(&self) -> f64 {
        match &self.0 {
            Repr::Small(n, d) => *n as f64 / *d as f64,
            Repr::Big(r) => r.to_f64().unwrap_or(f64::NAN),
        }
    }

    pub fn half(&self) -> Self {
        self / &Rational::from_int(2)
    }
}

impl Default for Rational {
    fn default() -> Self {
        Rational::zero()
    }
}

impl From<i64> for Rational {
    fn from(v: i64) -> Self {
        Rational::from_int(v)
    }
}

impl From<i32> for Rational {
    fn from(v: i32) -> Self {
        Rational::from_int(v as i64)
    }
}

impl From<BigInt> for Rational {
    fn from(v: BigInt) -> Self {
        Rational::from_big(BigRational::from_integer(v))
    }
}

impl PartialEq for Rational {
    fn eq(&self, other: &Self) -> bool {
        match (&self.0, &other.0) {
            (Repr::Small(a, b), Repr::Small(c, d)) => a == c && b == d,
            (Repr::Big(x), Repr::Big(y)) => x == y,
            _ => false,
        }
    }
}

impl Eq for Rational {}

impl Hash for Rational {
    fn hash<H: Hasher>(&self, state: &mut H) {
        match &self.0 {
            Repr::Small(n, d) => {
                0u8.hash(state);
                n.hash(state);
                d.hash(state);
            }
            Repr::Big(r) => {
                1u8.hash(state);
                r.hash(state);
            }
        }
    }
}

impl Ord for Rational {
    fn cmp(&self, other: &Self) -> Ordering {
        match (&self.0, &other.0) {
            (Repr::Small(a, b), Repr::Small(c, d)) => {
                (*a as i128 * *d as i128).cmp(&(*c as i128 * *b as i128))
            }
            _ => self.to_big().cmp(&other.to_big()),
        }
    }
}

impl PartialOrd for Rational {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

fn add_ref(x: &Rational, y: &Rational) -> Rational {
    match (&x.0, &y.0) {
        (Repr::Small(a, b), Repr::Small(c, d)) => {
            if *b == 1 && *d == 1 {
                if let Some(s) = a.checked_add(*c) {
                    return Rational(Repr::Small(s, 1));
                }
            }
            let (a, b, c, d) = (*a as i128, *b as i128, *c as i128, *d as i128);
            match (a * d).checked_add(c * b) {
                Some(num) => Rational::from_i128(num, b * d),
                None => Rational::from_big(x.to_big() + y.to_big()),
            }
        }
        _ => Rational::from_big(x.to_big() + y.to_big()),
    }
}

fn mul_ref(x: &Rational, y: &Rational) -> Rational {
    match (&x.0, &y.0) {
        (Repr::Small(a, b), Repr::Small(c, d)) => {
            Rational::from_i128(*a as i128 * *c as i128, *b as i128 * *d as i128)
        }
        _ => Rational::from_big(x.to_big() * y.to_big()),
    }
}

impl Neg for &Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        match &self.0 {
            Repr::Small(n, d) => match n.checked_neg() {
                Some(m) => Rational(Repr::Small(m, *d)),
                None => Rational::from_big(-self.to_big()),
            },
            Repr::Big(r) => Rational::from_big(-r.clone()),
        }
    }
}

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        -&self
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident, $body:expr) => {
        impl $tr<&Rational> for &Rational {
            type Output = Rational;
            fn $method(self, rhs: &Rational) -> Rational {
                let f: fn(&Rational, &Rational) -> Rational = $body;
                f(self, rhs)
            }
        }
        impl $tr<Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                (&self).$method(&rhs)
            }
        }
        impl $tr<&Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: &Rational) -> Rational {
                (&self).$method(rhs)
            }
        }
        impl $tr<Rational> for &Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                self.$method(&rhs)
            }
        }
    };
}

forward_binop!(Add, add, add_ref);
forward_binop!(Sub, sub, |x, y| add_ref(x, &-y));
forward_binop!(Mul, mul, mul_ref);
forward_binop!(Div, div, |x, y| mul_ref(x, &y.recip()));

impl AddAssign<&Rational> for Rational {
    fn add_assign(&mut self, rhs: &Rational) {
        *self = add_ref(self, rhs);
    }
}

impl SubAssign<&Rational> for Rational {
    fn sub_assign(&mut self, rhs: &Rational) {
        *self = add_ref(self, &-rhs);
    }
}

impl std::iter::Sum for Rational {
    fn sum<I: Iterator<Item = Rational>>(iter: I) -> Rational {
        iter.fold(Rational::zero(), |acc, x| acc + x)
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0 {
            Repr::Small(n, 1) => write!(f, "{n}"),
            Repr::Small(n, d) => write!(f, "{n}/{d}"),
            Repr::Big(r) if r.is_integer() => write!(f, "{}", r.numer()),
            Repr::Big(r) => write!(f, "{}/{}", r.numer(), r.denom()),
        }
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid rational literal `{0}`")]
pub struct ParseRationalError(pub String);

impl FromStr for Rational {
    type Err = ParseRationalError;

    /// Accepts `["-"] digits ["/" digits]`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || ParseRationalError(s.to_string());
        let t = s.trim();
        let (neg, body) = match t.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, t),
        };
        let (num, den) = match body.split_once('/') {
            Some((n, d)) => (n, Some(d)),
            None => (body, None),
        };
        let digits = |x: &str| !x.is_empty() && x.bytes().all(|b| b.is_ascii_digit());
        if !digits(num) || !den.is_none_or(digits) {
            return Err(err());
        }
        let mut n: BigInt = num.parse().map_err(|_| err())?;
        if neg {
            n = -n;
        }
        let d: BigInt = match den {
            Some(d) => d.parse().map_err(|_| err())?,
            None => BigInt::one(),
        };
        if d.is_zero() {
            return Err(err());
        }
        Ok(Rational::from_bigints(n, d))
    }
}

/// An element of `ℚ ∪ {+∞}`, the codomain of graph weight functions.
#[derive(Clone, PartialEq, Eq, Hash)]
pub enum ExtendedRational {
    Finite(Rational),
    PlusInfinity,
}

pub use ExtendedRational::PlusInfinity;

impl ExtendedRational {
    pub fn finite(v: impl Into<Rational>) -> Self {
        ExtendedRational::Finite(v.into())
    }

    pub fn zero() -> Self {
        ExtendedRational::Finite(Rational::zero())
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, ExtendedRational::Finite(_))
    }

    pub fn is_infinite(&self) -> bool {
        !self.is_finite()
    }

    pub fn as_finite(&self) -> Option<&Rational> {
        match self {
            ExtendedRational::Finite(v) => Some(v),
            ExtendedRational::PlusInfinity => None,
        }
    }

    /// Saturating addition: anything plus `+∞` is `+∞`.
    pub fn add(&self, other: &ExtendedRational) -> ExtendedRational {
        match (self, other) {
            (ExtendedRational::Finite(a), ExtendedRational::Finite(b)) => {
                ExtendedRational::Finite(a + b)
            }
            _ => ExtendedRational::PlusInfinity,
        }
    }

    pub fn add_finite(&self, other: &Rational) -> ExtendedRational {
        match self {
            ExtendedRational::Finite(a) => ExtendedRational::Finite(a + other),
            ExtendedRational::PlusInfinity => ExtendedRational::PlusInfinity,
        }
    }

    pub fn min(self, other: ExtendedRational) -> ExtendedRational {
        if other < self {
            other
        } else {
            self
        }
    }

    pub fn max(self, other: ExtendedRational) -> ExtendedRational {
        if other > self {
            other
        } else {
            self
        }
    }

    pub fn is_integral(&self) -> bool {
        self.as_finite().is_none_or(Rational::is_integer)
    }
}

impl Ord for ExtendedRational {
    fn cmp(&self, other: &Self) -> Ordering {
        use ExtendedRational::*;
        match (self, other) {
            (Finite(a), Finite(b)) => a.cmp(b),
            (Finite(_), PlusInfinity) => Ordering::Less,
            (PlusInfinity, Finite(_)) => Ordering::Greater,
            (PlusInfinity, PlusInfinity) => Ordering::Equal,
        }
    }
}

impl PartialOrd for ExtendedRational {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl From<Rational> for ExtendedRational {
    fn from(v: Rational) -> Self {
        ExtendedRational::Finite(v)
    }
}

impl fmt::Display for ExtendedRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtendedRational::Finite(v) => write!(f, "{v}"),
            ExtendedRational::PlusInfinity => f.write_str("+inf"),
        }
    }
}

impl fmt::Debug for ExtendedRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    #[test]
    fn reduces_and_normalizes_sign() {
        assert_eq!(q(2, 4), q(1, 2));
        assert_eq!(q(3, -6), q(-1, 2));
        assert_eq!(q(0, -5), Rational::zero());
        assert_eq!(q(-6, 3).to_string(), "-2");
    }

    #[test]
    fn promotes_on_overflow_and_demotes_back() {
        let big = Rational::from_int(i64::MAX) + Rational::from_int(i64::MAX);
        assert_eq!(big.to_string(), "18446744073709551614");
        let back = &big - &Rational::from_int(i64::MAX);
        assert_eq!(back, Rational::from_int(i64::MAX));
        assert!(matches!(back.0, Repr::Small(..)));
        let m = -Rational::from_int(i64::MIN);
        assert_eq!(m.to_string(), "9223372036854775808");
    }

    #[test]
    fn floor_and_ceil() {
        assert_eq!(q(3, 2).floor(), Rational::from_int(1));
        assert_eq!(q(-3, 2).floor(), Rational::from_int(-2));
        assert_eq!(q(-3, 2).ceil(), Rational::from_int(-1));
        assert_eq!(q(4, 2).ceil(), Rational::from_int(2));
    }

    #[test]
    fn parses_literals() {
        assert_eq!("1/3".parse::<Rational>().unwrap(), q(1, 3));
        assert_eq!("-4/6".parse::<Rational>().unwrap(), q(-2, 3));
        assert_eq!("7".parse::<Rational>().unwrap(), q(7, 1));
        assert!("1/0".parse::<Rational>().is_err());
        assert!("--1".parse::<Rational>().is_err());
        assert!("1.5".parse::<Rational>().is_err());
    }

    #[test]
    fn extended_order_and_saturation() {
        let inf = PlusInfinity;
        let three = ExtendedRational::finite(3);
        assert!(three < inf);
        assert_eq!(three.add(&inf), PlusInfinity);
        assert_eq!(three.add(&ExtendedRational::finite(-5)), ExtendedRational::finite(-2));
    }

    proptest! {
        #[test]
        fn addition_matches_cross_multiplication(
            a in -1_000_000i64..1_000_000, b in 1i64..10_000,
            c in -1_000_000i64..1_000_000, d in 1i64..10_000,
        ) {
            let s = q(a, b) + q(c, d);
            // s == (ad + cb)/(bd) by cross-multiplication
            let lhs = s.numer() * BigInt::from(b) * BigInt::from(d);
            let rhs = (BigInt::from(a) * d + BigInt::from(c) * b) * s.denom();
            prop_assert_eq!(lhs, rhs);
            prop_assert_eq!(s.numer().gcd(&s.denom()), BigInt::one());
            prop_assert!(s.denom() >= BigInt::one());
        }

        #[test]
        fn big_and_small_paths_agree(
            a in any::<i64>(), b in 1i64..i64::MAX, c in any::<i64>(), d in 1i64..i64::MAX,
        ) {
            let x = q(a, b);
            let y = q(c, d);
            let big = Rational::from_big(x.to_big() * y.to_big() + x.to_big());
            prop_assert_eq!(&x * &y + &x, big);
            prop_assert_eq!(x.cmp(&y), x.to_big().cmp(&y.to_big()));
        }
    }
}
