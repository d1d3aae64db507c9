//! Exact rational numbers with an inline 64-bit fast path.
//!
//! Almost every coefficient that shows up in the catalog algebras is a small
//! dyadic fraction, so values are kept as a reduced `i64 / i64` pair and only
//! promoted to a heap-allocated [`BigRational`] when an intermediate result no
//! longer fits. The representation is canonical: a value that fits the small
//! form is never stored as a big one, so structural equality is numeric
//! equality.

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::iter::{Product, Sum};
use std::ops::{Add, AddAssign, Div, DivAssign, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

#[derive(Clone)]
enum Repr {
    /// Reduced, `den > 0`, `num != i64::MIN`.
    Small(i64, i64),
    Big(Box<BigRational>),
}

#[derive(Clone)]
pub struct Rational(Repr);

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("cannot parse {input:?} as a rational number")]
pub struct ParseRationalError {
    input: String,
}

fn fits(v: i128) -> bool {
    v > i64::MIN as i128 && v <= i64::MAX as i128
}

impl Rational {
    pub fn new(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        Self::from_i128(num as i128, den as i128)
    }

    pub fn integer(v: i64) -> Self {
        if v == i64::MIN {
            return Self::from_big(BigRational::from_integer(BigInt::from(v)));
        }
        Rational(Repr::Small(v, 1))
    }

    fn from_i128(num: i128, den: i128) -> Self {
        debug_assert!(den != 0);
        if num == 0 {
            return Rational(Repr::Small(0, 1));
        }
        let g = num.gcd(&den);
        let (mut n, mut d) = (num / g, den / g);
        if d < 0 {
            n = -n;
            d = -d;
        }
        if fits(n) && fits(d) {
            Rational(Repr::Small(n as i64, d as i64))
        } else {
            Rational(Repr::Big(Box::new(BigRational::new_raw(
                BigInt::from(n),
                BigInt::from(d),
            ))))
        }
    }

    /// Wraps an already reduced big rational, demoting it when it fits.
    pub fn from_big(r: BigRational) -> Self {
        let (n, d) = (r.numer(), r.denom());
        if let (Some(n), Some(d)) = (n.to_i64(), d.to_i64()) {
            if n != i64::MIN {
                return Rational(Repr::Small(n, d));
            }
        }
        Rational(Repr::Big(Box::new(r)))
    }

    pub fn to_big(&self) -> BigRational {
        match &self.0 {
            Repr::Small(n, d) => BigRational::new_raw(BigInt::from(*n), BigInt::from(*d)),
            Repr::Big(b) => (**b).clone(),
        }
    }

    pub fn numer(&self) -> BigInt {
        match &self.0 {
            Repr::Small(n, _) => BigInt::from(*n),
            Repr::Big(b) => b.numer().clone(),
        }
    }

    pub fn denom(&self) -> BigInt {
        match &self.0 {
            Repr::Small(_, d) => BigInt::from(*d),
            Repr::Big(b) => b.denom().clone(),
        }
    }

    pub fn is_small(&self) -> bool {
        matches!(self.0, Repr::Small(..))
    }

    pub fn is_integer(&self) -> bool {
        match &self.0 {
            Repr::Small(_, d) => *d == 1,
            Repr::Big(b) => b.is_integer(),
        }
    }

    pub fn signum(&self) -> i32 {
        match &self.0 {
            Repr::Small(n, _) => n.signum() as i32,
            Repr::Big(b) => match b.numer().sign() {
                Sign::Minus => -1,
                Sign::NoSign => 0,
                Sign::Plus => 1,
            },
        }
    }

    pub fn abs(&self) -> Self {
        if self.signum() < 0 {
            -self.clone()
        } else {
            self.clone()
        }
    }

    pub fn recip(&self) -> Self {
        Rational::one() / self
    }

    pub fn pow(&self, mut exp: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Rational::one();
        while exp > 0 {
            if exp & 1 == 1 {
                acc *= &base;
            }
            exp >>= 1;
            if exp > 0 {
                base = base.clone() * &base;
            }
        }
        acc
    }

    pub fn powi(&self, exp: i32) -> Self {
        if exp >= 0 {
            self.pow(exp as u32)
        } else {
            self.recip().pow(exp.unsigned_abs())
        }
    }

    /// Exact square root, if the value is the square of a rational.
    pub fn sqrt_exact(&self) -> Option<Self> {
        if self.signum() < 0 {
            return None;
        }
        let (n, d) = (self.numer(), self.denom());
        let (rn, rd) = (n.sqrt(), d.sqrt());
        if &rn * &rn == n && &rd * &rd == d {
            Some(Self::from_big(BigRational::new_raw(rn, rd)))
        } else {
            None
        }
    }

    pub fn to_f64(&self) -> f64 {
        match &self.0 {
            Repr::Small(n, d) => *n as f64 / *d as f64,
            Repr::Big(b) => b.to_f64().unwrap_or(f64::NAN),
        }
    }

    /// Exact binary value of a finite float.
    pub fn from_f64(v: f64) -> Option<Self> {
        BigRational::from_float(v).map(Self::from_big)
    }

    /// Best rational approximation of `x` with denominator at most
    /// `max_den`, by continued fractions.
    pub fn approximate(x: f64, max_den: i64) -> Option<Self> {
        if !x.is_finite() || x.abs() > 1e15 {
            return None;
        }
        let (mut p0, mut q0, mut p1, mut q1) = (0i128, 1i128, 1i128, 0i128);
        let mut r = x;
        for _ in 0..64 {
            let a = r.floor();
            let (p2, q2) = (a as i128 * p1 + p0, a as i128 * q1 + q0);
            if q2 > max_den as i128 {
                break;
            }
            (p0, q0, p1, q1) = (p1, q1, p2, q2);
            let frac = r - a;
            if frac.abs() < 1e-15 || (p1 as f64 / q1 as f64 - x).abs() <= 1e-15 * x.abs().max(1.0) {
                break;
            }
            r = 1.0 / frac;
        }
        (q1 != 0).then(|| Self::from_i128(p1, q1))
    }

    /// Parses a decimal literal such as `-1.25` or `3e-2` exactly.
    fn parse_decimal(s: &str) -> Option<Self> {
        let (mantissa, exponent) = match s.find(['e', 'E']) {
            Some(pos) => (&s[..pos], s[pos + 1..].parse::<i32>().ok()?),
            None => (s, 0),
        };
        let (neg, digits) = match mantissa.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
        };
        let (int_part, frac_part) = match digits.split_once('.') {
            Some((i, f)) => (i, f),
            None => (digits, ""),
        };
        if int_part.is_empty() && frac_part.is_empty() {
            return None;
        }
        if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
            return None;
        }
        let all: String = format!("{int_part}{frac_part}");
        let mut num: BigInt = if all.is_empty() { BigInt::zero() } else { all.parse().ok()? };
        if neg {
            num = -num;
        }
        let scale = exponent - frac_part.len() as i32;
        let ten = BigInt::from(10);
        let r = if scale >= 0 {
            BigRational::from_integer(num * num_traits::pow(ten, scale as usize))
        } else {
            BigRational::new(num, num_traits::pow(ten, (-scale) as usize))
        };
        Some(Self::from_big(r))
    }

    /// `self += a * b` without materializing a temporary when everything is small.
    pub fn add_product(&mut self, a: &Rational, b: &Rational) {
        if let (Repr::Small(x, y), Repr::Small(an, ad), Repr::Small(bn, bd)) = (&self.0, &a.0, &b.0) {
            if *ad == 1 && *bd == 1 && *y == 1 {
                let p = *an as i128 * *bn as i128 + *x as i128;
                if fits(p) {
                    self.0 = Repr::Small(p as i64, 1);
                    return;
                }
            }
        }
        if a.is_zero() || b.is_zero() {
            return;
        }
        *self += &(a.clone() * b);
    }
}

fn add_small(a: i64, b: i64, c: i64, d: i64) -> Rational {
    if b == 1 && d == 1 {
        return Rational::from_i128(a as i128 + c as i128, 1);
    }
    if b == d {
        return Rational::from_i128(a as i128 + c as i128, b as i128);
    }
    let n = a as i128 * d as i128 + c as i128 * b as i128;
    Rational::from_i128(n, b as i128 * d as i128)
}

fn mul_small(a: i64, b: i64, c: i64, d: i64) -> Rational {
    if a == 0 || c == 0 {
        return Rational::zero();
    }
    let g1 = a.gcd(&d);
    let g2 = c.gcd(&b);
    let n = (a / g1) as i128 * (c / g2) as i128;
    let den = (b / g2) as i128 * (d / g1) as i128;
    if fits(n) && fits(den) {
        Rational(Repr::Small(n as i64, den as i64))
    } else {
        Rational(Repr::Big(Box::new(BigRational::new_raw(BigInt::from(n), BigInt::from(den)))))
    }
}

impl Zero for Rational {
    fn zero() -> Self {
        Rational(Repr::Small(0, 1))
    }
    fn is_zero(&self) -> bool {
        matches!(self.0, Repr::Small(0, _))
    }
}

impl One for Rational {
    fn one() -> Self {
        Rational(Repr::Small(1, 1))
    }
}

impl Default for Rational {
    fn default() -> Self {
        Rational::zero()
    }
}

impl From<i64> for Rational {
    fn from(v: i64) -> Self {
        Rational::integer(v)
    }
}

impl From<i32> for Rational {
    fn from(v: i32) -> Self {
        Rational::integer(v as i64)
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
            Repr::Big(b) => {
                1u8.hash(state);
                b.hash(state);
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

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        match self.0 {
            Repr::Small(n, d) => Rational(Repr::Small(-n, d)),
            Repr::Big(b) => Rational::from_big(-*b),
        }
    }
}

impl Neg for &Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        -self.clone()
    }
}

impl Add<&Rational> for &Rational {
    type Output = Rational;
    fn add(self, rhs: &Rational) -> Rational {
        match (&self.0, &rhs.0) {
            (Repr::Small(a, b), Repr::Small(c, d)) => add_small(*a, *b, *c, *d),
            _ => Rational::from_big(self.to_big() + rhs.to_big()),
        }
    }
}

impl Sub<&Rational> for &Rational {
    type Output = Rational;
    fn sub(self, rhs: &Rational) -> Rational {
        match (&self.0, &rhs.0) {
            (Repr::Small(a, b), Repr::Small(c, d)) => add_small(*a, *b, -*c, *d),
            _ => Rational::from_big(self.to_big() - rhs.to_big()),
        }
    }
}

impl Mul<&Rational> for &Rational {
    type Output = Rational;
    fn mul(self, rhs: &Rational) -> Rational {
        match (&self.0, &rhs.0) {
            (Repr::Small(a, b), Repr::Small(c, d)) => mul_small(*a, *b, *c, *d),
            _ => {
                if self.is_zero() || rhs.is_zero() {
                    Rational::zero()
                } else {
                    Rational::from_big(self.to_big() * rhs.to_big())
                }
            }
        }
    }
}

impl Div<&Rational> for &Rational {
    type Output = Rational;
    fn div(self, rhs: &Rational) -> Rational {
        assert!(!rhs.is_zero(), "division by zero rational");
        match (&self.0, &rhs.0) {
            (Repr::Small(a, b), Repr::Small(c, d)) => {
                let (c, d) = if *c < 0 { (-*d, -*c) } else { (*d, *c) };
                mul_small(*a, *b, c, d)
            }
            _ => Rational::from_big(self.to_big() / rhs.to_big()),
        }
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident, $assign_tr:ident, $assign_method:ident) => {
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
        impl $assign_tr<&Rational> for Rational {
            fn $assign_method(&mut self, rhs: &Rational) {
                *self = (&*self).$method(rhs);
            }
        }
        impl $assign_tr<Rational> for Rational {
            fn $assign_method(&mut self, rhs: Rational) {
                *self = (&*self).$method(&rhs);
            }
        }
    };
}

forward_binop!(Add, add, AddAssign, add_assign);
forward_binop!(Sub, sub, SubAssign, sub_assign);
forward_binop!(Mul, mul, MulAssign, mul_assign);
forward_binop!(Div, div, DivAssign, div_assign);

impl Sum for Rational {
    fn sum<I: Iterator<Item = Rational>>(iter: I) -> Rational {
        iter.fold(Rational::zero(), |acc, x| acc + x)
    }
}

impl<'a> Sum<&'a Rational> for Rational {
    fn sum<I: Iterator<Item = &'a Rational>>(iter: I) -> Rational {
        iter.fold(Rational::zero(), |acc, x| acc + x)
    }
}

impl Product for Rational {
    fn product<I: Iterator<Item = Rational>>(iter: I) -> Rational {
        iter.fold(Rational::one(), |acc, x| acc * x)
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0 {
            Repr::Small(n, 1) => write!(f, "{n}"),
            Repr::Small(n, d) => write!(f, "{n}/{d}"),
            Repr::Big(b) if b.is_integer() => write!(f, "{}", b.numer()),
            Repr::Big(b) => write!(f, "{}/{}", b.numer(), b.denom()),
        }
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Rational {
    type Err = ParseRationalError;

    /// Accepts `p/q`, integers, and decimal literals.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || ParseRationalError { input: s.to_string() };
        let t = s.trim();
        if let Some((n, d)) = t.split_once('/') {
            let n: BigInt = n.trim().parse().map_err(|_| err())?;
            let d: BigInt = d.trim().parse().map_err(|_| err())?;
            if d.is_zero() {
                return Err(err());
            }
            return Ok(Rational::from_big(BigRational::new(n, d)));
        }
        if let Ok(n) = t.parse::<BigInt>() {
            return Ok(Rational::from(n));
        }
        Rational::parse_decimal(t).ok_or_else(err)
    }
}

impl Serialize for Rational {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Rational {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let value = serde_json::Value::deserialize(deserializer)?;
        match &value {
            serde_json::Value::String(s) => s.parse().map_err(D::Error::custom),
            serde_json::Value::Number(n) => n.to_string().parse().map_err(D::Error::custom),
            other => Err(D::Error::custom(format!("expected a rational string, found {other}"))),
        }
    }
}

impl Signed for Rational {
    fn abs(&self) -> Self {
        Rational::abs(self)
    }
    fn abs_sub(&self, other: &Self) -> Self {
        if self <= other {
            Rational::zero()
        } else {
            self - other
        }
    }
    fn signum(&self) -> Self {
        Rational::integer(Rational::signum(self) as i64)
    }
    fn is_positive(&self) -> bool {
        Rational::signum(self) > 0
    }
    fn is_negative(&self) -> bool {
        Rational::signum(self) < 0
    }
}

impl num_traits::Num for Rational {
    type FromStrRadixErr = ParseRationalError;
    fn from_str_radix(s: &str, radix: u32) -> Result<Self, Self::FromStrRadixErr> {
        if radix != 10 {
            return Err(ParseRationalError { input: s.to_string() });
        }
        s.parse()
    }
}

impl std::ops::Rem for Rational {
    type Output = Rational;
    fn rem(self, rhs: Rational) -> Rational {
        Rational::from_big(self.to_big() % rhs.to_big())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn big(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn canonical_small_form() {
        let r = Rational::new(6, -4);
        assert_eq!(r.to_string(), "-3/2");
        assert!(r.is_small());
        assert_eq!(Rational::new(0, -5), Rational::zero());
    }

    #[test]
    fn overflow_promotes_and_demotes() {
        let huge = Rational::integer(i64::MAX);
        let sq = huge.clone() * &huge;
        assert!(!sq.is_small());
        let back = sq / &huge;
        assert!(back.is_small());
        assert_eq!(back, huge);
        let min = Rational::integer(i64::MIN);
        assert!(!min.is_small());
        assert_eq!(-(-min.clone()), min);
    }

    #[test]
    fn parse_forms() {
        assert_eq!("1/3".parse::<Rational>().unwrap(), Rational::new(1, 3));
        assert_eq!("-7".parse::<Rational>().unwrap(), Rational::integer(-7));
        assert_eq!("-1.25".parse::<Rational>().unwrap(), Rational::new(-5, 4));
        assert_eq!("3e-2".parse::<Rational>().unwrap(), Rational::new(3, 100));
        assert_eq!(".5".parse::<Rational>().unwrap(), Rational::new(1, 2));
        assert!("1/0".parse::<Rational>().is_err());
        assert!("abc".parse::<Rational>().is_err());
        let s = "123456789012345678901234567891/2";
        assert_eq!(s.parse::<Rational>().unwrap().to_string(), s);
    }

    #[test]
    fn continued_fraction_approximation() {
        assert_eq!(Rational::approximate(0.75, 100), Some(Rational::new(3, 4)));
        assert_eq!(Rational::approximate(-1.0 / 3.0, 1000), Some(Rational::new(-1, 3)));
        assert_eq!(Rational::approximate(std::f64::consts::PI, 1000), Some(Rational::new(355, 113)));
    }

    #[test]
    fn exact_sqrt() {
        assert_eq!(Rational::new(9, 4).sqrt_exact(), Some(Rational::new(3, 2)));
        assert_eq!(Rational::new(2, 1).sqrt_exact(), None);
        assert_eq!(Rational::new(-4, 1).sqrt_exact(), None);
    }

    #[test]
    fn powers() {
        assert_eq!(Rational::new(-2, 3).pow(3), Rational::new(-8, 27));
        assert_eq!(Rational::new(2, 1).powi(-2), Rational::new(1, 4));
        assert_eq!(Rational::integer(3).pow(80).to_string(), "147808829414345923316083210206383297601");
    }

    proptest! {
        #[test]
        fn arithmetic_matches_bigrational(
            a in any::<i64>(), b in 1..i64::MAX, c in any::<i64>(), d in 1..i64::MAX
        ) {
            let (x, y) = (Rational::new(a, b), Rational::new(c, d));
            let (bx, by) = (big(a, b), big(c, d));
            prop_assert_eq!((&x + &y).to_big(), &bx + &by);
            prop_assert_eq!((&x - &y).to_big(), &bx - &by);
            prop_assert_eq!((&x * &y).to_big(), &bx * &by);
            if c != 0 {
                prop_assert_eq!((&x / &y).to_big(), &bx / &by);
            }
            prop_assert_eq!(x.cmp(&y), bx.cmp(&by));
            let mut acc = x.clone();
            acc.add_product(&x, &y);
            prop_assert_eq!(acc.to_big(), &bx + &bx * &by);
        }

        #[test]
        fn display_roundtrip(a in any::<i64>(), b in 1..i64::MAX) {
            let x = Rational::new(a, b);
            prop_assert_eq!(x.to_string().parse::<Rational>().unwrap(), x);
        }
    }
}
