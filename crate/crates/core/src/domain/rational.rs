//! Exact rational numbers over arbitrary-precision integers.
//!
//! `num-rational` normalizes through Stein's binary gcd, which degrades to
//! quadratic time when one operand is a multi-megabit probe value and the
//! other a small denominator. Every gcd here starts with a Euclidean step, so
//! a huge numerator over a small denominator reduces in linear time.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Pow, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Greatest common divisor of the magnitudes of `a` and `b`.
pub fn gcd(a: &BigInt, b: &BigInt) -> BigInt {
    BigInt::from(gcd_biguint(a.magnitude(), b.magnitude()))
}

pub(crate) fn gcd_biguint(a: &BigUint, b: &BigUint) -> BigUint {
    let (mut x, mut y) = if a >= b { (a.clone(), b.clone()) } else { (b.clone(), a.clone()) };
    while !y.is_zero() {
        if let (Some(mut s), Some(mut t)) = (x.to_u64(), y.to_u64()) {
            while t != 0 {
                (s, t) = (t, s % t);
            }
            return BigUint::from(s);
        }
        let r = &x % &y;
        x = y;
        y = r;
    }
    x
}

/// A canonical fraction: positive denominator, coprime parts, zero is `0/1`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Rational {
    num: BigInt,
    den: BigInt,
}

impl Rational {
    /// Builds `num/den` in lowest terms. Panics when `den` is zero.
    pub fn new(num: impl Into<BigInt>, den: impl Into<BigInt>) -> Self {
        Self::try_new(num, den).expect("zero denominator")
    }

    pub fn try_new(num: impl Into<BigInt>, den: impl Into<BigInt>) -> Result<Self> {
        let (num, den) = (num.into(), den.into());
        if den.is_zero() {
            return Err(Error::InvalidArgument("zero denominator".into()));
        }
        Ok(Self::reduce(num, den))
    }

    fn reduce(mut num: BigInt, mut den: BigInt) -> Self {
        if den.is_negative() {
            num = -num;
            den = -den;
        }
        if num.is_zero() {
            return Self::zero();
        }
        if !den.is_one() {
            let g = gcd(&num, &den);
            if !g.is_one() {
                num /= &g;
                den /= &g;
            }
        }
        Rational { num, den }
    }

    /// Caller guarantees `den > 0` and `gcd(num, den) = 1`.
    pub(crate) fn from_coprime(num: BigInt, den: BigInt) -> Self {
        debug_assert!(den.is_positive());
        Rational { num, den }
    }

    pub fn from_integer(n: impl Into<BigInt>) -> Self {
        Rational { num: n.into(), den: BigInt::one() }
    }

    pub fn zero() -> Self {
        Rational { num: BigInt::zero(), den: BigInt::one() }
    }

    pub fn one() -> Self {
        Self::from_integer(1)
    }

    pub fn numer(&self) -> &BigInt {
        &self.num
    }

    pub fn denom(&self) -> &BigInt {
        &self.den
    }

    pub fn into_parts(self) -> (BigInt, BigInt) {
        (self.num, self.den)
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_integer(&self) -> bool {
        self.den.is_one()
    }

    pub fn is_negative(&self) -> bool {
        self.num.is_negative()
    }

    pub fn is_positive(&self) -> bool {
        self.num.is_positive()
    }

    pub fn abs(&self) -> Self {
        Rational { num: self.num.abs(), den: self.den.clone() }
    }

    /// Panics on zero.
    pub fn recip(&self) -> Self {
        assert!(!self.is_zero(), "reciprocal of zero");
        let (num, den) = if self.num.is_negative() {
            (-self.den.clone(), -self.num.clone())
        } else {
            (self.den.clone(), self.num.clone())
        };
        Rational { num, den }
    }

    pub fn floor(&self) -> BigInt {
        self.num.div_floor(&self.den)
    }

    pub fn ceil(&self) -> BigInt {
        -((-&self.num).div_floor(&self.den))
    }

    pub fn pow(&self, exp: u64) -> Self {
        if exp == 0 {
            return Self::one();
        }
        // powers of coprime parts stay coprime
        Rational { num: Pow::pow(&self.num, exp), den: Pow::pow(&self.den, exp) }
    }

    /// Multiplies by an integer without forming an intermediate fraction.
    pub fn mul_int(&self, k: &BigInt) -> Self {
        if self.den.is_one() {
            return Rational { num: &self.num * k, den: BigInt::one() };
        }
        let g = gcd(k, &self.den);
        if g.is_one() {
            Rational { num: &self.num * k, den: self.den.clone() }
        } else {
            Self::reduce(&self.num * (k / &g), &self.den / &g)
        }
    }

    /// Approximate value, for display only.
    pub fn to_f64(&self) -> f64 {
        let ns = (self.num.bits() as i64 - 64).max(0);
        let ds = (self.den.bits() as i64 - 64).max(0);
        let n = (&self.num >> ns as usize).to_f64().unwrap_or(0.0);
        let d = (&self.den >> ds as usize).to_f64().unwrap_or(1.0);
        n / d * 2f64.powi((ns - ds) as i32)
    }
}

impl Default for Rational {
    fn default() -> Self {
        Self::zero()
    }
}

macro_rules! impl_from_int {
    ($($t:ty),*) => {$(
        impl From<$t> for Rational {
            fn from(n: $t) -> Self {
                Rational::from_integer(n)
            }
        }
    )*};
}
impl_from_int!(i32, i64, u32, u64, usize, BigInt);

impl From<BigUint> for Rational {
    fn from(n: BigUint) -> Self {
        Rational::from_integer(BigInt::from_biguint(Sign::Plus, n))
    }
}

impl Ord for Rational {
    fn cmp(&self, other: &Self) -> Ordering {
        if self.den == other.den {
            return self.num.cmp(&other.num);
        }
        let (sa, sb) = (self.num.sign(), other.num.sign());
        if sa != sb {
            return sa.cmp(&sb);
        }
        (&self.num * &other.den).cmp(&(&other.num * &self.den))
    }
}

impl PartialOrd for Rational {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

fn add_impl(a: &Rational, b: &Rational, negate_b: bool) -> Rational {
    let bn = if negate_b { -&b.num } else { b.num.clone() };
    if a.den.is_one() && b.den.is_one() {
        return Rational::from_integer(&a.num + bn);
    }
    if a.den == b.den {
        return Rational::reduce(&a.num + bn, a.den.clone());
    }
    let g = gcd(&a.den, &b.den);
    if g.is_one() {
        // (n1 d2 + n2 d1) is coprime to d1 d2 when gcd(d1, d2) = 1
        let num = &a.num * &b.den + bn * &a.den;
        if num.is_zero() {
            return Rational::zero();
        }
        return Rational::from_coprime(num, &a.den * &b.den);
    }
    let ad = &a.den / &g;
    let bd = &b.den / &g;
    let t = &a.num * &bd + bn * &ad;
    if t.is_zero() {
        return Rational::zero();
    }
    let g2 = gcd(&t, &g);
    let den = ad * (&b.den / &g2);
    Rational::from_coprime(t / g2, den)
}

fn mul_impl(a: &Rational, b: &Rational) -> Rational {
    if a.is_zero() || b.is_zero() {
        return Rational::zero();
    }
    if b.den.is_one() {
        return a.mul_int(&b.num);
    }
    if a.den.is_one() {
        return b.mul_int(&a.num);
    }
    let g1 = gcd(&a.num, &b.den);
    let g2 = gcd(&b.num, &a.den);
    let num = (&a.num / &g1) * (&b.num / &g2);
    let den = (&a.den / &g2) * (&b.den / &g1);
    Rational::from_coprime(num, den)
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident, $body:expr) => {
        impl $tr<&Rational> for &Rational {
            type Output = Rational;
            fn $method(self, rhs: &Rational) -> Rational {
                $body(self, rhs)
            }
        }
        impl $tr<Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                $body(&self, &rhs)
            }
        }
        impl $tr<&Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: &Rational) -> Rational {
                $body(&self, rhs)
            }
        }
        impl $tr<Rational> for &Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                $body(self, &rhs)
            }
        }
    };
}

forward_binop!(Add, add, |a, b| add_impl(a, b, false));
forward_binop!(Sub, sub, |a, b| add_impl(a, b, true));
forward_binop!(Mul, mul, mul_impl);
forward_binop!(Div, div, |a: &Rational, b: &Rational| mul_impl(a, &b.recip()));

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational { num: -self.num, den: self.den }
    }
}

impl Neg for &Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational { num: -&self.num, den: self.den.clone() }
    }
}

impl std::iter::Sum for Rational {
    fn sum<I: Iterator<Item = Rational>>(iter: I) -> Self {
        iter.fold(Rational::zero(), |acc, x| acc + x)
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

impl FromStr for Rational {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidArgument(format!("not a rational number: {s:?}"));
        let s = s.trim();
        match s.split_once('/') {
            Some((n, d)) => {
                let num: BigInt = n.trim().parse().map_err(|_| bad())?;
                let den: BigInt = d.trim().parse().map_err(|_| bad())?;
                if !den.is_positive() {
                    return Err(bad());
                }
                Ok(Rational::reduce(num, den))
            }
            None => Ok(Rational::from_integer(s.parse::<BigInt>().map_err(|_| bad())?)),
        }
    }
}
