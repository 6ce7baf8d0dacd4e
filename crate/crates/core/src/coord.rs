//! Exact rational coordinates.
//!
//! Values live in a 128-bit ratio while they fit and are promoted to a
//! big-integer ratio when an operation would overflow. Every value has a
//! single canonical representation, so equality and hashing are structural.

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::{BigRational, Ratio};
use num_traits::{CheckedAdd, CheckedDiv, CheckedMul, CheckedSub, One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

const SMALL_LIMIT: i128 = 1 << 120;

#[derive(Clone)]
enum Repr {
    Small(Ratio<i128>),
    Big(BigRational),
}

/// An exact rational number.
#[derive(Clone)]
pub struct Coord(Repr);

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("cannot parse `{0}` as an exact number")]
pub struct ParseCoordError(pub String);

fn fits(v: &BigInt) -> Option<i128> {
    let x = v.to_i128()?;
    if x.abs() < SMALL_LIMIT {
        Some(x)
    } else {
        None
    }
}

impl Coord {
    fn small(r: Ratio<i128>) -> Coord {
        if r.numer().abs() < SMALL_LIMIT && *r.denom() < SMALL_LIMIT {
            Coord(Repr::Small(r))
        } else {
            Coord::big(BigRational::new(BigInt::from(*r.numer()), BigInt::from(*r.denom())))
        }
    }

    fn big(r: BigRational) -> Coord {
        match (fits(r.numer()), fits(r.denom())) {
            (Some(n), Some(d)) => Coord(Repr::Small(Ratio::new_raw(n, d))),
            _ => Coord(Repr::Big(r)),
        }
    }

    fn to_big(&self) -> BigRational {
        match &self.0 {
            Repr::Small(r) => BigRational::new_raw(BigInt::from(*r.numer()), BigInt::from(*r.denom())),
            Repr::Big(b) => b.clone(),
        }
    }

    pub fn zero() -> Coord {
        Coord(Repr::Small(Ratio::from_integer(0)))
    }

    pub fn one() -> Coord {
        Coord(Repr::Small(Ratio::from_integer(1)))
    }

    pub fn int(v: i64) -> Coord {
        Coord(Repr::Small(Ratio::from_integer(v as i128)))
    }

    /// `n / d`; panics when `d == 0`.
    pub fn frac(n: i64, d: i64) -> Coord {
        assert!(d != 0, "zero denominator");
        Coord::small(Ratio::new(n as i128, d as i128))
    }

    pub fn from_big(n: BigInt, d: BigInt) -> Coord {
        assert!(!d.is_zero(), "zero denominator");
        Coord::big(BigRational::new(n, d))
    }

    /// `2^k` for any integer `k`.
    pub fn pow2(k: i32) -> Coord {
        let p = BigInt::one() << (k.unsigned_abs() as usize);
        if k >= 0 {
            Coord::big(BigRational::from_integer(p))
        } else {
            Coord::big(BigRational::new(BigInt::one(), p))
        }
    }

    pub fn numer(&self) -> BigInt {
        match &self.0 {
            Repr::Small(r) => BigInt::from(*r.numer()),
            Repr::Big(b) => b.numer().clone(),
        }
    }

    pub fn denom(&self) -> BigInt {
        match &self.0 {
            Repr::Small(r) => BigInt::from(*r.denom()),
            Repr::Big(b) => b.denom().clone(),
        }
    }

    pub fn is_zero(&self) -> bool {
        match &self.0 {
            Repr::Small(r) => r.is_zero(),
            Repr::Big(b) => b.is_zero(),
        }
    }

    pub fn signum(&self) -> i32 {
        match &self.0 {
            Repr::Small(r) => r.numer().signum() as i32,
            Repr::Big(b) => match b.numer().sign() {
                Sign::Minus => -1,
                Sign::NoSign => 0,
                Sign::Plus => 1,
            },
        }
    }

    pub fn is_positive(&self) -> bool {
        self.signum() > 0
    }

    pub fn is_negative(&self) -> bool {
        self.signum() < 0
    }

    pub fn abs(&self) -> Coord {
        if self.is_negative() {
            -self
        } else {
            self.clone()
        }
    }

    pub fn half(&self) -> Coord {
        self / &Coord::int(2)
    }

    pub fn is_integer(&self) -> bool {
        match &self.0 {
            Repr::Small(r) => r.is_integer(),
            Repr::Big(b) => b.is_integer(),
        }
    }

    pub fn floor(&self) -> BigInt {
        self.to_big().floor().to_integer()
    }

    pub fn ceil(&self) -> BigInt {
        self.to_big().ceil().to_integer()
    }

    pub fn to_f64(&self) -> f64 {
        match &self.0 {
            Repr::Small(r) => *r.numer() as f64 / *r.denom() as f64,
            Repr::Big(b) => {
                let n = b.numer().to_f64().unwrap_or(f64::NAN);
                let d = b.denom().to_f64().unwrap_or(f64::NAN);
                if n.is_finite() && d.is_finite() {
                    n / d
                } else {
                    let shift = b.denom().bits().max(b.numer().bits()) as i64 - 900;
                    let shift = shift.max(0) as usize;
                    let n = (b.numer() >> shift).to_f64().unwrap_or(0.0);
                    let d = (b.denom() >> shift).to_f64().unwrap_or(1.0);
                    n / d
                }
            }
        }
    }

    /// Closest dyadic value `m / 2^bits` to an `f64`, used only for test inputs.
    pub fn from_f64_dyadic(v: f64, bits: u32) -> Coord {
        let scale = (1u64 << bits) as f64;
        Coord::big(BigRational::new(
            BigInt::from((v * scale).round() as i128),
            BigInt::from(1u64 << bits),
        ))
    }

    pub fn min(self, other: Coord) -> Coord {
        if other < self {
            other
        } else {
            self
        }
    }

    pub fn max(self, other: Coord) -> Coord {
        if other > self {
            other
        } else {
            self
        }
    }

    /// Exact test of `r <= log2(x)`; `None` when the refinement budget runs out
    /// before the two values separate.
    pub fn le_log2(r: &Coord, x: &Coord) -> Option<bool> {
        if !x.is_positive() {
            return Some(false);
        }
        let x = x.to_big();
        let two = BigRational::from_integer(BigInt::from(2));
        // k = floor(log2 x), y = x / 2^k in [1, 2)
        let mut k: i64 = 0;
        let mut y = x;
        while y >= two {
            y /= two.clone();
            k += 1;
        }
        while y < BigRational::one() {
            y *= two.clone();
            k -= 1;
        }
        let r = r.to_big();
        let kb = BigRational::from_integer(BigInt::from(k));
        if y.is_one() {
            return Some(r <= kb);
        }
        if r <= kb {
            return Some(true);
        }
        if r >= kb.clone() + BigRational::one() {
            return Some(false);
        }
        // log2(y) lies in [lo, lo + 2^-m); refine by repeated squaring on a
        // fixed-point enclosure of y.
        const P: usize = 320;
        let scale = BigInt::one() << P;
        let two_fp = BigInt::from(2) << P;
        let mut ylo = (y.numer() << P) / y.denom();
        let mut yhi = ((y.numer() << P) + y.denom() - BigInt::one()) / y.denom();
        let mut lo = kb;
        let mut width = BigRational::one();
        for _ in 0..120 {
            ylo = (&ylo * &ylo) >> P;
            yhi = ((&yhi * &yhi) + &scale - BigInt::one()) >> P;
            width /= two.clone();
            if ylo >= two_fp {
                ylo >>= 1;
                yhi = (yhi + BigInt::one()) >> 1;
                lo += width.clone();
            } else if yhi >= two_fp {
                return None;
            }
            if r <= lo {
                return Some(true);
            }
            if r >= lo.clone() + width.clone() {
                return Some(false);
            }
        }
        None
    }

    /// Exact decimal if the denominator has only factors 2 and 5, otherwise `p/q`.
    pub fn to_exact_string(&self) -> String {
        let n = self.numer();
        let d = self.denom();
        if d.is_one() {
            return n.to_string();
        }
        let mut rest = d.clone();
        let mut twos = 0u32;
        let mut fives = 0u32;
        let two = BigInt::from(2);
        let five = BigInt::from(5);
        while rest.is_multiple_of(&two) {
            rest /= &two;
            twos += 1;
        }
        while rest.is_multiple_of(&five) {
            rest /= &five;
            fives += 1;
        }
        if !rest.is_one() {
            return format!("{}/{}", n, d);
        }
        let digits = twos.max(fives);
        let scaled = &n * num_traits::pow(BigInt::from(10), digits as usize) / &d;
        let neg = scaled.is_negative();
        let s = scaled.abs().to_string();
        let s = format!("{:0>width$}", s, width = digits as usize + 1);
        let (ip, fp) = s.split_at(s.len() - digits as usize);
        format!("{}{}.{}", if neg { "-" } else { "" }, ip, fp)
    }
}

impl FromStr for Coord {
    type Err = ParseCoordError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || ParseCoordError(s.to_string());
        let t = s.trim();
        if let Some((n, d)) = t.split_once('/') {
            let n = BigInt::from_str(n.trim()).map_err(|_| err())?;
            let d = BigInt::from_str(d.trim()).map_err(|_| err())?;
            if d.is_zero() {
                return Err(err());
            }
            return Ok(Coord::from_big(n, d));
        }
        let (mant, exp) = match t.find(['e', 'E']) {
            Some(i) => (&t[..i], t[i + 1..].parse::<i32>().map_err(|_| err())?),
            None => (t, 0),
        };
        let (neg, body) = match mant.strip_prefix('-') {
            Some(b) => (true, b),
            None => (false, mant.strip_prefix('+').unwrap_or(mant)),
        };
        let (ip, fp) = body.split_once('.').unwrap_or((body, ""));
        if ip.is_empty() && fp.is_empty() {
            return Err(err());
        }
        if !ip.chars().chain(fp.chars()).all(|c| c.is_ascii_digit()) {
            return Err(err());
        }
        let digits = format!("{}{}", ip, fp);
        let mut n = BigInt::from_str(if digits.is_empty() { "0" } else { &digits }).map_err(|_| err())?;
        if neg {
            n = -n;
        }
        let scale = exp - fp.len() as i32;
        let ten = BigInt::from(10);
        if scale >= 0 {
            Ok(Coord::from_big(n * num_traits::pow(ten, scale as usize), BigInt::one()))
        } else {
            Ok(Coord::from_big(n, num_traits::pow(ten, (-scale) as usize)))
        }
    }
}

impl fmt::Display for Coord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_exact_string())
    }
}

impl fmt::Debug for Coord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_exact_string())
    }
}

impl Serialize for Coord {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_exact_string())
    }
}

impl<'de> Deserialize<'de> for Coord {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

impl PartialEq for Coord {
    fn eq(&self, other: &Self) -> bool {
        match (&self.0, &other.0) {
            (Repr::Small(a), Repr::Small(b)) => a.numer() == b.numer() && a.denom() == b.denom(),
            (Repr::Big(a), Repr::Big(b)) => a == b,
            _ => false,
        }
    }
}

impl Eq for Coord {}

impl Hash for Coord {
    fn hash<H: Hasher>(&self, state: &mut H) {
        match &self.0 {
            Repr::Small(r) => {
                0u8.hash(state);
                r.numer().hash(state);
                r.denom().hash(state);
            }
            Repr::Big(b) => {
                1u8.hash(state);
                b.numer().hash(state);
                b.denom().hash(state);
            }
        }
    }
}

impl PartialOrd for Coord {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Coord {
    fn cmp(&self, other: &Self) -> Ordering {
        match (&self.0, &other.0) {
            (Repr::Small(a), Repr::Small(b)) => a.cmp(b),
            _ => self.to_big().cmp(&other.to_big()),
        }
    }
}

macro_rules! binop {
    ($tr:ident, $m:ident, $checked:ident, $op:tt) => {
        impl<'a> $tr<&'a Coord> for &'a Coord {
            type Output = Coord;
            fn $m(self, rhs: &'a Coord) -> Coord {
                if let (Repr::Small(a), Repr::Small(b)) = (&self.0, &rhs.0) {
                    if let Some(r) = a.$checked(b) {
                        return Coord::small(r);
                    }
                }
                Coord::big(self.to_big() $op rhs.to_big())
            }
        }
        impl $tr<Coord> for Coord {
            type Output = Coord;
            fn $m(self, rhs: Coord) -> Coord {
                (&self).$m(&rhs)
            }
        }
        impl<'a> $tr<&'a Coord> for Coord {
            type Output = Coord;
            fn $m(self, rhs: &'a Coord) -> Coord {
                (&self).$m(rhs)
            }
        }
        impl<'a> $tr<Coord> for &'a Coord {
            type Output = Coord;
            fn $m(self, rhs: Coord) -> Coord {
                self.$m(&rhs)
            }
        }
    };
}

binop!(Add, add, checked_add, +);
binop!(Sub, sub, checked_sub, -);
binop!(Mul, mul, checked_mul, *);

impl<'a> Div<&'a Coord> for &'a Coord {
    type Output = Coord;
    fn div(self, rhs: &'a Coord) -> Coord {
        assert!(!rhs.is_zero(), "division by zero");
        if let (Repr::Small(a), Repr::Small(b)) = (&self.0, &rhs.0) {
            if let Some(r) = a.checked_div(b) {
                return Coord::small(r);
            }
        }
        Coord::big(self.to_big() / rhs.to_big())
    }
}

impl Div<Coord> for Coord {
    type Output = Coord;
    fn div(self, rhs: Coord) -> Coord {
        &self / &rhs
    }
}

impl<'a> Div<&'a Coord> for Coord {
    type Output = Coord;
    fn div(self, rhs: &'a Coord) -> Coord {
        &self / rhs
    }
}

impl Div<Coord> for &Coord {
    type Output = Coord;
    fn div(self, rhs: Coord) -> Coord {
        self / &rhs
    }
}

impl Neg for &Coord {
    type Output = Coord;
    fn neg(self) -> Coord {
        match &self.0 {
            Repr::Small(r) => Coord(Repr::Small(-*r)),
            Repr::Big(b) => Coord::big(-b.clone()),
        }
    }
}

impl Neg for Coord {
    type Output = Coord;
    fn neg(self) -> Coord {
        -&self
    }
}

impl From<i64> for Coord {
    fn from(v: i64) -> Coord {
        Coord::int(v)
    }
}

impl Default for Coord {
    fn default() -> Self {
        Coord::zero()
    }
}

impl std::iter::Sum for Coord {
    fn sum<I: Iterator<Item = Coord>>(iter: I) -> Coord {
        iter.fold(Coord::zero(), |a, b| a + b)
    }
}
