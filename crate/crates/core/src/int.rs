//! Arbitrary-precision integers with an inline fast path.
//!
//! `num_bigint::BigInt` heap-allocates every nonzero value, which dominates
//! the cost of exact elimination on the small entries this crate sees in
//! practice. [`Int`] keeps values that fit in an `i64` inline and only
//! promotes to a `BigInt` on overflow.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// An integer. Values representable as `i64` are always stored `Small`, so
/// derived equality and hashing are representation-independent.
#[derive(Clone, PartialEq, Eq, Hash)]
pub enum Int {
    Small(i64),
    Big(BigInt),
}

impl Int {
    pub const ZERO: Int = Int::Small(0);
    pub const ONE: Int = Int::Small(1);

    fn from_big(b: BigInt) -> Int {
        match b.to_i64() {
            Some(v) => Int::Small(v),
            None => Int::Big(b),
        }
    }

    fn from_i128(v: i128) -> Int {
        match i64::try_from(v) {
            Ok(s) => Int::Small(s),
            Err(_) => Int::Big(BigInt::from(v)),
        }
    }

    pub fn to_bigint(&self) -> BigInt {
        match self {
            Int::Small(v) => BigInt::from(*v),
            Int::Big(b) => b.clone(),
        }
    }

    pub fn to_i64(&self) -> Option<i64> {
        match self {
            Int::Small(v) => Some(*v),
            Int::Big(_) => None,
        }
    }

    pub fn to_u64(&self) -> Option<u64> {
        match self {
            Int::Small(v) if *v >= 0 => Some(*v as u64),
            _ => None,
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Int::Small(0))
    }

    pub fn is_one(&self) -> bool {
        matches!(self, Int::Small(1))
    }

    pub fn signum(&self) -> i32 {
        match self {
            Int::Small(v) => v.signum() as i32,
            Int::Big(b) => {
                if b.is_negative() {
                    -1
                } else {
                    1
                }
            }
        }
    }

    pub fn is_negative(&self) -> bool {
        self.signum() < 0
    }

    pub fn abs(&self) -> Int {
        if self.is_negative() {
            -self
        } else {
            self.clone()
        }
    }

    /// Floor division and the matching nonnegative-when-divisor-positive
    /// remainder. Panics on a zero divisor.
    pub fn div_mod_floor(&self, other: &Int) -> (Int, Int) {
        match (self, other) {
            (Int::Small(a), Int::Small(b)) if *b != 0 => {
                let (a, b) = (*a as i128, *b as i128);
                let q = a.div_euclid(b);
                let r = a.rem_euclid(b);
                // div_euclid keeps r >= 0; convert to floor semantics for b < 0
                let (q, r) = if b < 0 && r != 0 { (q - 1, r + b) } else { (q, r) };
                (Int::from_i128(q), Int::from_i128(r))
            }
            _ => {
                let (q, r) = self.to_bigint().div_mod_floor(&other.to_bigint());
                (Int::from_big(q), Int::from_big(r))
            }
        }
    }

    /// Remainder in `[0, |m|)`.
    pub fn rem_euclid(&self, m: &Int) -> Int {
        match (self, m) {
            (Int::Small(a), Int::Small(b)) if *b != 0 => {
                Int::from_i128((*a as i128).rem_euclid(*b as i128))
            }
            _ => {
                let mb = m.to_bigint().abs();
                let r = self.to_bigint().mod_floor(&mb);
                Int::from_big(r)
            }
        }
    }

    /// Exact quotient; the caller guarantees divisibility.
    pub fn div_exact(&self, other: &Int) -> Int {
        match (self, other) {
            (Int::Small(a), Int::Small(b)) if *b != 0 => Int::from_i128(*a as i128 / *b as i128),
            _ => Int::from_big(self.to_bigint() / other.to_bigint()),
        }
    }

    pub fn divides(&self, other: &Int) -> bool {
        if self.is_zero() {
            return other.is_zero();
        }
        other.rem_euclid(self).is_zero()
    }

    /// Nonnegative gcd.
    pub fn gcd(&self, other: &Int) -> Int {
        match (self, other) {
            (Int::Small(a), Int::Small(b)) => {
                let (mut a, mut b) = ((*a as i128).abs(), (*b as i128).abs());
                while b != 0 {
                    let t = a % b;
                    a = b;
                    b = t;
                }
                Int::from_i128(a)
            }
            _ => Int::from_big(self.to_bigint().gcd(&other.to_bigint())),
        }
    }

    /// Returns `(g, s, t)` with `s*self + t*other = g = gcd >= 0`.
    pub fn ext_gcd(&self, other: &Int) -> (Int, Int, Int) {
        match (self, other) {
            (Int::Small(a), Int::Small(b)) => {
                let (mut r0, mut r1) = (*a as i128, *b as i128);
                let (mut s0, mut s1) = (1i128, 0i128);
                let (mut t0, mut t1) = (0i128, 1i128);
                while r1 != 0 {
                    let q = r0.div_euclid(r1);
                    (r0, r1) = (r1, r0 - q * r1);
                    (s0, s1) = (s1, s0 - q * s1);
                    (t0, t1) = (t1, t0 - q * t1);
                }
                if r0 < 0 {
                    (r0, s0, t0) = (-r0, -s0, -t0);
                }
                (Int::from_i128(r0), Int::from_i128(s0), Int::from_i128(t0))
            }
            _ => {
                let e = self.to_bigint().extended_gcd(&other.to_bigint());
                let (mut g, mut s, mut t) = (e.gcd, e.x, e.y);
                if g.is_negative() {
                    g = -g;
                    s = -s;
                    t = -t;
                }
                (Int::from_big(g), Int::from_big(s), Int::from_big(t))
            }
        }
    }

    pub fn pow(&self, e: u32) -> Int {
        let mut acc = Int::ONE;
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Exponent of the prime `p` in `self` (which must be nonzero).
    pub fn valuation(&self, p: u64) -> u32 {
        let p = Int::from(p as i64);
        let mut v = 0;
        let mut x = self.clone();
        while !x.is_zero() && p.divides(&x) {
            x = x.div_exact(&p);
            v += 1;
        }
        v
    }

    /// Removes every factor of the given primes.
    pub fn strip_primes(&self, primes: &[u64]) -> Int {
        let mut x = self.clone();
        if x.is_zero() {
            return x;
        }
        for &p in primes {
            let p = Int::from(p as i64);
            while p.divides(&x) {
                x = x.div_exact(&p);
            }
        }
        x
    }
}

impl Default for Int {
    fn default() -> Self {
        Int::ZERO
    }
}

impl From<i64> for Int {
    fn from(v: i64) -> Self {
        Int::Small(v)
    }
}

impl From<i32> for Int {
    fn from(v: i32) -> Self {
        Int::Small(v as i64)
    }
}

impl From<u64> for Int {
    fn from(v: u64) -> Self {
        Int::from_i128(v as i128)
    }
}

impl From<BigInt> for Int {
    fn from(b: BigInt) -> Self {
        Int::from_big(b)
    }
}

impl Ord for Int {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Int::Small(a), Int::Small(b)) => a.cmp(b),
            _ => self.to_bigint().cmp(&other.to_bigint()),
        }
    }
}

impl PartialOrd for Int {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Add for &Int {
    type Output = Int;
    fn add(self, rhs: &Int) -> Int {
        if let (Int::Small(a), Int::Small(b)) = (self, rhs) {
            if let Some(c) = a.checked_add(*b) {
                return Int::Small(c);
            }
        }
        Int::from_big(self.to_bigint() + rhs.to_bigint())
    }
}

impl Sub for &Int {
    type Output = Int;
    fn sub(self, rhs: &Int) -> Int {
        if let (Int::Small(a), Int::Small(b)) = (self, rhs) {
            if let Some(c) = a.checked_sub(*b) {
                return Int::Small(c);
            }
        }
        Int::from_big(self.to_bigint() - rhs.to_bigint())
    }
}

impl Mul for &Int {
    type Output = Int;
    fn mul(self, rhs: &Int) -> Int {
        if let (Int::Small(a), Int::Small(b)) = (self, rhs) {
            if let Some(c) = a.checked_mul(*b) {
                return Int::Small(c);
            }
        }
        Int::from_big(self.to_bigint() * rhs.to_bigint())
    }
}

impl Neg for &Int {
    type Output = Int;
    fn neg(self) -> Int {
        match self {
            Int::Small(v) => match v.checked_neg() {
                Some(n) => Int::Small(n),
                None => Int::from_big(-BigInt::from(*v)),
            },
            Int::Big(b) => Int::from_big(-b.clone()),
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for Int {
            type Output = Int;
            fn $m(self, rhs: Int) -> Int {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&Int> for Int {
            type Output = Int;
            fn $m(self, rhs: &Int) -> Int {
                (&self).$m(rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for Int {
    type Output = Int;
    fn neg(self) -> Int {
        -&self
    }
}

impl Zero for Int {
    fn zero() -> Self {
        Int::ZERO
    }
    fn is_zero(&self) -> bool {
        Int::is_zero(self)
    }
}

impl One for Int {
    fn one() -> Self {
        Int::ONE
    }
}

impl fmt::Display for Int {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Int::Small(v) => write!(f, "{v}"),
            Int::Big(b) => write!(f, "{b}"),
        }
    }
}

impl fmt::Debug for Int {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Int {
    type Err = num_bigint::ParseBigIntError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(Int::from_big(BigInt::from_str(s.trim())?))
    }
}

/// Serialized as a JSON number when it fits in `i64`, else as a decimal string.
impl serde::Serialize for Int {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Int::Small(v) => s.serialize_i64(*v),
            Int::Big(b) => s.collect_str(b),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn overflow_promotes() {
        let a = Int::from(i64::MAX);
        let b = &a + &Int::ONE;
        assert!(matches!(b, Int::Big(_)));
        let c = &b - &Int::ONE;
        assert_eq!(c, a);
        assert!(matches!(c, Int::Small(_)));
        let sq = &a * &a;
        assert_eq!(sq.to_string(), "85070591730234615847396907784232501249");
        assert_eq!(-Int::from(i64::MIN), Int::from_str("9223372036854775808").unwrap());
    }

    #[test]
    fn floor_semantics() {
        assert_eq!(Int::from(-7).div_mod_floor(&Int::from(2)), (Int::from(-4), Int::from(1)));
        assert_eq!(Int::from(7).div_mod_floor(&Int::from(-2)), (Int::from(-4), Int::from(-1)));
        assert_eq!(Int::from(-7).rem_euclid(&Int::from(4)), Int::from(1));
    }

    #[test]
    fn valuations() {
        assert_eq!(Int::from(40).valuation(2), 3);
        assert_eq!(Int::from(-75).strip_primes(&[5]), Int::from(-3));
    }

    proptest! {
        #[test]
        fn ext_gcd_is_bezout(a in -10_000i64..10_000, b in -10_000i64..10_000) {
            let (a, b) = (Int::from(a), Int::from(b));
            let (g, s, t) = a.ext_gcd(&b);
            prop_assert_eq!(&(&s * &a) + &(&t * &b), g.clone());
            prop_assert_eq!(g, a.gcd(&b));
        }

        #[test]
        fn small_and_big_paths_agree(a in any::<i64>(), b in any::<i64>()) {
            let (x, y) = (Int::from(a), Int::from(b));
            let (bx, by) = (BigInt::from(a), BigInt::from(b));
            prop_assert_eq!((&x + &y).to_bigint(), &bx + &by);
            prop_assert_eq!((&x * &y).to_bigint(), &bx * &by);
            prop_assert_eq!((&x - &y).to_bigint(), &bx - &by);
            if b != 0 {
                let (q, r) = x.div_mod_floor(&y);
                let (bq, br) = bx.div_mod_floor(&by);
                prop_assert_eq!(q.to_bigint(), bq);
                prop_assert_eq!(r.to_bigint(), br);
            }
        }
    }
}
