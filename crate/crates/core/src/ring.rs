//! The four supported base rings and canonical arithmetic on their elements.
//!
//! All rings here are quotients or localizations of ℤ, so an element is
//! stored as a reduced fraction `num/den` of [`Int`]s. For `Int` and
//! `IntMod` the denominator is always 1 and `IntMod` residues live in
//! `[0, n)`; for the localizations the fraction is reduced with `den > 0`.
//! Canonical forms make equality plain structural equality.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::int::Int;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum RingSpec {
    /// The integers.
    Int,
    /// ℤ/n for n ≥ 2.
    IntMod(u64),
    /// ℤ[1/S] for a finite nonempty set S of primes, stored sorted.
    IntInvert(Arc<[u64]>),
    /// ℤ localized at the prime ideal (p).
    IntLocalAt(u64),
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Elem {
    num: Int,
    den: Int,
}

impl Elem {
    pub fn num(&self) -> &Int {
        &self.num
    }

    pub fn den(&self) -> &Int {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    fn integral(num: Int) -> Elem {
        Elem { num, den: Int::ONE }
    }
}

impl fmt::Display for Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

impl fmt::Debug for Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Integers for ℤ and ℤ/n, `[num, den]` pairs for the localizations.
impl serde::Serialize for Elem {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        if self.den.is_one() {
            self.num.serialize(s)
        } else {
            (&self.num, &self.den).serialize(s)
        }
    }
}

pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d.saturating_mul(d) <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Prime factorization by trial division, as `(p, k)` pairs in increasing order.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d.saturating_mul(d) <= n {
        if n % d == 0 {
            let mut k = 0;
            while n % d == 0 {
                n /= d;
                k += 1;
            }
            out.push((d, k));
        }
        d += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// Positive divisors of `n` in increasing order.
pub fn divisors_of(n: u64) -> Vec<u64> {
    let mut ds = vec![1u64];
    for (p, k) in factorize(n) {
        let prev = ds.clone();
        let mut pk = 1;
        for _ in 0..k {
            pk *= p;
            ds.extend(prev.iter().map(|d| d * pk));
        }
    }
    ds.sort_unstable();
    ds
}

/// Bezout data for a pair `(a, b)`: `s·a + t·b = g` and `u·a + v·b = 0`,
/// with `s·v − t·u = 1`, so the 2×2 matrix `[[s, t], [u, v]]` is invertible.
#[derive(Clone, Debug)]
pub struct Bezout {
    pub g: Elem,
    pub s: Elem,
    pub t: Elem,
    pub u: Elem,
    pub v: Elem,
}

impl RingSpec {
    pub fn int_mod(n: u64) -> Result<RingSpec> {
        if n < 2 {
            return Err(Error::InvalidRing(format!("modulus must be at least 2, got {n}")));
        }
        if n > (1 << 31) {
            return Err(Error::InvalidRing(format!("modulus {n} is too large")));
        }
        Ok(RingSpec::IntMod(n))
    }

    pub fn invert(primes: &[u64]) -> Result<RingSpec> {
        let mut ps = primes.to_vec();
        ps.sort_unstable();
        for w in ps.windows(2) {
            if w[0] == w[1] {
                return Err(Error::InvalidRing(format!("prime {} listed twice", w[0])));
            }
        }
        if ps.is_empty() {
            return Ok(RingSpec::Int);
        }
        if let Some(&p) = ps.iter().find(|&&p| !is_prime(p)) {
            return Err(Error::InvalidRing(format!("{p} is not prime")));
        }
        Ok(RingSpec::IntInvert(ps.into()))
    }

    pub fn local_at(p: u64) -> Result<RingSpec> {
        if !is_prime(p) {
            return Err(Error::InvalidRing(format!("{p} is not prime")));
        }
        Ok(RingSpec::IntLocalAt(p))
    }

    pub fn is_domain(&self) -> bool {
        match self {
            RingSpec::IntMod(n) => is_prime(*n),
            _ => true,
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, RingSpec::IntMod(_))
    }

    pub fn modulus(&self) -> Option<u64> {
        match self {
            RingSpec::IntMod(n) => Some(*n),
            _ => None,
        }
    }

    /// Local rings: ℤ/p^k and ℤ_(p).
    pub fn is_local(&self) -> bool {
        match self {
            RingSpec::IntMod(n) => factorize(*n).len() == 1,
            RingSpec::IntLocalAt(_) => true,
            _ => false,
        }
    }

    /// ℤ/n is von Neumann regular exactly when n is squarefree.
    pub fn is_von_neumann_regular(&self) -> bool {
        match self {
            RingSpec::IntMod(n) => factorize(*n).iter().all(|&(_, k)| k == 1),
            _ => false,
        }
    }

    /// All elements, for finite rings.
    pub fn elements(&self) -> Option<Vec<Elem>> {
        self.modulus().map(|n| (0..n as i64).map(|k| Elem::integral(Int::from(k))).collect())
    }

    pub fn zero(&self) -> Elem {
        Elem::integral(Int::ZERO)
    }

    pub fn one(&self) -> Elem {
        Elem::integral(Int::ONE)
    }

    pub fn from_i64(&self, v: i64) -> Elem {
        self.from_int(&Int::from(v))
    }

    pub fn from_int(&self, v: &Int) -> Elem {
        match self {
            RingSpec::IntMod(n) => Elem::integral(v.rem_euclid(&Int::from(*n))),
            _ => Elem::integral(v.clone()),
        }
    }

    /// Builds `num/den`, failing if `den` is not invertible in the ring.
    pub fn fraction(&self, num: &Int, den: &Int) -> Result<Elem> {
        if den.is_zero() {
            return Err(Error::InvalidElement("zero denominator".into()));
        }
        match self {
            RingSpec::Int => {
                if den.divides(num) {
                    Ok(Elem::integral(num.div_exact(den)))
                } else {
                    Err(Error::InvalidElement(format!("{num}/{den} is not an integer")))
                }
            }
            RingSpec::IntMod(_) => {
                let d = self.from_int(den);
                let inv = self
                    .inv(&d)
                    .ok_or_else(|| Error::InvalidElement(format!("{den} is not a unit in {self}")))?;
                Ok(self.mul(&self.from_int(num), &inv))
            }
            _ => self
                .normalize(num.clone(), den.clone())
                .ok_or_else(|| Error::InvalidElement(format!("{num}/{den} is not in {self}"))),
        }
    }

    /// Reduces a fraction for a localization, or `None` if the reduced
    /// denominator is not allowed.
    fn normalize(&self, num: Int, den: Int) -> Option<Elem> {
        if num.is_zero() {
            return Some(self.zero());
        }
        let g = num.gcd(&den);
        let (mut num, mut den) = if g.is_one() { (num, den) } else { (num.div_exact(&g), den.div_exact(&g)) };
        if den.is_negative() {
            num = -num;
            den = -den;
        }
        let ok = match self {
            RingSpec::IntInvert(ps) => den.strip_primes(ps).is_one(),
            RingSpec::IntLocalAt(p) => !Int::from(*p as i64).divides(&den),
            RingSpec::Int => den.is_one(),
            RingSpec::IntMod(_) => unreachable!(),
        };
        ok.then_some(Elem { num, den })
    }

    /// Checks that a value is in canonical form for this ring.
    pub fn contains(&self, e: &Elem) -> bool {
        match self {
            RingSpec::Int => e.den.is_one(),
            RingSpec::IntMod(n) => e.den.is_one() && !e.num.is_negative() && e.num < Int::from(*n),
            _ => self.normalize(e.num.clone(), e.den.clone()).as_ref() == Some(e),
        }
    }

    pub fn add(&self, a: &Elem, b: &Elem) -> Elem {
        if a.den.is_one() && b.den.is_one() {
            return self.from_int(&(&a.num + &b.num));
        }
        let num = &(&a.num * &b.den) + &(&b.num * &a.den);
        self.normalize(num, &a.den * &b.den).expect("closed under addition")
    }

    pub fn neg(&self, a: &Elem) -> Elem {
        match self {
            RingSpec::IntMod(_) => self.from_int(&-&a.num),
            _ => Elem { num: -&a.num, den: a.den.clone() },
        }
    }

    pub fn sub(&self, a: &Elem, b: &Elem) -> Elem {
        self.add(a, &self.neg(b))
    }

    pub fn mul(&self, a: &Elem, b: &Elem) -> Elem {
        if a.den.is_one() && b.den.is_one() {
            return self.from_int(&(&a.num * &b.num));
        }
        self.normalize(&a.num * &b.num, &a.den * &b.den).expect("closed under multiplication")
    }

    pub fn is_unit(&self, a: &Elem) -> bool {
        match self {
            RingSpec::Int => a.num.abs().is_one(),
            RingSpec::IntMod(n) => a.num.gcd(&Int::from(*n)).is_one(),
            RingSpec::IntInvert(ps) => !a.num.is_zero() && a.num.strip_primes(ps).abs().is_one(),
            RingSpec::IntLocalAt(p) => !a.num.is_zero() && !Int::from(*p as i64).divides(&a.num),
        }
    }

    pub fn inv(&self, a: &Elem) -> Option<Elem> {
        if !self.is_unit(a) {
            return None;
        }
        match self {
            RingSpec::Int => Some(a.clone()),
            RingSpec::IntMod(n) => {
                let (_, s, _) = a.num.ext_gcd(&Int::from(*n));
                Some(self.from_int(&s))
            }
            _ => self.normalize(a.den.clone(), a.num.clone()),
        }
    }

    /// Some `c` with `b·c = a`, if one exists.
    pub fn divide(&self, a: &Elem, b: &Elem) -> Option<Elem> {
        if a.is_zero() {
            return Some(self.zero());
        }
        if b.is_zero() {
            return None;
        }
        match self {
            RingSpec::Int => b.num.divides(&a.num).then(|| Elem::integral(a.num.div_exact(&b.num))),
            RingSpec::IntMod(n) => {
                let n = Int::from(*n);
                let g = b.num.gcd(&n);
                if !g.divides(&a.num) {
                    return None;
                }
                let m = n.div_exact(&g);
                let (_, s, _) = b.num.div_exact(&g).ext_gcd(&m);
                let c = (&a.num.div_exact(&g) * &s).rem_euclid(&m);
                Some(self.from_int(&c))
            }
            _ => self.normalize(&a.num * &b.den, &a.den * &b.num),
        }
    }

    /// Returns `(c, u)` with `u` a unit and `a·u = c` the canonical associate:
    /// nonnegative for ℤ, `gcd(a, n)` for ℤ/n, the S-free part of the
    /// numerator for ℤ[1/S], and `p^v` for ℤ_(p).
    pub fn associate(&self, a: &Elem) -> (Elem, Elem) {
        if a.is_zero() {
            return (self.zero(), self.one());
        }
        match self {
            RingSpec::Int => {
                let u = if a.num.is_negative() { -1 } else { 1 };
                (Elem::integral(a.num.abs()), self.from_i64(u))
            }
            RingSpec::IntMod(n) => {
                let n = *n as i128;
                let x = a.num.to_i64().expect("residue fits") as i128;
                let g = gcd_i128(x, n);
                let m = n / g;
                let unit = if m == 1 {
                    1
                } else {
                    let xp = (x / g).rem_euclid(m);
                    let mut u = inv_mod_i128(xp, m);
                    while gcd_i128(u, n) != 1 {
                        u += m;
                    }
                    u
                };
                (self.from_int(&Int::from(g as i64)), self.from_int(&Int::from(unit as i64)))
            }
            RingSpec::IntInvert(ps) => {
                let c = a.num.strip_primes(ps).abs();
                let u = self.divide(&Elem::integral(c.clone()), a).expect("unit ratio");
                (Elem::integral(c), u)
            }
            RingSpec::IntLocalAt(p) => {
                let v = a.num.valuation(*p);
                let c = Int::from(*p as i64).pow(v);
                let u = self.divide(&Elem::integral(c.clone()), a).expect("unit ratio");
                (Elem::integral(c), u)
            }
        }
    }

    /// Size used for pivot selection. Smaller is closer to a unit; units
    /// have size 1 and zero has size 0.
    pub fn norm(&self, a: &Elem) -> Int {
        if a.is_zero() {
            return Int::ZERO;
        }
        match self {
            RingSpec::Int => a.num.abs(),
            RingSpec::IntMod(n) => a.num.gcd(&Int::from(*n)),
            _ => self.associate(a).0.num,
        }
    }

    pub fn bezout(&self, a: &Elem, b: &Elem) -> Bezout {
        if b.is_zero() {
            if a.is_zero() {
                return Bezout { g: self.zero(), s: self.one(), t: self.zero(), u: self.zero(), v: self.one() };
            }
            return Bezout { g: a.clone(), s: self.one(), t: self.zero(), u: self.zero(), v: self.one() };
        }
        if !matches!(self, RingSpec::IntMod(_)) {
            if let Some(q) = self.divide(b, a) {
                // b = q·a: a already generates (a, b)
                return Bezout { g: a.clone(), s: self.one(), t: self.zero(), u: self.neg(&q), v: self.one() };
            }
        }
        // Work on integer numerators; denominators are units.
        let (g, x, y) = a.num.ext_gcd(&b.num);
        let s = self.fraction(&(&x * &a.den), &Int::ONE).unwrap();
        let t = self.fraction(&(&y * &b.den), &Int::ONE).unwrap();
        let u = self.fraction(&-&b.num.div_exact(&g), &b.den).unwrap();
        let v = self.fraction(&a.num.div_exact(&g), &a.den).unwrap();
        Bezout { g: self.from_int(&g), s, t, u, v }
    }

    /// An integer lift of an `IntMod` residue or an `Int` value.
    pub fn lift(&self, a: &Elem) -> Int {
        debug_assert!(a.den.is_one());
        a.num.clone()
    }

    /// Parses an integer literal into the ring.
    pub fn parse_elem(&self, s: &str) -> Result<Elem> {
        let s = s.trim();
        let (n, d) = match s.split_once('/') {
            Some((n, d)) => (n, d),
            None => (s, "1"),
        };
        let n = Int::from_str(n).map_err(|_| Error::InvalidElement(format!("cannot parse {s:?}")))?;
        let d = Int::from_str(d).map_err(|_| Error::InvalidElement(format!("cannot parse {s:?}")))?;
        self.fraction(&n, &d)
    }
}

fn gcd_i128(mut a: i128, mut b: i128) -> i128 {
    a = a.abs();
    b = b.abs();
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

fn inv_mod_i128(a: i128, m: i128) -> i128 {
    let (mut r0, mut r1, mut s0, mut s1) = (a, m, 1i128, 0i128);
    while r1 != 0 {
        let q = r0.div_euclid(r1);
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
    }
    s0.rem_euclid(m)
}

impl fmt::Display for RingSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RingSpec::Int => write!(f, "Z"),
            RingSpec::IntMod(n) => write!(f, "Z/{n}"),
            RingSpec::IntInvert(ps) => {
                let inv: Vec<String> = ps.iter().map(|p| format!("1/{p}")).collect();
                write!(f, "Z[{}]", inv.join(","))
            }
            RingSpec::IntLocalAt(p) => write!(f, "Z_({p})"),
        }
    }
}

impl FromStr for RingSpec {
    type Err = Error;

    /// Accepts `Z`, `Z/n`, `Z[1/p,1/q]` and `Z_(p)`.
    fn from_str(s: &str) -> Result<RingSpec> {
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let bad = || Error::InvalidRing(format!("cannot parse ring {s:?}"));
        let num = |x: &str| x.parse::<u64>().map_err(|_| bad());
        if t == "Z" {
            return Ok(RingSpec::Int);
        }
        if let Some(n) = t.strip_prefix("Z/") {
            return RingSpec::int_mod(num(n)?);
        }
        if let Some(inner) = t.strip_prefix("Z[").and_then(|r| r.strip_suffix(']')) {
            let ps = inner
                .split(',')
                .map(|part| part.strip_prefix("1/").ok_or_else(bad).and_then(num))
                .collect::<Result<Vec<_>>>()?;
            return RingSpec::invert(&ps);
        }
        if let Some(p) = t.strip_prefix("Z_(").and_then(|r| r.strip_suffix(')')) {
            return RingSpec::local_at(num(p)?);
        }
        Err(bad())
    }
}

impl serde::Serialize for RingSpec {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> serde::Deserialize<'de> for RingSpec {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
