//! Elementwise models of small complexes over ℤ/n.
//!
//! Modules are listed element by element (at most 128 of them) and
//! subsets are bitmasks, so subcomplexes, purity (`P ∩ qM = qP` for every
//! q | n) and acyclicity can be checked by brute force, independently of
//! the linear algebra used by the library.

use std::collections::{BTreeMap, BTreeSet};

use crate::complex::{ChainComplex, Shape};
use crate::module::FPModule;

pub type Mask = u128;
pub const MAX_ELEMENTS: usize = 128;

/// `ℤ/e₀ ⊕ ⋯ ⊕ ℤ/e_k` with elements numbered in mixed radix.
#[derive(Clone, Debug)]
pub struct FinGroup {
    pub moduli: Vec<u64>,
    size: usize,
    add: Vec<u8>,
    neg: Vec<u8>,
}

impl FinGroup {
    pub fn new(moduli: Vec<u64>) -> Option<FinGroup> {
        let mut size: usize = 1;
        for &m in &moduli {
            size = size.checked_mul(m as usize)?;
            if size > MAX_ELEMENTS {
                return None;
            }
        }
        let mut g = FinGroup { moduli, size, add: Vec::new(), neg: Vec::new() };
        g.add = (0..size * size)
            .map(|k| {
                let (a, b) = (g.decode(k / size), g.decode(k % size));
                let s: Vec<u64> = a.iter().zip(&b).map(|(x, y)| x + y).collect();
                g.encode(&s) as u8
            })
            .collect();
        g.neg = (0..size)
            .map(|a| {
                let v: Vec<u64> = g.decode(a).iter().zip(&g.moduli).map(|(x, m)| (m - x) % m).collect();
                g.encode(&v) as u8
            })
            .collect();
        Some(g)
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn full(&self) -> Mask {
        if self.size == 128 {
            Mask::MAX
        } else {
            (1 << self.size) - 1
        }
    }

    pub fn decode(&self, mut k: usize) -> Vec<u64> {
        self.moduli
            .iter()
            .map(|&m| {
                let v = (k % m as usize) as u64;
                k /= m as usize;
                v
            })
            .collect()
    }

    /// Coordinates are reduced modulo the moduli.
    pub fn encode(&self, v: &[u64]) -> usize {
        let mut k = 0usize;
        for (i, &m) in self.moduli.iter().enumerate().rev() {
            let x = (v[i] % m) as usize;
            k = k * m as usize + x;
        }
        k
    }

    pub fn add(&self, a: usize, b: usize) -> usize {
        self.add[a * self.size + b] as usize
    }

    pub fn sub(&self, a: usize, b: usize) -> usize {
        self.add(a, self.neg[b] as usize)
    }

    pub fn times(&self, q: u64, a: usize) -> usize {
        let v: Vec<u64> = self.decode(a).iter().map(|x| x * q).collect();
        self.encode(&v)
    }

    /// The subgroup generated by `s` and `x`.
    pub fn join(&self, s: Mask, x: usize) -> Mask {
        let mut out = s;
        let mut frontier = s;
        loop {
            let mut next = 0;
            for a in bits(frontier) {
                let y = self.add(a, x);
                if out & (1 << y) == 0 {
                    next |= 1 << y;
                }
            }
            if next == 0 {
                return out;
            }
            out |= next;
            frontier = next;
        }
    }

    pub fn span(&self, xs: impl IntoIterator<Item = usize>) -> Mask {
        xs.into_iter().fold(1, |s, x| if s & (1 << x) != 0 { s } else { self.join(s, x) })
    }

    /// Every subgroup, or `None` past `limit`.
    pub fn subgroups(&self, limit: usize) -> Option<Vec<Mask>> {
        let mut seen: BTreeSet<Mask> = BTreeSet::new();
        let mut queue = vec![1 as Mask];
        seen.insert(1);
        while let Some(s) = queue.pop() {
            for x in 0..self.size {
                if s & (1 << x) != 0 {
                    continue;
                }
                let t = self.join(s, x);
                if seen.insert(t) {
                    if seen.len() > limit {
                        return None;
                    }
                    queue.push(t);
                }
            }
        }
        Some(seen.into_iter().collect())
    }

    pub fn multiples(&self, q: u64, s: Mask) -> Mask {
        bits(s).fold(0, |m, a| m | 1 << self.times(q, a))
    }
}

pub fn bits(mut m: Mask) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if m == 0 {
            return None;
        }
        let i = m.trailing_zeros() as usize;
        m &= m - 1;
        Some(i)
    })
}

/// A homomorphism given on elements.
#[derive(Clone, Debug)]
pub struct FinHom {
    pub table: Vec<usize>,
}

impl FinHom {
    pub fn image(&self, s: Mask) -> Mask {
        bits(s).fold(0, |m, a| m | 1 << self.table[a])
    }

    pub fn kernel_in(&self, s: Mask) -> Mask {
        bits(s).filter(|&a| self.table[a] == 0).fold(0, |m, a| m | 1 << a)
    }
}

/// The elements of a finite module, in coordinates of its diagonal form.
pub fn group_of(m: &FPModule) -> Option<(FinGroup, crate::module::Simplified)> {
    let n = m.ring().modulus()?;
    let s = m.simplify();
    let moduli = s.divisors.iter().map(|d| if d.is_zero() { n } else { d.num().to_u64().unwrap() }).collect();
    Some((FinGroup::new(moduli)?, s))
}

/// A complex of finite modules, one group per degree (per residue when periodic).
#[derive(Clone, Debug)]
pub struct FinComplex {
    pub modulus: u64,
    pub degrees: Vec<i64>,
    pub groups: BTreeMap<i64, FinGroup>,
    /// `diffs[d]`: degree d → degree d − 1 (wrapped)
    pub diffs: BTreeMap<i64, FinHom>,
    period: Option<i64>,
}

impl FinComplex {
    pub fn new(c: &ChainComplex) -> Option<FinComplex> {
        let n = c.ring().modulus()?;
        let period = match c.shape() {
            Shape::Periodic { period } => Some(period as i64),
            _ => None,
        };
        let degrees = c.degrees();
        let mut groups = BTreeMap::new();
        let mut simp = BTreeMap::new();
        for &d in &degrees {
            let (g, s) = group_of(c.module(d))?;
            groups.insert(d, g);
            simp.insert(d, s);
        }
        let mut fc = FinComplex { modulus: n, degrees: degrees.clone(), groups, diffs: BTreeMap::new(), period };
        for &d in &degrees {
            let prev = fc.key(d - 1);
            let (Some(tg), Some(ts)) = (fc.groups.get(&prev), simp.get(&prev)) else { continue };
            let m = ts.to.mul(&c.diff(d)).mul(&simp[&d].from).lift_to_int();
            let src = &fc.groups[&d];
            let table = (0..src.size())
                .map(|k| {
                    let x = src.decode(k);
                    let y: Vec<u64> = (0..m.rows())
                        .map(|i| {
                            let mut acc: i128 = 0;
                            for (j, xj) in x.iter().enumerate() {
                                acc += m.get(i, j).num().to_i64().unwrap() as i128 * *xj as i128;
                            }
                            acc.rem_euclid(tg.moduli[i] as i128) as u64
                        })
                        .collect();
                    tg.encode(&y)
                })
                .collect();
            fc.diffs.insert(d, FinHom { table });
        }
        Some(fc)
    }

    pub fn key(&self, d: i64) -> i64 {
        match self.period {
            Some(p) => d.rem_euclid(p),
            None => d,
        }
    }

    pub fn group(&self, d: i64) -> Option<&FinGroup> {
        self.groups.get(&self.key(d))
    }

    /// `∂_d(s)`, empty set semantics: `{0}` when the target is zero.
    pub fn image(&self, d: i64, s: Mask) -> Mask {
        match self.diffs.get(&self.key(d)) {
            Some(h) => h.image(s),
            None => 1,
        }
    }

    pub fn kernel(&self, d: i64, s: Mask) -> Mask {
        match self.diffs.get(&self.key(d)) {
            Some(h) => h.kernel_in(s),
            None => s,
        }
    }

    pub fn divisors(&self) -> Vec<u64> {
        (2..=self.modulus).filter(|q| self.modulus % q == 0).collect()
    }

    pub fn whole(&self) -> Sub {
        Sub { masks: self.degrees.iter().map(|&d| (d, self.groups[&d].full())).collect() }
    }

    /// Every subcomplex, or `None` past `limit`.
    pub fn subcomplexes(&self, limit: usize) -> Option<Vec<Sub>> {
        let mut per = Vec::new();
        for &d in &self.degrees {
            per.push(self.groups[&d].subgroups(limit)?);
        }
        let mut out = Vec::new();
        let mut cur: Vec<Mask> = Vec::new();
        self.extend(&per, &mut cur, &mut out, limit)?;
        Some(out)
    }

    fn extend(&self, per: &[Vec<Mask>], cur: &mut Vec<Mask>, out: &mut Vec<Sub>, limit: usize) -> Option<()> {
        let k = cur.len();
        if k == self.degrees.len() {
            let sub = Sub { masks: self.degrees.iter().copied().zip(cur.iter().copied()).collect() };
            // closing condition for the wrap-around of a periodic complex
            if self.period.is_some() && !self.closed(&sub) {
                return Some(());
            }
            out.push(sub);
            return if out.len() > limit { None } else { Some(()) };
        }
        let d = self.degrees[k];
        for &s in &per[k] {
            if k > 0 && self.image(d, s) & !cur[k - 1] != 0 {
                continue;
            }
            cur.push(s);
            let r = self.extend(per, cur, out, limit);
            cur.pop();
            r?;
        }
        Some(())
    }

    pub fn closed(&self, s: &Sub) -> bool {
        self.degrees.iter().all(|&d| {
            let prev = self.key(d - 1);
            match s.masks.get(&prev) {
                Some(&p) => self.image(d, s.masks[&d]) & !p == 0,
                None => self.image(d, s.masks[&d]) == 1,
            }
        })
    }

    fn get(&self, s: &Sub, d: i64) -> Mask {
        s.masks.get(&self.key(d)).copied().unwrap_or(1)
    }

    pub fn is_acyclic(&self, s: &Sub) -> bool {
        self.degrees.iter().all(|&d| self.kernel(d, self.get(s, d)) == self.image(d + 1, self.get(s, d + 1)))
    }

    /// `P ∩ qQ = qP` for every q | n, degreewise: `P` is pure in `Q`.
    pub fn is_pure_in(&self, p: &Sub, q: &Sub) -> bool {
        self.degrees.iter().all(|&d| {
            let g = &self.groups[&d];
            let (pm, qm) = (self.get(p, d), self.get(q, d));
            self.divisors().into_iter().all(|k| pm & g.multiples(k, qm) == g.multiples(k, pm))
        })
    }

    /// Acyclic, with every cycle module pure in its degree.
    pub fn is_pure_acyclic(&self, s: &Sub) -> bool {
        if !self.is_acyclic(s) {
            return false;
        }
        let cycles = Sub { masks: self.degrees.iter().map(|&d| (d, self.kernel(d, self.get(s, d)))).collect() };
        self.is_pure_in(&cycles, s)
    }

    pub fn is_zero(&self, s: &Sub) -> bool {
        s.masks.values().all(|&m| m == 1)
    }
}

/// A subcomplex: one subgroup per degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Sub {
    pub masks: BTreeMap<i64, Mask>,
}

/// Searches of subcomplexes with a property, `None` when over the limit.
pub struct Oracle {
    pub fc: FinComplex,
    pub subs: Vec<Sub>,
}

pub const SUB_LIMIT: usize = 20_000;

impl Oracle {
    pub fn new(c: &ChainComplex) -> Option<Oracle> {
        let fc = FinComplex::new(c)?;
        let subs = fc.subcomplexes(SUB_LIMIT)?;
        Some(Oracle { fc, subs })
    }

    pub fn nonzero(&self) -> impl Iterator<Item = &Sub> {
        self.subs.iter().filter(|s| !self.fc.is_zero(s))
    }

    /// A nonzero pure-acyclic degreewise pure subcomplex.
    pub fn pure_acyclic_pure_sub(&self) -> Option<&Sub> {
        let all = self.fc.whole();
        self.nonzero().find(|s| self.fc.is_pure_in(s, &all) && self.fc.is_pure_acyclic(s))
    }

    /// A nonzero acyclic degreewise pure subcomplex.
    pub fn acyclic_pure_sub(&self) -> Option<&Sub> {
        let all = self.fc.whole();
        self.nonzero().find(|s| self.fc.is_pure_in(s, &all) && self.fc.is_acyclic(s))
    }

    /// A nonzero acyclic subcomplex.
    pub fn acyclic_sub(&self) -> Option<&Sub> {
        self.nonzero().find(|s| self.fc.is_acyclic(s))
    }

    pub fn is_pure_minimal(&self) -> bool {
        self.pure_acyclic_pure_sub().is_none()
    }
}

/// Minimality of a free complex over ℤ/n by brute force: some
/// `1 + ∂σ + σ∂` is singular. `None` when the search is too large.
pub fn brute_force_minimal(c: &ChainComplex, budget: usize) -> Option<bool> {
    let n = c.ring().modulus()?;
    if !c.is_visibly_free() {
        return None;
    }
    let ints = |m: &crate::matrix::Matrix| -> Vec<Vec<u64>> {
        (0..m.rows()).map(|i| (0..m.cols()).map(|j| m.get(i, j).num().to_u64().unwrap()).collect()).collect()
    };
    for i in c.degrees() {
        let k = c.gens(i);
        if k == 0 {
            continue;
        }
        let din = ints(&c.diff(i)); // k_{i-1} × k
        let dout = ints(&c.diff(i + 1)); // k × k_{i+1}
        let (a, b) = (c.gens(i - 1), c.gens(i + 1));
        // the set {∂σ_i + σ_{i−1}∂} is the sum of two subgroups of End(Rᵏ)
        let left = subgroup_of_products(n, k, b, |s, out| mul_into(n, &dout, s, k, b, k, out), budget)?;
        let right = subgroup_of_products(n, a, k, |s, out| mul_into(n, s, &din, k, a, k, out), budget)?;
        if left.len().checked_mul(right.len())? > budget {
            return None;
        }
        for x in &left {
            for y in &right {
                let mut e = vec![0u64; k * k];
                for t in 0..k * k {
                    e[t] = (x[t] + y[t]) % n;
                }
                for t in 0..k {
                    e[t * k + t] = (e[t * k + t] + 1) % n;
                }
                if !unit_det(n, &e, k) {
                    return Some(false);
                }
            }
        }
    }
    Some(true)
}

/// Distinct values of a linear map on all `rows × cols` matrices over ℤ/n.
fn subgroup_of_products(
    n: u64,
    rows: usize,
    cols: usize,
    f: impl Fn(&[u64], &mut Vec<u64>),
    budget: usize,
) -> Option<BTreeSet<Vec<u64>>> {
    let cells = rows * cols;
    let total = (n as usize).checked_pow(cells as u32)?;
    if total > budget {
        return None;
    }
    let mut out = BTreeSet::new();
    let mut s = vec![0u64; cells];
    let mut buf = Vec::new();
    for mut k in 0..total {
        for v in s.iter_mut() {
            *v = (k % n as usize) as u64;
            k /= n as usize;
        }
        f(&s, &mut buf);
        out.insert(buf.clone());
    }
    Some(out)
}

/// `out = x·y` for row-major `x` (r×m) and `y` (m×c), as given by the
/// caller's shapes: here `x` is either a matrix of rows or a flat buffer.
fn mul_into<X: Cells + ?Sized, Y: Cells + ?Sized>(n: u64, x: &X, y: &Y, r: usize, m: usize, c: usize, out: &mut Vec<u64>) {
    out.clear();
    out.resize(r * c, 0);
    for i in 0..r {
        for j in 0..c {
            let mut acc = 0u64;
            for t in 0..m {
                acc = (acc + x.at(i, t, m) * y.at(t, j, c)) % n;
            }
            out[i * c + j] = acc;
        }
    }
}

trait Cells {
    fn at(&self, i: usize, j: usize, cols: usize) -> u64;
}

impl Cells for [u64] {
    fn at(&self, i: usize, j: usize, cols: usize) -> u64 {
        self[i * cols + j]
    }
}

impl Cells for Vec<Vec<u64>> {
    fn at(&self, i: usize, j: usize, _: usize) -> u64 {
        self[i][j]
    }
}

/// Whether the determinant of a k×k matrix over ℤ/n is a unit.
fn unit_det(n: u64, e: &[u64], k: usize) -> bool {
    // Leibniz over permutations is fine for k ≤ 4
    let mut perm: Vec<usize> = (0..k).collect();
    let mut det: i128 = 0;
    loop {
        let mut sign = 1i128;
        for a in 0..k {
            for b in a + 1..k {
                if perm[a] > perm[b] {
                    sign = -sign;
                }
            }
        }
        let mut p: i128 = sign;
        for (row, &col) in perm.iter().enumerate() {
            p = (p * e[row * k + col] as i128).rem_euclid(n as i128);
        }
        det = (det + p).rem_euclid(n as i128);
        if !next_permutation(&mut perm) {
            break;
        }
    }
    gcd(det as u64, n) == 1
}

fn next_permutation(p: &mut [usize]) -> bool {
    if p.len() < 2 {
        return false;
    }
    let mut i = p.len() - 1;
    while i > 0 && p[i - 1] >= p[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = p.len() - 1;
    while p[j] <= p[i - 1] {
        j -= 1;
    }
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}
