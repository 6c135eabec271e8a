//! Test-side oracles. Nothing here calls into the library's linear algebra:
//! finite modules are handled element by element, integer matrices through
//! i128 determinants.

#![allow(dead_code)]

use std::collections::{BTreeSet, HashSet};

use puremin::{FPModule, Matrix, RingSpec, SesModules};

pub fn entry_u64(m: &Matrix, i: usize, j: usize, n: u64) -> u64 {
    let x = m.ring().lift(m.get(i, j)).to_i64().expect("small entry");
    x.rem_euclid(n as i64) as u64
}

pub fn entry_i128(m: &Matrix, i: usize, j: usize) -> i128 {
    m.ring().lift(m.get(i, j)).to_i64().expect("small entry") as i128
}

/// `(ℤ/n)^g` modulo the span of some vectors, element by element.
pub struct Quotient {
    pub n: u64,
    pub g: usize,
    span: HashSet<Vec<u64>>,
}

impl Quotient {
    pub fn new(n: u64, g: usize, rels: &[Vec<u64>]) -> Quotient {
        let mut span: HashSet<Vec<u64>> = HashSet::new();
        let mut frontier = vec![vec![0; g]];
        span.insert(vec![0; g]);
        while let Some(v) = frontier.pop() {
            for r in rels {
                let w: Vec<u64> = v.iter().zip(r).map(|(a, b)| (a + b) % n).collect();
                if span.insert(w.clone()) {
                    frontier.push(w);
                }
            }
        }
        Quotient { n, g, span }
    }

    pub fn of(m: &FPModule) -> Quotient {
        let n = m.ring().modulus().expect("finite ring");
        let rel = m.relations();
        let rels: Vec<Vec<u64>> = (0..rel.cols()).map(|j| (0..rel.rows()).map(|i| entry_u64(rel, i, j, n)).collect()).collect();
        Quotient::new(n, m.gens(), &rels)
    }

    pub fn is_zero(&self, v: &[u64]) -> bool {
        self.span.contains(v)
    }

    pub fn eq(&self, a: &[u64], b: &[u64]) -> bool {
        let d: Vec<u64> = a.iter().zip(b).map(|(x, y)| (x + self.n - y) % self.n).collect();
        self.is_zero(&d)
    }

    /// Every vector of `(ℤ/n)^g`, odometer order.
    pub fn vectors(&self) -> Vec<Vec<u64>> {
        let mut out = vec![vec![]];
        for _ in 0..self.g {
            out = out.into_iter().flat_map(|v| (0..self.n).map(move |x| [v.clone(), vec![x]].concat())).collect();
        }
        out
    }

    /// One representative per element.
    pub fn elements(&self) -> Vec<Vec<u64>> {
        let mut seen: BTreeSet<Vec<u64>> = BTreeSet::new();
        let mut reps = Vec::new();
        for v in self.vectors() {
            let canon = self.span.iter().map(|s| v.iter().zip(s).map(|(a, b)| (a + b) % self.n).collect::<Vec<_>>()).min().unwrap();
            if seen.insert(canon) {
                reps.push(v);
            }
        }
        reps
    }

    pub fn order(&self) -> usize {
        (self.n as usize).pow(self.g as u32) / self.span.len()
    }
}

fn apply(images: &[Vec<u64>], v: &[u64], n: u64, width: usize) -> Vec<u64> {
    let mut out = vec![0; width];
    for (x, img) in v.iter().zip(images) {
        for (o, y) in out.iter_mut().zip(img) {
            *o = (*o + x * y) % n;
        }
    }
    out
}

/// Whether some homomorphism `M → L` composes with the inclusion to the
/// identity of `L`, found by trying every assignment of generator images.
pub fn retraction_by_enumeration(s: &SesModules) -> bool {
    let (l, m) = (s.left(), s.middle());
    let n = m.ring().modulus().expect("finite ring");
    let ql = Quotient::of(l);
    let lelems = ql.elements();
    let inj = s.inj.matrix();
    let inj_cols: Vec<Vec<u64>> = (0..l.gens()).map(|j| (0..m.gens()).map(|i| entry_u64(inj, i, j, n)).collect()).collect();
    let mrel = m.relations();
    let mrels: Vec<Vec<u64>> = (0..mrel.cols()).map(|j| (0..m.gens()).map(|i| entry_u64(mrel, i, j, n)).collect()).collect();
    let unit = |j: usize| (0..l.gens()).map(|i| u64::from(i == j)).collect::<Vec<u64>>();
    let mut choice = vec![0usize; m.gens()];
    loop {
        let images: Vec<Vec<u64>> = choice.iter().map(|&k| lelems[k].clone()).collect();
        let well_defined = mrels.iter().all(|r| ql.is_zero(&apply(&images, r, n, l.gens())));
        if well_defined && (0..l.gens()).all(|j| ql.eq(&apply(&images, &inj_cols[j], n, l.gens()), &unit(j))) {
            return true;
        }
        // next assignment
        let mut k = 0;
        loop {
            if k == choice.len() {
                return false;
            }
            choice[k] += 1;
            if choice[k] < lelems.len() {
                break;
            }
            choice[k] = 0;
            k += 1;
        }
    }
}

/// Determinant by cofactor expansion.
pub fn det(m: &[Vec<i128>]) -> i128 {
    let k = m.len();
    if k == 0 {
        return 1;
    }
    if k == 1 {
        return m[0][0];
    }
    (0..k)
        .map(|j| {
            let minor: Vec<Vec<i128>> = m[1..].iter().map(|row| [&row[..j], &row[j + 1..]].concat()).collect();
            let sign = if j % 2 == 0 { 1 } else { -1 };
            sign * m[0][j] * det(&minor)
        })
        .sum()
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    if n < k {
        return vec![];
    }
    let mut out = subsets(n - 1, k);
    for mut s in subsets(n - 1, k - 1) {
        s.push(n - 1);
        out.push(s);
    }
    out
}

fn gcd(a: i128, b: i128) -> i128 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

/// gcd of all k×k minors.
pub fn minors_gcd(a: &[Vec<i128>], k: usize) -> i128 {
    let (rows, cols) = (a.len(), a.first().map_or(0, Vec::len));
    let mut g = 0;
    for rs in subsets(rows, k) {
        for cs in subsets(cols, k) {
            let sub: Vec<Vec<i128>> = rs.iter().map(|&i| cs.iter().map(|&j| a[i][j]).collect()).collect();
            g = gcd(g, det(&sub));
        }
    }
    g
}

pub fn rank(a: &[Vec<i128>]) -> usize {
    let (rows, cols) = (a.len(), a.first().map_or(0, Vec::len));
    (1..=rows.min(cols)).rev().find(|&k| minors_gcd(a, k) != 0).unwrap_or(0)
}

/// Over ℤ, `ℤ^g / col(A)` is torsion-free exactly when the gcd of the
/// rank-size minors is 1 (that gcd is the product of the invariant factors).
/// Returns `None` for the zero module.
pub fn int_module_torsion_free(m: &FPModule) -> Option<bool> {
    let rel = m.relations();
    let a: Vec<Vec<i128>> = (0..rel.rows()).map(|i| (0..rel.cols()).map(|j| entry_i128(rel, i, j)).collect()).collect();
    let r = rank(&a);
    let torsion_free = r == 0 || minors_gcd(&a, r) == 1;
    if r == m.gens() && torsion_free {
        return None;
    }
    Some(torsion_free)
}

pub fn rings() -> [RingSpec; 3] {
    [RingSpec::Int, RingSpec::int_mod(4).unwrap(), RingSpec::invert(&[5]).unwrap()]
}
