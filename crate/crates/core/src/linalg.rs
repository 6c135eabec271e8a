//! Smith normal form, linear solving and kernels.
//!
//! Over the domains (ℤ, ℤ/p, ℤ[1/S], ℤ_(p)) everything runs on a column
//! echelon form built from 2×2 Bezout transforms. ℤ/n for composite n is
//! not a domain, so those matrices are lifted to ℤ and the modulus is
//! absorbed as extra columns `n·I`: `A·x ≡ b (mod n)` has a solution
//! exactly when `[Ã | n·I]·(x, y) = b̃` does over ℤ.

use crate::error::{same_ring, shape, Result};
use crate::matrix::Matrix;
use crate::ring::{Elem, RingSpec};

/// `u·a·v = d` with `d` diagonal, `u_inv`/`v_inv` the inverses of `u`/`v`.
#[derive(Clone, Debug)]
pub struct Snf {
    pub u: Matrix,
    pub u_inv: Matrix,
    pub d: Matrix,
    pub v: Matrix,
    pub v_inv: Matrix,
    /// The `min(rows, cols)` diagonal entries, in canonical associate form,
    /// each dividing the next. Units come first and zeros last.
    pub divisors: Vec<Elem>,
}

/// A matrix with row and column transforms tracked together with their
/// inverses: invariant `u·a·v = d`.
struct Tracked {
    d: Matrix,
    u: Matrix,
    u_inv: Matrix,
    v: Matrix,
    v_inv: Matrix,
}

impl Tracked {
    fn new(a: &Matrix) -> Tracked {
        let r = a.ring();
        Tracked {
            d: a.clone(),
            u: Matrix::identity(r, a.rows()),
            u_inv: Matrix::identity(r, a.rows()),
            v: Matrix::identity(r, a.cols()),
            v_inv: Matrix::identity(r, a.cols()),
        }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        self.d.swap_rows(a, b);
        self.u.swap_rows(a, b);
        self.u_inv.swap_cols(a, b);
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        self.d.swap_cols(a, b);
        self.v.swap_cols(a, b);
        self.v_inv.swap_rows(a, b);
    }

    fn add_row(&mut self, a: usize, b: usize, c: &Elem) {
        self.d.add_row_multiple(a, b, c);
        self.u.add_row_multiple(a, b, c);
        let nc = self.d.ring().neg(c);
        self.u_inv.add_col_multiple(b, a, &nc);
    }

    fn add_col(&mut self, a: usize, b: usize, c: &Elem) {
        self.d.add_col_multiple(a, b, c);
        self.v.add_col_multiple(a, b, c);
        let nc = self.d.ring().neg(c);
        self.v_inv.add_row_multiple(b, a, &nc);
    }

    fn combine_rows(&mut self, a: usize, b: usize, [s, t, u, v]: [&Elem; 4]) {
        let r = self.d.ring().clone();
        self.d.combine_rows(a, b, [s, t, u, v]);
        self.u.combine_rows(a, b, [s, t, u, v]);
        self.u_inv.combine_cols(a, b, [v, &r.neg(u), &r.neg(t), s]);
    }

    fn combine_cols(&mut self, a: usize, b: usize, [s, t, u, v]: [&Elem; 4]) {
        let r = self.d.ring().clone();
        self.d.combine_cols(a, b, [s, t, u, v]);
        self.v.combine_cols(a, b, [s, t, u, v]);
        self.v_inv.combine_rows(a, b, [v, &r.neg(u), &r.neg(t), s]);
    }

    fn scale_row(&mut self, i: usize, w: &Elem) {
        let r = self.d.ring().clone();
        let wi = r.inv(w).expect("scaling by a unit");
        self.d.scale_row(i, w);
        self.u.scale_row(i, w);
        self.u_inv.scale_col(i, &wi);
    }
}

/// Smith normal form over any supported ring.
pub fn snf(a: &Matrix) -> Snf {
    let ring = a.ring().clone();
    if ring.is_domain() {
        let t = snf_domain(a);
        let divisors = (0..a.rows().min(a.cols())).map(|i| t.d.get(i, i).clone()).collect();
        return Snf { u: t.u, u_inv: t.u_inv, d: t.d, v: t.v, v_inv: t.v_inv, divisors };
    }
    let lifted = snf_domain(&a.lift_to_int());
    let mut t = Tracked {
        d: lifted.d.reduce_into(&ring),
        u: lifted.u.reduce_into(&ring),
        u_inv: lifted.u_inv.reduce_into(&ring),
        v: lifted.v.reduce_into(&ring),
        v_inv: lifted.v_inv.reduce_into(&ring),
    };
    let k = a.rows().min(a.cols());
    for i in 0..k {
        let (_, w) = ring.associate(t.d.get(i, i));
        if !w.is_one() {
            t.scale_row(i, &w);
        }
    }
    let divisors = (0..k).map(|i| t.d.get(i, i).clone()).collect();
    Snf { u: t.u, u_inv: t.u_inv, d: t.d, v: t.v, v_inv: t.v_inv, divisors }
}

fn snf_domain(a: &Matrix) -> Tracked {
    let r = a.ring().clone();
    let (m, k) = a.shape();
    let mut t = Tracked::new(a);
    for p in 0..m.min(k) {
        // smallest pivot in the remaining block
        let mut best: Option<(usize, usize)> = None;
        let mut best_norm = None;
        for i in p..m {
            for j in p..k {
                let e = t.d.get(i, j);
                if e.is_zero() {
                    continue;
                }
                let n = r.norm(e);
                if best_norm.as_ref().map_or(true, |b| &n < b) {
                    best = Some((i, j));
                    best_norm = Some(n);
                }
            }
        }
        let Some((bi, bj)) = best else { break };
        t.swap_rows(p, bi);
        t.swap_cols(p, bj);
        loop {
            let mut dirty = false;
            for i in p + 1..m {
                let e = t.d.get(i, p).clone();
                if e.is_zero() {
                    continue;
                }
                let piv = t.d.get(p, p).clone();
                if let Some(q) = r.divide(&e, &piv) {
                    t.add_row(i, p, &r.neg(&q));
                } else {
                    let bz = r.bezout(&piv, &e);
                    t.combine_rows(p, i, [&bz.s, &bz.t, &bz.u, &bz.v]);
                    dirty = true;
                }
            }
            for j in p + 1..k {
                let e = t.d.get(p, j).clone();
                if e.is_zero() {
                    continue;
                }
                let piv = t.d.get(p, p).clone();
                if let Some(q) = r.divide(&e, &piv) {
                    t.add_col(j, p, &r.neg(&q));
                } else {
                    let bz = r.bezout(&piv, &e);
                    t.combine_cols(p, j, [&bz.s, &bz.t, &bz.u, &bz.v]);
                    dirty = true;
                }
            }
            if dirty {
                continue;
            }
            // row and column are clear; enforce divisibility of the rest
            let piv = t.d.get(p, p).clone();
            let offender = (p + 1..m).find(|&i| (p + 1..k).any(|j| r.divide(t.d.get(i, j), &piv).is_none()));
            match offender {
                Some(i) => t.add_row(p, i, &r.one()),
                None => break,
            }
        }
        let (_, w) = r.associate(t.d.get(p, p));
        if !w.is_one() {
            t.scale_row(p, &w);
        }
    }
    t
}

/// Column echelon form `a·v = h` over a domain: the first `rank` columns of
/// `h` have strictly increasing pivot rows with zeros above each pivot, and
/// the remaining columns are zero.
struct Echelon {
    h: Matrix,
    v: Matrix,
    pivot_rows: Vec<usize>,
}

fn echelon(a: &Matrix) -> Echelon {
    let r = a.ring().clone();
    let (m, k) = a.shape();
    let mut h = a.clone();
    let mut v = Matrix::identity(&r, k);
    let mut pivot_rows = Vec::new();
    for i in 0..m {
        let rank = pivot_rows.len();
        if rank == k {
            break;
        }
        let best = (rank..k)
            .filter(|&j| !h.get(i, j).is_zero())
            .min_by(|&x, &y| r.norm(h.get(i, x)).cmp(&r.norm(h.get(i, y))));
        let Some(best) = best else { continue };
        h.swap_cols(rank, best);
        v.swap_cols(rank, best);
        for j in rank + 1..k {
            let e = h.get(i, j).clone();
            if e.is_zero() {
                continue;
            }
            let piv = h.get(i, rank).clone();
            if let Some(q) = r.divide(&e, &piv) {
                let nq = r.neg(&q);
                h.add_col_multiple(j, rank, &nq);
                v.add_col_multiple(j, rank, &nq);
            } else {
                let bz = r.bezout(&piv, &e);
                h.combine_cols(rank, j, [&bz.s, &bz.t, &bz.u, &bz.v]);
                v.combine_cols(rank, j, [&bz.s, &bz.t, &bz.u, &bz.v]);
            }
        }
        let (_, w) = r.associate(h.get(i, rank));
        if !w.is_one() {
            h.scale_col(rank, &w);
            v.scale_col(rank, &w);
        }
        pivot_rows.push(i);
    }
    Echelon { h, v, pivot_rows }
}

fn solve_domain(a: &Matrix, b: &Matrix) -> Option<Matrix> {
    let r = a.ring().clone();
    let e = echelon(a);
    let rank = e.pivot_rows.len();
    let q = b.cols();
    let mut y = Matrix::zeros(&r, rank, q);
    for c in 0..q {
        let mut next = 0; // pivots with row < i are solved
        for i in 0..a.rows() {
            let mut res = b.get(i, c).clone();
            for j in 0..next {
                let hij = e.h.get(i, j);
                if !hij.is_zero() {
                    res = r.sub(&res, &r.mul(hij, y.get(j, c)));
                }
            }
            if next < rank && e.pivot_rows[next] == i {
                y.set(next, c, r.divide(&res, e.h.get(i, next))?);
                next += 1;
            } else if !res.is_zero() {
                return None;
            }
        }
    }
    let basis = e.v.block(0, 0, a.cols(), rank);
    Some(basis.mul(&y))
}

/// `[Ã | n·I]` over ℤ for a matrix over ℤ/n.
fn absorb_modulus(a: &Matrix) -> Matrix {
    let n = a.ring().modulus().expect("modular ring");
    let m = a.rows();
    let scaled = Matrix::identity(&RingSpec::Int, m).scale(&RingSpec::Int.from_i64(n as i64));
    Matrix::hstack(&[&a.lift_to_int(), &scaled])
}

/// Some `x` with `a·x = b`, or `None` if no solution exists over the ring.
pub fn solve(a: &Matrix, b: &Matrix) -> Result<Option<Matrix>> {
    same_ring(a.ring(), b.ring())?;
    if a.rows() != b.rows() {
        return Err(shape(format!("solve: lhs has {} rows, rhs has {}", a.rows(), b.rows())));
    }
    Ok(solve_unchecked(a, b))
}

pub(crate) fn solve_unchecked(a: &Matrix, b: &Matrix) -> Option<Matrix> {
    let ring = a.ring();
    if b.is_zero() {
        return Some(Matrix::zeros(ring, a.cols(), b.cols()));
    }
    if ring.is_domain() {
        return solve_domain(a, b);
    }
    let x = solve_domain(&absorb_modulus(a), &b.lift_to_int())?;
    Some(x.block(0, 0, a.cols(), b.cols()).reduce_into(ring))
}

/// Columns generating `{x : a·x = 0}`.
pub fn kernel(a: &Matrix) -> Matrix {
    let ring = a.ring();
    if ring.is_domain() {
        let e = echelon(a);
        let rank = e.pivot_rows.len();
        return e.v.block(0, rank, a.cols(), a.cols() - rank);
    }
    let aug = absorb_modulus(a);
    let e = echelon(&aug);
    let rank = e.pivot_rows.len();
    let k = e.v.block(0, rank, a.cols(), aug.cols() - rank);
    let reduced = k.reduce_into(ring).nonzero_cols();
    // drop repeated columns, which the lifted kernel produces freely
    let mut keep: Vec<usize> = Vec::new();
    for j in 0..reduced.cols() {
        let dup = keep.iter().any(|&i| (0..reduced.rows()).all(|t| reduced.get(t, i) == reduced.get(t, j)));
        if !dup {
            keep.push(j);
        }
    }
    reduced.select_cols(&keep)
}

/// Whether every column of `b` lies in the column span of `a`.
pub fn in_span(a: &Matrix, b: &Matrix) -> bool {
    solve_unchecked(a, b).is_some()
}

pub fn inverse(a: &Matrix) -> Option<Matrix> {
    if !a.is_square() {
        return None;
    }
    solve_unchecked(a, &Matrix::identity(a.ring(), a.rows()))
}

pub fn is_invertible(a: &Matrix) -> bool {
    inverse(a).is_some()
}

/// Rank of the image over a domain; for ℤ/n, the number of nonzero
/// elementary divisors.
pub fn rank(a: &Matrix) -> usize {
    snf(a).divisors.iter().filter(|d| !d.is_zero()).count()
}

/// A system of matrix equations `Σ L·X·R = C` in unknown matrices `X`.
/// Absent `L` or `R` factors stand for identities.
pub struct LinearSystem {
    ring: RingSpec,
    unknowns: Vec<(usize, usize)>,
    offsets: Vec<usize>,
    width: usize,
    rows: Vec<(Vec<(usize, Elem)>, Elem)>,
}

pub struct Term<'a> {
    pub left: Option<&'a Matrix>,
    pub unknown: usize,
    pub right: Option<&'a Matrix>,
}

impl<'a> Term<'a> {
    pub fn new(left: Option<&'a Matrix>, unknown: usize, right: Option<&'a Matrix>) -> Term<'a> {
        Term { left, unknown, right }
    }
}

impl LinearSystem {
    pub fn new(ring: &RingSpec) -> LinearSystem {
        LinearSystem { ring: ring.clone(), unknowns: Vec::new(), offsets: Vec::new(), width: 0, rows: Vec::new() }
    }

    /// Declares an unknown `rows × cols` matrix and returns its index.
    pub fn unknown(&mut self, rows: usize, cols: usize) -> usize {
        self.unknowns.push((rows, cols));
        self.offsets.push(self.width);
        self.width += rows * cols;
        self.unknowns.len() - 1
    }

    pub fn unknown_count(&self) -> usize {
        self.width
    }

    /// Adds `Σ terms = rhs`. Panics on inconsistent shapes.
    pub fn equation(&mut self, terms: &[Term<'_>], rhs: &Matrix) {
        let (p, q) = rhs.shape();
        let r = self.ring.clone();
        for i in 0..p {
            for j in 0..q {
                let mut coeffs: Vec<(usize, Elem)> = Vec::new();
                for t in terms {
                    let (xr, xc) = self.unknowns[t.unknown];
                    let off = self.offsets[t.unknown];
                    let lefts: Vec<(usize, Elem)> = match t.left {
                        None => vec![(i, r.one())],
                        Some(l) => {
                            assert_eq!(l.shape(), (p, xr), "left factor shape");
                            (0..xr).filter(|&a| !l.get(i, a).is_zero()).map(|a| (a, l.get(i, a).clone())).collect()
                        }
                    };
                    let rights: Vec<(usize, Elem)> = match t.right {
                        None => vec![(j, r.one())],
                        Some(m) => {
                            assert_eq!(m.shape(), (xc, q), "right factor shape");
                            (0..xc).filter(|&b| !m.get(b, j).is_zero()).map(|b| (b, m.get(b, j).clone())).collect()
                        }
                    };
                    if t.left.is_none() {
                        assert_eq!(xr, p, "unknown rows");
                    }
                    if t.right.is_none() {
                        assert_eq!(xc, q, "unknown cols");
                    }
                    for (a, la) in &lefts {
                        for (b, rb) in &rights {
                            coeffs.push((off + a * xc + b, r.mul(la, rb)));
                        }
                    }
                }
                self.rows.push((coeffs, rhs.get(i, j).clone()));
            }
        }
    }

    fn matrices(&self) -> (Matrix, Matrix) {
        let r = &self.ring;
        let mut a = Matrix::zeros(r, self.rows.len(), self.width);
        let mut b = Matrix::zeros(r, self.rows.len(), 1);
        for (i, (coeffs, rhs)) in self.rows.iter().enumerate() {
            for (c, v) in coeffs {
                let cur = r.add(a.get(i, *c), v);
                a.set(i, *c, cur);
            }
            b.set(i, 0, rhs.clone());
        }
        (a, b)
    }

    fn unpack(&self, x: &Matrix, col: usize) -> Vec<Matrix> {
        self.unknowns
            .iter()
            .zip(&self.offsets)
            .map(|(&(rows, cols), &off)| Matrix::from_fn(&self.ring, rows, cols, |i, j| x.get(off + i * cols + j, col).clone()))
            .collect()
    }

    pub fn solve(&self) -> Option<Vec<Matrix>> {
        let (a, b) = self.matrices();
        let x = solve_unchecked(&a, &b)?;
        Some(self.unpack(&x, 0))
    }

    /// Generators of the solution module of the homogeneous system.
    pub fn homogeneous_solutions(&self) -> Vec<Vec<Matrix>> {
        let (a, _) = self.matrices();
        let k = kernel(&a);
        (0..k.cols()).map(|c| self.unpack(&k, c)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::int::Int;
    use proptest::prelude::*;

    fn ints(ring: &RingSpec, v: &[Elem]) -> Vec<String> {
        let _ = ring;
        v.iter().map(|e| e.to_string()).collect()
    }

    fn check_snf(a: &Matrix) -> Snf {
        let s = snf(a);
        assert_eq!(s.u.mul(a).mul(&s.v), s.d);
        assert!(s.u.mul(&s.u_inv).is_identity());
        assert!(s.v.mul(&s.v_inv).is_identity());
        for i in 0..s.d.rows() {
            for j in 0..s.d.cols() {
                assert!(i == j || s.d.get(i, j).is_zero());
            }
        }
        let r = a.ring();
        for w in s.divisors.windows(2) {
            assert!(r.divide(&w[1], &w[0]).is_some(), "{:?} does not divide {:?}", w[0], w[1]);
        }
        s
    }

    #[test]
    fn snf_examples() {
        let z = RingSpec::Int;
        let s = check_snf(&Matrix::from_ints(&z, &[vec![2, 4], vec![6, 8]]));
        assert_eq!(ints(&z, &s.divisors), ["2", "4"]);
        let s = check_snf(&Matrix::identity(&z, 2));
        assert_eq!(ints(&z, &s.divisors), ["1", "1"]);
        assert!(s.u.is_identity() && s.v.is_identity());
        let z4 = RingSpec::int_mod(4).unwrap();
        let s = check_snf(&Matrix::from_ints(&z4, &[vec![2]]));
        assert_eq!(ints(&z4, &s.divisors), ["2"]);
        let s = check_snf(&Matrix::from_ints(&z4, &[vec![3, 2], vec![2, 0]]));
        assert_eq!(ints(&z4, &s.divisors), ["1", "0"]);
        let z5 = RingSpec::invert(&[5]).unwrap();
        let s = check_snf(&Matrix::from_ints(&z5, &[vec![10, 0], vec![0, 15]]));
        assert_eq!(ints(&z5, &s.divisors), ["1", "6"]);
    }

    #[test]
    fn solve_examples() {
        let z = RingSpec::Int;
        assert!(solve(&Matrix::from_ints(&z, &[vec![2]]), &Matrix::from_ints(&z, &[vec![3]])).unwrap().is_none());
        let z5 = RingSpec::int_mod(5).unwrap();
        let x = solve(&Matrix::from_ints(&z5, &[vec![2]]), &Matrix::from_ints(&z5, &[vec![3]])).unwrap();
        assert_eq!(x, Some(Matrix::from_ints(&z5, &[vec![4]])));
        let b = Matrix::from_ints(&z, &[vec![3, -1], vec![7, 0]]);
        assert_eq!(solve(&Matrix::identity(&z, 2), &b).unwrap(), Some(b));
        assert!(solve(&Matrix::identity(&z, 2), &Matrix::zeros(&z, 3, 1)).is_err());
    }

    #[test]
    fn kernel_examples() {
        let z = RingSpec::Int;
        let k = kernel(&Matrix::from_ints(&z, &[vec![2, -1]]));
        assert_eq!(k, Matrix::from_ints(&z, &[vec![1], vec![2]]));
        assert!(kernel(&Matrix::zeros(&z, 1, 2)).is_identity());
        assert_eq!(kernel(&Matrix::from_ints(&z, &[vec![1]])).cols(), 0);
        let z4 = RingSpec::int_mod(4).unwrap();
        let k = kernel(&Matrix::from_ints(&z4, &[vec![2]]));
        assert_eq!(k, Matrix::from_ints(&z4, &[vec![2]]));
    }

    #[test]
    fn linear_system_sylvester() {
        // X·A − A·X = 0 for A = diag(1, 2): X must be diagonal
        let z = RingSpec::Int;
        let a = Matrix::from_ints(&z, &[vec![1, 0], vec![0, 2]]);
        let na = a.neg();
        let mut sys = LinearSystem::new(&z);
        let x = sys.unknown(2, 2);
        sys.equation(&[Term::new(None, x, Some(&a)), Term::new(Some(&na), x, None)], &Matrix::zeros(&z, 2, 2));
        let sols = sys.homogeneous_solutions();
        assert_eq!(sols.len(), 2);
        for s in sols {
            assert!(s[0].get(0, 1).is_zero() && s[0].get(1, 0).is_zero());
        }
    }

    fn all_vectors(r: &RingSpec, len: usize) -> Vec<Vec<Elem>> {
        let els = r.elements().unwrap();
        let mut out = vec![vec![]];
        for _ in 0..len {
            out = out
                .into_iter()
                .flat_map(|v| els.iter().map(move |e| {
                    let mut w = v.clone();
                    w.push(e.clone());
                    w
                }))
                .collect();
        }
        out
    }

    fn arb_matrix(ring: RingSpec, max: usize, bound: i64) -> impl Strategy<Value = Matrix> {
        (1..=max, 1..=max).prop_flat_map(move |(m, n)| {
            let ring = ring.clone();
            proptest::collection::vec(-bound..=bound, m * n)
                .prop_map(move |v| Matrix::from_fn(&ring, m, n, |i, j| ring.from_i64(v[i * n + j])))
        })
    }

    fn unimodular(ring: &RingSpec, n: usize, ops: &[(usize, usize, i64)]) -> Matrix {
        let mut u = Matrix::identity(ring, n);
        for &(a, b, c) in ops {
            let (a, b) = (a % n, b % n);
            if a != b {
                u.add_row_multiple(a, b, &ring.from_i64(c));
            } else {
                u.swap_rows(a, (a + 1) % n);
            }
        }
        u
    }

    fn rings() -> Vec<RingSpec> {
        vec![
            RingSpec::Int,
            RingSpec::int_mod(4).unwrap(),
            RingSpec::int_mod(6).unwrap(),
            RingSpec::int_mod(8).unwrap(),
            RingSpec::int_mod(5).unwrap(),
            RingSpec::invert(&[5]).unwrap(),
            RingSpec::local_at(3).unwrap(),
        ]
    }

    proptest! {
        #[test]
        fn snf_postconditions(i in 0usize..7, a in arb_matrix(RingSpec::Int, 4, 9)) {
            check_snf(&a.from_int_matrix(&rings()[i]));
        }

        #[test]
        fn divisors_invariant_under_equivalence(
            i in 0usize..7,
            a in arb_matrix(RingSpec::Int, 4, 9),
            lops in proptest::collection::vec((0usize..4, 0usize..4, -3i64..=3), 0..6),
            rops in proptest::collection::vec((0usize..4, 0usize..4, -3i64..=3), 0..6),
        ) {
            let ring = rings()[i].clone();
            let a = a.from_int_matrix(&ring);
            let u = unimodular(&ring, a.rows(), &lops);
            let v = unimodular(&ring, a.cols(), &rops).transpose();
            let b = u.mul(&a).mul(&v);
            prop_assert_eq!(snf(&a).divisors, snf(&b).divisors);
        }

        #[test]
        fn solve_and_kernel_over_domains(i in 0usize..7, a in arb_matrix(RingSpec::Int, 4, 9), x in proptest::collection::vec(-5i64..=5, 4)) {
            let ring = rings()[i].clone();
            let a = a.from_int_matrix(&ring);
            let x = Matrix::from_fn(&ring, a.cols(), 1, |r, _| ring.from_i64(x[r]));
            let b = a.mul(&x);
            let sol = solve(&a, &b).unwrap().expect("consistent system");
            prop_assert_eq!(a.mul(&sol), b);
            let k = kernel(&a);
            prop_assert!(a.mul(&k).is_zero());
            // x − sol lies in the kernel span
            let diff = x.sub(&sol);
            prop_assert!(k.cols() == 0 && diff.is_zero() || in_span(&k, &diff));
        }

        #[test]
        fn solve_matches_brute_force(n in 2u64..=8, a in arb_matrix(RingSpec::Int, 3, 7), b in proptest::collection::vec(0i64..8, 3)) {
            let ring = RingSpec::int_mod(n).unwrap();
            let a = a.from_int_matrix(&ring);
            let b = Matrix::from_fn(&ring, a.rows(), 1, |r, _| ring.from_i64(b[r]));
            let brute = all_vectors(&ring, a.cols()).into_iter().any(|v| {
                let x = Matrix::new(&ring, v.len(), 1, v).unwrap();
                a.mul(&x) == b
            });
            let got = solve(&a, &b).unwrap();
            prop_assert_eq!(got.is_some(), brute);
            if let Some(x) = got {
                prop_assert_eq!(a.mul(&x), b);
            }
            let k = kernel(&a);
            prop_assert!(a.mul(&k).is_zero());
            // every brute-force kernel vector is in the span of k
            for v in all_vectors(&ring, a.cols()) {
                let x = Matrix::new(&ring, v.len(), 1, v).unwrap();
                if a.mul(&x).is_zero() && !x.is_zero() {
                    prop_assert!(in_span(&k, &x));
                }
            }
        }
    }

    #[test]
    fn big_entries_survive() {
        let z = RingSpec::Int;
        let big = Int::from(i64::MAX);
        let a = Matrix::new(&z, 1, 2, vec![z.from_int(&big), z.from_int(&(&big - &Int::ONE))]).unwrap();
        let s = check_snf(&a);
        assert_eq!(ints(&z, &s.divisors), ["1"]);
    }
}
