//! Dense matrices over a [`RingSpec`].
//!
//! Shape mismatches in the arithmetic helpers are programming errors and
//! panic; constructors that take external data validate and return errors.

use std::fmt;

use crate::error::{Error, Result};
use crate::int::Int;
use crate::ring::{Elem, RingSpec};

#[derive(Clone, PartialEq, Eq)]
pub struct Matrix {
    ring: RingSpec,
    rows: usize,
    cols: usize,
    data: Vec<Elem>,
}

impl Matrix {
    pub fn new(ring: &RingSpec, rows: usize, cols: usize, data: Vec<Elem>) -> Result<Matrix> {
        if data.len() != rows * cols {
            return Err(Error::Shape(format!("{rows}x{cols} matrix given {} entries", data.len())));
        }
        if let Some(e) = data.iter().find(|e| !ring.contains(e)) {
            return Err(Error::InvalidElement(format!("{e:?} is not a canonical element of {ring}")));
        }
        Ok(Matrix { ring: ring.clone(), rows, cols, data })
    }

    pub fn zeros(ring: &RingSpec, rows: usize, cols: usize) -> Matrix {
        Matrix { ring: ring.clone(), rows, cols, data: vec![ring.zero(); rows * cols] }
    }

    pub fn identity(ring: &RingSpec, n: usize) -> Matrix {
        let mut m = Matrix::zeros(ring, n, n);
        for i in 0..n {
            m.data[i * n + i] = ring.one();
        }
        m
    }

    /// Builds a matrix from integer rows, reducing into the ring.
    pub fn from_ints(ring: &RingSpec, rows: &[Vec<i64>]) -> Matrix {
        let cols = rows.first().map_or(0, |r| r.len());
        assert!(rows.iter().all(|r| r.len() == cols), "ragged rows");
        let data = rows.iter().flatten().map(|&v| ring.from_i64(v)).collect();
        Matrix { ring: ring.clone(), rows: rows.len(), cols, data }
    }

    pub fn from_fn(ring: &RingSpec, rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Elem) -> Matrix {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { ring: ring.clone(), rows, cols, data }
    }

    pub fn diagonal(ring: &RingSpec, rows: usize, cols: usize, diag: &[Elem]) -> Matrix {
        let mut m = Matrix::zeros(ring, rows, cols);
        for (i, d) in diag.iter().enumerate() {
            m.set(i, i, d.clone());
        }
        m
    }

    pub fn ring(&self) -> &RingSpec {
        &self.ring
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn get(&self, i: usize, j: usize) -> &Elem {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Elem) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Elem] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn entries(&self) -> &[Elem] {
        &self.data
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Elem::is_zero)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn is_identity(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| (0..self.cols).all(|j| {
                let e = self.get(i, j);
                if i == j { e.is_one() } else { e.is_zero() }
            }))
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.ring, other.ring, "ring mismatch in product");
        assert_eq!(self.cols, other.rows, "shape mismatch in product {:?}·{:?}", self.shape(), other.shape());
        let (n, m, k) = (self.rows, self.cols, other.cols);
        let r = &self.ring;
        let integral = matches!(r, RingSpec::Int | RingSpec::IntMod(_));
        let mut data = Vec::with_capacity(n * k);
        for i in 0..n {
            let row = self.row(i);
            for j in 0..k {
                if integral {
                    let mut acc = Int::ZERO;
                    for (t, a) in row.iter().enumerate() {
                        if a.is_zero() {
                            continue;
                        }
                        let b = other.get(t, j);
                        if !b.is_zero() {
                            acc = &acc + &(a.num() * b.num());
                        }
                    }
                    data.push(r.from_int(&acc));
                } else {
                    let mut acc = r.zero();
                    for (t, a) in row.iter().enumerate().take(m) {
                        if a.is_zero() {
                            continue;
                        }
                        let b = other.get(t, j);
                        if !b.is_zero() {
                            acc = r.add(&acc, &r.mul(a, b));
                        }
                    }
                    data.push(acc);
                }
            }
        }
        Matrix { ring: r.clone(), rows: n, cols: k, data }
    }

    fn zip(&self, other: &Matrix, f: impl Fn(&RingSpec, &Elem, &Elem) -> Elem) -> Matrix {
        assert_eq!(self.ring, other.ring, "ring mismatch");
        assert_eq!(self.shape(), other.shape(), "shape mismatch");
        let data = self.data.iter().zip(&other.data).map(|(a, b)| f(&self.ring, a, b)).collect();
        Matrix { ring: self.ring.clone(), rows: self.rows, cols: self.cols, data }
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        self.zip(other, |r, a, b| r.add(a, b))
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        self.zip(other, |r, a, b| r.sub(a, b))
    }

    pub fn neg(&self) -> Matrix {
        self.map(|r, a| r.neg(a))
    }

    pub fn scale(&self, c: &Elem) -> Matrix {
        self.map(|r, a| r.mul(c, a))
    }

    pub fn map(&self, f: impl Fn(&RingSpec, &Elem) -> Elem) -> Matrix {
        let data = self.data.iter().map(|a| f(&self.ring, a)).collect();
        Matrix { ring: self.ring.clone(), rows: self.rows, cols: self.cols, data }
    }

    pub fn transpose(&self) -> Matrix {
        Matrix::from_fn(&self.ring, self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    /// Kronecker product `self ⊗ other`.
    pub fn kron(&self, other: &Matrix) -> Matrix {
        let r = &self.ring;
        let (p, q) = other.shape();
        Matrix::from_fn(r, self.rows * p, self.cols * q, |i, j| {
            r.mul(self.get(i / p, j / q), other.get(i % p, j % q))
        })
    }

    pub fn hstack(blocks: &[&Matrix]) -> Matrix {
        let first = blocks.first().expect("at least one block");
        let rows = first.rows;
        assert!(blocks.iter().all(|b| b.rows == rows), "hstack row mismatch");
        let cols = blocks.iter().map(|b| b.cols).sum();
        let mut m = Matrix::zeros(&first.ring, rows, cols);
        let mut off = 0;
        for b in blocks {
            m.put(0, off, b);
            off += b.cols;
        }
        m
    }

    pub fn vstack(blocks: &[&Matrix]) -> Matrix {
        let first = blocks.first().expect("at least one block");
        let cols = first.cols;
        assert!(blocks.iter().all(|b| b.cols == cols), "vstack column mismatch");
        let rows = blocks.iter().map(|b| b.rows).sum();
        let mut m = Matrix::zeros(&first.ring, rows, cols);
        let mut off = 0;
        for b in blocks {
            m.put(off, 0, b);
            off += b.rows;
        }
        m
    }

    pub fn block_diag(ring: &RingSpec, blocks: &[&Matrix]) -> Matrix {
        let rows = blocks.iter().map(|b| b.rows).sum();
        let cols = blocks.iter().map(|b| b.cols).sum();
        let mut m = Matrix::zeros(ring, rows, cols);
        let (mut r0, mut c0) = (0, 0);
        for b in blocks {
            m.put(r0, c0, b);
            r0 += b.rows;
            c0 += b.cols;
        }
        m
    }

    /// Overwrites the block starting at `(r0, c0)` with `b`.
    pub fn put(&mut self, r0: usize, c0: usize, b: &Matrix) {
        assert!(r0 + b.rows <= self.rows && c0 + b.cols <= self.cols, "block out of range");
        for i in 0..b.rows {
            for j in 0..b.cols {
                self.set(r0 + i, c0 + j, b.get(i, j).clone());
            }
        }
    }

    pub fn block(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Matrix {
        Matrix::from_fn(&self.ring, rows, cols, |i, j| self.get(r0 + i, c0 + j).clone())
    }

    pub fn select_rows(&self, idx: &[usize]) -> Matrix {
        Matrix::from_fn(&self.ring, idx.len(), self.cols, |i, j| self.get(idx[i], j).clone())
    }

    pub fn select_cols(&self, idx: &[usize]) -> Matrix {
        Matrix::from_fn(&self.ring, self.rows, idx.len(), |i, j| self.get(i, idx[j]).clone())
    }

    pub fn column(&self, j: usize) -> Matrix {
        self.select_cols(&[j])
    }

    /// Drops zero columns.
    pub fn nonzero_cols(&self) -> Matrix {
        let keep: Vec<usize> = (0..self.cols).filter(|&j| (0..self.rows).any(|i| !self.get(i, j).is_zero())).collect();
        self.select_cols(&keep)
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    pub fn swap_cols(&mut self, a: usize, b: usize) {
        if a != b {
            for i in 0..self.rows {
                self.data.swap(i * self.cols + a, i * self.cols + b);
            }
        }
    }

    /// Row `a` ← row `a` + c·row `b`.
    pub fn add_row_multiple(&mut self, a: usize, b: usize, c: &Elem) {
        if c.is_zero() {
            return;
        }
        for j in 0..self.cols {
            let x = self.get(b, j);
            if !x.is_zero() {
                let v = self.ring.add(self.get(a, j), &self.ring.mul(c, x));
                self.set(a, j, v);
            }
        }
    }

    /// Column `a` ← column `a` + c·column `b`.
    pub fn add_col_multiple(&mut self, a: usize, b: usize, c: &Elem) {
        if c.is_zero() {
            return;
        }
        for i in 0..self.rows {
            let x = self.get(i, b);
            if !x.is_zero() {
                let v = self.ring.add(self.get(i, a), &self.ring.mul(c, x));
                self.set(i, a, v);
            }
        }
    }

    pub fn scale_row(&mut self, i: usize, c: &Elem) {
        for j in 0..self.cols {
            let v = self.ring.mul(c, self.get(i, j));
            self.set(i, j, v);
        }
    }

    pub fn scale_col(&mut self, j: usize, c: &Elem) {
        for i in 0..self.rows {
            let v = self.ring.mul(c, self.get(i, j));
            self.set(i, j, v);
        }
    }

    /// Rows `(a, b)` ← `[[s, t], [u, v]]·(a, b)`.
    pub fn combine_rows(&mut self, a: usize, b: usize, [s, t, u, v]: [&Elem; 4]) {
        let r = self.ring.clone();
        for j in 0..self.cols {
            let (x, y) = (self.get(a, j).clone(), self.get(b, j).clone());
            if x.is_zero() && y.is_zero() {
                continue;
            }
            self.set(a, j, r.add(&r.mul(s, &x), &r.mul(t, &y)));
            self.set(b, j, r.add(&r.mul(u, &x), &r.mul(v, &y)));
        }
    }

    /// Columns `(a, b)` ← `(a, b)·[[s, u], [t, v]]`, i.e. new `a = s·a + t·b`
    /// and new `b = u·a + v·b`.
    pub fn combine_cols(&mut self, a: usize, b: usize, [s, t, u, v]: [&Elem; 4]) {
        let r = self.ring.clone();
        for i in 0..self.rows {
            let (x, y) = (self.get(i, a).clone(), self.get(i, b).clone());
            if x.is_zero() && y.is_zero() {
                continue;
            }
            self.set(i, a, r.add(&r.mul(s, &x), &r.mul(t, &y)));
            self.set(i, b, r.add(&r.mul(u, &x), &r.mul(v, &y)));
        }
    }

    /// Reinterprets an `IntMod` or `Int` matrix as integers in `[0, n)`.
    pub fn lift_to_int(&self) -> Matrix {
        let data = self.data.iter().map(|e| RingSpec::Int.from_int(e.num())).collect();
        Matrix { ring: RingSpec::Int, rows: self.rows, cols: self.cols, data }
    }

    /// Reduces an integral matrix (over ℤ or ℤ/m) into `target` = ℤ/n,
    /// where n must divide m in the second case.
    pub fn reduce_into(&self, target: &RingSpec) -> Matrix {
        let data = self.data.iter().map(|e| target.from_int(e.num())).collect();
        Matrix { ring: target.clone(), rows: self.rows, cols: self.cols, data }
    }

    /// Embeds an integer matrix into any of the supported rings.
    pub fn from_int_matrix(&self, target: &RingSpec) -> Matrix {
        assert_eq!(self.ring, RingSpec::Int);
        self.reduce_into(target)
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            let row: Vec<String> = self.row(i).iter().map(|e| e.to_string()).collect();
            write!(f, "{}", row.join(" "))?;
        }
        write!(f, "] ({}x{} over {})", self.rows, self.cols, self.ring)
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(|e| format!("{e:>4}")).collect();
            writeln!(f, "[{} ]", row.join(""))?;
        }
        Ok(())
    }
}

impl serde::Serialize for Matrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        crate::json::MatrixDto::from(self).serialize(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn product_and_kron() {
        let z = RingSpec::Int;
        let a = Matrix::from_ints(&z, &[vec![1, 2], vec![3, 4]]);
        let b = Matrix::from_ints(&z, &[vec![0, 1], vec![1, 0]]);
        assert_eq!(a.mul(&b), Matrix::from_ints(&z, &[vec![2, 1], vec![4, 3]]));
        let k = a.kron(&Matrix::identity(&z, 2));
        assert_eq!(k.get(2, 0).to_string(), "3");
        assert_eq!(k.get(3, 1).to_string(), "3");
        assert!(k.get(2, 1).is_zero());
    }

    #[test]
    fn zmod_reduces() {
        let r = RingSpec::int_mod(4).unwrap();
        let a = Matrix::from_ints(&r, &[vec![2, 3]]);
        let p = a.transpose().mul(&a);
        assert_eq!(p, Matrix::from_ints(&r, &[vec![0, 2], vec![2, 1]]));
    }

    #[test]
    fn rejects_bad_entries() {
        let r = RingSpec::int_mod(4).unwrap();
        assert!(Matrix::new(&r, 1, 1, vec![RingSpec::Int.from_i64(7)]).is_err());
        assert!(Matrix::new(&r, 1, 2, vec![r.one()]).is_err());
    }
}
