//! Splitting ℤ/n into its local factors ℤ/p^k.
//!
//! A complex over ℤ/n is the direct sum of its base changes to the factors;
//! a module over ℤ/p^k is read back over ℤ/n by adding the relation p^k.

use crate::complex::ChainComplex;
use crate::int::Int;
use crate::matrix::Matrix;
use crate::module::FPModule;
use crate::ring::{factorize, Elem, RingSpec};

#[derive(Clone, Debug)]
pub struct Component {
    /// ℤ/q for the prime power q.
    pub ring: RingSpec,
    pub q: u64,
    /// The idempotent of ℤ/n that is 1 mod q and 0 mod n/q.
    pub idempotent: Elem,
}

/// The local factors of a composite ℤ/n; `None` for every other ring.
pub fn components(ring: &RingSpec) -> Option<Vec<Component>> {
    let n = ring.modulus()?;
    let f = factorize(n);
    if f.len() < 2 {
        return None;
    }
    let comps = f
        .into_iter()
        .map(|(p, k)| {
            let q = p.pow(k);
            let rest = n / q;
            // rest · (rest⁻¹ mod q)
            let (_, s, _) = Int::from(rest).ext_gcd(&Int::from(q));
            let e = ring.from_int(&(Int::from(rest) * s));
            Component { ring: RingSpec::IntMod(q), q, idempotent: e }
        })
        .collect();
    Some(comps)
}

pub fn base_change_matrix(m: &Matrix, target: &RingSpec) -> Matrix {
    m.reduce_into(target)
}

pub fn base_change_complex(c: &ChainComplex, target: &RingSpec) -> ChainComplex {
    let mods: Vec<(i64, FPModule)> = c.degrees().iter().map(|&d| (d, c.module(d).base_change(target))).collect();
    let diffs: Vec<(i64, Matrix)> = c.degrees().iter().map(|&d| (d, c.diff(d).reduce_into(target))).collect();
    ChainComplex::new(target, c.shape(), mods, diffs).expect("base change keeps shapes")
}

/// Integer lift of a ℤ/q matrix into ℤ/n.
pub fn lift_matrix(m: &Matrix, ring: &RingSpec) -> Matrix {
    m.lift_to_int().from_int_matrix(ring)
}

/// A ℤ/q-module read as a ℤ/n-module.
pub fn lift_module(m: &FPModule, comp: &Component, ring: &RingSpec) -> FPModule {
    let g = m.gens();
    let rel = lift_matrix(m.relations(), ring);
    let q = Matrix::diagonal(ring, g, g, &vec![ring.from_i64(comp.q as i64); g]);
    let all = Matrix::hstack(&[&rel, &q]);
    if ring.from_i64(comp.q as i64).is_zero() {
        FPModule::new(ring, g, rel).unwrap()
    } else {
        FPModule::new(ring, g, all.nonzero_cols()).unwrap()
    }
}

pub fn lift_complex(c: &ChainComplex, comp: &Component, ring: &RingSpec) -> ChainComplex {
    let mods: Vec<(i64, FPModule)> = c.degrees().iter().map(|&d| (d, lift_module(c.module(d), comp, ring))).collect();
    let diffs: Vec<(i64, Matrix)> = c.degrees().iter().map(|&d| (d, lift_matrix(&c.diff(d), ring))).collect();
    ChainComplex::new(ring, c.shape(), mods, diffs).expect("lift keeps shapes")
}
