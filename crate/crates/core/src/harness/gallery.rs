//! Named example complexes.

use crate::complex::{ChainComplex, Shape};
use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::module::FPModule;
use crate::ring::RingSpec;

pub const GALLERY: [&str; 7] = ["dold", "exaF", "koszul22", "disk", "sphere", "ZQ", "Zp_completion"];

const ZQ: &str = "The complex 0 → ℤ → ℚ → 0 is minimal and pure-minimal, but ℚ is not \
finitely presented over ℤ, so it has no representation here. Over ℤ[1/S] or ℤ_(p) every \
module is still finitely presented, which is the reason the example cannot be emulated by \
a change of ring.";

const ZP_COMPLETION: &str = "A complex of flat modules that is minimal but not pure-minimal \
needs the p-adic integers ℤ_p as a module over ℤ_(p); that module is flat but not finitely \
generated, and its elements are not computable exactly, so the example is documented only.";

/// The complex `name`, optionally with a parameter after a colon (`exaF:7`).
pub fn gallery(name: &str) -> Result<ChainComplex> {
    let (base, param) = match name.split_once(':') {
        Some((b, p)) => (b, Some(p)),
        None => (name, None),
    };
    let z = RingSpec::Int;
    match base {
        "dold" => {
            let r = RingSpec::int_mod(4)?;
            ChainComplex::new_validated(
                &r,
                Shape::Periodic { period: 1 },
                [(0, FPModule::free(&r, 1))],
                [(0, Matrix::from_ints(&r, &[vec![2]]))],
            )
        }
        "exaF" => {
            let p: u64 = match param {
                Some(s) => s.parse().map_err(|_| Error::UnknownName(format!("exaF parameter {s:?} is not a prime")))?,
                None => 5,
            };
            if p < 5 || !crate::ring::factorize(p).iter().all(|&(q, k)| q == p && k == 1) {
                return Err(Error::UnknownName(format!("exaF needs a prime p ≥ 5, got {p}")));
            }
            let r = RingSpec::invert(&[p])?;
            ChainComplex::free_bounded(&r, 0, &[1, 1], vec![Matrix::from_ints(&r, &[vec![2]])])
        }
        "koszul22" => ChainComplex::free_bounded(
            &z,
            0,
            &[1, 2, 1],
            vec![Matrix::from_ints(&z, &[vec![2, 2]]), Matrix::from_ints(&z, &[vec![-2], vec![2]])],
        ),
        "disk" => Ok(ChainComplex::disk(&FPModule::free(&z, 1), 1)),
        "sphere" => Ok(ChainComplex::sphere(&FPModule::free(&z, 1), 0)),
        "ZQ" => Err(Error::Refused(ZQ.into())),
        "Zp_completion" => Err(Error::Refused(ZP_COMPLETION.into())),
        _ => Err(Error::UnknownName(format!("no gallery entry {name:?}; known: {}", GALLERY.join(", ")))),
    }
}
