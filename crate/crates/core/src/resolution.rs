//! Free resolutions of bounded complexes and projective dimension.
//!
//! The resolution `P → C` is built upwards from the bottom degree of `C`:
//! in degree `n` the new generators are minimal generators of the cycles of
//! the mapping cone in degree `n`, which makes the cone exact there. The
//! result is reduced at the end, so what comes back is split-minimal.
//! Over a composite ℤ/n each local factor is resolved separately.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::complex::{ChainComplex, ChainMap, Shape};
use crate::crt::{self, Component};
use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::minimality::reduce;
use crate::module::{CanonicalForm, FPModule, ModuleHom};

pub const DEFAULT_CUTOFF: usize = 8;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Dimension {
    Finite(i64),
    /// The complex is zero in the derived category.
    MinusInfinity,
    /// A nonzero syzygy repeated, so the minimal resolution never stops.
    Infinite,
    ExceedsCutoff,
}

impl std::fmt::Display for Dimension {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Dimension::Finite(n) => write!(f, "{n}"),
            Dimension::MinusInfinity => f.write_str("-infinity"),
            Dimension::Infinite => f.write_str("infinite"),
            Dimension::ExceedsCutoff => f.write_str("exceeds_cutoff"),
        }
    }
}

impl Serialize for Dimension {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Dimension::Finite(n) => s.serialize_i64(*n),
            other => s.serialize_str(&other.to_string()),
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
pub enum DimensionKind {
    #[serde(rename = "pd")]
    Projective,
    #[serde(rename = "fd")]
    Flat,
}

impl std::str::FromStr for DimensionKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "pd" => Ok(DimensionKind::Projective),
            "fd" => Ok(DimensionKind::Flat),
            _ => Err(Error::UnknownName(s.into())),
        }
    }
}

#[derive(Clone, Debug)]
pub struct Resolution {
    pub input: ChainComplex,
    /// Reduced; free over local rings and PIDs, projective over composite ℤ/n.
    pub complex: ChainComplex,
    /// Quasi-isomorphism `complex → input`, exact up to the cutoff.
    pub augmentation: ChainMap,
    /// `(start, period)` of the first repetition among syzygies.
    pub periodic: Option<(i64, i64)>,
    /// Stopped at the cutoff with a nonzero syzygy left over.
    pub truncated: bool,
}

impl Resolution {
    pub fn dimension(&self) -> Dimension {
        if self.truncated {
            return if self.periodic.is_some() { Dimension::Infinite } else { Dimension::ExceedsCutoff };
        }
        match self.complex.support().into_iter().filter(|&d| !self.complex.module(d).is_zero()).max() {
            Some(top) => Dimension::Finite(top),
            None => Dimension::MinusInfinity,
        }
    }
}

pub fn resolve_module(m: &FPModule, cutoff: usize) -> Result<Resolution> {
    free_resolution(&ChainComplex::sphere(m, 0), cutoff)
}

pub fn free_resolution(c: &ChainComplex, cutoff: usize) -> Result<Resolution> {
    if c.is_periodic() {
        return Err(Error::Unsupported("resolutions of periodic complexes".into()));
    }
    let cutoff = cutoff.max(1);
    let ring = c.ring().clone();
    let Some(comps) = crt::components(&ring) else {
        return resolve_local(c, cutoff);
    };
    let parts: Vec<(Component, Resolution)> = comps
        .into_iter()
        .map(|cp| {
            let local = crt::base_change_complex(c, &cp.ring);
            resolve_local(&local, cutoff).map(|r| (cp, r))
        })
        .collect::<Result<_>>()?;
    let lifted: Vec<ChainComplex> = parts.iter().map(|(cp, r)| crt::lift_complex(&r.complex, cp, &ring)).collect();
    let complex = ChainComplex::direct_sum(&lifted.iter().collect::<Vec<_>>())?;
    let augmentation = ChainMap::new_unchecked(&complex, c, |d| {
        let blocks: Vec<Matrix> = parts
            .iter()
            .map(|(cp, r)| crt::lift_matrix(&r.augmentation.component(d), &ring).scale(&cp.idempotent))
            .collect();
        if blocks.is_empty() {
            Matrix::zeros(&ring, c.gens(d), 0)
        } else {
            Matrix::hstack(&blocks.iter().collect::<Vec<_>>())
        }
    });
    let truncated = parts.iter().any(|(_, r)| r.truncated);
    let periodic = if parts.iter().any(|(_, r)| r.truncated && r.periodic.is_none()) {
        None
    } else {
        parts.iter().find_map(|(_, r)| r.periodic)
    };
    Ok(Resolution { input: c.clone(), complex, augmentation, periodic, truncated })
}

/// Over a local ring or a PID, where minimal generators are meaningful.
fn resolve_local(c: &ChainComplex, cutoff: usize) -> Result<Resolution> {
    let r = c.ring().clone();
    let Some((a, b)) = c.trim().bounds() else {
        let zero = ChainComplex::zero_complex(&r);
        let aug = ChainMap::zero(&zero, c);
        return Ok(Resolution { input: c.clone(), complex: zero, augmentation: aug, periodic: None, truncated: false });
    };
    // per degree: rank, d^P (rank_{n−1} × rank_n) and φ (gens C_n × rank_n),
    // with the signs of the cone construction
    let mut rank: BTreeMap<i64, usize> = BTreeMap::new();
    let mut dp: BTreeMap<i64, Matrix> = BTreeMap::new();
    let mut phi: BTreeMap<i64, Matrix> = BTreeMap::new();
    let rk = |rank: &BTreeMap<i64, usize>, n: i64| rank.get(&n).copied().unwrap_or(0);
    let mut syzygies: Vec<(i64, CanonicalForm)> = Vec::new();
    let mut periodic = None;
    let mut truncated = false;
    let last = b + cutoff as i64;
    for n in a..=last + 1 {
        let (cn, pn1) = (c.module(n), FPModule::free(&r, rk(&rank, n - 1)));
        let cone_n = FPModule::direct_sum(&r, &[cn, &pn1]);
        let cone_n1 = FPModule::direct_sum(&r, &[c.module(n - 1), &FPModule::free(&r, rk(&rank, n - 2))]);
        let mut d = Matrix::zeros(&r, cone_n1.gens(), cone_n.gens());
        d.put(0, 0, &c.diff(n));
        if let Some(f) = phi.get(&(n - 1)) {
            d.put(0, cn.gens(), f);
        }
        if let Some(p) = dp.get(&(n - 1)) {
            d.put(c.gens(n - 1), cn.gens(), &p.neg());
        }
        let kic = ModuleHom::new_unchecked(&cone_n, &cone_n1, d).kic();
        let s = kic.kernel.simplify();
        let k = kic.kernel_incl.matrix().mul(&s.from);
        if n > b {
            if k.cols() == 0 {
                break;
            }
            let form = kic.kernel.canonical_form();
            if periodic.is_none() && !form.is_zero() {
                if let Some((start, _)) = syzygies.iter().find(|(_, f)| *f == form) {
                    periodic = Some((*start, n - start));
                }
            }
            syzygies.push((n, form));
            if n > last {
                truncated = true;
                break;
            }
        }
        let g = k.cols();
        rank.insert(n, g);
        phi.insert(n, k.block(0, 0, cn.gens(), g));
        dp.insert(n, k.block(cn.gens(), 0, pn1.gens(), g).neg());
    }
    let top = rank.keys().copied().max().unwrap_or(a);
    // rescale generators of degree n by (−1)^n: d ↦ −d, φ ↦ (−1)^n φ
    let mods: Vec<(i64, FPModule)> = (a..=top).map(|n| (n, FPModule::free(&r, rk(&rank, n)))).collect();
    let diffs: Vec<(i64, Matrix)> = (a + 1..=top).map(|n| (n, dp[&n].neg())).collect();
    let p = ChainComplex::new(&r, Shape::Bounded { min: a, max: top }, mods, diffs)?;
    let sign = |n: i64, m: &Matrix| if n.rem_euclid(2) == 0 { m.clone() } else { m.neg() };
    let aug = ChainMap::new_unchecked(&p, c, |n| sign(n, &phi[&n]));
    let red = reduce(&p)?;
    let target = red.iso.target();
    let reduced = &red.reduced;
    let mut phis: BTreeMap<i64, Matrix> = reduced
        .degrees()
        .into_iter()
        .map(|n| {
            let off = target.gens(n) - reduced.gens(n);
            let incl = red.iso_inv.component(n).block(0, off, p.gens(n), reduced.gens(n));
            (n, aug.component(n).mul(&incl))
        })
        .collect();
    let mut diffs: BTreeMap<i64, Matrix> = reduced.degrees().into_iter().map(|n| (n, reduced.diff(n).into_owned())).collect();
    normalize_signs(&mut diffs, &mut phis);
    let complex = ChainComplex::new(&r, reduced.shape(), reduced.degrees().into_iter().map(|n| (n, reduced.module(n).clone())).collect::<Vec<_>>(), diffs)?;
    let augmentation = ChainMap::new_unchecked(&complex, c, |n| phis[&n].clone());
    Ok(Resolution { input: c.clone(), complex, augmentation, periodic, truncated })
}

/// Rescales each generator by a unit so that the first nonzero entry of its
/// boundary is in canonical associate form.
fn normalize_signs(diffs: &mut BTreeMap<i64, Matrix>, phis: &mut BTreeMap<i64, Matrix>) {
    let degs: Vec<i64> = diffs.keys().copied().collect();
    for n in degs {
        let d = diffs[&n].clone();
        let r = d.ring().clone();
        for j in 0..d.cols() {
            let Some(e) = (0..d.rows()).map(|i| d.get(i, j)).find(|e| !e.is_zero()) else { continue };
            let w = r.associate(e).1;
            if w.is_one() {
                continue;
            }
            let winv = r.inv(&w).expect("associate unit");
            diffs.get_mut(&n).unwrap().scale_col(j, &w);
            phis.get_mut(&n).unwrap().scale_col(j, &w);
            if let Some(up) = diffs.get_mut(&(n + 1)) {
                up.scale_row(j, &winv);
            }
        }
    }
}

/// Projective and flat dimension agree here: finitely generated flat
/// modules over the supported rings are projective.
pub fn dimension(c: &ChainComplex, _kind: DimensionKind, cutoff: usize) -> Result<Dimension> {
    Ok(free_resolution(c, cutoff)?.dimension())
}

pub fn module_dimension(m: &FPModule, kind: DimensionKind, cutoff: usize) -> Result<Dimension> {
    dimension(&ChainComplex::sphere(m, 0), kind, cutoff)
}

pub const DIMENSION_NOTE: &str = "pd = fd: finitely generated flat modules over the supported rings are projective";

/// A split-minimal complex of projectives quasi-isomorphic to `c` (up to
/// the cutoff), with the quasi-isomorphism kept in the resolution.
pub fn pure_minimal_replacement(c: &ChainComplex, cutoff: usize) -> Result<Resolution> {
    free_resolution(c, cutoff)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::cone;
    use crate::minimality::{is_pure_minimal, Tri};
    use crate::ring::RingSpec;

    fn cyclic(r: &RingSpec, d: i64) -> FPModule {
        FPModule::cyclic(r, &r.from_i64(d))
    }

    #[test]
    fn z6_over_z() {
        let r = RingSpec::Int;
        let res = resolve_module(&cyclic(&r, 6), 8).unwrap();
        assert_eq!(res.complex.shape(), Shape::Bounded { min: 0, max: 1 });
        assert_eq!(res.complex.diff(1).into_owned(), Matrix::from_ints(&r, &[vec![6]]));
        assert_eq!(res.dimension(), Dimension::Finite(1));
        assert!(res.augmentation.is_chain_map());
        assert!(cone(&res.augmentation).cone.is_acyclic());
    }

    #[test]
    fn z2_over_z4_is_periodic() {
        let r = RingSpec::int_mod(4).unwrap();
        let res = resolve_module(&cyclic(&r, 2), 8).unwrap();
        assert_eq!(res.periodic, Some((1, 1)));
        assert_eq!(res.dimension(), Dimension::Infinite);
        for n in 1..=8 {
            assert_eq!(res.complex.diff(n).into_owned(), Matrix::from_ints(&r, &[vec![2]]));
        }
    }

    #[test]
    fn free_and_zero() {
        let r = RingSpec::Int;
        let res = resolve_module(&FPModule::free(&r, 2), 8).unwrap();
        assert_eq!(res.dimension(), Dimension::Finite(0));
        assert_eq!(res.complex.trim().bounds(), Some((0, 0)));
        let z = ChainComplex::zero_complex(&r);
        assert_eq!(pure_minimal_replacement(&z, 3).unwrap().complex.total_rank(), 0);
        assert_eq!(module_dimension(&FPModule::zero(&r), DimensionKind::Projective, 8).unwrap(), Dimension::MinusInfinity);
    }

    #[test]
    fn replacement_drops_the_disk() {
        let r = RingSpec::Int;
        let disk = ChainComplex::disk(&FPModule::free(&r, 1), 1);
        let s = ChainComplex::sphere(&cyclic(&r, 2), 0);
        let c = ChainComplex::direct_sum(&[&disk, &s]).unwrap();
        let res = pure_minimal_replacement(&c, 4).unwrap();
        let p = res.complex.trim();
        assert_eq!(p.bounds(), Some((0, 1)));
        assert_eq!(p.total_rank(), 2);
        assert_eq!(p.diff(1).into_owned().get(0, 0).num().abs(), crate::Int::from(2));
        assert_eq!(is_pure_minimal(&p), Tri::True);
        assert!(cone(&res.augmentation).cone.is_acyclic());
    }

    #[test]
    fn composite_modulus() {
        let r = RingSpec::int_mod(6).unwrap();
        // ℤ/2 is projective over ℤ/6
        assert_eq!(module_dimension(&cyclic(&r, 2), DimensionKind::Projective, 8).unwrap(), Dimension::Finite(0));
        let r = RingSpec::int_mod(12).unwrap();
        assert_eq!(module_dimension(&cyclic(&r, 2), DimensionKind::Flat, 8).unwrap(), Dimension::Infinite);
        let res = resolve_module(&cyclic(&r, 3), 8).unwrap();
        assert!(res.augmentation.is_chain_map());
        assert!(cone(&res.augmentation).cone.is_acyclic());
    }

    #[test]
    fn complexes_resolve() {
        let r = RingSpec::Int;
        let m = cyclic(&r, 4);
        let c = ChainComplex::new(&r, Shape::Bounded { min: 0, max: 1 }, [(0, cyclic(&r, 2)), (1, m)], [(1, Matrix::from_ints(&r, &[vec![1]]))]).unwrap();
        let res = free_resolution(&c, 6).unwrap();
        assert!(res.augmentation.is_chain_map());
        assert!(cone(&res.augmentation).cone.is_acyclic());
        // H_1 = 2ℤ/4 ≅ ℤ/2, H_0 = 0: the resolution lives in degrees 1, 2
        assert_eq!(res.dimension(), Dimension::Finite(2));
    }
}
