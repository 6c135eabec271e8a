//! Reduction to a split-minimal complex and the three minimality tests.
//!
//! Reduction works on complexes of projective modules. Over a composite
//! ℤ/n each local factor ℤ/p^k is reduced on its own and the results are
//! read back over ℤ/n, so the reduced complex may carry projective modules
//! such as ℤ/2 ⊂ ℤ/6 that are not free. A period-1 complex is unrolled to
//! period 2 before eliminating, since a disk needs two distinct degrees.

use std::collections::{BTreeMap, HashSet};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::ser::{SerializeMap, SerializeStruct};
use serde::{Serialize, Serializer};

use crate::complex::{ChainComplex, ChainMap, Homotopy, Shape};
use crate::crt::{self, Component};
use crate::error::{Error, Result};
use crate::int::Int;
use crate::linalg::{is_invertible, snf, LinearSystem, Term};
use crate::matrix::Matrix;
use crate::module::{hom_modules, FPModule, ModuleHom};
use crate::ring::{factorize, Elem, RingSpec};

/// Largest number of candidate elements or homotopy pairs examined by the
/// exhaustive searches before answering `Unknown`.
pub const SEARCH_BUDGET: usize = 1 << 16;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Move {
    /// Eliminates the unit entry `(row, col)` of `d_degree`, splitting off
    /// the disk `R → R` it spans.
    Pivot { component: Option<u64>, degree: i64, row: usize, col: usize, unit: Elem },
    /// Brings `d_degree` to Smith form, `row_change · d · col_change`, so
    /// that a unit elementary divisor becomes a visible pivot.
    Expose { component: Option<u64>, degree: i64, row_change: Matrix, col_change: Matrix },
}

struct Disk {
    top: i64,
    unit: Elem,
    top_row: Matrix,
    bot_row: Matrix,
    top_col: Matrix,
    bot_col: Matrix,
}

/// Elimination state for a free complex over a local ring or a PID.
struct Engine {
    ring: RingSpec,
    shape: Shape,
    d: BTreeMap<i64, Matrix>,
    /// Original coordinates → current coordinates, and back.
    t: BTreeMap<i64, Matrix>,
    ti: BTreeMap<i64, Matrix>,
    disks: Vec<Disk>,
    moves: Vec<Move>,
    component: Option<u64>,
}

struct Part {
    split: ChainComplex,
    reduced: ChainComplex,
    iso: BTreeMap<i64, Matrix>,
    iso_inv: BTreeMap<i64, Matrix>,
    split_gens: BTreeMap<i64, usize>,
    moves: Vec<Move>,
}

impl Engine {
    /// Replaces each module by a free one through its simplified presentation.
    fn freed(c: &ChainComplex, component: Option<u64>) -> Result<Engine> {
        let ring = c.ring().clone();
        let mut t = BTreeMap::new();
        let mut ti = BTreeMap::new();
        for deg in c.degrees() {
            let s = c.module(deg).simplify();
            if s.divisors.iter().any(|d| !d.is_zero()) {
                return Err(Error::NonProjective { degree: deg });
            }
            t.insert(deg, s.to);
            ti.insert(deg, s.from);
        }
        let mut e = Engine { ring, shape: c.shape(), d: BTreeMap::new(), t, ti, disks: Vec::new(), moves: Vec::new(), component };
        for deg in c.degrees() {
            let cols = e.t[&deg].rows();
            let m = match e.key(deg - 1) {
                Some(k) => e.t[&k].mul(&c.diff(deg)).mul(&e.ti[&deg]),
                None => Matrix::zeros(&e.ring, 0, cols),
            };
            e.d.insert(deg, m);
        }
        Ok(e)
    }

    fn key(&self, deg: i64) -> Option<i64> {
        match self.shape {
            Shape::Periodic { period } => Some(deg.rem_euclid(period as i64)),
            Shape::Bounded { min, max } => (deg >= min && deg <= max).then_some(deg),
        }
    }

    fn gens(&self, deg: i64) -> usize {
        self.key(deg).map_or(0, |k| self.t[&k].rows())
    }

    /// New coordinate `target` gains `c` times coordinate `src`.
    fn add_basis(&mut self, deg: i64, target: usize, src: usize, c: &Elem) {
        let k = self.key(deg).unwrap();
        let neg = self.ring.neg(c);
        self.t.get_mut(&k).unwrap().add_row_multiple(target, src, c);
        self.ti.get_mut(&k).unwrap().add_col_multiple(src, target, &neg);
        self.d.get_mut(&k).unwrap().add_col_multiple(src, target, &neg);
        if let Some(k1) = self.key(deg + 1) {
            self.d.get_mut(&k1).unwrap().add_row_multiple(target, src, c);
        }
    }

    /// New coordinates are `u` times the current ones.
    fn transform(&mut self, deg: i64, u: &Matrix, u_inv: &Matrix) {
        let k = self.key(deg).unwrap();
        let t = u.mul(&self.t[&k]);
        self.t.insert(k, t);
        let ti = self.ti[&k].mul(u_inv);
        self.ti.insert(k, ti);
        let d = self.d[&k].mul(u_inv);
        self.d.insert(k, d);
        if let Some(k1) = self.key(deg + 1) {
            let d1 = u.mul(&self.d[&k1]);
            self.d.insert(k1, d1);
        }
    }

    fn remove(&mut self, deg: i64, idx: usize) -> (Matrix, Matrix) {
        let k = self.key(deg).unwrap();
        let n = self.t[&k].rows();
        let keep: Vec<usize> = (0..n).filter(|&j| j != idx).collect();
        let row = self.t[&k].select_rows(&[idx]);
        let col = self.ti[&k].select_cols(&[idx]);
        let t = self.t[&k].select_rows(&keep);
        self.t.insert(k, t);
        let ti = self.ti[&k].select_cols(&keep);
        self.ti.insert(k, ti);
        let d = self.d[&k].select_cols(&keep);
        self.d.insert(k, d);
        if let Some(k1) = self.key(deg + 1) {
            debug_assert!(self.d[&k1].select_rows(&[idx]).is_zero());
            let d1 = self.d[&k1].select_rows(&keep);
            self.d.insert(k1, d1);
        }
        (row, col)
    }

    fn find_unit(&self, deg: i64) -> Option<(usize, usize)> {
        let m = &self.d[&self.key(deg)?];
        (0..m.rows()).flat_map(|r| (0..m.cols()).map(move |c| (r, c))).find(|&(r, c)| self.ring.is_unit(m.get(r, c)))
    }

    fn pivot(&mut self, deg: i64, a: usize, b: usize) {
        let k = self.key(deg).unwrap();
        let u = self.d[&k].get(a, b).clone();
        let uinv = self.ring.inv(&u).expect("pivot is a unit");
        for c in 0..self.d[&k].cols() {
            let f = self.ring.mul(self.d[&k].get(a, c), &uinv);
            if c != b && !f.is_zero() {
                self.add_basis(deg, b, c, &f);
            }
        }
        for r in 0..self.d[&k].rows() {
            let g = self.ring.mul(self.d[&k].get(r, b), &uinv);
            if r != a && !g.is_zero() {
                let ng = self.ring.neg(&g);
                self.add_basis(deg - 1, r, a, &ng);
            }
        }
        self.moves.push(Move::Pivot { component: self.component, degree: deg, row: a, col: b, unit: u.clone() });
        let (top_row, top_col) = self.remove(deg, b);
        let (bot_row, bot_col) = self.remove(deg - 1, a);
        self.disks.push(Disk { top: k, unit: u, top_row, bot_row, top_col, bot_col });
    }

    fn expose(&mut self, deg: i64) -> bool {
        if !self.ring.is_domain() || self.ring.is_local() {
            return false;
        }
        let k = self.key(deg).unwrap();
        let m = &self.d[&k];
        if m.rows() == 0 || m.cols() == 0 {
            return false;
        }
        let s = snf(m);
        match s.divisors.first() {
            Some(d0) if self.ring.is_unit(d0) => {
                self.transform(deg - 1, &s.u, &s.u_inv);
                self.transform(deg, &s.v_inv, &s.v);
                self.moves.push(Move::Expose {
                    component: self.component,
                    degree: deg,
                    row_change: s.u.clone(),
                    col_change: s.v.clone(),
                });
                true
            }
            _ => false,
        }
    }

    /// Lowest degree first; within a degree the lexicographically first
    /// unit entry. Eliminating in one degree never creates units in another.
    fn run(&mut self) {
        let degs: Vec<i64> = match self.shape {
            Shape::Periodic { period } => (0..period as i64).collect(),
            Shape::Bounded { min, max } => (min + 1..=max).collect(),
        };
        for deg in degs {
            loop {
                if let Some((a, b)) = self.find_unit(deg) {
                    self.pivot(deg, a, b);
                } else if !self.expose(deg) {
                    break;
                }
            }
        }
    }

    fn finish(self) -> Part {
        let r = &self.ring;
        let degs: Vec<i64> = self.t.keys().copied().collect();
        let reduced = ChainComplex::new(
            r,
            self.shape,
            degs.iter().map(|&k| (k, FPModule::free(r, self.gens(k)))).collect::<Vec<_>>(),
            degs.iter().map(|&k| (k, self.d[&k].clone())).collect::<Vec<_>>(),
        )
        .expect("reduced shapes");
        // split part: in degree k, tops of disks at k then bottoms of disks at k + 1
        let tops = |k: i64| -> Vec<usize> { (0..self.disks.len()).filter(|&j| self.disks[j].top == k).collect() };
        let bots = |k: i64| -> Vec<usize> {
            let up = self.key(k + 1);
            (0..self.disks.len()).filter(|&j| Some(self.disks[j].top) == up).collect()
        };
        let mut split_gens = BTreeMap::new();
        let mut iso = BTreeMap::new();
        let mut iso_inv = BTreeMap::new();
        let mut mods = Vec::new();
        let mut diffs = Vec::new();
        for &k in &degs {
            let (tk, bk) = (tops(k), bots(k));
            let n = tk.len() + bk.len();
            split_gens.insert(k, n);
            mods.push((k, FPModule::free(r, n)));
            let mut rows: Vec<&Matrix> = tk.iter().map(|&j| &self.disks[j].top_row).collect();
            rows.extend(bk.iter().map(|&j| &self.disks[j].bot_row));
            rows.push(&self.t[&k]);
            iso.insert(k, vstack_cols(&rows, self.ti[&k].rows()));
            let mut cols: Vec<&Matrix> = tk.iter().map(|&j| &self.disks[j].top_col).collect();
            cols.extend(bk.iter().map(|&j| &self.disks[j].bot_col));
            cols.push(&self.ti[&k]);
            iso_inv.insert(k, hstack_rows(&cols, self.t[&k].cols()));
            // d: tops of degree k → bottoms in degree k − 1
            let below = self.key(k - 1).map(bots).unwrap_or_default();
            let mut d = Matrix::zeros(r, below.len() + self.key(k - 1).map_or(0, |k1| tops(k1).len()), n);
            if self.key(k - 1).is_some() {
                let k1 = self.key(k - 1).unwrap();
                let off = tops(k1).len();
                for (col, &j) in tk.iter().enumerate() {
                    let row = off + below.iter().position(|&x| x == j).expect("disk bottom");
                    d.set(row, col, self.disks[j].unit.clone());
                }
            }
            diffs.push((k, d));
        }
        let split = ChainComplex::new(r, self.shape, mods, diffs).expect("split shapes");
        Part { split, reduced, iso, iso_inv, split_gens, moves: self.moves }
    }
}

fn vstack_cols(blocks: &[&Matrix], cols: usize) -> Matrix {
    let ring = blocks.last().unwrap().ring().clone();
    let mut out = Matrix::zeros(&ring, blocks.iter().map(|b| b.rows()).sum(), cols);
    let mut r0 = 0;
    for b in blocks {
        out.put(r0, 0, b);
        r0 += b.rows();
    }
    out
}

fn hstack_rows(blocks: &[&Matrix], rows: usize) -> Matrix {
    let ring = blocks.last().unwrap().ring().clone();
    let mut out = Matrix::zeros(&ring, rows, blocks.iter().map(|b| b.cols()).sum());
    let mut c0 = 0;
    for b in blocks {
        out.put(0, c0, b);
        c0 += b.cols();
    }
    out
}

/// `source ≅ split_part ⊕ reduced`, with `split_part` contractible and
/// `reduced` free of unit elementary divisors.
#[derive(Clone, Debug)]
pub struct Reduction {
    /// The input, unrolled to period 2 when it had period 1 and moves were made.
    pub source: ChainComplex,
    pub split_part: ChainComplex,
    pub reduced: ChainComplex,
    /// `source → split_part ⊕ reduced`.
    pub iso: ChainMap,
    pub iso_inv: ChainMap,
    pub moves: Vec<Move>,
}

impl Reduction {
    /// Rechecks the decomposition from scratch.
    pub fn verify(&self) -> std::result::Result<(), String> {
        if !self.iso.is_chain_map() || !self.iso_inv.is_chain_map() {
            return Err("iso data is not a chain map".into());
        }
        if !self.iso.then(&self.iso_inv).equals(&ChainMap::identity(&self.source)) {
            return Err("iso_inv ∘ iso ≠ 1".into());
        }
        let target = self.iso.target();
        if !self.iso_inv.then(&self.iso).equals(&ChainMap::identity(target)) {
            return Err("iso ∘ iso_inv ≠ 1".into());
        }
        if !self.split_part.is_contractible() {
            return Err("split part is not contractible".into());
        }
        match reduce(&self.reduced) {
            Ok(r) if r.moves.is_empty() => Ok(()),
            Ok(r) => Err(format!("reduced complex still admits {} moves", r.moves.len())),
            Err(e) => Err(e.to_string()),
        }
    }
}

pub fn reduce(c: &ChainComplex) -> Result<Reduction> {
    let source = match c.shape() {
        Shape::Periodic { period: 1 } => c.unroll(2),
        _ => c.clone(),
    };
    let ring = c.ring().clone();
    let comps: Vec<Option<Component>> = match crt::components(&ring) {
        Some(cs) => cs.into_iter().map(Some).collect(),
        None => vec![None],
    };
    let mut parts = Vec::new();
    for comp in &comps {
        let local = match comp {
            Some(cp) => crt::base_change_complex(&source, &cp.ring),
            None => source.clone(),
        };
        let mut e = Engine::freed(&local, comp.as_ref().map(|cp| cp.q))?;
        e.run();
        parts.push(e.finish());
    }
    let moves: Vec<Move> = parts.iter().flat_map(|p| p.moves.iter().cloned()).collect();
    if moves.is_empty() && source.shape() != c.shape() {
        return Ok(identity_reduction(c));
    }
    Ok(assemble(&source, &comps, parts, moves))
}

fn identity_reduction(c: &ChainComplex) -> Reduction {
    let r = c.ring();
    let zero = ChainComplex::new(r, c.shape(), [], []).unwrap();
    let target = ChainComplex::direct_sum(&[&zero, c]).unwrap();
    Reduction {
        source: c.clone(),
        split_part: zero,
        reduced: c.clone(),
        iso: ChainMap::new_unchecked(c, &target, |d| Matrix::identity(r, c.gens(d))),
        iso_inv: ChainMap::new_unchecked(&target, c, |d| Matrix::identity(r, c.gens(d))),
        moves: Vec::new(),
    }
}

fn assemble(source: &ChainComplex, comps: &[Option<Component>], parts: Vec<Part>, moves: Vec<Move>) -> Reduction {
    let ring = source.ring().clone();
    let lift_c = |c: &ChainComplex, comp: &Option<Component>| match comp {
        Some(cp) => crt::lift_complex(c, cp, &ring),
        None => c.clone(),
    };
    let lift_m = |m: &Matrix, comp: &Option<Component>| match comp {
        Some(_) => crt::lift_matrix(m, &ring),
        None => m.clone(),
    };
    let splits: Vec<ChainComplex> = parts.iter().zip(comps).map(|(p, c)| lift_c(&p.split, c)).collect();
    let reds: Vec<ChainComplex> = parts.iter().zip(comps).map(|(p, c)| lift_c(&p.reduced, c)).collect();
    let split = ChainComplex::direct_sum(&splits.iter().collect::<Vec<_>>()).unwrap();
    let reduced = ChainComplex::direct_sum(&reds.iter().collect::<Vec<_>>()).unwrap();
    let target = ChainComplex::direct_sum(&[&split, &reduced]).unwrap();
    let iso = ChainMap::new_unchecked(source, &target, |d| {
        let mut rows = Vec::new();
        for (p, c) in parts.iter().zip(comps) {
            let n = p.split_gens[&d];
            rows.push(lift_m(&p.iso[&d].block(0, 0, n, source.gens(d)), c));
        }
        for (p, c) in parts.iter().zip(comps) {
            let n = p.split_gens[&d];
            let m = &p.iso[&d];
            rows.push(lift_m(&m.block(n, 0, m.rows() - n, source.gens(d)), c));
        }
        vstack_cols(&rows.iter().collect::<Vec<_>>(), source.gens(d))
    });
    let weight = |m: Matrix, c: &Option<Component>| match c {
        Some(cp) => m.scale(&cp.idempotent),
        None => m,
    };
    let iso_inv = ChainMap::new_unchecked(&target, source, |d| {
        let mut cols = Vec::new();
        for (p, c) in parts.iter().zip(comps) {
            let n = p.split_gens[&d];
            cols.push(weight(lift_m(&p.iso_inv[&d].block(0, 0, source.gens(d), n), c), c));
        }
        for (p, c) in parts.iter().zip(comps) {
            let n = p.split_gens[&d];
            let m = &p.iso_inv[&d];
            cols.push(weight(lift_m(&m.block(0, n, source.gens(d), m.cols() - n), c), c));
        }
        hstack_rows(&cols.iter().collect::<Vec<_>>(), source.gens(d))
    });
    Reduction { source: source.clone(), split_part: split, reduced, iso, iso_inv, moves }
}

/// Three-valued answer for the decision procedures that may run out of budget.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Tri {
    True,
    False,
    Unknown,
}

impl From<bool> for Tri {
    fn from(b: bool) -> Tri {
        if b {
            Tri::True
        } else {
            Tri::False
        }
    }
}

impl Tri {
    pub fn is_true(self) -> bool {
        self == Tri::True
    }

    pub fn is_false(self) -> bool {
        self == Tri::False
    }
}

impl std::fmt::Display for Tri {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Tri::True => "true",
            Tri::False => "false",
            Tri::Unknown => "unknown",
        })
    }
}

impl Serialize for Tri {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Tri::True => s.serialize_bool(true),
            Tri::False => s.serialize_bool(false),
            Tri::Unknown => s.serialize_str("unknown"),
        }
    }
}

/// A disk on `module` in degrees `degree`, `degree − 1` split off through
/// `a : X → C_degree` and `beta : C_{degree−1} → X` with `beta ∘ d ∘ a = 1`.
#[derive(Clone, Debug)]
pub struct DiskWitness {
    pub degree: i64,
    pub module: FPModule,
    pub a: Matrix,
    pub beta: Matrix,
}

#[derive(Clone, Debug)]
pub struct SplitMinimality {
    pub verdict: Tri,
    pub disk: Option<DiskWitness>,
    pub note: String,
}

pub fn split_minimality(c: &ChainComplex) -> SplitMinimality {
    match reduce(c) {
        Ok(r) => SplitMinimality {
            verdict: r.moves.is_empty().into(),
            disk: None,
            note: format!("projective modules: elimination made {} moves", r.moves.len()),
        },
        Err(_) => disk_search(c),
    }
}

pub fn is_split_minimal(c: &ChainComplex) -> Tri {
    split_minimality(c).verdict
}

/// Pure subcomplexes of finitely presented complexes are split and
/// pure-acyclic ones are contractible, so the two notions agree.
pub fn is_pure_minimal(c: &ChainComplex) -> Tri {
    is_split_minimal(c)
}

pub const PURE_MINIMAL_NOTE: &str =
    "pure_minimal: equals split_minimal, since pure means split for finitely presented modules";

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum Candidate {
    Free,
    Torsion(u64),
}

/// Indecomposable summand types of `m`: `R` and the cyclic prime-power
/// modules `R/(p^e)`.
fn candidates(m: &FPModule) -> Option<Vec<Candidate>> {
    let r = m.ring();
    let cf = m.canonical_form();
    let mut out = Vec::new();
    let push_pp = |v: u64, out: &mut Vec<Candidate>| {
        for (p, e) in factorize(v) {
            let c = Candidate::Torsion(p.pow(e));
            if !out.contains(&c) {
                out.push(c);
            }
        }
    };
    if cf.free_rank > 0 {
        match r.modulus() {
            Some(n) => push_pp(n, &mut out),
            None => out.push(Candidate::Free),
        }
    }
    for d in &cf.divisors {
        push_pp(r.lift(&r.associate(d).0).abs().to_u64()?, &mut out);
    }
    Some(out)
}

/// Searches every degree for a split disk on an indecomposable module.
fn disk_search(c: &ChainComplex) -> SplitMinimality {
    let mut exhausted = true;
    for n in c.degrees() {
        if c.gens(n) == 0 || c.gens(n - 1) == 0 {
            continue;
        }
        let Some(cands) = candidates(c.module(n)) else {
            exhausted = false;
            continue;
        };
        for cand in cands {
            let found = match cand {
                Candidate::Free => Ok(free_disk(c, n)),
                Candidate::Torsion(q) => torsion_disk(c, n, q),
            };
            match found {
                Ok(Some(w)) => {
                    return SplitMinimality {
                        verdict: Tri::False,
                        note: format!("disk on {} splits off in degree {}", w.module.canonical_form(), w.degree),
                        disk: Some(w),
                    }
                }
                Ok(None) => {}
                Err(()) => exhausted = false,
            }
        }
    }
    SplitMinimality {
        verdict: if exhausted { Tri::True } else { Tri::Unknown },
        disk: None,
        note: if exhausted {
            "no indecomposable disk summand in any degree".into()
        } else {
            "disk search exceeded its budget".into()
        },
    }
}

/// A disk on `R`: some boundary generates a free summand of `C_{n−1}`.
fn free_disk(c: &ChainComplex, n: i64) -> Option<DiskWitness> {
    let r = c.ring();
    let s = c.module(n - 1).simplify();
    let free: Vec<usize> = (0..s.divisors.len()).filter(|&i| s.divisors[i].is_zero()).collect();
    if free.is_empty() {
        return None;
    }
    let to_free = s.to.select_rows(&free);
    let dbar = to_free.mul(&c.diff(n));
    if dbar.cols() == 0 {
        return None;
    }
    let f = snf(&dbar);
    let d0 = f.divisors.first()?;
    let inv = r.inv(d0)?;
    let a = f.v.column(0);
    let beta = f.u.select_rows(&[0]).mul(&to_free).scale(&inv);
    Some(DiskWitness { degree: n, module: FPModule::free(r, 1), a, beta })
}

/// A disk on `R/(q)`: enumerate elements `a` of `C_n` killed by `q` and
/// look for `β` with `β(d a) = 1`.
fn torsion_disk(c: &ChainComplex, n: i64, q: u64) -> std::result::Result<Option<DiskWitness>, ()> {
    let r = c.ring();
    let qe = r.from_i64(q as i64);
    let s = c.module(n).simplify();
    let mut radices = Vec::new();
    let mut steps = Vec::new();
    for d in &s.divisors {
        let delta = if d.is_zero() {
            match r.modulus() {
                Some(m) => m,
                None => {
                    radices.push(1);
                    steps.push(0);
                    continue;
                }
            }
        } else {
            r.lift(&r.associate(d).0).abs().to_u64().ok_or(())?
        };
        let g = Int::from(delta).gcd(&Int::from(q)).to_u64().unwrap();
        radices.push(g);
        steps.push(delta / g);
    }
    let total = radices.iter().try_fold(1usize, |acc, &g| acc.checked_mul(g as usize)).ok_or(())?;
    if total > SEARCH_BUDGET {
        return Err(());
    }
    let x_mod = FPModule::cyclic(r, &qe);
    let prev = c.module(n - 1);
    let rel = prev.relations();
    let minus_q = Matrix::from_fn(r, 1, 1, |_, _| r.neg(&qe));
    let mut seen = HashSet::new();
    let mut digits = vec![0u64; radices.len()];
    for _ in 0..total {
        // next mixed-radix vector
        let x = Matrix::from_fn(r, digits.len(), 1, |i, _| r.from_i64((digits[i] * steps[i]) as i64));
        for i in 0..digits.len() {
            digits[i] += 1;
            if digits[i] < radices[i] {
                break;
            }
            digits[i] = 0;
        }
        if x.is_zero() {
            continue;
        }
        let a = s.from.mul(&x);
        let y = c.diff(n).mul(&a);
        if y.is_zero() || !seen.insert(format!("{y:?}")) {
            continue;
        }
        let mut sys = LinearSystem::new(r);
        let beta = sys.unknown(1, prev.gens());
        if rel.cols() > 0 {
            let z = sys.unknown(1, rel.cols());
            sys.equation(&[Term::new(None, beta, Some(rel)), Term::new(Some(&minus_q), z, None)], &Matrix::zeros(r, 1, rel.cols()));
        }
        let w = sys.unknown(1, 1);
        sys.equation(&[Term::new(None, beta, Some(&y)), Term::new(Some(&minus_q), w, None)], &Matrix::identity(r, 1));
        if let Some(sol) = sys.solve() {
            return Ok(Some(DiskWitness { degree: n, module: x_mod, a, beta: sol[beta].clone() }));
        }
    }
    Ok(None)
}

#[derive(Clone, Debug)]
pub enum Minimality {
    Yes,
    /// `1 + ∂σ + σ∂` fails to be an isomorphism for this `σ`.
    No(Homotopy),
    Unknown,
}

impl Minimality {
    pub fn label(&self) -> &'static str {
        match self {
            Minimality::Yes => "yes",
            Minimality::No(_) => "no",
            Minimality::Unknown => "unknown",
        }
    }

    pub fn witness(&self) -> Option<&Homotopy> {
        match self {
            Minimality::No(h) => Some(h),
            _ => None,
        }
    }
}

#[derive(Clone, Debug)]
pub struct MinimalityVerdict {
    pub verdict: Minimality,
    pub note: String,
}

/// `1 + ∂σ_deg + σ_{deg−1}∂` on `C_deg`.
pub fn homotopy_endomorphism(c: &ChainComplex, h: &Homotopy, deg: i64) -> Matrix {
    let r = c.ring();
    let s = |d: i64| h.component(d).cloned().unwrap_or_else(|| Matrix::zeros(r, c.gens(d + 1), c.gens(d)));
    Matrix::identity(r, c.gens(deg)).add(&c.diff(deg + 1).mul(&s(deg))).add(&s(deg - 1).mul(&c.diff(deg)))
}

/// Surjective endomorphisms of finitely generated modules over a
/// commutative ring are isomorphisms.
fn is_auto(m: &FPModule, e: &Matrix) -> bool {
    if m.is_visibly_free() {
        is_invertible(e)
    } else {
        ModuleHom::new_unchecked(m, m, e.clone()).is_surjective()
    }
}

/// Degrees where `1 + ∂σ + σ∂` is not an automorphism.
pub fn failing_degrees(c: &ChainComplex, h: &Homotopy) -> Vec<i64> {
    let mut degs: Vec<i64> = h.components.iter().flat_map(|(d, _)| [*d, *d + 1]).collect();
    degs.sort_unstable();
    degs.dedup();
    degs.into_iter().filter(|&d| !is_auto(c.module(d), &homotopy_endomorphism(c, h, d))).collect()
}

pub fn minimality(c: &ChainComplex) -> MinimalityVerdict {
    let sm = split_minimality(c);
    if sm.verdict.is_false() {
        if let Some(w) = &sm.disk {
            let sigma = w.a.mul(&w.beta).neg();
            let h = Homotopy { components: vec![(w.degree - 1, sigma)] };
            return MinimalityVerdict { verdict: Minimality::No(h), note: format!("minimal: {}", sm.note) };
        }
        if let Some(h) = contraction_witness(c) {
            return MinimalityVerdict {
                verdict: Minimality::No(h),
                note: "minimal: minus the contraction of the split part".into(),
            };
        }
    }
    if c.ring().is_finite() {
        if let Some(v) = exhaustive(c) {
            return v;
        }
    }
    let projective = sm.note.starts_with("projective");
    if projective && sm.verdict.is_true() && c.ring().is_local() {
        return MinimalityVerdict {
            verdict: Minimality::Yes,
            note: "minimal: local ring and no unit entries, so 1 + ∂σ + σ∂ ≡ 1 modulo the maximal ideal".into(),
        };
    }
    if c.degrees().into_iter().all(|d| c.diff_hom(d).is_zero()) {
        return MinimalityVerdict { verdict: Minimality::Yes, note: "minimal: all differentials vanish".into() };
    }
    if let Some(h) = sample(c) {
        return MinimalityVerdict { verdict: Minimality::No(h), note: "minimal: refuted by a sampled homotopy".into() };
    }
    MinimalityVerdict { verdict: Minimality::Unknown, note: "minimal: no refuting homotopy among the samples".into() }
}

pub fn is_minimal(c: &ChainComplex) -> Minimality {
    minimality(c).verdict
}

/// `σ = −T⁻¹ (h ⊕ 0) T` from a reduction with a nonzero split part.
fn contraction_witness(c: &ChainComplex) -> Option<Homotopy> {
    let red = reduce(c).ok()?;
    let h = red.split_part.contraction()?;
    let src = &red.source;
    let target = red.iso.target();
    let r = c.ring();
    let comps = src
        .degrees()
        .into_iter()
        .map(|d| {
            let mut emb = Matrix::zeros(r, target.gens(d + 1), target.gens(d));
            if let Some(m) = h.component(d) {
                emb.put(0, 0, m);
            }
            (d, red.iso_inv.component(d + 1).mul(&emb).mul(&red.iso.component(d)).neg())
        })
        .filter(|(_, m)| !m.is_zero())
        .collect();
    Some(Homotopy { components: comps })
}

/// Every pair `(σ_{i−1}, σ_i)` around every degree; `None` when over budget.
fn exhaustive(c: &ChainComplex) -> Option<MinimalityVerdict> {
    let mut homs: BTreeMap<i64, Vec<Matrix>> = BTreeMap::new();
    let degs = c.degrees();
    let mut total = 0usize;
    for &i in &degs {
        for d in [i - 1, i] {
            if homs.contains_key(&d) {
                continue;
            }
            let hm = hom_modules(c.module(d), c.module(d + 1)).ok()?;
            let els = hm.elements(SEARCH_BUDGET as u64).ok()?;
            homs.insert(d, els.into_iter().map(|f| f.matrix().clone()).collect());
        }
        total = total.checked_add(homs[&(i - 1)].len().checked_mul(homs[&i].len())?)?;
        if total > SEARCH_BUDGET {
            return None;
        }
    }
    for &i in &degs {
        for s0 in &homs[&(i - 1)] {
            for s1 in &homs[&i] {
                let e = c.diff(i + 1).mul(s1).add(&s0.mul(&c.diff(i))).add(&Matrix::identity(c.ring(), c.gens(i)));
                if !is_auto(c.module(i), &e) {
                    let h = Homotopy { components: vec![(i - 1, s0.clone()), (i, s1.clone())] };
                    return Some(MinimalityVerdict {
                        verdict: Minimality::No(h),
                        note: format!("minimal: exhaustive search found a failure in degree {i}"),
                    });
                }
            }
        }
    }
    Some(MinimalityVerdict {
        verdict: Minimality::Yes,
        note: format!("minimal: exhaustive over {total} homotopy pairs"),
    })
}

/// Single entries `±1, ±2, ±3` first, then seeded random small matrices.
fn sample(c: &ChainComplex) -> Option<Homotopy> {
    let r = c.ring();
    let try_pair = |i: i64, s0: &Matrix, s1: &Matrix| -> Option<Homotopy> {
        let ok = |d: i64, s: &Matrix| s.is_zero() || ModuleHom::new(c.module(d), c.module(d + 1), s.clone()).is_ok();
        if !ok(i - 1, s0) || !ok(i, s1) {
            return None;
        }
        let e = c.diff(i + 1).mul(s1).add(&s0.mul(&c.diff(i))).add(&Matrix::identity(r, c.gens(i)));
        if is_auto(c.module(i), &e) {
            return None;
        }
        let comps = [(i - 1, s0.clone()), (i, s1.clone())].into_iter().filter(|(_, m)| !m.is_zero()).collect();
        Some(Homotopy { components: comps })
    };
    let shape = |d: i64| (c.gens(d + 1), c.gens(d));
    for i in c.degrees() {
        if c.gens(i) == 0 {
            continue;
        }
        for v in [1i64, -1, 2, -2, 3, -3] {
            for (which, d) in [(1, i), (0, i - 1)] {
                let (rows, cols) = shape(d);
                for j in 0..rows * cols {
                    let mut s = Matrix::zeros(r, rows, cols);
                    s.set(j / cols, j % cols, r.from_i64(v));
                    let (s0, s1) = if which == 1 {
                        (Matrix::zeros(r, shape(i - 1).0, shape(i - 1).1), s)
                    } else {
                        (s, Matrix::zeros(r, shape(i).0, shape(i).1))
                    };
                    if let Some(h) = try_pair(i, &s0, &s1) {
                        return Some(h);
                    }
                }
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    for i in c.degrees() {
        if c.gens(i) == 0 {
            continue;
        }
        for _ in 0..64 {
            let mut rand = |d: i64| {
                let (rows, cols) = shape(d);
                Matrix::from_fn(r, rows, cols, |_, _| r.from_i64(rng.gen_range(-3..=3)))
            };
            let (s0, s1) = (rand(i - 1), rand(i));
            if let Some(h) = try_pair(i, &s0, &s1) {
                return Some(h);
            }
        }
    }
    None
}

/// Flags for one complex together with the decision paths taken.
#[derive(Clone, Debug)]
pub struct DiagnosisReport {
    pub acyclic: bool,
    pub pure_acyclic: bool,
    pub contractible: bool,
    pub split_minimal: Tri,
    pub pure_minimal: Tri,
    pub minimal: Minimality,
    pub notes: Vec<String>,
}

pub fn diagnose(c: &ChainComplex) -> DiagnosisReport {
    let acyclic = c.is_acyclic();
    let pure_acyclic = acyclic && c.cycle_sequences_split();
    let contractible = c.is_contractible();
    let sm = split_minimality(c);
    let m = minimality(c);
    let report = DiagnosisReport {
        acyclic,
        pure_acyclic,
        contractible,
        split_minimal: sm.verdict,
        pure_minimal: sm.verdict,
        minimal: m.verdict,
        notes: vec![
            "pure_acyclic: acyclic with every cycle inclusion split".into(),
            format!("split_minimal: {}", sm.note),
            PURE_MINIMAL_NOTE.into(),
            m.note,
        ],
    };
    assert!(
        !matches!(report.minimal, Minimality::Yes) || report.split_minimal.is_true(),
        "minimal complex that is not split-minimal"
    );
    assert!(!report.pure_minimal.is_true() || report.split_minimal.is_true());
    assert!(!(report.pure_acyclic && report.pure_minimal.is_true()) || c.is_zero(), "pure-acyclic pure-minimal complex is nonzero");
    assert!(pure_acyclic == contractible || !c.is_visibly_free() || c.is_periodic());
    report
}

struct HomotopyJson<'a>(&'a Homotopy);

impl Serialize for HomotopyJson<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut m = s.serialize_map(Some(self.0.components.len()))?;
        for (d, mat) in &self.0.components {
            m.serialize_entry(&d.to_string(), mat)?;
        }
        m.end()
    }
}

impl Serialize for Homotopy {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        HomotopyJson(self).serialize(s)
    }
}

impl Serialize for DiagnosisReport {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("DiagnosisReport", 8)?;
        st.serialize_field("acyclic", &self.acyclic)?;
        st.serialize_field("pure_acyclic", &self.pure_acyclic)?;
        st.serialize_field("contractible", &self.contractible)?;
        st.serialize_field("split_minimal", &self.split_minimal)?;
        st.serialize_field("pure_minimal", &self.pure_minimal)?;
        st.serialize_field("minimal", self.minimal.label())?;
        st.serialize_field("minimal_witness", &self.minimal.witness())?;
        st.serialize_field("notes", &self.notes)?;
        st.end()
    }
}

impl std::fmt::Display for DiagnosisReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "acyclic={}", self.acyclic)?;
        writeln!(f, "pure_acyclic={}", self.pure_acyclic)?;
        writeln!(f, "contractible={}", self.contractible)?;
        writeln!(f, "split_minimal={}", self.split_minimal)?;
        writeln!(f, "pure_minimal={}", self.pure_minimal)?;
        write!(f, "minimal={}", self.minimal.label())?;
        if let Some(h) = self.minimal.witness() {
            for (d, m) in &h.components {
                write!(f, "\n  witness σ_{d} = {m}")?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::Shape;

    fn dold() -> ChainComplex {
        let r = RingSpec::int_mod(4).unwrap();
        ChainComplex::new(&r, Shape::Periodic { period: 1 }, [(0, FPModule::free(&r, 1))], [(0, Matrix::from_ints(&r, &[vec![2]]))]).unwrap()
    }

    fn exa_f() -> ChainComplex {
        let r = RingSpec::invert(&[5]).unwrap();
        ChainComplex::free_bounded(&r, 0, &[1, 1], vec![Matrix::from_ints(&r, &[vec![2]])]).unwrap()
    }

    #[test]
    fn disk_reduces_to_zero() {
        let r = RingSpec::Int;
        let disk = ChainComplex::disk(&FPModule::free(&r, 1), 1);
        let red = reduce(&disk).unwrap();
        assert_eq!(red.moves.len(), 1);
        assert_eq!(red.reduced.total_rank(), 0);
        red.verify().unwrap();
        assert_eq!(is_split_minimal(&disk), Tri::False);
        let m = minimality(&disk);
        let Minimality::No(h) = m.verdict else { panic!("{m:?}") };
        assert!(!failing_degrees(&disk, &h).is_empty());
    }

    #[test]
    fn dold_is_minimal() {
        let d = dold();
        let red = reduce(&d).unwrap();
        assert!(red.moves.is_empty());
        assert_eq!(red.reduced, d);
        let m = minimality(&d);
        assert!(matches!(m.verdict, Minimality::Yes), "{m:?}");
        assert!(m.note.contains("16"), "{}", m.note);
        let rep = diagnose(&d);
        assert!(rep.acyclic && !rep.pure_acyclic && !rep.contractible);
        assert!(rep.split_minimal.is_true() && rep.pure_minimal.is_true());
    }

    #[test]
    fn example_f_is_split_minimal_not_minimal() {
        let f = exa_f();
        assert_eq!(is_split_minimal(&f), Tri::True);
        assert_eq!(is_pure_minimal(&f), Tri::True);
        let Minimality::No(h) = is_minimal(&f) else { panic!() };
        assert_eq!(h.components.len(), 1);
        assert_eq!(h.components[0].1, Matrix::from_ints(f.ring(), &[vec![1]]));
        let e = homotopy_endomorphism(&f, &h, 0);
        assert_eq!(e, Matrix::from_ints(f.ring(), &[vec![3]]));
    }

    #[test]
    fn scrambled_sum_reduces_to_divisor_two() {
        let r = RingSpec::Int;
        // (Z →2 Z) ⊕ (Z →1 Z) conjugated by unimodular matrices
        let d = Matrix::from_ints(&r, &[vec![2, 0], vec![0, 1]]);
        let p = Matrix::from_ints(&r, &[vec![2, 1], vec![1, 1]]);
        let q = Matrix::from_ints(&r, &[vec![1, 3], vec![0, 1]]);
        let c = ChainComplex::free_bounded(&r, 0, &[2, 2], vec![p.mul(&d).mul(&q)]).unwrap();
        let red = reduce(&c).unwrap();
        red.verify().unwrap();
        let dr = red.reduced.diff(1).into_owned();
        assert_eq!(dr.shape(), (1, 1));
        assert_eq!(snf(&dr).divisors, vec![r.from_i64(2)]);
    }

    #[test]
    fn composite_modulus_splits_by_factor() {
        let r = RingSpec::int_mod(6).unwrap();
        let c = ChainComplex::free_bounded(&r, 0, &[1, 1], vec![Matrix::from_ints(&r, &[vec![2]])]).unwrap();
        let red = reduce(&c).unwrap();
        red.verify().unwrap();
        assert_eq!(red.moves.len(), 1);
        // over Z/2 the differential vanishes; over Z/3 it is a unit
        assert_eq!(red.reduced.module(0).canonical_form().to_string(), "R/(2)");
        assert!(red.reduced.has_zero_differentials());
        assert_eq!(is_split_minimal(&c), Tri::False);
    }

    #[test]
    fn periodic_period_one_unrolls() {
        let r = RingSpec::int_mod(4).unwrap();
        let c = ChainComplex::new(
            &r,
            Shape::Periodic { period: 1 },
            [(0, FPModule::free(&r, 2))],
            [(0, Matrix::from_ints(&r, &[vec![0, 1], vec![0, 0]]))],
        )
        .unwrap();
        let red = reduce(&c).unwrap();
        red.verify().unwrap();
        assert_eq!(red.source.shape(), Shape::Periodic { period: 2 });
        assert_eq!(red.reduced.total_rank(), 0);
        assert_eq!(red.moves.len(), 2);
        assert!(c.is_contractible());
    }

    #[test]
    fn non_projective_disk_search() {
        let r = RingSpec::Int;
        let m = FPModule::cyclic(&r, &r.from_i64(4));
        let disk = ChainComplex::disk(&m, 1);
        assert!(matches!(reduce(&disk), Err(Error::NonProjective { .. })));
        let sm = split_minimality(&disk);
        assert_eq!(sm.verdict, Tri::False);
        let Minimality::No(h) = is_minimal(&disk) else { panic!() };
        assert!(!failing_degrees(&disk, &h).is_empty());
        // Z/4 →2 Z/4 has no split disk
        let c = ChainComplex::new(&r, Shape::Bounded { min: 0, max: 1 }, [(0, m.clone()), (1, m.clone())], [(1, Matrix::from_ints(&r, &[vec![2]]))])
            .unwrap();
        assert_eq!(is_split_minimal(&c), Tri::True);
        // Z/4 ⊕ Z/2 → Z/2 projecting onto the second summand does split
        let src = FPModule::from_divisors(&r, &[r.from_i64(2), r.from_i64(4)], 0);
        let tgt = FPModule::cyclic(&r, &r.from_i64(2));
        let c = ChainComplex::new(&r, Shape::Bounded { min: 0, max: 1 }, [(0, tgt), (1, src)], [(1, Matrix::from_ints(&r, &[vec![1, 0]]))]).unwrap();
        assert!(c.is_valid());
        assert_eq!(is_split_minimal(&c), Tri::False);
    }
}
