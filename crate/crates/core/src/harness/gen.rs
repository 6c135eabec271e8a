//! Seeded random modules, complexes, maps and short exact sequences.
//!
//! Complexes are assembled from pieces whose homology is known (spheres,
//! disks, two-term pieces, short exact sequences) and then scrambled by
//! random invertible base changes, so d² = 0 holds by construction.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::complex::{chain_map_generators, ChainComplex, ChainMap, Shape};
use crate::int::Int;
use crate::matrix::Matrix;
use crate::module::FPModule;
use crate::ring::{Elem, RingSpec};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Style {
    FreeRandom,
    DiskSphereSumScrambled,
    ConeOfRandomMap,
    AcyclicByConstruction,
}

impl std::str::FromStr for Style {
    type Err = String;
    fn from_str(s: &str) -> Result<Style, String> {
        match s {
            "free_random" => Ok(Style::FreeRandom),
            "disk_sphere_sum_scrambled" => Ok(Style::DiskSphereSumScrambled),
            "cone_of_random_map" => Ok(Style::ConeOfRandomMap),
            "acyclic_by_construction" => Ok(Style::AcyclicByConstruction),
            _ => Err(format!("unknown style {s:?}")),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenProfile {
    pub ring: RingSpec,
    /// Number of degrees, at most.
    pub max_length: usize,
    pub max_rank: usize,
    pub entry_bound: i64,
    pub style: Style,
    /// Restrict pieces to free modules.
    pub free_only: bool,
    pub seed: u64,
}

impl GenProfile {
    pub fn new(ring: &RingSpec, style: Style, seed: u64) -> GenProfile {
        GenProfile {
            ring: ring.clone(),
            max_length: 5,
            max_rank: 4,
            entry_bound: 9,
            style,
            free_only: false,
            seed,
        }
    }

    pub fn sized(mut self, max_length: usize, max_rank: usize) -> GenProfile {
        self.max_length = max_length.max(1);
        self.max_rank = max_rank.max(1);
        self
    }

    pub fn free(mut self) -> GenProfile {
        self.free_only = true;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> GenProfile {
        self.seed = seed;
        self
    }
}

/// Seed of case `index` in a suite run with `seed`; independent of scheduling.
pub fn case_seed(seed: u64, name: &str, index: u64) -> u64 {
    // FNV-1a of the name keeps different suites on different streams
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in name.bytes() {
        h = (h ^ b as u64).wrapping_mul(0x0000_0100_0000_01b3);
    }
    splitmix(splitmix(seed ^ h).wrapping_add(index))
}

fn splitmix(x: u64) -> u64 {
    let mut z = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// A random source tied to one ring and one set of size bounds.
pub struct Gen {
    pub ring: RingSpec,
    pub bound: i64,
    pub rng: ChaCha8Rng,
}

impl Gen {
    pub fn new(ring: &RingSpec, bound: i64, seed: u64) -> Gen {
        Gen { ring: ring.clone(), bound: bound.max(1), rng: ChaCha8Rng::seed_from_u64(seed) }
    }

    pub fn from_profile(p: &GenProfile) -> Gen {
        Gen::new(&p.ring, p.entry_bound, p.seed)
    }

    pub fn coin(&mut self, p: f64) -> bool {
        self.rng.gen_bool(p)
    }

    pub fn below(&mut self, n: usize) -> usize {
        self.rng.gen_range(0..n.max(1))
    }

    pub fn range(&mut self, lo: i64, hi: i64) -> i64 {
        self.rng.gen_range(lo..=hi)
    }

    pub fn elem(&mut self) -> Elem {
        let r = self.ring.clone();
        let b = self.bound;
        match &r {
            RingSpec::IntMod(n) => r.from_i64(self.rng.gen_range(0..*n) as i64),
            RingSpec::Int => r.from_i64(self.rng.gen_range(-b..=b)),
            RingSpec::IntInvert(ps) => {
                let num = Int::from(self.rng.gen_range(-b..=b));
                let den = if self.rng.gen_bool(0.25) { Int::from(*ps.choose(&mut self.rng).unwrap()) } else { Int::ONE };
                r.fraction(&num, &den).unwrap()
            }
            RingSpec::IntLocalAt(p) => {
                let num = Int::from(self.rng.gen_range(-b..=b));
                let dens: Vec<i64> = [1, 1, 1, 2, 3, 5, 7].into_iter().filter(|d| d % *p as i64 != 0).collect();
                let den = Int::from(*dens.choose(&mut self.rng).unwrap());
                r.fraction(&num, &den).unwrap()
            }
        }
    }

    pub fn unit(&mut self) -> Elem {
        let r = self.ring.clone();
        loop {
            let e = match &r {
                RingSpec::Int => r.from_i64(if self.rng.gen_bool(0.5) { 1 } else { -1 }),
                RingSpec::IntInvert(ps) => {
                    let p = *ps.choose(&mut self.rng).unwrap() as i64;
                    let v = [1, 1, p][self.rng.gen_range(0..3)];
                    let s = if self.rng.gen_bool(0.5) { 1 } else { -1 };
                    if self.rng.gen_bool(0.5) {
                        r.from_i64(s * v)
                    } else {
                        r.fraction(&Int::from(s), &Int::from(v)).unwrap()
                    }
                }
                _ => self.elem(),
            };
            if r.is_unit(&e) {
                return e;
            }
        }
    }

    /// A nonzero non-unit, or `None` when the ring has none (a field).
    pub fn nonunit(&mut self) -> Option<Elem> {
        let r = self.ring.clone();
        if let RingSpec::IntMod(n) = r {
            let ds: Vec<u64> = (2..n).filter(|d| n % d == 0).collect();
            return ds.choose(&mut self.rng).map(|&d| r.from_i64(d as i64));
        }
        let small = match &r {
            RingSpec::IntInvert(ps) => (2..=self.bound.max(2)).filter(|v| ps.iter().all(|p| v % *p as i64 != 0)).collect::<Vec<_>>(),
            RingSpec::IntLocalAt(p) => vec![*p as i64, (*p * *p) as i64],
            _ => (2..=self.bound.max(2)).collect(),
        };
        small.choose(&mut self.rng).map(|&v| r.from_i64(v))
    }

    pub fn matrix(&mut self, rows: usize, cols: usize) -> Matrix {
        let r = self.ring.clone();
        Matrix::from_fn(&r, rows, cols, |_, _| self.elem())
    }

    /// A random invertible matrix together with its inverse.
    pub fn unimodular(&mut self, n: usize) -> (Matrix, Matrix) {
        let r = self.ring.clone();
        let mut t = Matrix::identity(&r, n);
        let mut ti = Matrix::identity(&r, n);
        if n == 0 {
            return (t, ti);
        }
        for _ in 0..3 * n {
            match self.rng.gen_range(0..4) {
                0 | 1 if n > 1 => {
                    let i = self.below(n);
                    let j = (i + 1 + self.below(n - 1)) % n;
                    let c = r.from_i64(self.rng.gen_range(-3..=3));
                    t.add_row_multiple(i, j, &c);
                    ti.add_col_multiple(j, i, &r.neg(&c));
                }
                2 if n > 1 => {
                    let i = self.below(n);
                    let j = (i + 1 + self.below(n - 1)) % n;
                    t.swap_rows(i, j);
                    ti.swap_cols(i, j);
                }
                _ => {
                    let i = self.below(n);
                    let u = self.unit();
                    t.scale_row(i, &u);
                    ti.scale_col(i, &r.inv(&u).unwrap());
                }
            }
        }
        debug_assert!(t.mul(&ti).is_identity());
        (t, ti)
    }

    /// `R` or `R/(a)` for a random non-unit `a`.
    pub fn cyclic_module(&mut self, free_only: bool) -> FPModule {
        let r = self.ring.clone();
        if free_only || self.coin(0.4) {
            return FPModule::free(&r, 1);
        }
        match self.nonunit() {
            Some(a) => FPModule::cyclic(&r, &a),
            None => FPModule::free(&r, 1),
        }
    }

    /// A finitely presented module on at most `max_gens` generators.
    pub fn module(&mut self, max_gens: usize) -> FPModule {
        let r = self.ring.clone();
        let g = 1 + self.below(max_gens.max(1));
        let k = self.below(g + 1);
        let rel = self.matrix(g, k);
        FPModule::new(&r, g, rel).unwrap()
    }

    /// A module with at most `max_order` elements over a finite ring.
    pub fn small_module(&mut self, max_order: u64) -> FPModule {
        loop {
            let m = self.module(3);
            if m.order().is_some_and(|o| o <= max_order) {
                return m;
            }
        }
    }

    pub fn complex(&mut self, p: &GenProfile) -> Generated {
        match p.style {
            Style::FreeRandom => self.free_random(p),
            Style::DiskSphereSumScrambled => self.disk_sphere(p),
            Style::ConeOfRandomMap => self.cone_of_random_map(p),
            Style::AcyclicByConstruction => self.acyclic(p),
        }
    }

    fn layout(&mut self, p: &GenProfile) -> (i64, i64) {
        let len = 1 + self.below(p.max_length) as i64;
        let lo = self.range(-1, 1);
        (lo, lo + len - 1)
    }

    fn free_random(&mut self, p: &GenProfile) -> Generated {
        let (lo, hi) = self.layout(p);
        let mut b = Builder::new(&self.ring, lo, hi, p.max_rank);
        let r = self.ring.clone();
        for _ in 0..2 * p.max_rank * (hi - lo + 1) as usize {
            let top = self.range(lo, hi);
            match self.below(4) {
                0 => {
                    b.push_sphere(&FPModule::free(&r, 1), top);
                }
                1 | 2 => {
                    let a = if self.coin(0.3) { self.unit() } else { self.elem() };
                    b.push_chain(top, &[a]);
                }
                _ => {
                    let chain = self.chain();
                    b.push_chain(top, &chain);
                }
            }
        }
        self.finish(b)
    }

    /// Entries `a₁, a₂, …` with `a_k a_{k+1} = 0`, so that `R → R → ⋯` is a complex.
    fn chain(&mut self) -> Vec<Elem> {
        let r = self.ring.clone();
        let len = 2 + self.below(2);
        let mut out = vec![self.elem()];
        while out.len() < len {
            let prev = out.last().unwrap().clone();
            let next = match r.modulus() {
                Some(n) => {
                    let g = Int::from(n).gcd(&r.lift(&prev)).to_u64().unwrap();
                    let step = n / g.max(1);
                    r.from_i64((step * self.rng.gen_range(0..g.max(1))) as i64)
                }
                None if prev.is_zero() => self.elem(),
                None => r.zero(),
            };
            out.push(next);
        }
        out
    }

    fn disk_sphere(&mut self, p: &GenProfile) -> Generated {
        let (lo, hi) = self.layout(p);
        let mut b = Builder::new(&self.ring, lo, hi, p.max_rank);
        for _ in 0..p.max_rank * (hi - lo + 1) as usize {
            let top = self.range(lo, hi);
            let m = self.cyclic_module(p.free_only);
            if self.coin(0.5) {
                b.push_sphere(&m, top);
            } else {
                b.push_disk(&m, top);
            }
        }
        self.finish(b)
    }

    fn cone_of_random_map(&mut self, p: &GenProfile) -> Generated {
        let small = GenProfile { max_rank: (p.max_rank / 2).max(1), max_length: p.max_length.saturating_sub(1).max(1), ..p.clone() };
        let sub = if p.free_only { Style::FreeRandom } else { Style::DiskSphereSumScrambled };
        let small = GenProfile { style: sub, ..small };
        let l = self.complex(&small).complex;
        let n = self.complex(&small).complex;
        let f = self.chain_map(&l, &n);
        let c = crate::complex::cone(&f).cone;
        Generated { complex: c, spheres: None }
    }

    fn acyclic(&mut self, p: &GenProfile) -> Generated {
        let (lo, hi) = self.layout(p);
        let hi = hi.max(lo + 1);
        let mut b = Builder::new(&self.ring, lo, hi, p.max_rank);
        let r = self.ring.clone();
        for _ in 0..p.max_rank * (hi - lo + 1) as usize {
            let top = self.range(lo + 1, hi);
            match self.below(3) {
                0 => {
                    let m = self.cyclic_module(p.free_only);
                    b.push_disk(&m, top);
                }
                1 if !p.free_only && top - 2 >= lo => {
                    if let Some(s) = self.short_exact(&r) {
                        b.push_three(top, s);
                    }
                }
                _ => {
                    let u = self.unit();
                    b.push_chain(top, &[u]);
                }
            }
        }
        self.finish(b)
    }

    /// `0 → R/(b) → R/(ab) → R/(a) → 0` with maps `a` and `1`.
    fn short_exact(&mut self, r: &RingSpec) -> Option<[(FPModule, Elem); 3]> {
        let a = self.nonunit()?;
        let b = match r.modulus() {
            Some(n) => {
                let rest = n / Int::from(n).gcd(&r.lift(&a)).to_u64().unwrap();
                let ds: Vec<u64> = (1..=rest).filter(|d| rest % d == 0).collect();
                r.from_i64(*ds.choose(&mut self.rng).unwrap() as i64)
            }
            None if self.coin(0.3) => r.zero(),
            None => self.nonunit()?,
        };
        let ab = r.mul(&a, &b);
        let m = |d: &Elem| if d.is_zero() { FPModule::free(r, 1) } else { FPModule::cyclic(r, d) };
        Some([(m(&b), a.clone()), (m(&ab), r.one()), (m(&a), r.zero())])
    }

    fn finish(&mut self, b: Builder) -> Generated {
        let spheres = b.spheres.clone();
        let c = b.build();
        let c = self.scramble(&c).0;
        Generated { complex: c, spheres: Some(spheres) }
    }

    /// `C` conjugated by random invertible matrices, and the isomorphism onto it.
    pub fn scramble(&mut self, c: &ChainComplex) -> (ChainComplex, ChainMap) {
        let r = c.ring().clone();
        let degs = c.degrees();
        let mut t = BTreeMap::new();
        for &d in &degs {
            t.insert(d, self.unimodular(c.gens(d)));
        }
        let key = |d: i64| match c.shape() {
            Shape::Periodic { period } => d.rem_euclid(period as i64),
            _ => d,
        };
        let mods: Vec<(i64, FPModule)> = degs
            .iter()
            .map(|&d| {
                let rel = t[&d].0.mul(c.module(d).relations());
                (d, FPModule::new(&r, c.gens(d), rel).unwrap())
            })
            .collect();
        let diffs: Vec<(i64, Matrix)> = degs
            .iter()
            .filter(|&&d| c.gens(d) > 0 && c.gens(d - 1) > 0)
            .map(|&d| (d, t[&key(d - 1)].0.mul(&c.diff(d)).mul(&t[&d].1)))
            .collect();
        let out = ChainComplex::new(&r, c.shape(), mods, diffs).unwrap();
        let iso = ChainMap::new(c, &out, |d| t[&key(d)].0.clone()).expect("conjugation is a chain map");
        (out, iso)
    }

    /// A random combination of generators of the chain maps `L → N`.
    pub fn chain_map(&mut self, l: &ChainComplex, n: &ChainComplex) -> ChainMap {
        let gens = chain_map_generators(l, n);
        let mut f = ChainMap::zero(l, n);
        for g in &gens {
            let c = self.elem();
            f = f.add(&g.scale(&c));
        }
        f
    }

    /// A random submodule spanned by at most `k` random elements, as generator columns.
    pub fn sub_generators(&mut self, m: &FPModule, k: usize) -> Matrix {
        let cols = 1 + self.below(k.max(1));
        self.matrix(m.gens(), cols)
    }
}

/// A generated complex and, for sphere-and-disk sums, its sphere content.
#[derive(Clone, Debug)]
pub struct Generated {
    pub complex: ChainComplex,
    pub spheres: Option<Vec<(i64, FPModule)>>,
}

impl Generated {
    /// Homology predicted by the construction, per degree.
    pub fn expected_homology(&self) -> Option<BTreeMap<i64, FPModule>> {
        let spheres = self.spheres.as_ref()?;
        let r = self.complex.ring();
        let mut out: BTreeMap<i64, Vec<&FPModule>> = BTreeMap::new();
        for (d, m) in spheres {
            out.entry(*d).or_default().push(m);
        }
        Some(out.into_iter().map(|(d, ms)| (d, FPModule::direct_sum(r, &ms))).collect())
    }
}

/// Accumulates pieces degree by degree within a rank budget.
struct Builder {
    ring: RingSpec,
    lo: i64,
    hi: i64,
    max_rank: usize,
    mods: BTreeMap<i64, Vec<FPModule>>,
    /// (target degree, source index, target index, entry), indices into `mods`
    entries: Vec<(i64, usize, usize, Elem)>,
    spheres: Vec<(i64, FPModule)>,
}

impl Builder {
    fn new(ring: &RingSpec, lo: i64, hi: i64, max_rank: usize) -> Builder {
        Builder { ring: ring.clone(), lo, hi, max_rank, mods: BTreeMap::new(), entries: Vec::new(), spheres: Vec::new() }
    }

    fn room(&self, degs: impl IntoIterator<Item = i64>) -> bool {
        degs.into_iter().all(|d| d >= self.lo && d <= self.hi && self.mods.get(&d).map_or(0, Vec::len) < self.max_rank)
    }

    fn add(&mut self, d: i64, m: &FPModule) -> usize {
        let v = self.mods.entry(d).or_default();
        v.push(m.clone());
        v.len() - 1
    }

    fn push_sphere(&mut self, m: &FPModule, d: i64) {
        if self.room([d]) {
            self.add(d, m);
            self.spheres.push((d, m.clone()));
        }
    }

    fn push_disk(&mut self, m: &FPModule, top: i64) {
        if self.room([top, top - 1]) {
            let s = self.add(top, m);
            let t = self.add(top - 1, m);
            let one = self.ring.one();
            self.entries.push((top - 1, s, t, one));
        }
    }

    /// Free `R → R → ⋯` starting in degree `top` with the given entries.
    fn push_chain(&mut self, top: i64, entries: &[Elem]) {
        let degs: Vec<i64> = (0..=entries.len() as i64).map(|k| top - k).collect();
        if !self.room(degs.iter().copied()) {
            return;
        }
        let free = FPModule::free(&self.ring, 1);
        let idx: Vec<usize> = degs.iter().map(|&d| self.add(d, &free)).collect();
        for (k, a) in entries.iter().enumerate() {
            self.entries.push((degs[k + 1], idx[k], idx[k + 1], a.clone()));
        }
    }

    fn push_three(&mut self, top: i64, s: [(FPModule, Elem); 3]) {
        if !self.room([top, top - 1, top - 2]) {
            return;
        }
        let a = self.add(top, &s[0].0);
        let b = self.add(top - 1, &s[1].0);
        let c = self.add(top - 2, &s[2].0);
        self.entries.push((top - 1, a, b, s[0].1.clone()));
        self.entries.push((top - 2, b, c, s[1].1.clone()));
    }

    fn build(self) -> ChainComplex {
        let r = &self.ring;
        // pieces are one-generator modules, so indices are generator indices
        let mods: Vec<(i64, FPModule)> = self
            .mods
            .iter()
            .map(|(&d, ms)| (d, FPModule::direct_sum(r, &ms.iter().collect::<Vec<_>>())))
            .collect();
        let gens = |d: i64| self.mods.get(&d).map_or(0, Vec::len);
        let mut diffs: BTreeMap<i64, Matrix> = BTreeMap::new();
        for (tgt, s, t, e) in &self.entries {
            let m = diffs.entry(tgt + 1).or_insert_with(|| Matrix::zeros(r, gens(*tgt), gens(tgt + 1)));
            m.set(*t, *s, e.clone());
        }
        ChainComplex::new(r, Shape::Bounded { min: self.lo, max: self.hi }, mods, diffs).unwrap()
    }
}

/// A random chain complex for a profile.
pub fn gen_complex(p: &GenProfile) -> ChainComplex {
    Gen::from_profile(p).complex(p).complex
}
