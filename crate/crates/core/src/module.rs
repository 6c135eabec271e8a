//! Finitely presented modules and their homomorphisms.
//!
//! A module with `g` generators is the cokernel of its relation matrix
//! (`g` rows, one column per relation). Elements are column vectors in
//! generator coordinates, and a homomorphism `M → N` is the matrix sending
//! generators of `M` to elements of `N` (rows indexed by generators of `N`).
//!
//! Purity of short exact sequences is decided as splitness. All supported
//! rings are noetherian and all modules finitely presented, and there a
//! pure sequence with finitely presented cokernel splits; splitness always
//! implies purity. The tensor-test definition survives as a witness on the
//! negative side.

use crate::error::{same_ring, shape, Error, Result};
use crate::int::Int;
use crate::linalg::{in_span, kernel, snf, solve_unchecked, LinearSystem, Term};
use crate::matrix::Matrix;
use crate::ring::{divisors_of, factorize, Elem, RingSpec};

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FPModule {
    ring: RingSpec,
    relations: Matrix,
}

/// Elementary divisor classification: `M ≅ ⊕ R/(dᵢ) ⊕ R^free_rank` with every
/// `dᵢ` a nonzero non-unit in canonical associate form, `d₁ | d₂ | …`.
#[derive(Clone, PartialEq, Eq, Hash, Debug, serde::Serialize)]
pub struct CanonicalForm {
    pub divisors: Vec<Elem>,
    pub free_rank: usize,
}

impl CanonicalForm {
    pub fn is_zero(&self) -> bool {
        self.divisors.is_empty() && self.free_rank == 0
    }
}

impl std::fmt::Display for CanonicalForm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut parts: Vec<String> = self.divisors.iter().map(|d| format!("R/({d})")).collect();
        match self.free_rank {
            0 => {}
            1 => parts.push("R".into()),
            r => parts.push(format!("R^{r}")),
        }
        write!(f, "{}", parts.join(" ⊕ "))
    }
}

/// A diagonal presentation of a module together with the change of
/// generators relating it to the original one.
#[derive(Clone, Debug)]
pub struct Simplified {
    /// Generators `0..torsion` carry relations `diag(divisors)`; the
    /// remaining generators are free.
    pub module: FPModule,
    /// Per new generator: its divisor, zero for free generators.
    pub divisors: Vec<Elem>,
    /// Original coordinates → new coordinates.
    pub to: Matrix,
    /// New coordinates → original coordinates.
    pub from: Matrix,
}

impl FPModule {
    pub fn new(ring: &RingSpec, generators: usize, relations: Matrix) -> Result<FPModule> {
        same_ring(ring, relations.ring())?;
        if relations.rows() != generators {
            return Err(shape(format!(
                "relation matrix has {} rows for {} generators",
                relations.rows(),
                generators
            )));
        }
        Ok(FPModule { ring: ring.clone(), relations })
    }

    pub(crate) fn from_relations(relations: Matrix) -> FPModule {
        FPModule { ring: relations.ring().clone(), relations }
    }

    pub fn free(ring: &RingSpec, rank: usize) -> FPModule {
        FPModule { ring: ring.clone(), relations: Matrix::zeros(ring, rank, 0) }
    }

    pub fn zero(ring: &RingSpec) -> FPModule {
        FPModule::free(ring, 0)
    }

    /// `R/(d)`.
    pub fn cyclic(ring: &RingSpec, d: &Elem) -> FPModule {
        FPModule::from_relations(Matrix::new(ring, 1, 1, vec![d.clone()]).expect("canonical element"))
    }

    /// `⊕ R/(dᵢ) ⊕ R^free_rank`.
    pub fn from_divisors(ring: &RingSpec, divisors: &[Elem], free_rank: usize) -> FPModule {
        let g = divisors.len() + free_rank;
        FPModule::from_relations(Matrix::diagonal(ring, g, divisors.len(), divisors))
    }

    pub fn ring(&self) -> &RingSpec {
        &self.ring
    }

    pub fn gens(&self) -> usize {
        self.relations.rows()
    }

    pub fn relations(&self) -> &Matrix {
        &self.relations
    }

    /// No relations at all.
    pub fn is_visibly_free(&self) -> bool {
        self.relations.is_zero()
    }

    /// Whether the column vectors of `x` are all zero in the module.
    pub fn is_zero_element(&self, x: &Matrix) -> bool {
        x.is_zero() || in_span(&self.relations, x)
    }

    pub fn direct_sum(ring: &RingSpec, parts: &[&FPModule]) -> FPModule {
        let rels: Vec<&Matrix> = parts.iter().map(|m| &m.relations).collect();
        FPModule::from_relations(Matrix::block_diag(ring, &rels))
    }

    /// The submodule of `R^a / span(q)` generated by the columns of `g`,
    /// presented on those columns.
    pub fn generated_by(g: &Matrix, q: &Matrix) -> FPModule {
        let k = g.cols();
        if k == 0 {
            return FPModule::zero(g.ring());
        }
        let syz = kernel(&Matrix::hstack(&[g, q]));
        FPModule::from_relations(syz.block(0, 0, k, syz.cols()))
    }

    pub fn simplify(&self) -> Simplified {
        let r = &self.ring;
        let g = self.gens();
        let s = snf(&self.relations);
        let mut torsion = Vec::new();
        let mut free = Vec::new();
        for i in 0..g {
            let d = s.divisors.get(i).cloned().unwrap_or_else(|| r.zero());
            if d.is_zero() {
                free.push(i);
            } else if !r.is_unit(&d) {
                torsion.push((i, d));
            }
        }
        let mut keep: Vec<usize> = torsion.iter().map(|(i, _)| *i).collect();
        keep.extend(&free);
        let mut divisors: Vec<Elem> = torsion.iter().map(|(_, d)| d.clone()).collect();
        let tdivs = divisors.clone();
        divisors.extend(free.iter().map(|_| r.zero()));
        Simplified {
            module: FPModule::from_divisors(r, &tdivs, free.len()),
            divisors,
            to: s.u.select_rows(&keep),
            from: s.u_inv.select_cols(&keep),
        }
    }

    pub fn canonical_form(&self) -> CanonicalForm {
        let s = self.simplify();
        let free_rank = s.divisors.iter().filter(|d| d.is_zero()).count();
        let divisors = s.divisors.into_iter().filter(|d| !d.is_zero()).collect();
        CanonicalForm { divisors, free_rank }
    }

    pub fn is_zero(&self) -> bool {
        if self.gens() == 0 {
            return true;
        }
        self.canonical_form().is_zero()
    }

    pub fn is_free(&self) -> bool {
        self.canonical_form().divisors.is_empty()
    }

    pub fn is_isomorphic(&self, other: &FPModule) -> bool {
        self.ring == other.ring && self.canonical_form() == other.canonical_form()
    }

    /// Base change along ℤ/n → ℤ/q for q | n (or ℤ → ℤ/q).
    pub fn base_change(&self, target: &RingSpec) -> FPModule {
        FPModule::from_relations(self.relations.reduce_into(target))
    }

    /// Number of elements, if finite and small enough to count.
    pub fn order(&self) -> Option<u64> {
        let cf = self.canonical_form();
        // R/(d) has d elements for canonical d, including over ℤ/n
        let fsize = match &self.ring {
            RingSpec::IntMod(n) => Some(*n),
            RingSpec::Int => None,
            _ => return if cf.is_zero() { Some(1) } else { None },
        };
        let dsize = |d: &Elem| d.num().to_u64();
        let mut total: u64 = 1;
        for d in &cf.divisors {
            total = total.checked_mul(dsize(d)?)?;
        }
        for _ in 0..cf.free_rank {
            total = total.checked_mul(fsize?)?;
        }
        Some(total)
    }

    /// All elements as columns in generator coordinates; only for finite
    /// modules with at most `limit` elements.
    pub fn elements(&self, limit: u64) -> Result<Vec<Matrix>> {
        let order = self
            .order()
            .ok_or_else(|| Error::NotFinite(format!("module {} over {}", self.canonical_form(), self.ring)))?;
        if order > limit {
            return Err(Error::NotFinite(format!("module has {order} elements, over the limit {limit}")));
        }
        let s = self.simplify();
        let ranges: Vec<u64> = s
            .divisors
            .iter()
            .map(|d| if d.is_zero() { self.ring.modulus().unwrap() } else { d.num().to_u64().unwrap() })
            .collect();
        let mut out = Vec::with_capacity(order as usize);
        let mut idx = vec![0u64; ranges.len()];
        loop {
            let c = Matrix::from_fn(&self.ring, idx.len(), 1, |i, _| self.ring.from_i64(idx[i] as i64));
            out.push(s.from.mul(&c));
            let mut k = 0;
            loop {
                if k == idx.len() {
                    return Ok(out);
                }
                idx[k] += 1;
                if idx[k] < ranges[k] {
                    break;
                }
                idx[k] = 0;
                k += 1;
            }
        }
    }

    /// Components `M ⊗ ℤ/p^k` over ℤ/p^k, one per prime power exactly
    /// dividing n. Only meaningful over ℤ/n.
    pub fn primary_parts(&self) -> Vec<(RingSpec, FPModule)> {
        let Some(n) = self.ring.modulus() else { return Vec::new() };
        factorize(n)
            .into_iter()
            .map(|(p, k)| {
                let q = RingSpec::IntMod(p.pow(k));
                let part = self.base_change(&q);
                (q, part)
            })
            .collect()
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ModuleHom {
    source: FPModule,
    target: FPModule,
    matrix: Matrix,
}

/// Kernel, image and cokernel of a homomorphism with their structure maps.
#[derive(Clone, Debug)]
pub struct Kic {
    pub kernel: FPModule,
    pub kernel_incl: ModuleHom,
    pub image: FPModule,
    pub onto_image: ModuleHom,
    pub image_incl: ModuleHom,
    pub cokernel: FPModule,
    pub coker_proj: ModuleHom,
}

impl ModuleHom {
    pub fn new(source: &FPModule, target: &FPModule, matrix: Matrix) -> Result<ModuleHom> {
        same_ring(source.ring(), target.ring())?;
        same_ring(source.ring(), matrix.ring())?;
        if matrix.shape() != (target.gens(), source.gens()) {
            return Err(shape(format!(
                "homomorphism matrix is {:?}, expected {}x{}",
                matrix.shape(),
                target.gens(),
                source.gens()
            )));
        }
        let image_of_rels = matrix.mul(source.relations());
        if !target.is_zero_element(&image_of_rels) {
            return Err(Error::IllDefined("relations of the source do not map to zero".into()));
        }
        Ok(ModuleHom { source: source.clone(), target: target.clone(), matrix })
    }

    pub(crate) fn new_unchecked(source: &FPModule, target: &FPModule, matrix: Matrix) -> ModuleHom {
        debug_assert_eq!(matrix.shape(), (target.gens(), source.gens()));
        ModuleHom { source: source.clone(), target: target.clone(), matrix }
    }

    pub fn identity(m: &FPModule) -> ModuleHom {
        ModuleHom::new_unchecked(m, m, Matrix::identity(m.ring(), m.gens()))
    }

    pub fn zero(source: &FPModule, target: &FPModule) -> ModuleHom {
        ModuleHom::new_unchecked(source, target, Matrix::zeros(source.ring(), target.gens(), source.gens()))
    }

    pub fn source(&self) -> &FPModule {
        &self.source
    }

    pub fn target(&self) -> &FPModule {
        &self.target
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn ring(&self) -> &RingSpec {
        self.source.ring()
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &ModuleHom) -> ModuleHom {
        ModuleHom::new_unchecked(&self.source, &other.target, other.matrix.mul(&self.matrix))
    }

    pub fn add(&self, other: &ModuleHom) -> ModuleHom {
        ModuleHom::new_unchecked(&self.source, &self.target, self.matrix.add(&other.matrix))
    }

    pub fn sub(&self, other: &ModuleHom) -> ModuleHom {
        ModuleHom::new_unchecked(&self.source, &self.target, self.matrix.sub(&other.matrix))
    }

    pub fn is_zero(&self) -> bool {
        self.target.is_zero_element(&self.matrix)
    }

    pub fn equals(&self, other: &ModuleHom) -> bool {
        self.sub(other).is_zero()
    }

    pub fn kic(&self) -> Kic {
        let r = self.ring();
        let (gs, gt) = (self.source.gens(), self.target.gens());
        // x with F·x ∈ span(relT)
        let k = kernel(&Matrix::hstack(&[&self.matrix, &self.target.relations().neg()]));
        let kgens = k.block(0, 0, gs, k.cols());
        let kernel_mod = FPModule::generated_by(&kgens, self.source.relations());
        let image = FPModule::generated_by(&self.matrix, self.target.relations());
        let cokernel = FPModule::from_relations(Matrix::hstack(&[self.target.relations(), &self.matrix]));
        Kic {
            kernel_incl: ModuleHom::new_unchecked(&kernel_mod, &self.source, kgens),
            kernel: kernel_mod,
            onto_image: ModuleHom::new_unchecked(&self.source, &image, Matrix::identity(r, gs)),
            image_incl: ModuleHom::new_unchecked(&image, &self.target, self.matrix.clone()),
            image,
            coker_proj: ModuleHom::new_unchecked(&self.target, &cokernel, Matrix::identity(r, gt)),
            cokernel,
        }
    }

    pub fn is_injective(&self) -> bool {
        self.kic().kernel.is_zero()
    }

    pub fn is_surjective(&self) -> bool {
        let coker = FPModule::from_relations(Matrix::hstack(&[self.target.relations(), &self.matrix]));
        coker.is_zero()
    }

    pub fn is_isomorphism(&self) -> bool {
        self.is_surjective() && self.is_injective()
    }

    /// Some `g: target → source` with `g ∘ self = id`, if one exists.
    pub fn retraction(&self) -> Option<ModuleHom> {
        let (sl, sm) = (self.source.simplify(), self.target.simplify());
        let conj = ModuleHom::new_unchecked(&sl.module, &sm.module, sm.to.mul(&self.matrix).mul(&sl.from));
        let g = conj.retraction_raw()?;
        Some(ModuleHom::new_unchecked(&self.target, &self.source, sl.from.mul(g.matrix()).mul(&sm.to)))
    }

    fn retraction_raw(&self) -> Option<ModuleHom> {
        let r = self.ring();
        let (l, m) = (&self.source, &self.target);
        let mut sys = LinearSystem::new(r);
        let p = sys.unknown(l.gens(), m.gens());
        let z = sys.unknown(l.relations().cols(), m.relations().cols());
        let w = sys.unknown(l.relations().cols(), l.gens());
        let nrel = l.relations().neg();
        sys.equation(
            &[Term::new(None, p, Some(m.relations())), Term::new(Some(&nrel), z, None)],
            &Matrix::zeros(r, l.gens(), m.relations().cols()),
        );
        sys.equation(
            &[Term::new(None, p, Some(&self.matrix)), Term::new(Some(&nrel), w, None)],
            &Matrix::identity(r, l.gens()),
        );
        let sol = sys.solve()?;
        Some(ModuleHom::new_unchecked(m, l, sol[p].clone()))
    }
}

/// `M ⊗ N` with generator `(a, b)` at index `a·gens(N) + b`.
pub fn tensor_modules(m: &FPModule, n: &FPModule) -> Result<FPModule> {
    same_ring(m.ring(), n.ring())?;
    let r = m.ring();
    let left = m.relations().kron(&Matrix::identity(r, n.gens()));
    let right = Matrix::identity(r, m.gens()).kron(n.relations());
    Ok(FPModule::from_relations(Matrix::hstack(&[&left, &right])))
}

pub fn tensor_homs(f: &ModuleHom, g: &ModuleHom) -> Result<ModuleHom> {
    let s = tensor_modules(f.source(), g.source())?;
    let t = tensor_modules(f.target(), g.target())?;
    Ok(ModuleHom::new_unchecked(&s, &t, f.matrix().kron(g.matrix())))
}

/// `Hom(M, N)` with translation between coordinates and homomorphisms.
#[derive(Clone, Debug)]
pub struct HomModule {
    pub source: FPModule,
    pub target: FPModule,
    /// A simplified presentation of the hom module.
    pub module: FPModule,
    /// Columns: row-major vectorized homomorphism matrices generating Hom.
    generators: Matrix,
    /// Vectorized homomorphisms that are zero (`relN·Y`).
    trivial: Matrix,
    to: Matrix,
    from: Matrix,
}

impl HomModule {
    /// The homomorphism with the given coordinates in `self.module`.
    pub fn hom_at(&self, coords: &Matrix) -> ModuleHom {
        let v = self.generators.mul(&self.from.mul(coords));
        let (gt, gs) = (self.target.gens(), self.source.gens());
        let x = Matrix::from_fn(self.source.ring(), gt, gs, |i, j| v.get(i * gs + j, 0).clone());
        ModuleHom::new_unchecked(&self.source, &self.target, x)
    }

    /// Coordinates of a homomorphism `source → target`.
    pub fn coords_of(&self, f: &ModuleHom) -> Matrix {
        let (gt, gs) = (self.target.gens(), self.source.gens());
        let v = Matrix::from_fn(self.source.ring(), gt * gs, 1, |i, _| f.matrix().get(i / gs, i % gs).clone());
        let a = Matrix::hstack(&[&self.generators, &self.trivial]);
        let c = solve_unchecked(&a, &v).expect("homomorphism lies in the hom module");
        self.to.mul(&c.block(0, 0, self.generators.cols(), 1))
    }

    /// Generators of the hom module as homomorphisms.
    pub fn generator_homs(&self) -> Vec<ModuleHom> {
        let r = self.source.ring();
        let k = self.module.gens();
        (0..k)
            .map(|i| self.hom_at(&Matrix::from_fn(r, k, 1, |t, _| if t == i { r.one() } else { r.zero() })))
            .collect()
    }

    /// Every homomorphism, when the hom set is finite and at most `limit`.
    pub fn elements(&self, limit: u64) -> Result<Vec<ModuleHom>> {
        Ok(self.module.elements(limit)?.iter().map(|c| self.hom_at(c)).collect())
    }
}

pub fn hom_modules(m: &FPModule, n: &FPModule) -> Result<HomModule> {
    same_ring(m.ring(), n.ring())?;
    let r = m.ring();
    let (gs, gt) = (m.gens(), n.gens());
    let (rs, rt) = (m.relations().cols(), n.relations().cols());
    // X·relM = relN·Z
    let mut sys = LinearSystem::new(r);
    let x = sys.unknown(gt, gs);
    let z = sys.unknown(rt, rs);
    let nrel = n.relations().neg();
    sys.equation(
        &[Term::new(None, x, Some(m.relations())), Term::new(Some(&nrel), z, None)],
        &Matrix::zeros(r, gt, rs),
    );
    let sols = sys.homogeneous_solutions();
    let mut generators = Matrix::zeros(r, gt * gs, sols.len());
    for (c, s) in sols.iter().enumerate() {
        for i in 0..gt {
            for j in 0..gs {
                generators.set(i * gs + j, c, s[x].get(i, j).clone());
            }
        }
    }
    let trivial = n.relations().kron(&Matrix::identity(r, gs));
    let raw = FPModule::generated_by(&generators, &trivial);
    let s = raw.simplify();
    Ok(HomModule { source: m.clone(), target: n.clone(), module: s.module, generators, trivial, to: s.to, from: s.from })
}

fn ensure_finite(m: &FPModule) -> Result<Simplified> {
    let s = m.simplify();
    let finite = match m.ring() {
        RingSpec::IntMod(_) => true,
        RingSpec::Int => s.divisors.iter().all(|d| !d.is_zero()),
        _ => s.divisors.is_empty(),
    };
    if finite {
        Ok(s)
    } else {
        Err(Error::NotFinite(format!("{} over {} has no character dual here", m.canonical_form(), m.ring())))
    }
}

/// Pontryagin dual `Hom_ℤ(M, ℚ/ℤ)` of a finite module, presented on the
/// characters dual to the simplified generators of `M`. It has the same
/// elementary divisors as `M`.
pub fn character_dual(m: &FPModule) -> Result<FPModule> {
    Ok(ensure_finite(m)?.module)
}

/// The dual `f*: N* → M*` of `f: M → N`, between the presentations returned
/// by [`character_dual`].
pub fn character_dual_hom(f: &ModuleHom) -> Result<ModuleHom> {
    let sm = ensure_finite(f.source())?;
    let sn = ensure_finite(f.target())?;
    let r = f.ring();
    let n = r.modulus().map(|n| Int::from(n as i64));
    let order = |d: &Elem| if d.is_zero() { n.clone().expect("free part only over Z/n") } else { d.num().clone() };
    let fs = sn.to.mul(f.matrix()).mul(&sm.from);
    // characters χ_b ↦ χ_b ∘ f = Σ_a F[b][a]·d_a/d'_b · χ_a
    let dual = Matrix::from_fn(r, fs.cols(), fs.rows(), |a, b| {
        let (da, db) = (order(&sm.divisors[a]), order(&sn.divisors[b]));
        let coeff = (&fs.get(b, a).num().rem_euclid(&db) * &da).div_exact(&db);
        r.from_int(&coeff.rem_euclid(&da))
    });
    Ok(ModuleHom::new_unchecked(&sn.module, &sm.module, dual))
}

/// A short exact sequence `0 → L → M → N → 0`.
#[derive(Clone, Debug)]
pub struct SesModules {
    pub inj: ModuleHom,
    pub surj: ModuleHom,
}

impl SesModules {
    pub fn new(inj: ModuleHom, surj: ModuleHom) -> Result<SesModules> {
        if inj.target() != surj.source() {
            return Err(Error::InvalidSes("middle modules differ".into()));
        }
        if !inj.then(&surj).is_zero() {
            return Err(Error::InvalidSes("composite is nonzero".into()));
        }
        if !inj.is_injective() {
            return Err(Error::InvalidSes("first map is not injective".into()));
        }
        if !surj.is_surjective() {
            return Err(Error::InvalidSes("second map is not surjective".into()));
        }
        let k = surj.kic().kernel_incl;
        let span = Matrix::hstack(&[inj.matrix(), inj.target().relations()]);
        if !in_span(&span, k.matrix()) {
            return Err(Error::InvalidSes("not exact in the middle".into()));
        }
        Ok(SesModules { inj, surj })
    }

    /// `0 → ⟨G⟩ → M → M/⟨G⟩ → 0` for generator columns `G` in `M`.
    pub fn from_submodule(m: &FPModule, g: &Matrix) -> SesModules {
        let l = FPModule::generated_by(g, m.relations());
        let n = FPModule::from_relations(Matrix::hstack(&[m.relations(), g]));
        SesModules {
            inj: ModuleHom::new_unchecked(&l, m, g.clone()),
            surj: ModuleHom::new_unchecked(m, &n, Matrix::identity(m.ring(), m.gens())),
        }
    }

    /// `0 → L → L ⊕ N → N → 0`.
    pub fn split(l: &FPModule, n: &FPModule) -> SesModules {
        let r = l.ring();
        let m = FPModule::direct_sum(r, &[l, n]);
        let inj = Matrix::vstack(&[&Matrix::identity(r, l.gens()), &Matrix::zeros(r, n.gens(), l.gens())]);
        let surj = Matrix::hstack(&[&Matrix::zeros(r, n.gens(), l.gens()), &Matrix::identity(r, n.gens())]);
        SesModules { inj: ModuleHom::new_unchecked(l, &m, inj), surj: ModuleHom::new_unchecked(&m, n, surj) }
    }

    pub fn left(&self) -> &FPModule {
        self.inj.source()
    }

    pub fn middle(&self) -> &FPModule {
        self.inj.target()
    }

    pub fn right(&self) -> &FPModule {
        self.surj.target()
    }
}

#[derive(Clone, Debug)]
pub struct PurityVerdict {
    pub pure: bool,
    /// A retraction `M → L` of the inclusion when the sequence is pure.
    pub retraction: Option<ModuleHom>,
    /// A cyclic module `R/(d)` for which `R/(d) ⊗ −` fails to keep the
    /// inclusion injective, when the sequence is not pure.
    pub witness: Option<Elem>,
}

/// Divisors `d` for which `R/(d) ⊗ −` detects impurity of a sequence of
/// the given modules.
fn tensor_test_candidates(s: &SesModules) -> Vec<Elem> {
    let r = s.inj.ring();
    if let Some(n) = r.modulus() {
        return divisors_of(n).into_iter().map(|d| r.from_i64(d as i64)).filter(|d| !r.is_unit(d)).collect();
    }
    let mut e = Int::ONE;
    for m in [s.left(), s.middle(), s.right()] {
        for d in m.canonical_form().divisors {
            let d = d.num().abs();
            e = e.div_exact(&e.gcd(&d)).clone() * &d;
        }
    }
    let Some(e2) = (&e * &e).to_u64() else { return Vec::new() };
    divisors_of(e2).into_iter().map(|d| r.from_i64(d as i64)).filter(|d| !r.is_unit(d)).collect()
}

/// Whether `R/(d) ⊗ inj` stays injective.
pub fn tensor_test(s: &SesModules, d: &Elem) -> bool {
    let c = FPModule::cyclic(s.inj.ring(), d);
    let f = tensor_homs(&ModuleHom::identity(&c), &s.inj).expect("same ring");
    f.is_injective()
}

pub fn is_pure_ses(s: &SesModules) -> PurityVerdict {
    if let Some(rho) = s.inj.retraction() {
        return PurityVerdict { pure: true, retraction: Some(rho), witness: None };
    }
    let witness = tensor_test_candidates(s).into_iter().find(|d| !tensor_test(s, d));
    PurityVerdict { pure: false, retraction: None, witness }
}

/// Purity by the tensor route alone: every candidate `R/(d) ⊗ −` keeps the
/// inclusion injective.
pub fn is_pure_by_tensor(s: &SesModules) -> bool {
    tensor_test_candidates(s).iter().all(|d| tensor_test(s, d))
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, serde::Serialize)]
pub struct ModuleFlags {
    pub is_free: bool,
    pub is_projective: bool,
    pub is_flat: bool,
    pub is_injective_over_self: bool,
}

pub fn classify_module(m: &FPModule) -> ModuleFlags {
    let cf = m.canonical_form();
    let is_free = cf.divisors.is_empty();
    match m.ring() {
        RingSpec::IntMod(_) => {
            // ℤ/n is a product of local rings ℤ/p^k, over which f.g. flat,
            // projective and free coincide; ℤ/n is self-injective, so
            // injective f.g. modules are the projective ones.
            let projective = m.primary_parts().iter().all(|(_, part)| part.is_free());
            ModuleFlags { is_free, is_projective: projective, is_flat: projective, is_injective_over_self: projective }
        }
        _ => ModuleFlags { is_free, is_projective: is_free, is_flat: is_free, is_injective_over_self: cf.is_zero() },
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z() -> RingSpec {
        RingSpec::Int
    }

    fn zn(n: u64) -> RingSpec {
        RingSpec::int_mod(n).unwrap()
    }

    fn cf(m: &FPModule) -> (Vec<String>, usize) {
        let c = m.canonical_form();
        (c.divisors.iter().map(|d| d.to_string()).collect(), c.free_rank)
    }

    fn cyc(r: &RingSpec, d: i64) -> FPModule {
        FPModule::cyclic(r, &r.from_i64(d))
    }

    #[test]
    fn canonical_forms() {
        let m = FPModule::from_relations(Matrix::from_ints(&z(), &[vec![4, 0], vec![0, 6]]));
        assert_eq!(cf(&m), (vec!["2".into(), "12".into()], 0));
        assert_eq!(cf(&FPModule::free(&z(), 2)), (vec![], 2));
        assert!(cyc(&z(), 1).is_zero());
        assert_eq!(m.order(), Some(24));
        assert_eq!(m.elements(100).unwrap().len(), 24);
    }

    #[test]
    fn kic_examples() {
        let r = z();
        let f = ModuleHom::new(&FPModule::free(&r, 1), &FPModule::free(&r, 1), Matrix::from_ints(&r, &[vec![2]])).unwrap();
        let k = f.kic();
        assert!(k.kernel.is_zero());
        assert_eq!(cf(&k.image), (vec![], 1));
        assert_eq!(cf(&k.cokernel), (vec!["2".into()], 0));

        let r4 = zn(4);
        let m = FPModule::free(&r4, 1);
        let f = ModuleHom::new(&m, &m, Matrix::from_ints(&r4, &[vec![2]])).unwrap();
        let k = f.kic();
        assert_eq!(cf(&k.kernel), (vec!["2".into()], 0));
        assert_eq!(cf(&k.image), (vec!["2".into()], 0));
        assert_eq!(cf(&k.cokernel), (vec!["2".into()], 0));

        let a = cyc(&r, 3);
        let b = FPModule::free(&r, 2);
        let k = ModuleHom::zero(&a, &b).kic();
        assert!(k.kernel.is_isomorphic(&a) && k.cokernel.is_isomorphic(&b));
    }

    #[test]
    fn ill_defined_rejected() {
        let r = z();
        assert!(ModuleHom::new(&cyc(&r, 2), &FPModule::free(&r, 1), Matrix::from_ints(&r, &[vec![1]])).is_err());
        assert!(ModuleHom::new(&cyc(&r, 4), &cyc(&r, 2), Matrix::from_ints(&r, &[vec![1]])).is_ok());
    }

    #[test]
    fn tensor_examples() {
        let t = tensor_modules(&cyc(&z(), 4), &cyc(&z(), 6)).unwrap();
        assert_eq!(cf(&t), (vec!["2".into()], 0));
        let m = cyc(&z(), 5);
        assert!(tensor_modules(&m, &FPModule::free(&z(), 1)).unwrap().is_isomorphic(&m));
        let r4 = zn(4);
        assert_eq!(cf(&tensor_modules(&cyc(&r4, 2), &cyc(&r4, 2)).unwrap()), (vec!["2".into()], 0));
    }

    #[test]
    fn hom_examples() {
        let h = hom_modules(&cyc(&z(), 4), &cyc(&z(), 6)).unwrap();
        assert_eq!(cf(&h.module), (vec!["2".into()], 0));
        let homs = h.elements(10).unwrap();
        assert_eq!(homs.len(), 2);
        assert!(homs.iter().filter(|f| !f.is_zero()).all(|f| f.matrix().get(0, 0).num().rem_euclid(&Int::from(6)) == Int::from(3)));
        let m = FPModule::from_relations(Matrix::from_ints(&z(), &[vec![2, 0], vec![0, 0]]));
        assert!(hom_modules(&FPModule::free(&z(), 1), &m).unwrap().module.is_isomorphic(&m));
        assert!(hom_modules(&cyc(&z(), 2), &FPModule::free(&z(), 1)).unwrap().module.is_zero());
        for g in h.generator_homs() {
            let c = h.coords_of(&g);
            assert!(h.hom_at(&c).equals(&g));
        }
    }

    #[test]
    fn character_duals() {
        let r = z();
        assert_eq!(cf(&character_dual(&cyc(&r, 4)).unwrap()), (vec!["4".into()], 0));
        assert!(character_dual(&FPModule::zero(&r)).unwrap().is_zero());
        let m = FPModule::direct_sum(&r, &[&cyc(&r, 2), &cyc(&r, 3)]);
        assert_eq!(cf(&character_dual(&m).unwrap()), (vec!["6".into()], 0));
        assert!(character_dual(&FPModule::free(&r, 1)).is_err());
        // dual of ℤ/2 → ℤ/4 (1 ↦ 2) is ℤ/4 → ℤ/2 onto
        let f = ModuleHom::new(&cyc(&r, 2), &cyc(&r, 4), Matrix::from_ints(&r, &[vec![2]])).unwrap();
        let d = character_dual_hom(&f).unwrap();
        assert!(d.is_surjective() && !d.is_injective());
    }

    #[test]
    fn purity_examples() {
        let r4 = zn(4);
        let m = FPModule::free(&r4, 1);
        let s = SesModules::from_submodule(&m, &Matrix::from_ints(&r4, &[vec![2]]));
        let s = SesModules::new(s.inj, s.surj).unwrap();
        let v = is_pure_ses(&s);
        assert!(!v.pure);
        assert_eq!(v.witness.unwrap().to_string(), "2");

        let r = z();
        let s = SesModules::from_submodule(&FPModule::free(&r, 1), &Matrix::from_ints(&r, &[vec![2]]));
        let v = is_pure_ses(&s);
        assert!(!v.pure);
        assert_eq!(v.witness.unwrap().to_string(), "2");

        let s = SesModules::split(&cyc(&r, 3), &FPModule::free(&r, 2));
        let s = SesModules::new(s.inj, s.surj).unwrap();
        let v = is_pure_ses(&s);
        assert!(v.pure);
        assert!(v.retraction.unwrap().matrix().mul(s.inj.matrix()).is_identity());
    }

    #[test]
    fn module_flags() {
        let r4 = zn(4);
        let f = classify_module(&cyc(&r4, 2));
        assert!(!f.is_flat && !f.is_projective);
        let f = classify_module(&FPModule::free(&z(), 1));
        assert!(f.is_free && f.is_projective && f.is_flat);
        let r6 = zn(6);
        let f = classify_module(&cyc(&r6, 2));
        assert!(f.is_projective && f.is_flat && !f.is_free && f.is_injective_over_self);
    }
}
