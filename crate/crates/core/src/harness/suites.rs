//! Property suites, one per statement.
//!
//! A case either does not meet the hypotheses (vacuous), holds, or fails
//! with the offending complexes attached. Suites whose statement only
//! holds over some rings (vnr, corvnr) flip over the others: there they
//! must find a counterexample.

use std::collections::BTreeMap;
use std::panic::{catch_unwind, AssertUnwindSafe};

use rayon::prelude::*;
use serde::Serialize;

use super::finite::{bits, brute_force_minimal, FinComplex, Oracle, Sub};
use super::gallery::gallery;
use super::gen::{case_seed, Gen, GenProfile, Style};
use crate::complex::{
    chain_retraction, classify_map, classify_ses, cone, total_hom, total_tensor, ChainComplex, ChainMap, SesComplexes,
    Shape,
};
use crate::error::{Error, Result};
use crate::json::ComplexDto;
use crate::linalg::{snf, solve};
use crate::matrix::Matrix;
use crate::minimality::{failing_degrees, is_minimal, is_pure_minimal, is_split_minimal, Minimality, Tri};
use crate::module::{classify_module, FPModule, ModuleHom, SesModules};
use crate::resolution::pure_minimal_replacement;
use crate::ring::{factorize, RingSpec};

pub const SUITES: [&str; 17] = [
    "vnr",
    "bg",
    "two_of_three",
    "ses_pa",
    "ses_he",
    "impl",
    "pmiff",
    "m1m4",
    "asm_apm",
    "semiflat",
    "semiinj",
    "corvnr",
    "perfect",
    "pmsm",
    "appendix_hom",
    "appendix_homZ",
    "appendix_tensor",
];

/// Fewer non-vacuous cases than this and a suite does not pass.
pub const MIN_NON_VACUOUS: u64 = 30;

#[derive(Clone, Debug, Serialize)]
pub struct Counterexample {
    pub case: u64,
    pub seed: u64,
    pub message: String,
    /// Every complex involved, in the Complex JSON form.
    pub complexes: BTreeMap<String, ComplexDto>,
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub ring: RingSpec,
    pub seed: u64,
    pub cases: u64,
    pub non_vacuous: u64,
    pub failures: Vec<Counterexample>,
    /// Whether this run must find a counterexample to pass.
    pub expect_counterexample: bool,
    pub expected_counterexamples: Vec<Counterexample>,
    pub underpowered: bool,
    pub passed: bool,
    pub note: String,
}

impl std::fmt::Display for SuiteReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let status = if self.passed { "PASS" } else { "FAIL" };
        write!(
            f,
            "{status} {} over {}: {} cases, {} non-vacuous, {} failures",
            self.suite,
            self.ring,
            self.cases,
            self.non_vacuous,
            self.failures.len()
        )?;
        if self.expect_counterexample {
            write!(f, ", {} expected counterexamples", self.expected_counterexamples.len())?;
        }
        if self.underpowered {
            write!(f, " (underpowered)")?;
        }
        for c in &self.failures {
            write!(f, "\n  case {} (seed {}): {}", c.case, c.seed, c.message)?;
        }
        for c in self.expected_counterexamples.iter().take(3) {
            write!(f, "\n  expected counterexample, case {}: {}", c.case, c.message)?;
        }
        write!(f, "\n  {}", self.note)
    }
}

enum Outcome {
    Vacuous,
    Held,
    Failed(String, Vec<(String, ChainComplex)>),
    /// A violation that the ring is supposed to exhibit.
    Expected(String, Vec<(String, ChainComplex)>),
}

fn failed(msg: impl Into<String>, cs: &[(&str, &ChainComplex)]) -> Outcome {
    Outcome::Failed(msg.into(), cs.iter().map(|(n, c)| (n.to_string(), (*c).clone())).collect())
}

/// Per-case state: the ring and a generator seeded from the case seed.
struct Case {
    index: u64,
    ring: RingSpec,
    g: Gen,
}

impl Case {
    fn complex(&mut self, style: Style, len: usize, rank: usize, free: bool) -> ChainComplex {
        let mut p = GenProfile::new(&self.ring, style, 0).sized(len, rank);
        p.free_only = free;
        p.entry_bound = 9;
        self.g.complex(&p).complex
    }

    /// A contractible complex: a scrambled sum of disks.
    fn contractible(&mut self, len: usize, rank: usize, free: bool) -> ChainComplex {
        let mut p = GenProfile::new(&self.ring, Style::AcyclicByConstruction, 0).sized(len.max(2), rank);
        p.free_only = true;
        let c = self.g.complex(&p).complex;
        if free {
            return c;
        }
        let m = self.g.cyclic_module(false);
        let top = self.g.range(0, len.max(2) as i64 - 1);
        let d = ChainComplex::disk(&m, top);
        ChainComplex::direct_sum(&[&c, &d]).unwrap()
    }

    fn pick<T: Copy>(&mut self, xs: &[T]) -> T {
        xs[self.g.below(xs.len())]
    }
}

struct Suite {
    name: &'static str,
    default_ring: fn() -> RingSpec,
    default_cases: u64,
    /// Rings the suite can run over.
    accepts: fn(&RingSpec) -> bool,
    /// Rings over which the statement fails and a counterexample must be found.
    flips: fn(&RingSpec) -> bool,
    run: fn(&mut Case) -> Outcome,
    note: &'static str,
}

fn z(n: u64) -> RingSpec {
    RingSpec::int_mod(n).unwrap()
}

fn any(_: &RingSpec) -> bool {
    true
}

fn never(_: &RingSpec) -> bool {
    false
}

fn finite(r: &RingSpec) -> bool {
    r.is_finite()
}

fn not_vnr(r: &RingSpec) -> bool {
    !r.is_von_neumann_regular()
}

fn registry() -> Vec<Suite> {
    vec![
        Suite {
            name: "vnr",
            default_ring: || z(6),
            default_cases: 150,
            accepts: any,
            flips: not_vnr,
            run: vnr,
            note: "acyclic ⟹ pure-acyclic; pure-acyclicity is also checked elementwise over finite rings",
        },
        Suite {
            name: "bg",
            default_ring: || z(4),
            default_cases: 100,
            accepts: any,
            flips: never,
            run: bg,
            note: "complexes of finitely presented (pure-projective) modules: pure-acyclic ⟺ contractible; non-vacuous = pure-acyclic and projective",
        },
        Suite {
            name: "two_of_three",
            default_ring: || RingSpec::Int,
            default_cases: 100,
            accepts: any,
            flips: never,
            run: two_of_three,
            note: "two of α, β, βα pure quasi-isomorphisms ⟹ the third; non-vacuous = at least two are",
        },
        Suite {
            name: "ses_pa",
            default_ring: || z(4),
            default_cases: 60,
            accepts: any,
            flips: never,
            run: ses_pa,
            note: "degreewise pure sequences: L pure-acyclic ⟺ β pure qis, N pure-acyclic ⟺ α pure qis, and then pure in C(R)",
        },
        Suite {
            name: "ses_he",
            default_ring: || RingSpec::Int,
            default_cases: 60,
            accepts: any,
            flips: never,
            run: ses_he,
            note: "degreewise split sequences: L contractible ⟺ β homotopy equivalence, N contractible ⟺ α one, and then split",
        },
        Suite {
            name: "impl",
            default_ring: || z(4),
            default_cases: 60,
            accepts: any,
            flips: never,
            run: implications,
            note: "minimal ⟹ split-minimal; the converse for complexes of projectives over the perfect rings ℤ/n; minimality by brute force",
        },
        Suite {
            name: "pmiff",
            default_ring: || z(4),
            default_cases: 60,
            accepts: finite,
            flips: never,
            run: pmiff,
            note: "free complexes over ℤ/n: split-minimal ⟺ pure-minimal (elementwise), and found pure-acyclic pure subcomplexes are contractible and split",
        },
        Suite {
            name: "m1m4",
            default_ring: || z(4),
            default_cases: 40,
            accepts: finite,
            flips: never,
            run: m1m4,
            note: "pure-minimal ⟺ no degreewise pure quotient map is a pure qis unless iso; split-minimal likewise with homotopy equivalences",
        },
        Suite {
            name: "asm_apm",
            default_ring: || RingSpec::Int,
            default_cases: 60,
            accepts: any,
            flips: never,
            run: asm_apm,
            note: "contractible and split-minimal ⟹ zero; pure-acyclic and pure-minimal ⟹ zero; non-vacuous = contractible or pure-acyclic",
        },
        Suite {
            name: "semiflat",
            default_ring: || z(4),
            default_cases: 50,
            accepts: finite,
            flips: never,
            run: semiflat,
            note: "bounded free complexes over ℤ/n: pure-minimal ⟺ no nonzero acyclic pure subcomplex (elementwise)",
        },
        Suite {
            name: "semiinj",
            default_ring: || z(4),
            default_cases: 50,
            accepts: |r| r.is_finite(),
            flips: never,
            run: semiinj,
            note: "bounded free complexes over the self-injective ℤ/n: minimal ⟺ split-minimal ⟺ pure-minimal ⟺ no nonzero acyclic subcomplex",
        },
        Suite {
            name: "corvnr",
            default_ring: || z(6),
            default_cases: 60,
            accepts: finite,
            flips: not_vnr,
            run: corvnr,
            note: "over von Neumann regular ℤ/n: pure-minimal ⟺ no nonzero acyclic subcomplex, so zero is the only acyclic pure-minimal complex",
        },
        Suite {
            name: "perfect",
            default_ring: || z(4),
            default_cases: 50,
            accepts: finite,
            flips: never,
            run: perfect,
            note: "perfect ℤ/n: the reduced resolution is projective, a quasi-isomorphism and pure-minimal; infinite resolutions are vacuous",
        },
        Suite {
            name: "pmsm",
            default_ring: || RingSpec::Int,
            default_cases: 60,
            accepts: |r| r.is_finite() || *r == RingSpec::Int,
            flips: never,
            run: pmsm,
            note: "degreewise pure subcomplexes of free complexes are degreewise split; purity by torsion-free quotients over ℤ, elementwise over ℤ/n",
        },
        Suite {
            name: "appendix_hom",
            default_ring: || z(4),
            default_cases: 50,
            accepts: any,
            flips: never,
            run: appendix_hom,
            note: "Hom(M_i, N) acyclic for all i (checked) ⟹ Hom(M, N) acyclic; the cokernel condition is automatic for bounded M",
        },
        Suite {
            name: "appendix_homZ",
            default_ring: || z(4),
            default_cases: 50,
            accepts: any,
            flips: never,
            run: appendix_hom_z,
            note: "Hom(M, N_i) acyclic for all i (checked) ⟹ Hom(M, N) acyclic; the cycle condition is automatic for bounded N",
        },
        Suite {
            name: "appendix_tensor",
            default_ring: || z(4),
            default_cases: 50,
            accepts: finite,
            flips: never,
            run: appendix_tensor,
            note: "L ⊗ M_i acyclic for all i (checked) ⟹ L ⊗ M acyclic; cross-checked through the character dual and Hom(M, L^∨)",
        },
    ]
}

pub fn default_ring(name: &str) -> Result<RingSpec> {
    let s = find(name)?;
    Ok((s.default_ring)())
}

pub fn default_cases(name: &str) -> Result<u64> {
    Ok(find(name)?.default_cases)
}

fn find(name: &str) -> Result<Suite> {
    registry()
        .into_iter()
        .find(|s| s.name == name)
        .ok_or_else(|| Error::UnknownName(format!("no suite {name:?}; known: {}", SUITES.join(", "))))
}

/// Runs `cases` cases of a suite; `None` picks the suite's defaults.
pub fn run_suite(name: &str, ring: Option<&RingSpec>, seed: u64, cases: Option<u64>) -> Result<SuiteReport> {
    let suite = find(name)?;
    let ring = ring.cloned().unwrap_or_else(suite.default_ring);
    if !(suite.accepts)(&ring) {
        return Err(Error::Unsupported(format!("suite {name} does not run over {ring}")));
    }
    let cases = cases.unwrap_or(suite.default_cases);
    let flips = (suite.flips)(&ring);
    let outcomes: Vec<(u64, u64, Outcome)> = (0..cases)
        .into_par_iter()
        .map(|i| {
            let s = case_seed(seed, name, i);
            let mut case = Case { index: i, ring: ring.clone(), g: Gen::new(&ring, 9, s) };
            let out = catch_unwind(AssertUnwindSafe(|| (suite.run)(&mut case)))
                .unwrap_or_else(|e| Outcome::Failed(format!("panic: {}", panic_text(&e)), Vec::new()));
            (i, s, out)
        })
        .collect();
    let mut report = SuiteReport {
        suite: name.to_string(),
        ring: ring.clone(),
        seed,
        cases,
        non_vacuous: 0,
        failures: Vec::new(),
        expect_counterexample: flips,
        expected_counterexamples: Vec::new(),
        underpowered: false,
        passed: false,
        note: suite.note.to_string(),
    };
    let pack = |i: u64, s: u64, msg: String, cs: Vec<(String, ChainComplex)>| Counterexample {
        case: i,
        seed: s,
        message: msg,
        complexes: cs.iter().map(|(n, c)| (n.clone(), ComplexDto::from(c))).collect(),
    };
    for (i, s, out) in outcomes {
        match out {
            Outcome::Vacuous => {}
            Outcome::Held => report.non_vacuous += 1,
            Outcome::Failed(m, cs) => {
                report.non_vacuous += 1;
                report.failures.push(pack(i, s, m, cs));
            }
            Outcome::Expected(m, cs) => {
                report.non_vacuous += 1;
                if flips {
                    report.expected_counterexamples.push(pack(i, s, m, cs));
                } else {
                    report.failures.push(pack(i, s, m, cs));
                }
            }
        }
    }
    report.underpowered = report.non_vacuous < MIN_NON_VACUOUS;
    report.passed = report.failures.is_empty()
        && !report.underpowered
        && (!flips || !report.expected_counterexamples.is_empty());
    Ok(report)
}

fn panic_text(e: &Box<dyn std::any::Any + Send>) -> String {
    if let Some(s) = e.downcast_ref::<&str>() {
        s.to_string()
    } else if let Some(s) = e.downcast_ref::<String>() {
        s.clone()
    } else {
        "unknown panic".into()
    }
}

/// An acyclic complex that is not pure-acyclic, over a ring that is not
/// von Neumann regular.
pub fn impure_acyclic_witness(r: &RingSpec) -> Option<ChainComplex> {
    if r.is_von_neumann_regular() {
        return None;
    }
    match r.modulus() {
        Some(4) => gallery("dold").ok(),
        Some(n) => {
            // R →p→ R →n/p→ R, period 2, for p² | n
            let (p, _) = factorize(n).into_iter().find(|&(_, k)| k >= 2)?;
            let one = FPModule::free(r, 1);
            ChainComplex::new_validated(
                r,
                Shape::Periodic { period: 2 },
                [(0, one.clone()), (1, one)],
                [(1, Matrix::from_ints(r, &[vec![p as i64]])), (0, Matrix::from_ints(r, &[vec![(n / p) as i64]]))],
            )
            .ok()
        }
        None => {
            let mut g = Gen::new(r, 9, 0);
            let a = g.nonunit()?;
            ChainComplex::new_validated(
                r,
                Shape::Bounded { min: 0, max: 2 },
                [(0, FPModule::cyclic(r, &a)), (1, FPModule::free(r, 1)), (2, FPModule::free(r, 1))],
                [(2, Matrix::from_fn(r, 1, 1, |_, _| a.clone())), (1, Matrix::identity(r, 1))],
            )
            .ok()
        }
    }
}

/// `R^k →a→ R^k →n/a→ R^k → …` over ℤ/n, scrambled: acyclic for every
/// divisor `a`, and of period one when `a² = n`.
fn periodic_pair(case: &mut Case) -> Option<ChainComplex> {
    let n = case.ring.modulus()?;
    let divs: Vec<u64> = crate::ring::divisors_of(n).into_iter().filter(|&a| a > 1 && a < n).collect();
    if divs.is_empty() {
        return None;
    }
    let a = divs[case.g.below(divs.len())];
    let b = n / a;
    let r = case.ring.clone();
    let k = 1 + case.g.below(2);
    let free = FPModule::free(&r, k);
    let scalar = |x: u64| Matrix::identity(&r, k).scale(&r.from_i64(x as i64));
    let c = if a == b {
        ChainComplex::new_validated(&r, Shape::Periodic { period: 1 }, [(0, free)], [(0, scalar(a))])
    } else {
        ChainComplex::new_validated(
            &r,
            Shape::Periodic { period: 2 },
            [(0, free.clone()), (1, free)],
            [(1, scalar(a)), (0, scalar(b))],
        )
    }
    .ok()?;
    Some(if k > 1 { case.g.scramble(&c).0 } else { c })
}

fn vnr(case: &mut Case) -> Outcome {
    let periodic = if case.index % 8 == 5 { periodic_pair(case) } else { None };
    let c = if let Some(c) = periodic {
        c
    } else if case.index % 4 == 3 {
        let s = case.pick(&[Style::FreeRandom, Style::ConeOfRandomMap]);
        case.complex(s, 4, 2, false)
    } else {
        case.complex(Style::AcyclicByConstruction, 4, 3, false)
    };
    if !c.is_acyclic() {
        return Outcome::Vacuous;
    }
    let pa = c.is_pure_acyclic();
    if let Some(fc) = FinComplex::new(&c) {
        if fc.is_pure_acyclic(&fc.whole()) != pa {
            return failed(format!("pure-acyclic is {pa} but the elementwise check disagrees"), &[("complex", &c)]);
        }
    }
    if pa {
        Outcome::Held
    } else {
        Outcome::Expected("acyclic but not pure-acyclic".into(), vec![("complex".into(), c)])
    }
}

fn bg(case: &mut Case) -> Outcome {
    let c = match case.index % 4 {
        0 | 1 => case.complex(Style::AcyclicByConstruction, 4, 3, true),
        2 => case.complex(Style::AcyclicByConstruction, 4, 3, false),
        _ => {
            let s = case.pick(&[Style::FreeRandom, Style::ConeOfRandomMap]);
            case.complex(s, 3, 2, true)
        }
    };
    let pa = match FinComplex::new(&c) {
        Some(fc) => fc.is_pure_acyclic(&fc.whole()),
        None => c.is_pure_acyclic(),
    };
    let contraction = c.contraction();
    if let Some(h) = &contraction {
        if !h.boundary(&c, &c).equals(&ChainMap::identity(&c)) {
            return failed("the contraction does not satisfy ∂σ + σ∂ = 1", &[("complex", &c)]);
        }
    }
    if contraction.is_some() && !pa {
        return failed("contractible but not pure-acyclic", &[("complex", &c)]);
    }
    let projective = c.degrees().iter().all(|&d| classify_module(c.module(d)).is_projective);
    if !pa || !projective {
        return Outcome::Vacuous;
    }
    if contraction.is_none() {
        return failed("pure-acyclic complex of projectives that is not contractible", &[("complex", &c)]);
    }
    Outcome::Held
}

/// A chain map out of `x` of a random kind, and whether it is the inclusion
/// of a direct summand. Most kinds are pure quasi-isomorphisms.
fn random_map_from(case: &mut Case, x: &ChainComplex) -> (ChainMap, bool) {
    match case.g.below(10) {
        0..=2 => (case.g.scramble(x).1, false),
        3..=5 => {
            let free = case.g.coin(0.5);
            let d = case.contractible(2, 1, free);
            let s = ChainComplex::direct_sum(&[x, &d]).unwrap();
            let r = x.ring().clone();
            let incl = ChainMap::new(x, &s, |k| {
                Matrix::vstack(&[&Matrix::identity(&r, x.gens(k)), &Matrix::zeros(&r, d.gens(k), x.gens(k))])
            })
            .unwrap();
            let (_, iso) = case.g.scramble(&s);
            (incl.then(&iso), true)
        }
        6 | 7 => {
            let e = case.g.elem();
            (ChainMap::identity(x).scale(&e), false)
        }
        _ => {
            let y = case.complex(Style::DiskSphereSumScrambled, 2, 1, false);
            (case.g.chain_map(x, &y), false)
        }
    }
}

fn two_of_three(case: &mut Case) -> Outcome {
    let x = case.complex(Style::DiskSphereSumScrambled, 2, 2, false);
    let (alpha, incl) = if case.g.coin(0.15) {
        match pure_minimal_replacement(&x, 3) {
            Ok(res) if !res.truncated => (res.augmentation, false),
            _ => random_map_from(case, &x),
        }
    } else {
        random_map_from(case, &x)
    };
    let m = alpha.target().clone();
    let beta = match chain_retraction(&alpha) {
        Some(rho) if incl && case.g.coin(0.4) => rho,
        _ => random_map_from(case, &m).0,
    };
    let gamma = alpha.then(&beta);
    let fa = classify_map(&alpha);
    let fb = classify_map(&beta);
    let fg = classify_map(&gamma);
    let cs = || {
        vec![
            ("L".to_string(), alpha.source().clone()),
            ("M".to_string(), m.clone()),
            ("N".to_string(), beta.target().clone()),
        ]
    };
    for (what, a, b, g) in [
        ("quasi-isomorphisms", fa.is_qis, fb.is_qis, fg.is_qis),
        ("pure quasi-isomorphisms", fa.is_pure_qis, fb.is_pure_qis, fg.is_pure_qis),
    ] {
        if [a, b, g].iter().filter(|&&t| t).count() == 2 {
            return Outcome::Failed(format!("exactly two of α, β, βα are {what}: {a} {b} {g}"), cs());
        }
    }
    if [fa.is_pure_qis, fb.is_pure_qis, fg.is_pure_qis].iter().filter(|&&t| t).count() >= 2 {
        Outcome::Held
    } else {
        Outcome::Vacuous
    }
}

/// A degreewise split sequence `0 → Y → cone(f) → ΣX → 0`, or now and then a
/// sequence of spheres that need not be degreewise split.
fn random_ses(case: &mut Case) -> SesComplexes {
    if case.g.coin(0.15) {
        let m = case.g.module(2);
        let g = case.g.sub_generators(&m, 2);
        let s = SesModules::from_submodule(&m, &g);
        let (l, mm, n) = (
            ChainComplex::sphere(s.left(), 0),
            ChainComplex::sphere(s.middle(), 0),
            ChainComplex::sphere(s.right(), 0),
        );
        let inj = ChainMap::new(&l, &mm, |_| s.inj.matrix().clone()).unwrap();
        let surj = ChainMap::new(&mm, &n, |_| s.surj.matrix().clone()).unwrap();
        return SesComplexes::new(inj, surj).unwrap();
    }
    let side = |case: &mut Case| {
        if case.g.coin(0.4) {
            let free = case.g.coin(0.5);
            case.contractible(3, 1, free)
        } else {
            let s = case.pick(&[Style::DiskSphereSumScrambled, Style::FreeRandom, Style::AcyclicByConstruction]);
            case.complex(s, 3, 2, false)
        }
    };
    let x = side(case);
    let y = side(case);
    let f = case.g.chain_map(&x, &y);
    SesComplexes::from_cone(&cone(&f))
}

fn ses_cs(s: &SesComplexes) -> Vec<(String, ChainComplex)> {
    vec![("L".into(), s.left().clone()), ("M".into(), s.middle().clone()), ("N".into(), s.right().clone())]
}

fn ses_pa(case: &mut Case) -> Outcome {
    let s = random_ses(case);
    let flags = classify_ses(&s);
    if !flags.degreewise_pure {
        return Outcome::Vacuous;
    }
    let (la, na) = (s.left().is_pure_acyclic(), s.right().is_pure_acyclic());
    let bq = classify_map(&s.surj).is_pure_qis;
    let aq = classify_map(&s.inj).is_pure_qis;
    if la != bq {
        return Outcome::Failed(format!("L pure-acyclic is {la} but β pure qis is {bq}"), ses_cs(&s));
    }
    if na != aq {
        return Outcome::Failed(format!("N pure-acyclic is {na} but α pure qis is {aq}"), ses_cs(&s));
    }
    if (la || na) && !flags.complex_pure {
        return Outcome::Failed("an outer term is pure-acyclic but the sequence is not pure".into(), ses_cs(&s));
    }
    Outcome::Held
}

fn ses_he(case: &mut Case) -> Outcome {
    let s = random_ses(case);
    let flags = classify_ses(&s);
    if !flags.degreewise_split {
        return Outcome::Vacuous;
    }
    let (lc, nc) = (s.left().is_contractible(), s.right().is_contractible());
    let bh = classify_map(&s.surj).is_homotopy_equiv;
    let ah = classify_map(&s.inj).is_homotopy_equiv;
    if lc != bh {
        return Outcome::Failed(format!("L contractible is {lc} but β homotopy equivalence is {bh}"), ses_cs(&s));
    }
    if nc != ah {
        return Outcome::Failed(format!("N contractible is {nc} but α homotopy equivalence is {ah}"), ses_cs(&s));
    }
    if (lc || nc) && chain_retraction(&s.inj).is_none() {
        return Outcome::Failed("an outer term is contractible but the sequence does not split".into(), ses_cs(&s));
    }
    Outcome::Held
}

const BRUTE_BUDGET: usize = 1 << 16;

fn free_complex(case: &mut Case, len: usize, rank: usize) -> ChainComplex {
    let s = case.pick(&[Style::FreeRandom, Style::FreeRandom, Style::ConeOfRandomMap]);
    case.complex(s, len, rank, true)
}

fn implications(case: &mut Case) -> Outcome {
    let c = free_complex(case, 3, 2);
    let sm = is_split_minimal(&c);
    let lib = is_minimal(&c);
    if let Minimality::No(h) = &lib {
        if failing_degrees(&c, h).is_empty() {
            return failed("the non-minimality witness gives an automorphism everywhere", &[("complex", &c)]);
        }
    }
    let minimal = if case.ring.is_finite() {
        let Some(m) = brute_force_minimal(&c, BRUTE_BUDGET) else { return Outcome::Vacuous };
        match (&lib, m) {
            (Minimality::Yes, false) | (Minimality::No(_), true) => {
                return failed(format!("minimal is {} but brute force says {m}", lib.label()), &[("complex", &c)]);
            }
            _ => {}
        }
        m
    } else {
        match lib {
            Minimality::Yes => true,
            Minimality::No(_) => false,
            Minimality::Unknown => return Outcome::Vacuous,
        }
    };
    if minimal && !sm.is_true() {
        return failed(format!("minimal but split-minimal is {sm}"), &[("complex", &c)]);
    }
    let perfect = case.ring.is_finite();
    if perfect && sm.is_true() && !minimal {
        return failed("split-minimal complex of projectives over a perfect ring that is not minimal", &[("complex", &c)]);
    }
    Outcome::Held
}

/// The subcomplex spanned by `sub`, with its inclusion.
fn realize(c: &ChainComplex, fc: &FinComplex, sub: &Sub) -> (ChainComplex, ChainMap) {
    let r = c.ring();
    let mut gens: BTreeMap<i64, Matrix> = BTreeMap::new();
    for &d in &fc.degrees {
        let g = &fc.groups[&d];
        let mask = sub.masks[&d];
        let mut span = 1;
        let mut pick = Vec::new();
        for x in bits(mask) {
            if span & (1 << x) == 0 {
                span = g.join(span, x);
                pick.push(x);
            }
        }
        let from = c.module(d).simplify().from;
        let cols: Vec<Matrix> = pick
            .iter()
            .map(|&x| {
                let v = g.decode(x);
                from.mul(&Matrix::from_fn(r, v.len(), 1, |i, _| r.from_i64(v[i] as i64)))
            })
            .collect();
        let refs: Vec<&Matrix> = cols.iter().collect();
        let m = if refs.is_empty() { Matrix::zeros(r, c.gens(d), 0) } else { Matrix::hstack(&refs) };
        gens.insert(d, m);
    }
    let key = |d: i64| fc.key(d);
    let mods: Vec<(i64, FPModule)> =
        fc.degrees.iter().map(|&d| (d, FPModule::generated_by(&gens[&d], c.module(d).relations()))).collect();
    let diffs: Vec<(i64, Matrix)> = fc
        .degrees
        .iter()
        .filter_map(|&d| {
            let (gs, gt) = (&gens[&d], gens.get(&key(d - 1))?);
            if gs.cols() == 0 || gt.cols() == 0 {
                return None;
            }
            let rel = c.module(d - 1).relations();
            let a = Matrix::hstack(&[gt, rel]);
            let x = solve(&a, &c.diff(d).mul(gs)).unwrap().expect("subcomplex is closed under ∂");
            Some((d, x.block(0, 0, gt.cols(), gs.cols())))
        })
        .collect();
    let p = ChainComplex::new(r, c.shape(), mods, diffs).unwrap();
    let incl = ChainMap::new(&p, c, |d| gens[&key(d)].clone()).expect("inclusion is a chain map");
    (p, incl)
}

/// `M → M/L` for a subcomplex given by generator columns per degree.
fn quotient(c: &ChainComplex, incl: &ChainMap) -> ChainMap {
    let r = c.ring();
    let mods: Vec<(i64, FPModule)> = c
        .degrees()
        .iter()
        .map(|&d| {
            let rel = Matrix::hstack(&[c.module(d).relations(), &incl.component(d)]);
            (d, FPModule::new(r, c.gens(d), rel).unwrap())
        })
        .collect();
    let diffs: Vec<(i64, Matrix)> = c.degrees().iter().map(|&d| (d, c.diff(d).into_owned())).collect();
    let q = ChainComplex::new(r, c.shape(), mods, diffs).unwrap();
    ChainMap::new(c, &q, |d| Matrix::identity(r, c.gens(d))).expect("quotient map")
}

fn pmiff(case: &mut Case) -> Outcome {
    let c = free_complex(case, 3, 2);
    let Some(o) = Oracle::new(&c) else { return Outcome::Vacuous };
    let sm = is_split_minimal(&c);
    let pm_lib = is_pure_minimal(&c);
    if sm == Tri::Unknown {
        return Outcome::Vacuous;
    }
    let found = o.pure_acyclic_pure_sub().cloned();
    let pm = found.is_none();
    if sm.is_true() != pm || pm_lib.is_true() != pm {
        return failed(format!("split-minimal {sm}, pure-minimal {pm_lib}, elementwise pure-minimal {pm}"), &[("complex", &c)]);
    }
    if let Some(sub) = found {
        let (p, incl) = realize(&c, &o.fc, &sub);
        if !p.is_contractible() {
            return failed("a pure-acyclic pure subcomplex is not contractible", &[("complex", &c), ("sub", &p)]);
        }
        if chain_retraction(&incl).is_none() {
            return failed("a pure-acyclic pure subcomplex is not a direct summand", &[("complex", &c), ("sub", &p)]);
        }
    }
    Outcome::Held
}

fn m1m4(case: &mut Case) -> Outcome {
    let c = free_complex(case, 2, 2);
    let Some(o) = Oracle::new(&c) else { return Outcome::Vacuous };
    let all = o.fc.whole();
    let pure: Vec<&Sub> = o.nonzero().filter(|s| o.fc.is_pure_in(s, &all)).collect();
    if pure.len() > 200 {
        return Outcome::Vacuous;
    }
    let (mut m1, mut m4) = (true, true);
    for sub in pure {
        let (p, incl) = realize(&c, &o.fc, sub);
        let split = c.degrees().iter().all(|&d| {
            incl.component_hom(d).source().gens() == 0 || incl.component_hom(d).retraction().is_some()
        });
        let beta = quotient(&c, &incl);
        let f = classify_map(&beta);
        if f.is_iso {
            return failed("the quotient by a nonzero subcomplex is an isomorphism", &[("complex", &c), ("sub", &p)]);
        }
        m1 &= !f.is_pure_qis;
        if split {
            m4 &= !f.is_homotopy_equiv;
        }
    }
    let pm = is_pure_minimal(&c);
    let sm = is_split_minimal(&c);
    if pm.is_true() != m1 || o.is_pure_minimal() != m1 {
        return failed(format!("pure-minimal is {pm} but the quotient criterion gives {m1}"), &[("complex", &c)]);
    }
    if sm.is_true() != m4 {
        return failed(format!("split-minimal is {sm} but the quotient criterion gives {m4}"), &[("complex", &c)]);
    }
    Outcome::Held
}

fn asm_apm(case: &mut Case) -> Outcome {
    let c = match case.g.below(4) {
        0 => case.contractible(4, 2, false),
        1 => case.complex(Style::DiskSphereSumScrambled, 3, 2, false),
        _ => case.complex(Style::AcyclicByConstruction, 4, 2, false),
    };
    let contractible = c.is_contractible();
    let pa = c.is_pure_acyclic();
    if contractible && !pa {
        return failed("contractible but not pure-acyclic", &[("complex", &c)]);
    }
    if !contractible && !pa {
        return Outcome::Vacuous;
    }
    let (sm, pm) = (is_split_minimal(&c), is_pure_minimal(&c));
    if sm == Tri::Unknown || pm == Tri::Unknown {
        return Outcome::Vacuous;
    }
    if contractible && sm.is_true() && !c.is_zero() {
        return failed("nonzero contractible split-minimal complex", &[("complex", &c)]);
    }
    if pa && pm.is_true() && !c.is_zero() {
        return failed("nonzero pure-acyclic pure-minimal complex", &[("complex", &c)]);
    }
    Outcome::Held
}

fn semiflat(case: &mut Case) -> Outcome {
    let c = free_complex(case, 3, 2);
    let Some(o) = Oracle::new(&c) else { return Outcome::Vacuous };
    let pm = is_pure_minimal(&c);
    if pm == Tri::Unknown {
        return Outcome::Vacuous;
    }
    let only_zero = o.acyclic_pure_sub().is_none();
    if pm.is_true() != only_zero {
        return failed(format!("pure-minimal is {pm}, no nonzero acyclic pure subcomplex is {only_zero}"), &[("complex", &c)]);
    }
    Outcome::Held
}

fn semiinj(case: &mut Case) -> Outcome {
    let c = free_complex(case, 3, 2);
    let Some(o) = Oracle::new(&c) else { return Outcome::Vacuous };
    let Some(minimal) = brute_force_minimal(&c, BRUTE_BUDGET) else { return Outcome::Vacuous };
    let sm = is_split_minimal(&c);
    if sm == Tri::Unknown {
        return Outcome::Vacuous;
    }
    let pm = o.is_pure_minimal();
    let no_acyclic = o.acyclic_sub().is_none();
    let v = [minimal, sm.is_true(), pm, no_acyclic];
    if v.iter().any(|&x| x != v[0]) {
        return failed(
            format!("minimal {minimal}, split-minimal {sm}, pure-minimal {pm}, no nonzero acyclic subcomplex {no_acyclic}"),
            &[("complex", &c)],
        );
    }
    Outcome::Held
}

fn corvnr(case: &mut Case) -> Outcome {
    let periodic = if case.index % 6 == 5 { periodic_pair(case) } else { None };
    let c = if let Some(c) = periodic {
        c
    } else {
        let s = case.pick(&[
            Style::DiskSphereSumScrambled,
            Style::AcyclicByConstruction,
            Style::FreeRandom,
            Style::ConeOfRandomMap,
        ]);
        case.complex(s, 3, 2, false)
    };
    let Some(o) = Oracle::new(&c) else { return Outcome::Vacuous };
    let pm = is_pure_minimal(&c);
    if pm == Tri::Unknown {
        return Outcome::Vacuous;
    }
    if pm.is_true() != o.is_pure_minimal() {
        return failed(format!("pure-minimal is {pm} but the elementwise search disagrees"), &[("complex", &c)]);
    }
    let no_acyclic = o.acyclic_sub().is_none();
    if pm.is_true() != no_acyclic {
        return Outcome::Expected(
            format!("pure-minimal is {pm} but no nonzero acyclic subcomplex is {no_acyclic}"),
            vec![("complex".into(), c)],
        );
    }
    if c.is_acyclic() && pm.is_true() && !c.is_zero() {
        return Outcome::Expected("nonzero acyclic pure-minimal complex".into(), vec![("complex".into(), c)]);
    }
    Outcome::Held
}

fn perfect(case: &mut Case) -> Outcome {
    let c = match case.index % 3 {
        0 => case.complex(Style::DiskSphereSumScrambled, 3, 2, false),
        _ => free_complex(case, 3, 2),
    };
    let Ok(res) = pure_minimal_replacement(&c, 8) else { return Outcome::Vacuous };
    if res.truncated {
        return Outcome::Vacuous;
    }
    let p = &res.complex;
    let cs = [("complex", &c), ("resolution", p)];
    if !p.degrees().iter().all(|&d| classify_module(p.module(d)).is_projective) {
        return failed("the resolution has a non-projective term", &cs);
    }
    if !classify_map(&res.augmentation).is_qis {
        return failed("the augmentation is not a quasi-isomorphism", &cs);
    }
    let pm = is_pure_minimal(p);
    if !pm.is_true() {
        return failed(format!("the resolution has pure-minimal {pm}"), &cs);
    }
    if let Some(o) = Oracle::new(p) {
        if !o.is_pure_minimal() {
            return failed("the elementwise search finds a pure-acyclic pure subcomplex of the resolution", &cs);
        }
    }
    Outcome::Held
}

fn pmsm(case: &mut Case) -> Outcome {
    let c = free_complex(case, 3, 3);
    if case.ring.is_finite() {
        let Some(o) = Oracle::new(&c) else { return Outcome::Vacuous };
        let all = o.fc.whole();
        let pure: Vec<&Sub> = o.subs.iter().filter(|s| o.fc.is_pure_in(s, &all)).collect();
        let sub = if case.g.coin(0.7) && !pure.is_empty() {
            pure[case.g.below(pure.len())].clone()
        } else {
            o.subs[case.g.below(o.subs.len())].clone()
        };
        if !o.fc.is_pure_in(&sub, &all) {
            return Outcome::Vacuous;
        }
        let (p, incl) = realize(&c, &o.fc, &sub);
        return check_degreewise_split(&c, &p, &incl);
    }
    // over ℤ: a random subcomplex spanned by one vector and its boundary,
    // saturated more often than not
    let r = c.ring().clone();
    let degs: Vec<i64> = c.degrees().into_iter().filter(|&d| c.gens(d) > 0).collect();
    if degs.is_empty() {
        return Outcome::Vacuous;
    }
    let i = degs[case.g.below(degs.len())];
    let v = case.g.matrix(c.gens(i), 1);
    let mut gens: BTreeMap<i64, Matrix> = c.degrees().iter().map(|&d| (d, Matrix::zeros(&r, c.gens(d), 0))).collect();
    gens.insert(i, v.clone());
    if c.gens(i - 1) > 0 {
        gens.insert(i - 1, c.diff(i).mul(&v));
    }
    if case.g.coin(0.6) {
        for m in gens.values_mut() {
            if m.cols() > 0 {
                let s = snf(m);
                let rank = s.divisors.iter().filter(|d| !d.is_zero()).count();
                *m = s.u_inv.block(0, 0, m.rows(), rank);
            }
        }
    }
    let pure = gens.iter().all(|(&d, g)| FPModule::new(&r, c.gens(d), g.clone()).unwrap().canonical_form().divisors.is_empty());
    if !pure {
        return Outcome::Vacuous;
    }
    let mods: Vec<(i64, FPModule)> = gens.iter().map(|(&d, g)| (d, FPModule::generated_by(g, c.module(d).relations()))).collect();
    let diffs: Vec<(i64, Matrix)> = gens
        .iter()
        .filter_map(|(&d, g)| {
            let t = gens.get(&(d - 1))?;
            if g.cols() == 0 || t.cols() == 0 {
                return None;
            }
            let x = solve(t, &c.diff(d).mul(g)).unwrap().expect("closed under ∂");
            Some((d, x))
        })
        .collect();
    let p = ChainComplex::new(&r, c.shape(), mods, diffs).unwrap();
    let incl = ChainMap::new(&p, &c, |d| gens[&d].clone()).expect("inclusion");
    check_degreewise_split(&c, &p, &incl)
}

fn check_degreewise_split(c: &ChainComplex, p: &ChainComplex, incl: &ChainMap) -> Outcome {
    for d in c.degrees() {
        let f: ModuleHom = incl.component_hom(d);
        if f.source().gens() > 0 && f.retraction().is_none() {
            return failed(format!("degreewise pure but not split in degree {d}"), &[("complex", c), ("sub", p)]);
        }
    }
    Outcome::Held
}

/// An acyclic complex to test against, and modules that make the relevant
/// functor exact on it: (N pure-acyclic, M arbitrary) or (N acyclic, M free).
fn appendix_pair(case: &mut Case) -> (ChainComplex, ChainComplex) {
    if case.g.coin(0.5) {
        let free = case.g.coin(0.5);
        let n = case.contractible(3, 1, free);
        let m = case.complex(Style::DiskSphereSumScrambled, 2, 2, false);
        (m, n)
    } else {
        let n = case.complex(Style::AcyclicByConstruction, 3, 2, false);
        let s = case.pick(&[Style::FreeRandom, Style::DiskSphereSumScrambled]);
        let m = case.complex(s, 2, 2, true);
        (m, n)
    }
}

fn appendix_hom(case: &mut Case) -> Outcome {
    let (m, n) = appendix_pair(case);
    let cs = [("M", &m), ("N", &n)];
    for d in m.support() {
        match total_hom(&ChainComplex::sphere(m.module(d), 0), &n) {
            Ok(h) if h.is_acyclic() => {}
            Ok(_) => return Outcome::Vacuous,
            Err(e) => return failed(format!("Hom(M_{d}, N): {e}"), &cs),
        }
    }
    match total_hom(&m, &n) {
        Ok(h) if h.is_acyclic() => Outcome::Held,
        Ok(h) => failed("Hom(M, N) is not acyclic", &[("M", &m), ("N", &n), ("Hom", &h)]),
        Err(e) => failed(format!("Hom(M, N): {e}"), &cs),
    }
}

fn appendix_hom_z(case: &mut Case) -> Outcome {
    // the roles swap: M is the acyclic one, N supplies the test modules
    let (n, m) = appendix_pair(case);
    let cs = [("M", &m), ("N", &n)];
    for d in n.support() {
        match total_hom(&m, &ChainComplex::sphere(n.module(d), 0)) {
            Ok(h) if h.is_acyclic() => {}
            Ok(_) => return Outcome::Vacuous,
            Err(e) => return failed(format!("Hom(M, N_{d}): {e}"), &cs),
        }
    }
    match total_hom(&m, &n) {
        Ok(h) if h.is_acyclic() => Outcome::Held,
        Ok(h) => failed("Hom(M, N) is not acyclic", &[("M", &m), ("N", &n), ("Hom", &h)]),
        Err(e) => failed(format!("Hom(M, N): {e}"), &cs),
    }
}

fn appendix_tensor(case: &mut Case) -> Outcome {
    let (m, l) = appendix_pair(case);
    let cs = [("L", &l), ("M", &m)];
    for d in m.support() {
        match total_tensor(&l, &ChainComplex::sphere(m.module(d), 0)) {
            Ok(t) if t.is_acyclic() => {}
            Ok(_) => return Outcome::Vacuous,
            Err(e) => return failed(format!("L ⊗ M_{d}: {e}"), &cs),
        }
    }
    let t = match total_tensor(&l, &m) {
        Ok(t) => t,
        Err(e) => return failed(format!("L ⊗ M: {e}"), &cs),
    };
    let acyclic = t.is_acyclic();
    let dual = t.character_dual().map(|d| d.is_acyclic());
    let adj = l.character_dual().and_then(|ld| total_hom(&m, &ld)).map(|h| h.is_acyclic());
    match (dual, adj) {
        (Ok(a), Ok(b)) if a == acyclic && b == acyclic => {}
        (a, b) => {
            return failed(
                format!("L ⊗ M acyclic {acyclic}, its character dual {a:?}, Hom(M, L^∨) {b:?}"),
                &[("L", &l), ("M", &m), ("tensor", &t)],
            )
        }
    }
    if acyclic {
        Outcome::Held
    } else {
        failed("L ⊗ M is not acyclic", &[("L", &l), ("M", &m), ("tensor", &t)])
    }
}

/// Every suite over its default ring.
pub fn run_all(seed: u64, cases: Option<u64>) -> Vec<SuiteReport> {
    SUITES.iter().map(|s| run_suite(s, None, seed, cases).expect("registered suite")).collect()
}
