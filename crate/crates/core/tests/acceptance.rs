//! The six acceptance criteria, one PASS/FAIL line each.
//!
//! Runs as a plain binary (`harness = false`) so the summary is printed
//! whether or not output capture is on.

mod common;

use std::time::Instant;

use puremin::harness::finite::Oracle;
use puremin::harness::suites::{run_suite, SuiteReport};
use puremin::harness::{gallery, Gen, GenProfile, Style};
use puremin::json::ComplexDto;
use puremin::{
    diagnose, is_pure_ses, module_dimension, reduce, resolve_module, ChainComplex, Dimension, DimensionKind, FPModule,
    Matrix, Minimality, RingSpec, SesModules, Tri,
};

const SEED: u64 = 20240601;

type Check = Result<String, String>;
type Criterion = (&'static str, fn() -> Check);

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn gallery_facts() -> Check {
    let d = diagnose(&gallery("dold").unwrap());
    let got = (d.acyclic, d.pure_acyclic, d.contractible, d.split_minimal, d.pure_minimal, d.minimal.label());
    ensure(got == (true, false, false, Tri::True, Tri::True, "yes"), || format!("dold: {got:?}"))?;

    let f = gallery("exaF").unwrap();
    let d = diagnose(&f);
    ensure(d.split_minimal == Tri::True && d.pure_minimal == Tri::True, || format!("exaF: {d:?}"))?;
    let Minimality::No(h) = &d.minimal else { return Err(format!("exaF minimal is {}", d.minimal.label())) };
    let one = Matrix::identity(f.ring(), 1);
    ensure(h.component(0) == Some(&one) && h.components.len() == 1, || format!("exaF witness {:?}", h.components))?;
    Ok("dold and exaF flags match".into())
}

fn reduction_soundness() -> Check {
    let styles = [Style::FreeRandom, Style::ConeOfRandomMap, Style::DiskSphereSumScrambled, Style::AcyclicByConstruction];
    let mut moves = 0;
    for ring in common::rings() {
        for i in 0..200u64 {
            let mut p = GenProfile::new(&ring, styles[(i % 4) as usize], SEED + i).sized(4, 3).free();
            p.entry_bound = 9;
            let c = Gen::from_profile(&p).complex(&p).complex;
            let tag = format!("{ring} case {i}");
            let red = reduce(&c).map_err(|e| format!("{tag}: {e}"))?;
            red.verify().map_err(|e| format!("{tag}: iso data: {e}"))?;
            for d in c.degrees() {
                let (a, b) = (c.homology(d).canonical_form(), red.reduced.homology(d).canonical_form());
                ensure(a == b, || format!("{tag}: H_{d} {a} became {b}"))?;
            }
            ensure(puremin::is_pure_minimal(&red.reduced) == Tri::True, || format!("{tag}: reduced is not pure-minimal"))?;
            if let Some(o) = Oracle::new(&red.reduced) {
                ensure(o.is_pure_minimal(), || format!("{tag}: elementwise search finds a pure-acyclic pure subcomplex"))?;
            }
            let again = reduce(&red.reduced).map_err(|e| format!("{tag}: {e}"))?;
            ensure(again.moves.is_empty() && again.reduced == red.reduced, || format!("{tag}: reduce is not idempotent"))?;
            moves += red.moves.len();
        }
    }
    Ok(format!("600 complexes over Z, Z/4, Z[1/5]; {moves} moves in total"))
}

fn dimension_formulas() -> Check {
    let z = RingSpec::Int;
    let mut g = Gen::new(&z, 9, SEED);
    let (mut free, mut torsion, mut zero) = (0, 0, 0);
    for i in 0..100 {
        let m = g.module(3);
        let pd = module_dimension(&m, DimensionKind::Projective, 8).map_err(|e| format!("module {i}: {e}"))?;
        let want = match common::int_module_torsion_free(&m) {
            None => {
                zero += 1;
                Dimension::MinusInfinity
            }
            Some(true) => {
                free += 1;
                Dimension::Finite(0)
            }
            Some(false) => {
                torsion += 1;
                Dimension::Finite(1)
            }
        };
        ensure(pd == want, || format!("module {i} ({}): pd {pd:?}, oracle {want:?}", m.canonical_form()))?;
        top_degree_matches(&m).map_err(|e| format!("module {i}: {e}"))?;
    }
    let z4 = RingSpec::int_mod(4).unwrap();
    let two = FPModule::cyclic(&z4, &z4.from_i64(2));
    let pd = module_dimension(&two, DimensionKind::Projective, 8).map_err(|e| e.to_string())?;
    ensure(pd == Dimension::Infinite, || format!("pd of Z/2 over Z/4 is {pd:?}"))?;
    for ring in [z4, RingSpec::invert(&[5]).unwrap()] {
        let mut g = Gen::new(&ring, 9, SEED);
        for i in 0..30 {
            top_degree_matches(&g.module(3)).map_err(|e| format!("{ring} module {i}: {e}"))?;
        }
    }
    Ok(format!("{free} torsion-free, {torsion} torsion, {zero} zero; Z/2 over Z/4 infinite"))
}

/// A finite reduced resolution reports the top degree where it is nonzero.
fn top_degree_matches(m: &FPModule) -> Result<(), String> {
    let res = resolve_module(m, 8).map_err(|e| e.to_string())?;
    if res.truncated {
        return Ok(());
    }
    let top = res.complex.degrees().into_iter().filter(|&d| res.complex.module(d).gens() > 0).max();
    let want = match top {
        Some(t) => Dimension::Finite(t),
        None => Dimension::MinusInfinity,
    };
    ensure(res.dimension() == want, || format!("value {:?}, top nonzero degree {want:?}", res.dimension()))
}

fn suite_line(r: &SuiteReport) -> String {
    format!("{} {}/{}", r.suite, r.non_vacuous, r.cases)
}

fn check_suite(name: &str, ring: Option<RingSpec>, min: u64) -> Result<SuiteReport, String> {
    let r = run_suite(name, ring.as_ref(), SEED, None).map_err(|e| format!("{name}: {e}"))?;
    ensure(r.passed && r.failures.is_empty() && r.non_vacuous >= min, || format!("{r}"))?;
    let single = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
    let again = single.install(|| run_suite(name, ring.as_ref(), SEED, None)).unwrap();
    ensure(serde_json::to_string(&r).unwrap() == serde_json::to_string(&again).unwrap(), || {
        format!("{name}: report differs between thread counts")
    })?;
    Ok(r)
}

fn theorem_suites() -> Check {
    let mut lines = Vec::new();
    let z4 = RingSpec::int_mod(4).unwrap();
    let r = check_suite("vnr", Some(RingSpec::int_mod(6).unwrap()), 100)?;
    lines.push(suite_line(&r));
    let r = check_suite("vnr", Some(z4.clone()), 30)?;
    let dold = gallery("dold").unwrap();
    let found = r.expected_counterexamples.iter().any(|c| {
        c.complexes.values().any(|dto: &ComplexDto| dto.to_complex().is_ok_and(|x: ChainComplex| x == dold))
    });
    ensure(found, || "vnr over Z/4 did not find the Dold complex".into())?;
    lines.push("vnr/Z4 finds dold".into());
    let r = check_suite("bg", Some(z4), 50)?;
    lines.push(suite_line(&r));
    for name in [
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
        "pmsm",
    ] {
        lines.push(suite_line(&check_suite(name, None, 30)?));
    }
    Ok(lines.join(", "))
}

fn appendix_suites() -> Check {
    let mut lines = Vec::new();
    for name in ["appendix_hom", "appendix_homZ", "appendix_tensor"] {
        lines.push(suite_line(&check_suite(name, None, 30)?));
    }
    Ok(lines.join(", "))
}

fn purity_oracle() -> Check {
    let (mut total, mut pure) = (0, 0);
    for n in [4u64, 6] {
        let ring = RingSpec::int_mod(n).unwrap();
        let mut g = Gen::new(&ring, 9, SEED + n);
        for i in 0..120 {
            let m = g.small_module(16);
            let mut sub = g.sub_generators(&m, 2);
            if i % 2 == 1 {
                // multiples by a prime divisor are pure far less often
                let p = if n == 4 || g.coin(0.5) { 2 } else { 3 };
                sub = sub.scale(&ring.from_i64(p));
            }
            let s = SesModules::from_submodule(&m, &sub);
            let lib = is_pure_ses(&s).pure;
            let oracle = common::retraction_by_enumeration(&s);
            ensure(lib == oracle, || {
                format!("Z/{n} case {i}: is_pure_ses {lib}, enumeration {oracle}: {} ⊂ {}", s.left().canonical_form(), m.canonical_form())
            })?;
            total += 1;
            pure += usize::from(lib);
        }
    }
    Ok(format!("{total} sequences, {pure} pure, 0 disagreements"))
}

fn main() {
    let criteria: [Criterion; 6] = [
        ("gallery facts", gallery_facts),
        ("reduction soundness", reduction_soundness),
        ("dimension formulas", dimension_formulas),
        ("theorem suites", theorem_suites),
        ("appendix suites", appendix_suites),
        ("purity oracle equivalence", purity_oracle),
    ];
    let mut failed = 0;
    for (k, (name, run)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let out = std::panic::catch_unwind(run).unwrap_or_else(|_| Err("panicked".into()));
        let secs = t.elapsed().as_secs_f64();
        match out {
            Ok(detail) => println!("PASS criterion {} ({name}): {detail} [{secs:.1}s]", k + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL criterion {} ({name}): {why} [{secs:.1}s]", k + 1);
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
