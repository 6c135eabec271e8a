//! Gallery entries, file formats and reduction traces.

use puremin::harness::{gallery, GALLERY};
use puremin::json::{complex_to_string, module_to_string, parse_complex, parse_complex_or_module, parse_module, replay_trace, trace_to_string};
use puremin::{diagnose, reduce, Error, FPModule, RingSpec, Tri};

#[test]
fn every_entry_builds_or_explains_itself() {
    for name in GALLERY {
        match gallery(name) {
            Ok(c) => {
                assert!(c.is_valid(), "{name}");
                assert_eq!(parse_complex(&complex_to_string(&c)).unwrap(), c, "{name}");
            }
            Err(Error::Refused(why)) => assert!(["ZQ", "Zp_completion"].contains(&name), "{name}: {why}"),
            Err(e) => panic!("{name}: {e}"),
        }
    }
}

#[test]
fn small_entries_diagnose_as_expected() {
    let d = diagnose(&gallery("disk").unwrap());
    assert!(d.acyclic && d.pure_acyclic && d.contractible);
    assert_eq!(d.split_minimal, Tri::False);
    assert_eq!(d.minimal.label(), "no");

    let d = diagnose(&gallery("sphere").unwrap());
    assert!(!d.acyclic && !d.contractible);
    assert_eq!(d.split_minimal, Tri::True);
    assert_eq!(d.minimal.label(), "yes");

    let d = diagnose(&gallery("koszul22").unwrap());
    assert!(!d.acyclic);
    assert!(!d.notes.is_empty());

    // 2 is not a unit in ℤ[1/7], so H_0 = ℤ/2
    let d = diagnose(&gallery("exaF:7").unwrap());
    assert!(!d.acyclic);
    assert_eq!(d.split_minimal, Tri::True);
    assert_eq!(d.minimal.label(), "no");
}

#[test]
fn disk_reduces_to_nothing_in_one_move() {
    let red = reduce(&gallery("disk").unwrap()).unwrap();
    assert_eq!(red.moves.len(), 1);
    assert!(red.reduced.degrees().iter().all(|&d| red.reduced.gens(d) == 0));
    let back = replay_trace(&trace_to_string(&red)).unwrap();
    assert_eq!(back.reduced, red.reduced);
}

#[test]
fn tampered_traces_are_rejected() {
    let red = reduce(&gallery("disk").unwrap()).unwrap();
    let mut v: serde_json::Value = serde_json::from_str(&trace_to_string(&red)).unwrap();
    v["moves"] = serde_json::json!([]);
    let err = replay_trace(&v.to_string()).unwrap_err().to_string();
    assert!(err.contains("moves"), "{err}");
}

#[test]
fn modules_read_as_spheres() {
    let r = RingSpec::int_mod(6).unwrap();
    let m = FPModule::cyclic(&r, &r.from_i64(2));
    let text = module_to_string(&m);
    assert_eq!(parse_module(&text).unwrap().canonical_form(), m.canonical_form());
    let c = parse_complex_or_module(&text).unwrap();
    assert_eq!(c.homology(0).canonical_form(), m.canonical_form());
}

#[test]
fn bad_files_name_the_offending_path() {
    let mut v: serde_json::Value = serde_json::from_str(&complex_to_string(&gallery("koszul22").unwrap())).unwrap();
    v["ring"] = serde_json::json!("Z/0");
    assert!(parse_complex(&v.to_string()).is_err());

    let mut v: serde_json::Value = serde_json::from_str(&complex_to_string(&gallery("koszul22").unwrap())).unwrap();
    v["bogus"] = serde_json::json!(1);
    assert!(parse_complex(&v.to_string()).unwrap_err().to_string().contains("bogus"));

    // d∘d ≠ 0
    let text = complex_to_string(&gallery("koszul22").unwrap()).replace("-2", "3");
    assert!(matches!(parse_complex(&text), Err(Error::InvalidComplex(_))));
}
