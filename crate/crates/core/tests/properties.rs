//! Invariants under random input.

use proptest::prelude::*;
use puremin::harness::{Gen, GenProfile, Style};
use puremin::json::{complex_to_string, parse_complex};
use puremin::{cone, reduce, total_hom, ChainComplex, ChainMap, FPModule, RingSpec};

fn ring(i: usize) -> RingSpec {
    match i % 5 {
        0 => RingSpec::Int,
        1 => RingSpec::int_mod(4).unwrap(),
        2 => RingSpec::int_mod(6).unwrap(),
        3 => RingSpec::invert(&[5]).unwrap(),
        _ => RingSpec::local_at(3).unwrap(),
    }
}

fn style(i: usize) -> Style {
    [Style::FreeRandom, Style::DiskSphereSumScrambled, Style::ConeOfRandomMap, Style::AcyclicByConstruction][i % 4]
}

fn complex(r: usize, s: usize, seed: u64) -> ChainComplex {
    let p = GenProfile::new(&ring(r), style(s), seed).sized(3, 2);
    Gen::from_profile(&p).complex(&p).complex
}

fn free_complex(r: usize, s: usize, seed: u64) -> ChainComplex {
    let p = GenProfile::new(&ring(r), style(s), seed).sized(3, 2).free();
    Gen::from_profile(&p).complex(&p).complex
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 48, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn shift_negates_the_differential(r in 0usize..5, s in 0usize..4, seed in any::<u64>(), k in -3i64..=3) {
        let c = complex(r, s, seed);
        let t = c.shift(k);
        prop_assert!(t.is_valid());
        for d in c.degrees() {
            let want = if k % 2 == 0 { c.diff(d).into_owned() } else { c.diff(d).neg() };
            prop_assert_eq!(t.diff(d + k).into_owned(), want);
        }
        prop_assert_eq!(t.shift(-k), c);
    }

    #[test]
    fn cones_are_complexes_and_cones_of_isos_contract(r in 0usize..5, s in 0usize..4, seed in any::<u64>()) {
        let c = complex(r, s, seed);
        let mut g = Gen::new(c.ring(), 9, seed);
        let (d, iso) = g.scramble(&c);
        let k = cone(&iso);
        prop_assert!(k.cone.is_valid());
        prop_assert!(k.cone.is_contractible());
        let f = g.chain_map(&c, &d);
        prop_assert!(f.is_chain_map());
        prop_assert!(cone(&f).cone.is_valid());
    }

    #[test]
    fn hom_from_the_ring_is_the_complex(r in 0usize..5, s in 0usize..4, seed in any::<u64>()) {
        let c = complex(r, s, seed);
        let unit = ChainComplex::sphere(&FPModule::free(c.ring(), 1), 0);
        let h = total_hom(&unit, &c).unwrap();
        prop_assert!(h.is_valid());
        for d in c.degrees() {
            prop_assert_eq!(h.homology(d).canonical_form(), c.homology(d).canonical_form());
        }
    }

    #[test]
    fn json_round_trips(r in 0usize..5, s in 0usize..4, seed in any::<u64>()) {
        let c = complex(r, s, seed);
        prop_assert_eq!(parse_complex(&complex_to_string(&c)).unwrap(), c);
    }

    #[test]
    fn reduction_keeps_homology_and_splits_off_a_contractible_part(r in 0usize..5, s in 0usize..4, seed in any::<u64>()) {
        let c = free_complex(r, s, seed);
        let red = reduce(&c).unwrap();
        prop_assert!(red.verify().is_ok());
        prop_assert!(red.split_part.is_contractible());
        for d in c.degrees() {
            prop_assert_eq!(red.reduced.homology(d).canonical_form(), c.homology(d).canonical_form());
        }
        prop_assert!(red.iso.then(&red.iso_inv).equals(&ChainMap::identity(&red.source)));
    }
}
