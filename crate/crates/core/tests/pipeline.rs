use std::sync::Arc;

use proptest::prelude::*;

use slopecheck::charcheck::{verdict, CheckOptions, Status};
use slopecheck::coincidence::{all_equations, grassmann_point};
use slopecheck::geometry::{Location, Window};
use slopecheck::patterns::{pattern_region, zero_patterns_in_patch};
use slopecheck::rational::q;
use slopecheck::slope::Slope;
use slopecheck::tiling::{complementary_test, digitize_random, Selector};
use slopecheck::{NumberField, Q};

fn sqrt2() -> Arc<NumberField> {
    NumberField::new(vec![q(-2), q(0), q(1)], (q(1), q(2))).unwrap()
}

fn ammann_beenker() -> Slope {
    let e = |c: &[i64]| c.iter().map(|&x| q(x)).collect::<Vec<Q>>();
    let u1 = vec![e(&[-1]), e(&[0]), e(&[1]), e(&[0, 1])];
    let u2 = vec![e(&[0]), e(&[1]), e(&[0, 1]), e(&[1])];
    Slope::from_coeffs(&sqrt2(), &[u1, u2], None).unwrap()
}

#[test]
fn every_vertex_star_of_a_patch_has_a_full_region() {
    let s = ammann_beenker();
    let w = Window::of(&s);
    let patch = digitize_random(&s, &q(12), 5).unwrap();
    let stars = zero_patterns_in_patch(&patch, 2.0);
    assert!(!stars.is_empty());
    for star in &stars {
        assert!(!pattern_region(&w, star).interior_empty(), "{star:?}");
    }
}

#[test]
fn verdict_is_consistent_with_its_equations() {
    let s = ammann_beenker();
    let g = grassmann_point(&s);
    for e in all_equations(&s).unwrap() {
        assert!(e.equation.poly.eval(&g).is_zero());
    }
    let v = verdict(&s, &CheckOptions::default()).unwrap();
    assert_eq!(v.status, Status::NotCharacterized);
    let fam = v.family.unwrap();
    let point = fam.point.unwrap();
    for p in &v.groebner {
        assert_eq!(p.eval_q(&point), q(0));
    }
}

#[test]
fn asymmetric_quadratic_slope_has_a_rational_family_witness() {
    let e = |c: &[i64]| c.iter().map(|&x| q(x)).collect::<Vec<Q>>();
    let u1 = vec![e(&[1]), e(&[0, 1]), e(&[2, 1]), e(&[3])];
    let u2 = vec![e(&[0]), e(&[1]), e(&[1, 1]), e(&[-1, 2])];
    let s = Slope::from_coeffs(&sqrt2(), &[u1, u2], None).unwrap();
    assert!(s.is_generic().0);
    let v = verdict(&s, &CheckOptions::default()).unwrap();
    assert!(v.generators.iter().all(|p| p.eval(&v.point).is_zero()));
    assert_eq!(v.status, Status::NotCharacterized);
    assert!(!v.zero_dimensional);
    let point = v.family.unwrap().point.unwrap();
    for p in &v.generators {
        assert_eq!(p.eval_q(&point), q(0));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn patches_pass_the_complementary_test(seed in 0u64..10_000) {
        let s = ammann_beenker();
        let patch = digitize_random(&s, &q(5), seed).unwrap();
        let sel = Selector::new(&Window::of(&s), &patch.offset);
        for f in &patch.faces {
            prop_assert_eq!(complementary_test(&sel, f), Some(Location::Inside));
        }
        let total: Q = patch.tile_frequencies().unwrap().values().cloned().sum();
        prop_assert_eq!(total, q(1));
    }
}
