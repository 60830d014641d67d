mod common;

use common::checks::{dual_numbers, extension_families, group_laws, plane_extension};
use proptest::prelude::*;
use versal_kit::module_ext::{baer_sum, extensions_isomorphic, is_split, opposite, ext_dimension, Dim, PresentedModule};
use versal_kit::poly::{parse_poly, Field, MonomialOrder, Ring};

#[test]
fn group_laws_over_the_line() {
    let (name, exts) = &extension_families()[0];
    assert!(group_laws(name, exts).unwrap() > 0);
}

#[test]
fn group_laws_over_the_plane() {
    let (name, exts) = &extension_families()[1];
    assert!(group_laws(name, exts).unwrap() > 0);
}

#[test]
fn different_classes_are_not_isomorphic() {
    let line = Ring::with_vars(&["x"], Field::Rational, MonomialOrder::Degrevlex);
    assert!(extensions_isomorphic(&dual_numbers(&line, 1), &dual_numbers(&line, 2)).unwrap().is_none());
    let plane = Ring::with_vars(&["x", "y"], Field::Rational, MonomialOrder::Degrevlex);
    let e10 = plane_extension(&plane, 1, 0);
    let e01 = plane_extension(&plane, 0, 1);
    assert!(extensions_isomorphic(&e10, &e01).unwrap().is_none());
    let sum = baer_sum(&e10, &e01).unwrap();
    assert!(extensions_isomorphic(&sum, &plane_extension(&plane, 1, 1)).unwrap().is_some());
    assert!(extensions_isomorphic(&opposite(&e10), &plane_extension(&plane, -1, 0)).unwrap().is_some());
}

#[test]
fn ext_of_the_residue_field_over_the_plane() {
    let plane = Ring::with_vars(&["x", "y"], Field::Rational, MonomialOrder::Degrevlex);
    let p = |s: &str| parse_poly(&plane, s).unwrap();
    let k = PresentedModule::cyclic(&plane, &[p("x"), p("y")]);
    let dims: Vec<Dim> = (0..3).map(|i| ext_dimension(&k, &k, i)).collect();
    assert_eq!(dims, [Dim::Finite(1), Dim::Finite(2), Dim::Finite(1)]);
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 24, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn classes_add(a in -4i64..=4, b in -4i64..=4, c in -4i64..=4, d in -4i64..=4) {
        let plane = Ring::with_vars(&["x", "y"], Field::Rational, MonomialOrder::Degrevlex);
        let e1 = plane_extension(&plane, a, b);
        let e2 = plane_extension(&plane, c, d);
        let s = baer_sum(&e1, &e2).unwrap();
        let c1 = e1.class_coordinates().unwrap();
        let c2 = e2.class_coordinates().unwrap();
        let cs = s.class_coordinates().unwrap();
        for i in 0..cs.len() {
            prop_assert_eq!(&cs[i], &(&c1[i] + &c2[i]));
        }
        prop_assert_eq!(is_split(&s).is_some(), a + c == 0 && b + d == 0);
    }
}
