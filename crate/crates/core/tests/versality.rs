mod common;

use common::{icis, one_param, other_hypersurfaces, random_lifting, rng};
use versal_kit::deformation::is_flat;
use versal_kit::versal::{
    first_obstruction, kodaira_spencer, lift_to_next_order, miniversal, verify_versality_order, DeformationFamily,
};

#[test]
fn icis_and_surfaces_transport() {
    let mut rng = rng(30);
    let fixtures: Vec<_> = icis().into_iter().chain(other_hypersurfaces()).collect();
    for fixture in &fixtures {
        let s = fixture.singularity();
        for order in 1..=2 {
            for _ in 0..3 {
                let trial = DeformationFamily::from_lifting(&random_lifting(&mut rng, fixture, &one_param(order)));
                let cert = verify_versality_order(&s, order, &trial).unwrap();
                assert!(cert.verified, "{} at order {order}", fixture.name);
                assert!(cert.steps.iter().all(|st| st.e_class_vanishes));
            }
        }
    }
}

#[test]
fn miniversal_of_icis() {
    for fixture in icis() {
        let s = fixture.singularity();
        let v = miniversal(&s).unwrap();
        assert_eq!(v.family.parameters().len(), v.tau);
        assert!(kodaira_spencer(&v.family).unwrap().is_identity());
        assert!(first_obstruction(&s).unwrap().is_zero(), "{}", fixture.name);
        let lift = lift_to_next_order(&v.family, 2).unwrap();
        assert!(lift.certificate.flat);
        assert!(lift.corrections.iter().flatten().all(|c| c.is_zero()));
        assert!(is_flat(&lift.lifting).unwrap());
    }
}

#[test]
fn cusp_family_strings() {
    let s = common::ade()[1].0.singularity();
    let v = miniversal(&s).unwrap();
    assert_eq!(v.family_strings(), ["x^3 + y^2 + t1 + t2*x"]);
    assert_eq!(kodaira_spencer(&v.family).unwrap().to_string().lines().count(), 2);
}

#[test]
fn third_order_lifts() {
    let mut fixtures: Vec<_> = common::ade().into_iter().map(|(f, _)| f).take(3).collect();
    fixtures.push(icis()[0].clone());
    for fixture in fixtures {
        let v = miniversal(&fixture.singularity()).unwrap();
        for n in 2..=3 {
            let lift = lift_to_next_order(&v.family, n).unwrap();
            assert!(lift.certificate.flat, "{} at order {n}", fixture.name);
            assert!(is_flat(&lift.lifting).unwrap());
        }
    }
}
