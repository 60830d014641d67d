mod common;

use common::{ade, all_fixtures, icis, oracle, other_hypersurfaces};
use versal_kit::module_ext::Dim;
use versal_kit::poly::{parse_poly, Field, MonomialOrder, Poly, Ring};
use versal_kit::singularity::{Singularity, SingularityError};
use versal_kit::standard_basis::Ideal;

fn sing(vars: &[&str], eqs: &[&str]) -> Result<Singularity, SingularityError> {
    let r = Ring::with_vars(vars, Field::Rational, MonomialOrder::Degrevlex);
    Singularity::new(eqs.iter().map(|e| parse_poly(&r, e).unwrap()).collect())
}

#[test]
fn ade_tjurina_numbers_match_oracle_and_table() {
    for (fixture, tau) in ade() {
        let s = fixture.singularity();
        let (_, computed) = s.tjurina_algebra().unwrap();
        assert_eq!(computed, oracle::tjurina(&s.equations()[0]), "{}", fixture.name);
        assert_eq!(computed, tau, "{}", fixture.name);
        // quasi-homogeneous: μ = τ
        assert_eq!(s.milnor_algebra().unwrap().1, tau, "{}", fixture.name);
    }
}

#[test]
fn non_quasi_homogeneous_curve_has_tau_below_mu() {
    let s = sing(&["x", "y"], &["x^5 + y^5 + x^2*y^2"]).unwrap();
    let (_, tau) = s.tjurina_algebra().unwrap();
    assert_eq!(tau, oracle::tjurina(&s.equations()[0]));
    assert_eq!(s.milnor_algebra().unwrap().1, 11);
    assert_eq!(tau, 10);
}

#[test]
fn t1_of_hypersurfaces_is_the_tjurina_algebra() {
    for fixture in ade().into_iter().map(|(f, _)| f).chain(other_hypersurfaces()) {
        let s = fixture.singularity();
        let (_, tau) = s.tjurina_algebra().unwrap();
        let t1 = s.tangent_module(1).unwrap();
        assert_eq!(t1.dimension, Dim::Finite(tau), "{}", fixture.name);
        assert_eq!(t1.basis.as_ref().unwrap().len(), tau);
    }
}

#[test]
fn t2_vanishes_everywhere() {
    for fixture in all_fixtures() {
        let t2 = fixture.singularity().tangent_module(2).unwrap();
        assert_eq!(t2.dimension, Dim::Finite(0), "{}", fixture.name);
    }
}

#[test]
fn icis_tangent_dimensions() {
    let expected = [5, 6, 7];
    for (fixture, tau) in icis().into_iter().zip(expected) {
        let s = fixture.singularity();
        assert!(s.certify_regular());
        assert!(s.certify_isolated().unwrap());
        assert_eq!(s.tangent_module(1).unwrap().dimension, Dim::Finite(tau), "{}", fixture.name);
    }
}

#[test]
fn cusp_t1_basis_and_t0_witness() {
    let s = sing(&["x", "y"], &["x^3 + y^2"]).unwrap();
    let t1 = s.tangent_module(1).unwrap();
    let basis: Vec<String> = t1.basis.unwrap().iter().map(|v| v[0].to_string()).collect();
    assert_eq!(basis, ["1", "x"]);
    let t0 = s.tangent_module(0).unwrap();
    assert_eq!(t0.dimension, Dim::Infinite);
    // the witness is a derivation preserving the ideal
    let w = t0.witness.unwrap();
    let jac = s.jacobian_matrix();
    let mut image = Poly::zero(s.ring());
    for (d, xi) in jac[0].iter().zip(&w) {
        image = &image + &(d * xi);
    }
    assert!(Ideal::new(s.ring(), s.equations().to_vec()).contains(&image));
    assert!(w.iter().any(|p| !p.is_zero()));
}

#[test]
fn rejections() {
    let line = sing(&["x", "y"], &["x^2"]).unwrap();
    assert!(matches!(line.tangent_module(1), Err(SingularityError::NonIsolated)));
    assert!(matches!(sing(&["x"], &["x", "x"]), Err(SingularityError::TooManyEquations { .. })));
    assert!(matches!(sing(&["x", "y"], &["x + 1"]), Err(SingularityError::NotAtOrigin(0))));
    let pair = sing(&["x", "y"], &["x", "x"]).unwrap();
    assert!(!pair.certify_regular());
    assert!(matches!(pair.tangent_module(1), Err(SingularityError::NotRegularSequence)));
    assert!(matches!(pair.tangent_module(3), Err(SingularityError::BadLevel(3))));
}

#[test]
fn prime_field_agrees_with_rationals_on_ade() {
    for (fixture, tau) in ade() {
        let r = Ring::with_vars(&fixture.vars, Field::prime(32003).unwrap(), MonomialOrder::Degrevlex);
        let s = Singularity::new(vec![parse_poly(&r, &fixture.equations[0]).unwrap()]).unwrap();
        assert_eq!(s.tjurina_algebra().unwrap().1, tau, "{}", fixture.name);
    }
}
