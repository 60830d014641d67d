//! Fixtures, an independent Tjurina-number oracle and randomized family
//! generators shared by the integration tests and the acceptance harness.

#![allow(dead_code)]

pub mod checks;
pub mod oracle;

use std::sync::Arc;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use versal_kit::deformation::{ArtinianAlgebra, EmbeddedLifting};
use versal_kit::poly::{parse_poly, Field, MonomialOrder, Poly, Ring};
use versal_kit::singularity::Singularity;

/// Seed used when `VERSAL_KIT_SEED` is unset.
pub const DEFAULT_SEED: u64 = 20_240_917;

pub fn seed() -> u64 {
    std::env::var("VERSAL_KIT_SEED")
        .ok()
        .and_then(|s| s.trim().parse().ok())
        .unwrap_or(DEFAULT_SEED)
}

pub fn rng(stream: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(seed());
    r.set_stream(stream);
    r
}

#[derive(Debug, Clone)]
pub struct Fixture {
    pub name: &'static str,
    pub vars: Vec<&'static str>,
    pub equations: Vec<String>,
}

impl Fixture {
    pub fn ring(&self) -> Arc<Ring> {
        Ring::with_vars(&self.vars, Field::Rational, MonomialOrder::Degrevlex)
    }

    pub fn singularity(&self) -> Singularity {
        let r = self.ring();
        Singularity::new(self.equations.iter().map(|e| parse_poly(&r, e).unwrap()).collect()).unwrap()
    }
}

fn fx(name: &'static str, vars: &[&'static str], eqs: &[&str]) -> Fixture {
    Fixture {
        name,
        vars: vars.to_vec(),
        equations: eqs.iter().map(|s| s.to_string()).collect(),
    }
}

/// The simple plane curve singularities with their Tjurina numbers.
pub fn ade() -> Vec<(Fixture, usize)> {
    let mut out = Vec::new();
    const A: [&str; 8] = ["A1", "A2", "A3", "A4", "A5", "A6", "A7", "A8"];
    for k in 1..=8 {
        let name = A[k - 1];
        out.push((Fixture { name, vars: vec!["x", "y"], equations: vec![format!("x^{} + y^2", k + 1)] }, k));
    }
    const D: [&str; 3] = ["D4", "D5", "D6"];
    for k in 4..=6 {
        let name = D[k - 4];
        out.push((Fixture { name, vars: vec!["x", "y"], equations: vec![format!("x^2*y + y^{}", k - 1)] }, k));
    }
    out.push((fx("E6", &["x", "y"], &["x^3 + y^4"]), 6));
    out.push((fx("E7", &["x", "y"], &["x^3 + x*y^3"]), 7));
    out.push((fx("E8", &["x", "y"], &["x^3 + y^5"]), 8));
    out
}

/// Hypersurfaces outside the plane-curve ADE list.
pub fn other_hypersurfaces() -> Vec<Fixture> {
    vec![
        fx("A1 in three variables", &["x", "y", "z"], &["x^2 + y^2 + z^2"]),
        fx("D4 surface", &["x", "y", "z"], &["x^2*y + y^3 + z^2"]),
        fx("x5+y5+x2y2", &["x", "y"], &["x^5 + y^5 + x^2*y^2"]),
    ]
}

/// Complete intersections of codimension two.
pub fn icis() -> Vec<Fixture> {
    vec![
        fx("four lines", &["x", "y", "z"], &["x^2 + y^2 + z^2", "x*y"]),
        fx("space curve", &["x", "y", "z"], &["x*y", "x^2 + y^3 + z^2"]),
        fx("surface in four variables", &["x", "y", "z", "w"], &["x*y + z*w", "x^2 + y^2 + z^2 + w^3"]),
    ]
}

pub fn all_fixtures() -> Vec<Fixture> {
    let mut v: Vec<Fixture> = ade().into_iter().map(|(f, _)| f).collect();
    v.extend(other_hypersurfaces());
    v.extend(icis());
    v
}

/// A random polynomial in `vars` with small integer coefficients, total
/// degree at most `deg`, written as text.
pub fn random_poly_text(rng: &mut ChaCha8Rng, vars: &[&str], deg: u32, terms: usize) -> String {
    let mut parts = Vec::new();
    for _ in 0..terms {
        let c: i64 = rng.gen_range(-3..=3);
        if c == 0 {
            continue;
        }
        let d = rng.gen_range(0..=deg);
        let mut mono = Vec::new();
        let mut left = d;
        for (i, v) in vars.iter().enumerate() {
            let e = if i + 1 == vars.len() { left } else { rng.gen_range(0..=left) };
            left -= e;
            if e > 0 {
                mono.push(format!("{v}^{e}"));
            }
        }
        mono.insert(0, format!("({c})"));
        parts.push(mono.join("*"));
    }
    if parts.is_empty() {
        "0".to_string()
    } else {
        parts.join(" + ")
    }
}

/// The ring `κ[x, params]` of families over the given parameters.
pub fn family_ring(s: &Singularity, params: &[&str]) -> Arc<Ring> {
    let names: Vec<String> = params.iter().map(|p| p.to_string()).collect();
    s.ring().extend(&names).unwrap().with_order(MonomialOrder::Degrevlex)
}

pub fn one_param(order: u32) -> ArtinianAlgebra {
    let r = Ring::with_vars(&["t"], Field::Rational, MonomialOrder::Degrevlex);
    ArtinianAlgebra::truncation_in(&r, order)
}

/// `F_j + Σ_{k=1}^{order} t^k g_{jk}` with random `g`.
pub fn random_lifting(rng: &mut ChaCha8Rng, fixture: &Fixture, base: &ArtinianAlgebra) -> EmbeddedLifting {
    let s = fixture.singularity();
    let params: Vec<&str> = base.t_vars().iter().map(|s| s.as_str()).collect();
    let ring = family_ring(&s, &params);
    let eqs: Vec<Poly> = fixture
        .equations
        .iter()
        .map(|f| {
            let mut text = f.clone();
            for m in base.basis().iter().filter(|m| m.degree() > 0) {
                let mono: Vec<String> = m
                    .exponents()
                    .iter()
                    .zip(&params)
                    .filter(|(e, _)| **e > 0)
                    .map(|(e, p)| format!("{p}^{e}"))
                    .collect();
                let g = random_poly_text(rng, &fixture.vars, 3, 3);
                text.push_str(&format!(" + {}*({g})", mono.join("*")));
            }
            parse_poly(&ring, &text).unwrap()
        })
        .collect();
    EmbeddedLifting::new(&s, base, eqs).unwrap()
}

/// A proptest runner whose randomness is fixed by `VERSAL_KIT_SEED`.
pub fn runner(cases: u32, stream: u8) -> proptest::test_runner::TestRunner {
    use proptest::test_runner::{Config, RngAlgorithm, TestRng, TestRunner};
    let mut bytes = [0u8; 32];
    bytes[..8].copy_from_slice(&seed().to_le_bytes());
    bytes[8] = stream;
    let config = Config {
        cases,
        failure_persistence: None,
        ..Config::default()
    };
    TestRunner::new_with_rng(config, TestRng::from_seed(RngAlgorithm::ChaCha, &bytes))
}

/// A ChaCha generator for one proptest case.
pub fn case_rng(sub: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed() ^ sub.rotate_left(17))
}
