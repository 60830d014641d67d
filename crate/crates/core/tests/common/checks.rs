//! One function per acceptance criterion. Each returns a one-line summary
//! on success and a diagnostic on failure.

use std::path::Path;
use std::process::Command;
use std::sync::Arc;
use std::time::{Duration, Instant};

use rand::Rng;
use versal_kit::deformation::{
    check_flatness, glue_over_fiber_product, is_flat, nu_difference, solve_corrections, ArtinianAlgebra,
    EmbeddedLifting, SmallExtensionStep, SyzygySource,
};
use versal_kit::module_ext::{
    baer_sum, extensions_isomorphic, is_split, opposite, pullback, pushforward, Dim, Extension, ModuleHom,
    PresentedModule,
};
use versal_kit::poly::{parse_poly, Field, MonomialOrder, Poly, Ring};
use versal_kit::singularity::Singularity;
use versal_kit::versal::{
    first_obstruction, kodaira_spencer, miniversal, verify_versality_order, DeformationFamily,
};

use super::{ade, all_fixtures, family_ring, one_param, oracle, other_hypersurfaces, random_lifting, rng, Fixture};

pub type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

pub fn ade_tjurina_suite() -> Outcome {
    let mut library_time = Duration::ZERO;
    for (fixture, _) in ade() {
        let s = fixture.singularity();
        let start = Instant::now();
        let (_, tau) = s.tjurina_algebra().map_err(|e| format!("{}: {e}", fixture.name))?;
        library_time += start.elapsed();
        let expected = oracle::tjurina(&s.equations()[0]);
        ensure(tau == expected, || format!("{}: library {tau}, oracle {expected}", fixture.name))?;
    }
    ensure(library_time < Duration::from_secs(10), || format!("suite took {library_time:?}"))?;
    Ok(format!("14 fixtures agree with the oracle in {library_time:.2?}"))
}

pub fn t1_matches_tjurina() -> Outcome {
    let mut n = 0;
    let hypersurfaces = ade().into_iter().map(|(f, _)| f).chain(other_hypersurfaces());
    for fixture in hypersurfaces {
        let s = fixture.singularity();
        let (_, tau) = s.tjurina_algebra().map_err(|e| e.to_string())?;
        let t1 = s.tangent_module(1).map_err(|e| e.to_string())?.dimension;
        ensure(t1 == Dim::Finite(tau), || format!("{}: T¹ {t1}, Tjurina {tau}", fixture.name))?;
        n += 1;
    }
    Ok(format!("{n} hypersurfaces"))
}

pub fn unobstructed() -> Outcome {
    let mut n = 0;
    for fixture in all_fixtures() {
        let s = fixture.singularity();
        let t2 = s.tangent_module(2).map_err(|e| e.to_string())?.dimension;
        ensure(t2 == Dim::Finite(0), || format!("{}: T² = {t2}", fixture.name))?;
        let ob = first_obstruction(&s).map_err(|e| format!("{}: {e}", fixture.name))?;
        ensure(ob.is_zero(), || format!("{}: non-zero obstruction", fixture.name))?;
        n += 1;
    }
    Ok(format!("{n} fixtures"))
}

pub fn ks_identity() -> Outcome {
    let mut n = 0;
    for fixture in all_fixtures() {
        let s = fixture.singularity();
        let v = miniversal(&s).map_err(|e| format!("{}: {e}", fixture.name))?;
        let ks = kodaira_spencer(&v.family).map_err(|e| e.to_string())?;
        ensure(ks.is_identity(), || format!("{}: KS =\n{ks}", fixture.name))?;
        n += 1;
    }
    Ok(format!("{n} fixtures"))
}

/// `0 → κ --λx--> κ[x]/(x²) → κ → 0`.
pub fn dual_numbers(ring: &Arc<Ring>, lambda: i64) -> Extension {
    let p = |s: &str| parse_poly(ring, s).unwrap();
    let k = PresentedModule::cyclic(ring, &[p("x")]);
    let e = PresentedModule::cyclic(ring, &[p("x^2")]);
    let iota = ModuleHom::new(&k, &e, vec![vec![p(&format!("{lambda}*x"))]]).unwrap();
    let kappa = ModuleHom::new(&e, &k, vec![vec![p("1")]]).unwrap();
    Extension::new(iota, kappa).unwrap()
}

/// `0 → κ → E → κ → 0` over `κ[x, y]` with `x e₂ = a e₁`, `y e₂ = b e₁`.
pub fn plane_extension(ring: &Arc<Ring>, a: i64, b: i64) -> Extension {
    let p = |s: &str| parse_poly(ring, s).unwrap();
    let k = PresentedModule::cyclic(ring, &[p("x"), p("y")]);
    let e = PresentedModule::new(
        ring,
        2,
        vec![
            vec![p("x"), p("0")],
            vec![p("y"), p("0")],
            vec![p(&format!("{}", -a)), p("x")],
            vec![p(&format!("{}", -b)), p("y")],
        ],
    );
    let iota = ModuleHom::new(&k, &e, vec![vec![p("1"), p("0")]]).unwrap();
    let kappa = ModuleHom::new(&e, &k, vec![vec![p("0")], vec![p("1")]]).unwrap();
    Extension::new(iota, kappa).unwrap()
}

pub fn extension_families() -> Vec<(&'static str, Vec<Extension>)> {
    let line = Ring::with_vars(&["x"], Field::Rational, MonomialOrder::Degrevlex);
    let plane = Ring::with_vars(&["x", "y"], Field::Rational, MonomialOrder::Degrevlex);
    vec![
        ("k[x]", [1, 2, -1, 3].iter().map(|&l| dual_numbers(&line, l)).collect()),
        (
            "k[x,y]",
            [(1, 0), (0, 1), (1, 1), (2, -1)]
                .iter()
                .map(|&(a, b)| plane_extension(&plane, a, b))
                .collect(),
        ),
    ]
}

fn iso(a: &Extension, b: &Extension) -> Result<bool, String> {
    extensions_isomorphic(a, b).map(|f| f.is_some()).map_err(|e| e.to_string())
}

fn sum(a: &Extension, b: &Extension) -> Result<Extension, String> {
    baer_sum(a, b).map_err(|e| e.to_string())
}

/// Checks the group laws on one family of extensions with common ends.
pub fn group_laws(name: &str, exts: &[Extension]) -> Result<usize, String> {
    let mut checks = 0;
    let sub = exts[0].sub().clone();
    let quot = exts[0].quotient().clone();
    let split = Extension::split(&quot, &sub);
    let field = sub.ring().field();
    let scalar_g = |c: i64| ModuleHom::identity(&sub).scale(&field.from_i64(c));
    let scalar_f = |c: i64| ModuleHom::identity(&quot).scale(&field.from_i64(c));
    for (i, e) in exts.iter().enumerate() {
        ensure(iso(&sum(e, &split)?, e)?, || format!("{name}: E{i} + 0 ≇ E{i}"))?;
        ensure(iso(&sum(&split, e)?, e)?, || format!("{name}: 0 + E{i} ≇ E{i}"))?;
        ensure(is_split(&sum(e, &opposite(e))?).is_some(), || format!("{name}: E{i} − E{i} does not split"))?;
        ensure(is_split(e).is_none(), || format!("{name}: E{i} splits"))?;
        let (g1, g2) = (scalar_g(2), scalar_g(-3));
        let lhs = pushforward(&g1.add(&g2), e).map_err(|e| e.to_string())?;
        let rhs = sum(
            &pushforward(&g1, e).map_err(|e| e.to_string())?,
            &pushforward(&g2, e).map_err(|e| e.to_string())?,
        )?;
        ensure(iso(&lhs, &rhs)?, || format!("{name}: (g+g')_* E{i}"))?;
        let (f1, f2) = (scalar_f(2), scalar_f(5));
        let lhs = pullback(&f1.add(&f2), e).map_err(|e| e.to_string())?;
        let rhs = sum(
            &pullback(&f1, e).map_err(|e| e.to_string())?,
            &pullback(&f2, e).map_err(|e| e.to_string())?,
        )?;
        ensure(iso(&lhs, &rhs)?, || format!("{name}: (f+f')^* E{i}"))?;
        checks += 6;
        for (j, e2) in exts.iter().enumerate().skip(i + 1) {
            ensure(iso(&sum(e, e2)?, &sum(e2, e)?)?, || format!("{name}: E{i} + E{j} ≇ E{j} + E{i}"))?;
            let g = scalar_g(3);
            let lhs = pushforward(&g, &sum(e, e2)?).map_err(|e| e.to_string())?;
            let rhs = sum(
                &pushforward(&g, e).map_err(|e| e.to_string())?,
                &pushforward(&g, e2).map_err(|e| e.to_string())?,
            )?;
            ensure(iso(&lhs, &rhs)?, || format!("{name}: g_*(E{i} + E{j})"))?;
            let f = scalar_f(-2);
            let lhs = pullback(&f, &sum(e, e2)?).map_err(|e| e.to_string())?;
            let rhs = sum(
                &pullback(&f, e).map_err(|e| e.to_string())?,
                &pullback(&f, e2).map_err(|e| e.to_string())?,
            )?;
            ensure(iso(&lhs, &rhs)?, || format!("{name}: f^*(E{i} + E{j})"))?;
            checks += 3;
            for (k, e3) in exts.iter().enumerate().skip(j + 1) {
                let left = sum(&sum(e, e2)?, e3)?;
                let right = sum(e, &sum(e2, e3)?)?;
                ensure(iso(&left, &right)?, || format!("{name}: associativity on {i}, {j}, {k}"))?;
                checks += 1;
            }
        }
    }
    Ok(checks)
}

pub fn extension_laws() -> Outcome {
    let start = Instant::now();
    let mut checks = 0;
    for (name, exts) in extension_families() {
        checks += group_laws(name, &exts)?;
    }
    let took = start.elapsed();
    ensure(took < Duration::from_secs(30), || format!("took {took:?}"))?;
    Ok(format!("{checks} identities in {took:.2?}"))
}

/// `(x, x)` in `κ[x, y]` lifted to `(x, x + t)` over `κ[t]/(t²)`.
pub fn non_regular_pair() -> (EmbeddedLifting, SmallExtensionStep) {
    let ring = Ring::with_vars(&["x", "y"], Field::Rational, MonomialOrder::Degrevlex);
    let s = Singularity::new(vec![parse_poly(&ring, "x").unwrap(), parse_poly(&ring, "x").unwrap()]).unwrap();
    let base = one_param(1);
    let fr = family_ring(&s, &["t"]);
    let eqs = vec![parse_poly(&fr, "x").unwrap(), parse_poly(&fr, "x + t").unwrap()];
    let l = EmbeddedLifting::new(&s, &base, eqs).unwrap();
    let step = SmallExtensionStep::new(&base, vec![base.var(0)]).unwrap();
    (l, step)
}

/// A second lifting with the same reduction as `l` across `step`: every
/// generator moves by a random element of `q ⊗ κ[x]`.
pub fn random_partner(rng: &mut rand_chacha::ChaCha8Rng, fixture: &Fixture, l: &EmbeddedLifting, step: &SmallExtensionStep) -> EmbeddedLifting {
    let fr = l.ring().clone();
    let eqs = l
        .equations()
        .iter()
        .map(|f| {
            let mut f = f.clone();
            for b in step.q_basis() {
                let g = parse_poly(&fr, &super::random_poly_text(rng, &fixture.vars, 3, 3)).unwrap();
                f = &f + &(&embed_t(&fr, l, b) * &g);
            }
            f
        })
        .collect();
    EmbeddedLifting::new(l.reference(), l.base(), eqs).unwrap()
}

fn embed_t(fr: &Arc<Ring>, l: &EmbeddedLifting, p: &Poly) -> Poly {
    let nx = l.reference().ring().nvars();
    let map: Vec<usize> = (0..p.ring().nvars()).map(|i| nx + i).collect();
    p.embed(fr, &map)
}

/// Re-lifts `l` without changing the ideal over `step.total()`, keeping the
/// reduction modulo q: `F'_j + q·Σ_k r_k F'_k`, or `(1 + t r) F'_j`
/// uniformly when `m·m ⊄ q`.
pub fn relift(
    rng: &mut rand_chacha::ChaCha8Rng,
    fixture: &Fixture,
    l: &EmbeddedLifting,
    step: &SmallExtensionStep,
    unit: &Poly,
) -> EmbeddedLifting {
    let fr = l.ring().clone();
    let eqs: Vec<Poly> = l.equations().to_vec();
    let mut out = Vec::with_capacity(eqs.len());
    for f in &eqs {
        let mut g = &f.clone() * unit;
        for b in step.q_basis() {
            for h in &eqs {
                let r = parse_poly(&fr, &super::random_poly_text(rng, &fixture.vars, 2, 2)).unwrap();
                g = &g + &(&(&embed_t(&fr, l, b) * &r) * h);
            }
        }
        out.push(g);
    }
    EmbeddedLifting::new(l.reference(), l.base(), out).unwrap()
}

pub fn flatness_soundness() -> Outcome {
    let mut rng = rng(6);
    // Koszul lifts
    let mut koszul = 0;
    for fixture in super::icis() {
        for order in 1..=2 {
            let base = one_param(order);
            let l = random_lifting(&mut rng, &fixture, &base);
            for step in base.filtration() {
                let cert = check_flatness(&l.restrict(step.total()).unwrap(), &step).map_err(|e| e.to_string())?;
                ensure(cert.flat && cert.source == SyzygySource::Koszul, || {
                    format!("{}: Koszul lift rejected", fixture.name)
                })?;
                koszul += 1;
            }
        }
    }
    // the non-regular pair
    let (l, step) = non_regular_pair();
    let cert = check_flatness(&l, &step).map_err(|e| e.to_string())?;
    let bad: Option<Vec<String>> = cert.failing_syzygy().map(|s| s.iter().map(|p| p.to_string()).collect());
    ensure(!cert.flat && bad == Some(vec!["1".into(), "-1".into()]), || {
        format!("(x, x+t): flat={} certificate={bad:?}", cert.flat)
    })?;
    let fixed = solve_corrections(&l, &step, &cert).map_err(|e| e.to_string())?;
    ensure(
        fixed.is_some_and(|c| check_flatness(&c.lifting, &step).is_ok_and(|c| c.flat)),
        || "(x, x+t): correction did not restore flatness".into(),
    )?;
    // ν under re-lifting
    let mut relifts = 0;
    for fixture in all_fixtures() {
        let base = one_param(2);
        let step = base.filtration().pop().unwrap();
        let l1 = random_lifting(&mut rng, &fixture, &base);
        let l2 = random_partner(&mut rng, &fixture, &l1, &step);
        let nu = nu_difference(&l1, &l2, &step).map_err(|e| e.to_string())?;
        let fr = l1.ring().clone();
        for _ in 0..100 {
            let c: i64 = rng.gen_range(-3..=3);
            let unit = parse_poly(&fr, &format!("1 + ({c})*t")).unwrap();
            let r1 = relift(&mut rng, &fixture, &l1, &step, &unit);
            let r2 = relift(&mut rng, &fixture, &l2, &step, &unit);
            let again = nu_difference(&r1, &r2, &step).map_err(|e| e.to_string())?;
            ensure(again == nu, || format!("{}: ν changed under re-lifting", fixture.name))?;
            relifts += 1;
        }
    }
    Ok(format!("{koszul} Koszul steps, (x, x+t) rejected with (1, -1), {relifts} re-lifts"))
}

fn trial_family(rng: &mut rand_chacha::ChaCha8Rng, fixture: &Fixture, order: u32) -> DeformationFamily {
    let base = one_param(order);
    DeformationFamily::from_lifting(&random_lifting(rng, fixture, &base))
}

pub fn versality(trials_per_order: usize) -> Outcome {
    let mut rng = rng(7);
    let mut n = 0;
    for (fixture, _) in ade() {
        let s = fixture.singularity();
        for order in 1..=2 {
            for _ in 0..trials_per_order {
                let trial = trial_family(&mut rng, &fixture, order);
                let cert = verify_versality_order(&s, order, &trial).map_err(|e| format!("{}: {e}", fixture.name))?;
                ensure(cert.verified, || format!("{}: transport failed at order {order}", fixture.name))?;
                let ks = kodaira_spencer(&trial).map_err(|e| e.to_string())?;
                ensure(cert.steps[0].coordinates[0] == ks.column(0), || {
                    format!("{}: first-order substitution differs from KS", fixture.name)
                })?;
                if order == 1 {
                    // φ(t_i) = KS_i · t exactly
                    let t = one_param(1).var(0);
                    for (phi, k) in cert.phi.iter().zip(ks.column(0)) {
                        ensure(*phi == t.scale(&k), || format!("{}: φ = {phi}", fixture.name))?;
                    }
                }
                n += 1;
            }
        }
    }
    Ok(format!("{n} trial families"))
}

pub fn gluing_round_trip(count: usize) -> Outcome {
    let mut rng = rng(8);
    let fixtures = all_fixtures();
    let ring = Ring::with_vars(&["t", "s"], Field::Rational, MonomialOrder::Degrevlex);
    for k in 0..count {
        let fixture = &fixtures[rng.gen_range(0..fixtures.len())];
        let a_deg = rng.gen_range(2..=3);
        let b_deg = rng.gen_range(2..=3);
        let p = |s: &str| parse_poly(&ring, s).unwrap();
        let a = ArtinianAlgebra::new(&ring, vec![p("t*s"), p(&format!("t^{a_deg}")), p(&format!("s^{b_deg}"))])
            .map_err(|e| e.to_string())?;
        let (i1, i2) = (vec![p("s")], vec![p("t")]);
        let a1 = a.quotient(&i1).unwrap();
        let a2 = a.quotient(&i2).unwrap();
        let m1 = random_lifting(&mut rng, fixture, &a1);
        let m2 = random_lifting(&mut rng, fixture, &a2);
        let g = glue_over_fiber_product(&m1, &m2, &a, &i1, &i2).map_err(|e| format!("{}: {e}", fixture.name))?;
        let back1 = g.restrict(&a1).map_err(|e| e.to_string())?;
        let back2 = g.restrict(&a2).map_err(|e| e.to_string())?;
        ensure(back1.equations() == m1.equations() && back2.equations() == m2.equations(), || {
            format!("fixture {k} ({}): restrictions differ", fixture.name)
        })?;
        ensure(is_flat(&g).map_err(|e| e.to_string())?, || format!("fixture {k}: glued family not flat"))?;
    }
    Ok(format!("{count} fixtures"))
}

/// Replaces the timings object with `{}`.
pub fn strip_timings(json: &str) -> String {
    versal_kit::cli::Report::from_json(json)
        .expect("valid report")
        .without_timings()
        .to_json()
}

pub fn cli_golden(binary: &Path, manifest_dir: &Path) -> Outcome {
    let fixture = manifest_dir.join("tests/fixtures/a2.txt");
    for command in ["invariants", "miniversal"] {
        let out_path = std::env::temp_dir().join(format!("versal-kit-golden-{command}-{}.json", std::process::id()));
        let status = Command::new(binary)
            .arg(command)
            .arg(&fixture)
            .arg("--json")
            .arg(&out_path)
            .output()
            .map_err(|e| e.to_string())?;
        ensure(status.status.success(), || format!("{command}: exit {:?}", status.status.code()))?;
        let produced = std::fs::read_to_string(&out_path).map_err(|e| e.to_string())?;
        let _ = std::fs::remove_file(&out_path);
        let golden = std::fs::read_to_string(manifest_dir.join(format!("tests/golden/a2_{command}.json")))
            .map_err(|e| e.to_string())?;
        ensure(strip_timings(&produced) == golden, || format!("{command}: output differs from golden file"))?;
    }
    Ok("invariants and miniversal match".into())
}
