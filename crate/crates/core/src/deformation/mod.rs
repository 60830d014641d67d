//! Embedded deformations of a singularity over Artinian bases: flatness
//! along small extensions, the normal-sheaf difference of two liftings and
//! gluing over fibre products.

mod artinian;

use std::collections::BTreeMap;
use std::sync::Arc;

pub use artinian::{ArtinianAlgebra, SmallExtensionStep};
pub(crate) use artinian::FamilyRing;

use crate::linalg::Matrix;
use crate::poly::{FieldElem, Monomial, Poly, Ring};
use crate::singularity::{koszul_relations, Singularity, SingularityError};
use crate::standard_basis::{module_syzygies, Ideal, Lifter};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DeformationError {
    #[error("not an artinian local algebra: {0}")]
    NotArtinian(String),
    #[error("not a small extension: {0}")]
    NotSmall(String),
    #[error("base variable '{0}' clashes with a space variable")]
    VariableClash(String),
    #[error("equations live in {got}, expected {expected}")]
    RingMismatch { expected: String, got: String },
    #[error("expected {expected} equations, got {got}")]
    CountMismatch { expected: usize, got: usize },
    #[error("equation {0} does not reduce to the reference equation")]
    NotALifting(usize),
    #[error("lifting is not over the expected base")]
    BaseMismatch,
    #[error("liftings differ modulo q in equation {0}")]
    ReductionMismatch(usize),
    #[error("the two ideals of the fibre product meet non-trivially")]
    IntersectionNotZero,
    #[error("liftings disagree over the common quotient in equation {0}")]
    Disagree(usize),
    #[error("t{0} must map into the maximal ideal")]
    NotLocal(usize),
    #[error("base change does not respect the relations")]
    NotAlgebraMap,
    #[error(transparent)]
    Singularity(#[from] SingularityError),
}

/// An ideal `I' = (F'_1, …, F'_c)` of `A[x]` reducing to the reference
/// ideal modulo the maximal ideal of `A`. Equations are stored in `κ[x, t]`
/// with every `x`-coefficient in normal form modulo the relations of `A`.
#[derive(Debug, Clone)]
pub struct EmbeddedLifting {
    reference: Singularity,
    base: ArtinianAlgebra,
    rings: FamilyRing,
    equations: Vec<Poly>,
}

impl EmbeddedLifting {
    pub fn new(reference: &Singularity, base: &ArtinianAlgebra, equations: Vec<Poly>) -> Result<Self, DeformationError> {
        let rings = FamilyRing::new(reference.ring(), base.ring())?;
        if equations.len() != reference.codimension() {
            return Err(DeformationError::CountMismatch {
                expected: reference.codimension(),
                got: equations.len(),
            });
        }
        let mut eqs = Vec::with_capacity(equations.len());
        for (j, f) in equations.iter().enumerate() {
            if f.ring().vars() != rings.ring.vars() || f.ring().field() != rings.ring.field() {
                return Err(DeformationError::RingMismatch {
                    expected: rings.ring.to_string(),
                    got: f.ring().to_string(),
                });
            }
            let f = rings.reduce(&f.to_ring(&rings.ring), base);
            if rings.at_origin(&f) != reference.equations()[j] {
                return Err(DeformationError::NotALifting(j));
            }
            eqs.push(f);
        }
        Ok(EmbeddedLifting {
            reference: reference.clone(),
            base: base.clone(),
            rings,
            equations: eqs,
        })
    }

    /// The product family `F × Spec A`.
    pub fn trivial(reference: &Singularity, base: &ArtinianAlgebra) -> Result<Self, DeformationError> {
        let rings = FamilyRing::new(reference.ring(), base.ring())?;
        let eqs = reference.equations().iter().map(|f| rings.from_x(f)).collect();
        EmbeddedLifting::new(reference, base, eqs)
    }

    pub fn reference(&self) -> &Singularity {
        &self.reference
    }

    pub fn base(&self) -> &ArtinianAlgebra {
        &self.base
    }

    /// `κ[x, t]`.
    pub fn ring(&self) -> &Arc<Ring> {
        &self.rings.ring
    }

    pub fn equations(&self) -> &[Poly] {
        &self.equations
    }

    pub(crate) fn rings(&self) -> &FamilyRing {
        &self.rings
    }

    /// The reduction to a quotient `A → B` of the base in the same variables.
    pub fn restrict(&self, quotient: &ArtinianAlgebra) -> Result<EmbeddedLifting, DeformationError> {
        if !crate::poly::same_ring(quotient.ring(), self.base.ring())
            || !self.base.relations().standard_basis().elements().iter().all(|r| quotient.is_zero(r))
        {
            return Err(DeformationError::BaseMismatch);
        }
        EmbeddedLifting::new(&self.reference, quotient, self.equations.clone())
    }

    /// Pushes the lifting forward along the local homomorphism
    /// `t_i ↦ images[i]` into `target`.
    pub fn base_change(&self, target: &ArtinianAlgebra, images: &[Poly]) -> Result<EmbeddedLifting, DeformationError> {
        if images.len() != self.base.ring().nvars() {
            return Err(DeformationError::CountMismatch {
                expected: self.base.ring().nvars(),
                got: images.len(),
            });
        }
        let images: Vec<Poly> = images.iter().map(|p| target.normal_form(p)).collect();
        for (i, p) in images.iter().enumerate() {
            if !p.constant_term().is_zero() {
                return Err(DeformationError::NotLocal(i));
            }
        }
        if !images.is_empty() {
            for r in self.base.relations().generators() {
                if !target.is_zero(&r.substitute(&images)) {
                    return Err(DeformationError::NotAlgebraMap);
                }
            }
        }
        let out = FamilyRing::new(self.reference.ring(), target.ring())?;
        let mut subst: Vec<Poly> = (0..out.nx()).map(|i| Poly::var(&out.ring, i)).collect();
        subst.extend(images.iter().map(|p| out.from_t(p)));
        let eqs = self.equations.iter().map(|f| f.substitute(&subst)).collect();
        EmbeddedLifting::new(&self.reference, target, eqs)
    }
}

/// Where the relations checked by [`check_flatness`] came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SyzygySource {
    /// One equation: no relations to check.
    Principal,
    /// The reference is a regular sequence, so the Koszul relations of the
    /// reduced equations generate.
    Koszul,
    /// Generators of the relation module of the reduced equations over `A[x]`.
    Computed,
}

/// Outcome of the flatness test across one small extension.
#[derive(Debug, Clone)]
pub struct FlatnessCertificate {
    pub flat: bool,
    pub source: SyzygySource,
    /// Generating relations `a` of the reduced equations, used as their own
    /// lifts `a'`.
    pub syzygies: Vec<Vec<Poly>>,
    /// `residues[k][b]`: the coefficient in `κ[x]` of the `b`-th element of
    /// the q-basis in `Σ_j a'_j F'_j` for the `k`-th relation.
    pub residues: Vec<Vec<Poly>>,
    /// First relation whose residue is not in the reference ideal.
    pub failing: Option<usize>,
}

impl FlatnessCertificate {
    pub fn failing_syzygy(&self) -> Option<&[Poly]> {
        self.failing.map(|k| self.syzygies[k].as_slice())
    }
}

/// Decides whether `A'[x]/I'` is flat over `A'` given that its reduction to
/// `A = A'/q` is: every relation among the reduced equations has a lift
/// `a'` with `Σ a'_j F'_j ∈ q·I'`. The answer does not depend on the lift.
pub fn check_flatness(
    lifting: &EmbeddedLifting,
    step: &SmallExtensionStep,
) -> Result<FlatnessCertificate, DeformationError> {
    if lifting.base() != step.total() {
        return Err(DeformationError::BaseMismatch);
    }
    let rings = lifting.rings();
    let reduced: Vec<Poly> = lifting.equations.iter().map(|f| rings.reduce(f, step.quotient())).collect();
    let c = reduced.len();
    let (source, syzygies) = if c == 1 {
        (SyzygySource::Principal, Vec::new())
    } else if lifting.reference.certify_regular() {
        (SyzygySource::Koszul, koszul_relations(&reduced))
    } else {
        let mut vectors: Vec<Vec<Poly>> = reduced.iter().map(|f| vec![f.clone()]).collect();
        for r in step.quotient().relations().standard_basis().elements() {
            vectors.push(vec![rings.from_t(r)]);
        }
        let syz = module_syzygies(&rings.ring, 1, &vectors)
            .into_iter()
            .map(|mut s| {
                s.truncate(c);
                s
            })
            .filter(|s| s.iter().any(|p| !p.is_zero()))
            .collect();
        (SyzygySource::Computed, syz)
    };
    let ideal0 = Ideal::new(lifting.reference.ring(), lifting.reference.equations().to_vec());
    let mut residues = Vec::with_capacity(syzygies.len());
    let mut failing = None;
    for (k, a) in syzygies.iter().enumerate() {
        let mut s = Poly::zero(&rings.ring);
        for (aj, fj) in a.iter().zip(&lifting.equations) {
            s = &s + &(aj * fj);
        }
        let h = split_over_q(rings, step, &s);
        if failing.is_none() && !h.iter().all(|p| ideal0.contains(p)) {
            failing = Some(k);
        }
        residues.push(h);
    }
    Ok(FlatnessCertificate {
        flat: failing.is_none(),
        source,
        syzygies,
        residues,
        failing,
    })
}

/// Writes an element of `q ⊗ κ[x]` as `Σ_b b·h_b`.
pub(crate) fn split_over_q(rings: &FamilyRing, step: &SmallExtensionStep, p: &Poly) -> Vec<Poly> {
    let nb = step.q_basis().len();
    let mut terms: Vec<Vec<(Monomial, FieldElem)>> = vec![Vec::new(); nb];
    for (x, coeff) in rings.split(&rings.reduce(p, step.total())) {
        let coords = step
            .q_coordinates(&coeff)
            .expect("difference of liftings with equal reductions lies in q");
        for (b, c) in coords.into_iter().enumerate() {
            if !c.is_zero() {
                terms[b].push((x.clone(), c));
            }
        }
    }
    terms.into_iter().map(|t| Poly::from_terms(&rings.x_ring, t)).collect()
}

/// Whether the lifting is flat over its whole base, tested along the
/// filtration by powers of the maximal ideal.
pub fn is_flat(lifting: &EmbeddedLifting) -> Result<bool, DeformationError> {
    for step in lifting.base().filtration() {
        let l = lifting.restrict(step.total())?;
        if !check_flatness(&l, &step)?.flat {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Corrections `δ_b ∈ κ[x]^c` making `F' + Σ_b b·δ_b` flat, when a
/// [`check_flatness`] test failed.
#[derive(Debug, Clone)]
pub struct Correction {
    /// `deltas[b][j]`.
    pub deltas: Vec<Vec<Poly>>,
    pub lifting: EmbeddedLifting,
}

impl Correction {
    pub fn is_zero(&self) -> bool {
        self.deltas.iter().flatten().all(|p| p.is_zero())
    }
}

/// Solves `a⁽ᵏ⁾(0)·δ_b ≡ −h⁽ᵏ⁾_b` modulo the reference ideal for all
/// relations `k` simultaneously. `None` when no correction exists, which is
/// an obstruction to lifting the reduction.
pub fn solve_corrections(
    lifting: &EmbeddedLifting,
    step: &SmallExtensionStep,
    certificate: &FlatnessCertificate,
) -> Result<Option<Correction>, DeformationError> {
    let rings = lifting.rings();
    let c = lifting.equations.len();
    let nb = step.q_basis().len();
    let x_ring = &rings.x_ring;
    let zero = Poly::zero(x_ring);
    let nk = certificate.syzygies.len();
    if certificate.flat || nk == 0 {
        return Ok(Some(Correction {
            deltas: vec![vec![zero; c]; nb],
            lifting: lifting.clone(),
        }));
    }
    let mut gens: Vec<Vec<Poly>> = (0..c)
        .map(|j| certificate.syzygies.iter().map(|a| rings.at_origin(&a[j])).collect())
        .collect();
    for k in 0..nk {
        for f in lifting.reference.equations() {
            let mut v = vec![zero.clone(); nk];
            v[k] = f.clone();
            gens.push(v);
        }
    }
    let lifter = Lifter::new(x_ring, nk, &gens);
    let mut deltas = Vec::with_capacity(nb);
    for b in 0..nb {
        let target: Vec<Poly> = certificate.residues.iter().map(|h| -h[b].clone()).collect();
        let Some(cof) = lifter.lift(&target) else {
            return Ok(None);
        };
        deltas.push(cof[..c].iter().map(|p| p.to_ring(x_ring)).collect::<Vec<_>>());
    }
    let mut eqs = lifting.equations.clone();
    for (b, delta) in deltas.iter().enumerate() {
        let bt = rings.from_t(&step.q_basis()[b]);
        for (f, d) in eqs.iter_mut().zip(delta) {
            *f = &*f + &(&bt * &rings.from_x(d));
        }
    }
    let lifting = EmbeddedLifting::new(&lifting.reference, &lifting.base, eqs)?;
    Ok(Some(Correction { deltas, lifting }))
}

/// `ν(X'_1, X'_2)`: the map `I/I² → q ⊗ O` sending each reduced equation
/// `F_j` to `F'_{1,j} − F'_{2,j}`. `components[b][j]` is the coefficient of
/// the `b`-th q-basis element, reduced modulo the reference ideal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NormalSection {
    pub q_basis: Vec<Poly>,
    pub components: Vec<Vec<Poly>>,
}

impl NormalSection {
    pub fn is_zero(&self) -> bool {
        self.components.iter().flatten().all(|p| p.is_zero())
    }
}

fn check_pair(l1: &EmbeddedLifting, l2: &EmbeddedLifting, step: &SmallExtensionStep) -> Result<(), DeformationError> {
    if l1.base() != step.total() || l2.base() != step.total() {
        return Err(DeformationError::BaseMismatch);
    }
    if l1.reference.equations() != l2.reference.equations() {
        return Err(DeformationError::BaseMismatch);
    }
    let rings = l1.rings();
    for (j, (f1, f2)) in l1.equations.iter().zip(&l2.equations).enumerate() {
        if rings.reduce(f1, step.quotient()) != rings.reduce(f2, step.quotient()) {
            return Err(DeformationError::ReductionMismatch(j));
        }
    }
    Ok(())
}

/// The difference of two liftings across `step` with identical equations
/// modulo `q`.
pub fn nu_difference(
    l1: &EmbeddedLifting,
    l2: &EmbeddedLifting,
    step: &SmallExtensionStep,
) -> Result<NormalSection, DeformationError> {
    check_pair(l1, l2, step)?;
    let rings = l1.rings();
    let ideal0 = Ideal::new(l1.reference.ring(), l1.reference.equations().to_vec());
    let nb = step.q_basis().len();
    let mut components = vec![Vec::with_capacity(l1.equations.len()); nb];
    for (f1, f2) in l1.equations.iter().zip(&l2.equations) {
        let h = split_over_q(rings, step, &(f1 - f2));
        for (b, hb) in h.into_iter().enumerate() {
            components[b].push(ideal0.standard_basis().normal_form(&hb));
        }
    }
    Ok(NormalSection {
        q_basis: step.q_basis().to_vec(),
        components,
    })
}

/// The class of `ν` in `q ⊗ T¹`: `coordinates[b]` are the coordinates of the
/// `b`-th component in the `T¹` basis of the reference.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EClass {
    pub q_basis: Vec<Poly>,
    pub coordinates: Vec<Vec<FieldElem>>,
}

impl EClass {
    pub fn is_zero(&self) -> bool {
        self.coordinates.iter().flatten().all(|c| c.is_zero())
    }
}

pub fn e_class(l1: &EmbeddedLifting, l2: &EmbeddedLifting, step: &SmallExtensionStep) -> Result<EClass, DeformationError> {
    let nu = nu_difference(l1, l2, step)?;
    let t1 = l1.reference.t1()?;
    let coordinates = nu
        .components
        .iter()
        .map(|v| t1.coordinates(v).expect("T¹ carries local coordinates"))
        .collect();
    Ok(EClass {
        q_basis: nu.q_basis,
        coordinates,
    })
}

/// Two liftings with the same reduction are isomorphic (by an isomorphism
/// inducing the identity on the reduction) exactly when their e-class
/// vanishes.
pub fn liftings_isomorphic(
    l1: &EmbeddedLifting,
    l2: &EmbeddedLifting,
    step: &SmallExtensionStep,
) -> Result<bool, DeformationError> {
    Ok(e_class(l1, l2, step)?.is_zero())
}

/// κ-spanning set of the ideal generated by `gens` in `a`.
fn ideal_span(a: &ArtinianAlgebra, gens: &[Poly]) -> Vec<Vec<FieldElem>> {
    let ring = a.ring();
    let mut out = Vec::new();
    for g in gens {
        for m in a.basis() {
            let p = &g.to_ring(ring) * &Poly::monomial(ring, m.clone(), a.field().one());
            out.push(a.coordinates(&p));
        }
    }
    out
}

/// Glues `m1` over `A/I1` and `m2` over `A/I2` to a lifting over `A`, where
/// `I1 ∩ I2 = 0` so that `A = A/I1 ×_{A/(I1+I2)} A/I2`. The two liftings
/// must have identical equations over `A/(I1+I2)`.
pub fn glue_over_fiber_product(
    m1: &EmbeddedLifting,
    m2: &EmbeddedLifting,
    a: &ArtinianAlgebra,
    i1: &[Poly],
    i2: &[Poly],
) -> Result<EmbeddedLifting, DeformationError> {
    let a1 = a.quotient(i1)?;
    let a2 = a.quotient(i2)?;
    if m1.base() != &a1 || m2.base() != &a2 {
        return Err(DeformationError::BaseMismatch);
    }
    let mut both = i1.to_vec();
    both.extend_from_slice(i2);
    let a0 = a.quotient(&both)?;
    let dim = a.dimension();
    if (dim - a1.dimension()) + (dim - a2.dimension()) != dim - a0.dimension() {
        return Err(DeformationError::IntersectionNotZero);
    }
    let r1 = m1.restrict(&a0)?;
    let r2 = m2.restrict(&a0)?;
    for (j, (f1, f2)) in r1.equations.iter().zip(&r2.equations).enumerate() {
        if f1 != f2 {
            return Err(DeformationError::Disagree(j));
        }
    }
    let span1 = ideal_span(a, i1);
    let span2 = ideal_span(a, i2);
    let n1 = span1.len();
    let mut cols = span1.clone();
    cols.extend(span2);
    let matrix = Matrix::from_columns(a.field(), &cols, dim);
    let rings = FamilyRing::new(m1.reference.ring(), a.ring())?;
    let mut eqs = Vec::with_capacity(m1.equations.len());
    for (f1, f2) in m1.equations.iter().zip(&m2.equations) {
        let diff = rings.reduce(&(f2 - f1), a);
        let mut correction: BTreeMap<Monomial, Poly> = BTreeMap::new();
        for (x, d) in rings.split(&diff) {
            let lambda = matrix
                .solve(&a.coordinates(&d))
                .expect("agreement over the common quotient");
            let mut part = Poly::zero(a.ring());
            for (k, l) in lambda[..n1].iter().enumerate() {
                if l.is_zero() {
                    continue;
                }
                let elem = Poly::from_terms(a.ring(), a.basis().iter().cloned().zip(span1[k].iter().cloned()));
                part = &part + &elem.scale(l);
            }
            correction.insert(x, part.to_ring(&rings.t_ring));
        }
        eqs.push(f1 + &rings.join(&correction));
    }
    EmbeddedLifting::new(&m1.reference, a, eqs)
}
