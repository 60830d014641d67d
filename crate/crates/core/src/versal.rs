//! The miniversal deformation of an isolated complete intersection, its
//! Kodaira–Spencer map and order-by-order versality checks.

use std::fmt;
use std::sync::Arc;

use crate::deformation::{
    check_flatness, e_class, is_flat, solve_corrections, split_over_q, ArtinianAlgebra, DeformationError,
    EmbeddedLifting, FamilyRing, FlatnessCertificate,
};
use crate::module_ext::Dim;
use crate::poly::{FieldElem, MonomialOrder, Poly, Ring};
use crate::singularity::{Singularity, SingularityError};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum VersalError {
    #[error(transparent)]
    Singularity(#[from] SingularityError),
    #[error(transparent)]
    Deformation(#[from] DeformationError),
    #[error("T¹ is infinite dimensional")]
    InfiniteTangent,
    #[error("the global T¹ differs from the local one; the singular locus of the equations is not concentrated at the origin")]
    NotConcentrated,
    #[error("no flat lifting to order {0}")]
    Obstructed(u32),
    #[error("family is not flat over its base")]
    NotFlat,
    #[error("target order must be at least 1")]
    BadOrder,
}

/// The base of a family: formal power series in the parameters (used only
/// through its truncations) or an Artinian algebra.
#[derive(Debug, Clone)]
pub enum FamilyBase {
    Formal(Arc<Ring>),
    Artinian(ArtinianAlgebra),
}

/// Equations `F_j(x, t)` over a base in the parameters `t`.
#[derive(Debug, Clone)]
pub struct DeformationFamily {
    reference: Singularity,
    base: FamilyBase,
    rings: FamilyRing,
    members: Vec<Poly>,
}

impl DeformationFamily {
    /// A family over formal power series in the variables of `t_ring`.
    pub fn formal(reference: &Singularity, t_ring: &Arc<Ring>, members: Vec<Poly>) -> Result<Self, VersalError> {
        let rings = FamilyRing::new(reference.ring(), t_ring)?;
        let base = ArtinianAlgebra::truncation_in(&rings.t_ring, 0);
        // checks the count, the ring and the reduction
        EmbeddedLifting::new(reference, &base, members.clone())?;
        let members = members.iter().map(|p| p.to_ring(&rings.ring)).collect();
        Ok(DeformationFamily {
            reference: reference.clone(),
            base: FamilyBase::Formal(rings.t_ring.clone()),
            rings,
            members,
        })
    }

    pub fn from_lifting(lifting: &EmbeddedLifting) -> Self {
        DeformationFamily {
            reference: lifting.reference().clone(),
            base: FamilyBase::Artinian(lifting.base().clone()),
            rings: lifting.rings().clone(),
            members: lifting.equations().to_vec(),
        }
    }

    pub fn reference(&self) -> &Singularity {
        &self.reference
    }

    pub fn base(&self) -> &FamilyBase {
        &self.base
    }

    pub fn members(&self) -> &[Poly] {
        &self.members
    }

    /// `κ[x, t]`.
    pub fn ring(&self) -> &Arc<Ring> {
        &self.rings.ring
    }

    pub fn t_ring(&self) -> &Arc<Ring> {
        &self.rings.t_ring
    }

    pub fn parameters(&self) -> &[String] {
        self.rings.t_ring.vars()
    }

    /// The base modulo `m^{order+1}`.
    pub fn base_truncation(&self, order: u32) -> ArtinianAlgebra {
        match &self.base {
            FamilyBase::Formal(r) => ArtinianAlgebra::truncation_in(r, order),
            FamilyBase::Artinian(a) => a.truncate(order),
        }
    }

    /// The family over the base modulo `m^{order+1}`.
    pub fn truncation(&self, order: u32) -> Result<EmbeddedLifting, VersalError> {
        Ok(EmbeddedLifting::new(&self.reference, &self.base_truncation(order), self.members.clone())?)
    }

    /// Order of the Artinian base; `None` for formal bases.
    pub fn order(&self) -> Option<u32> {
        match &self.base {
            FamilyBase::Formal(_) => None,
            FamilyBase::Artinian(a) => Some(a.order()),
        }
    }
}

/// `KS: T_{base} → T¹`, a `τ × r` matrix whose column `j` holds the
/// coordinates of `∂/∂t_j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KodairaSpencerMatrix {
    pub rows: usize,
    pub cols: usize,
    /// Row-major.
    pub entries: Vec<Vec<FieldElem>>,
}

impl KodairaSpencerMatrix {
    pub fn is_identity(&self) -> bool {
        self.rows == self.cols
            && self.entries.iter().enumerate().all(|(i, row)| {
                row.iter()
                    .enumerate()
                    .all(|(j, e)| if i == j { e.is_one() } else { e.is_zero() })
            })
    }

    pub fn column(&self, j: usize) -> Vec<FieldElem> {
        self.entries.iter().map(|r| r[j].clone()).collect()
    }
}

impl fmt::Display for KodairaSpencerMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in &self.entries {
            let cells: Vec<String> = row.iter().map(|e| e.to_string()).collect();
            writeln!(f, "[{}]", cells.join(", "))?;
        }
        Ok(())
    }
}

/// `F_j + Σ_i t_i G_{i,j}` over `κ[[t_1..t_τ]]`.
#[derive(Debug, Clone)]
pub struct VersalResult {
    pub tau: usize,
    /// The `T¹` representatives `G_i`.
    pub basis: Vec<Vec<Poly>>,
    pub family: DeformationFamily,
    /// Always empty: the base of an ICIS miniversal family is smooth.
    pub base_relations: Vec<Poly>,
    pub ks: KodairaSpencerMatrix,
}

impl VersalResult {
    /// One string per equation, `F + t1*G1 + …`, with the parameters
    /// written in front of their monomials.
    pub fn family_strings(&self) -> Vec<String> {
        let names = self.family.parameters();
        (0..self.family.reference.codimension())
            .map(|j| {
                let mut s = self.family.reference.equations()[j].to_string();
                for (i, g) in self.basis.iter().enumerate() {
                    let g = &g[j];
                    if g.is_zero() {
                        continue;
                    }
                    let t = &names[i];
                    if g.is_constant() {
                        let c = g.constant_term();
                        if c.is_one() {
                            s.push_str(&format!(" + {t}"));
                        } else {
                            s.push_str(&format!(" + {c}*{t}"));
                        }
                    } else if g.terms().len() == 1 && g.terms()[0].1.is_one() {
                        s.push_str(&format!(" + {t}*{g}"));
                    } else {
                        s.push_str(&format!(" + {t}*({g})"));
                    }
                }
                s
            })
            .collect()
    }
}

fn parameter_names(reference: &Singularity, count: usize) -> Vec<String> {
    let taken = reference.ring().vars();
    let prefix = ["t", "u", "s", "w", "p"]
        .into_iter()
        .find(|p| (1..=count).all(|i| !taken.contains(&format!("{p}{i}"))))
        .unwrap_or("param_");
    (1..=count).map(|i| format!("{prefix}{i}")).collect()
}

pub fn miniversal(s: &Singularity) -> Result<VersalResult, VersalError> {
    let t1 = s.t1()?;
    let Dim::Finite(tau) = t1.dimension else {
        return Err(VersalError::InfiniteTangent);
    };
    let basis = t1.basis.clone().unwrap_or_default();
    let t_ring = Ring::new(parameter_names(s, tau), s.ring().field(), MonomialOrder::Degrevlex)
        .expect("generated names are valid");
    let rings = FamilyRing::new(s.ring(), &t_ring)?;
    let members = (0..s.codimension())
        .map(|j| {
            let mut f = rings.from_x(&s.equations()[j]);
            for (i, g) in basis.iter().enumerate() {
                let ti = Poly::var(&rings.ring, rings.nx() + i);
                f = &f + &(&ti * &rings.from_x(&g[j]));
            }
            f
        })
        .collect();
    let family = DeformationFamily::formal(s, &t_ring, members)?;
    let ks = kodaira_spencer(&family)?;
    Ok(VersalResult {
        tau,
        basis,
        family,
        base_relations: Vec::new(),
        ks,
    })
}

/// The e-class of the first-order truncation against the trivial family.
pub fn kodaira_spencer(family: &DeformationFamily) -> Result<KodairaSpencerMatrix, VersalError> {
    let s = family.reference();
    let tau = s.t1()?.dimension.finite().ok_or(VersalError::InfiniteTangent)?;
    let base = family.base_truncation(1);
    let r = base.ring().nvars();
    let gens: Vec<Poly> = (0..r).map(|i| base.var(i)).collect();
    let step = crate::deformation::SmallExtensionStep::new(&base, gens.clone())?;
    let lifting = family.truncation(1)?;
    let trivial = EmbeddedLifting::trivial(s, &base)?;
    let e = e_class(&lifting, &trivial, &step)?;
    let field = s.ring().field();
    let mut entries = vec![vec![field.zero(); r]; tau];
    for (j, t) in gens.iter().enumerate() {
        let Some(coords) = step.q_coordinates(t) else { continue };
        for (b, cb) in coords.iter().enumerate() {
            for (i, row) in entries.iter_mut().enumerate() {
                row[j] = &row[j] + &(cb * &e.coordinates[b][i]);
            }
        }
    }
    Ok(KodairaSpencerMatrix { rows: tau, cols: r, entries })
}

/// A flat lifting to `κ[t]/m^{order+1}` together with the corrections that
/// were added to the naive truncation (zero when it was already flat).
#[derive(Debug, Clone)]
pub struct LiftResult {
    pub order: u32,
    pub lifting: EmbeddedLifting,
    /// `corrections[b][j]` for the `b`-th monomial of degree `order`.
    pub corrections: Vec<Vec<Poly>>,
    pub certificate: FlatnessCertificate,
}

/// Lifts a family over a formal base, flat modulo `m^{order}`, to a flat
/// family modulo `m^{order+1}`.
pub fn lift_to_next_order(family: &DeformationFamily, order: u32) -> Result<LiftResult, VersalError> {
    if order == 0 {
        return Err(VersalError::BadOrder);
    }
    if !is_flat(&family.truncation(order - 1)?)? {
        return Err(VersalError::NotFlat);
    }
    let candidate = family.truncation(order)?;
    let step = candidate
        .base()
        .filtration()
        .pop()
        .expect("a base of positive order has a last step");
    let certificate = check_flatness(&candidate, &step)?;
    let fix = solve_corrections(&candidate, &step, &certificate)?.ok_or(VersalError::Obstructed(order))?;
    Ok(LiftResult {
        order,
        lifting: fix.lifting,
        corrections: fix.deltas,
        certificate,
    })
}

/// The obstruction to lifting the first-order miniversal family: a
/// symmetric bilinear map on `T¹` with values in `T²`.
#[derive(Debug, Clone)]
pub struct ObstructionMap {
    pub t2_dimension: usize,
    /// `(i, j, value)` for `i ≤ j`; values have length `t2_dimension`.
    pub values: Vec<(usize, usize, Vec<FieldElem>)>,
    /// The second-order lift witnessing that the map vanishes.
    pub lift: LiftResult,
}

impl ObstructionMap {
    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|(_, _, v)| v.iter().all(|c| c.is_zero()))
    }
}

pub fn first_obstruction(s: &Singularity) -> Result<ObstructionMap, VersalError> {
    let v = miniversal(s)?;
    let t2 = s.tangent_module(2)?.dimension.finite().unwrap_or(0);
    let lift = lift_to_next_order(&v.family, 2)?;
    let field = s.ring().field();
    let mut values = Vec::new();
    for i in 0..v.tau {
        for j in i..v.tau {
            values.push((i, j, vec![field.zero(); t2]));
        }
    }
    Ok(ObstructionMap {
        t2_dimension: t2,
        values,
        lift,
    })
}

/// What happened at one small extension `B/m^{k+1} → B/m^k` of a versality
/// check.
#[derive(Debug, Clone)]
pub struct TransportStep {
    pub order: u32,
    /// `T¹` coordinates of the discrepancy, one row per monomial of degree
    /// `order`.
    pub coordinates: Vec<Vec<FieldElem>>,
    /// Coordinate changes `x ↦ x − Σ b ξ_b`, one `ξ_b` per monomial.
    pub xi: Vec<Vec<Poly>>,
    /// Unit matrices `1 − Σ b U_b`, one `c × c` matrix per monomial.
    pub units: Vec<Vec<Vec<Poly>>>,
    /// The e-class of the updated pull-back against the transported trial
    /// family vanished.
    pub e_class_vanishes: bool,
}

/// A map `φ: κ[[t]] → B` with `φ*V ≅ trial`, and the transport that proves it.
#[derive(Debug, Clone)]
pub struct VersalityCertificate {
    /// `φ(t_i)`, in the parameter ring of the trial family.
    pub phi: Vec<Poly>,
    pub steps: Vec<TransportStep>,
    /// The transported trial equations equal `φ*V` exactly.
    pub verified: bool,
}

/// Finds `φ` with `φ*V ≅ trial` over the base of `trial` truncated at
/// `order`, constructing the isomorphism order by order.
pub fn verify_versality_order(
    s: &Singularity,
    order: u32,
    trial: &DeformationFamily,
) -> Result<VersalityCertificate, VersalError> {
    let t1 = s.t1()?;
    let basis = t1.basis.clone().unwrap_or_default();
    let lifter = s.t1_lifter();
    let c = s.codimension();
    let n = s.ring().nvars();
    let base = trial.base_truncation(order);
    let trial = trial.truncation(base.order())?;
    if !is_flat(&trial)? {
        return Err(VersalError::NotFlat);
    }
    let rings = trial.rings().clone();
    let t_ring = rings.t_ring.clone();
    let pull_back = |phi: &[Poly]| -> Vec<Poly> {
        (0..c)
            .map(|j| {
                let mut f = rings.from_x(&s.equations()[j]);
                for (i, g) in basis.iter().enumerate() {
                    f = &f + &(&rings.from_t(&phi[i]) * &rings.from_x(&g[j]));
                }
                rings.reduce(&f, &base)
            })
            .collect()
    };
    let mut phi = vec![Poly::zero(&t_ring); basis.len()];
    let mut current: Vec<Poly> = trial.equations().to_vec();
    let mut steps = Vec::new();
    for step in base.filtration() {
        let k = step.total().order();
        let target = pull_back(&phi);
        let nb = step.q_basis().len();
        // h[b][j]
        let mut h = vec![Vec::with_capacity(c); nb];
        for (cur, tgt) in current.iter().zip(&target) {
            for (b, hb) in split_over_q(&rings, &step, &(cur - tgt)).into_iter().enumerate() {
                h[b].push(hb);
            }
        }
        let mut coordinates = Vec::with_capacity(nb);
        let mut xis = Vec::with_capacity(nb);
        let mut units = Vec::with_capacity(nb);
        for (b, hb) in h.iter().enumerate() {
            let coords = t1.coordinates(hb).expect("T¹ carries local coordinates");
            let mut rest = hb.clone();
            for (ci, g) in coords.iter().zip(&basis) {
                for (r, gj) in rest.iter_mut().zip(g) {
                    *r = &*r - &gj.scale(ci);
                }
            }
            let cof = lifter.lift(&rest).ok_or(VersalError::NotConcentrated)?;
            let u: Vec<Vec<Poly>> = (0..c).map(|j| cof[j * c..(j + 1) * c].to_vec()).collect();
            let xi: Vec<Poly> = cof[c * c..c * c + n].to_vec();
            let bq = step.q_basis()[b].to_ring(&t_ring);
            for (p, ci) in phi.iter_mut().zip(&coords) {
                *p = &*p + &bq.scale(ci);
            }
            coordinates.push(coords);
            xis.push(xi);
            units.push(u);
        }
        let updated = pull_back(&phi);
        let e_class_vanishes = {
            let a = EmbeddedLifting::new(s, step.total(), updated)?;
            let b = EmbeddedLifting::new(s, step.total(), current.clone())?;
            e_class(&a, &b, &step)?.is_zero()
        };
        // x ↦ x − Σ_b b ξ_b, then multiply by 1 − Σ_b b U_b
        let mut subst: Vec<Poly> = (0..rings.ring.nvars()).map(|i| Poly::var(&rings.ring, i)).collect();
        for (b, xi) in xis.iter().enumerate() {
            let bq = rings.from_t(&step.q_basis()[b]);
            for (i, x) in xi.iter().enumerate() {
                subst[i] = &subst[i] - &(&bq * &rings.from_x(x));
            }
        }
        let moved: Vec<Poly> = current
            .iter()
            .map(|f| rings.reduce(&f.substitute(&subst), &base))
            .collect();
        current = (0..c)
            .map(|j| {
                let mut f = moved[j].clone();
                for (b, u) in units.iter().enumerate() {
                    let bq = rings.from_t(&step.q_basis()[b]);
                    for (l, ul) in u[j].iter().enumerate() {
                        f = &f - &(&(&bq * &rings.from_x(ul)) * &moved[l]);
                    }
                }
                rings.reduce(&f, &base)
            })
            .collect();
        steps.push(TransportStep {
            order: k,
            coordinates,
            xi: xis,
            units,
            e_class_vanishes,
        });
    }
    let verified = current == pull_back(&phi) && steps.iter().all(|s| s.e_class_vanishes);
    Ok(VersalityCertificate { phi, steps, verified })
}
