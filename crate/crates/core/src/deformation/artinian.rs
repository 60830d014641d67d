use std::collections::BTreeMap;
use std::sync::Arc;

use super::DeformationError;
use crate::linalg::Matrix;
use crate::poly::{monomials_of_degree, Field, FieldElem, Monomial, MonomialOrder, Poly, Ring};
use crate::standard_basis::Ideal;

/// `κ[t_1, …, t_r] / I` with `I` primary to the maximal ideal. Arithmetic is
/// normal-form arithmetic against the reduced Gröbner basis of `I`.
#[derive(Debug, Clone)]
pub struct ArtinianAlgebra {
    relations: Ideal,
    order: u32,
    basis: Vec<Monomial>,
}

impl PartialEq for ArtinianAlgebra {
    fn eq(&self, other: &Self) -> bool {
        crate::poly::same_ring(self.ring(), other.ring())
            && self.relations.standard_basis().elements() == other.relations.standard_basis().elements()
    }
}

impl Eq for ArtinianAlgebra {}

impl ArtinianAlgebra {
    pub fn new(ring: &Arc<Ring>, relations: Vec<Poly>) -> Result<Self, DeformationError> {
        let ring = if ring.order() == MonomialOrder::Degrevlex {
            ring.clone()
        } else {
            ring.with_order(MonomialOrder::Degrevlex)
        };
        let rels: Vec<Poly> = relations.iter().map(|p| p.to_ring(&ring)).collect();
        let relations = Ideal::new(&ring, rels);
        let st = relations.staircase();
        if !st.finite {
            return Err(DeformationError::NotArtinian("the quotient is infinite dimensional".into()));
        }
        if st.standard_monomials.is_empty() {
            return Err(DeformationError::NotArtinian("the quotient is the zero ring".into()));
        }
        let top = st.standard_monomials.iter().map(|m| m.degree()).max().unwrap_or(0);
        let nvars = ring.nvars();
        let mut order = None;
        for d in 0..=top + 1 {
            if monomials_of_degree(nvars, d + 1)
                .into_iter()
                .all(|m| relations.contains(&Poly::monomial(&ring, m, ring.field().one())))
            {
                order = Some(d);
                break;
            }
        }
        let Some(order) = order else {
            return Err(DeformationError::NotArtinian("the relations are not supported at the origin".into()));
        };
        Ok(ArtinianAlgebra {
            basis: st.standard_monomials,
            relations,
            order,
        })
    }

    /// `κ[t_1..t_r] / m^{order+1}` with variables `t1, …, tr`.
    pub fn truncation(field: Field, r: usize, order: u32) -> Self {
        let names: Vec<String> = (1..=r).map(|i| format!("t{i}")).collect();
        let ring = Ring::new(names, field, MonomialOrder::Degrevlex).expect("valid names");
        Self::truncation_in(&ring, order)
    }

    /// `κ[t] / m^{order+1}` in the given variables.
    pub fn truncation_in(ring: &Arc<Ring>, order: u32) -> Self {
        let gens = monomials_of_degree(ring.nvars(), order + 1)
            .into_iter()
            .map(|m| Poly::monomial(ring, m, ring.field().one()))
            .collect();
        ArtinianAlgebra::new(ring, gens).expect("truncations are artinian")
    }

    pub fn ring(&self) -> &Arc<Ring> {
        self.relations.ring()
    }

    pub fn field(&self) -> Field {
        self.ring().field()
    }

    pub fn t_vars(&self) -> &[String] {
        self.ring().vars()
    }

    pub fn relations(&self) -> &Ideal {
        &self.relations
    }

    /// Least `N` with `m^{N+1} = 0`.
    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn dimension(&self) -> usize {
        self.basis.len()
    }

    /// Standard monomials, a κ-basis.
    pub fn basis(&self) -> &[Monomial] {
        &self.basis
    }

    pub fn normal_form(&self, p: &Poly) -> Poly {
        self.relations.standard_basis().normal_form(&p.to_ring(self.ring()))
    }

    pub fn coordinates(&self, p: &Poly) -> Vec<FieldElem> {
        let nf = self.normal_form(p);
        self.basis.iter().map(|m| nf.coeff(m)).collect()
    }

    pub fn is_zero(&self, p: &Poly) -> bool {
        self.normal_form(p).is_zero()
    }

    pub fn var(&self, i: usize) -> Poly {
        Poly::var(self.ring(), i)
    }

    /// `A / (relations + extra)`.
    pub fn quotient(&self, extra: &[Poly]) -> Result<ArtinianAlgebra, DeformationError> {
        let mut rels = self.relations.generators().to_vec();
        rels.extend(extra.iter().map(|p| p.to_ring(self.ring())));
        ArtinianAlgebra::new(self.ring(), rels)
    }

    /// `A / m^{k+1}`.
    pub fn truncate(&self, k: u32) -> ArtinianAlgebra {
        let extra: Vec<Poly> = monomials_of_degree(self.ring().nvars(), k + 1)
            .into_iter()
            .map(|m| Poly::monomial(self.ring(), m, self.field().one()))
            .collect();
        self.quotient(&extra).expect("truncation of an artinian algebra")
    }

    /// The small extensions `A/m^{k+1} → A/m^k` for `k = 1, …, order`.
    pub fn filtration(&self) -> Vec<SmallExtensionStep> {
        (1..=self.order)
            .map(|k| {
                let total = self.truncate(k);
                let q: Vec<Poly> = monomials_of_degree(self.ring().nvars(), k)
                    .into_iter()
                    .map(|m| Poly::monomial(self.ring(), m, self.field().one()))
                    .collect();
                SmallExtensionStep::new(&total, q).expect("m^k/m^{k+1} is killed by m")
            })
            .collect()
    }
}

/// A surjection `A' → A = A'/q` with `m_{A'}·q = 0`.
#[derive(Debug, Clone)]
pub struct SmallExtensionStep {
    total: ArtinianAlgebra,
    ideal_q: Vec<Poly>,
    q_basis: Vec<Poly>,
    quotient: ArtinianAlgebra,
}

impl SmallExtensionStep {
    pub fn new(total: &ArtinianAlgebra, q: Vec<Poly>) -> Result<Self, DeformationError> {
        let q: Vec<Poly> = q.iter().map(|p| total.normal_form(p)).collect();
        for g in &q {
            for i in 0..total.ring().nvars() {
                if !total.is_zero(&(&total.var(i) * g)) {
                    return Err(DeformationError::NotSmall(format!("{} * {g} is not zero", total.t_vars()[i])));
                }
            }
        }
        // m·q = 0, so q is the κ-span of its generators
        let mut q_basis: Vec<Poly> = Vec::new();
        let mut rows: Vec<Vec<FieldElem>> = Vec::new();
        for g in &q {
            rows.push(total.coordinates(g));
            let r = Matrix::from_rows(total.field(), rows.clone(), total.dimension()).rank();
            if r > q_basis.len() {
                q_basis.push(g.clone());
            } else {
                rows.pop();
            }
        }
        let quotient = total.quotient(&q)?;
        Ok(SmallExtensionStep {
            total: total.clone(),
            ideal_q: q,
            q_basis,
            quotient,
        })
    }

    pub fn total(&self) -> &ArtinianAlgebra {
        &self.total
    }

    pub fn quotient(&self) -> &ArtinianAlgebra {
        &self.quotient
    }

    pub fn ideal_q(&self) -> &[Poly] {
        &self.ideal_q
    }

    /// The fixed κ-basis of `q`, chosen greedily in generator order.
    pub fn q_basis(&self) -> &[Poly] {
        &self.q_basis
    }

    /// Coordinates on `q_basis` of an element of `q`; `None` if it is not
    /// in `q`.
    pub fn q_coordinates(&self, p: &Poly) -> Option<Vec<FieldElem>> {
        let target = self.total.coordinates(p);
        if self.q_basis.is_empty() {
            return target.iter().all(|c| c.is_zero()).then(Vec::new);
        }
        let cols: Vec<Vec<FieldElem>> = self.q_basis.iter().map(|b| self.total.coordinates(b)).collect();
        Matrix::from_columns(self.total.field(), &cols, self.total.dimension()).solve(&target)
    }
}

/// Polynomials in `κ[x, t]` viewed as polynomials in `x` with coefficients
/// in `κ[t]`.
#[derive(Debug, Clone)]
pub(crate) struct FamilyRing {
    pub ring: Arc<Ring>,
    pub x_ring: Arc<Ring>,
    pub t_ring: Arc<Ring>,
}

impl FamilyRing {
    pub fn new(x_ring: &Arc<Ring>, t_ring: &Arc<Ring>) -> Result<Self, DeformationError> {
        for t in t_ring.vars() {
            if x_ring.var_index(t).is_some() {
                return Err(DeformationError::VariableClash(t.clone()));
            }
        }
        let ring = x_ring.extend(t_ring.vars()).map_err(|_| DeformationError::VariableClash(String::new()))?;
        let ring = ring.with_order(MonomialOrder::Degrevlex);
        Ok(FamilyRing {
            ring,
            x_ring: x_ring.with_order(MonomialOrder::Degrevlex),
            t_ring: t_ring.with_order(MonomialOrder::Degrevlex),
        })
    }

    pub fn nx(&self) -> usize {
        self.x_ring.nvars()
    }

    /// x-monomial ↦ coefficient in `κ[t]`.
    pub fn split(&self, p: &Poly) -> BTreeMap<Monomial, Poly> {
        let nx = self.nx();
        let mut parts: BTreeMap<Monomial, Vec<(Monomial, FieldElem)>> = BTreeMap::new();
        for (m, c) in p.terms() {
            let (x, t) = m.exponents().split_at(nx);
            parts
                .entry(Monomial::new(x.to_vec()))
                .or_default()
                .push((Monomial::new(t.to_vec()), c.clone()));
        }
        parts
            .into_iter()
            .map(|(x, terms)| (x, Poly::from_terms(&self.t_ring, terms)))
            .collect()
    }

    pub fn join(&self, parts: &BTreeMap<Monomial, Poly>) -> Poly {
        let mut terms = Vec::new();
        for (x, coeff) in parts {
            for (t, c) in coeff.terms() {
                let mut e = x.exponents().to_vec();
                e.extend_from_slice(t.exponents());
                terms.push((Monomial::new(e), c.clone()));
            }
        }
        Poly::from_terms(&self.ring, terms)
    }

    pub fn from_x(&self, p: &Poly) -> Poly {
        let map: Vec<usize> = (0..self.nx()).collect();
        p.embed(&self.ring, &map)
    }

    pub fn from_t(&self, p: &Poly) -> Poly {
        let map: Vec<usize> = (self.nx()..self.ring.nvars()).collect();
        p.to_ring(&self.t_ring).embed(&self.ring, &map)
    }

    /// Reduces every x-coefficient modulo the relations of `base`.
    pub fn reduce(&self, p: &Poly, base: &ArtinianAlgebra) -> Poly {
        let parts: BTreeMap<Monomial, Poly> = self
            .split(p)
            .into_iter()
            .map(|(x, c)| (x, base.normal_form(&c).to_ring(&self.t_ring)))
            .filter(|(_, c)| !c.is_zero())
            .collect();
        self.join(&parts)
    }

    /// Sets all `t` to zero.
    pub fn at_origin(&self, p: &Poly) -> Poly {
        let nx = self.nx();
        let terms = p
            .terms()
            .iter()
            .filter(|(m, _)| m.exponents()[nx..].iter().all(|&e| e == 0))
            .map(|(m, c)| (Monomial::new(m.exponents()[..nx].to_vec()), c.clone()));
        Poly::from_terms(&self.x_ring, terms)
    }
}
