use std::sync::{Arc, OnceLock};

use super::{Dim, ModuleError};
use crate::linalg::Matrix;
use crate::poly::{same_ring, FieldElem, MonomialOrder, Poly, Ring};
use crate::standard_basis::{global_ring, syzygy_generators, Lifter, ModuleBasis, ModuleMonomial, ModuleOrder};

/// The cokernel of a matrix: `R^rank` modulo the span of `relations`.
/// Entries live in the polynomial ring with the degrevlex order.
#[derive(Debug, Clone)]
pub struct PresentedModule {
    ring: Arc<Ring>,
    rank: usize,
    relations: Vec<Vec<Poly>>,
    basis: OnceLock<ModuleBasis>,
}

impl PartialEq for PresentedModule {
    fn eq(&self, other: &Self) -> bool {
        same_ring(&self.ring, &other.ring) && self.rank == other.rank && self.relations == other.relations
    }
}

impl Eq for PresentedModule {}

pub(crate) fn zero_vec(ring: &Arc<Ring>, n: usize) -> Vec<Poly> {
    vec![Poly::zero(ring); n]
}

pub(crate) fn unit_vec(ring: &Arc<Ring>, n: usize, i: usize) -> Vec<Poly> {
    let mut v = zero_vec(ring, n);
    v[i] = Poly::one(ring);
    v
}

pub(crate) fn vec_add(a: &[Poly], b: &[Poly]) -> Vec<Poly> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub(crate) fn vec_scale(p: &Poly, v: &[Poly]) -> Vec<Poly> {
    v.iter().map(|x| p * x).collect()
}

/// `Σ coeffs[i] * vectors[i]`.
pub(crate) fn combine(ring: &Arc<Ring>, n: usize, coeffs: &[Poly], vectors: &[Vec<Poly>]) -> Vec<Poly> {
    let mut acc = zero_vec(ring, n);
    for (c, v) in coeffs.iter().zip(vectors) {
        if c.is_zero() {
            continue;
        }
        for (a, x) in acc.iter_mut().zip(v) {
            if !x.is_zero() {
                *a = &*a + &(c * x);
            }
        }
    }
    acc
}

pub(crate) fn is_zero_vec(v: &[Poly]) -> bool {
    v.iter().all(|p| p.is_zero())
}

/// Result of [`PresentedModule::prune`]: an isomorphic module with fewer
/// generators together with the isomorphism in both directions, given on
/// free generators.
#[derive(Debug, Clone)]
pub struct Pruned {
    pub module: PresentedModule,
    pub to_new: Vec<Vec<Poly>>,
    pub to_old: Vec<Vec<Poly>>,
}

impl PresentedModule {
    pub fn new(ring: &Arc<Ring>, rank: usize, relations: Vec<Vec<Poly>>) -> Self {
        let ring = global_ring(ring);
        let relations = relations
            .into_iter()
            .map(|r| {
                assert_eq!(r.len(), rank, "relation length must equal the rank");
                r.iter().map(|p| p.to_ring(&ring)).collect::<Vec<_>>()
            })
            .filter(|r| !is_zero_vec(r))
            .collect();
        PresentedModule {
            ring,
            rank,
            relations,
            basis: OnceLock::new(),
        }
    }

    pub fn free(ring: &Arc<Ring>, rank: usize) -> Self {
        PresentedModule::new(ring, rank, Vec::new())
    }

    /// `R/(gens)`.
    pub fn cyclic(ring: &Arc<Ring>, gens: &[Poly]) -> Self {
        PresentedModule::new(ring, 1, gens.iter().map(|g| vec![g.clone()]).collect())
    }

    pub fn ring(&self) -> &Arc<Ring> {
        &self.ring
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn relations(&self) -> &[Vec<Poly>] {
        &self.relations
    }

    pub fn generator(&self, i: usize) -> Vec<Poly> {
        unit_vec(&self.ring, self.rank, i)
    }

    pub fn zero_element(&self) -> Vec<Poly> {
        zero_vec(&self.ring, self.rank)
    }

    pub fn direct_sum(&self, other: &PresentedModule) -> PresentedModule {
        let n = self.rank + other.rank;
        let mut rels = Vec::new();
        for r in &self.relations {
            let mut v = r.clone();
            v.extend(zero_vec(&self.ring, other.rank));
            rels.push(v);
        }
        for r in &other.relations {
            let mut v = zero_vec(&self.ring, self.rank);
            v.extend(r.iter().cloned());
            rels.push(v);
        }
        PresentedModule::new(&self.ring, n, rels)
    }

    /// Direct sum of `k` copies.
    pub fn power(&self, k: usize) -> PresentedModule {
        let mut out = PresentedModule::free(&self.ring, 0);
        for _ in 0..k {
            out = out.direct_sum(self);
        }
        out
    }

    pub fn relation_basis(&self) -> &ModuleBasis {
        self.basis.get_or_init(|| {
            ModuleBasis::compute(&self.ring, self.rank, &self.relations, ModuleOrder::top(MonomialOrder::Degrevlex))
        })
    }

    pub fn reduce(&self, v: &[Poly]) -> Vec<Poly> {
        if self.rank == 0 {
            return Vec::new();
        }
        self.relation_basis().normal_form(v)
    }

    pub fn is_zero_element(&self, v: &[Poly]) -> bool {
        self.rank == 0 || self.relation_basis().contains(v)
    }

    pub fn dimension(&self) -> Dim {
        if self.rank == 0 {
            return Dim::Finite(0);
        }
        match self.relation_basis().staircase().dimension() {
            Some(d) => Dim::Finite(d),
            None => Dim::Infinite,
        }
    }

    /// Standard module monomials forming a κ-basis, when finite.
    pub fn kappa_basis(&self) -> Option<Vec<ModuleMonomial>> {
        if self.rank == 0 {
            return Some(Vec::new());
        }
        let st = self.relation_basis().staircase();
        st.finite.then(|| st.standard.clone())
    }

    pub fn coordinates(&self, v: &[Poly]) -> Option<Vec<FieldElem>> {
        if self.rank == 0 {
            return Some(Vec::new());
        }
        self.relation_basis().coordinates(v)
    }

    pub fn from_coordinates(&self, c: &[FieldElem]) -> Vec<Poly> {
        let basis = self.kappa_basis().expect("finite dimensional");
        let mut v = self.zero_element();
        for (mm, x) in basis.iter().zip(c) {
            if !x.is_zero() {
                let t = Poly::monomial(&self.ring, mm.monomial.clone(), x.clone());
                v[mm.component] = &v[mm.component] + &t;
            }
        }
        v
    }

    /// Matrix of multiplication by `p` on the κ-basis, when finite.
    pub fn action_matrix(&self, p: &Poly) -> Option<Matrix> {
        let basis = self.kappa_basis()?;
        let p = p.to_ring(&self.ring);
        let cols: Vec<Vec<FieldElem>> = basis
            .iter()
            .map(|mm| {
                let v = vec_scale(&p, &mm.to_vector(&self.ring, self.rank));
                self.coordinates(&v).expect("finite")
            })
            .collect();
        Some(Matrix::from_columns(self.ring.field(), &cols, basis.len()))
    }

    /// Moves a vector into this module's ring.
    pub fn adopt(&self, v: &[Poly]) -> Vec<Poly> {
        v.iter().map(|p| p.to_ring(&self.ring)).collect()
    }

    /// The submodule generated by `gens` (vectors in `R^rank`), presented
    /// on those generators.
    pub fn submodule(&self, gens: &[Vec<Poly>]) -> PresentedModule {
        let k = gens.len();
        let mut all: Vec<Vec<Poly>> = gens.iter().map(|g| self.adopt(g)).collect();
        all.extend(self.relations.iter().cloned());
        let rels = syzygy_generators(&self.ring, self.rank, &all)
            .into_iter()
            .map(|mut s| {
                s.truncate(k);
                s
            })
            .collect();
        PresentedModule::new(&self.ring, k, rels)
    }

    /// Quotient by the submodule generated by `gens`.
    pub fn quotient(&self, gens: &[Vec<Poly>]) -> PresentedModule {
        let mut rels = self.relations.clone();
        rels.extend(gens.iter().map(|g| self.adopt(g)));
        PresentedModule::new(&self.ring, self.rank, rels)
    }

    /// Eliminates generators that some relation expresses through the
    /// others (a relation with a nonzero constant entry).
    pub fn prune(&self) -> Pruned {
        let ring = &self.ring;
        let mut rank = self.rank;
        let mut rels = self.relations.clone();
        let mut to_new: Vec<Vec<Poly>> = (0..rank).map(|i| unit_vec(ring, rank, i)).collect();
        let mut to_old: Vec<Vec<Poly>> = (0..rank).map(|i| unit_vec(ring, rank, i)).collect();
        loop {
            let found = rels.iter().enumerate().find_map(|(k, r)| {
                r.iter()
                    .position(|p| p.is_constant() && !p.is_zero())
                    .map(|i| (k, i))
            });
            let Some((k, i)) = found else { break };
            let r = rels.remove(k);
            let c = r[i].constant_term().inverse();
            // e_i = -(1/c) Σ_{j≠i} r_j e_j
            let image: Vec<Poly> = r
                .iter()
                .enumerate()
                .filter(|(j, _)| *j != i)
                .map(|(_, p)| -p.scale(&c))
                .collect();
            let substitute = |v: &[Poly]| -> Vec<Poly> {
                let mut out: Vec<Poly> = v
                    .iter()
                    .enumerate()
                    .filter(|(j, _)| *j != i)
                    .map(|(_, p)| p.clone())
                    .collect();
                if !v[i].is_zero() {
                    out = vec_add(&out, &vec_scale(&v[i], &image));
                }
                out
            };
            rels = rels.iter().map(|r| substitute(r)).filter(|r| !is_zero_vec(r)).collect();
            to_new = to_new.iter().map(|v| substitute(v)).collect();
            to_old.remove(i);
            rank -= 1;
        }
        Pruned {
            module: PresentedModule::new(ring, rank, rels),
            to_new,
            to_old,
        }
    }
}

/// Expresses elements of `ambient` in terms of chosen generators of a
/// submodule.
pub(crate) struct SubmoduleCoordinates {
    ngens: usize,
    lifter: Lifter,
}

impl SubmoduleCoordinates {
    pub fn new(ambient: &PresentedModule, gens: &[Vec<Poly>]) -> Self {
        let mut all: Vec<Vec<Poly>> = gens.iter().map(|g| ambient.adopt(g)).collect();
        all.extend(ambient.relations().iter().cloned());
        SubmoduleCoordinates {
            ngens: gens.len(),
            lifter: Lifter::new(ambient.ring(), ambient.rank(), &all),
        }
    }

    pub fn coordinates(&self, v: &[Poly]) -> Option<Vec<Poly>> {
        self.lifter.lift(v).map(|mut c| {
            c.truncate(self.ngens);
            c
        })
    }
}

/// A homomorphism given by the images of the free generators of the source.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModuleHom {
    source: PresentedModule,
    target: PresentedModule,
    columns: Vec<Vec<Poly>>,
}

impl ModuleHom {
    /// Checks that every relation of the source maps into the relations of
    /// the target.
    pub fn new(source: &PresentedModule, target: &PresentedModule, columns: Vec<Vec<Poly>>) -> Result<Self, ModuleError> {
        let h = ModuleHom::new_unchecked(source, target, columns);
        if h.is_well_defined() {
            Ok(h)
        } else {
            Err(ModuleError::NotWellDefined)
        }
    }

    pub(crate) fn new_unchecked(source: &PresentedModule, target: &PresentedModule, columns: Vec<Vec<Poly>>) -> Self {
        assert_eq!(columns.len(), source.rank(), "one image per source generator");
        let columns = columns
            .into_iter()
            .map(|c| {
                assert_eq!(c.len(), target.rank(), "image length must equal the target rank");
                target.adopt(&c)
            })
            .collect();
        ModuleHom {
            source: source.clone(),
            target: target.clone(),
            columns,
        }
    }

    pub fn identity(m: &PresentedModule) -> Self {
        ModuleHom::new_unchecked(m, m, (0..m.rank()).map(|i| m.generator(i)).collect())
    }

    pub fn zero(source: &PresentedModule, target: &PresentedModule) -> Self {
        ModuleHom::new_unchecked(source, target, vec![target.zero_element(); source.rank()])
    }

    pub fn source(&self) -> &PresentedModule {
        &self.source
    }

    pub fn target(&self) -> &PresentedModule {
        &self.target
    }

    pub fn columns(&self) -> &[Vec<Poly>] {
        &self.columns
    }

    pub fn is_well_defined(&self) -> bool {
        self.source
            .relations()
            .iter()
            .all(|r| self.target.is_zero_element(&self.apply(r)))
    }

    /// Image of a vector of the source's free cover.
    pub fn apply(&self, v: &[Poly]) -> Vec<Poly> {
        let v = self.source.adopt(v);
        combine(self.target.ring(), self.target.rank(), &v, &self.columns)
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &ModuleHom) -> ModuleHom {
        assert!(self.target == other.source, "composition endpoints differ");
        let cols = self.columns.iter().map(|c| other.apply(c)).collect();
        ModuleHom::new_unchecked(&self.source, &other.target, cols)
    }

    pub fn add(&self, other: &ModuleHom) -> ModuleHom {
        assert!(self.source == other.source && self.target == other.target);
        let cols = self.columns.iter().zip(&other.columns).map(|(a, b)| vec_add(a, b)).collect();
        ModuleHom::new_unchecked(&self.source, &self.target, cols)
    }

    pub fn neg(&self) -> ModuleHom {
        let cols = self.columns.iter().map(|c| c.iter().map(|p| -p).collect()).collect();
        ModuleHom::new_unchecked(&self.source, &self.target, cols)
    }

    pub fn scale(&self, c: &FieldElem) -> ModuleHom {
        let cols = self.columns.iter().map(|v| v.iter().map(|p| p.scale(c)).collect()).collect();
        ModuleHom::new_unchecked(&self.source, &self.target, cols)
    }

    pub fn is_zero(&self) -> bool {
        self.columns.iter().all(|c| self.target.is_zero_element(c))
    }

    /// Equality as maps of modules.
    pub fn agrees_with(&self, other: &ModuleHom) -> bool {
        self.add(&other.neg()).is_zero()
    }

    /// Vectors of the source's free cover generating the kernel.
    pub fn kernel_generators(&self) -> Vec<Vec<Poly>> {
        let m = self.source.rank();
        if m == 0 {
            return Vec::new();
        }
        let mut all = self.columns.clone();
        all.extend(self.target.relations().iter().cloned());
        let ring = self.source.ring();
        let gens: Vec<Vec<Poly>> = if self.target.rank() == 0 {
            (0..m).map(|i| self.source.generator(i)).collect()
        } else {
            syzygy_generators(ring, self.target.rank(), &all)
                .into_iter()
                .map(|mut s| {
                    s.truncate(m);
                    s
                })
                .collect()
        };
        gens.into_iter().filter(|g| !self.source.is_zero_element(g)).collect()
    }

    pub fn is_injective(&self) -> bool {
        self.kernel_generators().is_empty()
    }

    pub fn is_surjective(&self) -> bool {
        let t = self.target.quotient(&self.columns);
        (0..self.target.rank()).all(|i| t.is_zero_element(&t.generator(i)))
    }

    pub fn is_isomorphism(&self) -> bool {
        self.is_well_defined() && self.is_injective() && self.is_surjective()
    }

    /// Replaces the target by an isomorphic module through the map given on
    /// free generators.
    pub(crate) fn retarget(&self, target: &PresentedModule, via: &[Vec<Poly>]) -> ModuleHom {
        let cols = self
            .columns
            .iter()
            .map(|c| combine(target.ring(), target.rank(), c, via))
            .collect();
        ModuleHom::new_unchecked(&self.source, target, cols)
    }

    /// Replaces the source by an isomorphic module; `via` gives, for each new
    /// generator, its image in the old source.
    pub(crate) fn resource(&self, source: &PresentedModule, via: &[Vec<Poly>]) -> ModuleHom {
        let cols = via.iter().map(|v| self.apply(v)).collect();
        ModuleHom::new_unchecked(source, &self.target, cols)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{parse_poly, Field};

    fn r() -> Arc<Ring> {
        Ring::with_vars(&["x", "y"], Field::Rational, MonomialOrder::Degrevlex)
    }

    #[test]
    fn prune_drops_unit_relations() {
        let ring = r();
        let p = |s: &str| parse_poly(&ring, s).unwrap();
        // e0 = x e1 eliminates e0, leaving R/(x^2 y) on e1
        let m = PresentedModule::new(&ring, 2, vec![vec![p("1"), p("-x")], vec![p("x*y"), p("0")]]);
        let pr = m.prune();
        assert_eq!(pr.module.rank(), 1);
        assert_eq!(pr.module.relations(), &[vec![p("x^2*y")]]);
        assert_eq!(pr.to_new[0], vec![p("x")]);
        let fwd = ModuleHom::new(&m, &pr.module, pr.to_new.clone()).unwrap();
        let back = ModuleHom::new(&pr.module, &m, pr.to_old.clone()).unwrap();
        assert!(fwd.is_isomorphism());
        assert!(fwd.then(&back).agrees_with(&ModuleHom::identity(&m)));
    }

    #[test]
    fn kernel_of_multiplication() {
        let ring = r();
        let p = |s: &str| parse_poly(&ring, s).unwrap();
        let m = PresentedModule::cyclic(&ring, &[p("x^2")]);
        let times_x = ModuleHom::new(&m, &m, vec![vec![p("x")]]).unwrap();
        let k = times_x.kernel_generators();
        assert_eq!(k.len(), 1);
        assert!(!times_x.is_injective());
        assert!(!times_x.is_surjective());
        assert!(ModuleHom::new(&m, &PresentedModule::cyclic(&ring, &[p("x")]), vec![vec![p("y")]]).is_ok());
        assert!(ModuleHom::new(&PresentedModule::cyclic(&ring, &[p("x")]), &m, vec![vec![p("1")]]).is_err());
    }

    #[test]
    fn dimensions_and_actions() {
        let ring = r();
        let p = |s: &str| parse_poly(&ring, s).unwrap();
        let m = PresentedModule::cyclic(&ring, &[p("x^2"), p("y")]);
        assert_eq!(m.dimension(), Dim::Finite(2));
        let a = m.action_matrix(&p("x")).unwrap();
        assert_eq!(a.rank(), 1);
        assert_eq!(PresentedModule::cyclic(&ring, &[p("x")]).dimension(), Dim::Infinite);
    }
}
