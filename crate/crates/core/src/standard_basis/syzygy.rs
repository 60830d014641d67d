use std::sync::Arc;

use super::engine::{reduce_full, standard_basis, ModuleOrder, SVec};
use super::module::{from_svec, to_svec, ModuleBasis};
use crate::poly::{MonomialOrder, Poly, Ring};

/// Generators of the first syzygy module of a tuple of polynomials.
/// Column `k` of the presentation is `generators[k]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SyzygyModule {
    pub tuple_len: usize,
    pub generators: Vec<Vec<Poly>>,
}

impl SyzygyModule {
    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }
}

pub(crate) fn global_ring(ring: &Arc<Ring>) -> Arc<Ring> {
    if ring.order() == MonomialOrder::Degrevlex {
        ring.clone()
    } else {
        ring.with_order(MonomialOrder::Degrevlex)
    }
}

/// Elements `(v_i, e_i)` of `R^{rank + n}` whose Gröbner basis under a
/// position-over-term order eliminates the first `rank` components.
fn augmented(ring: &Arc<Ring>, vectors: &[Vec<Poly>], order: &ModuleOrder) -> Vec<SVec> {
    let n = vectors.len();
    vectors
        .iter()
        .enumerate()
        .map(|(i, v)| {
            let mut comps: Vec<Poly> = v.to_vec();
            for j in 0..n {
                comps.push(if i == j { Poly::one(ring) } else { Poly::zero(ring) });
            }
            to_svec(&comps, order)
        })
        .collect()
}

/// Generators of `{ a ∈ R^n : Σ a_i v_i = 0 }` for vectors `v_i ∈ R^rank`,
/// computed over the polynomial ring (syzygies of the localization are
/// generated by these). The generating set is minimal with respect to
/// inclusion.
pub fn module_syzygies(ring: &Arc<Ring>, rank: usize, vectors: &[Vec<Poly>]) -> Vec<Vec<Poly>> {
    let syz = syzygy_generators(ring, rank, vectors);
    minimize_generators(ring, vectors.len(), syz)
}

/// Like [`module_syzygies`] without the minimization pass.
pub(crate) fn syzygy_generators(ring: &Arc<Ring>, rank: usize, vectors: &[Vec<Poly>]) -> Vec<Vec<Poly>> {
    let n = vectors.len();
    if n == 0 {
        return Vec::new();
    }
    let g = global_ring(ring);
    let moved: Vec<Vec<Poly>> = vectors
        .iter()
        .map(|v| v.iter().map(|p| p.to_ring(&g)).collect())
        .collect();
    let order = ModuleOrder::pot(MonomialOrder::Degrevlex);
    let gb = standard_basis(&augmented(&g, &moved, &order), &order, false);
    let syz: Vec<Vec<Poly>> = gb
        .iter()
        .filter(|e| e.lead().1 >= rank)
        .map(|e| from_svec(e, ring, rank + n).split_off(rank))
        .collect();
    syz
}

/// The syzygy module of a tuple of polynomials.
pub fn syzygies(tuple: &[Poly]) -> SyzygyModule {
    let Some(first) = tuple.first() else {
        return SyzygyModule {
            tuple_len: 0,
            generators: Vec::new(),
        };
    };
    let ring = first.ring().clone();
    let vectors: Vec<Vec<Poly>> = tuple.iter().map(|p| vec![p.clone()]).collect();
    SyzygyModule {
        tuple_len: tuple.len(),
        generators: module_syzygies(&ring, 1, &vectors),
    }
}

/// Removes generators lying in the submodule spanned by the others, scanning
/// from the last to the first.
pub fn minimize_generators(ring: &Arc<Ring>, rank: usize, gens: Vec<Vec<Poly>>) -> Vec<Vec<Poly>> {
    let mut gens: Vec<Vec<Poly>> = gens.into_iter().filter(|v| v.iter().any(|p| !p.is_zero())).collect();
    let g = global_ring(ring);
    let order = ModuleOrder::top(MonomialOrder::Degrevlex);
    let mut i = gens.len();
    while i > 0 {
        i -= 1;
        let others: Vec<Vec<Poly>> = gens
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != i)
            .map(|(_, v)| v.iter().map(|p| p.to_ring(&g)).collect())
            .collect();
        if others.is_empty() {
            break;
        }
        let basis = ModuleBasis::compute(&g, rank, &others, order);
        let target: Vec<Poly> = gens[i].iter().map(|p| p.to_ring(&g)).collect();
        if basis.contains(&target) {
            gens.remove(i);
        }
    }
    gens
}

/// Expresses elements of a submodule `⟨g_1..g_n⟩ ⊆ R^rank` in terms of the
/// generators (global computation).
#[derive(Debug, Clone)]
pub struct Lifter {
    ring: Arc<Ring>,
    global: Arc<Ring>,
    rank: usize,
    ngens: usize,
    order: ModuleOrder,
    basis: Vec<SVec>,
}

impl Lifter {
    pub fn new(ring: &Arc<Ring>, rank: usize, generators: &[Vec<Poly>]) -> Self {
        let g = global_ring(ring);
        let order = ModuleOrder::pot(MonomialOrder::Degrevlex);
        let moved: Vec<Vec<Poly>> = generators
            .iter()
            .map(|v| v.iter().map(|p| p.to_ring(&g)).collect())
            .collect();
        let basis = if generators.is_empty() {
            Vec::new()
        } else {
            standard_basis(&augmented(&g, &moved, &order), &order, false)
        };
        Lifter {
            ring: ring.clone(),
            global: g,
            rank,
            ngens: generators.len(),
            order,
            basis,
        }
    }

    pub fn ngens(&self) -> usize {
        self.ngens
    }

    /// Cofactors `c` with `v = Σ c_i g_i`, or `None` when `v` is not in the
    /// submodule.
    pub fn lift(&self, v: &[Poly]) -> Option<Vec<Poly>> {
        assert_eq!(v.len(), self.rank);
        let mut comps: Vec<Poly> = v.iter().map(|p| p.to_ring(&self.global)).collect();
        if self.ngens == 0 {
            return comps.iter().all(|p| p.is_zero()).then(Vec::new);
        }
        for _ in 0..self.ngens {
            comps.push(Poly::zero(&self.global));
        }
        let r = reduce_full(&to_svec(&comps, &self.order), &self.basis, &self.order, None);
        if r.terms.iter().any(|t| t.1 < self.rank) {
            return None;
        }
        let rest = from_svec(&r, &self.ring, self.rank + self.ngens).split_off(self.rank);
        Some(rest.into_iter().map(|p| -p).collect())
    }
}
