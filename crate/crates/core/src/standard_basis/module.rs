use std::collections::BTreeMap;
use std::sync::{Arc, OnceLock};

use super::engine::{mora_normal_form, reduce_full, standard_basis, ModuleOrder, SVec};
use crate::poly::{FieldElem, Monomial, Poly, Ring};

/// Converts a vector of polynomials (one per component) into engine form.
pub(crate) fn to_svec(v: &[Poly], order: &ModuleOrder) -> SVec {
    let mut terms = Vec::new();
    for (i, p) in v.iter().enumerate() {
        for (m, c) in p.terms() {
            terms.push((m.clone(), i, c.clone()));
        }
    }
    SVec::from_terms(terms, order)
}

pub(crate) fn from_svec(v: &SVec, ring: &Arc<Ring>, rank: usize) -> Vec<Poly> {
    let mut comps: Vec<Vec<(Monomial, FieldElem)>> = vec![Vec::new(); rank];
    for (m, i, c) in &v.terms {
        comps[*i].push((m.clone(), c.clone()));
    }
    comps.into_iter().map(|t| Poly::from_terms(ring, t)).collect()
}

/// A basis monomial `m·e_component` of a free module.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ModuleMonomial {
    pub component: usize,
    pub monomial: Monomial,
}

impl ModuleMonomial {
    pub fn to_vector(&self, ring: &Arc<Ring>, rank: usize) -> Vec<Poly> {
        (0..rank)
            .map(|i| {
                if i == self.component {
                    Poly::monomial(ring, self.monomial.clone(), ring.field().one())
                } else {
                    Poly::zero(ring)
                }
            })
            .collect()
    }
}

/// Standard monomials of a submodule of `R^rank`: the module monomials
/// outside its leading-term module.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModuleStaircase {
    pub rank: usize,
    /// Listed only when `finite`; decreasing in the module order.
    pub standard: Vec<ModuleMonomial>,
    pub finite: bool,
    /// Leading module monomials of the minimal standard basis.
    pub leading: Vec<ModuleMonomial>,
}

impl ModuleStaircase {
    pub fn dimension(&self) -> Option<usize> {
        self.finite.then_some(self.standard.len())
    }

    pub fn is_standard(&self, mm: &ModuleMonomial) -> bool {
        !self
            .leading
            .iter()
            .any(|l| l.component == mm.component && l.monomial.divides(&mm.monomial))
    }

    /// Largest degree of a standard monomial; `None` when empty or infinite.
    pub fn highest_degree(&self) -> Option<u32> {
        if !self.finite {
            return None;
        }
        self.standard.iter().map(|s| s.monomial.degree()).max()
    }

    /// Standard monomials of degree at most `d`, also for infinite staircases.
    pub fn up_to_degree(&self, nvars: usize, d: u32) -> Vec<ModuleMonomial> {
        let mut out = Vec::new();
        for component in 0..self.rank {
            for m in crate::poly::monomials_up_to_degree(nvars, d) {
                let mm = ModuleMonomial { component, monomial: m };
                if self.is_standard(&mm) {
                    out.push(mm);
                }
            }
        }
        out
    }
}

/// Standard basis of a submodule of `R^rank` under a module order.
#[derive(Debug, Clone)]
pub struct ModuleBasis {
    ring: Arc<Ring>,
    rank: usize,
    order: ModuleOrder,
    pub(crate) elements: Vec<SVec>,
    staircase: OnceLock<ModuleStaircase>,
}

impl ModuleBasis {
    pub fn compute(ring: &Arc<Ring>, rank: usize, generators: &[Vec<Poly>], order: ModuleOrder) -> Self {
        let gens: Vec<SVec> = generators
            .iter()
            .map(|g| {
                assert_eq!(g.len(), rank, "generator length must equal the module rank");
                to_svec(g, &order)
            })
            .collect();
        let elements = standard_basis(&gens, &order, rank == 1);
        ModuleBasis {
            ring: ring.clone(),
            rank,
            order,
            elements,
            staircase: OnceLock::new(),
        }
    }

    pub fn ring(&self) -> &Arc<Ring> {
        &self.ring
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn order(&self) -> ModuleOrder {
        self.order
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> Vec<Vec<Poly>> {
        self.elements.iter().map(|e| from_svec(e, &self.ring, self.rank)).collect()
    }

    pub fn leading(&self) -> Vec<ModuleMonomial> {
        self.elements
            .iter()
            .map(|e| ModuleMonomial {
                component: e.lead().1,
                monomial: e.lead().0.clone(),
            })
            .collect()
    }

    pub fn staircase(&self) -> &ModuleStaircase {
        self.staircase.get_or_init(|| compute_staircase(self))
    }

    /// Normal form. For global orders this is the fully reduced remainder;
    /// for local orders with a finite staircase it is the unique combination
    /// of standard monomials congruent to `v` in the localization; for
    /// local orders with infinite staircase it is Mora's weak normal form.
    pub fn normal_form(&self, v: &[Poly]) -> Vec<Poly> {
        from_svec(&self.normal_form_svec(&to_svec(v, &self.order)), &self.ring, self.rank)
    }

    pub(crate) fn normal_form_svec(&self, v: &SVec) -> SVec {
        if self.order.is_global() {
            return reduce_full(v, &self.elements, &self.order, None);
        }
        let st = self.staircase();
        if st.finite {
            match st.highest_degree() {
                None => SVec::zero(),
                Some(d) => reduce_full(v, &self.elements, &self.order, Some(d)),
            }
        } else {
            mora_normal_form(v, &self.elements, &self.order)
        }
    }

    pub fn contains(&self, v: &[Poly]) -> bool {
        self.normal_form_svec(&to_svec(v, &self.order)).is_zero()
    }

    /// Coordinates of the class of `v` on the standard monomials, when the
    /// quotient is finite dimensional.
    pub fn coordinates(&self, v: &[Poly]) -> Option<Vec<FieldElem>> {
        let st = self.staircase();
        if !st.finite {
            return None;
        }
        let nf = self.normal_form_svec(&to_svec(v, &self.order));
        let index: BTreeMap<(usize, &Monomial), usize> = st
            .standard
            .iter()
            .enumerate()
            .map(|(k, s)| ((s.component, &s.monomial), k))
            .collect();
        let mut out = vec![self.ring.field().zero(); st.standard.len()];
        for (m, i, c) in &nf.terms {
            let k = index.get(&(*i, m)).expect("normal form is a combination of standard monomials");
            out[*k] = c.clone();
        }
        Some(out)
    }
}

fn compute_staircase(basis: &ModuleBasis) -> ModuleStaircase {
    let nvars = basis.ring.nvars();
    let leading = basis.leading();
    let mut finite = true;
    let mut bounds: Vec<Option<Vec<u32>>> = Vec::with_capacity(basis.rank);
    for comp in 0..basis.rank {
        let leads: Vec<&Monomial> = leading
            .iter()
            .filter(|l| l.component == comp)
            .map(|l| &l.monomial)
            .collect();
        if leads.iter().any(|m| m.is_one()) {
            bounds.push(None);
            continue;
        }
        let mut b = vec![u32::MAX; nvars];
        for m in &leads {
            if let Some(v) = m.pure_power_var() {
                b[v] = b[v].min(m.exponents()[v]);
            }
        }
        if b.iter().any(|&e| e == u32::MAX) {
            finite = false;
        }
        bounds.push(Some(b));
    }
    let mut standard = Vec::new();
    if finite {
        for (comp, b) in bounds.iter().enumerate() {
            let Some(b) = b else { continue };
            let mut cur = vec![0u32; nvars];
            box_walk(&mut cur, 0, b, &mut |e| {
                let mm = ModuleMonomial {
                    component: comp,
                    monomial: Monomial::new(e.to_vec()),
                };
                if !leading
                    .iter()
                    .any(|l| l.component == comp && l.monomial.divides(&mm.monomial))
                {
                    standard.push(mm);
                }
            });
        }
        let order = basis.order;
        standard.sort_by(|a, b| order.cmp((&b.monomial, b.component), (&a.monomial, a.component)));
    }
    ModuleStaircase {
        rank: basis.rank,
        standard,
        finite,
        leading,
    }
}

fn box_walk(cur: &mut Vec<u32>, idx: usize, bounds: &[u32], f: &mut impl FnMut(&[u32])) {
    if idx == cur.len() {
        f(cur);
        return;
    }
    for e in 0..bounds[idx] {
        cur[idx] = e;
        box_walk(cur, idx + 1, bounds, f);
    }
    cur[idx] = 0;
}
