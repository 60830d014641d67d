//! Buchberger and Mora over free modules `R^k`. Ideals are the rank-one case.

use std::cmp::Ordering;
use std::collections::BTreeSet;

use crate::poly::{FieldElem, Monomial, MonomialOrder};

/// How module terms `m·e_i` compare. Lower component index is larger in
/// both variants.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Position {
    /// Compare monomials first, then components.
    TermOverPosition,
    /// Compare components first, then monomials.
    PositionOverTerm,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ModuleOrder {
    pub monomial: MonomialOrder,
    pub position: Position,
}

impl ModuleOrder {
    pub fn top(monomial: MonomialOrder) -> Self {
        ModuleOrder {
            monomial,
            position: Position::TermOverPosition,
        }
    }

    pub fn pot(monomial: MonomialOrder) -> Self {
        ModuleOrder {
            monomial,
            position: Position::PositionOverTerm,
        }
    }

    pub fn is_global(&self) -> bool {
        self.monomial.is_global()
    }

    pub fn cmp(&self, a: (&Monomial, usize), b: (&Monomial, usize)) -> Ordering {
        match self.position {
            Position::TermOverPosition => self.monomial.cmp(a.0, b.0).then_with(|| b.1.cmp(&a.1)),
            Position::PositionOverTerm => b.1.cmp(&a.1).then_with(|| self.monomial.cmp(a.0, b.0)),
        }
    }
}

pub(crate) type Term = (Monomial, usize, FieldElem);

/// Sparse module element with terms sorted decreasingly.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct SVec {
    pub terms: Vec<Term>,
}

impl SVec {
    pub fn zero() -> Self {
        SVec { terms: Vec::new() }
    }

    pub fn from_terms(mut terms: Vec<Term>, order: &ModuleOrder) -> Self {
        terms.retain(|t| !t.2.is_zero());
        terms.sort_by(|a, b| order.cmp((&b.0, b.1), (&a.0, a.1)));
        // combine duplicates
        let mut out: Vec<Term> = Vec::with_capacity(terms.len());
        for t in terms {
            match out.last_mut() {
                Some(last) if last.0 == t.0 && last.1 == t.1 => {
                    last.2 += &t.2;
                }
                _ => out.push(t),
            }
        }
        out.retain(|t| !t.2.is_zero());
        SVec { terms: out }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn lead(&self) -> &Term {
        &self.terms[0]
    }

    pub fn max_degree(&self) -> u32 {
        self.terms.iter().map(|t| t.0.degree()).max().unwrap_or(0)
    }

    pub fn ecart(&self) -> u32 {
        self.max_degree() - self.lead().0.degree()
    }

    pub fn monic(mut self) -> Self {
        if let Some(t) = self.terms.first() {
            if !t.2.is_one() {
                let inv = t.2.inverse();
                for term in &mut self.terms {
                    term.2 = &term.2 * &inv;
                }
            }
        }
        self
    }

    /// `self - c * m * other`.
    pub fn sub_shifted(&self, other: &SVec, m: &Monomial, c: &FieldElem, order: &ModuleOrder) -> SVec {
        let neg = -c;
        let shifted = other.terms.iter().map(|(t, i, d)| (t.mul(m), *i, d * &neg));
        merge(&self.terms, shifted, order)
    }

    pub fn add(&self, other: &SVec, order: &ModuleOrder) -> SVec {
        merge(&self.terms, other.terms.iter().cloned(), order)
    }

    pub fn drop_above(&mut self, max_degree: u32) {
        self.terms.retain(|t| t.0.degree() <= max_degree);
    }
}

fn merge(a: &[Term], b: impl Iterator<Item = Term>, order: &ModuleOrder) -> SVec {
    let mut out = Vec::with_capacity(a.len() + 4);
    let mut i = 0;
    for t in b {
        while i < a.len() && order.cmp((&a[i].0, a[i].1), (&t.0, t.1)) == Ordering::Greater {
            out.push(a[i].clone());
            i += 1;
        }
        if i < a.len() && a[i].0 == t.0 && a[i].1 == t.1 {
            let c = &a[i].2 + &t.2;
            if !c.is_zero() {
                out.push((t.0, t.1, c));
            }
            i += 1;
        } else if !t.2.is_zero() {
            out.push(t);
        }
    }
    out.extend(a[i..].iter().cloned());
    SVec { terms: out }
}

fn lead_divides(g: &SVec, t: &Term) -> Option<Monomial> {
    let (gm, gi, _) = g.lead();
    if *gi != t.1 {
        return None;
    }
    gm.quotient_of(&t.0)
}

fn s_vector(f: &SVec, g: &SVec, order: &ModuleOrder) -> SVec {
    let (fm, _, fc) = f.lead();
    let (gm, _, gc) = g.lead();
    let l = fm.lcm(gm);
    let uf = fm.quotient_of(&l).expect("lcm");
    let ug = gm.quotient_of(&l).expect("lcm");
    let finv = fc.inverse();
    let fs = SVec {
        terms: f.terms.iter().map(|(m, i, c)| (m.mul(&uf), *i, c * &finv)).collect(),
    };
    fs.sub_shifted(g, &ug, &gc.inverse(), order)
}

/// Full reduction: no term of the result is divisible by a leading term of
/// `basis`. With `truncate = Some(d)` all terms of degree above `d` are
/// discarded as they appear; this is required for local orders, where it
/// guarantees termination.
pub(crate) fn reduce_full(h: &SVec, basis: &[SVec], order: &ModuleOrder, truncate: Option<u32>) -> SVec {
    debug_assert!(order.is_global() || truncate.is_some());
    let mut rest = h.clone();
    if let Some(d) = truncate {
        rest.drop_above(d);
    }
    let mut done: Vec<Term> = Vec::new();
    while let Some(first) = rest.terms.first().cloned() {
        let mut reduced = false;
        for g in basis {
            if let Some(q) = lead_divides(g, &first) {
                let c = &first.2 * &g.lead().2.inverse();
                rest = rest.sub_shifted(g, &q, &c, order);
                if let Some(d) = truncate {
                    rest.drop_above(d);
                }
                reduced = true;
                break;
            }
        }
        if !reduced {
            done.push(first);
            rest.terms.remove(0);
        }
    }
    SVec { terms: done }
}

/// Reduces only the leading term until it is no longer divisible (global).
fn reduce_lead_global(h: &SVec, basis: &[SVec], order: &ModuleOrder) -> SVec {
    let mut h = h.clone();
    'outer: while !h.is_zero() {
        for g in basis {
            if let Some(q) = lead_divides(g, h.lead()) {
                let c = &h.lead().2 * &g.lead().2.inverse();
                h = h.sub_shifted(g, &q, &c, order);
                continue 'outer;
            }
        }
        break;
    }
    h
}

/// Mora's weak normal form with the ecart strategy. The result `r` satisfies
/// `u·h - r ∈ ⟨basis⟩` for a unit `u` of the local ring, and either `r = 0`
/// or its leading term is not divisible by any leading term of `basis`.
pub(crate) fn mora_normal_form(h: &SVec, basis: &[SVec], order: &ModuleOrder) -> SVec {
    let mut h = h.clone();
    let mut extra: Vec<SVec> = Vec::new();
    while !h.is_zero() {
        let lead = h.lead().clone();
        let mut best: Option<(u32, usize, bool)> = None; // (ecart, index, from_extra)
        for (k, g) in basis.iter().enumerate() {
            if lead_divides(g, &lead).is_some() {
                let e = g.ecart();
                if best.map_or(true, |b| e < b.0) {
                    best = Some((e, k, false));
                }
            }
        }
        for (k, g) in extra.iter().enumerate() {
            if lead_divides(g, &lead).is_some() {
                let e = g.ecart();
                if best.map_or(true, |b| e < b.0) {
                    best = Some((e, k, true));
                }
            }
        }
        let Some((e, k, from_extra)) = best else {
            return h;
        };
        let g = if from_extra { extra[k].clone() } else { basis[k].clone() };
        if e > h.ecart() {
            extra.push(h.clone());
        }
        let q = lead_divides(&g, &lead).expect("divisible");
        let c = &lead.2 * &g.lead().2.inverse();
        h = h.sub_shifted(&g, &q, &c, order);
    }
    h
}

/// Buchberger (global orders) or Mora's tangent cone algorithm (local
/// orders). Pairs are taken smallest-lcm-degree first with ties broken by
/// creation order, so the output is a deterministic function of the input
/// order. The returned basis is minimal; for global orders it is also
/// fully reduced and monic.
pub(crate) fn standard_basis(gens: &[SVec], order: &ModuleOrder, rank_one: bool) -> Vec<SVec> {
    let mut basis: Vec<SVec> = Vec::new();
    let mut alive: Vec<bool> = Vec::new();
    let mut pending: BTreeSet<(u32, usize, usize)> = BTreeSet::new();
    let mut pending_pairs: BTreeSet<(usize, usize)> = BTreeSet::new();
    let global = order.is_global();

    let insert = |h: SVec,
                      basis: &mut Vec<SVec>,
                      alive: &mut Vec<bool>,
                      pending: &mut BTreeSet<(u32, usize, usize)>,
                      pending_pairs: &mut BTreeSet<(usize, usize)>| {
        let n = basis.len();
        let (hm, hi, _) = h.lead().clone();
        for (k, g) in basis.iter().enumerate() {
            if !alive[k] || g.lead().1 != hi {
                continue;
            }
            let l = g.lead().0.lcm(&hm);
            pending.insert((l.degree(), k, n));
            pending_pairs.insert((k, n));
        }
        basis.push(h);
        alive.push(true);
    };

    for g in gens {
        if g.is_zero() {
            continue;
        }
        let h = if global {
            reduce_lead_global(g, &basis, order)
        } else {
            mora_normal_form(g, &basis, order)
        };
        if !h.is_zero() {
            insert(h.monic(), &mut basis, &mut alive, &mut pending, &mut pending_pairs);
        }
    }

    while let Some(&(deg, i, j)) = pending.iter().next() {
        pending.remove(&(deg, i, j));
        pending_pairs.remove(&(i, j));
        let (mi, ci, _) = basis[i].lead().clone();
        let (mj, _, _) = basis[j].lead().clone();
        if rank_one && global && mi.is_coprime(&mj) {
            continue;
        }
        let l = mi.lcm(&mj);
        if global {
            let chain = (0..basis.len()).any(|k| {
                k != i
                    && k != j
                    && basis[k].lead().1 == ci
                    && basis[k].lead().0.divides(&l)
                    && !pending_pairs.contains(&(i.min(k), i.max(k)))
                    && !pending_pairs.contains(&(j.min(k), j.max(k)))
            });
            if chain {
                continue;
            }
        }
        let s = s_vector(&basis[i], &basis[j], order);
        let h = if global {
            reduce_lead_global(&s, &basis, order)
        } else {
            mora_normal_form(&s, &basis, order)
        };
        if !h.is_zero() {
            insert(h.monic(), &mut basis, &mut alive, &mut pending, &mut pending_pairs);
        }
    }

    let min = minimize(basis);
    if global {
        interreduce(min, order)
    } else {
        min
    }
}

/// Drops elements whose leading term is divisible by the leading term of
/// another element (keeping the earliest of equal leads).
fn minimize(basis: Vec<SVec>) -> Vec<SVec> {
    let mut keep = vec![true; basis.len()];
    for i in 0..basis.len() {
        for j in 0..basis.len() {
            if i == j || !keep[j] {
                continue;
            }
            let (mi, ci, _) = basis[i].lead();
            let (mj, cj, _) = basis[j].lead();
            if ci == cj && mj.divides(mi) && (mj != mi || j < i) {
                keep[i] = false;
                break;
            }
        }
    }
    basis.into_iter().zip(keep).filter_map(|(b, k)| k.then_some(b)).collect()
}

fn interreduce(basis: Vec<SVec>, order: &ModuleOrder) -> Vec<SVec> {
    let mut out = Vec::with_capacity(basis.len());
    for i in 0..basis.len() {
        let others: Vec<SVec> = basis
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != i)
            .map(|(_, b)| b.clone())
            .collect();
        let head = SVec {
            terms: vec![basis[i].lead().clone()],
        };
        let tail = SVec {
            terms: basis[i].terms[1..].to_vec(),
        };
        let tail = reduce_full(&tail, &others, order, None);
        out.push(head.add(&tail, order).monic());
    }
    out.sort_by(|a, b| {
        let (ma, ia, _) = a.lead();
        let (mb, ib, _) = b.lead();
        order.cmp((ma, *ia), (mb, *ib))
    });
    out
}
