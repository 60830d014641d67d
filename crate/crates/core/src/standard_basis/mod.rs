//! Standard bases of ideals and submodules under global and local orders.
//!
//! Global orders use Buchberger's algorithm. The local order `negdegrevlex`
//! uses Mora's tangent cone algorithm, so membership and quotients are those
//! of the localization at the origin. When the local quotient is finite
//! dimensional, normal forms are computed exactly by truncating above the
//! highest standard degree (every monomial of larger degree lies in the
//! localized ideal).

mod engine;
mod module;
mod syzygy;

use std::sync::{Arc, OnceLock};

pub use engine::{ModuleOrder, Position};
pub use module::{ModuleBasis, ModuleMonomial, ModuleStaircase};
pub use syzygy::{minimize_generators, module_syzygies, syzygies, Lifter, SyzygyModule};
pub(crate) use syzygy::{global_ring, syzygy_generators};

use crate::poly::{FieldElem, Monomial, MonomialOrder, Poly, Ring};

/// An ideal of the ring of its generators, with the ring's monomial order.
#[derive(Debug, Clone)]
pub struct Ideal {
    ring: Arc<Ring>,
    generators: Vec<Poly>,
    basis: OnceLock<StandardBasis>,
}

impl Ideal {
    pub fn new(ring: &Arc<Ring>, generators: Vec<Poly>) -> Self {
        for g in &generators {
            assert!(
                crate::poly::same_ring(g.ring(), ring),
                "generator {g} does not belong to {ring}"
            );
        }
        Ideal {
            ring: ring.clone(),
            generators,
            basis: OnceLock::new(),
        }
    }

    pub fn ring(&self) -> &Arc<Ring> {
        &self.ring
    }

    pub fn ordering(&self) -> MonomialOrder {
        self.ring.order()
    }

    pub fn generators(&self) -> &[Poly] {
        &self.generators
    }

    /// Same generators in the same variables under another order.
    pub fn with_order(&self, order: MonomialOrder) -> Ideal {
        let ring = self.ring.with_order(order);
        Ideal::new(&ring, self.generators.iter().map(|g| g.to_ring(&ring)).collect())
    }

    pub fn standard_basis(&self) -> &StandardBasis {
        self.basis.get_or_init(|| compute_standard_basis(self))
    }

    pub fn contains(&self, p: &Poly) -> bool {
        self.standard_basis().contains(p)
    }

    pub fn staircase(&self) -> Staircase {
        self.standard_basis().staircase()
    }
}

#[derive(Debug, Clone)]
pub struct StandardBasis {
    inner: ModuleBasis,
    elements: Vec<Poly>,
}

impl StandardBasis {
    pub fn elements(&self) -> &[Poly] {
        &self.elements
    }

    pub fn ordering(&self) -> MonomialOrder {
        self.inner.order().monomial
    }

    /// Global bases are returned fully interreduced and monic.
    pub fn is_reduced(&self) -> bool {
        self.ordering().is_global()
    }

    pub fn ring(&self) -> &Arc<Ring> {
        self.inner.ring()
    }

    pub fn leading_monomials(&self) -> Vec<Monomial> {
        self.inner.leading().into_iter().map(|m| m.monomial).collect()
    }

    pub fn normal_form(&self, p: &Poly) -> Poly {
        self.inner.normal_form(std::slice::from_ref(p)).pop().expect("rank one")
    }

    pub fn contains(&self, p: &Poly) -> bool {
        self.inner.contains(std::slice::from_ref(p))
    }

    pub fn staircase(&self) -> Staircase {
        let st = self.inner.staircase();
        Staircase {
            standard_monomials: st.standard.iter().map(|m| m.monomial.clone()).collect(),
            finite: st.finite,
            leading: self.leading_monomials(),
        }
    }

    /// Coordinates of `p` in the quotient on the standard monomials; `None`
    /// when the quotient is infinite dimensional.
    pub fn coordinates(&self, p: &Poly) -> Option<Vec<FieldElem>> {
        self.inner.coordinates(std::slice::from_ref(p))
    }

    pub fn as_module_basis(&self) -> &ModuleBasis {
        &self.inner
    }
}

/// Monomials outside the leading ideal. `standard_monomials` is listed only
/// for finite staircases, in decreasing order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Staircase {
    pub standard_monomials: Vec<Monomial>,
    pub finite: bool,
    pub leading: Vec<Monomial>,
}

impl Staircase {
    pub fn dimension(&self) -> Option<usize> {
        self.finite.then_some(self.standard_monomials.len())
    }

    pub fn is_standard(&self, m: &Monomial) -> bool {
        !self.leading.iter().any(|l| l.divides(m))
    }

    /// Standard monomials of total degree at most `d`; works for infinite
    /// staircases too.
    pub fn up_to_degree(&self, nvars: usize, d: u32) -> Vec<Monomial> {
        crate::poly::monomials_up_to_degree(nvars, d)
            .into_iter()
            .filter(|m| self.is_standard(m))
            .collect()
    }
}

pub fn compute_standard_basis(ideal: &Ideal) -> StandardBasis {
    let gens: Vec<Vec<Poly>> = ideal.generators.iter().map(|g| vec![g.clone()]).collect();
    let inner = ModuleBasis::compute(&ideal.ring, 1, &gens, ModuleOrder::top(ideal.ordering()));
    let elements = inner.elements().into_iter().map(|mut v| v.pop().expect("rank one")).collect();
    StandardBasis { inner, elements }
}

pub fn normal_form(p: &Poly, basis: &StandardBasis) -> Poly {
    basis.normal_form(p)
}

pub fn ideal_member(p: &Poly, ideal: &Ideal) -> bool {
    ideal.contains(p)
}

pub fn quotient_staircase(ideal: &Ideal) -> Staircase {
    ideal.staircase()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{parse_poly, Field};

    fn ring(vars: &[&str], order: MonomialOrder) -> Arc<Ring> {
        Ring::with_vars(vars, Field::Rational, order)
    }

    fn ideal(r: &Arc<Ring>, gens: &[&str]) -> Ideal {
        Ideal::new(r, gens.iter().map(|g| parse_poly(r, g).unwrap()).collect())
    }

    #[test]
    fn maximal_ideal_is_its_own_basis() {
        let r = ring(&["x", "y"], MonomialOrder::Degrevlex);
        let i = ideal(&r, &["x", "y"]);
        let b = i.standard_basis();
        assert_eq!(b.elements().len(), 2);
        assert_eq!(i.staircase().standard_monomials, vec![Monomial::one(2)]);
    }

    #[test]
    fn one_s_pair() {
        let r = ring(&["x", "y"], MonomialOrder::Degrevlex);
        let i = ideal(&r, &["x^2 - y", "y^2"]);
        let lead = i.standard_basis().leading_monomials();
        let x2 = Monomial::new(vec![2, 0]);
        assert!(lead.contains(&x2));
        assert!(i.contains(&parse_poly(&r, "x^4").unwrap()));
        assert!(!i.contains(&parse_poly(&r, "x^3").unwrap()));
        assert_eq!(i.staircase().dimension(), Some(4));
    }

    #[test]
    fn local_lead_is_lowest_degree() {
        let r = ring(&["x"], MonomialOrder::Negdegrevlex);
        let i = ideal(&r, &["x + x^2"]);
        assert_eq!(i.standard_basis().leading_monomials(), vec![Monomial::var(1, 0)]);
    }

    #[test]
    fn normal_forms() {
        let r = ring(&["x", "y"], MonomialOrder::Degrevlex);
        let b = ideal(&r, &["x"]);
        let b = b.standard_basis();
        assert!(b.normal_form(&parse_poly(&r, "x^2").unwrap()).is_zero());
        assert_eq!(b.normal_form(&parse_poly(&r, "x^2 + y").unwrap()), parse_poly(&r, "y").unwrap());
    }

    #[test]
    fn units_in_the_local_ring() {
        let r = ring(&["x", "y"], MonomialOrder::Negdegrevlex);
        assert!(ideal(&r, &["1 + x"]).contains(&Poly::one(&r)));
        assert!(!ideal(&r, &["x", "y"]).contains(&Poly::one(&r)));
        let g = ring(&["x", "y"], MonomialOrder::Degrevlex);
        assert!(!ideal(&g, &["1 + x", "y"]).contains(&parse_poly(&g, "x").unwrap()));
        assert!(ideal(&r, &["x", "y"]).contains(&parse_poly(&r, "x*y").unwrap()));
    }

    #[test]
    fn staircases() {
        let r = ring(&["x", "y"], MonomialOrder::Degrevlex);
        let s = ideal(&r, &["x^2", "y"]).staircase();
        assert!(s.finite);
        assert_eq!(s.standard_monomials, vec![Monomial::new(vec![1, 0]), Monomial::one(2)]);
        assert!(!ideal(&r, &["x"]).staircase().finite);
        let l = ring(&["x", "y"], MonomialOrder::Negdegrevlex);
        let s = ideal(&l, &["x^3 + y^2", "3x^2", "2y"]).staircase();
        assert_eq!(s.dimension(), Some(2));
    }

    #[test]
    fn local_quotient_ignores_far_components() {
        // (x(x-1)) is x·unit near the origin
        let l = ring(&["x"], MonomialOrder::Negdegrevlex);
        let i = ideal(&l, &["x^2 - x"]);
        assert_eq!(i.staircase().dimension(), Some(1));
        let c = i.standard_basis().coordinates(&parse_poly(&l, "3 + x + x^5").unwrap()).unwrap();
        assert_eq!(c, vec![Field::Rational.from_i64(3)]);
    }

    #[test]
    fn syzygy_examples() {
        let r = ring(&["x", "y", "z"], MonomialOrder::Degrevlex);
        let p = |s: &str| parse_poly(&r, s).unwrap();
        let check = |tuple: &[Poly], expected: usize| {
            let s = syzygies(tuple);
            assert_eq!(s.len(), expected);
            for col in &s.generators {
                let mut acc = Poly::zero(&r);
                for (a, f) in col.iter().zip(tuple) {
                    acc = &acc + &(a * f);
                }
                assert!(acc.is_zero());
            }
            s
        };
        let s = check(&[p("x"), p("y")], 1);
        let g = &s.generators[0];
        assert!(g[0] == p("y") && g[1] == p("-x") || g[0] == p("-y") && g[1] == p("x"));
        let s = check(&[p("x"), p("x")], 1);
        assert_eq!(s.generators[0][0], -s.generators[0][1].clone());
        assert!(s.generators[0][0].is_constant());
        check(&[p("x*y"), p("x*z"), p("y*z")], 2);
    }

    #[test]
    fn lifter_recovers_cofactors() {
        let r = ring(&["x", "y"], MonomialOrder::Negdegrevlex);
        let p = |s: &str| parse_poly(&r, s).unwrap();
        let gens = vec![vec![p("x^2")], vec![p("y")]];
        let l = Lifter::new(&r, 1, &gens);
        let target = p("x^3 + 2x*y - y^2");
        let c = l.lift(std::slice::from_ref(&target)).unwrap();
        assert_eq!(&(&c[0] * &p("x^2")) + &(&c[1] * &p("y")), target);
        assert!(l.lift(&[p("x")]).is_none());
    }
}
