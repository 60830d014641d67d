use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use super::ring::same_ring;
use super::{FieldElem, Monomial, MonomialOrder, PolyError, Ring};

/// Sparse polynomial. Terms are kept strictly decreasing under the ring's
/// order, with no zero coefficients.
#[derive(Debug, Clone)]
pub struct Poly {
    ring: Arc<Ring>,
    terms: Vec<(Monomial, FieldElem)>,
}

impl PartialEq for Poly {
    fn eq(&self, other: &Self) -> bool {
        same_ring(&self.ring, &other.ring) && self.terms == other.terms
    }
}

impl Eq for Poly {}

impl Poly {
    pub fn zero(ring: &Arc<Ring>) -> Poly {
        Poly {
            ring: ring.clone(),
            terms: Vec::new(),
        }
    }

    pub fn one(ring: &Arc<Ring>) -> Poly {
        Poly::constant(ring, ring.field().one())
    }

    pub fn constant(ring: &Arc<Ring>, c: FieldElem) -> Poly {
        Poly::monomial(ring, Monomial::one(ring.nvars()), c)
    }

    pub fn from_i64(ring: &Arc<Ring>, c: i64) -> Poly {
        Poly::constant(ring, ring.field().from_i64(c))
    }

    pub fn var(ring: &Arc<Ring>, index: usize) -> Poly {
        Poly::monomial(ring, Monomial::var(ring.nvars(), index), ring.field().one())
    }

    pub fn monomial(ring: &Arc<Ring>, m: Monomial, c: FieldElem) -> Poly {
        assert_eq!(m.nvars(), ring.nvars(), "monomial length mismatch");
        let terms = if c.is_zero() { Vec::new() } else { vec![(m, c)] };
        Poly {
            ring: ring.clone(),
            terms,
        }
    }

    /// Collects arbitrary terms, combining duplicates and dropping zeros.
    pub fn from_terms(ring: &Arc<Ring>, terms: impl IntoIterator<Item = (Monomial, FieldElem)>) -> Poly {
        let mut acc: HashMap<Monomial, FieldElem> = HashMap::new();
        for (m, c) in terms {
            assert_eq!(m.nvars(), ring.nvars(), "monomial length mismatch");
            match acc.get_mut(&m) {
                Some(v) => *v += &c,
                None => {
                    acc.insert(m, c);
                }
            }
        }
        let mut terms: Vec<_> = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        let order = ring.order();
        terms.sort_by(|a, b| order.cmp(&b.0, &a.0));
        Poly {
            ring: ring.clone(),
            terms,
        }
    }

    pub fn ring(&self) -> &Arc<Ring> {
        &self.ring
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> &[(Monomial, FieldElem)] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn leading_term(&self) -> Option<&(Monomial, FieldElem)> {
        self.terms.first()
    }

    pub fn leading_monomial(&self) -> Option<&Monomial> {
        self.terms.first().map(|t| &t.0)
    }

    pub fn leading_coeff(&self) -> Option<&FieldElem> {
        self.terms.first().map(|t| &t.1)
    }

    pub fn coeff(&self, m: &Monomial) -> FieldElem {
        self.terms
            .iter()
            .find(|(t, _)| t == m)
            .map(|(_, c)| c.clone())
            .unwrap_or_else(|| self.ring.field().zero())
    }

    pub fn constant_term(&self) -> FieldElem {
        self.coeff(&Monomial::one(self.ring.nvars()))
    }

    /// Largest total degree of a term; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.iter().map(|(m, _)| m.degree()).max()
    }

    /// Smallest total degree of a term (the order at the origin).
    pub fn low_degree(&self) -> Option<u32> {
        self.terms.iter().map(|(m, _)| m.degree()).min()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.iter().all(|(m, _)| m.is_one())
    }

    pub fn checked_add(&self, other: &Poly) -> Result<Poly, PolyError> {
        self.check_ring(other)?;
        Ok(self.merge(other, false))
    }

    pub fn checked_sub(&self, other: &Poly) -> Result<Poly, PolyError> {
        self.check_ring(other)?;
        Ok(self.merge(other, true))
    }

    pub fn checked_mul(&self, other: &Poly) -> Result<Poly, PolyError> {
        self.check_ring(other)?;
        Ok(self.mul_unchecked(other))
    }

    fn check_ring(&self, other: &Poly) -> Result<(), PolyError> {
        if same_ring(&self.ring, &other.ring) {
            Ok(())
        } else {
            Err(PolyError::RingMismatch {
                left: self.ring.to_string(),
                right: other.ring.to_string(),
            })
        }
    }

    fn merge(&self, other: &Poly, subtract: bool) -> Poly {
        let order = self.ring.order();
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        while i < self.terms.len() && j < other.terms.len() {
            let (ma, ca) = &self.terms[i];
            let (mb, cb) = &other.terms[j];
            match order.cmp(ma, mb) {
                Ordering::Greater => {
                    out.push((ma.clone(), ca.clone()));
                    i += 1;
                }
                Ordering::Less => {
                    out.push((mb.clone(), if subtract { -cb } else { cb.clone() }));
                    j += 1;
                }
                Ordering::Equal => {
                    let c = if subtract { ca - cb } else { ca + cb };
                    if !c.is_zero() {
                        out.push((ma.clone(), c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend(self.terms[i..].iter().cloned());
        out.extend(
            other.terms[j..]
                .iter()
                .map(|(m, c)| (m.clone(), if subtract { -c } else { c.clone() })),
        );
        Poly {
            ring: self.ring.clone(),
            terms: out,
        }
    }

    fn mul_unchecked(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero(&self.ring);
        }
        if other.terms.len() == 1 {
            let (m, c) = &other.terms[0];
            return self.mul_term(m, c);
        }
        if self.terms.len() == 1 {
            let (m, c) = &self.terms[0];
            return other.mul_term(m, c);
        }
        let mut prods = Vec::with_capacity(self.terms.len() * other.terms.len());
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                prods.push((ma.mul(mb), ca * cb));
            }
        }
        Poly::from_terms(&self.ring, prods)
    }

    /// Multiplication by `c * m`. Monomial orders are compatible with
    /// multiplication, so the term order is preserved.
    pub fn mul_term(&self, m: &Monomial, c: &FieldElem) -> Poly {
        if c.is_zero() {
            return Poly::zero(&self.ring);
        }
        Poly {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(t, d)| (t.mul(m), d * c)).collect(),
        }
    }

    pub fn scale(&self, c: &FieldElem) -> Poly {
        self.mul_term(&Monomial::one(self.ring.nvars()), c)
    }

    /// Divides by the leading coefficient.
    pub fn monic(&self) -> Poly {
        match self.leading_coeff() {
            None => self.clone(),
            Some(c) => self.scale(&c.inverse()),
        }
    }

    pub fn pow(&self, k: u32) -> Poly {
        let mut acc = Poly::one(&self.ring);
        let mut base = self.clone();
        let mut e = k;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Formal partial derivative. In characteristic `p`, exponents divisible
    /// by `p` annihilate their term.
    pub fn partial_derivative(&self, var_index: usize) -> Result<Poly, PolyError> {
        if var_index >= self.ring.nvars() {
            return Err(PolyError::VariableIndex {
                index: var_index,
                nvars: self.ring.nvars(),
            });
        }
        let field = self.ring.field();
        let terms = self.terms.iter().filter_map(|(m, c)| {
            let e = m.exponents()[var_index];
            if e == 0 {
                return None;
            }
            let mut m2 = m.clone();
            m2.exponents_mut()[var_index] -= 1;
            Some((m2, c * &field.from_i64(e as i64)))
        });
        Ok(Poly::from_terms(&self.ring, terms))
    }

    /// Re-sorts the terms into the same variables under another order.
    pub fn to_ring(&self, ring: &Arc<Ring>) -> Poly {
        assert_eq!(ring.nvars(), self.ring.nvars());
        assert_eq!(ring.field(), self.ring.field());
        Poly::from_terms(ring, self.terms.iter().cloned())
    }

    /// Moves the polynomial into `target`, sending variable `i` to variable
    /// `var_map[i]` of the target.
    pub fn embed(&self, target: &Arc<Ring>, var_map: &[usize]) -> Poly {
        assert_eq!(var_map.len(), self.ring.nvars());
        let n = target.nvars();
        let terms = self.terms.iter().map(|(m, c)| {
            let mut e = vec![0u32; n];
            for (i, &k) in m.exponents().iter().enumerate() {
                e[var_map[i]] += k;
            }
            (Monomial::new(e), c.clone())
        });
        Poly::from_terms(target, terms)
    }

    /// Substitutes `images[i]` for variable `i`. All images share one ring,
    /// which becomes the ring of the result.
    pub fn substitute(&self, images: &[Poly]) -> Poly {
        assert_eq!(images.len(), self.ring.nvars());
        let target = match images.first() {
            Some(p) => p.ring.clone(),
            None => return self.clone(),
        };
        let mut powers: Vec<Vec<Poly>> = images.iter().map(|p| vec![Poly::one(&target), p.clone()]).collect();
        let mut out = Poly::zero(&target);
        for (m, c) in &self.terms {
            let mut t = Poly::constant(&target, c.clone());
            for (i, &e) in m.exponents().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                while powers[i].len() <= e as usize {
                    let next = &powers[i][powers[i].len() - 1] * &images[i];
                    powers[i].push(next);
                }
                t = &t * &powers[i][e as usize];
            }
            out = &out + &t;
        }
        out
    }

    /// Drops every term of total degree above `max_degree`.
    pub fn truncate_degree(&self, max_degree: u32) -> Poly {
        Poly {
            ring: self.ring.clone(),
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.degree() <= max_degree)
                .cloned()
                .collect(),
        }
    }

    /// Terms listed in degrevlex-descending order regardless of the ring
    /// order; used for printing.
    fn display_terms(&self) -> Vec<&(Monomial, FieldElem)> {
        let mut v: Vec<_> = self.terms.iter().collect();
        if self.ring.order() != MonomialOrder::Degrevlex {
            v.sort_by(|a, b| MonomialOrder::Degrevlex.cmp(&b.0, &a.0));
        }
        v
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let names = self.ring.vars();
        for (k, (m, c)) in self.display_terms().into_iter().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            if k == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            if m.is_one() {
                write!(f, "{abs}")?;
            } else if abs.is_one() {
                write!(f, "{}", m.display_with(names))?;
            } else {
                write!(f, "{abs}*{}", m.display_with(names))?;
            }
        }
        Ok(())
    }
}

impl Add for &Poly {
    type Output = Poly;
    /// Panics when the rings differ; use [`Poly::checked_add`] otherwise.
    fn add(self, rhs: &Poly) -> Poly {
        self.checked_add(rhs).expect("ring mismatch in addition")
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        self.checked_sub(rhs).expect("ring mismatch in subtraction")
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        self.checked_mul(rhs).expect("ring mismatch in multiplication")
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

impl Add for Poly {
    type Output = Poly;
    fn add(self, rhs: Poly) -> Poly {
        &self + &rhs
    }
}

impl Sub for Poly {
    type Output = Poly;
    fn sub(self, rhs: Poly) -> Poly {
        &self - &rhs
    }
}

impl Mul for Poly {
    type Output = Poly;
    fn mul(self, rhs: Poly) -> Poly {
        &self * &rhs
    }
}

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{parse_poly, Field};

    fn ring(field: Field) -> Arc<Ring> {
        Ring::with_vars(&["x", "y"], field, MonomialOrder::Degrevlex)
    }

    fn p(r: &Arc<Ring>, s: &str) -> Poly {
        parse_poly(r, s).unwrap()
    }

    #[test]
    fn additive_inverse_and_disjoint_support() {
        let r = ring(Field::Rational);
        assert!((&p(&r, "x") + &p(&r, "-x")).is_zero());
        assert_eq!(&p(&r, "x^2+1") + &p(&r, "y"), p(&r, "x^2+y+1"));
    }

    #[test]
    fn characteristic_two_cancels() {
        let r = ring(Field::Prime(2));
        assert!((&p(&r, "x") + &p(&r, "x")).is_zero());
    }

    #[test]
    fn products() {
        let r = ring(Field::Rational);
        assert_eq!(&p(&r, "x+y") * &p(&r, "x-y"), p(&r, "x^2-y^2"));
        let q = p(&r, "3*x*y - 2/5*y^3 + 7");
        assert_eq!(&q * &Poly::one(&r), q);
        assert!((&q * &Poly::zero(&r)).is_zero());
    }

    #[test]
    fn derivatives() {
        let r = ring(Field::Rational);
        let f = p(&r, "x^3+y^2");
        assert_eq!(f.partial_derivative(0).unwrap(), p(&r, "3*x^2"));
        assert_eq!(f.partial_derivative(1).unwrap(), p(&r, "2*y"));
        assert!(matches!(f.partial_derivative(2), Err(PolyError::VariableIndex { .. })));
        let r3 = ring(Field::Prime(3));
        assert!(p(&r3, "x^3").partial_derivative(0).unwrap().is_zero());
    }

    #[test]
    fn ring_mismatch_is_an_error() {
        let a = ring(Field::Rational);
        let b = Ring::with_vars(&["x", "z"], Field::Rational, MonomialOrder::Degrevlex);
        assert!(matches!(
            Poly::var(&a, 0).checked_add(&Poly::var(&b, 0)),
            Err(PolyError::RingMismatch { .. })
        ));
    }

    #[test]
    fn display_uses_degrevlex_even_for_local_rings() {
        let r = Ring::with_vars(&["x", "y"], Field::Rational, MonomialOrder::Negdegrevlex);
        let f = p(&r, "y^2 + x^3 - 3/2*x*y");
        assert_eq!(f.leading_monomial().unwrap().exponents(), &[1, 1]);
        assert_eq!(f.to_string(), "x^3 - 3/2*x*y + y^2");
    }

    #[test]
    fn substitution() {
        let r = ring(Field::Rational);
        let f = p(&r, "x^2 + y");
        let g = f.substitute(&[p(&r, "x+y"), p(&r, "1")]);
        assert_eq!(g, p(&r, "x^2 + 2*x*y + y^2 + 1"));
    }
}
