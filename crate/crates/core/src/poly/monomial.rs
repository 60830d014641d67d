use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

/// Exponent vector of a monomial. The length always equals the number of
/// variables of the ambient ring.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn new(exponents: Vec<u32>) -> Self {
        Monomial(exponents)
    }

    pub fn one(nvars: usize) -> Self {
        Monomial(vec![0; nvars])
    }

    pub fn var(nvars: usize, index: usize) -> Self {
        let mut e = vec![0; nvars];
        e[index] = 1;
        Monomial(e)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn nvars(&self) -> usize {
        self.0.len()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        debug_assert_eq!(self.0.len(), other.0.len());
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// `other / self`, when `self` divides `other`.
    pub fn quotient_of(&self, other: &Monomial) -> Option<Monomial> {
        if !self.divides(other) {
            return None;
        }
        Some(Monomial(other.0.iter().zip(&self.0).map(|(a, b)| a - b).collect()))
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| *a.max(b)).collect())
    }

    pub fn is_coprime(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| *a == 0 || *b == 0)
    }

    /// Index of the variable when the monomial is a pure power `x_i^k`, k > 0.
    pub fn pure_power_var(&self) -> Option<usize> {
        let mut found = None;
        for (i, &e) in self.0.iter().enumerate() {
            if e > 0 {
                if found.is_some() {
                    return None;
                }
                found = Some(i);
            }
        }
        found
    }

    pub(crate) fn exponents_mut(&mut self) -> &mut Vec<u32> {
        &mut self.0
    }

    /// Renders with the given variable names, `1` for the unit monomial.
    pub fn display_with<'a>(&'a self, names: &'a [String]) -> MonomialDisplay<'a> {
        MonomialDisplay { mono: self, names }
    }
}

pub struct MonomialDisplay<'a> {
    mono: &'a Monomial,
    names: &'a [String],
}

impl fmt::Display for MonomialDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.mono.is_one() {
            return write!(f, "1");
        }
        let mut first = true;
        for (i, &e) in self.mono.0.iter().enumerate() {
            if e == 0 {
                continue;
            }
            if !first {
                write!(f, "*")?;
            }
            first = false;
            write!(f, "{}", self.names[i])?;
            if e > 1 {
                write!(f, "^{e}")?;
            }
        }
        Ok(())
    }
}

/// Monomial orderings. `Greater` from [`MonomialOrder::cmp`] means "leads".
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MonomialOrder {
    /// Graded reverse lexicographic, global (`1 < x_i`).
    Degrevlex,
    /// Lexicographic with `x_1 > x_2 > ...`, global.
    Lex,
    /// Negative graded reverse lexicographic, local (`x_i < 1`): lower total
    /// degree leads, ties broken by reverse lex exactly as in degrevlex.
    Negdegrevlex,
}

impl MonomialOrder {
    pub fn is_global(&self) -> bool {
        !matches!(self, MonomialOrder::Negdegrevlex)
    }

    pub fn cmp(&self, a: &Monomial, b: &Monomial) -> Ordering {
        match self {
            MonomialOrder::Lex => a.0.cmp(&b.0),
            MonomialOrder::Degrevlex => a.degree().cmp(&b.degree()).then_with(|| revlex(a, b)),
            MonomialOrder::Negdegrevlex => b.degree().cmp(&a.degree()).then_with(|| revlex(a, b)),
        }
    }
}

// The monomial with the smaller exponent in the last differing variable is
// the larger one.
fn revlex(a: &Monomial, b: &Monomial) -> Ordering {
    for (x, y) in a.0.iter().zip(&b.0).rev() {
        if x != y {
            return y.cmp(x);
        }
    }
    Ordering::Equal
}

impl fmt::Display for MonomialOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            MonomialOrder::Degrevlex => "degrevlex",
            MonomialOrder::Lex => "lex",
            MonomialOrder::Negdegrevlex => "negdegrevlex",
        };
        write!(f, "{s}")
    }
}

/// All monomials in `nvars` variables of total degree exactly `d`, in
/// degrevlex-descending order.
pub fn monomials_of_degree(nvars: usize, d: u32) -> Vec<Monomial> {
    let mut out = Vec::new();
    let mut cur = vec![0u32; nvars];
    fill(&mut out, &mut cur, 0, d);
    out.sort_by(|a, b| MonomialOrder::Degrevlex.cmp(b, a));
    out
}

fn fill(out: &mut Vec<Monomial>, cur: &mut Vec<u32>, idx: usize, remaining: u32) {
    if cur.is_empty() {
        if remaining == 0 {
            out.push(Monomial(Vec::new()));
        }
        return;
    }
    if idx == cur.len() - 1 {
        cur[idx] = remaining;
        out.push(Monomial(cur.clone()));
        cur[idx] = 0;
        return;
    }
    for e in 0..=remaining {
        cur[idx] = e;
        fill(out, cur, idx + 1, remaining - e);
    }
    cur[idx] = 0;
}

/// All monomials of total degree at most `d`.
pub fn monomials_up_to_degree(nvars: usize, d: u32) -> Vec<Monomial> {
    (0..=d).flat_map(|k| monomials_of_degree(nvars, k)).collect()
}
