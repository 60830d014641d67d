//! Tjurina numbers by plain linear algebra over ℚ, sharing no code with the
//! library's standard-basis engine.
//!
//! For an isolated singularity the local Tjurina ideal `I = (f, ∂f)`
//! contains a power of the maximal ideal, and `dim O/(I + m^N)` is the
//! codimension of the span of the truncated multiples `m·g`, `deg m < N`,
//! inside the polynomials of degree `< N`. Once two consecutive values
//! agree, `m^N ⊆ I + m^{N+1}` and Nakayama gives `m^N ⊆ I`.

use std::collections::{BTreeMap, HashMap};

use num_rational::BigRational;
use num_traits::{One, Zero};
use versal_kit::poly::{FieldElem, Poly};

type Sparse = BTreeMap<Vec<u32>, BigRational>;

fn to_sparse(p: &Poly) -> Sparse {
    p.terms()
        .iter()
        .map(|(m, c)| {
            let FieldElem::Rational(q) = c else { panic!("oracle works over Q") };
            (m.exponents().to_vec(), q.clone())
        })
        .collect()
}

fn derivative(p: &Sparse, i: usize) -> Sparse {
    let mut out = Sparse::new();
    for (e, c) in p {
        if e[i] == 0 {
            continue;
        }
        let mut e2 = e.clone();
        e2[i] -= 1;
        out.insert(e2, c * BigRational::from_integer(e[i].into()));
    }
    out
}

fn monomials_below(n: usize, d: u32) -> Vec<Vec<u32>> {
    fn rec(n: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        for e in 0..=left {
            cur.push(e);
            rec(n, left - e, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if d == 0 {
        return out;
    }
    rec(n, d - 1, &mut Vec::new(), &mut out);
    out
}

fn rank(mut rows: Vec<Vec<BigRational>>) -> usize {
    let ncols = rows.first().map_or(0, |r| r.len());
    let mut r = 0;
    for col in 0..ncols {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][col].is_zero()) else { continue };
        rows.swap(r, p);
        let inv = BigRational::one() / rows[r][col].clone();
        for x in rows[r].iter_mut() {
            *x = &*x * &inv;
        }
        let pivot = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || row[col].is_zero() {
                continue;
            }
            let f = row[col].clone();
            for (x, y) in row.iter_mut().zip(&pivot) {
                *x = &*x - &(&f * y);
            }
        }
        r += 1;
    }
    r
}

fn codim_truncated(gens: &[Sparse], nvars: usize, n: u32) -> usize {
    let monos = monomials_below(nvars, n);
    let index: HashMap<&Vec<u32>, usize> = monos.iter().enumerate().map(|(i, m)| (m, i)).collect();
    let mut rows = Vec::new();
    for g in gens {
        for m in &monos {
            let mut row = vec![BigRational::zero(); monos.len()];
            let mut any = false;
            for (e, c) in g {
                let prod: Vec<u32> = e.iter().zip(m).map(|(a, b)| a + b).collect();
                if let Some(&k) = index.get(&prod) {
                    row[k] = &row[k] + c;
                    any = true;
                }
            }
            if any {
                rows.push(row);
            }
        }
    }
    monos.len() - rank(rows)
}

/// `dim_ℚ O/(f, ∂f/∂x_i)` for a hypersurface with an isolated singularity.
pub fn tjurina(f: &Poly) -> usize {
    let nvars = f.ring().nvars();
    let f = to_sparse(f);
    let mut gens = vec![f.clone()];
    gens.extend((0..nvars).map(|i| derivative(&f, i)));
    gens.retain(|g| !g.is_empty());
    let mut prev = codim_truncated(&gens, nvars, 1);
    for n in 2..40 {
        let cur = codim_truncated(&gens, nvars, n);
        if cur == prev {
            return cur;
        }
        prev = cur;
    }
    panic!("oracle did not stabilize; singularity not isolated?");
}
