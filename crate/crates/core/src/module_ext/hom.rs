use super::presented::{is_zero_vec, unit_vec, zero_vec, ModuleHom, PresentedModule};
use super::Dim;
use crate::linalg::Matrix;
use crate::poly::{Field, FieldElem, Poly};
use crate::standard_basis::{module_syzygies, syzygy_generators};

/// `Hom(M, N)`: a κ-basis when `N` is finite dimensional, otherwise
/// generators of the Hom module with their relations.
#[derive(Debug, Clone)]
pub enum HomSpace {
    Basis(Vec<ModuleHom>),
    Module {
        generators: Vec<ModuleHom>,
        presentation: PresentedModule,
    },
}

impl HomSpace {
    pub fn generators(&self) -> &[ModuleHom] {
        match self {
            HomSpace::Basis(b) => b,
            HomSpace::Module { generators, .. } => generators,
        }
    }

    pub fn dimension(&self) -> Dim {
        match self {
            HomSpace::Basis(b) => Dim::Finite(b.len()),
            HomSpace::Module { presentation, .. } => presentation.dimension(),
        }
    }
}

/// Block matrix of `(φ_j) ↦ (Σ_j d[l][j] φ_j)_l` on `N^{cols} → N^{rows}`,
/// where `d[l]` is the `l`-th column vector of length `cols`.
fn induced_matrix(n: &PresentedModule, d: &[Vec<Poly>], cols: usize) -> Matrix {
    let dim = n.kappa_basis().expect("finite").len();
    let rows = d.len();
    let mut m = Matrix::zeros(n.ring().field(), rows * dim, cols * dim);
    for (l, col) in d.iter().enumerate() {
        for (j, p) in col.iter().enumerate() {
            if p.is_zero() {
                continue;
            }
            let a = n.action_matrix(p).expect("finite");
            for r in 0..dim {
                for c in 0..dim {
                    m.set(l * dim + r, j * dim + c, a.get(r, c).clone());
                }
            }
        }
    }
    m
}

fn hom_from_coordinates(m: &PresentedModule, n: &PresentedModule, v: &[FieldElem]) -> ModuleHom {
    let dim = n.kappa_basis().expect("finite").len();
    let cols = (0..m.rank()).map(|i| n.from_coordinates(&v[i * dim..(i + 1) * dim])).collect();
    ModuleHom::new_unchecked(m, n, cols)
}

/// Matrices `S` (given as `m` columns in `R^n`) with `S·k ∈ L` for every
/// relation `k` of `M`, where `L` are the relations of `N`.
fn hom_module_generators(m: &PresentedModule, n: &PresentedModule) -> Vec<Vec<Poly>> {
    let ring = m.ring();
    let (mr, nr) = (m.rank(), n.rank());
    let rels = m.relations();
    let s = rels.len();
    if s == 0 {
        return (0..mr * nr).map(|k| unit_vec(ring, mr * nr, k)).collect();
    }
    let mut images: Vec<Vec<Poly>> = Vec::new();
    for i in 0..mr {
        for a in 0..nr {
            let mut v = zero_vec(ring, nr * s);
            for (l, k) in rels.iter().enumerate() {
                v[l * nr + a] = k[i].clone();
            }
            images.push(v);
        }
    }
    for l in 0..s {
        for rel in n.relations() {
            let mut v = zero_vec(ring, nr * s);
            v[l * nr..(l + 1) * nr].clone_from_slice(rel);
            images.push(v);
        }
    }
    syzygy_generators(ring, nr * s, &images)
        .into_iter()
        .map(|mut v| {
            v.truncate(mr * nr);
            v
        })
        .filter(|v| !is_zero_vec(v))
        .collect()
}

fn split_columns(v: &[Poly], mr: usize, nr: usize) -> Vec<Vec<Poly>> {
    (0..mr).map(|i| v[i * nr..(i + 1) * nr].to_vec()).collect()
}

pub fn hom_space(m: &PresentedModule, n: &PresentedModule) -> HomSpace {
    assert!(crate::poly::same_ring(m.ring(), n.ring()), "modules over different rings");
    if n.kappa_basis().is_some() {
        let dim = n.kappa_basis().unwrap().len();
        let mat = induced_matrix(n, m.relations(), m.rank());
        let basis = if dim == 0 || m.rank() == 0 {
            Vec::new()
        } else if m.relations().is_empty() {
            (0..m.rank() * dim)
                .map(|k| {
                    let mut v = vec![n.ring().field().zero(); m.rank() * dim];
                    v[k] = n.ring().field().one();
                    hom_from_coordinates(m, n, &v)
                })
                .collect()
        } else {
            mat.nullspace().iter().map(|v| hom_from_coordinates(m, n, v)).collect()
        };
        return HomSpace::Basis(basis);
    }
    let gens = hom_module_generators(m, n);
    let generators: Vec<ModuleHom> = gens
        .iter()
        .map(|v| ModuleHom::new_unchecked(m, n, split_columns(v, m.rank(), n.rank())))
        .collect();
    let presentation = n.power(m.rank()).submodule(&gens);
    HomSpace::Module {
        generators,
        presentation,
    }
}

/// Differentials `d_1, d_2, d_3` of a free resolution of `m`, each given
/// by its columns.
pub fn free_resolution(m: &PresentedModule) -> [Vec<Vec<Poly>>; 3] {
    let ring = m.ring();
    let d1 = m.relations().to_vec();
    let d2 = module_syzygies(ring, m.rank(), &d1);
    let d3 = module_syzygies(ring, d1.len(), &d2);
    [d1, d2, d3]
}

/// κ-dimension of `Ext^i(M, N)` for `i ≤ 2`, from a free resolution of `M`.
pub fn ext_dimension(m: &PresentedModule, n: &PresentedModule, i: usize) -> Dim {
    assert!(i <= 2, "Ext is computed up to degree 2");
    let [d1, d2, d3] = free_resolution(m);
    let ranks = [m.rank(), d1.len(), d2.len(), d3.len()];
    let ds = [&d1, &d2, &d3];
    if ranks[i] == 0 {
        return Dim::Finite(0);
    }
    if let Some(basis) = n.kappa_basis() {
        let dim = basis.len();
        let out_rank = induced_matrix(n, ds[i], ranks[i]).rank();
        let in_rank = if i == 0 { 0 } else { induced_matrix(n, ds[i - 1], ranks[i - 1]).rank() };
        return Dim::Finite(ranks[i] * dim - out_rank - in_rank);
    }
    // Module path: ker(d_{i+1}^*) / im(d_i^*) inside N^{ranks[i]}.
    let ring = m.ring();
    let nr = n.rank();
    let here = n.power(ranks[i]);
    let next = n.power(ranks[i + 1]);
    let dual = |d: &[Vec<Poly>], from: usize| -> Vec<Vec<Poly>> {
        // image of the generator e_a in block j of N^{from}
        let mut cols = Vec::new();
        for j in 0..from {
            for a in 0..nr {
                let mut v = zero_vec(ring, nr * d.len());
                for (l, col) in d.iter().enumerate() {
                    v[l * nr + a] = col[j].clone();
                }
                cols.push(v);
            }
        }
        cols
    };
    let out = ModuleHom::new_unchecked(&here, &next, dual(ds[i], ranks[i]));
    let kernel = out.kernel_generators();
    let image = if i == 0 { Vec::new() } else { dual(ds[i - 1], ranks[i - 1]) };
    let q = kernel.len();
    let mut all = kernel;
    all.extend(image);
    all.extend(here.relations().iter().cloned());
    let rels: Vec<Vec<Poly>> = syzygy_generators(ring, here.rank(), &all)
        .into_iter()
        .map(|mut v| {
            v.truncate(q);
            v
        })
        .collect();
    PresentedModule::new(ring, q, rels).dimension()
}

/// Quotient `ker / im` of two κ-linear maps with a fixed complement basis,
/// used to give classes in `Ext¹` coordinates.
#[derive(Debug, Clone)]
pub(crate) struct Subquotient {
    image: Vec<Vec<FieldElem>>,
    complement: Vec<Vec<FieldElem>>,
}

impl Subquotient {
    pub fn new(field: Field, kernel: Vec<Vec<FieldElem>>, image: Vec<Vec<FieldElem>>, len: usize) -> Self {
        let mut chosen_image = Vec::new();
        let mut span: Vec<Vec<FieldElem>> = Vec::new();
        let mut rank = 0;
        for v in &image {
            span.push(v.clone());
            let r = Matrix::from_columns(field, &span, len).rank();
            if r > rank {
                rank = r;
                chosen_image.push(v.clone());
            } else {
                span.pop();
            }
        }
        let mut complement = Vec::new();
        for v in kernel {
            span.push(v.clone());
            let r = Matrix::from_columns(field, &span, len).rank();
            if r > rank {
                rank = r;
                complement.push(v);
            } else {
                span.pop();
            }
        }
        Subquotient {
            image: chosen_image,
            complement,
        }
    }

    #[cfg(test)]
    pub fn dimension(&self) -> usize {
        self.complement.len()
    }

    /// Coordinates on the complement of a vector in the kernel.
    pub fn coordinates(&self, v: &[FieldElem]) -> Vec<FieldElem> {
        let field = v[0].field();
        let mut cols = self.image.clone();
        cols.extend(self.complement.iter().cloned());
        let sol = Matrix::from_columns(field, &cols, v.len()).solve(v).expect("vector lies in the kernel");
        sol[self.image.len()..].to_vec()
    }
}

/// `Ext¹(F, G)` for finite dimensional `G`, with coordinates for classes
/// given as cocycles `R^{s} → G` on the relations of `F`.
#[derive(Debug, Clone)]
pub(crate) struct Ext1Coordinates {
    pub g: PresentedModule,
    pub quotient: Subquotient,
}

impl Ext1Coordinates {
    pub fn new(f: &PresentedModule, g: &PresentedModule) -> Option<Self> {
        let basis = g.kappa_basis()?;
        let dim = basis.len();
        let [d1, d2, _] = free_resolution(f);
        let s = d1.len();
        let len = s * dim;
        if len == 0 {
            return Some(Ext1Coordinates {
                g: g.clone(),
                quotient: Subquotient::new(g.ring().field(), Vec::new(), Vec::new(), 0),
            });
        }
        let kernel = if d2.is_empty() {
            (0..len)
                .map(|k| {
                    let mut v = vec![g.ring().field().zero(); len];
                    v[k] = g.ring().field().one();
                    v
                })
                .collect()
        } else {
            induced_matrix(g, &d2, s).nullspace()
        };
        let into = induced_matrix(g, &d1, f.rank());
        let image = (0..into.cols()).map(|c| into.column(c)).collect();
        Some(Ext1Coordinates {
            g: g.clone(),
            quotient: Subquotient::new(g.ring().field(), kernel, image, len),
        })
    }

    #[cfg(test)]
    pub fn dimension(&self) -> usize {
        self.quotient.dimension()
    }

    /// Coordinates of the cocycle whose value on the `l`-th relation is
    /// `values[l] ∈ G`.
    pub fn class_of(&self, values: &[Vec<Poly>]) -> Vec<FieldElem> {
        let mut v = Vec::new();
        for x in values {
            v.extend(self.g.coordinates(x).expect("finite"));
        }
        if v.is_empty() {
            return Vec::new();
        }
        self.quotient.coordinates(&v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{parse_poly, MonomialOrder, Ring};
    use std::sync::Arc;

    fn r() -> Arc<Ring> {
        Ring::with_vars(&["x"], Field::Rational, MonomialOrder::Degrevlex)
    }

    #[test]
    fn hom_examples() {
        let ring = r();
        let p = |s: &str| parse_poly(&ring, s).unwrap();
        let k = PresentedModule::cyclic(&ring, &[p("x")]);
        let k2 = PresentedModule::cyclic(&ring, &[p("x^2")]);
        let free = PresentedModule::free(&ring, 1);
        let h = hom_space(&k, &k);
        assert_eq!(h.dimension(), Dim::Finite(1));
        assert!(h.generators()[0].agrees_with(&ModuleHom::identity(&k)));
        assert_eq!(hom_space(&k, &free).dimension(), Dim::Finite(0));
        assert_eq!(hom_space(&k2, &k).dimension(), Dim::Finite(1));
        assert_eq!(hom_space(&k, &k2).dimension(), Dim::Finite(1));
        assert_eq!(hom_space(&free, &free).dimension(), Dim::Infinite);
    }

    #[test]
    fn ext_examples() {
        let ring = r();
        let p = |s: &str| parse_poly(&ring, s).unwrap();
        let k = PresentedModule::cyclic(&ring, &[p("x")]);
        assert_eq!(ext_dimension(&k, &k, 0), Dim::Finite(1));
        assert_eq!(ext_dimension(&k, &k, 1), Dim::Finite(1));
        assert_eq!(ext_dimension(&k, &k, 2), Dim::Finite(0));
        let free = PresentedModule::free(&ring, 1);
        assert_eq!(ext_dimension(&k, &free, 0), Dim::Finite(0));
        assert_eq!(ext_dimension(&k, &free, 1), Dim::Finite(1));
        assert_eq!(ext_dimension(&free, &free, 1), Dim::Finite(0));
        assert_eq!(ext_dimension(&free, &free, 0), Dim::Infinite);
    }

    #[test]
    fn ext_over_the_plane() {
        let ring = Ring::with_vars(&["x", "y"], Field::Rational, MonomialOrder::Degrevlex);
        let p = |s: &str| parse_poly(&ring, s).unwrap();
        let k = PresentedModule::cyclic(&ring, &[p("x"), p("y")]);
        assert_eq!(ext_dimension(&k, &k, 0), Dim::Finite(1));
        assert_eq!(ext_dimension(&k, &k, 1), Dim::Finite(2));
        assert_eq!(ext_dimension(&k, &k, 2), Dim::Finite(1));
        let c = Ext1Coordinates::new(&k, &k).unwrap();
        assert_eq!(c.dimension(), 2);
    }
}
