use super::hom::{hom_space, Ext1Coordinates, HomSpace};
use super::presented::{combine, unit_vec, vec_add, zero_vec, ModuleHom, PresentedModule, SubmoduleCoordinates};
use super::ModuleError;
use crate::linalg::Matrix;
use crate::poly::{FieldElem, Poly};
use crate::standard_basis::Lifter;

/// A short exact sequence `0 → G --ι--> E --κ--> F → 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Extension {
    iota: ModuleHom,
    kappa: ModuleHom,
}

impl Extension {
    /// Builds and certifies an extension.
    pub fn new(iota: ModuleHom, kappa: ModuleHom) -> Result<Self, ModuleError> {
        if iota.target() != kappa.source() {
            return Err(ModuleError::EndpointMismatch("ι must land in the source of κ"));
        }
        let e = Extension { iota, kappa };
        e.certify()?;
        Ok(e)
    }

    /// `0 → G → G ⊕ F → F → 0`.
    pub fn split(f: &PresentedModule, g: &PresentedModule) -> Self {
        let ring = g.ring();
        let (gr, fr) = (g.rank(), f.rank());
        let middle = g.direct_sum(f);
        let iota = (0..gr).map(|j| unit_vec(ring, gr + fr, j)).collect();
        let kappa = (0..gr)
            .map(|_| zero_vec(ring, fr))
            .chain((0..fr).map(|i| unit_vec(ring, fr, i)))
            .collect();
        Extension {
            iota: ModuleHom::new_unchecked(g, &middle, iota),
            kappa: ModuleHom::new_unchecked(&middle, f, kappa),
        }
    }

    /// `G`.
    pub fn sub(&self) -> &PresentedModule {
        self.iota.source()
    }

    /// `E`.
    pub fn middle(&self) -> &PresentedModule {
        self.iota.target()
    }

    /// `F`.
    pub fn quotient(&self) -> &PresentedModule {
        self.kappa.target()
    }

    pub fn iota(&self) -> &ModuleHom {
        &self.iota
    }

    pub fn kappa(&self) -> &ModuleHom {
        &self.kappa
    }

    /// Checks well-definedness, `κ∘ι = 0`, injectivity of `ι`,
    /// surjectivity of `κ` and `ker κ ⊆ im ι`.
    pub fn certify(&self) -> Result<(), ModuleError> {
        if !self.iota.is_well_defined() || !self.kappa.is_well_defined() {
            return Err(ModuleError::NotWellDefined);
        }
        if !self.iota.then(&self.kappa).is_zero() {
            return Err(ModuleError::NotExact("κ∘ι is not zero"));
        }
        if !self.iota.is_injective() {
            return Err(ModuleError::NotExact("ι is not injective"));
        }
        if !self.kappa.is_surjective() {
            return Err(ModuleError::NotExact("κ is not surjective"));
        }
        let image = self.middle().quotient(self.iota.columns());
        if !self.kappa.kernel_generators().iter().all(|k| image.is_zero_element(k)) {
            return Err(ModuleError::NotExact("ker κ is larger than im ι"));
        }
        Ok(())
    }

    fn same_endpoints(&self, other: &Extension) -> Result<(), ModuleError> {
        if self.sub() != other.sub() || self.quotient() != other.quotient() {
            return Err(ModuleError::EndpointMismatch("extensions of different modules"));
        }
        Ok(())
    }

    /// Replaces the middle module by a pruned isomorphic copy.
    pub fn pruned(&self) -> Extension {
        let p = self.middle().prune();
        Extension {
            iota: self.iota.retarget(&p.module, &p.to_new),
            kappa: self.kappa.resource(&p.module, &p.to_old),
        }
    }

    /// Coordinates of the class in `Ext¹(F, G)` (the boundary of `id_G`),
    /// available when `G` is finite dimensional.
    pub fn class_coordinates(&self) -> Option<Vec<FieldElem>> {
        let coords = Ext1Coordinates::new(self.quotient(), self.sub())?;
        let f = self.quotient();
        let lift = SubmoduleCoordinates::new(f, self.kappa.columns());
        let lifts: Vec<Vec<Poly>> = (0..f.rank())
            .map(|i| lift.coordinates(&f.generator(i)).expect("κ is surjective"))
            .collect();
        let into_g = SubmoduleCoordinates::new(self.middle(), self.iota.columns());
        let values: Vec<Vec<Poly>> = f
            .relations()
            .iter()
            .map(|k| {
                let w = combine(self.middle().ring(), self.middle().rank(), k, &lifts);
                into_g.coordinates(&w).expect("exactness")
            })
            .collect();
        Some(coords.class_of(&values))
    }

    pub fn is_split(&self) -> Option<ModuleHom> {
        is_split(self)
    }
}

/// Data of the sum construction kept for building isomorphisms.
struct SumData {
    ext: Extension,
    a_coords: SubmoduleCoordinates,
    to_new: Vec<Vec<Poly>>,
}

impl SumData {
    /// Class in the sum of a pair `(e₁, e₂)` with `κ₁e₁ = κ₂e₂`.
    fn class_of(&self, pair: &[Poly]) -> Vec<Poly> {
        let c = self.a_coords.coordinates(pair).expect("pair lies in the fibre product");
        let m = self.ext.middle();
        combine(m.ring(), m.rank(), &c, &self.to_new)
    }
}

fn sum_data(e1: &Extension, e2: &Extension) -> Result<SumData, ModuleError> {
    e1.same_endpoints(e2)?;
    let g = e1.sub();
    let f = e1.quotient();
    let ring = g.ring();
    let (m1, m2) = (e1.middle().rank(), e2.middle().rank());
    let d = e1.middle().direct_sum(e2.middle());
    let cols: Vec<Vec<Poly>> = e1
        .kappa
        .columns()
        .iter()
        .cloned()
        .chain(e2.kappa.columns().iter().map(|c| c.iter().map(|p| -p).collect()))
        .collect();
    let diff = ModuleHom::new_unchecked(&d, f, cols);
    let a_gens = diff.kernel_generators();
    let a_coords = SubmoduleCoordinates::new(&d, &a_gens);
    let a = d.submodule(&a_gens);
    let pair = |x: &[Poly], y: &[Poly]| -> Vec<Poly> {
        let mut v = x.to_vec();
        v.extend(y.iter().cloned());
        v
    };
    let b: Vec<Vec<Poly>> = (0..g.rank())
        .map(|j| {
            let y = g.generator(j);
            let neg: Vec<Poly> = e2.iota.apply(&y).iter().map(|p| -p).collect();
            a_coords
                .coordinates(&pair(&e1.iota.apply(&y), &neg))
                .expect("antidiagonal lies in the fibre product")
        })
        .collect();
    let sum = a.quotient(&b);
    let iota: Vec<Vec<Poly>> = (0..g.rank())
        .map(|j| {
            let y = g.generator(j);
            a_coords
                .coordinates(&pair(&e1.iota.apply(&y), &zero_vec(ring, m2)))
                .expect("ι₁ lies in the fibre product")
        })
        .collect();
    let kappa: Vec<Vec<Poly>> = a_gens.iter().map(|v| e1.kappa.apply(&v[..m1])).collect();
    let raw = Extension {
        iota: ModuleHom::new_unchecked(g, &sum, iota),
        kappa: ModuleHom::new_unchecked(&sum, f, kappa),
    };
    let p = sum.prune();
    let ext = Extension {
        iota: raw.iota.retarget(&p.module, &p.to_new),
        kappa: raw.kappa.resource(&p.module, &p.to_old),
    };
    Ok(SumData {
        ext,
        a_coords,
        to_new: p.to_new,
    })
}

/// Baer sum: the fibre product over `F` modulo the antidiagonal image of `G`.
pub fn baer_sum(e1: &Extension, e2: &Extension) -> Result<Extension, ModuleError> {
    Ok(sum_data(e1, e2)?.ext)
}

/// `(E, −ι, κ)`.
pub fn opposite(e: &Extension) -> Extension {
    Extension {
        iota: e.iota.neg(),
        kappa: e.kappa.clone(),
    }
}

/// `g_*E = (G' ⊕ E) / {(g(y), −ι(y))}` for `g: G → G'`.
pub fn pushforward(g: &ModuleHom, e: &Extension) -> Result<Extension, ModuleError> {
    if g.source() != e.sub() {
        return Err(ModuleError::EndpointMismatch("g must start at the submodule of E"));
    }
    let gp = g.target();
    let ring = gp.ring();
    let (n, m) = (gp.rank(), e.middle().rank());
    let d = gp.direct_sum(e.middle());
    let extra: Vec<Vec<Poly>> = (0..e.sub().rank())
        .map(|j| {
            let y = e.sub().generator(j);
            let mut v = g.apply(&y);
            v.extend(e.iota.apply(&y).iter().map(|p| -p));
            v
        })
        .collect();
    let middle = d.quotient(&extra);
    let iota = (0..n).map(|a| unit_vec(ring, n + m, a)).collect();
    let kappa = (0..n)
        .map(|_| e.quotient().zero_element())
        .chain(e.kappa.columns().iter().cloned())
        .collect();
    let raw = Extension {
        iota: ModuleHom::new_unchecked(gp, &middle, iota),
        kappa: ModuleHom::new_unchecked(&middle, e.quotient(), kappa),
    };
    Ok(raw.pruned())
}

/// `f^*E = {(x', e) : f(x') = κ(e)} ⊆ F' ⊕ E` for `f: F' → F`.
pub fn pullback(f: &ModuleHom, e: &Extension) -> Result<Extension, ModuleError> {
    if f.target() != e.quotient() {
        return Err(ModuleError::EndpointMismatch("f must end at the quotient of E"));
    }
    let fp = f.source();
    let ring = fp.ring();
    let n = fp.rank();
    let d = fp.direct_sum(e.middle());
    let cols: Vec<Vec<Poly>> = f
        .columns()
        .iter()
        .cloned()
        .chain(e.kappa.columns().iter().map(|c| c.iter().map(|p| -p).collect()))
        .collect();
    let diff = ModuleHom::new_unchecked(&d, e.quotient(), cols);
    let a_gens = diff.kernel_generators();
    let coords = SubmoduleCoordinates::new(&d, &a_gens);
    let middle = d.submodule(&a_gens);
    let iota = (0..e.sub().rank())
        .map(|j| {
            let mut v = zero_vec(ring, n);
            v.extend(e.iota.apply(&e.sub().generator(j)));
            coords.coordinates(&v).expect("ι lies in the fibre product")
        })
        .collect();
    let kappa = a_gens.iter().map(|v| v[..n].to_vec()).collect();
    let raw = Extension {
        iota: ModuleHom::new_unchecked(e.sub(), &middle, iota),
        kappa: ModuleHom::new_unchecked(&middle, fp, kappa),
    };
    Ok(raw.pruned())
}

/// A retraction `s: E → G` with `s∘ι = id_G`, if the extension splits.
pub fn is_split(e: &Extension) -> Option<ModuleHom> {
    let g = e.sub();
    let ring = g.ring();
    let gr = g.rank();
    let identity: Vec<Vec<Poly>> = (0..gr).map(|j| g.generator(j)).collect();
    match hom_space(e.middle(), g) {
        HomSpace::Basis(basis) => {
            // Σ c_k (h_k ∘ ι) = id, coordinatewise on the generators of G
            let field = ring.field();
            let vectorize = |cols: &[Vec<Poly>]| -> Vec<FieldElem> {
                cols.iter().flat_map(|c| g.coordinates(c).expect("finite")).collect()
            };
            let target = vectorize(&identity);
            if target.is_empty() {
                return Some(ModuleHom::zero(e.middle(), g));
            }
            let columns: Vec<Vec<FieldElem>> = basis.iter().map(|h| vectorize(e.iota.then(h).columns())).collect();
            let sol = Matrix::from_columns(field, &columns, target.len()).solve(&target)?;
            let mut s = ModuleHom::zero(e.middle(), g);
            for (h, c) in basis.iter().zip(&sol) {
                if !c.is_zero() {
                    s = s.add(&h.scale(c));
                }
            }
            Some(s)
        }
        HomSpace::Module { generators, .. } => {
            let flat = |cols: &[Vec<Poly>]| -> Vec<Poly> { cols.iter().flatten().cloned().collect() };
            let mut vectors: Vec<Vec<Poly>> = generators.iter().map(|h| flat(e.iota.then(h).columns())).collect();
            for j in 0..gr {
                for rel in g.relations() {
                    let mut v = zero_vec(ring, gr * gr);
                    v[j * gr..(j + 1) * gr].clone_from_slice(rel);
                    vectors.push(v);
                }
            }
            let c = Lifter::new(ring, gr * gr, &vectors).lift(&flat(&identity))?;
            let mut cols = vec![g.zero_element(); e.middle().rank()];
            for (h, p) in generators.iter().zip(&c) {
                for (acc, col) in cols.iter_mut().zip(h.columns()) {
                    *acc = vec_add(acc, &col.iter().map(|x| p * x).collect::<Vec<_>>());
                }
            }
            Some(ModuleHom::new_unchecked(e.middle(), g, cols))
        }
    }
}

/// Whether `f: E₁ → E₂` is a homomorphism of extensions: compatible with
/// `ι` and `κ` on both sides.
pub fn is_extension_morphism(e1: &Extension, e2: &Extension, f: &ModuleHom) -> bool {
    f.source() == e1.middle()
        && f.target() == e2.middle()
        && f.is_well_defined()
        && e1.iota.then(f).agrees_with(&e2.iota)
        && f.then(&e2.kappa).agrees_with(&e1.kappa)
}

/// An isomorphism of extensions `E₁ → E₂`, built from a splitting `r` of
/// `E₁ − E₂` as `f(e₁) = e₂ + ι₂(r[e₁, e₂])` where `κ₂e₂ = κ₁e₁`.
pub fn extensions_isomorphic(e1: &Extension, e2: &Extension) -> Result<Option<ModuleHom>, ModuleError> {
    let data = sum_data(e1, &opposite(e2))?;
    let Some(r) = is_split(&data.ext) else {
        return Ok(None);
    };
    let f_mod = e1.quotient();
    let through_k2 = SubmoduleCoordinates::new(f_mod, e2.kappa.columns());
    let cols: Vec<Vec<Poly>> = (0..e1.middle().rank())
        .map(|i| {
            let e1i = e1.middle().generator(i);
            let x = e1.kappa.apply(&e1i);
            let e2v = through_k2.coordinates(&x).expect("κ₂ is surjective");
            let mut pair = e1i.clone();
            pair.extend(e2v.iter().cloned());
            let y = r.apply(&data.class_of(&pair));
            vec_add(&e2v, &e2.iota.apply(&y))
        })
        .collect();
    let f = ModuleHom::new_unchecked(e1.middle(), e2.middle(), cols);
    assert!(is_extension_morphism(e1, e2, &f), "constructed map is not a morphism of extensions");
    assert!(f.is_isomorphism(), "morphism of extensions is not invertible");
    Ok(Some(f))
}
