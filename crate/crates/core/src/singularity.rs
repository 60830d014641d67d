//! Invariants of an isolated complete intersection singularity at the
//! origin. Everything here is local: quotients are taken in the localization
//! of the polynomial ring at the origin, computed with `negdegrevlex`.

use std::sync::{Arc, OnceLock};

use crate::module_ext::{Dim, ModuleHom, PresentedModule};
use crate::poly::{same_ring, FieldElem, MonomialOrder, Poly, PolyError, Ring};
use crate::standard_basis::{syzygy_generators, Ideal, Lifter, ModuleBasis, ModuleOrder, Staircase};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SingularityError {
    #[error("no equations given")]
    Empty,
    #[error("equation {0} is zero")]
    ZeroEquation(usize),
    #[error("equation {0} does not vanish at the origin")]
    NotAtOrigin(usize),
    #[error("{equations} equations in {vars} variables")]
    TooManyEquations { equations: usize, vars: usize },
    #[error("equations are not a regular sequence at the origin")]
    NotRegularSequence,
    #[error("non-isolated singular locus")]
    NonIsolated,
    #[error("operation needs a hypersurface, got {0} equations")]
    NotHypersurface(usize),
    #[error("tangent level {0} is not one of 0, 1, 2")]
    BadLevel(usize),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// Equations `F_1, …, F_c` in `κ[x_1, …, x_n]`, all vanishing at 0.
#[derive(Debug, Clone)]
pub struct Singularity {
    global: Arc<Ring>,
    local: Arc<Ring>,
    equations: Vec<Poly>,
    t1: OnceLock<Result<TangentData, SingularityError>>,
    t1_lifter: OnceLock<Lifter>,
}

impl Singularity {
    pub fn new(equations: Vec<Poly>) -> Result<Self, SingularityError> {
        let first = equations.first().ok_or(SingularityError::Empty)?;
        let ring = first.ring().clone();
        for (j, f) in equations.iter().enumerate() {
            if !same_ring(f.ring(), &ring) {
                return Err(PolyError::RingMismatch {
                    left: ring.to_string(),
                    right: f.ring().to_string(),
                }
                .into());
            }
            if f.is_zero() {
                return Err(SingularityError::ZeroEquation(j));
            }
            if !f.constant_term().is_zero() {
                return Err(SingularityError::NotAtOrigin(j));
            }
        }
        if equations.len() > ring.nvars() {
            return Err(SingularityError::TooManyEquations {
                equations: equations.len(),
                vars: ring.nvars(),
            });
        }
        let global = ring.with_order(MonomialOrder::Degrevlex);
        let local = ring.with_order(MonomialOrder::Negdegrevlex);
        let equations = equations.iter().map(|f| f.to_ring(&global)).collect();
        Ok(Singularity {
            global,
            local,
            equations,
            t1: OnceLock::new(),
            t1_lifter: OnceLock::new(),
        })
    }

    /// Polynomial ring with `degrevlex`.
    pub fn ring(&self) -> &Arc<Ring> {
        &self.global
    }

    /// Same variables with the local order.
    pub fn local_ring(&self) -> &Arc<Ring> {
        &self.local
    }

    pub fn equations(&self) -> &[Poly] {
        &self.equations
    }

    pub fn codimension(&self) -> usize {
        self.equations.len()
    }

    pub fn is_hypersurface(&self) -> bool {
        self.equations.len() == 1
    }

    fn local_equations(&self) -> Vec<Poly> {
        self.equations.iter().map(|f| f.to_ring(&self.local)).collect()
    }

    /// Whether the syzygies of the equations are generated, in the local
    /// ring, by the Koszul relations `F_j e_i − F_i e_j`.
    pub fn certify_regular(&self) -> bool {
        let c = self.codimension();
        if c == 1 {
            return true;
        }
        let vectors: Vec<Vec<Poly>> = self.equations.iter().map(|f| vec![f.clone()]).collect();
        let syz = syzygy_generators(&self.global, 1, &vectors);
        let koszul = koszul_relations(&self.local_equations());
        let basis = ModuleBasis::compute(&self.local, c, &koszul, ModuleOrder::top(MonomialOrder::Negdegrevlex));
        syz.iter().all(|s| {
            let s: Vec<Poly> = s.iter().map(|p| p.to_ring(&self.local)).collect();
            basis.contains(&s)
        })
    }

    /// Whether the singular locus is isolated at the origin: the local
    /// quotient by the equations and the maximal minors of the Jacobian
    /// matrix is finite dimensional.
    pub fn certify_isolated(&self) -> Result<bool, SingularityError> {
        if !self.certify_regular() {
            return Err(SingularityError::NotRegularSequence);
        }
        let jac = self.jacobian_matrix();
        let mut gens = self.local_equations();
        for m in maximal_minors(&jac) {
            gens.push(m.to_ring(&self.local));
        }
        Ok(Ideal::new(&self.local, gens).staircase().finite)
    }

    /// Rows are `∂F_j/∂x_1, …, ∂F_j/∂x_n`.
    pub fn jacobian_matrix(&self) -> Vec<Vec<Poly>> {
        self.equations
            .iter()
            .map(|f| {
                (0..self.global.nvars())
                    .map(|i| f.partial_derivative(i).expect("index in range"))
                    .collect()
            })
            .collect()
    }

    pub fn jacobian(&self) -> JacobianData {
        let jacobian_matrix = self.jacobian_matrix();
        let mut gens = self.local_equations();
        if self.is_hypersurface() {
            gens.extend(jacobian_matrix[0].iter().map(|p| p.to_ring(&self.local)));
        } else {
            gens.extend(maximal_minors(&jacobian_matrix).iter().map(|p| p.to_ring(&self.local)));
        }
        JacobianData {
            jacobian_matrix,
            jacobian_ideal: Ideal::new(&self.local, gens),
        }
    }

    fn require_isolated_hypersurface(&self) -> Result<(), SingularityError> {
        if !self.is_hypersurface() {
            return Err(SingularityError::NotHypersurface(self.codimension()));
        }
        Ok(())
    }

    /// `κ[x]_loc / (F, ∂F)`.
    pub fn tjurina_algebra(&self) -> Result<(Staircase, usize), SingularityError> {
        self.require_isolated_hypersurface()?;
        finite_staircase(&self.jacobian().jacobian_ideal)
    }

    /// `κ[x]_loc / (∂F)`.
    pub fn milnor_algebra(&self) -> Result<(Staircase, usize), SingularityError> {
        self.require_isolated_hypersurface()?;
        let gens = self.jacobian_matrix()[0].iter().map(|p| p.to_ring(&self.local)).collect();
        finite_staircase(&Ideal::new(&self.local, gens))
    }

    /// Generators of the submodule of `R^c` whose quotient is `T¹`: the
    /// vectors `F_k e_j` and the columns of the Jacobian matrix.
    pub fn t1_relations(&self) -> Vec<Vec<Poly>> {
        let c = self.codimension();
        let n = self.global.nvars();
        let jac = self.jacobian_matrix();
        let mut rels = Vec::new();
        for j in 0..c {
            for f in &self.equations {
                let mut v = vec![Poly::zero(&self.global); c];
                v[j] = f.clone();
                rels.push(v);
            }
        }
        for i in 0..n {
            rels.push((0..c).map(|j| jac[j][i].clone()).collect());
        }
        rels
    }

    /// `T¹`, computed once.
    pub fn t1(&self) -> Result<&TangentData, SingularityError> {
        self.t1
            .get_or_init(|| self.tangent_module(1))
            .as_ref()
            .map_err(|e| e.clone())
    }

    /// Expresses vectors of `R^c` globally in the generators of
    /// [`Singularity::t1_relations`].
    pub fn t1_lifter(&self) -> &Lifter {
        self.t1_lifter
            .get_or_init(|| Lifter::new(&self.global, self.codimension(), &self.t1_relations()))
    }

    pub fn tangent_module(&self, level: usize) -> Result<TangentData, SingularityError> {
        if level > 2 {
            return Err(SingularityError::BadLevel(level));
        }
        if !self.certify_regular() {
            return Err(SingularityError::NotRegularSequence);
        }
        let c = self.codimension();
        let n = self.global.nvars();
        match level {
            0 => {
                let ideal_rels = |rank: usize| -> Vec<Vec<Poly>> {
                    let mut rels = Vec::new();
                    for i in 0..rank {
                        for f in &self.equations {
                            let mut v = vec![Poly::zero(&self.global); rank];
                            v[i] = f.clone();
                            rels.push(v);
                        }
                    }
                    rels
                };
                let source = PresentedModule::new(&self.global, n, ideal_rels(n));
                let target = PresentedModule::new(&self.global, c, ideal_rels(c));
                let jac = self.jacobian_matrix();
                let cols = (0..n).map(|i| (0..c).map(|j| jac[j][i].clone()).collect()).collect();
                let map = ModuleHom::new(&source, &target, cols).expect("Jacobian map is well defined");
                let kernel = map.kernel_generators();
                let presentation = source.submodule(&kernel);
                let dimension = local_dimension(&self.local, &presentation).0;
                Ok(TangentData {
                    level,
                    presentation,
                    dimension,
                    basis: None,
                    witness: kernel.into_iter().next(),
                    local: None,
                })
            }
            1 => {
                if !self.certify_isolated()? {
                    return Err(SingularityError::NonIsolated);
                }
                let rels = self.t1_relations();
                let presentation = PresentedModule::new(&self.global, c, rels);
                let (dimension, local) = local_dimension(&self.local, &presentation);
                let basis = local.staircase().standard.iter().map(|m| m.to_vector(&self.global, c)).collect();
                Ok(TangentData {
                    level,
                    presentation,
                    dimension,
                    basis: Some(basis),
                    witness: None,
                    local: Some(local),
                })
            }
            _ => Ok(TangentData {
                level,
                presentation: PresentedModule::free(&self.global, 0),
                dimension: Dim::Finite(0),
                basis: Some(Vec::new()),
                witness: None,
                local: None,
            }),
        }
    }
}

fn finite_staircase(ideal: &Ideal) -> Result<(Staircase, usize), SingularityError> {
    let st = ideal.staircase();
    match st.dimension() {
        Some(d) => Ok((st, d)),
        None => Err(SingularityError::NonIsolated),
    }
}

fn local_dimension(local: &Arc<Ring>, m: &PresentedModule) -> (Dim, ModuleBasis) {
    let rels: Vec<Vec<Poly>> = m
        .relations()
        .iter()
        .map(|r| r.iter().map(|p| p.to_ring(local)).collect())
        .collect();
    let basis = ModuleBasis::compute(local, m.rank(), &rels, ModuleOrder::top(MonomialOrder::Negdegrevlex));
    let dim = if m.rank() == 0 {
        Dim::Finite(0)
    } else {
        match basis.staircase().dimension() {
            Some(d) => Dim::Finite(d),
            None => Dim::Infinite,
        }
    };
    (dim, basis)
}

pub(crate) fn koszul_relations(f: &[Poly]) -> Vec<Vec<Poly>> {
    let c = f.len();
    let mut out = Vec::new();
    for i in 0..c {
        for j in i + 1..c {
            let mut v = vec![Poly::zero(f[0].ring()); c];
            v[i] = f[j].clone();
            v[j] = -f[i].clone();
            out.push(v);
        }
    }
    out
}

/// All `c × c` minors of a `c × n` matrix.
fn maximal_minors(m: &[Vec<Poly>]) -> Vec<Poly> {
    let c = m.len();
    let n = m.first().map_or(0, |r| r.len());
    let mut out = Vec::new();
    let mut cols: Vec<usize> = (0..c).collect();
    if c > n {
        return out;
    }
    loop {
        out.push(determinant(m, &cols));
        // next combination
        let mut i = c;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if cols[i] < n - c + i {
                cols[i] += 1;
                for k in i + 1..c {
                    cols[k] = cols[k - 1] + 1;
                }
                break;
            }
        }
    }
}

fn determinant(m: &[Vec<Poly>], cols: &[usize]) -> Poly {
    let c = cols.len();
    if c == 1 {
        return m[0][cols[0]].clone();
    }
    let ring = m[0][0].ring().clone();
    let mut acc = Poly::zero(&ring);
    for (k, &col) in cols.iter().enumerate() {
        let entry = &m[0][col];
        if entry.is_zero() {
            continue;
        }
        let rest: Vec<usize> = cols.iter().enumerate().filter(|(i, _)| *i != k).map(|(_, &x)| x).collect();
        let minor = determinant(&m[1..], &rest);
        let term = entry * &minor;
        acc = if k % 2 == 0 { &acc + &term } else { &acc - &term };
    }
    acc
}

/// The Jacobian matrix and the ideal `(F, ∂F)` (hypersurfaces) or
/// `(F, maximal minors)` (complete intersections) in the local ring.
#[derive(Debug, Clone)]
pub struct JacobianData {
    pub jacobian_matrix: Vec<Vec<Poly>>,
    pub jacobian_ideal: Ideal,
}

/// `T^level` of the singularity. `presentation` is a presentation over the
/// polynomial ring; `dimension` is the κ-dimension of its localization.
#[derive(Debug, Clone)]
pub struct TangentData {
    pub level: usize,
    pub presentation: PresentedModule,
    pub dimension: Dim,
    /// For `T¹`: representatives `G_1, …, G_τ`, vectors of standard monomials.
    pub basis: Option<Vec<Vec<Poly>>>,
    /// For `T⁰`: a derivation preserving the ideal, when one exists.
    pub witness: Option<Vec<Poly>>,
    local: Option<ModuleBasis>,
}

impl TangentData {
    /// Coordinates in `basis` of the class of a vector in `R^c` (level 1).
    pub fn coordinates(&self, v: &[Poly]) -> Option<Vec<FieldElem>> {
        let local = self.local.as_ref()?;
        let v: Vec<Poly> = v.iter().map(|p| p.to_ring(local.ring())).collect();
        local.coordinates(&v)
    }

    /// Normal form of a vector in the local quotient (level 1).
    pub fn normal_form(&self, v: &[Poly]) -> Option<Vec<Poly>> {
        let local = self.local.as_ref()?;
        let v: Vec<Poly> = v.iter().map(|p| p.to_ring(local.ring())).collect();
        Some(local.normal_form(&v))
    }
}
