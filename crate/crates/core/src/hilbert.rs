//! Closed subspaces of `C^d` and the ortholattice they form.
//!
//! A [`Subspace`] stores a column-orthonormal basis. Meets, joins and
//! orthocomplements go through SVD-based column spaces; comparisons are made
//! on projectors so they do not depend on the chosen basis.

use nalgebra::DMatrix;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg::{self, c, CMatrix, CVector, ComplexJson};
use crate::omlattice::{LatticeError, OrthoLattice};

pub const DEFAULT_MAX_DIM: usize = 16;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum HilbertError {
    #[error("ambient dimension must be positive")]
    ZeroDimension,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("ambient dimension {d} exceeds the cap of {max}")]
    DimensionTooLarge { d: usize, max: usize },
    #[error("subspace dimension {k} exceeds ambient dimension {d}")]
    RankTooLarge { k: usize, d: usize },
    #[error("lattice closure exceeded {max} elements (reached {size})")]
    ClosureTooLarge { size: usize, max: usize },
    #[error("malformed matrix: {0}")]
    Malformed(String),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Subspace {
    basis: CMatrix,
}

impl Subspace {
    /// Span of the given vectors, capped at [`DEFAULT_MAX_DIM`].
    pub fn span(d: usize, vectors: &[CVector]) -> Result<Self, HilbertError> {
        Self::span_capped(d, vectors, DEFAULT_MAX_DIM)
    }

    pub fn span_capped(d: usize, vectors: &[CVector], max_dim: usize) -> Result<Self, HilbertError> {
        check_dim(d, max_dim)?;
        if let Some(v) = vectors.iter().find(|v| v.len() != d) {
            return Err(HilbertError::DimensionMismatch { expected: d, found: v.len() });
        }
        let m = CMatrix::from_fn(d, vectors.len(), |r, k| vectors[k][r]);
        Ok(Subspace { basis: linalg::column_space(&m) })
    }

    /// Column space of an arbitrary `d x m` matrix.
    pub fn from_columns(m: &CMatrix) -> Result<Self, HilbertError> {
        if m.nrows() == 0 {
            return Err(HilbertError::ZeroDimension);
        }
        Ok(Subspace { basis: linalg::column_space(m) })
    }

    pub fn zero(d: usize) -> Self {
        Subspace { basis: CMatrix::zeros(d, 0) }
    }

    pub fn full(d: usize) -> Self {
        Subspace { basis: CMatrix::identity(d, d) }
    }

    /// Ray through a single (not necessarily normalised) vector.
    pub fn ray(v: &CVector) -> Result<Self, HilbertError> {
        Self::span(v.len(), std::slice::from_ref(v))
    }

    pub fn ambient_dim(&self) -> usize {
        self.basis.nrows()
    }

    pub fn dim(&self) -> usize {
        self.basis.ncols()
    }

    pub fn basis(&self) -> &CMatrix {
        &self.basis
    }

    pub fn projector(&self) -> CMatrix {
        &self.basis * self.basis.adjoint()
    }

    fn same_space(&self, other: &Subspace) -> Result<(), HilbertError> {
        if self.ambient_dim() != other.ambient_dim() {
            return Err(HilbertError::DimensionMismatch { expected: self.ambient_dim(), found: other.ambient_dim() });
        }
        Ok(())
    }

    pub fn join(&self, other: &Subspace) -> Result<Subspace, HilbertError> {
        self.same_space(other)?;
        let d = self.ambient_dim();
        let (k1, k2) = (self.dim(), other.dim());
        let stacked = CMatrix::from_fn(d, k1 + k2, |r, k| {
            if k < k1 {
                self.basis[(r, k)]
            } else {
                other.basis[(r, k - k1)]
            }
        });
        Ok(Subspace { basis: linalg::column_space(&stacked) })
    }

    /// Orthogonal complement, the kernel of `basis^H`.
    pub fn ortho(&self) -> Subspace {
        let d = self.ambient_dim();
        let complement = CMatrix::identity(d, d) - self.projector();
        Subspace { basis: linalg::column_space(&complement) }
    }

    /// `(a' | b')'`
    pub fn meet(&self, other: &Subspace) -> Result<Subspace, HilbertError> {
        Ok(self.ortho().join(&other.ortho())?.ortho())
    }

    pub fn eq_within(&self, other: &Subspace, tol: f64) -> bool {
        self.ambient_dim() == other.ambient_dim()
            && self.dim() == other.dim()
            && linalg::max_abs_diff(&self.projector(), &other.projector()) <= tol
    }

    /// Inclusion `self <= other`, tested as `P_other P_self = P_self`.
    pub fn le_within(&self, other: &Subspace, tol: f64) -> bool {
        if self.ambient_dim() != other.ambient_dim() || self.dim() > other.dim() {
            return false;
        }
        let p = self.projector();
        linalg::max_abs_diff(&(other.projector() * &p), &p) <= tol
    }

    /// Largest entry of the commutator `P_a P_b - P_b P_a`.
    pub fn commutator_norm(&self, other: &Subspace) -> Result<f64, HilbertError> {
        self.same_space(other)?;
        let (pa, pb) = (self.projector(), other.projector());
        Ok(linalg::max_abs_diff(&(&pa * &pb), &(&pb * &pa)))
    }

    pub fn commutes(&self, other: &Subspace, tol: f64) -> Result<bool, HilbertError> {
        Ok(self.commutator_norm(other)? <= tol)
    }

    pub fn contains(&self, v: &CVector, tol: f64) -> bool {
        v.len() == self.ambient_dim() && (self.projector() * v - v).iter().all(|z| z.norm() <= tol)
    }

    /// Orthonormality of the stored basis and idempotence of the projector.
    pub fn check_invariants(&self, tol: f64) -> bool {
        let k = self.dim();
        let gram = self.basis.adjoint() * &self.basis;
        let p = self.projector();
        linalg::max_abs_diff(&gram, &CMatrix::identity(k, k)) <= tol
            && linalg::max_abs_diff(&p, &p.adjoint()) <= tol
            && linalg::max_abs_diff(&(&p * &p), &p) <= tol
    }

    pub fn to_json(&self) -> SubspaceJson {
        SubspaceJson { d: self.ambient_dim(), basis: linalg::encode_matrix(&self.basis) }
    }

    /// Loads a subspace file; the columns need only span the subspace.
    pub fn from_json(file: &SubspaceJson) -> Result<Self, HilbertError> {
        check_dim(file.d, DEFAULT_MAX_DIM)?;
        let m = linalg::decode_matrix(&file.basis, file.d).map_err(HilbertError::Malformed)?;
        Self::from_columns(&m)
    }
}

fn check_dim(d: usize, max: usize) -> Result<(), HilbertError> {
    if d == 0 {
        return Err(HilbertError::ZeroDimension);
    }
    if d > max {
        return Err(HilbertError::DimensionTooLarge { d, max });
    }
    Ok(())
}

/// `{"d": .., "basis": [[[re, im], ..], ..]}`, `d` rows of `k` entries.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SubspaceJson {
    pub d: usize,
    pub basis: Vec<Vec<ComplexJson>>,
}

/// Standard rays of `C^2` by name: `z+`, `z-`, `x+`, `x-`, `y+`, `y-`.
pub fn qubit_ray_vector(name: &str) -> Option<CVector> {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let v = match name {
        "z+" => [c(1.0, 0.0), c(0.0, 0.0)],
        "z-" => [c(0.0, 0.0), c(1.0, 0.0)],
        "x+" => [c(h, 0.0), c(h, 0.0)],
        "x-" => [c(h, 0.0), c(-h, 0.0)],
        "y+" => [c(h, 0.0), c(0.0, h)],
        "y-" => [c(h, 0.0), c(0.0, -h)],
        _ => return None,
    };
    Some(CVector::from_column_slice(&v))
}

pub fn qubit_ray(name: &str) -> Option<Subspace> {
    qubit_ray_vector(name).map(|v| Subspace::ray(&v).expect("qubit rays are well-formed"))
}

pub fn gaussian_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> CMatrix {
    DMatrix::from_fn(rows, cols, |_, _| {
        let re: f64 = StandardNormal.sample(rng);
        let im: f64 = StandardNormal.sample(rng);
        c(re, im)
    })
}

/// Seeded random unit vector, uniformly distributed on the sphere.
pub fn random_unit_vector(rng: &mut ChaCha8Rng, d: usize) -> CVector {
    let g = gaussian_matrix(rng, d, 1).column(0).into_owned();
    let n = g.norm();
    g.unscale(n)
}

/// Orthonormalised Gaussian `d x k` frame drawn from `rng`.
pub fn random_subspace_with(rng: &mut ChaCha8Rng, d: usize, k: usize) -> Result<Subspace, HilbertError> {
    check_dim(d, DEFAULT_MAX_DIM)?;
    if k > d {
        return Err(HilbertError::RankTooLarge { k, d });
    }
    if k == 0 {
        return Ok(Subspace::zero(d));
    }
    let g = gaussian_matrix(rng, d, k);
    let q = g.qr().q();
    Ok(Subspace { basis: q.columns(0, k).into_owned() })
}

/// Deterministic per seed.
pub fn random_subspace(d: usize, k: usize, seed: u64) -> Result<Subspace, HilbertError> {
    random_subspace_with(&mut ChaCha8Rng::seed_from_u64(seed), d, k)
}

/// Finite ortholattice generated by subspaces, with the subspace realising
/// each element.
#[derive(Debug, Clone)]
pub struct HilbertLattice {
    pub lattice: OrthoLattice,
    pub subspaces: Vec<Subspace>,
}

impl HilbertLattice {
    pub fn subspace(&self, label: &str) -> Result<&Subspace, LatticeError> {
        Ok(&self.subspaces[self.lattice.elem(label)?])
    }
}

/// Closes the generators (plus zero and the full space) under meet, join and
/// orthocomplement. Subspaces equal within `tol` are identified.
///
/// Element labels: `0`, `1`, the generator labels, `x'` for the complement
/// of a labelled `x`, and `e<i>` for anything else.
pub fn as_lattice(
    name: &str,
    generators: &[(String, Subspace)],
    max_elements: usize,
    tol: f64,
) -> Result<HilbertLattice, HilbertError> {
    let d = match generators.first() {
        Some((_, s)) => s.ambient_dim(),
        None => 1,
    };
    for (_, s) in generators {
        if s.ambient_dim() != d {
            return Err(HilbertError::DimensionMismatch { expected: d, found: s.ambient_dim() });
        }
    }

    let mut elems: Vec<Subspace> = Vec::new();
    let mut labels: Vec<String> = Vec::new();
    let find = |elems: &[Subspace], s: &Subspace| elems.iter().position(|e| e.eq_within(s, tol));
    let push = |elems: &mut Vec<Subspace>, labels: &mut Vec<String>, s: Subspace, label: String| -> Result<bool, HilbertError> {
        if find(elems, &s).is_some() {
            return Ok(false);
        }
        if elems.len() >= max_elements {
            return Err(HilbertError::ClosureTooLarge { size: elems.len() + 1, max: max_elements });
        }
        let label = if labels.contains(&label) { format!("e{}", elems.len()) } else { label };
        elems.push(s);
        labels.push(label);
        Ok(true)
    };

    push(&mut elems, &mut labels, Subspace::zero(d), "0".into())?;
    push(&mut elems, &mut labels, Subspace::full(d), "1".into())?;
    for (label, s) in generators {
        push(&mut elems, &mut labels, s.clone(), label.clone())?;
    }

    loop {
        let snapshot = elems.len();
        for i in 0..snapshot {
            let o = elems[i].ortho();
            let label = format!("{}'", labels[i]);
            push(&mut elems, &mut labels, o, label)?;
        }
        for i in 0..snapshot {
            for j in i + 1..snapshot {
                let m = elems[i].meet(&elems[j])?;
                let next = format!("e{}", elems.len());
                push(&mut elems, &mut labels, m, next)?;
                let jn = elems[i].join(&elems[j])?;
                let next = format!("e{}", elems.len());
                push(&mut elems, &mut labels, jn, next)?;
            }
        }
        if elems.len() == snapshot {
            break;
        }
    }

    let n = elems.len();
    let mut leq = vec![false; n * n];
    for i in 0..n {
        for j in 0..n {
            leq[i * n + j] = elems[i].le_within(&elems[j], tol);
        }
    }
    let ortho = elems
        .iter()
        .map(|e| find(&elems, &e.ortho()).expect("closure contains every complement"))
        .collect();
    let lattice = OrthoLattice::from_parts(name.to_string(), labels, leq, ortho)?;
    Ok(HilbertLattice { lattice, subspaces: elems })
}
