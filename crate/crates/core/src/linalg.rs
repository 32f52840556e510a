//! Dense complex linear algebra helpers shared by the numeric modules, plus
//! the JSON encoding of matrices and vectors (`[re, im]` pairs, row-major).

use nalgebra::{Complex, DMatrix, DVector};
use serde::{Deserialize, Serialize};

pub type C64 = Complex<f64>;
pub type CMatrix = DMatrix<C64>;
pub type CVector = DVector<C64>;

/// Default numeric tolerance for equality, commutation and positivity tests.
pub const TOL: f64 = 1e-9;
/// Singular values below `RANK_REL * max` count as zero.
pub const RANK_REL: f64 = 1e-8;
/// Absolute floor for the rank threshold when every singular value is tiny.
pub const RANK_ABS: f64 = 1e-12;

pub fn c(re: f64, im: f64) -> C64 {
    Complex::new(re, im)
}

pub fn max_abs(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

pub fn max_abs_diff(a: &CMatrix, b: &CMatrix) -> f64 {
    max_abs(&(a - b))
}

pub fn is_hermitian(m: &CMatrix, tol: f64) -> bool {
    m.is_square() && max_abs_diff(m, &m.adjoint()) <= tol
}

/// Orthonormal basis (as columns) of the column space of `m`, using the
/// singular-value rank rule.
pub fn column_space(m: &CMatrix) -> CMatrix {
    let d = m.nrows();
    if m.ncols() == 0 || d == 0 {
        return CMatrix::zeros(d, 0);
    }
    let (u, sigma) = jacobi_svd_left(m);
    let sigma_max = sigma.iter().copied().fold(0.0, f64::max);
    let threshold = (RANK_REL * sigma_max).max(RANK_ABS);
    let mut keep: Vec<usize> = (0..sigma.len()).filter(|&i| sigma[i] > threshold).collect();
    keep.sort_by(|&i, &j| sigma[j].total_cmp(&sigma[i]));
    keep.truncate(d);
    CMatrix::from_fn(d, keep.len(), |r, k| u[(r, keep[k])] / sigma[keep[k]])
}

/// One-sided (Hestenes) Jacobi: rotates column pairs of `m` until they are
/// mutually orthogonal. Returns the rotated columns `U Sigma` and their norms.
///
/// nalgebra's complex SVD loses accuracy on rank-deficient Hermitian input
/// (projector complements), which is exactly what the subspace lattice feeds it.
pub fn jacobi_svd_left(m: &CMatrix) -> (CMatrix, Vec<f64>) {
    const MAX_SWEEPS: usize = 80;
    let mut a = m.clone();
    let n = a.ncols();
    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for i in 0..n {
            for j in i + 1..n {
                let alpha = a.column(i).norm_squared();
                let beta = a.column(j).norm_squared();
                if alpha == 0.0 || beta == 0.0 {
                    continue;
                }
                let gamma = a.column(i).dotc(&a.column(j));
                let g = gamma.norm();
                if g <= f64::EPSILON * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let phase = gamma / g;
                let zeta = (beta - alpha) / (2.0 * g);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let cs = 1.0 / (1.0 + t * t).sqrt();
                let sn = cs * t;
                for r in 0..a.nrows() {
                    let x = a[(r, i)];
                    let y = a[(r, j)] * phase.conj();
                    a[(r, i)] = x * cs - y * sn;
                    a[(r, j)] = x * sn + y * cs;
                }
            }
        }
        if !rotated {
            break;
        }
    }
    let sigma = (0..n).map(|k| a.column(k).norm()).collect();
    (a, sigma)
}

/// Eigen-decomposition of a Hermitian matrix: real eigenvalues and unitary
/// eigenvector matrix.
pub fn hermitian_eigen(m: &CMatrix) -> (Vec<f64>, CMatrix) {
    let herm = (m + m.adjoint()).scale(0.5);
    let eig = herm.symmetric_eigen();
    (eig.eigenvalues.iter().copied().collect(), eig.eigenvectors)
}

/// Rebuilds `V diag(f(lambda)) V^H`.
pub fn spectral_map(values: &[f64], vectors: &CMatrix, f: impl Fn(f64) -> f64) -> CMatrix {
    let d = vectors.nrows();
    let mut out = CMatrix::zeros(d, d);
    for (k, &lambda) in values.iter().enumerate() {
        let w = f(lambda);
        if w == 0.0 {
            continue;
        }
        let col = vectors.column(k);
        out += (col * col.adjoint()).scale(w);
    }
    out
}

pub fn pauli() -> [CMatrix; 3] {
    let z = c(0.0, 0.0);
    let one = c(1.0, 0.0);
    let i = c(0.0, 1.0);
    [
        CMatrix::from_row_slice(2, 2, &[z, one, one, z]),
        CMatrix::from_row_slice(2, 2, &[z, -i, i, z]),
        CMatrix::from_row_slice(2, 2, &[one, z, z, -one]),
    ]
}

/// `x I + a . sigma` on C^2.
pub fn bloch_operator(x: f64, a: [f64; 3]) -> CMatrix {
    let [sx, sy, sz] = pauli();
    CMatrix::identity(2, 2).scale(x) + sx.scale(a[0]) + sy.scale(a[1]) + sz.scale(a[2])
}

pub fn norm3(a: [f64; 3]) -> f64 {
    (a[0] * a[0] + a[1] * a[1] + a[2] * a[2]).sqrt()
}

pub type ComplexJson = [f64; 2];

pub fn encode_matrix(m: &CMatrix) -> Vec<Vec<ComplexJson>> {
    (0..m.nrows()).map(|r| (0..m.ncols()).map(|k| [m[(r, k)].re, m[(r, k)].im]).collect()).collect()
}

/// Decodes row-major nested arrays, checking the row count against `nrows`
/// and that every row has the same length.
pub fn decode_matrix(rows: &[Vec<ComplexJson>], nrows: usize) -> Result<CMatrix, String> {
    if rows.len() != nrows {
        return Err(format!("expected {nrows} rows, found {}", rows.len()));
    }
    let ncols = rows.first().map_or(0, Vec::len);
    if let Some((i, r)) = rows.iter().enumerate().find(|(_, r)| r.len() != ncols) {
        return Err(format!("row {i} has {} entries, expected {ncols}", r.len()));
    }
    Ok(CMatrix::from_fn(nrows, ncols, |r, k| c(rows[r][k][0], rows[r][k][1])))
}

pub fn encode_vector(v: &CVector) -> Vec<ComplexJson> {
    v.iter().map(|z| [z.re, z.im]).collect()
}

pub fn decode_vector(entries: &[ComplexJson]) -> CVector {
    CVector::from_iterator(entries.len(), entries.iter().map(|p| c(p[0], p[1])))
}

/// `{"d": .., "matrix": [[[re, im], ..], ..]}`
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatrixJson {
    pub d: usize,
    pub matrix: Vec<Vec<ComplexJson>>,
}

/// `{"d": .., "vector": [[re, im], ..]}`
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VectorJson {
    pub d: usize,
    pub vector: Vec<ComplexJson>,
}

impl VectorJson {
    pub fn new(v: &CVector) -> Self {
        VectorJson { d: v.len(), vector: encode_vector(v) }
    }

    pub fn decode(&self) -> Result<CVector, String> {
        if self.vector.len() != self.d {
            return Err(format!("vector has {} entries, expected d = {}", self.vector.len(), self.d));
        }
        Ok(decode_vector(&self.vector))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn column_space_detects_rank() {
        let m = CMatrix::from_row_slice(2, 2, &[c(1.0, 0.0), c(2.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)]);
        assert_eq!(column_space(&m).ncols(), 1);
        assert_eq!(column_space(&CMatrix::zeros(3, 2)).ncols(), 0);
        assert_eq!(column_space(&CMatrix::zeros(3, 0)).nrows(), 3);
    }

    #[test]
    fn column_space_of_projector_complement() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let v = CVector::from_column_slice(&[c(0.1, -0.3), c(h, 0.2), c(-0.4, 0.5)]);
        let v = v.unscale(v.norm());
        let p = &v * v.adjoint();
        let comp = CMatrix::identity(3, 3) - &p;
        let basis = column_space(&comp);
        assert_eq!(basis.ncols(), 2);
        assert!(max_abs_diff(&(&basis * basis.adjoint()), &comp) < 1e-14);
        assert!(max_abs_diff(&(basis.adjoint() * &basis), &CMatrix::identity(2, 2)) < 1e-14);
    }

    #[test]
    fn jacobi_handles_wide_input() {
        let m = CMatrix::from_fn(2, 5, |r, k| c((r * 5 + k) as f64, (k as f64) - 1.0));
        let basis = column_space(&m);
        assert_eq!(basis.ncols(), 2);
        assert!(max_abs_diff(&(&basis * basis.adjoint()), &CMatrix::identity(2, 2)) < 1e-13);
    }

    #[test]
    fn pauli_algebra() {
        let [x, y, z] = pauli();
        let i = c(0.0, 1.0);
        assert!(max_abs_diff(&(&x * &y), &z.map(|e| e * i)) < 1e-15);
        assert!(max_abs_diff(&(&x * &x), &CMatrix::identity(2, 2)) < 1e-15);
    }

    #[test]
    fn spectral_map_identity_reconstructs() {
        let m = bloch_operator(0.5, [0.1, -0.2, 0.3]);
        let (vals, vecs) = hermitian_eigen(&m);
        assert!(max_abs_diff(&spectral_map(&vals, &vecs, |x| x), &m) < 1e-14);
    }

    #[test]
    fn matrix_json_rejects_ragged_rows() {
        let rows = vec![vec![[1.0, 0.0]], vec![]];
        assert!(decode_matrix(&rows, 2).is_err());
        assert!(decode_matrix(&rows, 3).is_err());
        let m = bloch_operator(1.0, [0.0, 1.0, 0.0]);
        assert_eq!(decode_matrix(&encode_matrix(&m), 2).unwrap(), m);
    }
}
