//! Unsharp properties: effects (`0 <= E <= I`), POVMs, the sequential
//! product `sqrt(E) F sqrt(E)`, and joint measurability of unbiased qubit
//! effects.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg::{self, CMatrix};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EffectError {
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix is not Hermitian (deviation {0:e})")]
    NotHermitian(f64),
    #[error("eigenvalue {0} outside [0, 1]")]
    SpectrumOutOfRange(f64),
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("POVM has no outcomes")]
    EmptyPovm,
    #[error("POVM effects sum to identity only within {0:e}")]
    NotNormalized(f64),
    #[error("bias {0} outside [0, 2]")]
    BiasOutOfRange(f64),
    #[error("Bloch vector length {length} exceeds min(bias, 2 - bias) = {bound}")]
    BlochTooLong { length: f64, bound: f64 },
    #[error("coexistence criterion covers unbiased effects only (bias {0})")]
    Biased(f64),
    #[error("malformed matrix: {0}")]
    Malformed(String),
}

const SQRT_FLOOR: f64 = 1e-14;

/// Hermitian operator with spectrum in `[0, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Effect {
    matrix: CMatrix,
}

impl Effect {
    /// Validates `matrix`. Eigenvalues within `tol` of the interval are
    /// clamped onto it.
    pub fn new(matrix: CMatrix, tol: f64) -> Result<Self, EffectError> {
        if !matrix.is_square() {
            return Err(EffectError::NotSquare { rows: matrix.nrows(), cols: matrix.ncols() });
        }
        let skew = linalg::max_abs_diff(&matrix, &matrix.adjoint());
        if skew > tol {
            return Err(EffectError::NotHermitian(skew));
        }
        let (values, vectors) = linalg::hermitian_eigen(&matrix);
        if let Some(&bad) = values.iter().find(|&&x| x < -tol || x > 1.0 + tol) {
            return Err(EffectError::SpectrumOutOfRange(bad));
        }
        let matrix = if values.iter().any(|&x| !(0.0..=1.0).contains(&x)) {
            linalg::spectral_map(&values, &vectors, |x| x.clamp(0.0, 1.0))
        } else {
            (&matrix + matrix.adjoint()).scale(0.5)
        };
        Ok(Effect { matrix })
    }

    pub fn identity(d: usize) -> Self {
        Effect { matrix: CMatrix::identity(d, d) }
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    /// `I - E`
    pub fn complement(&self) -> Effect {
        let d = self.dim();
        Effect { matrix: CMatrix::identity(d, d) - &self.matrix }
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        linalg::hermitian_eigen(&self.matrix).0
    }

    /// Square root through the spectral decomposition, eigenvalues clamped
    /// to `[0, 1]` first. Eigenvalues at rounding-noise level count as zero;
    /// otherwise `sqrt(1e-16) = 1e-8` leaks into products of projectors.
    pub fn sqrt(&self) -> CMatrix {
        let (values, vectors) = linalg::hermitian_eigen(&self.matrix);
        linalg::spectral_map(&values, &vectors, |x| if x <= SQRT_FLOOR { 0.0 } else { x.min(1.0).sqrt() })
    }

    pub fn to_json(&self, label: &str) -> EffectJson {
        EffectJson { label: label.to_string(), d: self.dim(), matrix: linalg::encode_matrix(&self.matrix) }
    }

    pub fn from_json(file: &EffectJson, tol: f64) -> Result<Self, EffectError> {
        let m = linalg::decode_matrix(&file.matrix, file.d).map_err(EffectError::Malformed)?;
        Effect::new(m, tol)
    }
}

pub fn make_effect(matrix: CMatrix, tol: f64) -> Result<Effect, EffectError> {
    Effect::new(matrix, tol)
}

/// `sqrt(E) F sqrt(E)`: first test `E`, then `F`.
pub fn sequential_product(e: &Effect, f: &Effect, tol: f64) -> Result<Effect, EffectError> {
    if e.dim() != f.dim() {
        return Err(EffectError::DimensionMismatch(e.dim(), f.dim()));
    }
    let root = e.sqrt();
    Effect::new(&root * f.matrix() * &root, tol)
}

/// Matrix JSON of the hilbert module with an outcome label.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EffectJson {
    pub label: String,
    pub d: usize,
    pub matrix: Vec<Vec<linalg::ComplexJson>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PovmJson {
    pub outcomes: Vec<EffectJson>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Povm {
    outcomes: Vec<(String, Effect)>,
}

impl Povm {
    pub fn outcomes(&self) -> &[(String, Effect)] {
        &self.outcomes
    }

    pub fn dim(&self) -> usize {
        self.outcomes[0].1.dim()
    }

    /// Outcome probabilities `<psi|E_i|psi>` for a unit vector.
    pub fn probabilities(&self, psi: &linalg::CVector) -> Vec<f64> {
        self.outcomes.iter().map(|(_, e)| psi.dotc(&(e.matrix() * psi)).re).collect()
    }

    pub fn to_json(&self) -> PovmJson {
        PovmJson { outcomes: self.outcomes.iter().map(|(l, e)| e.to_json(l)).collect() }
    }

    pub fn from_json(file: &PovmJson, tol: f64) -> Result<Self, EffectError> {
        let effects = file
            .outcomes
            .iter()
            .map(|o| Ok((o.label.clone(), Effect::from_json(o, tol)?)))
            .collect::<Result<Vec<_>, EffectError>>()?;
        validate_povm(effects, tol)
    }
}

/// Checks that the effects share a dimension and sum to the identity.
pub fn validate_povm(effects: Vec<(String, Effect)>, tol: f64) -> Result<Povm, EffectError> {
    let d = effects.first().ok_or(EffectError::EmptyPovm)?.1.dim();
    let mut sum = CMatrix::zeros(d, d);
    for (_, e) in &effects {
        if e.dim() != d {
            return Err(EffectError::DimensionMismatch(d, e.dim()));
        }
        sum += e.matrix();
    }
    let dev = linalg::max_abs_diff(&sum, &CMatrix::identity(d, d));
    if dev > tol {
        return Err(EffectError::NotNormalized(dev));
    }
    Ok(Povm { outcomes: effects })
}

/// Qubit effect `(bias I + bloch . sigma) / 2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QubitEffect {
    pub bias: f64,
    pub bloch: [f64; 3],
}

impl QubitEffect {
    pub fn new(bloch: [f64; 3], bias: f64, tol: f64) -> Result<Self, EffectError> {
        if !(0.0..=2.0).contains(&bias) {
            return Err(EffectError::BiasOutOfRange(bias));
        }
        let length = linalg::norm3(bloch);
        let bound = bias.min(2.0 - bias);
        if length > bound + tol {
            return Err(EffectError::BlochTooLong { length, bound });
        }
        Ok(QubitEffect { bias, bloch })
    }

    pub fn matrix(&self) -> CMatrix {
        linalg::bloch_operator(self.bias, self.bloch).scale(0.5)
    }

    pub fn effect(&self, tol: f64) -> Result<Effect, EffectError> {
        Effect::new(self.matrix(), tol)
    }

    pub fn is_unbiased(&self, tol: f64) -> bool {
        (self.bias - 1.0).abs() <= tol
    }
}

/// Unbiased unless `bias` says otherwise; `|a| = 1` with bias 1 is sharp.
pub fn unsharp_qubit(bloch: [f64; 3], bias: f64, tol: f64) -> Result<QubitEffect, EffectError> {
    QubitEffect::new(bloch, bias, tol)
}

/// Joint POVM `G[mu][nu] = ((1 + mu nu c) I + (mu a + nu b) . sigma) / 4`
/// with `mu, nu` in `{+1, -1}`, index 0 for `+1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JointCertificate {
    pub c: f64,
    pub a: [f64; 3],
    pub b: [f64; 3],
}

impl JointCertificate {
    pub fn element(&self, mu: f64, nu: f64) -> CMatrix {
        let v = [0, 1, 2].map(|i| mu * self.a[i] + nu * self.b[i]);
        linalg::bloch_operator(1.0 + mu * nu * self.c, v).scale(0.25)
    }

    /// The four elements in order `++, +-, -+, --`.
    pub fn elements(&self) -> [CMatrix; 4] {
        [self.element(1.0, 1.0), self.element(1.0, -1.0), self.element(-1.0, 1.0), self.element(-1.0, -1.0)]
    }

    /// Smallest eigenvalue over the four elements.
    pub fn min_eigenvalue(&self) -> f64 {
        self.elements()
            .iter()
            .map(min_eigenvalue_2x2)
            .fold(f64::INFINITY, f64::min)
    }

    /// Largest deviation of `sum_nu G[mu][nu]` from `(I + mu a.sigma)/2`,
    /// of `sum_mu G[mu][nu]` from `(I + nu b.sigma)/2`, and of the total
    /// from the identity.
    pub fn margin_error(&self) -> f64 {
        let [pp, pm, mp, mm] = self.elements();
        let half = |s: f64, v: [f64; 3]| linalg::bloch_operator(1.0, v.map(|x| s * x)).scale(0.5);
        let total = &pp + &pm + &mp + &mm;
        [
            linalg::max_abs_diff(&(&pp + &pm), &half(1.0, self.a)),
            linalg::max_abs_diff(&(&mp + &mm), &half(-1.0, self.a)),
            linalg::max_abs_diff(&(&pp + &mp), &half(1.0, self.b)),
            linalg::max_abs_diff(&(&pm + &mm), &half(-1.0, self.b)),
            linalg::max_abs_diff(&total, &CMatrix::identity(2, 2)),
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoexistenceVerdict {
    /// `|a + b| + |a - b|`
    pub value: f64,
    pub bound: f64,
    pub coexistent: bool,
    pub certificate: Option<JointCertificate>,
}

/// Decides joint measurability of two unbiased qubit effects by
/// `|a + b| + |a - b| <= 2`. A positive verdict carries a joint POVM with
/// `c = (|a + b| - |a - b|) / 2`, the midpoint of the feasible interval
/// `[|a + b| - 1, 1 - |a - b|]`.
pub fn coexistent(e1: &QubitEffect, e2: &QubitEffect, tol: f64) -> Result<CoexistenceVerdict, EffectError> {
    for e in [e1, e2] {
        if !e.is_unbiased(tol) {
            return Err(EffectError::Biased(e.bias));
        }
    }
    let (a, b) = (e1.bloch, e2.bloch);
    let plus = linalg::norm3([a[0] + b[0], a[1] + b[1], a[2] + b[2]]);
    let minus = linalg::norm3([a[0] - b[0], a[1] - b[1], a[2] - b[2]]);
    let value = plus + minus;
    let ok = value <= 2.0 + tol;
    let certificate = ok.then(|| JointCertificate { c: (plus - minus) / 2.0, a, b });
    Ok(CoexistenceVerdict { value, bound: 2.0, coexistent: ok, certificate })
}

/// Smaller eigenvalue of a 2x2 Hermitian matrix from its trace and
/// determinant.
fn min_eigenvalue_2x2(m: &CMatrix) -> f64 {
    let half_trace = (m[(0, 0)].re + m[(1, 1)].re) / 2.0;
    let half_gap = (m[(0, 0)].re - m[(1, 1)].re) / 2.0;
    half_trace - (half_gap * half_gap + m[(0, 1)].norm_sqr()).sqrt()
}

/// Brute-force oracle: scans `c = -1, -1 + step, .., 1` and returns the
/// first joint POVM whose four elements have no eigenvalue below `-tol`.
/// Independent of the closed-form criterion used by [`coexistent`].
pub fn search_certificate(a: [f64; 3], b: [f64; 3], step: f64, tol: f64) -> Option<JointCertificate> {
    let n = (2.0 / step).round() as i64;
    (0..=n)
        .map(|k| JointCertificate { c: -1.0 + k as f64 * step, a, b })
        .find(|cert| cert.min_eigenvalue() >= -tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hilbert::qubit_ray;
    use crate::linalg::{c, TOL};

    #[test]
    fn effect_validation() {
        let p = qubit_ray("x+").unwrap().projector();
        assert!(make_effect(p, TOL).is_ok());
        let big = CMatrix::identity(2, 2).scale(1.2);
        assert!(matches!(make_effect(big, TOL), Err(EffectError::SpectrumOutOfRange(x)) if (x - 1.2).abs() < 1e-12));
        assert!(make_effect(CMatrix::identity(2, 2).scale(0.5), TOL).is_ok());
        let skew = CMatrix::from_row_slice(2, 2, &[c(0.5, 0.0), c(0.1, 0.0), c(0.0, 0.0), c(0.5, 0.0)]);
        assert!(matches!(make_effect(skew, TOL), Err(EffectError::NotHermitian(_))));
        assert!(matches!(make_effect(CMatrix::zeros(2, 3), TOL), Err(EffectError::NotSquare { .. })));
        let neg = CMatrix::identity(2, 2).scale(-1e-3);
        assert!(matches!(make_effect(neg, TOL), Err(EffectError::SpectrumOutOfRange(_))));
    }

    #[test]
    fn near_boundary_spectrum_is_clamped() {
        let m = CMatrix::identity(2, 2).scale(1.0 + 1e-12);
        let e = make_effect(m, TOL).unwrap();
        assert!(e.eigenvalues().iter().all(|&x| x <= 1.0 + 1e-15));
    }

    #[test]
    fn povm_validation() {
        let p = make_effect(qubit_ray("z+").unwrap().projector(), TOL).unwrap();
        let ok = validate_povm(vec![("yes".into(), p.clone()), ("no".into(), p.complement())], TOL).unwrap();
        assert_eq!(ok.outcomes().len(), 2);

        let e = unsharp_qubit([0.3, 0.4, 0.0], 1.0, TOL).unwrap().effect(TOL).unwrap();
        assert!(validate_povm(vec![("+".into(), e.clone()), ("-".into(), e.complement())], TOL).is_ok());

        assert!(matches!(
            validate_povm(vec![("a".into(), p.clone()), ("b".into(), p.clone())], TOL),
            Err(EffectError::NotNormalized(_))
        ));
        assert_eq!(validate_povm(vec![], TOL).unwrap_err(), EffectError::EmptyPovm);
        assert_eq!(
            validate_povm(vec![("a".into(), p), ("b".into(), Effect::identity(3))], TOL).unwrap_err(),
            EffectError::DimensionMismatch(2, 3)
        );
    }

    #[test]
    fn sequential_product_examples() {
        let e = unsharp_qubit([0.2, -0.1, 0.5], 1.0, TOL).unwrap().effect(TOL).unwrap();
        let id = Effect::identity(2);
        assert!(linalg::max_abs_diff(sequential_product(&e, &id, TOL).unwrap().matrix(), e.matrix()) < 1e-12);

        let pz = make_effect(qubit_ray("z+").unwrap().projector(), TOL).unwrap();
        let px = make_effect(qubit_ray("x+").unwrap().projector(), TOL).unwrap();
        let half_pz = pz.matrix().scale(0.5);
        assert!(linalg::max_abs_diff(sequential_product(&pz, &px, TOL).unwrap().matrix(), &half_pz) < 1e-12);
        assert_eq!(
            sequential_product(&pz, &Effect::identity(3), TOL).unwrap_err(),
            EffectError::DimensionMismatch(2, 3)
        );
    }

    #[test]
    fn commuting_projectors_compose_to_meet() {
        use crate::hilbert::Subspace;
        use crate::linalg::CVector;
        let e = |i: usize| CVector::from_fn(3, |r, _| c(if r == i { 1.0 } else { 0.0 }, 0.0));
        let a = Subspace::span(3, &[e(0), e(1)]).unwrap();
        let b = Subspace::span(3, &[e(1), e(2)]).unwrap();
        let pa = make_effect(a.projector(), TOL).unwrap();
        let pb = make_effect(b.projector(), TOL).unwrap();
        let prod = sequential_product(&pa, &pb, TOL).unwrap();
        assert!(linalg::max_abs_diff(prod.matrix(), &a.meet(&b).unwrap().projector()) < 1e-12);
        let swapped = sequential_product(&pb, &pa, TOL).unwrap();
        assert!(linalg::max_abs_diff(prod.matrix(), swapped.matrix()) < 1e-12);
    }

    #[test]
    fn sharp_limit_needs_parallel_axes() {
        let q = |a| unsharp_qubit(a, 1.0, TOL).unwrap();
        let z = [0.0, 0.0, 1.0];
        assert!(coexistent(&q(z), &q(z), TOL).unwrap().coexistent);
        assert!(coexistent(&q(z), &q([0.0, 0.0, -1.0]), TOL).unwrap().coexistent);
        let tilted = [0.0, 0.1f64.sin(), 0.1f64.cos()];
        assert!(!coexistent(&q(z), &q(tilted), TOL).unwrap().coexistent);
    }

    #[test]
    fn qubit_effect_parametrisation() {
        let sharp = unsharp_qubit([1.0, 0.0, 0.0], 1.0, TOL).unwrap();
        assert!(linalg::max_abs_diff(&sharp.matrix(), &qubit_ray("x+").unwrap().projector()) < 1e-15);
        let trivial = unsharp_qubit([0.0; 3], 1.0, TOL).unwrap();
        assert_eq!(trivial.matrix(), CMatrix::identity(2, 2).scale(0.5));
        assert!(matches!(unsharp_qubit([1.5, 0.0, 0.0], 1.0, TOL), Err(EffectError::BlochTooLong { .. })));
        assert!(matches!(unsharp_qubit([0.5, 0.0, 0.0], 0.4, TOL), Err(EffectError::BlochTooLong { .. })));
        assert!(unsharp_qubit([0.3, 0.0, 0.0], 0.4, TOL).is_ok());
        assert_eq!(unsharp_qubit([0.0; 3], 2.5, TOL).unwrap_err(), EffectError::BiasOutOfRange(2.5));
    }

    #[test]
    fn coexistence_examples() {
        let q = |a| unsharp_qubit(a, 1.0, TOL).unwrap();
        let v = coexistent(&q([0.5, 0.0, 0.0]), &q([0.0, 0.5, 0.0]), TOL).unwrap();
        assert!(v.coexistent);
        assert!((v.value - 2f64.sqrt()).abs() < 1e-12);
        let cert = v.certificate.unwrap();
        assert!(cert.min_eigenvalue() >= -TOL);
        assert!(cert.margin_error() <= TOL);

        let v = coexistent(&q([1.0, 0.0, 0.0]), &q([0.0, 1.0, 0.0]), TOL).unwrap();
        assert!(!v.coexistent);
        assert!((v.value - 2.0 * 2f64.sqrt()).abs() < 1e-12);
        assert!(v.certificate.is_none());

        let v = coexistent(&q([0.0, 0.6, 0.8]), &q([0.0, 0.6, 0.8]), TOL).unwrap();
        assert!(v.coexistent);
        assert!(v.certificate.unwrap().min_eigenvalue() >= -TOL);
    }

    #[test]
    fn oracle_agrees_on_examples() {
        assert!(search_certificate([0.5, 0.0, 0.0], [0.0, 0.5, 0.0], 1e-3, TOL).is_some());
        assert!(search_certificate([1.0, 0.0, 0.0], [0.0, 1.0, 0.0], 1e-3, TOL).is_none());
        assert!(search_certificate([0.6, 0.0, 0.0], [0.0, 0.8, 0.0], 1e-3, TOL).is_some());
        assert!(search_certificate([0.6, 0.0, 0.0], [0.0, 0.825, 0.0], 1e-3, TOL).is_none());
    }

    #[test]
    fn biased_inputs_rejected() {
        let biased = unsharp_qubit([0.1, 0.0, 0.0], 0.8, TOL).unwrap();
        let unbiased = unsharp_qubit([0.1, 0.0, 0.0], 1.0, TOL).unwrap();
        assert_eq!(coexistent(&biased, &unbiased, TOL).unwrap_err(), EffectError::Biased(0.8));
    }

    #[test]
    fn povm_json_round_trip() {
        let e = unsharp_qubit([0.0, 0.3, 0.4], 1.0, TOL).unwrap().effect(TOL).unwrap();
        let povm = validate_povm(vec![("+".into(), e.clone()), ("-".into(), e.complement())], TOL).unwrap();
        let text = serde_json::to_string(&povm.to_json()).unwrap();
        let back = Povm::from_json(&serde_json::from_str(&text).unwrap(), TOL).unwrap();
        assert_eq!(back.outcomes()[0].0, "+");
        assert!(linalg::max_abs_diff(back.outcomes()[1].1.matrix(), e.complement().matrix()) < 1e-15);
    }
}
