//! Projective tests on pure states: Lüders update, chronologically ordered
//! test sequences, repeatability, and truth of sequential conjunctions.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::formula::Formula;
use crate::hilbert::{self, HilbertError, Subspace, SubspaceJson};
use crate::linalg::{self, CMatrix, CVector, VectorJson};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MeasurementError {
    #[error("state is not normalised (norm {0})")]
    NotNormalized(f64),
    #[error("dimension mismatch: state has {state}, subspace has {subspace}")]
    DimensionMismatch { state: usize, subspace: usize },
    #[error("impossible branch at step {step} (probability {probability:e})")]
    ImpossibleBranch { step: usize, probability: f64 },
    #[error("replay disagrees with the record at step {0}")]
    ReplayMismatch(usize),
    #[error("replay disagrees with the recorded final state")]
    FinalStateMismatch,
    #[error("sequential conjunction of a compound operand: {0}")]
    CompoundOperand(String),
    #[error("malformed record: {0}")]
    Malformed(String),
    #[error(transparent)]
    Hilbert(#[from] HilbertError),
}

#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    vector: CVector,
}

impl PureState {
    pub fn new(vector: CVector, tol: f64) -> Result<Self, MeasurementError> {
        let n = vector.norm();
        if (n - 1.0).abs() > tol {
            return Err(MeasurementError::NotNormalized(n));
        }
        Ok(PureState { vector })
    }

    /// Rescales a nonzero vector.
    pub fn normalized(vector: CVector) -> Result<Self, MeasurementError> {
        let n = vector.norm();
        if n == 0.0 || !n.is_finite() {
            return Err(MeasurementError::NotNormalized(n));
        }
        Ok(PureState { vector: vector.unscale(n) })
    }

    /// `z+`, `z-`, `x+`, `x-`, `y+`, `y-`.
    pub fn named(name: &str) -> Option<Self> {
        hilbert::qubit_ray_vector(name).map(|vector| PureState { vector })
    }

    pub fn dim(&self) -> usize {
        self.vector.len()
    }

    pub fn vector(&self) -> &CVector {
        &self.vector
    }

    /// `<s|M|s>`, real part.
    pub fn expectation(&self, m: &CMatrix) -> f64 {
        self.vector.dotc(&(m * &self.vector)).re
    }

    pub fn to_json(&self) -> VectorJson {
        VectorJson::new(&self.vector)
    }

    pub fn from_json(file: &VectorJson, tol: f64) -> Result<Self, MeasurementError> {
        PureState::new(file.decode().map_err(MeasurementError::Malformed)?, tol)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome {
    Pass,
    Fail,
}

impl std::fmt::Display for Outcome {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.pad(match self {
            Outcome::Pass => "pass",
            Outcome::Fail => "fail",
        })
    }
}

fn check_dims(s: &PureState, p: &Subspace) -> Result<(), MeasurementError> {
    if s.dim() != p.ambient_dim() {
        return Err(MeasurementError::DimensionMismatch { state: s.dim(), subspace: p.ambient_dim() });
    }
    Ok(())
}

/// `‖P s‖²`
pub fn pass_probability(s: &PureState, p: &Subspace) -> Result<f64, MeasurementError> {
    check_dims(s, p)?;
    Ok((p.projector() * s.vector()).norm_squared().clamp(0.0, 1.0))
}

/// Lüders rule: the post-test state is the normalised projection onto the
/// subspace (pass) or its complement (fail). A branch with probability at
/// most `tol` is impossible and reported as step 0.
pub fn luders_update(
    s: &PureState,
    p: &Subspace,
    outcome: Outcome,
    tol: f64,
) -> Result<(PureState, f64), MeasurementError> {
    check_dims(s, p)?;
    let proj = match outcome {
        Outcome::Pass => p.projector(),
        Outcome::Fail => CMatrix::identity(s.dim(), s.dim()) - p.projector(),
    };
    let v = proj * s.vector();
    let probability = v.norm_squared();
    if probability <= tol {
        return Err(MeasurementError::ImpossibleBranch { step: 0, probability });
    }
    Ok((PureState { vector: v.unscale(probability.sqrt()) }, probability.min(1.0)))
}

#[derive(Debug, Clone, PartialEq)]
pub struct TestStep {
    pub label: String,
    pub subspace: Subspace,
    pub outcome: Outcome,
    /// Probability of `outcome` conditional on the preceding steps.
    pub probability: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Policy {
    AllPass,
    Sample { seed: u64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct MeasurementRecord {
    pub initial: PureState,
    pub steps: Vec<TestStep>,
    pub final_state: PureState,
}

pub fn run_sequence(
    s: &PureState,
    tests: &[(String, Subspace)],
    policy: Policy,
    tol: f64,
) -> Result<MeasurementRecord, MeasurementError> {
    let mut rng = match policy {
        Policy::Sample { seed } => Some(ChaCha8Rng::seed_from_u64(seed)),
        Policy::AllPass => None,
    };
    let mut state = s.clone();
    let mut steps = Vec::with_capacity(tests.len());
    for (i, (label, p)) in tests.iter().enumerate() {
        let outcome = match rng.as_mut() {
            None => Outcome::Pass,
            Some(rng) => {
                let pass = pass_probability(&state, p)?;
                if pass <= tol {
                    Outcome::Fail
                } else if 1.0 - pass <= tol || rng.random::<f64>() < pass {
                    Outcome::Pass
                } else {
                    Outcome::Fail
                }
            }
        };
        let (next, probability) = luders_update(&state, p, outcome, tol).map_err(|e| match e {
            MeasurementError::ImpossibleBranch { probability, .. } => {
                MeasurementError::ImpossibleBranch { step: i, probability }
            }
            other => other,
        })?;
        steps.push(TestStep { label: label.clone(), subspace: p.clone(), outcome, probability });
        state = next;
    }
    Ok(MeasurementRecord { initial: s.clone(), steps, final_state: state })
}

impl MeasurementRecord {
    /// Replays every step from the initial state and compares probabilities
    /// and the final vector within `tol`.
    pub fn validate(&self, tol: f64) -> Result<(), MeasurementError> {
        let mut state = self.initial.clone();
        for (i, step) in self.steps.iter().enumerate() {
            let (next, p) = luders_update(&state, &step.subspace, step.outcome, tol)
                .map_err(|_| MeasurementError::ReplayMismatch(i))?;
            if (p - step.probability).abs() > tol {
                return Err(MeasurementError::ReplayMismatch(i));
            }
            state = next;
        }
        if state.dim() != self.final_state.dim() || (state.vector() - self.final_state.vector()).camax() > tol {
            return Err(MeasurementError::FinalStateMismatch);
        }
        Ok(())
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.steps.iter().map(|s| s.probability).collect()
    }

    pub fn to_json(&self) -> RecordJson {
        RecordJson {
            initial: self.initial.to_json(),
            steps: self
                .steps
                .iter()
                .map(|s| StepJson {
                    label: s.label.clone(),
                    outcome: s.outcome,
                    probability: s.probability,
                    subspace: s.subspace.to_json(),
                })
                .collect(),
            final_state: self.final_state.to_json(),
        }
    }

    pub fn from_json(file: &RecordJson, tol: f64) -> Result<Self, MeasurementError> {
        let steps = file
            .steps
            .iter()
            .map(|s| {
                Ok(TestStep {
                    label: s.label.clone(),
                    subspace: Subspace::from_json(&s.subspace)?,
                    outcome: s.outcome,
                    probability: s.probability,
                })
            })
            .collect::<Result<Vec<_>, MeasurementError>>()?;
        Ok(MeasurementRecord {
            initial: PureState::from_json(&file.initial, tol)?,
            steps,
            final_state: PureState::from_json(&file.final_state, tol)?,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StepJson {
    pub label: String,
    pub outcome: Outcome,
    pub probability: f64,
    pub subspace: SubspaceJson,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RecordJson {
    pub initial: VectorJson,
    pub steps: Vec<StepJson>,
    #[serde(rename = "final")]
    pub final_state: VectorJson,
}

/// `<s|P_A P_B P_A|s> = ‖P_B P_A s‖²`: probability that an `A`-test
/// followed by a `B`-test both pass.
pub fn seq_truth_probability(s: &PureState, a: &Subspace, b: &Subspace) -> Result<f64, MeasurementError> {
    check_dims(s, a)?;
    check_dims(s, b)?;
    Ok((b.projector() * a.projector() * s.vector()).norm_squared())
}

/// Operands of a (possibly nested) sequential conjunction in temporal order.
/// Only elementary propositions can be tested.
pub fn flatten_seq(f: &Formula) -> Result<Vec<String>, MeasurementError> {
    fn go(f: &Formula, out: &mut Vec<String>) -> Result<(), MeasurementError> {
        match f {
            Formula::Seq(a, b) => {
                go(a, out)?;
                go(b, out)
            }
            Formula::Elementary(name) => {
                out.push(name.clone());
                Ok(())
            }
            other => Err(MeasurementError::CompoundOperand(other.to_string())),
        }
    }
    let mut out = Vec::new();
    go(f, &mut out)?;
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CommensurabilityVerdict {
    pub commuting: bool,
    /// Every examined state in `A` kept its `A`-result across the `B`-test.
    pub preserved: bool,
    pub trials: usize,
    pub max_flip_probability: f64,
    pub witness: Option<VectorJson>,
}

/// Probability that a state `s` in `A` fails a second `A`-test after an
/// interposed, unread `B`-test.
pub fn flip_probability(s: &PureState, a: &Subspace, b: &Subspace) -> Result<f64, MeasurementError> {
    check_dims(s, a)?;
    check_dims(s, b)?;
    let d = s.dim();
    let id = CMatrix::identity(d, d);
    let (pa, pb) = (a.projector(), b.projector());
    let not_a = &id - &pa;
    let via_pass = (&not_a * &pb * s.vector()).norm_squared();
    let via_fail = (&not_a * (&id - &pb) * s.vector()).norm_squared();
    Ok(via_pass + via_fail)
}

/// Commuting subspaces: samples `trials` seeded states in `A` and checks
/// the flip probability stays within `tol`. Otherwise returns the state in
/// `A` with the largest flip probability as a witness of restricted
/// availability.
pub fn commensurability_witness(
    a: &Subspace,
    b: &Subspace,
    trials: usize,
    seed: u64,
    tol: f64,
) -> Result<CommensurabilityVerdict, MeasurementError> {
    let commuting = a.commutes(b, tol)?;
    if commuting || a.dim() == 0 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut worst = 0.0f64;
        let mut examined = 0;
        if a.dim() > 0 {
            for _ in 0..trials {
                let coef = hilbert::random_unit_vector(&mut rng, a.dim());
                let s = PureState::normalized(a.basis() * coef)?;
                worst = worst.max(flip_probability(&s, a, b)?);
                examined += 1;
            }
        }
        return Ok(CommensurabilityVerdict {
            commuting,
            preserved: worst <= tol,
            trials: examined,
            max_flip_probability: worst,
            witness: None,
        });
    }
    // For s in A the flip probability is 2‖(I - P_A) P_B s‖², maximised by
    // the top right singular vector of (I - P_A) P_B restricted to A.
    let d = a.ambient_dim();
    let m = (CMatrix::identity(d, d) - a.projector()) * b.projector() * a.basis();
    let (values, vectors) = linalg::hermitian_eigen(&(m.adjoint() * &m));
    let top = (0..values.len()).max_by(|&i, &j| values[i].total_cmp(&values[j])).expect("A is nonzero");
    let s = PureState::normalized(a.basis() * vectors.column(top))?;
    let s = fix_phase(s);
    let flip = flip_probability(&s, a, b)?;
    Ok(CommensurabilityVerdict {
        commuting,
        preserved: flip <= tol,
        trials: 1,
        max_flip_probability: flip,
        witness: (flip > tol).then(|| s.to_json()),
    })
}

/// Global phase chosen so the first non-negligible entry is real positive.
fn fix_phase(s: PureState) -> PureState {
    match s.vector.iter().find(|z| z.norm() > 1e-12) {
        Some(&z) => {
            let phase = z.conj() / z.norm();
            PureState { vector: s.vector.map(|e| e * phase) }
        }
        None => s,
    }
}
