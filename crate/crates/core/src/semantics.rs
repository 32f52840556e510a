//! Algebraic semantics: formulas evaluated in ortholattice models.
//!
//! Conjunction and disjunction are meet and join, negation is the
//! orthocomplement and implication is the Sasaki hook `a' | (a & b)`, which is
//! the top element exactly when `a <= b`. A formula is formally true over a
//! family of models when every assignment in every model sends it to the top.
//! Verdicts are relative to the family; they are not a decision procedure for
//! orthomodular logic as a whole.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::formula::{self, Formula};
use crate::hilbert::{self, HilbertError, Subspace};
use crate::linalg::TOL;
use crate::omlattice::{standard, Elem, Law, LatticeError, OrthoLattice, Standard};

/// Valuations scanned before a search gives up as inconclusive.
pub const DEFAULT_BUDGET: u64 = 10_000_000;

/// Seeds of the random rays behind the Hilbert members of the default family.
pub const HILBERT_SEEDS: [(usize, u64, u64); 2] = [(2, 11, 12), (3, 21, 22)];

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SemanticsError {
    #[error("sequential conjunction has no lattice value; evaluate it with the measurement module")]
    SequentialConnective,
    #[error("elementary proposition {0:?} is not assigned")]
    Unassigned(String),
    #[error("model {0} is not orthomodular")]
    NotOrthomodular(String),
    #[error("model family is empty")]
    EmptyFamily,
    #[error("search budget exhausted after {0} valuations without a verdict")]
    Inconclusive(u64),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Hilbert(#[from] HilbertError),
}

#[derive(Debug, Clone)]
pub struct Model {
    pub name: String,
    pub lattice: OrthoLattice,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FamilyKind {
    /// boolean(1..3), MO(1..4) and two Hilbert-generated lattices.
    Default,
    /// boolean(1..3) only.
    Boolean,
    /// The non-Boolean members of the default family.
    Oml,
    /// Default members that are atomic and satisfy the covering law.
    Atomic,
}

impl FromStr for FamilyKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "default" => Ok(FamilyKind::Default),
            "boolean" => Ok(FamilyKind::Boolean),
            "oml" => Ok(FamilyKind::Oml),
            "atomic" => Ok(FamilyKind::Atomic),
            _ => Err(format!("unknown model family {s:?} (default, boolean, oml, atomic)")),
        }
    }
}

impl fmt::Display for FamilyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FamilyKind::Default => "default",
            FamilyKind::Boolean => "boolean",
            FamilyKind::Oml => "oml",
            FamilyKind::Atomic => "atomic",
        })
    }
}

#[derive(Debug, Clone)]
pub struct ModelFamily {
    pub description: String,
    pub models: Vec<Model>,
}

fn standard_model(which: Standard) -> Model {
    Model { name: which.to_string(), lattice: standard(which).expect("standard parameters are in range") }
}

/// Lattice generated by two seeded random rays in `C^d`.
pub fn hilbert_model(d: usize, seed_a: u64, seed_b: u64) -> Result<Model, SemanticsError> {
    let name = format!("hilbert(C{d};{seed_a},{seed_b})");
    let gens = vec![
        ("p".to_string(), hilbert::random_subspace(d, 1, seed_a)?),
        ("q".to_string(), hilbert::random_subspace(d, 1, seed_b)?),
    ];
    let hl = hilbert::as_lattice(&name, &gens, 64, TOL)?;
    Ok(Model { name, lattice: hl.lattice })
}

impl ModelFamily {
    pub fn new(description: impl Into<String>, models: Vec<Model>) -> Self {
        ModelFamily { description: description.into(), models }
    }

    pub fn of_kind(kind: FamilyKind) -> Self {
        let booleans = || (1..=3).map(|n| standard_model(Standard::Boolean(n)));
        let mos = || (1..=4).map(|n| standard_model(Standard::Mo(n)));
        let hilberts = || {
            HILBERT_SEEDS
                .iter()
                .map(|&(d, a, b)| hilbert_model(d, a, b).expect("default Hilbert models close finitely"))
        };
        let models: Vec<Model> = match kind {
            FamilyKind::Boolean => booleans().collect(),
            FamilyKind::Default => booleans().chain(mos()).chain(hilberts()).collect(),
            FamilyKind::Oml => mos()
                .chain(hilberts())
                .filter(|m| !m.lattice.check_law(Law::Distributive).holds)
                .collect(),
            FamilyKind::Atomic => booleans()
                .chain(mos())
                .chain(hilberts())
                .filter(|m| m.lattice.check_law(Law::Atomic).holds && m.lattice.check_law(Law::Covering).holds)
                .collect(),
        };
        let names: Vec<&str> = models.iter().map(|m| m.name.as_str()).collect();
        ModelFamily::new(format!("{kind}: {}", names.join(", ")), models)
    }

    pub fn find(&self, name: &str) -> Option<&Model> {
        self.models.iter().find(|m| m.name == name)
    }
}

#[derive(Debug, Clone)]
pub struct Valuation<'a> {
    pub model: &'a OrthoLattice,
    pub assignment: BTreeMap<String, Elem>,
}

impl<'a> Valuation<'a> {
    pub fn new(model: &'a OrthoLattice) -> Self {
        Valuation { model, assignment: BTreeMap::new() }
    }

    /// Assigns by element label.
    pub fn with(mut self, name: &str, label: &str) -> Result<Self, LatticeError> {
        let e = self.model.elem(label)?;
        self.assignment.insert(name.to_string(), e);
        Ok(self)
    }
}

/// Structural recursion into the model's operations.
pub fn evaluate(f: &Formula, v: &Valuation<'_>) -> Result<Elem, SemanticsError> {
    if !v.model.is_orthomodular() {
        return Err(SemanticsError::NotOrthomodular(v.model.name().to_string()));
    }
    eval_rec(f, v)
}

fn eval_rec(f: &Formula, v: &Valuation<'_>) -> Result<Elem, SemanticsError> {
    let l = v.model;
    Ok(match f {
        Formula::Elementary(n) => *v.assignment.get(n).ok_or_else(|| SemanticsError::Unassigned(n.clone()))?,
        Formula::Top => l.top(),
        Formula::Bottom => l.bottom(),
        Formula::Not(c) => l.ortho(eval_rec(c, v)?),
        Formula::And(a, b) => l.meet(eval_rec(a, v)?, eval_rec(b, v)?),
        Formula::Or(a, b) => l.join(eval_rec(a, v)?, eval_rec(b, v)?),
        Formula::Implies(a, b) => l.hook_unchecked(eval_rec(a, v)?, eval_rec(b, v)?),
        Formula::Seq(..) => return Err(SemanticsError::SequentialConnective),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Relation {
    /// `A ≡ B`: interchangeable in proofs. Collapses to equality of values here.
    ProofEquiv,
    /// `A = B`: equal truth values.
    ValueEquiv,
    /// `A ≤ B`.
    Implies,
}

pub fn holds(rel: Relation, fa: &Formula, fb: &Formula, v: &Valuation<'_>) -> Result<bool, SemanticsError> {
    let a = evaluate(fa, v)?;
    let b = evaluate(fb, v)?;
    Ok(match rel {
        Relation::ProofEquiv | Relation::ValueEquiv => a == b,
        Relation::Implies => v.model.leq(a, b),
    })
}

#[derive(Debug, Clone, Copy)]
enum Op {
    Var(usize),
    Top,
    Bottom,
    Not,
    And,
    Or,
    Implies,
}

/// Postfix program over variable slots, for tight scanning loops.
struct Compiled {
    vars: Vec<String>,
    ops: Vec<Op>,
}

impl Compiled {
    fn new(f: &Formula) -> Result<Self, SemanticsError> {
        let vars: Vec<String> = f.elementaries().into_iter().collect();
        let mut ops = Vec::new();
        Self::emit(f, &vars, &mut ops)?;
        Ok(Compiled { vars, ops })
    }

    fn emit(f: &Formula, vars: &[String], ops: &mut Vec<Op>) -> Result<(), SemanticsError> {
        match f {
            Formula::Elementary(n) => ops.push(Op::Var(vars.binary_search(n).expect("collected above"))),
            Formula::Top => ops.push(Op::Top),
            Formula::Bottom => ops.push(Op::Bottom),
            Formula::Not(c) => {
                Self::emit(c, vars, ops)?;
                ops.push(Op::Not);
            }
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                Self::emit(a, vars, ops)?;
                Self::emit(b, vars, ops)?;
                ops.push(match f {
                    Formula::And(..) => Op::And,
                    Formula::Or(..) => Op::Or,
                    _ => Op::Implies,
                });
            }
            Formula::Seq(..) => return Err(SemanticsError::SequentialConnective),
        }
        Ok(())
    }

    fn run(&self, l: &OrthoLattice, slots: &[Elem], stack: &mut Vec<Elem>) -> Elem {
        stack.clear();
        for op in &self.ops {
            let v = match *op {
                Op::Var(i) => slots[i],
                Op::Top => l.top(),
                Op::Bottom => l.bottom(),
                Op::Not => {
                    let a = stack.pop().expect("well-formed program");
                    l.ortho(a)
                }
                Op::And | Op::Or | Op::Implies => {
                    let b = stack.pop().expect("well-formed program");
                    let a = stack.pop().expect("well-formed program");
                    match op {
                        Op::And => l.meet(a, b),
                        Op::Or => l.join(a, b),
                        _ => l.hook_unchecked(a, b),
                    }
                }
            };
            stack.push(v);
        }
        stack.pop().expect("well-formed program")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome {
    Valid,
    Countermodel,
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Countermodel {
    pub model: String,
    /// Elementary name to element label.
    pub assignment: BTreeMap<String, String>,
    /// Label of the (non-top) value the formula takes.
    pub value: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidityReport {
    pub formula: String,
    pub family: String,
    pub outcome: Outcome,
    pub valid: bool,
    pub countermodel: Option<Countermodel>,
    pub models_scanned: usize,
    pub valuations_scanned: u64,
}

/// Scans models in family order and assignments lexicographically (first
/// elementary, in name order, varies slowest) and stops at the first
/// assignment whose value is not the top element.
pub fn find_countermodel(f: &Formula, family: &ModelFamily, budget: u64) -> Result<ValidityReport, SemanticsError> {
    if family.models.is_empty() {
        return Err(SemanticsError::EmptyFamily);
    }
    let program = Compiled::new(f)?;
    let k = program.vars.len();
    let mut report = ValidityReport {
        formula: formula::render(f),
        family: family.description.clone(),
        outcome: Outcome::Valid,
        valid: true,
        countermodel: None,
        models_scanned: 0,
        valuations_scanned: 0,
    };
    let mut stack = Vec::with_capacity(program.ops.len());
    for model in &family.models {
        let l = &model.lattice;
        if !l.is_orthomodular() {
            return Err(SemanticsError::NotOrthomodular(model.name.clone()));
        }
        let n = l.len();
        let mut slots = vec![0; k];
        loop {
            if report.valuations_scanned >= budget {
                report.outcome = Outcome::Inconclusive;
                report.valid = false;
                return Ok(report);
            }
            report.valuations_scanned += 1;
            let value = program.run(l, &slots, &mut stack);
            if value != l.top() {
                report.models_scanned += 1;
                report.outcome = Outcome::Countermodel;
                report.valid = false;
                report.countermodel = Some(Countermodel {
                    model: model.name.clone(),
                    assignment: program
                        .vars
                        .iter()
                        .zip(&slots)
                        .map(|(v, &e)| (v.clone(), l.label(e).to_string()))
                        .collect(),
                    value: l.label(value).to_string(),
                });
                return Ok(report);
            }
            if !advance(&mut slots, n) {
                break;
            }
        }
        report.models_scanned += 1;
    }
    Ok(report)
}

/// Odometer step, last slot fastest; false once every slot wrapped.
fn advance(slots: &mut [Elem], n: usize) -> bool {
    for s in slots.iter_mut().rev() {
        *s += 1;
        if *s < n {
            return true;
        }
        *s = 0;
    }
    false
}

/// Formal truth over the family, with the default valuation budget.
pub fn is_formally_true(f: &Formula, family: &ModelFamily) -> Result<ValidityReport, SemanticsError> {
    find_countermodel(f, family, DEFAULT_BUDGET)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Classification {
    QuantumValid,
    ClassicalOnly,
    InvalidEverywhere,
}

impl fmt::Display for Classification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Classification::QuantumValid => "quantum_valid",
            Classification::ClassicalOnly => "classical_only",
            Classification::InvalidEverywhere => "invalid_everywhere",
        })
    }
}

impl FromStr for Classification {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "quantum_valid" => Ok(Classification::QuantumValid),
            "classical_only" => Ok(Classification::ClassicalOnly),
            "invalid_everywhere" => Ok(Classification::InvalidEverywhere),
            _ => Err(format!("unknown classification {s:?}")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassifyReport {
    pub formula: String,
    pub classification: Classification,
    pub quantum: ValidityReport,
    pub classical: ValidityReport,
}

/// Valid over the default family, or only over Boolean models, or neither.
pub fn classify_law(f: &Formula) -> Result<ClassifyReport, SemanticsError> {
    classify_with(
        f,
        &ModelFamily::of_kind(FamilyKind::Default),
        &ModelFamily::of_kind(FamilyKind::Boolean),
        DEFAULT_BUDGET,
    )
}

pub fn classify_with(
    f: &Formula,
    quantum_family: &ModelFamily,
    boolean_family: &ModelFamily,
    budget: u64,
) -> Result<ClassifyReport, SemanticsError> {
    let quantum = find_countermodel(f, quantum_family, budget)?;
    let classical = find_countermodel(f, boolean_family, budget)?;
    for r in [&quantum, &classical] {
        if r.outcome == Outcome::Inconclusive {
            return Err(SemanticsError::Inconclusive(r.valuations_scanned));
        }
    }
    let classification = if quantum.valid {
        Classification::QuantumValid
    } else if classical.valid {
        Classification::ClassicalOnly
    } else {
        Classification::InvalidEverywhere
    };
    Ok(ClassifyReport { formula: formula::render(f), classification, quantum, classical })
}

/// Evaluation directly on subspaces of `C^d`, for spot checks outside any
/// finite closure.
pub fn evaluate_subspaces(
    f: &Formula,
    d: usize,
    assignment: &BTreeMap<String, Subspace>,
) -> Result<Subspace, SemanticsError> {
    Ok(match f {
        Formula::Elementary(n) => assignment.get(n).ok_or_else(|| SemanticsError::Unassigned(n.clone()))?.clone(),
        Formula::Top => Subspace::full(d),
        Formula::Bottom => Subspace::zero(d),
        Formula::Not(c) => evaluate_subspaces(c, d, assignment)?.ortho(),
        Formula::And(a, b) => evaluate_subspaces(a, d, assignment)?.meet(&evaluate_subspaces(b, d, assignment)?)?,
        Formula::Or(a, b) => evaluate_subspaces(a, d, assignment)?.join(&evaluate_subspaces(b, d, assignment)?)?,
        Formula::Implies(a, b) => {
            let a = evaluate_subspaces(a, d, assignment)?;
            let b = evaluate_subspaces(b, d, assignment)?;
            a.ortho().join(&a.meet(&b)?)?
        }
        Formula::Seq(..) => return Err(SemanticsError::SequentialConnective),
    })
}

/// A named formula with its expected classification.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CatalogueEntry {
    pub name: String,
    pub formula: String,
    pub expected: Classification,
}

/// The bundled law catalogue.
pub fn builtin_catalogue() -> Vec<CatalogueEntry> {
    serde_json::from_str(include_str!("../data/laws.json")).expect("bundled catalogue is valid JSON")
}
