//! Quantum-logic workbench: a formula language with sequential conjunction,
//! finite orthomodular lattices, the subspace lattice of a finite-dimensional
//! complex Hilbert space, effects and POVMs, and sequences of projective tests.

pub mod effects;
pub mod formula;
pub mod omlattice;
pub mod hilbert;
pub mod linalg;
pub mod measurement;
pub mod semantics;
