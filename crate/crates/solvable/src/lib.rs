//! Partitioning of qubit Hamiltonians into exactly solvable fragments.
//!
//! The crate is organized around the pipeline:
//!
//! 1. [`pauli`] — Pauli strings in symplectic GF(2) form, GF(2) linear
//!    algebra, Clifford tableaus.
//! 2. [`hamgraph`] — anti-compatibility graphs, twin classes, quotient
//!    graphs, line-graph recognition with Krausz decompositions and root
//!    graphs.
//! 3. [`classify`] — predicates for the solvability classes (FC, AC, NC,
//!    the term-wise-commuting and free-fermionic variants, and their
//!    symmetry-augmented generalizations).
//! 4. [`partition`] — greedy sorted-insertion partitioning into fragments
//!    of a chosen class.
//! 5. [`factor`] — factorization of a symmetry-augmented fragment into
//!    Pauli symmetries, per-component so-algebra generators, and symmetry
//!    polynomials.
//! 6. [`solver`] — exact sector spectra via skew-symmetric canonical forms,
//!    statevector oracles, ground states, measurement plans and shot
//!    simulation, and the variance metric.
//! 7. [`io`] — the Hamiltonian text-file format.

pub mod classify;
pub mod factor;
pub mod hamgraph;
pub mod io;
pub mod oracle;
pub mod partition;
pub mod pauli;
pub mod solver;

pub use pauli::{Hamiltonian, PauliOp, Phase, WeightedTerm};
