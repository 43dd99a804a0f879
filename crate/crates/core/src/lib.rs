//! Vector model of three-qubit pure-state entanglement.
//!
//! The crate maps a three-qubit state onto Plücker coordinates of its three
//! bipartitions, rotates them into "q-vectors" on which two-qubit `SU(4)`
//! dynamics acts as real `SO(6)` rotations, and reduces the three q-vectors to
//! the complex 3-vectors `A`, `B`, `C`. All two- and three-party entanglement
//! measures follow from dot products of those vectors.
//!
//! Module map:
//!
//! * [`state`]: amplitudes, partitions, unitary application, reduced density matrices
//! * [`pluecker`]: p-vectors, the `Ω` form, the magic Bell basis and q-vectors
//! * [`abc`]: the `A`, `B`, `C` vectors and gauge fixing
//! * [`tangles`]: three-tangle, two-tangles, one-vs-rest concurrences
//! * [`so6`]: generator tables, Hamiltonian lift and dual-track evolution
//! * [`oracle`]: density-matrix reference measures, independent of the q-space stack
//! * [`recipes`]: control sequences and their verification
//! * [`selftest`]: the seeded invariant battery

pub mod abc;
pub mod error;
pub mod io;
pub mod linalg;
pub mod oracle;
pub mod pauli;
pub mod pluecker;
pub mod recipes;
pub mod sampling;
pub mod selftest;
pub mod so6;
pub mod state;
pub mod tangles;

pub use abc::{extract_triple, fix_gauge, split, AlphaBeta, GaugedTriple, GaugedVector, VectorTriple};
pub use error::{Error, Result};
pub use linalg::C64;
pub use oracle::OracleReport;
pub use pauli::{Pauli, PauliLabel};
pub use pluecker::{pluecker_pvector, qvector, to_qvector, PVector, PlueckerMatrix, QVector};
pub use recipes::{builtin_recipes, ControlStep, Recipe};
pub use so6::{GeneratorTable, LiftedHamiltonian, PairHamiltonian};
pub use state::{Pair, Partition, Qubit, ReducedDensity, Subsystem, ThreeQubitState};
pub use tangles::TangleReport;
