//! Reference entanglement measures computed from amplitudes and reduced
//! density matrices only.
//!
//! Nothing here touches Plücker coordinates or q-vectors, so agreement with
//! [`crate::tangles`] is a genuine cross-check.

use serde::{Deserialize, Serialize};

use crate::linalg::{self, c, CMat4, CVec4};
use crate::pauli::Pauli;
use crate::state::{Pair, Qubit, Subsystem, ThreeQubitState};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OracleReport {
    pub tau_abc: f64,
    pub tau_bc: f64,
    pub tau_ac: f64,
    pub tau_ab: f64,
    pub tau_a_bc: f64,
    pub tau_b_ca: f64,
    pub tau_c_ab: f64,
}

impl OracleReport {
    /// Same order as [`crate::tangles::TangleReport::measures`].
    pub fn measures(&self) -> [f64; 7] {
        [
            self.tau_abc,
            self.tau_bc,
            self.tau_ac,
            self.tau_ab,
            self.tau_a_bc,
            self.tau_b_ca,
            self.tau_c_ab,
        ]
    }
}

/// `4 det ρ_x` for the single-qubit reduced density.
pub fn concurrence_one_vs_rest(state: &ThreeQubitState, qubit: Qubit) -> f64 {
    let rho = state
        .reduced_density(Subsystem::Qubit(qubit))
        .as_2x2()
        .expect("single-qubit reduced density is 2×2");
    (4.0 * rho.determinant().re).max(0.0)
}

/// Below this a density eigenvalue counts as zero in [`wootters_concurrence`].
pub const RANK_CUTOFF: f64 = 1e-14;

/// Wootters concurrence of a two-qubit density matrix.
///
/// With `ρ = E P E†`, the square roots of the eigenvalues of `ρ(σ_y⊗σ_y)ρ*(σ_y⊗σ_y)`
/// are the singular values of `√P Eᵀ(σ_y⊗σ_y)E √P`. Taking them as singular
/// values keeps the vanishing ones at round-off level instead of its square root.
pub fn wootters_concurrence(rho: &CMat4) -> f64 {
    let yy = linalg::kron2(&Pauli::Y.matrix(), &Pauli::Y.matrix());
    let rho = (rho + rho.adjoint()) * c(0.5, 0.0);
    let (values, e) = linalg::hermitian_eig(&rho);
    let d = CMat4::from_diagonal(&CVec4::from_fn(|k, _| {
        let p = values[k];
        c(if p > RANK_CUTOFF { p.sqrt() } else { 0.0 }, 0.0)
    }));
    let t = d * e.transpose() * yy * e * d;
    let mut lambda: Vec<f64> = t.singular_values().iter().copied().collect();
    lambda.sort_by(|a, b| b.total_cmp(a));
    (lambda[0] - lambda[1] - lambda[2] - lambda[3]).max(0.0)
}

/// Squared Wootters concurrence of the pair's reduced density.
pub fn two_tangle(state: &ThreeQubitState, pair: Pair) -> f64 {
    let rho = state
        .reduced_density(Subsystem::Pair(pair))
        .as_4x4()
        .expect("pair reduced density is 4×4");
    wootters_concurrence(&rho).powi(2)
}

/// `4|d₁ − 2d₂ + 4d₃|` (Cayley hyperdeterminant of the amplitude cube).
pub fn three_tangle(state: &ThreeQubitState) -> f64 {
    let a = |i, j, k| state.amplitude(i, j, k);
    let d1 = a(0, 0, 0).powi(2) * a(1, 1, 1).powi(2)
        + a(0, 0, 1).powi(2) * a(1, 1, 0).powi(2)
        + a(0, 1, 0).powi(2) * a(1, 0, 1).powi(2)
        + a(1, 0, 0).powi(2) * a(0, 1, 1).powi(2);
    let d2 = a(0, 0, 0) * a(1, 1, 1) * a(0, 1, 1) * a(1, 0, 0)
        + a(0, 0, 0) * a(1, 1, 1) * a(1, 0, 1) * a(0, 1, 0)
        + a(0, 0, 0) * a(1, 1, 1) * a(1, 1, 0) * a(0, 0, 1)
        + a(0, 1, 1) * a(1, 0, 0) * a(1, 0, 1) * a(0, 1, 0)
        + a(0, 1, 1) * a(1, 0, 0) * a(1, 1, 0) * a(0, 0, 1)
        + a(1, 0, 1) * a(0, 1, 0) * a(1, 1, 0) * a(0, 0, 1);
    let d3 = a(0, 0, 0) * a(1, 1, 0) * a(1, 0, 1) * a(0, 1, 1) + a(1, 1, 1) * a(0, 0, 1) * a(0, 1, 0) * a(1, 0, 0);
    4.0 * (d1 - d2 * c(2.0, 0.0) + d3 * c(4.0, 0.0)).norm()
}

pub fn oracle_report(state: &ThreeQubitState) -> OracleReport {
    OracleReport {
        tau_abc: three_tangle(state),
        tau_bc: two_tangle(state, Pair::Bc),
        tau_ac: two_tangle(state, Pair::Ca),
        tau_ab: two_tangle(state, Pair::Ab),
        tau_a_bc: concurrence_one_vs_rest(state, Qubit::A),
        tau_b_ca: concurrence_one_vs_rest(state, Qubit::B),
        tau_c_ab: concurrence_one_vs_rest(state, Qubit::C),
    }
}
