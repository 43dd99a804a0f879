//! Plücker coordinates of the three bipartitions and the q-vector change of variables.
//!
//! For each partition the 4×2 amplitude matrix has six 2×2 minors. They are
//! packed as `p = (P₁₂, P₁₃, P₁₄, P₂₃, P₂₄, P₃₄)` and satisfy the quadratic
//! relation `pᵀ Ω p = 0`. The unitary `U_pq` maps `Ω` to the identity, so the
//! q-vector `q = U_pq† p` obeys `q·q = 0` and two-qubit dynamics on it is a
//! real rotation.

use std::sync::LazyLock;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, c, CMat4, CMat6, CVec3, CVec6, RMat6, C64, I, ONE, ZERO};
use crate::state::{Partition, ThreeQubitState};

/// Plücker relation tolerance when converting p → q.
pub const PLUECKER_TOL: f64 = 1e-8;

/// Index pairs (r, r′), zero-based, in p-vector order.
pub const PVECTOR_ORDER: [(usize, usize); 6] = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];

/// The symmetric form with `Ω₁₆ = Ω₃₄ = 1` and `Ω₂₅ = −1` (and transposes).
///
/// The −1 sits on the anti-diagonal at (2,5); placing it at (2,4) breaks the
/// Plücker identity (see `omega_annihilates_random_pvectors`).
pub static OMEGA: LazyLock<RMat6> = LazyLock::new(|| {
    let mut m = RMat6::zeros();
    m[(0, 5)] = 1.0;
    m[(5, 0)] = 1.0;
    m[(2, 3)] = 1.0;
    m[(3, 2)] = 1.0;
    m[(1, 4)] = -1.0;
    m[(4, 1)] = -1.0;
    m
});

/// `p = U_pq q`, with `U_pqᵀ Ω U_pq = 1`.
pub static U_PQ: LazyLock<CMat6> = LazyLock::new(|| {
    let h = c(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    #[rustfmt::skip]
    let rows = [
        [I,  ONE, ZERO, ZERO, ZERO, ZERO],
        [ZERO, ZERO, ZERO, -ONE, I, ZERO],
        [ZERO, ZERO, -I, ZERO, ZERO, ONE],
        [ZERO, ZERO, I, ZERO, ZERO, ONE],
        [ZERO, ZERO, ZERO, ONE, I, ZERO],
        [-I, ONE, ZERO, ZERO, ZERO, ZERO],
    ];
    CMat6::from_fn(|r, col| rows[r][col] * h)
});

/// Magic Bell basis transform on a qubit pair.
pub static U_BELL: LazyLock<CMat4> = LazyLock::new(|| {
    let h = c(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    #[rustfmt::skip]
    let rows = [
        [ZERO, I, I, ZERO],
        [ZERO, -ONE, ONE, ZERO],
        [I, ZERO, ZERO, -I],
        [ONE, ZERO, ZERO, ONE],
    ];
    CMat4::from_fn(|r, col| rows[r][col] * h)
});

/// Antisymmetric 4×4 matrix of 2×2 minors for one partition.
#[derive(Clone, Debug, PartialEq)]
pub struct PlueckerMatrix {
    pub partition: Partition,
    pub entries: CMat4,
}

impl PlueckerMatrix {
    pub fn from_state(state: &ThreeQubitState, partition: Partition) -> Self {
        Self::from_amplitudes(state.amplitudes(), partition)
    }

    /// Works on unnormalized amplitudes, so `SL(2,ℂ)` images can be fed in.
    pub fn from_amplitudes(amps: &[C64; 8], partition: Partition) -> Self {
        let amp = |i: usize, j: usize, k: usize| amps[4 * i + 2 * j + k];
        // Each partition written out explicitly rather than by relabeling.
        let minor = |n: usize, m: usize, k: usize, l: usize| match partition {
            Partition::A => amp(0, n, m) * amp(1, k, l) - amp(1, n, m) * amp(0, k, l),
            Partition::B => amp(m, 0, n) * amp(l, 1, k) - amp(m, 1, n) * amp(l, 0, k),
            Partition::C => amp(n, m, 0) * amp(k, l, 1) - amp(n, m, 1) * amp(k, l, 0),
        };
        let entries = CMat4::from_fn(|r, rp| minor(r >> 1, r & 1, rp >> 1, rp & 1));
        PlueckerMatrix { partition, entries }
    }

    pub fn to_pvector(&self) -> PVector {
        PVector {
            partition: self.partition,
            components: CVec6::from_fn(|k, _| {
                let (r, rp) = PVECTOR_ORDER[k];
                self.entries[(r, rp)]
            }),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct PVector {
    pub partition: Partition,
    pub components: CVec6,
}

impl PVector {
    /// `pᵀ Ω p`; zero for any decomposable bivector.
    pub fn pluecker_residual(&self) -> C64 {
        let omega = OMEGA.map(|x| c(x, 0.0));
        (self.components.transpose() * omega * self.components)[(0, 0)]
    }

    pub fn norm_sqr(&self) -> f64 {
        linalg::norm_sqr(&self.components)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct QVector {
    pub partition: Partition,
    pub components: CVec6,
}

impl QVector {
    pub fn new(partition: Partition, components: CVec6) -> Self {
        QVector { partition, components }
    }

    /// `(q₁, q₂, q₃)`
    pub fn alpha(&self) -> CVec3 {
        self.components.fixed_rows::<3>(0).into_owned()
    }

    /// `(q₄, q₅, q₆)`
    pub fn beta(&self) -> CVec3 {
        self.components.fixed_rows::<3>(3).into_owned()
    }

    /// Unconjugated `q·q`.
    pub fn self_dot(&self) -> C64 {
        linalg::bilinear(&self.components, &self.components)
    }

    pub fn norm_sqr(&self) -> f64 {
        linalg::norm_sqr(&self.components)
    }

    pub fn max_abs_diff(&self, other: &QVector) -> f64 {
        linalg::max_abs_diff(&self.components, &other.components)
    }

    /// Real rotation applied to the complex vector.
    pub fn rotated(&self, r: &RMat6) -> QVector {
        QVector::new(self.partition, r.map(|x| c(x, 0.0)) * self.components)
    }
}

/// Wire form `{"partition": s, "q": [[re, im] × 6]}`.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct QVectorJson {
    pub partition: Partition,
    pub q: Vec<[f64; 2]>,
}

impl From<&QVector> for QVectorJson {
    fn from(q: &QVector) -> Self {
        QVectorJson {
            partition: q.partition,
            q: q.components.iter().map(|z| [z.re, z.im]).collect(),
        }
    }
}

impl TryFrom<QVectorJson> for QVector {
    type Error = Error;

    fn try_from(j: QVectorJson) -> Result<Self> {
        if j.q.len() != 6 {
            return Err(Error::Parse(format!("q-vector needs 6 components, got {}", j.q.len())));
        }
        if j.q.iter().flatten().any(|x| !x.is_finite()) {
            return Err(Error::Parse("q-vector components must be finite".into()));
        }
        Ok(QVector::new(
            j.partition,
            CVec6::from_fn(|k, _| c(j.q[k][0], j.q[k][1])),
        ))
    }
}

pub fn pluecker_pvector(state: &ThreeQubitState, partition: Partition) -> PVector {
    PlueckerMatrix::from_state(state, partition).to_pvector()
}

/// `q = U_pq† p`. Rejects inputs violating the Plücker relation by more than [`PLUECKER_TOL`].
pub fn to_qvector(p: &PVector) -> Result<QVector> {
    let residual = p.pluecker_residual().norm();
    if residual > PLUECKER_TOL {
        return Err(Error::validation(format!(
            "p-vector violates the Plücker relation (|pᵀΩp| = {residual:.3e})"
        )));
    }
    Ok(QVector::new(p.partition, U_PQ.adjoint() * p.components))
}

pub fn qvector(state: &ThreeQubitState, partition: Partition) -> Result<QVector> {
    to_qvector(&pluecker_pvector(state, partition))
}

/// All three q-vectors, ordered by partition number.
pub fn qvectors(state: &ThreeQubitState) -> Result<[QVector; 3]> {
    Ok([
        qvector(state, Partition::A)?,
        qvector(state, Partition::B)?,
        qvector(state, Partition::C)?,
    ])
}

/// Six independent entries of `P_B = U_B P⁽¹⁾ U_Bᵀ`, in p-vector order.
pub fn bell_basis_pvector(state: &ThreeQubitState) -> CVec6 {
    let p = PlueckerMatrix::from_state(state, Partition::A).entries;
    let pb = *U_BELL * p * U_BELL.transpose();
    CVec6::from_fn(|k, _| {
        let (r, rp) = PVECTOR_ORDER[k];
        pb[(r, rp)]
    })
}
