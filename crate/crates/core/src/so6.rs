//! The `su(4) ≅ so(6)` correspondence on a qubit pair.
//!
//! Generators `t_nm` (`1 ≤ m < n ≤ 6`) are built from five anticommuting
//! elements `e₁…e₅` of a Clifford algebra: `t₆ᵢ = eᵢ`, `t_nm = e_n e_m`. They
//! close under `[t_nm, t_kp] = 2(δ_mp t_nk + δ_nk t_mp − δ_mk t_np − δ_np t_mk)`,
//! which is the algebra of `2I_nm` with `(I_nm)_ij = −δ_in δ_jm + δ_im δ_jn`.
//!
//! A pair Hamiltonian `H = Σ f_nm τ_nm` (`τ = −i t`) moves the pair's
//! partition q-vector as `q(t) = exp(2 f t) q(0)`.

use std::sync::LazyLock;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, c, CMat4, CMat6, RMat6, C64, I};
use crate::pauli::{Pauli, PauliLabel};
use crate::pluecker::{self, QVector, OMEGA, U_PQ};
use crate::state::{Pair, ThreeQubitState, UNITARY_TOL};

/// Track disagreement above this is an isomorphism failure.
pub const DUAL_TRACK_TOL: f64 = 1e-8;
/// Hermiticity tolerance for Hamiltonian input.
pub const HERMITIAN_TOL: f64 = 1e-10;
/// Antisymmetry tolerance for so(6) coefficient matrices.
pub const ANTISYMMETRY_TOL: f64 = 1e-12;

const fn label(a: Pauli, b: Pauli) -> PauliLabel {
    PauliLabel::new(a, b)
}

/// The generator table as written out by hand: `(n, m, sign, label)` with
/// `τ_nm = sign·σ_label`.
#[rustfmt::skip]
pub const TABULATED: [(usize, usize, f64, PauliLabel); 15] = {
    use Pauli::{I as E, X, Y, Z};
    [
        (2, 1,  1.0, label(Z, E)),
        (3, 1, -1.0, label(Y, E)),
        (3, 2,  1.0, label(X, E)),
        (4, 1, -1.0, label(X, X)),
        (4, 2, -1.0, label(Y, X)),
        (4, 3, -1.0, label(Z, X)),
        (5, 1, -1.0, label(X, Y)),
        (5, 2, -1.0, label(Y, Y)),
        (5, 3, -1.0, label(Z, Y)),
        (5, 4,  1.0, label(E, Z)),
        (6, 1, -1.0, label(X, Z)),
        (6, 2, -1.0, label(Y, Z)),
        (6, 3, -1.0, label(Z, Z)),
        (6, 4, -1.0, label(E, Y)),
        (6, 5,  1.0, label(E, X)),
    ]
};

/// Lower-triangle index pairs `(n, m)`, `n > m`, in table order.
pub const INDEX_PAIRS: [(usize, usize); 15] = [
    (2, 1),
    (3, 1),
    (3, 2),
    (4, 1),
    (4, 2),
    (4, 3),
    (5, 1),
    (5, 2),
    (5, 3),
    (5, 4),
    (6, 1),
    (6, 2),
    (6, 3),
    (6, 4),
    (6, 5),
];

/// `τ = sign·σ_label` on an ordered pair.
#[derive(Clone, Debug, PartialEq)]
pub struct PauliPairOp {
    pub pair: Pair,
    pub label: PauliLabel,
    pub sign: f64,
    pub matrix: CMat4,
}

impl PauliPairOp {
    fn new(pair: Pair, sign: f64, label: PauliLabel) -> Self {
        PauliPairOp {
            pair,
            label,
            sign,
            matrix: label.matrix() * c(sign, 0.0),
        }
    }

    /// Writes `m` as `±σ_label` if it is one.
    fn identify(pair: Pair, m: &CMat4) -> Option<Self> {
        for l in PauliLabel::all() {
            let coeff = (l.matrix() * m).trace() / c(4.0, 0.0);
            if (coeff.norm() - 1.0).abs() < 1e-12 && coeff.im.abs() < 1e-12 {
                let op = PauliPairOp::new(pair, coeff.re.signum(), l);
                if linalg::max_abs_diff(&op.matrix, m) < 1e-12 {
                    return Some(op);
                }
            }
        }
        None
    }

    /// `t = iτ`
    pub fn skew(&self) -> CMat4 {
        self.matrix * I
    }
}

/// One cell where the Clifford product and the hand-entered table differ.
#[derive(Clone, Debug, PartialEq)]
pub struct TableDisagreement {
    pub n: usize,
    pub m: usize,
    pub clifford: (f64, PauliLabel),
    pub tabulated: (f64, PauliLabel),
}

#[derive(Clone, Debug)]
pub struct GeneratorTable {
    pub pair: Pair,
    ops: Vec<PauliPairOp>,
    pub disagreements: Vec<TableDisagreement>,
}

/// First-grade Clifford elements `e₁…e₅`, `{eᵢ, eⱼ} = −2δᵢⱼ`.
pub fn clifford_elements() -> [CMat4; 5] {
    use Pauli::{I as E, X, Y, Z};
    let mi = -I;
    [
        label(X, Z).matrix() * mi,
        label(Y, Z).matrix() * mi,
        label(Z, Z).matrix() * mi,
        label(E, Y).matrix() * mi,
        label(E, X).matrix() * I,
    ]
}

fn slot(n: usize, m: usize) -> usize {
    INDEX_PAIRS
        .iter()
        .position(|&p| p == (n, m))
        .expect("index pair in range")
}

fn delta(a: usize, b: usize) -> f64 {
    if a == b {
        1.0
    } else {
        0.0
    }
}

impl GeneratorTable {
    /// Builds the table from Clifford products, checks the commutation
    /// relations and compares against [`TABULATED`].
    pub fn build(pair: Pair) -> Result<Self> {
        let e = clifford_elements();
        let mut ops = Vec::with_capacity(15);
        for &(n, m) in &INDEX_PAIRS {
            let t = if n == 6 { e[m - 1] } else { e[n - 1] * e[m - 1] };
            let tau = t * -I;
            let op = PauliPairOp::identify(pair, &tau)
                .ok_or_else(|| Error::consistency(format!("Clifford product t{n}{m} is not a signed Pauli pair")))?;
            ops.push(op);
        }
        let disagreements = TABULATED
            .iter()
            .zip(&ops)
            .filter(|((_, _, s, l), op)| *s != op.sign || *l != op.label)
            .map(|(&(n, m, s, l), op)| TableDisagreement {
                n,
                m,
                clifford: (op.sign, op.label),
                tabulated: (s, l),
            })
            .collect();
        let table = GeneratorTable {
            pair,
            ops,
            disagreements,
        };
        let err = table.commutator_defect();
        if err > 1e-12 {
            return Err(Error::consistency(format!(
                "generator table violates the so(6) commutation relations by {err:.3e}"
            )));
        }
        Ok(table)
    }

    /// Table built from [`TABULATED`] alone.
    pub fn tabulated(pair: Pair) -> Self {
        GeneratorTable {
            pair,
            ops: TABULATED
                .iter()
                .map(|&(_, _, s, l)| PauliPairOp::new(pair, s, l))
                .collect(),
            disagreements: Vec::new(),
        }
    }

    /// Same operators relabelled for another pair.
    pub fn for_pair(&self, pair: Pair) -> Self {
        let mut t = self.clone();
        t.pair = pair;
        for op in &mut t.ops {
            op.pair = pair;
        }
        t
    }

    /// Entry for `n > m` (one-based).
    pub fn op(&self, n: usize, m: usize) -> &PauliPairOp {
        &self.ops[slot(n, m)]
    }

    pub fn ops(&self) -> impl Iterator<Item = ((usize, usize), &PauliPairOp)> {
        INDEX_PAIRS.iter().copied().zip(self.ops.iter())
    }

    /// Hermitian `τ_nm`, extended by `τ_mn = −τ_nm`, `τ_nn = 0`.
    pub fn tau(&self, n: usize, m: usize) -> CMat4 {
        match n.cmp(&m) {
            std::cmp::Ordering::Greater => self.op(n, m).matrix,
            std::cmp::Ordering::Less => -self.op(m, n).matrix,
            std::cmp::Ordering::Equal => CMat4::zeros(),
        }
    }

    /// Skew-Hermitian `t_nm = iτ_nm`.
    pub fn t(&self, n: usize, m: usize) -> CMat4 {
        self.tau(n, m) * I
    }

    /// Largest entry of `[t_nm, t_kp] − 2(δ_mp t_nk + δ_nk t_mp − δ_mk t_np − δ_np t_mk)`
    /// over all ordered index pairs.
    pub fn commutator_defect(&self) -> f64 {
        let mut worst = 0.0f64;
        let idx = || (1..=6).flat_map(|a| (1..=6).filter(move |&b| b != a).map(move |b| (a, b)));
        for (n, m) in idx() {
            let tnm = self.t(n, m);
            for (k, p) in idx() {
                let tkp = self.t(k, p);
                let lhs = tnm * tkp - tkp * tnm;
                let rhs = (self.t(n, k) * c(delta(m, p), 0.0) + self.t(m, p) * c(delta(n, k), 0.0)
                    - self.t(n, p) * c(delta(m, k), 0.0)
                    - self.t(m, k) * c(delta(n, p), 0.0))
                    * c(2.0, 0.0);
                worst = worst.max(linalg::max_abs_diff(&lhs, &rhs));
            }
        }
        worst
    }
}

static TABLE: LazyLock<GeneratorTable> =
    LazyLock::new(|| GeneratorTable::build(Pair::Bc).expect("Clifford generator table is consistent"));

/// The Clifford-built table. The 4×4 operators are the same for every pair.
pub fn generator_table() -> &'static GeneratorTable {
    &TABLE
}

/// `I_nm` with `(I_nm)_ij = −δ_in δ_jm + δ_im δ_jn` (one-based `n`, `m`).
pub fn so6_basis(n: usize, m: usize) -> RMat6 {
    let mut out = RMat6::zeros();
    if n != m {
        out[(n - 1, m - 1)] = -1.0;
        out[(m - 1, n - 1)] = 1.0;
    }
    out
}

/// Result of comparing structure constants of `t_nm` and `2I_nm`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CommutationCheck {
    pub pairs_checked: usize,
    pub pairs_matching: usize,
}

/// Expands `[t_a, t_b]` over the `t` basis and `[2I_a, 2I_b]` over the `2I`
/// basis for all 105 unordered generator pairs and compares the integer
/// coefficient lists.
pub fn check_commutation(table: &GeneratorTable) -> CommutationCheck {
    let basis_t: Vec<CMat4> = INDEX_PAIRS.iter().map(|&(n, m)| table.t(n, m)).collect();
    let basis_i: Vec<RMat6> = INDEX_PAIRS.iter().map(|&(n, m)| so6_basis(n, m) * 2.0).collect();
    let mut checked = 0;
    let mut matching = 0;
    for a in 0..15 {
        for b in (a + 1)..15 {
            checked += 1;
            let ct = basis_t[a] * basis_t[b] - basis_t[b] * basis_t[a];
            let ci = basis_i[a] * basis_i[b] - basis_i[b] * basis_i[a];
            let su4: Vec<f64> = basis_t.iter().map(|t| (t.adjoint() * ct).trace().re / 4.0).collect();
            let so6: Vec<f64> = basis_i.iter().map(|g| (g.transpose() * ci).trace() / 8.0).collect();
            let integral = |v: &[f64]| v.iter().all(|x| (x - x.round()).abs() < 1e-12);
            let same = su4.iter().zip(&so6).all(|(x, y)| x.round() == y.round());
            if integral(&su4) && integral(&so6) && same {
                matching += 1;
            }
        }
    }
    CommutationCheck {
        pairs_checked: checked,
        pairs_matching: matching,
    }
}

/// A Hermitian traceless Hamiltonian on an ordered pair and its so(6)
/// coefficients `f_nm = ¼ Tr(H τ_nm)`.
#[derive(Clone, Debug, PartialEq)]
pub struct PairHamiltonian {
    pub pair: Pair,
    pub matrix: CMat4,
    pub f: RMat6,
}

impl PairHamiltonian {
    /// Rejects non-Hermitian input; a trace is removed with a warning.
    pub fn from_matrix(pair: Pair, h: CMat4) -> Result<Self> {
        let defect = linalg::hermiticity_defect(&h);
        if defect > HERMITIAN_TOL {
            return Err(Error::validation(format!(
                "Hamiltonian is not Hermitian (defect {defect:.3e})"
            )));
        }
        let h = (h + h.adjoint()) * c(0.5, 0.0);
        let tr = h.trace();
        let h = if tr.norm() > 1e-12 {
            log::warn!(
                "dropping trace {:.6} of the {pair} Hamiltonian (global phase only)",
                tr.re
            );
            h - CMat4::identity() * (tr / c(4.0, 0.0))
        } else {
            h
        };
        let table = generator_table();
        let mut f = RMat6::zeros();
        for &(n, m) in &INDEX_PAIRS {
            let v = (h * table.tau(n, m)).trace().re / 4.0;
            f[(n - 1, m - 1)] = v;
            f[(m - 1, n - 1)] = -v;
        }
        Ok(PairHamiltonian { pair, matrix: h, f })
    }

    /// `H = Σ coeff·σ_label`.
    pub fn from_coeffs<'a>(pair: Pair, coeffs: impl IntoIterator<Item = (&'a PauliLabel, &'a f64)>) -> Result<Self> {
        let mut h = CMat4::zeros();
        for (l, &v) in coeffs {
            if !v.is_finite() {
                return Err(Error::validation(format!("coefficient of {l} is not finite")));
            }
            h += l.matrix() * c(v, 0.0);
        }
        Self::from_matrix(pair, h)
    }

    /// `Σ_{n>m} f_nm τ_nm`
    pub fn reconstruct(&self) -> CMat4 {
        let table = generator_table();
        INDEX_PAIRS.iter().fold(CMat4::zeros(), |acc, &(n, m)| {
            acc + table.tau(n, m) * c(self.f[(n - 1, m - 1)], 0.0)
        })
    }

    /// `exp(−iHt)`
    pub fn propagator(&self, t: f64) -> CMat4 {
        linalg::expm_hermitian(&self.matrix, t)
    }

    /// `exp(2ft)`, the q-space image of [`PairHamiltonian::propagator`].
    pub fn rotation(&self, t: f64) -> RMat6 {
        rotation(self, t)
    }
}

/// The 6×6 operator with `i dp/dt = H̃ p` for the pair's partition p-vector.
#[derive(Clone, Debug, PartialEq)]
pub struct LiftedHamiltonian {
    pub matrix: CMat6,
}

impl LiftedHamiltonian {
    /// Largest entry of `H̃ᵀΩ + ΩH̃ − Tr(H)Ω`, given `Tr(H) = Tr(H̃)/3`.
    pub fn omega_residual(&self) -> f64 {
        let omega = OMEGA.map(|x| c(x, 0.0));
        let tr_h = self.matrix.trace() / c(3.0, 0.0);
        linalg::max_abs_diff(
            &(self.matrix.transpose() * omega + omega * self.matrix),
            &(omega * tr_h),
        )
    }

    /// `−i U_pq† H̃ U_pq`; real antisymmetric and equal to `2f` for traceless `H`.
    pub fn q_generator(&self) -> CMat6 {
        U_PQ.adjoint() * self.matrix * *U_PQ * -I
    }
}

/// `H̃` from the entries of `H`, without any checks.
pub fn lift_matrix(h: &CMat4) -> CMat6 {
    let e = |i: usize, j: usize| h[(i - 1, j - 1)];
    let z = C64::new(0.0, 0.0);
    #[rustfmt::skip]
    let rows = [
        [e(1,1) + e(2,2), e(2,3), e(2,4), -e(1,3), -e(1,4), z],
        [e(3,2), e(1,1) + e(3,3), e(3,4), e(1,2), z, -e(1,4)],
        [e(4,2), e(4,3), e(1,1) + e(4,4), z, e(1,2), e(1,3)],
        [-e(3,1), e(2,1), z, e(2,2) + e(3,3), e(3,4), -e(2,4)],
        [-e(4,1), z, e(2,1), e(4,3), e(2,2) + e(4,4), e(2,3)],
        [z, -e(4,1), e(3,1), -e(4,2), e(3,2), e(3,3) + e(4,4)],
    ];
    CMat6::from_fn(|r, col| rows[r][col])
}

pub fn lift(h: &PairHamiltonian) -> LiftedHamiltonian {
    LiftedHamiltonian {
        matrix: lift_matrix(&h.matrix),
    }
}

/// `exp(2 f t)`
pub fn rotation(h: &PairHamiltonian, t: f64) -> RMat6 {
    linalg::expm_real(&(h.f * (2.0 * t)))
}

/// Both tracks of one evolution step.
#[derive(Clone, Debug)]
pub struct DualEvolution {
    pub state: ThreeQubitState,
    /// Recomputed from the evolved state, ordered by partition.
    pub qvectors: [QVector; 3],
    /// The pair's partition q-vector propagated by `exp(2ft)`.
    pub propagated: QVector,
    pub disagreement: f64,
}

pub fn evolve_dual(state: &ThreeQubitState, h: &PairHamiltonian, t: f64) -> Result<DualEvolution> {
    let partition = h.pair.partition();
    let next = state.apply_pair(&h.propagator(t), h.pair)?;
    let qvectors = pluecker::qvectors(&next)?;
    let propagated = pluecker::qvector(state, partition)?.rotated(&rotation(h, t));
    let disagreement = propagated.max_abs_diff(&qvectors[partition.index()]);
    if disagreement > DUAL_TRACK_TOL {
        return Err(Error::consistency(format!(
            "state and q-space tracks differ by {disagreement:.3e} on partition {}",
            partition.number()
        )));
    }
    Ok(DualEvolution {
        state: next,
        qvectors,
        propagated,
        disagreement,
    })
}

fn check_antisymmetric(x: &RMat6) -> Result<()> {
    let defect = linalg::max_abs_diff_real(x, &(-x.transpose()));
    if defect > ANTISYMMETRY_TOL || x.iter().any(|v| !v.is_finite()) {
        return Err(Error::validation(format!(
            "so(6) generator is not a finite antisymmetric matrix (defect {defect:.3e})"
        )));
    }
    Ok(())
}

/// The pair unitary whose q-space action is `exp(X)`:
/// `U = exp(½ Σ_{n>m} x_nm t_nm)` where `X = Σ_{n>m} x_nm I_nm`.
pub fn so6_to_su4(x: &RMat6) -> Result<CMat4> {
    check_antisymmetric(x)?;
    let table = generator_table();
    // exp(½ Σ x t) = exp(i K) with K = ½ Σ x τ Hermitian
    let k = INDEX_PAIRS.iter().fold(CMat4::zeros(), |acc, &(n, m)| {
        acc + table.tau(n, m) * c(0.5 * x[(m - 1, n - 1)], 0.0)
    });
    let u = linalg::expm_hermitian(&k, -1.0);
    debug_assert!(linalg::unitarity_defect(&u) < UNITARY_TOL);
    Ok(u)
}

/// `exp(angle·I_plane)` on a pair, as read from rotation JSON files.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PlaneRotation {
    pub pair: Pair,
    pub plane: [usize; 2],
    pub angle: f64,
}

impl PlaneRotation {
    pub fn validate(&self) -> Result<()> {
        let [n, m] = self.plane;
        if !(1..=6).contains(&n) || !(1..=6).contains(&m) || n == m {
            return Err(Error::validation(format!(
                "rotation plane [{n}, {m}] must name two distinct axes in 1..=6"
            )));
        }
        if !self.angle.is_finite() {
            return Err(Error::validation("rotation angle is not finite"));
        }
        Ok(())
    }

    pub fn generator(&self) -> RMat6 {
        so6_basis(self.plane[0], self.plane[1]) * self.angle
    }

    pub fn matrix(&self) -> RMat6 {
        linalg::expm_real(&self.generator())
    }

    pub fn unitary(&self) -> Result<CMat4> {
        self.validate()?;
        so6_to_su4(&self.generator())
    }
}
