//! Three-qubit pure states.
//!
//! Amplitudes `c_ijk` are stored at linear index `4i + 2j + k`, qubit `a`
//! most significant. Every ordered pair has a fixed internal order used for
//! both 4×4 operators and partition matrices:
//!
//! | partition | isolated qubit | pair | pair index |
//! |-----------|----------------|------|------------|
//! | 1 `a(bc)` | a              | bc   | `2b + c`   |
//! | 2 `b(ca)` | b              | ca   | `2c + a`   |
//! | 3 `c(ab)` | c              | ab   | `2a + b`   |
//!
//! Global phase is kept as data; states are never canonicalized.

use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, c, CMat2, CMat4, CMat8, CVec4, CVec8, RMat3, RVec3, C64, ZERO};
use crate::pauli::Pauli;

/// Tolerance on `Σ|c|² = 1` at API boundaries.
pub const NORM_TOL: f64 = 1e-9;
/// Tolerance on `U U† = 1` for operators handed to [`ThreeQubitState::apply_local`]
/// and [`ThreeQubitState::apply_pair`].
pub const UNITARY_TOL: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Qubit {
    A,
    B,
    C,
}

impl Qubit {
    pub const ALL: [Qubit; 3] = [Qubit::A, Qubit::B, Qubit::C];

    /// Bit position counted from the most significant end (a = 0).
    pub fn index(self) -> usize {
        match self {
            Qubit::A => 0,
            Qubit::B => 1,
            Qubit::C => 2,
        }
    }

    /// Value of this qubit's bit in a linear amplitude index.
    #[inline]
    pub fn bit(self, linear: usize) -> usize {
        (linear >> (2 - self.index())) & 1
    }

    pub fn partition(self) -> Partition {
        match self {
            Qubit::A => Partition::A,
            Qubit::B => Partition::B,
            Qubit::C => Partition::C,
        }
    }

    /// The two ordered pairs that contain this qubit.
    pub fn pairs(self) -> [Pair; 2] {
        match self {
            Qubit::A => [Pair::Ca, Pair::Ab],
            Qubit::B => [Pair::Ab, Pair::Bc],
            Qubit::C => [Pair::Bc, Pair::Ca],
        }
    }
}

impl fmt::Display for Qubit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Qubit::A => "a",
            Qubit::B => "b",
            Qubit::C => "c",
        };
        f.write_str(s)
    }
}

impl FromStr for Qubit {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "a" | "A" => Ok(Qubit::A),
            "b" | "B" => Ok(Qubit::B),
            "c" | "C" => Ok(Qubit::C),
            _ => Err(Error::Parse(format!("unknown qubit {s:?}"))),
        }
    }
}

/// Ordered qubit pair, in cyclic order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Pair {
    Bc,
    Ca,
    Ab,
}

impl Pair {
    pub const ALL: [Pair; 3] = [Pair::Bc, Pair::Ca, Pair::Ab];

    /// (more significant, less significant) qubit of the 4×4 index.
    pub fn qubits(self) -> (Qubit, Qubit) {
        match self {
            Pair::Bc => (Qubit::B, Qubit::C),
            Pair::Ca => (Qubit::C, Qubit::A),
            Pair::Ab => (Qubit::A, Qubit::B),
        }
    }

    pub fn spectator(self) -> Qubit {
        match self {
            Pair::Bc => Qubit::A,
            Pair::Ca => Qubit::B,
            Pair::Ab => Qubit::C,
        }
    }

    /// Partition whose q-vector this pair's Hamiltonians rotate.
    pub fn partition(self) -> Partition {
        self.spectator().partition()
    }

    pub fn contains(self, q: Qubit) -> bool {
        self.spectator() != q
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Pair::Bc => "bc",
            Pair::Ca => "ca",
            Pair::Ab => "ab",
        }
    }

    /// Index into the pair's 4-dimensional space for a linear amplitude index.
    #[inline]
    pub fn pair_index(self, linear: usize) -> usize {
        let (hi, lo) = self.qubits();
        2 * hi.bit(linear) + lo.bit(linear)
    }

    /// Linear amplitude index from (spectator bit, pair index).
    pub fn linear_index(self, spectator_bit: usize, pair_index: usize) -> usize {
        let (hi, lo) = self.qubits();
        let mut bits = [0usize; 3];
        bits[self.spectator().index()] = spectator_bit;
        bits[hi.index()] = pair_index >> 1;
        bits[lo.index()] = pair_index & 1;
        4 * bits[0] + 2 * bits[1] + bits[2]
    }
}

impl fmt::Display for Pair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Pair {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "bc" => Ok(Pair::Bc),
            "ca" => Ok(Pair::Ca),
            "ab" => Ok(Pair::Ab),
            _ => Err(Error::Parse(format!("unknown pair {s:?} (expected bc, ca or ab)"))),
        }
    }
}

/// Bipartition isolating one qubit: `A` is `a(bc)` (1), `B` is `b(ca)` (2), `C` is `c(ab)` (3).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Partition {
    A,
    B,
    C,
}

impl Partition {
    pub const ALL: [Partition; 3] = [Partition::A, Partition::B, Partition::C];

    pub fn number(self) -> u8 {
        match self {
            Partition::A => 1,
            Partition::B => 2,
            Partition::C => 3,
        }
    }

    pub fn from_number(n: u8) -> Result<Self> {
        match n {
            1 => Ok(Partition::A),
            2 => Ok(Partition::B),
            3 => Ok(Partition::C),
            _ => Err(Error::validation(format!("partition must be 1, 2 or 3, got {n}"))),
        }
    }

    pub fn isolated(self) -> Qubit {
        match self {
            Partition::A => Qubit::A,
            Partition::B => Qubit::B,
            Partition::C => Qubit::C,
        }
    }

    pub fn pair(self) -> Pair {
        match self {
            Partition::A => Pair::Bc,
            Partition::B => Pair::Ca,
            Partition::C => Pair::Ab,
        }
    }

    pub fn index(self) -> usize {
        self.number() as usize - 1
    }
}

impl Serialize for Partition {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_u8(self.number())
    }
}

impl<'de> Deserialize<'de> for Partition {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let n = u8::deserialize(d)?;
        Partition::from_number(n).map_err(serde::de::Error::custom)
    }
}

/// 4×2 rearrangement of the amplitudes for one partition: column `x` holds the
/// amplitudes with the isolated qubit in state `x`, indexed by the pair index.
#[derive(Clone, Debug, PartialEq)]
pub struct PartitionMatrix {
    pub partition: Partition,
    pub columns: [CVec4; 2],
}

impl PartitionMatrix {
    pub fn from_amplitudes(amps: &[C64; 8], partition: Partition) -> Self {
        let pair = partition.pair();
        let col = |x: usize| CVec4::from_fn(|r, _| amps[pair.linear_index(x, r)]);
        PartitionMatrix {
            partition,
            columns: [col(0), col(1)],
        }
    }

    /// Inverse of [`PartitionMatrix::from_amplitudes`].
    pub fn to_amplitudes(&self) -> [C64; 8] {
        let pair = self.partition.pair();
        let mut out = [ZERO; 8];
        for x in 0..2 {
            for r in 0..4 {
                out[pair.linear_index(x, r)] = self.columns[x][r];
            }
        }
        out
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Subsystem {
    Qubit(Qubit),
    Pair(Pair),
}

impl FromStr for Subsystem {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s.len() == 1 {
            s.parse().map(Subsystem::Qubit)
        } else {
            s.parse().map(Subsystem::Pair)
        }
    }
}

/// Reduced density matrix of a one- or two-qubit subsystem. Two-qubit
/// matrices use the pair's internal order.
#[derive(Clone, Debug, PartialEq)]
pub struct ReducedDensity {
    pub subsystem: Subsystem,
    pub matrix: DMatrix<C64>,
}

impl ReducedDensity {
    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn trace(&self) -> C64 {
        self.matrix.trace()
    }

    pub fn as_2x2(&self) -> Option<CMat2> {
        (self.dim() == 2).then(|| CMat2::from_fn(|r, c| self.matrix[(r, c)]))
    }

    pub fn as_4x4(&self) -> Option<CMat4> {
        (self.dim() == 4).then(|| CMat4::from_fn(|r, c| self.matrix[(r, c)]))
    }

    /// Ascending eigenvalues.
    pub fn eigenvalues(&self) -> Vec<f64> {
        match (self.as_2x2(), self.as_4x4()) {
            (Some(m), _) => linalg::hermitian_eigenvalues(&m).to_vec(),
            (_, Some(m)) => linalg::hermitian_eigenvalues(&m).to_vec(),
            _ => unreachable!("reduced densities are 2x2 or 4x4"),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ThreeQubitState {
    amps: [C64; 8],
}

impl ThreeQubitState {
    /// Validating constructor; rejects non-finite entries and norms off by more than [`NORM_TOL`].
    pub fn new(amps: [C64; 8]) -> Result<Self> {
        if amps.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::validation("amplitudes must be finite"));
        }
        let n2: f64 = amps.iter().map(|z| z.norm_sqr()).sum();
        if (n2 - 1.0).abs() > NORM_TOL {
            return Err(Error::validation(format!("state is not normalized: Σ|c|² = {n2}")));
        }
        Ok(ThreeQubitState { amps })
    }

    /// Scales `amps` to unit norm. Never applied implicitly by the library.
    pub fn normalize(amps: [C64; 8]) -> Result<Self> {
        let n = amps.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if !n.is_finite() || n == 0.0 {
            return Err(Error::validation("cannot normalize a zero or non-finite vector"));
        }
        Self::new(amps.map(|z| z / n))
    }

    pub fn from_real(amps: [f64; 8]) -> Result<Self> {
        Self::new(amps.map(|x| c(x, 0.0)))
    }

    pub fn basis(i: usize, j: usize, k: usize) -> Self {
        assert!(i < 2 && j < 2 && k < 2, "basis labels are bits");
        let mut amps = [ZERO; 8];
        amps[4 * i + 2 * j + k] = c(1.0, 0.0);
        ThreeQubitState { amps }
    }

    /// `(|001⟩ + |010⟩ + |100⟩)/√3`
    pub fn w() -> Self {
        let s = 1.0 / 3f64.sqrt();
        Self::from_real([0.0, s, s, 0.0, s, 0.0, 0.0, 0.0]).expect("normalized")
    }

    /// `e^{−iπ/4}(|000⟩ + |111⟩)/√2`, the phase that makes `A`, `B`, `C` real.
    pub fn ghz_phased() -> Self {
        let z = C64::from_polar(std::f64::consts::FRAC_1_SQRT_2, -std::f64::consts::FRAC_PI_4);
        let mut amps = [ZERO; 8];
        amps[0] = z;
        amps[7] = z;
        Self::new(amps).expect("normalized")
    }

    /// `(|000⟩ + |111⟩)/√2`
    pub fn ghz() -> Self {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        Self::from_real([s, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, s]).expect("normalized")
    }

    /// Biseparable `(|000⟩ + |011⟩)/√2 = |0⟩ ⊗ Φ⁺`.
    pub fn biseparable() -> Self {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        Self::from_real([s, 0.0, 0.0, s, 0.0, 0.0, 0.0, 0.0]).expect("normalized")
    }

    pub fn amplitudes(&self) -> &[C64; 8] {
        &self.amps
    }

    pub fn amplitude(&self, i: usize, j: usize, k: usize) -> C64 {
        self.amps[4 * i + 2 * j + k]
    }

    pub fn to_vector(&self) -> CVec8 {
        CVec8::from_column_slice(&self.amps)
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|z| z.norm_sqr()).sum()
    }

    /// `⟨self|other⟩`
    pub fn inner(&self, other: &ThreeQubitState) -> C64 {
        self.amps.iter().zip(other.amps.iter()).map(|(a, b)| a.conj() * b).sum()
    }

    pub fn fidelity(&self, other: &ThreeQubitState) -> f64 {
        self.inner(other).norm_sqr()
    }

    /// Largest componentwise amplitude difference.
    pub fn max_abs_diff(&self, other: &ThreeQubitState) -> f64 {
        self.amps
            .iter()
            .zip(other.amps.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn with_global_phase(&self, phase: f64) -> Self {
        let z = C64::from_polar(1.0, phase);
        ThreeQubitState {
            amps: self.amps.map(|a| a * z),
        }
    }

    pub fn partition_matrix(&self, partition: Partition) -> PartitionMatrix {
        PartitionMatrix::from_amplitudes(&self.amps, partition)
    }

    pub fn apply_local(&self, u: &CMat2, qubit: Qubit) -> Result<Self> {
        let defect = linalg::unitarity_defect(u);
        if defect > UNITARY_TOL {
            return Err(Error::validation(format!(
                "single-qubit operator is not unitary (defect {defect:.3e})"
            )));
        }
        Ok(ThreeQubitState {
            amps: transform_local(&self.amps, u, qubit),
        })
    }

    pub fn apply_pair(&self, u: &CMat4, pair: Pair) -> Result<Self> {
        let defect = linalg::unitarity_defect(u);
        if defect > UNITARY_TOL {
            return Err(Error::validation(format!(
                "two-qubit operator is not unitary (defect {defect:.3e})"
            )));
        }
        Ok(ThreeQubitState {
            amps: transform_pair(&self.amps, u, pair),
        })
    }

    /// Applies an 8×8 operator in the linear-index basis.
    pub fn apply_full(&self, u: &CMat8) -> Result<Self> {
        let defect = linalg::unitarity_defect(u);
        if defect > UNITARY_TOL {
            return Err(Error::validation(format!(
                "three-qubit operator is not unitary (defect {defect:.3e})"
            )));
        }
        let v = u * self.to_vector();
        Ok(ThreeQubitState {
            amps: std::array::from_fn(|k| v[k]),
        })
    }

    pub fn reduced_density(&self, subsystem: Subsystem) -> ReducedDensity {
        let matrix = match subsystem {
            Subsystem::Qubit(q) => {
                let mut m = DMatrix::from_element(2, 2, ZERO);
                for x in 0..8 {
                    for y in 0..8 {
                        let same_rest = Qubit::ALL.iter().filter(|&&o| o != q).all(|o| o.bit(x) == o.bit(y));
                        if same_rest {
                            m[(q.bit(x), q.bit(y))] += self.amps[x] * self.amps[y].conj();
                        }
                    }
                }
                m
            }
            Subsystem::Pair(p) => {
                let s = p.spectator();
                let mut m = DMatrix::from_element(4, 4, ZERO);
                for x in 0..8 {
                    for y in 0..8 {
                        if s.bit(x) == s.bit(y) {
                            m[(p.pair_index(x), p.pair_index(y))] += self.amps[x] * self.amps[y].conj();
                        }
                    }
                }
                m
            }
        };
        ReducedDensity { subsystem, matrix }
    }

    /// Bloch vector `mₙ = Tr(ρ σₙ)` of one qubit.
    pub fn bloch_vector(&self, qubit: Qubit) -> RVec3 {
        let rho = self
            .reduced_density(Subsystem::Qubit(qubit))
            .as_2x2()
            .expect("single-qubit density is 2x2");
        RVec3::from_fn(|n, _| (rho * Pauli::AXES[n].matrix()).trace().re)
    }
}

/// Adjoint action of a single-qubit unitary on Bloch vectors,
/// `R_ij = ½ Tr(σ_i V σ_j V†)`.
pub fn bloch_rotation(v: &CMat2) -> RMat3 {
    RMat3::from_fn(|i, j| {
        0.5 * (Pauli::AXES[i].matrix() * v * Pauli::AXES[j].matrix() * v.adjoint())
            .trace()
            .re
    })
}

/// `V` acting on one qubit of a raw amplitude array. No unitarity or
/// normalization requirement, so `SL(2,ℂ)` operators can be applied.
pub fn transform_local(amps: &[C64; 8], v: &CMat2, qubit: Qubit) -> [C64; 8] {
    let shift = 2 - qubit.index();
    let mut out = [ZERO; 8];
    for (x, o) in out.iter_mut().enumerate() {
        let r = qubit.bit(x);
        let base = x & !(1 << shift);
        *o = v[(r, 0)] * amps[base] + v[(r, 1)] * amps[base | (1 << shift)];
    }
    out
}

/// `U` acting on an ordered pair of a raw amplitude array.
pub fn transform_pair(amps: &[C64; 8], u: &CMat4, pair: Pair) -> [C64; 8] {
    let s = pair.spectator();
    let mut out = [ZERO; 8];
    for (x, o) in out.iter_mut().enumerate() {
        let sb = s.bit(x);
        let r = pair.pair_index(x);
        *o = (0..4).map(|k| u[(r, k)] * amps[pair.linear_index(sb, k)]).sum();
    }
    out
}

/// 8×8 matrix of a single-qubit operator.
pub fn embed_local(v: &CMat2, qubit: Qubit) -> CMat8 {
    embed_with(|amps| transform_local(amps, v, qubit))
}

/// 8×8 matrix of a pair operator.
pub fn embed_pair(u: &CMat4, pair: Pair) -> CMat8 {
    embed_with(|amps| transform_pair(amps, u, pair))
}

fn embed_with(f: impl Fn(&[C64; 8]) -> [C64; 8]) -> CMat8 {
    let mut m = CMat8::zeros();
    for col in 0..8 {
        let mut e = [ZERO; 8];
        e[col] = c(1.0, 0.0);
        let image = f(&e);
        for row in 0..8 {
            m[(row, col)] = image[row];
        }
    }
    m
}
