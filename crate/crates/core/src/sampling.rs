//! Seeded random inputs for property checks.
//!
//! States are drawn as 16 independent standard normals forming 8 complex
//! amplitudes, then normalized: Haar-uniform on `CP⁷` up to phase.

use rand::Rng;
use rand_distr::StandardNormal;

use crate::linalg::{self, c, CMat2, CMat4, C64};
use crate::pauli::Pauli;
use crate::state::{Pair, Qubit, ThreeQubitState};

fn normal<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    rng.sample(StandardNormal)
}

fn complex_normal<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    let re = normal(rng);
    let im = normal(rng);
    c(re, im)
}

pub fn random_state<R: Rng + ?Sized>(rng: &mut R) -> ThreeQubitState {
    let amps: [C64; 8] = std::array::from_fn(|_| complex_normal(rng));
    ThreeQubitState::normalize(amps).expect("gaussian vector is nonzero")
}

/// Traceless Hermitian 4×4 with Gaussian entries.
pub fn random_hermitian_traceless<R: Rng + ?Sized>(rng: &mut R) -> CMat4 {
    let a = CMat4::from_fn(|_, _| complex_normal(rng));
    let h = (a + a.adjoint()) * c(0.5, 0.0);
    let shift = h.trace() / c(4.0, 0.0);
    h - CMat4::identity() * shift
}

pub fn random_unit_vector<R: Rng + ?Sized>(rng: &mut R) -> [f64; 3] {
    let v = [normal(rng), normal(rng), normal(rng)];
    let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
    v.map(|x| x / n)
}

/// `exp(−iθ n̂·σ)` with uniform axis and angle in `[−π, π)`.
pub fn random_su2<R: Rng + ?Sized>(rng: &mut R) -> CMat2 {
    let n = random_unit_vector(rng);
    let theta = rng.random_range(-std::f64::consts::PI..std::f64::consts::PI);
    let h = Pauli::AXES
        .iter()
        .zip(n)
        .fold(CMat2::zeros(), |acc, (p, w)| acc + p.matrix() * c(w * theta, 0.0));
    linalg::expm_hermitian(&h, 1.0)
}

pub fn random_su4<R: Rng + ?Sized>(rng: &mut R) -> CMat4 {
    linalg::expm_hermitian(&random_hermitian_traceless(rng), 1.0)
}

pub fn random_pair<R: Rng + ?Sized>(rng: &mut R) -> Pair {
    Pair::ALL[rng.random_range(0..3)]
}

pub fn random_qubit<R: Rng + ?Sized>(rng: &mut R) -> Qubit {
    Qubit::ALL[rng.random_range(0..3)]
}
