//! Seeded invariant battery over random states.
//!
//! Sample `k` draws from its own ChaCha stream (`seed`, stream `k`), so the
//! summary does not depend on how rayon schedules the work.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::abc::{self, VectorTriple};
use crate::error::Result;
use crate::linalg::{self, c, CMat4, RMat6, C64, I};
use crate::oracle;
use crate::pluecker::{self, PVector, QVector, OMEGA};
use crate::sampling;
use crate::so6::{self, PairHamiltonian};
use crate::state;
use crate::tangles;

/// Per-sample suites, in report order.
pub const SUITES: [(&str, f64); 11] = [
    ("pluecker_relation", 1e-12),
    ("q_self_dot", 1e-12),
    ("form_transfer", 1e-12),
    ("inter_partition", 1e-9),
    ("vector_chain", 1e-10),
    ("ckw", 1e-9),
    ("oracle_equivalence", 1e-8),
    ("oracle_ckw", 1e-9),
    ("lift_identity", 1e-12),
    ("dual_track", 1e-9),
    ("bloch_mimicry", 1e-9),
];

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuiteResult {
    pub name: String,
    pub tolerance: f64,
    pub checked: usize,
    pub failed: usize,
    pub worst: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Failure {
    pub suite: String,
    /// `None` for the structural checks that do not use samples.
    pub sample: Option<usize>,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SelftestSummary {
    pub seed: u64,
    pub count: usize,
    pub passed: bool,
    pub suites: Vec<SuiteResult>,
    pub commutation: so6::CommutationCheck,
    /// `|exp(π t₂₁) + 1|` and `|exp(2π I₂₁) − 1|`, largest entries.
    pub double_cover: [f64; 2],
    pub failures: Vec<Failure>,
}

fn sample_rng(seed: u64, k: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(k as u64);
    rng
}

fn max_of(it: impl IntoIterator<Item = f64>) -> f64 {
    it.into_iter().fold(0.0, f64::max)
}

fn inter_partition_residual(q: &[QVector; 3]) -> f64 {
    let s = [abc::split(&q[0]), abc::split(&q[1]), abc::split(&q[2])];
    max_of((0..3).map(|k| {
        let next = &s[(k + 1) % 3];
        linalg::max_abs_diff(&s[k].beta, &(next.alpha * -I))
    }))
}

fn chain_residual(t: &VectorTriple, q: &[QVector; 3]) -> f64 {
    let [aa, bb, cc] = t.self_dots();
    let mut r = (aa - bb).norm().max((aa - cc).norm());
    for v in q {
        let (a, b) = (v.alpha(), v.beta());
        r = r.max((linalg::bilinear(&a, &a) + linalg::bilinear(&b, &b)).norm());
    }
    r
}

/// Residuals of one sample, in [`SUITES`] order.
fn run_sample(seed: u64, k: usize) -> Result<[f64; 11]> {
    let mut rng = sample_rng(seed, k);
    let psi = sampling::random_state(&mut rng);

    let ps: Vec<PVector> = crate::state::Partition::ALL
        .iter()
        .map(|&p| pluecker::pluecker_pvector(&psi, p))
        .collect();
    let pluecker_relation = max_of(ps.iter().map(|p| p.pluecker_residual().norm()));
    let q = pluecker::qvectors(&psi)?;
    let q_self_dot = max_of(q.iter().map(|v| v.self_dot().norm()));
    let form_transfer = max_of(ps.iter().zip(&q).map(|(p, v)| {
        let omega = OMEGA.map(|x| c(x, 0.0));
        let pf = (p.components.transpose() * omega * p.components)[(0, 0)];
        (pf - v.self_dot()).norm() + (p.norm_sqr() - v.norm_sqr()).abs()
    }));
    let inter_partition = inter_partition_residual(&q);
    let triple = VectorTriple::from_qvectors(&q)?;
    let vector_chain = chain_residual(&triple, &q);

    let report = tangles::tangle_report_from_triple(&triple)?;
    let ckw = report.max_ckw_residual();
    let oracle = oracle::oracle_report(&psi).measures();
    let oracle_equivalence = report.max_abs_diff(&oracle);
    let oracle_ckw = max_of(tangles::ckw_residuals(&oracle).map(f64::abs));

    let pair = sampling::random_pair(&mut rng);
    let h = PairHamiltonian::from_matrix(pair, sampling::random_hermitian_traceless(&mut rng))?;
    let lift_identity = so6::lift(&h).omega_residual();
    let t = rng.random_range(0.0..1.0);
    let dual_track = so6::evolve_dual(&psi, &h, t)?.disagreement;

    let qubit = sampling::random_qubit(&mut rng);
    let v = sampling::random_su2(&mut rng);
    let other = sampling::random_state(&mut rng);
    let before = [
        triple.vector(qubit).to_owned(),
        *abc::extract_triple(&other)?.vector(qubit),
    ];
    let after = [
        *abc::extract_triple(&psi.apply_local(&v, qubit)?)?.vector(qubit),
        *abc::extract_triple(&other.apply_local(&v, qubit)?)?.vector(qubit),
    ];
    let fitted = abc::fit_rotation(&before, &after)?;
    let bloch_mimicry = linalg::max_abs_diff_real(&fitted, &state::bloch_rotation(&v));

    Ok([
        pluecker_relation,
        q_self_dot,
        form_transfer,
        inter_partition,
        vector_chain,
        ckw,
        oracle_equivalence,
        oracle_ckw,
        lift_identity,
        dual_track,
        bloch_mimicry,
    ])
}

/// `(|exp(π t₂₁) + 1|, |exp(2π I₂₁) − 1|)`
pub fn double_cover_check() -> [f64; 2] {
    let table = so6::generator_table();
    // exp(π t) = exp(iπ τ)
    let u = linalg::expm_hermitian(&table.tau(2, 1), -PI);
    let su4 = linalg::max_abs_diff(&u, &(CMat4::identity() * C64::new(-1.0, 0.0)));
    let r = linalg::expm_real(&(so6::so6_basis(2, 1) * (2.0 * PI)));
    let so6 = linalg::max_abs_diff_real(&r, &RMat6::identity());
    [su4, so6]
}

pub fn run_selftest(seed: u64, count: usize) -> SelftestSummary {
    let samples: Vec<Result<[f64; 11]>> = (0..count).into_par_iter().map(|k| run_sample(seed, k)).collect();

    let mut suites: Vec<SuiteResult> = SUITES
        .iter()
        .map(|&(name, tolerance)| SuiteResult {
            name: name.into(),
            tolerance,
            checked: 0,
            failed: 0,
            worst: 0.0,
        })
        .collect();
    let mut failures = Vec::new();
    for (k, sample) in samples.iter().enumerate() {
        match sample {
            Ok(residuals) => {
                for (s, &r) in suites.iter_mut().zip(residuals) {
                    s.checked += 1;
                    s.worst = s.worst.max(r);
                    if r.is_nan() || r > s.tolerance {
                        s.failed += 1;
                        failures.push(Failure {
                            suite: s.name.clone(),
                            sample: Some(k),
                            detail: format!("residual {r:.3e} above {:.1e}", s.tolerance),
                        });
                    }
                }
            }
            Err(e) => failures.push(Failure {
                suite: "sample".into(),
                sample: Some(k),
                detail: e.to_string(),
            }),
        }
    }

    let commutation = so6::check_commutation(so6::generator_table());
    if commutation.pairs_matching != commutation.pairs_checked {
        failures.push(Failure {
            suite: "commutation".into(),
            sample: None,
            detail: format!(
                "{}/{} generator pairs match",
                commutation.pairs_matching, commutation.pairs_checked
            ),
        });
    }
    let double_cover = double_cover_check();
    if double_cover.iter().any(|&d| d > 1e-12) {
        failures.push(Failure {
            suite: "double_cover".into(),
            sample: None,
            detail: format!("residuals {:.3e}, {:.3e}", double_cover[0], double_cover[1]),
        });
    }
    SelftestSummary {
        seed,
        count,
        passed: failures.is_empty(),
        suites,
        commutation,
        double_cover,
        failures,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_run_passes() {
        let s = run_selftest(7, 0);
        assert!(s.passed);
        assert!(s.suites.iter().all(|r| r.checked == 0));
        assert_eq!(s.commutation.pairs_matching, 105);
    }

    #[test]
    fn small_run_passes_and_is_deterministic() {
        let a = run_selftest(42, 40);
        assert!(a.passed, "{:?}", a.failures);
        let b = run_selftest(42, 40);
        assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
        let pool = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
        let c = pool.install(|| run_selftest(42, 40));
        assert_eq!(a, c);
    }

    #[test]
    fn double_cover() {
        let [su4, so6] = double_cover_check();
        assert!(su4 < 1e-12 && so6 < 1e-12);
    }
}
