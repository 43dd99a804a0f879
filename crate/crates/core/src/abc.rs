//! The `A`, `B`, `C` vectors.
//!
//! Each q-vector splits into halves `q⁽ˢ⁾ = α⁽ˢ⁾ ⊕ β⁽ˢ⁾`. The halves of
//! different partitions are tied together by `β⁽¹⁾ = −iα⁽²⁾`,
//! `β⁽²⁾ = −iα⁽³⁾`, `β⁽³⁾ = −iα⁽¹⁾`, leaving three complex 3-vectors
//! `A = α⁽³⁾`, `B = α⁽¹⁾`, `C = α⁽²⁾`. Each one turns like the Bloch vector of
//! its qubit under local unitaries.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, CVec3, RMat3, RVec3, C64, I};
use crate::pluecker::{self, QVector};
use crate::state::{Partition, Qubit, ThreeQubitState};

/// Tolerance on the inter-partition relations checked by [`extract_triple`].
pub const INTER_PARTITION_TOL: f64 = 1e-9;
/// Below this `|A·A|` the gauge phase is undefined and set to zero.
pub const DEGENERATE_GAUGE: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq)]
pub struct AlphaBeta {
    pub partition: Partition,
    pub alpha: CVec3,
    pub beta: CVec3,
}

pub fn split(q: &QVector) -> AlphaBeta {
    AlphaBeta {
        partition: q.partition,
        alpha: q.alpha(),
        beta: q.beta(),
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct VectorTriple {
    pub a: CVec3,
    pub b: CVec3,
    pub c: CVec3,
}

impl VectorTriple {
    /// Builds the triple from q-vectors ordered by partition, checking the
    /// three inter-partition relations.
    pub fn from_qvectors(q: &[QVector; 3]) -> Result<Self> {
        let [ab1, ab2, ab3] = [split(&q[0]), split(&q[1]), split(&q[2])];
        let checks = [
            ("β⁽¹⁾ = −iα⁽²⁾", &ab1.beta, &ab2.alpha),
            ("β⁽²⁾ = −iα⁽³⁾", &ab2.beta, &ab3.alpha),
            ("β⁽³⁾ = −iα⁽¹⁾", &ab3.beta, &ab1.alpha),
        ];
        for (name, beta, alpha) in checks {
            let err = linalg::max_abs_diff(beta, &(alpha * -I));
            if err > INTER_PARTITION_TOL {
                return Err(Error::consistency(format!("{name} violated by {err:.3e}")));
            }
        }
        Ok(VectorTriple {
            a: ab3.alpha,
            b: ab1.alpha,
            c: ab2.alpha,
        })
    }

    pub fn vector(&self, q: Qubit) -> &CVec3 {
        match q {
            Qubit::A => &self.a,
            Qubit::B => &self.b,
            Qubit::C => &self.c,
        }
    }

    /// Unconjugated `X·X` for each of `A`, `B`, `C`.
    pub fn self_dots(&self) -> [C64; 3] {
        [&self.a, &self.b, &self.c].map(|v| linalg::bilinear(v, v))
    }

    /// Rebuilds the three q-vectors `(B, −iC)`, `(C, −iA)`, `(A, −iB)`.
    pub fn to_qvectors(&self) -> [QVector; 3] {
        let join = |p, alpha: &CVec3, beta: &CVec3| {
            let mut v = crate::linalg::CVec6::zeros();
            v.fixed_rows_mut::<3>(0).copy_from(alpha);
            v.fixed_rows_mut::<3>(3).copy_from(&(beta * -I));
            QVector::new(p, v)
        };
        [
            join(Partition::A, &self.b, &self.c),
            join(Partition::B, &self.c, &self.a),
            join(Partition::C, &self.a, &self.b),
        ]
    }
}

pub fn extract_triple(state: &ThreeQubitState) -> Result<VectorTriple> {
    VectorTriple::from_qvectors(&pluecker::qvectors(state)?)
}

/// Real and imaginary parts of a phase-rotated vector.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GaugedVector {
    pub re: RVec3,
    pub im: RVec3,
}

impl GaugedVector {
    fn from_complex(v: &CVec3) -> Self {
        GaugedVector {
            re: v.map(|z| z.re),
            im: v.map(|z| z.im),
        }
    }

    pub fn re_dot_im(&self) -> f64 {
        self.re.dot(&self.im)
    }
}

/// `𝒜 = A e^{2iφ}` etc., with `φ` chosen so every real part is orthogonal to its imaginary part.
#[derive(Clone, Debug, PartialEq)]
pub struct GaugedTriple {
    pub phase: f64,
    pub degenerate: bool,
    pub a: GaugedVector,
    pub b: GaugedVector,
    pub c: GaugedVector,
}

impl GaugedTriple {
    pub fn vectors(&self) -> [&GaugedVector; 3] {
        [&self.a, &self.b, &self.c]
    }
}

/// Gauge phase `φ = −¼ arg(A·A)`; `A·A` becomes real and non-negative, which
/// also forces `|𝒜_R| ≥ |𝒜_I|`. Degenerate triples (`|A·A| < 1e-12`, e.g. `|W⟩`) get `φ = 0`.
pub fn fix_gauge(t: &VectorTriple) -> GaugedTriple {
    let aa = linalg::bilinear(&t.a, &t.a);
    let degenerate = aa.norm() < DEGENERATE_GAUGE;
    let mut phase = if degenerate { 0.0 } else { -0.25 * aa.arg() };
    let rotate = |phase: f64| {
        let z = C64::from_polar(1.0, 2.0 * phase);
        (
            GaugedVector::from_complex(&(t.a * z)),
            GaugedVector::from_complex(&(t.b * z)),
            GaugedVector::from_complex(&(t.c * z)),
        )
    };
    let (mut a, mut b, mut cv) = rotate(phase);
    if !degenerate && a.im.norm() > a.re.norm() {
        phase += std::f64::consts::FRAC_PI_4;
        (a, b, cv) = rotate(phase);
    }
    GaugedTriple {
        phase,
        degenerate,
        a,
        b,
        c: cv,
    }
}

/// Wire form `{"A": [[re,im]×3], "B": …, "C": …, "phase": φ}`.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct TripleJson {
    #[serde(rename = "A")]
    pub a: Vec<[f64; 2]>,
    #[serde(rename = "B")]
    pub b: Vec<[f64; 2]>,
    #[serde(rename = "C")]
    pub c: Vec<[f64; 2]>,
    pub phase: f64,
}

impl TripleJson {
    pub fn new(t: &VectorTriple, phase: f64) -> Self {
        let pack = |v: &CVec3| v.iter().map(|z| [z.re, z.im]).collect();
        TripleJson {
            a: pack(&t.a),
            b: pack(&t.b),
            c: pack(&t.c),
            phase,
        }
    }
}

/// Real 3×3 matrix `R` with `after ≈ R·before`, fitted by least squares over
/// the real and imaginary parts of every vector pair.
///
/// Needs at least three linearly independent real columns; two generic
/// complex vectors are enough.
pub fn fit_rotation(before: &[CVec3], after: &[CVec3]) -> Result<RMat3> {
    if before.len() != after.len() {
        return Err(Error::validation("fit_rotation needs matching vector lists"));
    }
    let split = |v: &[CVec3]| -> Vec<RVec3> { v.iter().flat_map(|z| [z.map(|x| x.re), z.map(|x| x.im)]).collect() };
    let (x, y) = (split(before), split(after));
    let mut xxt = RMat3::zeros();
    let mut yxt = RMat3::zeros();
    for (xi, yi) in x.iter().zip(&y) {
        xxt += xi * xi.transpose();
        yxt += yi * xi.transpose();
    }
    let inv = xxt
        .try_inverse()
        .filter(|_| xxt.determinant().abs() > 1e-12)
        .ok_or_else(|| Error::validation("vectors do not span three dimensions"))?;
    Ok(yxt * inv)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{c, CVec6};
    use crate::sampling;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn v3(v: [(f64, f64); 3], s: f64) -> CVec3 {
        CVec3::from_fn(|k, _| c(v[k].0 * s, v[k].1 * s))
    }

    const W_SCALE: f64 = 0.23570226039551584; // 1/(3√2)
    const GHZ_SCALE: f64 = 0.35355339059327373; // 1/(2√2)

    #[test]
    fn split_examples() {
        let q = pluecker::qvector(&ThreeQubitState::ghz_phased(), Partition::A).unwrap();
        let ab = split(&q);
        assert!(linalg::max_abs_diff(&ab.alpha, &v3([(0., 0.), (0., 0.), (1., 0.)], GHZ_SCALE)) < 1e-15);
        assert!(linalg::max_abs_diff(&ab.beta, &v3([(0., 0.), (0., 0.), (0., -1.)], GHZ_SCALE)) < 1e-15);

        let q = pluecker::qvector(&ThreeQubitState::w(), Partition::A).unwrap();
        let ab = split(&q);
        assert!(linalg::max_abs_diff(&ab.alpha, &v3([(0., 1.), (-1., 0.), (0., 0.)], W_SCALE)) < 1e-15);
        assert!(linalg::max_abs_diff(&ab.beta, &v3([(1., 0.), (0., 1.), (0., 0.)], W_SCALE)) < 1e-15);

        let ab = split(&QVector::new(Partition::B, CVec6::zeros()));
        assert_eq!(ab.alpha, CVec3::zeros());
        assert_eq!(ab.beta, CVec3::zeros());
    }

    #[test]
    fn triple_examples() {
        let t = extract_triple(&ThreeQubitState::w()).unwrap();
        let w = v3([(0., 1.), (-1., 0.), (0., 0.)], W_SCALE);
        for q in Qubit::ALL {
            assert!(linalg::max_abs_diff(t.vector(q), &w) < 1e-15);
        }

        let t = extract_triple(&ThreeQubitState::ghz_phased()).unwrap();
        let g = v3([(0., 0.), (0., 0.), (1., 0.)], GHZ_SCALE);
        for q in Qubit::ALL {
            assert!(linalg::max_abs_diff(t.vector(q), &g) < 1e-15);
        }

        let t = extract_triple(&ThreeQubitState::biseparable()).unwrap();
        assert!(t.b.norm() < 1e-15);
        assert!(t.c.norm() < 1e-15);
        assert!(linalg::max_abs_diff(&t.a, &v3([(0., -1.), (1., 0.), (0., 0.)], GHZ_SCALE)) < 1e-15);
    }

    #[test]
    fn triple_rebuilds_qvectors() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let psi = sampling::random_state(&mut rng);
        let qs = pluecker::qvectors(&psi).unwrap();
        let t = VectorTriple::from_qvectors(&qs).unwrap();
        for (a, b) in t.to_qvectors().iter().zip(qs.iter()) {
            assert!(a.max_abs_diff(b) < 1e-15);
        }
    }

    #[test]
    fn broken_relation_is_a_consistency_error() {
        let mut qs = pluecker::qvectors(&ThreeQubitState::w()).unwrap();
        qs[1].components[3] += c(1e-3, 0.0);
        assert!(matches!(VectorTriple::from_qvectors(&qs), Err(Error::Consistency(_))));
    }

    #[test]
    fn dot_product_chain() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        for _ in 0..200 {
            let psi = sampling::random_state(&mut rng);
            let qs = pluecker::qvectors(&psi).unwrap();
            let first = linalg::bilinear(&qs[0].alpha(), &qs[0].alpha());
            for q in &qs {
                assert!((linalg::bilinear(&q.alpha(), &q.alpha()) - first).norm() < 1e-10);
                assert!((linalg::bilinear(&q.beta(), &q.beta()) + first).norm() < 1e-10);
            }
        }
    }

    #[test]
    fn gauge_examples() {
        let g = fix_gauge(&extract_triple(&ThreeQubitState::ghz_phased()).unwrap());
        assert!(g.phase.abs() < 1e-15);
        assert!(g.a.im.norm() < 1e-15);

        let g = fix_gauge(&extract_triple(&ThreeQubitState::w()).unwrap());
        assert!(g.degenerate);
        assert_eq!(g.phase, 0.0);
        assert!((g.a.re - RVec3::new(0.0, -W_SCALE, 0.0)).norm() < 1e-15);
        assert!((g.a.im - RVec3::new(W_SCALE, 0.0, 0.0)).norm() < 1e-15);
        assert!(g.a.re_dot_im().abs() < 1e-15);
        assert!((g.a.re.norm() - g.a.im.norm()).abs() < 1e-15);

        // A = e^{iπ/6}(0,0,1): arg(A·A) = π/3, φ = −π/12
        let z = C64::from_polar(1.0, std::f64::consts::PI / 6.0);
        let t = VectorTriple {
            a: CVec3::new(c(0.0, 0.0), c(0.0, 0.0), z),
            b: CVec3::new(c(0.0, 0.0), c(0.0, 0.0), z),
            c: CVec3::new(c(0.0, 0.0), c(0.0, 0.0), z),
        };
        let g = fix_gauge(&t);
        assert!((g.phase + std::f64::consts::PI / 12.0).abs() < 1e-15);
        assert!(g.a.im.norm() < 1e-15);
        assert!((g.a.re[2] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn gauge_orthogonalizes_all_three_vectors() {
        let mut rng = ChaCha8Rng::seed_from_u64(25);
        for _ in 0..200 {
            let psi = sampling::random_state(&mut rng);
            let g = fix_gauge(&extract_triple(&psi).unwrap());
            for v in g.vectors() {
                assert!(v.re_dot_im().abs() < 1e-9);
                assert!(v.re.norm() >= v.im.norm());
            }
        }
    }

    #[test]
    fn gauge_matches_a_global_phase_on_the_state() {
        let mut rng = ChaCha8Rng::seed_from_u64(27);
        let psi = sampling::random_state(&mut rng);
        let g = fix_gauge(&extract_triple(&psi).unwrap());
        let rephased = extract_triple(&psi.with_global_phase(g.phase)).unwrap();
        assert!((rephased.a.map(|z| z.re) - g.a.re).norm() < 1e-14);
        assert!((rephased.c.map(|z| z.im) - g.c.im).norm() < 1e-14);
    }

    #[test]
    fn local_unitaries_on_a_leave_b_and_c() {
        let mut rng = ChaCha8Rng::seed_from_u64(29);
        for _ in 0..50 {
            let psi = sampling::random_state(&mut rng);
            let before = extract_triple(&psi).unwrap();
            for q in Qubit::ALL {
                let moved = psi.apply_local(&sampling::random_su2(&mut rng), q).unwrap();
                let after = extract_triple(&moved).unwrap();
                for other in Qubit::ALL.into_iter().filter(|&o| o != q) {
                    assert!(linalg::max_abs_diff(before.vector(other), after.vector(other)) < 1e-12);
                }
            }
        }
    }

    #[test]
    fn fitted_rotation_matches_bloch_rotation() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        for _ in 0..100 {
            let states = [sampling::random_state(&mut rng), sampling::random_state(&mut rng)];
            let qubit = sampling::random_qubit(&mut rng);
            let v = sampling::random_su2(&mut rng);
            let before: Vec<_> = states.iter().map(|s| extract_triple(s).unwrap()).collect();
            let after: Vec<_> = states
                .iter()
                .map(|s| extract_triple(&s.apply_local(&v, qubit).unwrap()).unwrap())
                .collect();
            let pick = |t: &[VectorTriple]| t.iter().map(|x| *x.vector(qubit)).collect::<Vec<_>>();
            let r = fit_rotation(&pick(&before), &pick(&after)).unwrap();
            let want = crate::state::bloch_rotation(&v);
            assert!(linalg::max_abs_diff_real(&r, &want) < 1e-9);
            assert!(linalg::max_abs_diff_real(&(r.transpose() * r), &RMat3::identity()) < 1e-9);
        }
    }
}
