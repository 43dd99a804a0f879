//! Entanglement measures from the `A`, `B`, `C` vectors.
//!
//! * three-tangle `τ_abc = 8|A·A| = 8|B·B| = 8|C·C|`
//! * one-vs-rest `τ_a(bc) = 4(|B|² + |C|²)` and cyclic
//! * two-tangles `τ_(bc) = 4(A·A* − |A·A|)`, `τ_(ac)` from `B`, `τ_(ab)` from `C`
//!
//! All measures go through these gauge-invariant forms. The gauged forms
//! (`8𝒜_I·𝒜_I`, `8(𝒜_R² − 𝒜_I²)`) only serve as cross-checks.

use serde::{Deserialize, Serialize};

use crate::abc::{extract_triple, fix_gauge, GaugedTriple, VectorTriple};
use crate::error::{Error, Result};
use crate::linalg;
use crate::state::ThreeQubitState;

/// Agreement required between `8|A·A|`, `8|B·B|` and `8|C·C|`.
pub const THREE_TANGLE_TOL: f64 = 1e-10;
/// Agreement required between gauge-invariant and gauged two-tangles.
pub const GAUGED_TOL: f64 = 1e-9;
/// Negative round-off below this is an error rather than clamped.
pub const NEGATIVE_CLAMP: f64 = 1e-12;

fn clamp_nonnegative(name: &str, v: f64) -> Result<f64> {
    if v < -NEGATIVE_CLAMP {
        Err(Error::consistency(format!("{name} is negative ({v:.3e})")))
    } else {
        Ok(v.max(0.0))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TangleReport {
    pub tau_abc: f64,
    pub tau_bc: f64,
    pub tau_ac: f64,
    pub tau_ab: f64,
    pub tau_a_bc: f64,
    pub tau_b_ca: f64,
    pub tau_c_ab: f64,
    /// `τ_x(yz) − τ_(xy) − τ_(xz) − τ_abc` for x = a, b, c.
    pub ckw_residuals: [f64; 3],
}

impl TangleReport {
    pub const MEASURE_NAMES: [&'static str; 7] = [
        "tau_abc", "tau_bc", "tau_ac", "tau_ab", "tau_a_bc", "tau_b_ca", "tau_c_ab",
    ];

    pub fn from_measures(m: [f64; 7]) -> Self {
        let [tau_abc, tau_bc, tau_ac, tau_ab, tau_a_bc, tau_b_ca, tau_c_ab] = m;
        TangleReport {
            tau_abc,
            tau_bc,
            tau_ac,
            tau_ab,
            tau_a_bc,
            tau_b_ca,
            tau_c_ab,
            ckw_residuals: ckw_residuals(&m),
        }
    }

    /// In [`TangleReport::MEASURE_NAMES`] order.
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

    pub fn max_ckw_residual(&self) -> f64 {
        self.ckw_residuals.iter().map(|r| r.abs()).fold(0.0, f64::max)
    }

    pub fn max_abs_diff(&self, other: &[f64; 7]) -> f64 {
        self.measures()
            .iter()
            .zip(other.iter())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

/// CKW residuals from measures in [`TangleReport::MEASURE_NAMES`] order.
pub fn ckw_residuals(m: &[f64; 7]) -> [f64; 3] {
    let [abc, bc, ac, ab, a_bc, b_ca, c_ab] = *m;
    [a_bc - ac - ab - abc, b_ca - ab - bc - abc, c_ab - ac - bc - abc]
}

pub fn three_tangle(t: &VectorTriple) -> Result<f64> {
    let [aa, bb, cc] = t.self_dots().map(|z| 8.0 * z.norm());
    let spread = (aa - bb).abs().max((aa - cc).abs());
    if spread > THREE_TANGLE_TOL {
        return Err(Error::consistency(format!(
            "8|A·A|, 8|B·B|, 8|C·C| disagree by {spread:.3e}"
        )));
    }
    Ok(aa)
}

/// `(τ_a(bc), τ_b(ca), τ_c(ab))`.
pub fn concurrences_from_triple(t: &VectorTriple) -> [f64; 3] {
    let [a, b, c] = [&t.a, &t.b, &t.c].map(linalg::norm_sqr);
    [4.0 * (b + c), 4.0 * (c + a), 4.0 * (a + b)]
}

pub fn concurrences(state: &ThreeQubitState) -> Result<[f64; 3]> {
    Ok(concurrences_from_triple(&extract_triple(state)?))
}

/// `(τ_(bc), τ_(ac), τ_(ab))` from `A`, `B`, `C` respectively.
pub fn two_tangles(t: &VectorTriple) -> Result<[f64; 3]> {
    let raw = [&t.a, &t.b, &t.c].map(|v| 4.0 * (linalg::norm_sqr(v) - linalg::bilinear(v, v).norm()));
    let names = ["tau_bc", "tau_ac", "tau_ab"];
    let mut out = [0.0; 3];
    for k in 0..3 {
        out[k] = clamp_nonnegative(names[k], raw[k])?;
    }
    let g = fix_gauge(t);
    if !g.degenerate {
        let gauged = gauged_two_tangles(&g);
        for k in 0..3 {
            let d = (gauged[k] - out[k]).abs();
            if d > GAUGED_TOL {
                return Err(Error::consistency(format!(
                    "{}: gauge-invariant and gauged forms differ by {d:.3e}",
                    names[k]
                )));
            }
        }
    }
    Ok(out)
}

/// `8𝒜_I·𝒜_I`, `8ℬ_I·ℬ_I`, `8𝒞_I·𝒞_I`.
pub fn gauged_two_tangles(g: &GaugedTriple) -> [f64; 3] {
    g.vectors().map(|v| 8.0 * v.im.norm_squared())
}

/// `8(𝒳_R·𝒳_R − 𝒳_I·𝒳_I)` for each vector; each equals `τ_abc`.
pub fn gauged_three_tangles(g: &GaugedTriple) -> [f64; 3] {
    g.vectors().map(|v| 8.0 * (v.re.norm_squared() - v.im.norm_squared()))
}

/// Residuals of `8𝒜_R·𝒜_R = τ_abc + τ_(bc)`, `8ℬ_R·ℬ_R = τ_abc + τ_(ac)`, `8𝒞_R·𝒞_R = τ_abc + τ_(ab)`.
pub fn real_part_identity(g: &GaugedTriple, report: &TangleReport) -> [f64; 3] {
    let pairs = [report.tau_bc, report.tau_ac, report.tau_ab];
    let vs = g.vectors();
    std::array::from_fn(|k| 8.0 * vs[k].re.norm_squared() - (report.tau_abc + pairs[k]))
}

pub fn tangle_report_from_triple(t: &VectorTriple) -> Result<TangleReport> {
    let tau_abc = three_tangle(t)?;
    let [tau_bc, tau_ac, tau_ab] = two_tangles(t)?;
    let [tau_a_bc, tau_b_ca, tau_c_ab] = concurrences_from_triple(t);
    Ok(TangleReport::from_measures([
        tau_abc, tau_bc, tau_ac, tau_ab, tau_a_bc, tau_b_ca, tau_c_ab,
    ]))
}

pub fn tangle_report(state: &ThreeQubitState) -> Result<TangleReport> {
    tangle_report_from_triple(&extract_triple(state)?)
}
