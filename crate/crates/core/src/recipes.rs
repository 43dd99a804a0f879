//! Control sequences and their step-by-step verification.
//!
//! A recipe is a list of steps, each one a pair coupling `exp(iθ σ_label)`, a
//! local rotation `exp(iθ σ_axis)` or a global phase `e^{iφ}`. Running a
//! recipe applies every step twice: to the amplitudes, and as a real `SO(6)`
//! rotation (or phase) of the q-vectors it moves. The two tracks must agree.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::io::{amplitudes_from_json, amplitudes_to_json};
use crate::linalg::{self, c, CMat2, CMat4, CMat8, CVec6, C64, I};
use crate::pauli::{Pauli, PauliLabel};
use crate::pluecker::{self, QVector, QVectorJson};
use crate::so6::{PairHamiltonian, DUAL_TRACK_TOL};
use crate::state::{self, Pair, Partition, Qubit, ThreeQubitState};
use crate::tangles::{self, TangleReport};

/// Default verification tolerance.
pub const VERIFY_TOL: f64 = 1e-9;

/// `arctan(1/(2√2))`
pub fn xi() -> f64 {
    (1.0 / (2.0 * 2f64.sqrt())).atan()
}

/// An angle kept in the form it was written, e.g. `"pi/8"` or `"-pi/4+xi/2"`.
///
/// Recognized symbols are `pi` and `xi` (`arctan(1/(2√2))`); terms look like
/// `[k][*]sym[/d]` or plain numbers, joined by `+` and `-`.
#[derive(Clone, Debug, PartialEq)]
pub struct Angle {
    value: f64,
    expr: Option<String>,
}

impl Angle {
    pub fn value(&self) -> f64 {
        self.value
    }

    pub fn radians(value: f64) -> Self {
        Angle { value, expr: None }
    }

    pub fn parse(expr: &str) -> Result<Self> {
        let value = eval_angle(expr)?;
        Ok(Angle {
            value,
            expr: Some(expr.to_string()),
        })
    }
}

fn eval_angle(expr: &str) -> Result<f64> {
    let bad = || Error::Parse(format!("cannot read angle {expr:?}"));
    let s: String = expr
        .chars()
        .filter(|ch| !ch.is_whitespace())
        .collect::<String>()
        .to_lowercase();
    if s.is_empty() {
        return Err(bad());
    }
    let mut terms = Vec::new();
    let mut start = 0;
    for (i, ch) in s.char_indices() {
        // a sign after an exponent marker belongs to the number
        if (ch == '+' || ch == '-') && i > start && !s[..i].ends_with('e') {
            terms.push(&s[start..i]);
            start = i;
        }
    }
    terms.push(&s[start..]);
    let mut total = 0.0;
    for term in terms {
        let (sign, body) = match term.as_bytes().first() {
            Some(b'-') => (-1.0, &term[1..]),
            Some(b'+') => (1.0, &term[1..]),
            _ => (1.0, term),
        };
        let (head, den) = match body.split_once('/') {
            Some((h, d)) => (h, d.parse::<f64>().map_err(|_| bad())?),
            None => (body, 1.0),
        };
        let symbol = [("pi", std::f64::consts::PI), ("xi", xi())]
            .into_iter()
            .find(|(name, _)| head.ends_with(name));
        let v = match symbol {
            Some((name, sym)) => {
                let coeff = head[..head.len() - name.len()].trim_end_matches('*');
                let k = if coeff.is_empty() {
                    1.0
                } else {
                    coeff.parse::<f64>().map_err(|_| bad())?
                };
                k * sym
            }
            None => head.parse::<f64>().map_err(|_| bad())?,
        };
        total += sign * v / den;
    }
    if !total.is_finite() {
        return Err(bad());
    }
    Ok(total)
}

impl fmt::Display for Angle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.expr {
            Some(e) => f.write_str(e),
            None => write!(f, "{}", self.value),
        }
    }
}

impl Serialize for Angle {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match &self.expr {
            Some(e) => s.serialize_str(e),
            None => s.serialize_f64(self.value),
        }
    }
}

impl<'de> Deserialize<'de> for Angle {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Number(f64),
            Text(String),
        }
        match Raw::deserialize(d)? {
            Raw::Number(v) if v.is_finite() => Ok(Angle::radians(v)),
            Raw::Number(v) => Err(serde::de::Error::custom(format!("angle {v} is not finite"))),
            Raw::Text(t) => Angle::parse(&t).map_err(serde::de::Error::custom),
        }
    }
}

fn angle(expr: &str) -> Angle {
    Angle::parse(expr).expect("built-in angle expression")
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ControlStep {
    /// `exp(i·half_angle·σ_label)` on an ordered pair.
    Coupling {
        pair: Pair,
        label: PauliLabel,
        half_angle: Angle,
    },
    /// `exp(i·angle·σ_axis)` on one qubit.
    Local { qubit: Qubit, axis: Pauli, angle: Angle },
    /// `e^{i·phase}`
    GlobalPhase { phase: Angle },
}

/// Where a qubit sits inside a pair.
fn local_label(pair: Pair, qubit: Qubit, axis: Pauli) -> PauliLabel {
    let (first, _) = pair.qubits();
    if first == qubit {
        PauliLabel::new(axis, Pauli::I)
    } else {
        PauliLabel::new(Pauli::I, axis)
    }
}

impl ControlStep {
    pub fn validate(&self) -> Result<()> {
        match self {
            ControlStep::Local { axis: Pauli::I, .. } => Err(Error::validation("local step needs an x, y or z axis")),
            _ => Ok(()),
        }
    }

    /// The pair Hamiltonians `H` with `exp(−iH) = step` on each pair the step touches.
    fn pair_hamiltonians(&self) -> Result<Vec<PairHamiltonian>> {
        match self {
            ControlStep::Coupling {
                pair,
                label,
                half_angle,
            } => Ok(vec![PairHamiltonian::from_coeffs(
                *pair,
                [(label, &-half_angle.value())],
            )?]),
            ControlStep::Local { qubit, axis, angle } => qubit
                .pairs()
                .into_iter()
                .map(|p| PairHamiltonian::from_coeffs(p, [(&local_label(p, *qubit, *axis), &-angle.value())]))
                .collect(),
            ControlStep::GlobalPhase { .. } => Ok(Vec::new()),
        }
    }

    /// The 8×8 operator of this step.
    pub fn unitary(&self) -> CMat8 {
        match self {
            ControlStep::Coupling {
                pair,
                label,
                half_angle,
            } => state::embed_pair(&pair_unitary(*label, half_angle.value()), *pair),
            ControlStep::Local { qubit, axis, angle } => {
                state::embed_local(&local_unitary(*axis, angle.value()), *qubit)
            }
            ControlStep::GlobalPhase { phase } => CMat8::identity() * C64::from_polar(1.0, phase.value()),
        }
    }

    pub fn apply(&self, psi: &ThreeQubitState) -> Result<ThreeQubitState> {
        match self {
            ControlStep::Coupling {
                pair,
                label,
                half_angle,
            } => psi.apply_pair(&pair_unitary(*label, half_angle.value()), *pair),
            ControlStep::Local { qubit, axis, angle } => psi.apply_local(&local_unitary(*axis, angle.value()), *qubit),
            ControlStep::GlobalPhase { phase } => Ok(psi.with_global_phase(phase.value())),
        }
    }

    /// Moves q-vectors through the step in q-space. Partitions the step does
    /// not determine (the two outside a coupling's pair) are `None`.
    pub fn propagate(&self, q: &[QVector; 3]) -> Result<[Option<QVector>; 3]> {
        let mut out: [Option<QVector>; 3] = [None, None, None];
        match self {
            ControlStep::GlobalPhase { phase } => {
                let z = C64::from_polar(1.0, 2.0 * phase.value());
                for (o, v) in out.iter_mut().zip(q) {
                    *o = Some(QVector::new(v.partition, v.components * z));
                }
            }
            ControlStep::Local { qubit, .. } => {
                // the qubit's own partition only picks up det V = 1
                let own = qubit.partition().index();
                out[own] = Some(q[own].clone());
                for h in self.pair_hamiltonians()? {
                    let k = h.pair.partition().index();
                    out[k] = Some(q[k].rotated(&h.rotation(1.0)));
                }
            }
            ControlStep::Coupling { .. } => {
                for h in self.pair_hamiltonians()? {
                    let k = h.pair.partition().index();
                    out[k] = Some(q[k].rotated(&h.rotation(1.0)));
                }
            }
        }
        Ok(out)
    }
}

/// `exp(iθ σ_label)`
pub fn pair_unitary(label: PauliLabel, theta: f64) -> CMat4 {
    linalg::expm_hermitian(&label.matrix(), -theta)
}

/// `exp(iθ σ_axis) = cos θ + i sin θ σ_axis`
pub fn local_unitary(axis: Pauli, theta: f64) -> CMat2 {
    CMat2::identity() * c(theta.cos(), 0.0) + axis.matrix() * (I * theta.sin())
}

impl fmt::Display for ControlStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ControlStep::Coupling {
                pair,
                label,
                half_angle,
            } => write!(f, "exp(i·{half_angle}·σ_{label}) on {pair}"),
            ControlStep::Local { qubit, axis, angle } => {
                write!(f, "exp(i·{angle}·σ_{}) on {qubit}", axis.symbol())
            }
            ControlStep::GlobalPhase { phase } => write!(f, "global phase {phase}"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum Compare {
    /// Amplitudes including the global phase.
    #[default]
    Exact,
    /// `|⟨expected|actual⟩|²`
    Fidelity,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateExpectation {
    pub amplitudes: Vec<[f64; 2]>,
    #[serde(default)]
    pub compare: Compare,
}

impl StateExpectation {
    fn from_amps(amps: [C64; 8], compare: Compare) -> Self {
        StateExpectation {
            amplitudes: amplitudes_to_json(&amps),
            compare,
        }
    }

    fn expected(&self) -> Result<ThreeQubitState> {
        ThreeQubitState::new(amplitudes_from_json(&self.amplitudes)?)
    }

    /// `(quantity, deviation)` with deviation measured against `tol`.
    fn deviation(&self, actual: &ThreeQubitState) -> Result<(&'static str, f64)> {
        let want = self.expected()?;
        Ok(match self.compare {
            Compare::Exact => ("state amplitudes", want.max_abs_diff(actual)),
            Compare::Fidelity => ("state fidelity", 1.0 - want.fidelity(actual)),
        })
    }
}

/// Expected values after a given step; step 0 is the input.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Expectation {
    pub after_step: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub state: Option<StateExpectation>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub qvectors: Vec<QVectorJson>,
    /// Measure name (see [`TangleReport::MEASURE_NAMES`]) to value.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub tangles: BTreeMap<String, f64>,
}

impl Expectation {
    fn at(after_step: usize) -> Self {
        Expectation {
            after_step,
            state: None,
            qvectors: Vec::new(),
            tangles: BTreeMap::new(),
        }
    }

    fn state(mut self, amps: [C64; 8]) -> Self {
        self.state = Some(StateExpectation::from_amps(amps, Compare::Exact));
        self
    }

    fn q(mut self, partition: Partition, scale: f64, comps: [C64; 6]) -> Self {
        let v = QVector::new(partition, CVec6::from_fn(|k, _| comps[k] * scale));
        self.qvectors.push(QVectorJson::from(&v));
        self
    }

    fn q_all(self, scale: f64, comps: [C64; 6]) -> Self {
        Partition::ALL.into_iter().fold(self, |e, p| e.q(p, scale, comps))
    }

    fn tangle(mut self, name: &str, value: f64) -> Self {
        self.tangles.insert(name.to_string(), value);
        self
    }

    fn tangles(self, values: [f64; 7]) -> Self {
        TangleReport::MEASURE_NAMES
            .iter()
            .zip(values)
            .fold(self, |e, (n, v)| e.tangle(n, v))
    }

    fn validate(&self, steps: usize) -> Result<()> {
        if self.after_step > steps {
            return Err(Error::validation(format!(
                "expectation after step {} but the recipe has {steps} steps",
                self.after_step
            )));
        }
        if let Some(s) = &self.state {
            amplitudes_from_json(&s.amplitudes)?;
        }
        for q in &self.qvectors {
            QVector::try_from(q.clone())?;
        }
        for name in self.tangles.keys() {
            if !TangleReport::MEASURE_NAMES.contains(&name.as_str()) {
                return Err(Error::validation(format!("unknown tangle {name:?}")));
            }
        }
        Ok(())
    }

    fn check(&self, psi: &ThreeQubitState, q: &[QVector; 3], report: &TangleReport, tol: f64) -> Result<()> {
        let fail = |quantity: String, detail: String| Error::Verification {
            step: self.after_step,
            quantity,
            detail,
        };
        if let Some(s) = &self.state {
            let (quantity, dev) = s.deviation(psi)?;
            if dev > tol {
                return Err(fail(quantity.into(), format!("off by {dev:.3e} (tolerance {tol:.1e})")));
            }
        }
        for want in &self.qvectors {
            let want = QVector::try_from(want.clone())?;
            let got = &q[want.partition.index()];
            let dev = got.max_abs_diff(&want);
            if dev > tol {
                return Err(fail(
                    format!("q-vector of partition {}", want.partition.number()),
                    format!("off by {dev:.3e} (tolerance {tol:.1e})"),
                ));
            }
        }
        let measures = report.measures();
        for (name, want) in &self.tangles {
            let k = TangleReport::MEASURE_NAMES
                .iter()
                .position(|n| n == name)
                .expect("validated name");
            let dev = (measures[k] - want).abs();
            if dev > tol {
                return Err(fail(
                    name.clone(),
                    format!("{} instead of {want} (tolerance {tol:.1e})", measures[k]),
                ));
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Recipe {
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub description: Option<String>,
    /// Declared input, checked when verifying.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub input: Option<StateExpectation>,
    /// Required final state, checked when verifying.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub target: Option<StateExpectation>,
    pub steps: Vec<ControlStep>,
    #[serde(default)]
    pub expect: Vec<Expectation>,
}

impl Recipe {
    pub fn validate(&self) -> Result<()> {
        for s in &self.steps {
            s.validate()?;
        }
        for e in &self.expect {
            e.validate(self.steps.len())?;
        }
        for s in self.input.iter().chain(&self.target) {
            s.expected()?;
        }
        Ok(())
    }

    /// Product of all step operators, last step leftmost.
    pub fn unitary(&self) -> CMat8 {
        self.steps.iter().fold(CMat8::identity(), |acc, s| s.unitary() * acc)
    }

    /// The first `n` steps with their expectations. The target is dropped
    /// unless `n` covers the whole recipe.
    pub fn prefix(&self, n: usize) -> Recipe {
        let n = n.min(self.steps.len());
        Recipe {
            name: format!("{}[..{n}]", self.name),
            description: self.description.clone(),
            input: self.input.clone(),
            target: if n == self.steps.len() {
                self.target.clone()
            } else {
                None
            },
            steps: self.steps[..n].to_vec(),
            expect: self.expect.iter().filter(|e| e.after_step <= n).cloned().collect(),
        }
    }
}

/// State, q-vectors and tangles after one step (step 0 is the input).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TraceEntry {
    pub step: usize,
    pub operation: String,
    pub state: Vec<[f64; 2]>,
    pub qvectors: Vec<QVectorJson>,
    /// Previous q-vectors carried through the step in q-space.
    pub propagated: Vec<QVectorJson>,
    pub dual_track_disagreement: f64,
    pub tangles: TangleReport,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Trace {
    pub recipe: String,
    pub verified: bool,
    pub tolerance: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub final_fidelity: Option<f64>,
    pub entries: Vec<TraceEntry>,
}

/// Condensed view of a [`Trace`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunSummary {
    pub recipe: String,
    pub verified: bool,
    pub tolerance: f64,
    pub steps: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub final_fidelity: Option<f64>,
    pub max_dual_track_disagreement: f64,
    pub final_state: Vec<[f64; 2]>,
    pub final_tangles: TangleReport,
}

impl Trace {
    pub fn final_state(&self) -> Result<ThreeQubitState> {
        let last = self.entries.last().expect("trace has the input entry");
        ThreeQubitState::new(amplitudes_from_json(&last.state)?)
    }

    pub fn summary(&self) -> RunSummary {
        let last = self.entries.last().expect("trace has the input entry");
        RunSummary {
            recipe: self.recipe.clone(),
            verified: self.verified,
            tolerance: self.tolerance,
            steps: self.entries.len() - 1,
            final_fidelity: self.final_fidelity,
            max_dual_track_disagreement: self
                .entries
                .iter()
                .map(|e| e.dual_track_disagreement)
                .fold(0.0, f64::max),
            final_state: last.state.clone(),
            final_tangles: last.tangles.clone(),
        }
    }
}

/// Runs `recipe` on `input` in both tracks. With `verify`, every stored
/// expectation, the declared input and target, and the track agreement are
/// checked at `tol`.
pub fn run(recipe: &Recipe, input: &ThreeQubitState, verify: bool, tol: f64) -> Result<Trace> {
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(Error::validation(format!("tolerance must be positive, got {tol}")));
    }
    recipe.validate()?;
    if verify {
        if let Some(declared) = &recipe.input {
            let (quantity, dev) = declared.deviation(input)?;
            if dev > tol {
                return Err(Error::Verification {
                    step: 0,
                    quantity: format!("input {quantity}"),
                    detail: format!("input differs from the declared one by {dev:.3e}"),
                });
            }
        }
    }
    let expectations_at = |n: usize| recipe.expect.iter().filter(move |e| e.after_step == n);

    let mut psi = input.clone();
    let mut q = pluecker::qvectors(&psi)?;
    let report = tangles::tangle_report(&psi)?;
    if verify {
        for e in expectations_at(0) {
            e.check(&psi, &q, &report, tol)?;
        }
    }
    let mut entries = vec![TraceEntry {
        step: 0,
        operation: "input".into(),
        state: amplitudes_to_json(psi.amplitudes()),
        qvectors: q.iter().map(QVectorJson::from).collect(),
        propagated: Vec::new(),
        dual_track_disagreement: 0.0,
        tangles: report,
    }];

    for (k, step) in recipe.steps.iter().enumerate() {
        let n = k + 1;
        let next = step.apply(&psi)?;
        let q_next = pluecker::qvectors(&next)?;
        let carried = step.propagate(&q)?;
        let mut disagreement = 0.0f64;
        for (p, v) in carried.iter().enumerate() {
            if let Some(v) = v {
                let d = v.max_abs_diff(&q_next[p]);
                disagreement = disagreement.max(d);
                if verify && d > tol {
                    return Err(Error::Verification {
                        step: n,
                        quantity: format!("dual-track q-vector of partition {}", p + 1),
                        detail: format!("tracks differ by {d:.3e}"),
                    });
                }
            }
        }
        if disagreement > DUAL_TRACK_TOL {
            return Err(Error::consistency(format!(
                "step {n} ({step}): state and q-space tracks differ by {disagreement:.3e}"
            )));
        }
        let report = tangles::tangle_report(&next)?;
        if verify {
            for e in expectations_at(n) {
                e.check(&next, &q_next, &report, tol)?;
            }
        }
        entries.push(TraceEntry {
            step: n,
            operation: step.to_string(),
            state: amplitudes_to_json(next.amplitudes()),
            qvectors: q_next.iter().map(QVectorJson::from).collect(),
            propagated: carried.iter().flatten().map(QVectorJson::from).collect(),
            dual_track_disagreement: disagreement,
            tangles: report,
        });
        log::debug!("step {n}: {step}, track disagreement {disagreement:.2e}");
        psi = next;
        q = q_next;
    }

    let final_fidelity = match &recipe.target {
        Some(t) => Some(t.expected()?.fidelity(&psi)),
        None => None,
    };
    if verify {
        if let Some(t) = &recipe.target {
            let (quantity, dev) = t.deviation(&psi)?;
            if dev > tol {
                return Err(Error::Verification {
                    step: recipe.steps.len(),
                    quantity: format!("target {quantity}"),
                    detail: format!("final state misses the target by {dev:.3e}"),
                });
            }
        }
    }
    Ok(Trace {
        recipe: recipe.name.clone(),
        verified: verify,
        tolerance: tol,
        final_fidelity,
        entries,
    })
}

fn amps(nonzero: &[(usize, C64)]) -> [C64; 8] {
    let mut out = [c(0.0, 0.0); 8];
    for &(k, v) in nonzero {
        out[k] = v;
    }
    out
}

fn re(x: f64) -> C64 {
    c(x, 0.0)
}

fn coupling(pair: Pair, label: &str, half_angle: &str) -> ControlStep {
    ControlStep::Coupling {
        pair,
        label: label.parse().expect("built-in label"),
        half_angle: angle(half_angle),
    }
}

fn local(qubit: Qubit, axis: Pauli, a: &str) -> ControlStep {
    ControlStep::Local {
        qubit,
        axis,
        angle: angle(a),
    }
}

fn global_phase(a: &str) -> ControlStep {
    ControlStep::GlobalPhase { phase: angle(a) }
}

fn w_amps() -> [C64; 8] {
    let s = 1.0 / 3f64.sqrt();
    amps(&[(1, re(s)), (2, re(s)), (4, re(s))])
}

fn ghz_amps() -> [C64; 8] {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    amps(&[(0, re(s)), (7, re(s))])
}

fn bs_amps() -> [C64; 8] {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    amps(&[(0, re(s)), (3, re(s))])
}

fn w1_amps() -> [C64; 8] {
    let k = 1.0 / 6f64.sqrt();
    let r2 = 2f64.sqrt();
    amps(&[
        (1, re(k * (2.0 - r2).sqrt())),
        (2, re(k * (2.0 + r2).sqrt())),
        (4, re(k * (1.0 + 1.0 / r2).sqrt())),
        (7, re(-k * (1.0 - 1.0 / r2).sqrt())),
    ])
}

fn w2_amps() -> [C64; 8] {
    let k = 1.0 / 6f64.sqrt();
    let r2 = 2f64.sqrt();
    amps(&[(1, re(k * r2)), (2, re(k * r2)), (4, re(k)), (7, re(-k))])
}

/// The W→GHZ steps up to and including the second `bc` coupling.
fn w_to_w2_steps() -> Vec<ControlStep> {
    vec![coupling(Pair::Bc, "xy", "pi/8"), coupling(Pair::Bc, "yx", "pi/8")]
}

fn w_to_w2_expectations() -> Vec<Expectation> {
    let r2 = 2f64.sqrt();
    let (z, o, i) = (c(0.0, 0.0), c(1.0, 0.0), I);
    let q_w = [i, -o, z, o, i, z];
    vec![
        Expectation::at(0)
            .state(w_amps())
            .q_all(1.0 / (3.0 * r2), q_w)
            .tangles([0.0, 4.0 / 9.0, 4.0 / 9.0, 4.0 / 9.0, 8.0 / 9.0, 8.0 / 9.0, 8.0 / 9.0]),
        // τ_(ac) moves into τ_abc; τ_a(bc) is untouched
        Expectation::at(1)
            .state(w1_amps())
            .q(Partition::A, 1.0 / (3.0 * r2), [z, -o, z, o, i * r2, z])
            .tangle("tau_abc", 4.0 / 9.0)
            .tangle("tau_ac", 0.0)
            .tangle("tau_a_bc", 8.0 / 9.0),
        Expectation::at(2)
            .state(w2_amps())
            .q(Partition::A, 1.0 / 3.0, [z, -o, z, z, i, z])
            .q(Partition::B, 1.0 / (6.0 * r2), [z, -o * 2.0 * r2, z, o, i * 3.0, z])
            .q(Partition::C, 1.0 / (6.0 * r2), [i, -o * 3.0, z, z, i * 2.0 * r2, z])
            .tangles([8.0 / 9.0, 1.0 / 9.0, 0.0, 0.0, 8.0 / 9.0, 1.0, 1.0]),
    ]
}

pub fn w_to_ghz() -> Recipe {
    let (z, o, i) = (c(0.0, 0.0), c(1.0, 0.0), I);
    let r2 = 2f64.sqrt();
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let mut steps = w_to_w2_steps();
    steps.extend([
        coupling(Pair::Ca, "yx", "xi/2"),
        local(Qubit::A, Pauli::X, "pi/4"),
        local(Qubit::B, Pauli::X, "pi/4"),
        local(Qubit::C, Pauli::X, "pi/4"),
        local(Qubit::A, Pauli::Z, "pi/4"),
        global_phase("-3pi/4"),
    ]);
    let ghz_table = [1.0, 0.0, 0.0, 0.0, 1.0, 1.0, 1.0];
    let mut expect = w_to_w2_expectations();
    expect.extend([
        Expectation::at(3)
            .state(amps(&[(1, re(0.5)), (2, re(0.5)), (4, re(0.5)), (7, re(-0.5))]))
            .q_all(1.0 / (2.0 * r2), [z, -o, z, z, i, z])
            .tangles(ghz_table),
        Expectation::at(6)
            .state(amps(&[(0, i * h), (7, -o * h)]))
            .q_all(1.0 / (2.0 * r2), [z, z, o, z, z, -i])
            .tangles(ghz_table),
        Expectation::at(7).state(amps(&[
            (0, C64::from_polar(h, 0.75 * std::f64::consts::PI)),
            (7, C64::from_polar(h, 0.75 * std::f64::consts::PI)),
        ])),
        Expectation::at(8).state(ghz_amps()).tangles(ghz_table),
    ]);
    Recipe {
        name: "w_to_ghz".into(),
        description: Some("|W⟩ to (|000⟩ + |111⟩)/√2".into()),
        input: Some(StateExpectation::from_amps(w_amps(), Compare::Exact)),
        target: Some(StateExpectation::from_amps(ghz_amps(), Compare::Exact)),
        steps,
        expect,
    }
}

pub fn bs_to_ghz() -> Recipe {
    let (z, o, i) = (c(0.0, 0.0), c(1.0, 0.0), I);
    let s = 1.0 / (2.0 * 2f64.sqrt());
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let ghz_table = [1.0, 0.0, 0.0, 0.0, 1.0, 1.0, 1.0];
    let expect = vec![
        Expectation::at(0)
            .state(bs_amps())
            .q(Partition::A, s, [z; 6])
            .q(Partition::B, s, [z, z, z, -o, -i, z])
            .q(Partition::C, s, [-i, o, z, z, z, z])
            .tangles([0.0, 1.0, 0.0, 0.0, 0.0, 1.0, 1.0]),
        Expectation::at(1)
            .state(amps(&[(0, re(0.5)), (3, re(0.5)), (4, i * 0.5), (7, -i * 0.5)]))
            .q(Partition::A, s, [z, z, o, z, z, -i])
            .q(Partition::B, s, [z, z, o, z, -i, z])
            .q(Partition::C, s, [z, o, z, z, z, -i])
            .tangles(ghz_table),
        Expectation::at(2)
            .state(amps(&[(0, re(h)), (7, -i * h)]))
            .tangles(ghz_table),
        Expectation::at(3).state(amps(&[
            (0, C64::from_polar(h, 0.75 * std::f64::consts::PI)),
            (7, C64::from_polar(h, 0.75 * std::f64::consts::PI)),
        ])),
        Expectation::at(4).state(ghz_amps()),
    ];
    Recipe {
        name: "bs_to_ghz".into(),
        description: Some("(|000⟩ + |011⟩)/√2 to (|000⟩ + |111⟩)/√2".into()),
        input: Some(StateExpectation::from_amps(bs_amps(), Compare::Exact)),
        target: Some(StateExpectation::from_amps(ghz_amps(), Compare::Exact)),
        steps: vec![
            coupling(Pair::Ab, "xz", "pi/4"),
            local(Qubit::A, Pauli::X, "-pi/4"),
            local(Qubit::A, Pauli::Z, "3pi/4"),
            global_phase("-3pi/4"),
        ],
        expect,
    }
}

pub fn w_to_bs() -> Recipe {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let mut steps = w_to_w2_steps();
    steps.extend([
        coupling(Pair::Ca, "yx", "-pi/4+xi/2"),
        local(Qubit::B, Pauli::X, "pi/2"),
        global_phase("-pi/2"),
    ]);
    let mut expect = w_to_w2_expectations();
    expect.extend([
        Expectation::at(3)
            .state(amps(&[(1, re(h)), (2, re(h))]))
            .tangles([0.0, 1.0, 0.0, 0.0, 0.0, 1.0, 1.0]),
        Expectation::at(4).state(amps(&[(0, I * h), (3, I * h)])),
        Expectation::at(5).state(bs_amps()),
    ]);
    Recipe {
        name: "w_to_bs".into(),
        description: Some("|W⟩ to (|000⟩ + |011⟩)/√2 through |0⟩ ⊗ (|01⟩ + |10⟩)/√2".into()),
        input: Some(StateExpectation::from_amps(w_amps(), Compare::Exact)),
        target: Some(StateExpectation::from_amps(bs_amps(), Compare::Exact)),
        steps,
        expect,
    }
}

pub fn builtin_recipes() -> Vec<Recipe> {
    vec![w_to_ghz(), bs_to_ghz(), w_to_bs()]
}

pub fn builtin(name: &str) -> Option<Recipe> {
    builtin_recipes().into_iter().find(|r| r.name == name)
}

/// `H = −θ σ_label`, so that `exp(−iH) = exp(iθ σ_label)`.
pub fn coupling_hamiltonian(pair: Pair, label: PauliLabel, half_angle: f64) -> Result<PairHamiltonian> {
    PairHamiltonian::from_coeffs(pair, [(&label, &-half_angle)])
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn full_exp(terms: &[(CMat8, f64)]) -> CMat8 {
        // exp(i Σ θ G) for commuting Hermitian G
        let h = terms.iter().fold(CMat8::zeros(), |acc, (g, th)| acc + g * c(*th, 0.0));
        linalg::expm_hermitian(&h, -1.0)
    }

    fn on_pair(label: &str, pair: Pair) -> CMat8 {
        state::embed_pair(&label.parse::<PauliLabel>().unwrap().matrix(), pair)
    }

    fn on_qubit(axis: Pauli, q: Qubit) -> CMat8 {
        state::embed_local(&axis.matrix(), q)
    }

    fn phase(p: f64) -> CMat8 {
        CMat8::identity() * C64::from_polar(1.0, p)
    }

    #[test]
    fn angles() {
        let cases = [
            ("pi/8", PI / 8.0),
            ("-3pi/4", -0.75 * PI),
            ("3*pi/4", 0.75 * PI),
            ("xi/2", xi() / 2.0),
            ("-pi/4+xi/2", -PI / 4.0 + xi() / 2.0),
            ("0.5", 0.5),
            ("1e-3", 1e-3),
            ("-1.5e-1 + pi", -0.15 + PI),
        ];
        for (s, v) in cases {
            assert!((Angle::parse(s).unwrap().value() - v).abs() < 1e-15, "{s}");
        }
        for s in ["", "tau", "pi/", "2pi/x", "--"] {
            assert!(Angle::parse(s).is_err(), "{s}");
        }
        let a: Angle = serde_json::from_str("\"pi/8\"").unwrap();
        assert_eq!(serde_json::to_string(&a).unwrap(), "\"pi/8\"");
        let a: Angle = serde_json::from_str("0.125").unwrap();
        assert_eq!(a.value(), 0.125);
    }

    #[test]
    fn xi_value() {
        assert!((xi().tan() - 1.0 / (2.0 * 2f64.sqrt())).abs() < 1e-16);
    }

    #[test]
    fn builtins_verify() {
        for r in builtin_recipes() {
            let input =
                ThreeQubitState::new(amplitudes_from_json(&r.input.as_ref().unwrap().amplitudes).unwrap()).unwrap();
            let trace = run(&r, &input, true, VERIFY_TOL).unwrap_or_else(|e| panic!("{}: {e}", r.name));
            assert!(trace.final_fidelity.unwrap() > 1.0 - 1e-12);
            for e in &trace.entries {
                assert!(e.dual_track_disagreement < 1e-12, "{} step {}", r.name, e.step);
            }
        }
    }

    #[test]
    fn w_to_ghz_bookkeeping() {
        let trace = run(&w_to_ghz(), &ThreeQubitState::w(), false, VERIFY_TOL).unwrap();
        let t: Vec<&TangleReport> = trace.entries.iter().map(|e| &e.tangles).collect();
        assert!((t[1].tau_abc - (t[0].tau_abc + t[0].tau_ac)).abs() < 1e-12);
        assert!(t[1].tau_ac.abs() < 1e-12);
        assert!((t[2].tau_abc - (t[1].tau_abc + t[1].tau_ab)).abs() < 1e-12);
        assert!(t[2].tau_ab.abs() < 1e-12);
        assert!((t[0].tau_a_bc - t[1].tau_a_bc).abs() < 1e-12);
        assert!((t[1].tau_a_bc - t[2].tau_a_bc).abs() < 1e-12);
    }

    #[test]
    fn empty_prefix_is_identity() {
        for r in builtin_recipes() {
            let psi = ThreeQubitState::w();
            let trace = run(&r.prefix(0), &psi, false, VERIFY_TOL).unwrap();
            assert_eq!(trace.entries.len(), 1);
            assert_eq!(trace.final_state().unwrap(), psi);
            assert!(linalg::max_abs_diff(&r.prefix(0).unitary(), &CMat8::identity()) < 1e-15);
        }
    }

    #[test]
    fn w_to_ghz_closed_form() {
        let xy_bc = on_pair("xy", Pair::Bc);
        let yx_bc = on_pair("yx", Pair::Bc);
        let yx_ca = on_pair("yx", Pair::Ca);
        let xs = [Qubit::A, Qubit::B, Qubit::C].map(|q| (on_qubit(Pauli::X, q), PI / 4.0));
        let product = phase(-0.75 * PI)
            * full_exp(&[(on_qubit(Pauli::Z, Qubit::A), PI / 4.0)])
            * full_exp(&xs)
            * full_exp(&[(yx_ca, xi() / 2.0)])
            * full_exp(&[(yx_bc, PI / 8.0)])
            * full_exp(&[(xy_bc, PI / 8.0)]);
        assert!(linalg::max_abs_diff(&w_to_ghz().unitary(), &product) < 1e-10);
    }

    #[test]
    fn bs_to_ghz_closed_form() {
        let product = phase(-0.75 * PI)
            * full_exp(&[(on_qubit(Pauli::Z, Qubit::A), 0.75 * PI)])
            * full_exp(&[(on_qubit(Pauli::X, Qubit::A), -PI / 4.0)])
            * full_exp(&[(on_pair("xz", Pair::Ab), PI / 4.0)]);
        assert!(linalg::max_abs_diff(&bs_to_ghz().unitary(), &product) < 1e-10);
    }

    #[test]
    fn w_to_bs_closed_form() {
        let zeta = -(PI / 2.0 - xi());
        let product = phase(-PI / 2.0)
            * full_exp(&[(on_qubit(Pauli::X, Qubit::B), PI / 2.0)])
            * full_exp(&[(on_pair("yx", Pair::Ca), zeta / 2.0)])
            * full_exp(&[(on_pair("yx", Pair::Bc), PI / 8.0)])
            * full_exp(&[(on_pair("xy", Pair::Bc), PI / 8.0)]);
        assert!(linalg::max_abs_diff(&w_to_bs().unitary(), &product) < 1e-10);
    }

    #[test]
    fn bs_coupling_is_a_half_turn_in_plane_16() {
        let h = coupling_hamiltonian(Pair::Ab, "xz".parse().unwrap(), PI / 4.0).unwrap();
        let want = linalg::expm_real(&(crate::so6::so6_basis(1, 6) * (PI / 2.0)));
        assert!(linalg::max_abs_diff_real(&h.rotation(1.0), &want) < 1e-12);
    }

    #[test]
    fn failing_expectation_names_step_and_quantity() {
        let mut r = w_to_ghz();
        r.expect.push(Expectation::at(2).tangle("tau_bc", 0.5));
        match run(&r, &ThreeQubitState::w(), true, VERIFY_TOL) {
            Err(Error::Verification { step, quantity, .. }) => {
                assert_eq!(step, 2);
                assert_eq!(quantity, "tau_bc");
            }
            other => panic!("expected a verification error, got {other:?}"),
        }
        // wrong input
        let err = run(&w_to_ghz(), &ThreeQubitState::ghz(), true, VERIFY_TOL).unwrap_err();
        assert!(matches!(err, Error::Verification { step: 0, .. }));
        // without verification the same run goes through
        assert!(run(&r, &ThreeQubitState::w(), false, VERIFY_TOL).is_ok());
    }

    #[test]
    fn recipe_json_round_trip() {
        for r in builtin_recipes() {
            let text = serde_json::to_string_pretty(&r).unwrap();
            let back = crate::io::parse_recipe(&text).unwrap();
            assert_eq!(back.steps.len(), r.steps.len());
            assert!(linalg::max_abs_diff(&back.unitary(), &r.unitary()) == 0.0);
        }
        let text = r#"{"name": "t", "steps": [
            {"kind":"coupling","pair":"bc","label":"xy","half_angle":0.39269908},
            {"kind":"local","qubit":"a","axis":"z","angle":0.78539816},
            {"kind":"global_phase","phase":-2.35619449}]}"#;
        let r = crate::io::parse_recipe(text).unwrap();
        assert_eq!(r.steps.len(), 3);
        let bad = r#"{"name": "t", "steps": [{"kind":"local","qubit":"a","axis":"I","angle":1}]}"#;
        assert!(crate::io::parse_recipe(bad).is_err());
        let bad = r#"{"name": "t", "steps": [], "expect": [{"after_step": 1}]}"#;
        assert!(crate::io::parse_recipe(bad).is_err());
    }
}
