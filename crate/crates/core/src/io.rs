//! JSON wire formats. Complex numbers are `[re, im]` pairs.
//!
//! Floats go through `serde_json`, which writes the shortest decimal that
//! reads back to the same `f64`.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{c, C64};
use crate::pauli::PauliLabel;
use crate::recipes::Recipe;
use crate::so6::{PairHamiltonian, PlaneRotation};
use crate::state::{Pair, ThreeQubitState};

/// `{"amplitudes": [[re, im] × 8]}`
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateJson {
    pub amplitudes: Vec<[f64; 2]>,
}

impl From<&ThreeQubitState> for StateJson {
    fn from(s: &ThreeQubitState) -> Self {
        StateJson {
            amplitudes: amplitudes_to_json(s.amplitudes()),
        }
    }
}

impl TryFrom<&StateJson> for ThreeQubitState {
    type Error = Error;

    fn try_from(j: &StateJson) -> Result<Self> {
        ThreeQubitState::new(amplitudes_from_json(&j.amplitudes)?)
    }
}

pub fn amplitudes_to_json(amps: &[C64]) -> Vec<[f64; 2]> {
    amps.iter().map(|z| [z.re, z.im]).collect()
}

/// Eight finite `[re, im]` pairs; normalization is left to the caller.
pub fn amplitudes_from_json(list: &[[f64; 2]]) -> Result<[C64; 8]> {
    if list.len() != 8 {
        return Err(Error::Parse(format!("expected 8 amplitudes, got {}", list.len())));
    }
    if list.iter().flatten().any(|x| !x.is_finite()) {
        return Err(Error::Parse("amplitudes must be finite".into()));
    }
    Ok(std::array::from_fn(|k| c(list[k][0], list[k][1])))
}

fn from_json<T: for<'de> Deserialize<'de>>(text: &str, what: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Parse(format!("{what}: {e}")))
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

pub fn parse_state(text: &str) -> Result<ThreeQubitState> {
    ThreeQubitState::try_from(&from_json::<StateJson>(text, "state")?)
}

pub fn read_state(path: &Path) -> Result<ThreeQubitState> {
    parse_state(&read(path)?).map_err(|e| prefix(path, e))
}

fn prefix(path: &Path, e: Error) -> Error {
    match e {
        Error::Parse(m) => Error::Parse(format!("{}: {m}", path.display())),
        Error::Validation(m) => Error::Validation(format!("{}: {m}", path.display())),
        other => other,
    }
}

/// `{"pair": "bc", "coeffs": {"xy": 0.5, "zI": -0.1}}`
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HamiltonianJson {
    pub pair: Pair,
    pub coeffs: BTreeMap<PauliLabel, f64>,
}

impl TryFrom<&HamiltonianJson> for PairHamiltonian {
    type Error = Error;

    fn try_from(j: &HamiltonianJson) -> Result<Self> {
        PairHamiltonian::from_coeffs(j.pair, j.coeffs.iter())
    }
}

pub fn parse_hamiltonian(text: &str) -> Result<PairHamiltonian> {
    PairHamiltonian::try_from(&from_json::<HamiltonianJson>(text, "Hamiltonian")?)
}

pub fn read_hamiltonian(path: &Path) -> Result<PairHamiltonian> {
    parse_hamiltonian(&read(path)?).map_err(|e| prefix(path, e))
}

pub fn parse_rotation(text: &str) -> Result<PlaneRotation> {
    let r: PlaneRotation = from_json(text, "rotation")?;
    r.validate()?;
    Ok(r)
}

pub fn parse_recipe(text: &str) -> Result<Recipe> {
    let r: Recipe = from_json(text, "recipe")?;
    r.validate()?;
    Ok(r)
}

pub fn read_recipe(path: &Path) -> Result<Recipe> {
    parse_recipe(&read(path)?).map_err(|e| prefix(path, e))
}

/// Pretty JSON with a trailing newline.
pub fn to_pretty<T: Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn state_round_trip_is_exact() {
        let w = ThreeQubitState::w();
        let text = serde_json::to_string(&StateJson::from(&w)).unwrap();
        assert_eq!(parse_state(&text).unwrap(), w);
        let phased = ThreeQubitState::ghz_phased();
        let text = serde_json::to_string(&StateJson::from(&phased)).unwrap();
        assert_eq!(parse_state(&text).unwrap(), phased);
    }

    #[test]
    fn bad_states_rejected() {
        let seven = r#"{"amplitudes": [[1,0],[0,0],[0,0],[0,0],[0,0],[0,0],[0,0]]}"#;
        assert!(matches!(parse_state(seven), Err(Error::Parse(_))));
        let unnormalized = r#"{"amplitudes": [[1,0],[1,0],[0,0],[0,0],[0,0],[0,0],[0,0],[0,0]]}"#;
        assert!(matches!(parse_state(unnormalized), Err(Error::Validation(_))));
        let err = parse_state("{\n  \"amplitudes\": [[1, 0],\n  oops]}").unwrap_err();
        assert!(err.to_string().contains("line 3"), "{err}");
    }

    #[test]
    fn hamiltonian_json() {
        let h = parse_hamiltonian(r#"{"pair": "ca", "coeffs": {"xy": 0.5, "zI": -0.1}}"#).unwrap();
        assert_eq!(h.pair, Pair::Ca);
        // τ₁₅ = σ_xy, so f₁₅ = 0.5
        assert!((h.f[(0, 4)] - 0.5).abs() < 1e-15);
        assert!(crate::linalg::max_abs_diff(&h.reconstruct(), &h.matrix) < 1e-14);
        assert!(parse_hamiltonian(r#"{"pair": "bc", "coeffs": {"II": 1.0}}"#).is_err());
        assert!(parse_hamiltonian(r#"{"pair": "bd", "coeffs": {}}"#).is_err());
    }

    #[test]
    fn rotation_json() {
        let r = parse_rotation(r#"{"pair": "bc", "plane": [1, 5], "angle": 0.7853981634}"#).unwrap();
        assert_eq!(r.plane, [1, 5]);
        assert!(parse_rotation(r#"{"pair": "bc", "plane": [1, 1], "angle": 0.1}"#).is_err());
    }
}
