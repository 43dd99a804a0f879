use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{c, kron2, CMat2, CMat4, I, ONE, ZERO};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    pub const AXES: [Pauli; 3] = [Pauli::X, Pauli::Y, Pauli::Z];

    pub fn matrix(self) -> CMat2 {
        match self {
            Pauli::I => CMat2::identity(),
            Pauli::X => CMat2::new(ZERO, ONE, ONE, ZERO),
            Pauli::Y => CMat2::new(ZERO, -I, I, ZERO),
            Pauli::Z => CMat2::new(ONE, ZERO, ZERO, c(-1.0, 0.0)),
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Pauli::I => 'I',
            Pauli::X => 'x',
            Pauli::Y => 'y',
            Pauli::Z => 'z',
        }
    }

    pub fn from_symbol(ch: char) -> Result<Self> {
        match ch {
            'I' | 'i' | '1' => Ok(Pauli::I),
            'x' | 'X' => Ok(Pauli::X),
            'y' | 'Y' => Ok(Pauli::Y),
            'z' | 'Z' => Ok(Pauli::Z),
            other => Err(Error::Parse(format!("unknown Pauli symbol {other:?}"))),
        }
    }
}

impl Serialize for Pauli {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.symbol().to_string())
    }
}

impl<'de> Deserialize<'de> for Pauli {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        let mut chars = s.chars();
        match (chars.next(), chars.next()) {
            (Some(ch), None) => Pauli::from_symbol(ch).map_err(serde::de::Error::custom),
            _ => Err(serde::de::Error::custom(format!("bad Pauli axis {s:?}"))),
        }
    }
}

/// Two-qubit Pauli product on an ordered pair, e.g. `xy` = σ_x ⊗ σ_y, `zI` = σ_z ⊗ 1.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PauliLabel {
    pub first: Pauli,
    pub second: Pauli,
}

impl PauliLabel {
    pub const fn new(first: Pauli, second: Pauli) -> Self {
        PauliLabel { first, second }
    }

    /// The 15 traceless labels, identity excluded.
    pub fn all() -> Vec<PauliLabel> {
        let ops = [Pauli::I, Pauli::X, Pauli::Y, Pauli::Z];
        ops.iter()
            .flat_map(|&a| ops.iter().map(move |&b| PauliLabel::new(a, b)))
            .filter(|l| !l.is_identity())
            .collect()
    }

    pub fn is_identity(self) -> bool {
        self.first == Pauli::I && self.second == Pauli::I
    }

    pub fn matrix(self) -> CMat4 {
        kron2(&self.first.matrix(), &self.second.matrix())
    }
}

impl fmt::Display for PauliLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.first.symbol(), self.second.symbol())
    }
}

impl FromStr for PauliLabel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let chars: Vec<char> = s.chars().collect();
        if chars.len() != 2 {
            return Err(Error::Parse(format!("Pauli label must have two symbols, got {s:?}")));
        }
        let label = PauliLabel::new(Pauli::from_symbol(chars[0])?, Pauli::from_symbol(chars[1])?);
        if label.is_identity() {
            return Err(Error::Parse("identity label II is not a generator".into()));
        }
        Ok(label)
    }
}

impl Serialize for PauliLabel {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for PauliLabel {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fifteen_labels_are_trace_orthogonal() {
        let labels = PauliLabel::all();
        assert_eq!(labels.len(), 15);
        for a in &labels {
            for b in &labels {
                let tr = (a.matrix() * b.matrix()).trace();
                let expected = if a == b { 4.0 } else { 0.0 };
                assert!((tr.re - expected).abs() < 1e-15 && tr.im.abs() < 1e-15);
            }
        }
    }

    #[test]
    fn parse_round_trip() {
        for l in PauliLabel::all() {
            assert_eq!(l.to_string().parse::<PauliLabel>().unwrap(), l);
        }
        assert!("II".parse::<PauliLabel>().is_err());
        assert!("xq".parse::<PauliLabel>().is_err());
        assert!("xyz".parse::<PauliLabel>().is_err());
    }
}
