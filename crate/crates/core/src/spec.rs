//! Text forms of rack inputs: JSON `(t,s)`-rack specs and rack matrices.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::algebra::AbelianGroup;
use crate::rack::FiniteRack;
use crate::tsrack::{TsRack, TsRackError};

/// `{"type":"linear","n":..,"t":..,"s":..}`,
/// `{"type":"quotient","n":..,"p":[c0,c1,..]}` (ascending, monic) or
/// `{"type":"module","moduli":[..],"t":[[..]],"s":[[..]]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase", deny_unknown_fields)]
pub enum TsRackSpec {
    Linear {
        n: u64,
        t: u64,
        s: u64,
    },
    Quotient {
        n: u64,
        p: Vec<i64>,
    },
    Module {
        moduli: Vec<u64>,
        t: Vec<Vec<i64>>,
        s: Vec<Vec<i64>>,
    },
}

impl TsRackSpec {
    pub fn build(&self) -> Result<TsRack, TsRackError> {
        match self {
            TsRackSpec::Linear { n, t, s } => TsRack::linear(*n, *t, *s),
            TsRackSpec::Quotient { n, p } => TsRack::quotient(*n, p),
            TsRackSpec::Module { moduli, t, s } => TsRack::module(AbelianGroup::new(moduli.clone())?, t, s),
        }
    }

    /// Compact JSON with fields in a fixed order.
    pub fn canonical(&self) -> String {
        serde_json::to_string(self).expect("spec serializes")
    }
}

impl fmt::Display for TsRackSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.canonical())
    }
}

/// A rack given either with its module structure or as a bare matrix.
#[derive(Debug, Clone)]
pub enum RackInput {
    Module { spec: TsRackSpec, rack: Box<TsRack> },
    Matrix(FiniteRack),
}

impl RackInput {
    pub fn finite_rack(&self) -> FiniteRack {
        match self {
            RackInput::Module { rack, .. } => rack.to_finite_rack(),
            RackInput::Matrix(r) => r.clone(),
        }
    }

    pub fn ts_rack(&self) -> Option<&TsRack> {
        match self {
            RackInput::Module { rack, .. } => Some(rack),
            RackInput::Matrix(_) => None,
        }
    }

    /// Stable text identifying the rack, used in cache keys and records.
    pub fn canonical(&self) -> String {
        match self {
            RackInput::Module { spec, .. } => spec.canonical(),
            RackInput::Matrix(r) => {
                let rows: Vec<String> = r
                    .matrix()
                    .iter()
                    .map(|row| row.iter().map(usize::to_string).collect::<Vec<_>>().join(" "))
                    .collect();
                format!("matrix:{}", rows.join(";"))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_round_trip() {
        let s: TsRackSpec = serde_json::from_str(r#"{"type":"linear","n":12,"t":11,"s":2}"#).unwrap();
        assert_eq!(s, TsRackSpec::Linear { n: 12, t: 11, s: 2 });
        assert_eq!(s.canonical(), r#"{"type":"linear","n":12,"t":11,"s":2}"#);
        let q: TsRackSpec = serde_json::from_str(r#"{ "p": [1, 0, 1], "type": "quotient", "n": 2 }"#).unwrap();
        assert_eq!(q.build().unwrap().size(), 16);
        let m: TsRackSpec =
            serde_json::from_str(r#"{"type":"module","moduli":[2,2],"t":[[1,0],[0,1]],"s":[[0,0],[1,0]]}"#).unwrap();
        assert_eq!(m.build().unwrap().size(), 4);
        assert!(serde_json::from_str::<TsRackSpec>(r#"{"type":"linear","n":4,"t":1}"#).is_err());
        assert!(serde_json::from_str::<TsRackSpec>(r#"{"type":"linear","n":4,"t":1,"s":2,"x":0}"#).is_err());
    }

    #[test]
    fn matrix_canonical() {
        let r = RackInput::Matrix(FiniteRack::constant_action(&[2, 1]).unwrap());
        assert_eq!(r.canonical(), "matrix:2 2;1 1");
    }
}
