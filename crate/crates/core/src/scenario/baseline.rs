use serde::{Deserialize, Serialize};

use super::ScenarioError;

/// Symmetry-transfer baseline: the target inherits the source's conditional
/// betting quotient, lowered by `delta`. Nothing about the target enters.
pub fn symmetry_baseline(source_quotient: f64, delta: f64) -> Result<f64, ScenarioError> {
    if !(0.0..=1.0).contains(&source_quotient) {
        return Err(ScenarioError::Invalid(format!(
            "source quotient {source_quotient} outside [0, 1]"
        )));
    }
    if !(0.0..=source_quotient).contains(&delta) {
        return Err(ScenarioError::Invalid(format!(
            "delta {delta} outside [0, {source_quotient}]"
        )));
    }
    Ok((source_quotient - delta).max(0.0))
}

/// `v - e + f`.
pub fn euler_characteristic(v: u64, e: u64, f: u64) -> i64 {
    v as i64 - e as i64 + f as i64
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Solid {
    pub name: &'static str,
    pub vertices: u64,
    pub edges: u64,
    pub faces: u64,
}

pub const PLATONIC_SOLIDS: [Solid; 5] = [
    Solid {
        name: "tetrahedron",
        vertices: 4,
        edges: 6,
        faces: 4,
    },
    Solid {
        name: "cube",
        vertices: 8,
        edges: 12,
        faces: 6,
    },
    Solid {
        name: "octahedron",
        vertices: 6,
        edges: 12,
        faces: 8,
    },
    Solid {
        name: "dodecahedron",
        vertices: 20,
        edges: 30,
        faces: 12,
    },
    Solid {
        name: "icosahedron",
        vertices: 12,
        edges: 30,
        faces: 20,
    },
];
