use std::fmt;

use super::{is_bipartite, trace_faces, SignedRotationSystem, Surface};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    /// V - E + F differs from the surface's Euler characteristic.
    EulerCharacteristic { expected: i64, found: i64 },
    /// A facial walk whose length is not 4.
    FaceLength { face: usize, length: usize },
    /// A facial walk of length 4 that repeats a vertex.
    FaceNotCycle { face: usize },
    /// The edge count differs from 2V - 4 (sphere) or 2V - 2 (projective plane).
    EdgeCount { expected: usize, found: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::EulerCharacteristic { expected, found } => {
                write!(f, "euler characteristic {found}, expected {expected}")
            }
            Violation::FaceLength { face, length } => write!(f, "face {face} has length {length}"),
            Violation::FaceNotCycle { face } => write!(f, "face {face} repeats a vertex"),
            Violation::EdgeCount { expected, found } => {
                write!(f, "{found} edges, expected {expected}")
            }
        }
    }
}

/// Result of checking an embedding against the quadrangulation conditions.
/// Connectivity and simplicity are invariants of [`SignedRotationSystem`] itself.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValidationReport {
    pub surface: Surface,
    pub vertices: usize,
    pub edges: usize,
    pub faces: usize,
    pub euler_characteristic: i64,
    pub bipartite: bool,
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

pub fn validate_quadrangulation(g: &SignedRotationSystem) -> ValidationReport {
    let faces = trace_faces(g);
    let (v, e, f) = (g.num_vertices(), g.num_edges(), faces.len());
    let euler = v as i64 - e as i64 + f as i64;
    let mut violations = Vec::new();
    let expected = g.surface().euler_characteristic();
    if euler != expected {
        violations.push(Violation::EulerCharacteristic { expected, found: euler });
    }
    for (i, face) in faces.faces().iter().enumerate() {
        if face.len() != 4 {
            violations.push(Violation::FaceLength { face: i, length: face.len() });
        } else if !face.is_cycle() {
            violations.push(Violation::FaceNotCycle { face: i });
        }
    }
    if v >= 2 {
        let expected_edges = g.surface().quadrangulation_edges(v);
        if e != expected_edges {
            violations.push(Violation::EdgeCount { expected: expected_edges, found: e });
        }
    }
    ValidationReport {
        surface: g.surface(),
        vertices: v,
        edges: e,
        faces: f,
        euler_characteristic: euler,
        bipartite: is_bipartite(g).is_bipartite(),
        violations,
    }
}
