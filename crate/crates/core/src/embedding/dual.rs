//! Face adjacency and a fast disk-side computation for contractible cycles.

use std::collections::{HashMap, HashSet, VecDeque};

use super::{edge_key, CycleHandle, Dart, EmbeddingError, FaceList, Sign, SignedRotationSystem, Surface, VertexId};

/// For each face, the faces across each of its edges.
#[derive(Clone, Debug)]
pub struct FaceAdjacency {
    across: Vec<Vec<((VertexId, VertexId), usize)>>,
    outer: Option<usize>,
    surface: Surface,
    vertex_count: usize,
}

/// The disk side of a contractible cycle, stored as whichever side was
/// cheaper to find.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DiskSide {
    /// Vertices strictly inside the disk.
    Inside(HashSet<VertexId>),
    /// Vertices strictly outside the disk; the interior is everything else
    /// off the cycle.
    Outside(HashSet<VertexId>),
}

impl DiskSide {
    pub fn interior_count(&self, total: usize, cycle_len: usize) -> usize {
        match self {
            DiskSide::Inside(s) => s.len(),
            DiskSide::Outside(s) => total - cycle_len - s.len(),
        }
    }

    pub fn interior(&self, g: &SignedRotationSystem, c: &CycleHandle) -> Vec<VertexId> {
        match self {
            DiskSide::Inside(s) => {
                let mut v: Vec<_> = s.iter().copied().collect();
                v.sort_unstable();
                v
            }
            DiskSide::Outside(s) => g.vertices().filter(|v| !s.contains(v) && !c.contains(*v)).collect(),
        }
    }
}

impl FaceAdjacency {
    pub fn new(g: &SignedRotationSystem, faces: &FaceList) -> Self {
        let across = faces
            .faces()
            .iter()
            .enumerate()
            .map(|(i, f)| {
                f.darts()
                    .map(|d| {
                        let [a, b] = faces.edge_faces(d.origin, d.target).expect("edge of the graph");
                        (edge_key(d.origin, d.target), if a == i { b } else { a })
                    })
                    .collect()
            })
            .collect();
        FaceAdjacency { across, outer: g.outer_face_index(faces), surface: g.surface(), vertex_count: g.num_vertices() }
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    /// The disk side of the contractible cycle `c`.
    ///
    /// Both sides are grown one face at a time from the two faces along one
    /// cycle edge, and the first to close up is measured. On the sphere the
    /// disk is the side without the outer face. On the projective plane the
    /// two sides have Euler characteristics summing to 1, so the measured
    /// side decides.
    pub fn disk_side(&self, g: &SignedRotationSystem, faces: &FaceList, c: &CycleHandle) -> Result<DiskSide, EmbeddingError> {
        if super::cycle_sign(g, c)? == Sign::Minus {
            return Err(EmbeddingError::NotContractible);
        }
        let blocked: Vec<(VertexId, VertexId)> = c.darts().iter().map(|d| edge_key(d.origin, d.target)).collect();
        let d0 = Dart::new(c.vertices()[0], c.vertices()[1]);
        let [a, b] = faces.edge_faces(d0.origin, d0.target).ok_or(EmbeddingError::NotSeparating)?;
        if a == b {
            return Err(EmbeddingError::NotSeparating);
        }
        let mut mark: HashMap<usize, u8> = HashMap::from([(a, 0), (b, 1)]);
        let mut queues = [VecDeque::from([a]), VecDeque::from([b])];
        let mut members: [Vec<usize>; 2] = [Vec::new(), Vec::new()];
        let done = loop {
            let mut finished = None;
            for side in 0..2 {
                let Some(f) = queues[side].pop_front() else {
                    finished = Some(side);
                    break;
                };
                members[side].push(f);
                for &(key, other) in &self.across[f] {
                    if blocked.contains(&key) {
                        continue;
                    }
                    match mark.get(&other) {
                        None => {
                            mark.insert(other, side as u8);
                            queues[side].push_back(other);
                        }
                        Some(&s) if s as usize != side => return Err(EmbeddingError::NotSeparating),
                        Some(_) => {}
                    }
                }
            }
            if let Some(side) = finished {
                break side;
            }
        };
        let mut vertices = HashSet::new();
        let mut edges = HashSet::new();
        for &f in &members[done] {
            for &(key, _) in &self.across[f] {
                vertices.insert(key.0);
                vertices.insert(key.1);
                edges.insert(key);
            }
        }
        let small_is_disk = match self.surface {
            Surface::Sphere => {
                let outer = self.outer.ok_or(EmbeddingError::NoOuterFace)?;
                !members[done].contains(&outer)
            }
            Surface::ProjectivePlane => {
                vertices.len() as i64 - edges.len() as i64 + members[done].len() as i64 == 1
            }
        };
        vertices.retain(|v| !c.contains(*v));
        Ok(if small_is_disk { DiskSide::Inside(vertices) } else { DiskSide::Outside(vertices) })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::embedding::{disk_interior_in, four_cycles, trace_faces};
    use crate::generate::{gen_quadrangulation, tube};

    #[test]
    fn agrees_with_the_full_computation() {
        let graphs = [
            tube(4).with_outer_face(3).unwrap(),
            gen_quadrangulation(Surface::Sphere, 40, 5, false).unwrap(),
            gen_quadrangulation(Surface::ProjectivePlane, 30, 5, true).unwrap(),
            gen_quadrangulation(Surface::ProjectivePlane, 30, 6, false).unwrap(),
        ];
        for g in graphs {
            let faces = trace_faces(&g);
            let adj = FaceAdjacency::new(&g, &faces);
            for c in four_cycles(&g) {
                let full = disk_interior_in(&g, &faces, &c);
                let fast = adj.disk_side(&g, &faces, &c);
                match (full, fast) {
                    (Ok(full), Ok(fast)) => {
                        let inside: Vec<_> = full.vertices.iter().copied().collect();
                        assert_eq!(fast.interior(&g, &c), inside);
                        assert_eq!(fast.interior_count(g.num_vertices(), 4), inside.len());
                    }
                    (Err(a), Err(b)) => assert_eq!(a, b),
                    (a, b) => panic!("{a:?} vs {b:?}"),
                }
            }
        }
    }
}
