//! Graphs embedded in the sphere or the projective plane.
//!
//! An embedding is stored as a signed rotation system: every vertex keeps the
//! cyclic order of its neighbours, and every edge carries a sign. Following a
//! face boundary flips the local sense of rotation each time a negative edge is
//! crossed. On the sphere all signs are positive.
//!
//! Local switching (reversing one rotation and negating the signs of the edges
//! at that vertex) yields the same embedding; everything derived here is
//! invariant under it.

mod cycles;
mod dual;
mod faces;
pub mod rsq;
mod validate;

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;
use std::ops::Mul;

use thiserror::Error;

pub use cycles::{
    all_cycles, cycle_sign, disk_interior, disk_interior_in, four_cycles, four_cycles_through,
    is_bipartite, Bipartition, CycleHandle, Interior,
};
pub(crate) use cycles::cycle_sides;
pub use dual::{DiskSide, FaceAdjacency};
pub use faces::{face_through, trace_faces, Face, FaceList};
pub use validate::{validate_quadrangulation, ValidationReport, Violation};

/// Vertex identifier. Identifiers are small integers; they need not be contiguous.
pub type VertexId = u32;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Surface {
    Sphere,
    ProjectivePlane,
}

impl Surface {
    pub fn euler_characteristic(self) -> i64 {
        match self {
            Surface::Sphere => 2,
            Surface::ProjectivePlane => 1,
        }
    }

    /// Edge count of a quadrangulation with `vertices` vertices.
    pub fn quadrangulation_edges(self, vertices: usize) -> usize {
        match self {
            Surface::Sphere => 2 * vertices - 4,
            Surface::ProjectivePlane => 2 * vertices - 2,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Surface::Sphere => "sphere",
            Surface::ProjectivePlane => "projective_plane",
        }
    }
}

impl fmt::Display for Surface {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn value(self) -> i8 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    pub fn flip(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Sign::Plus => '+',
            Sign::Minus => '-',
        }
    }
}

impl Mul for Sign {
    type Output = Sign;

    fn mul(self, rhs: Sign) -> Sign {
        if self == rhs {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }
}

/// A directed edge end. In a simple graph a dart is determined by its endpoints.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Dart {
    pub origin: VertexId,
    pub target: VertexId,
}

impl Dart {
    pub fn new(origin: VertexId, target: VertexId) -> Self {
        Dart { origin, target }
    }

    pub fn twin(self) -> Dart {
        Dart { origin: self.target, target: self.origin }
    }
}

impl fmt::Display for Dart {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}->{}", self.origin, self.target)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EmbeddingError {
    #[error("malformed rotation: {0}")]
    MalformedRotation(String),
    #[error("loop at vertex {0}")]
    Loop(VertexId),
    #[error("parallel edges between {0} and {1}")]
    ParallelEdge(VertexId, VertexId),
    #[error("dart {0}->{1} has no twin")]
    MissingTwin(VertexId, VertexId),
    #[error("edge {0}-{1} has different signs at its two ends")]
    SignMismatch(VertexId, VertexId),
    #[error("negative edge {0}-{1} on the sphere")]
    SignedSphere(VertexId, VertexId),
    #[error("graph is disconnected")]
    Disconnected,
    #[error("graph has no vertices")]
    Empty,
    #[error("not a cycle: {0}")]
    NotACycle(String),
    #[error("cycle is not contractible")]
    NotContractible,
    #[error("sphere embedding has no outer face")]
    NoOuterFace,
    #[error("face index {0} out of range")]
    NoSuchFace(usize),
    #[error("cycle does not separate the surface into two regions")]
    NotSeparating,
}

/// Rotation table with per-end signs: the editable form used while a
/// surgery is in progress. Parallel edges are allowed here.
pub type RotationTable = BTreeMap<VertexId, Vec<(VertexId, Sign)>>;

/// A connected simple graph embedded in a surface.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SignedRotationSystem {
    surface: Surface,
    rotations: BTreeMap<VertexId, Vec<VertexId>>,
    signs: BTreeMap<(VertexId, VertexId), Sign>,
    outer: Option<Dart>,
}

/// Rotations are stored starting at their smallest neighbour.
fn normalize_rotation(rot: &mut [VertexId]) {
    if let Some(start) = (0..rot.len()).min_by_key(|&i| rot[i]) {
        rot.rotate_left(start);
    }
}

pub(crate) fn edge_key(u: VertexId, w: VertexId) -> (VertexId, VertexId) {
    if u < w {
        (u, w)
    } else {
        (w, u)
    }
}

impl SignedRotationSystem {
    /// Builds an embedding from per-vertex rotations listing `(neighbour, sign)`.
    ///
    /// Both ends of an edge must list each other with the same sign.
    pub fn new(surface: Surface, table: RotationTable) -> Result<Self, EmbeddingError> {
        if table.is_empty() {
            return Err(EmbeddingError::Empty);
        }
        let mut rotations = BTreeMap::new();
        let mut signs: BTreeMap<(VertexId, VertexId), Sign> = BTreeMap::new();
        for (&v, rot) in &table {
            for (i, &(w, s)) in rot.iter().enumerate() {
                if w == v {
                    return Err(EmbeddingError::Loop(v));
                }
                if rot[..i].iter().any(|&(x, _)| x == w) {
                    return Err(EmbeddingError::ParallelEdge(v, w));
                }
                let back = table
                    .get(&w)
                    .and_then(|r| r.iter().find(|&&(x, _)| x == v))
                    .ok_or(EmbeddingError::MissingTwin(v, w))?;
                if back.1 != s {
                    return Err(EmbeddingError::SignMismatch(v, w));
                }
                if surface == Surface::Sphere && s == Sign::Minus {
                    return Err(EmbeddingError::SignedSphere(v.min(w), v.max(w)));
                }
                if v < w {
                    signs.insert((v, w), s);
                }
            }
            let mut rot: Vec<_> = rot.iter().map(|&(w, _)| w).collect();
            normalize_rotation(&mut rot);
            rotations.insert(v, rot);
        }
        let g = SignedRotationSystem { surface, rotations, signs, outer: None };
        if !g.is_connected() {
            return Err(EmbeddingError::Disconnected);
        }
        Ok(g)
    }

    /// Builds an embedding with every edge positive.
    pub fn from_rotations(
        surface: Surface,
        rotations: impl IntoIterator<Item = (VertexId, Vec<VertexId>)>,
    ) -> Result<Self, EmbeddingError> {
        let table = rotations
            .into_iter()
            .map(|(v, rot)| (v, rot.into_iter().map(|w| (w, Sign::Plus)).collect()))
            .collect();
        Self::new(surface, table)
    }

    pub fn surface(&self) -> Surface {
        self.surface
    }

    pub fn num_vertices(&self) -> usize {
        self.rotations.len()
    }

    pub fn num_edges(&self) -> usize {
        self.signs.len()
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.rotations.keys().copied()
    }

    pub fn contains_vertex(&self, v: VertexId) -> bool {
        self.rotations.contains_key(&v)
    }

    pub fn max_vertex(&self) -> VertexId {
        *self.rotations.keys().next_back().expect("embeddings are non-empty")
    }

    /// Neighbours of `v` in rotation order. Empty for unknown vertices.
    pub fn rotation(&self, v: VertexId) -> &[VertexId] {
        self.rotations.get(&v).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.rotation(v).len()
    }

    pub fn has_edge(&self, u: VertexId, w: VertexId) -> bool {
        self.signs.contains_key(&edge_key(u, w))
    }

    pub fn sign(&self, u: VertexId, w: VertexId) -> Option<Sign> {
        self.signs.get(&edge_key(u, w)).copied()
    }

    /// Edges as `(u, w, sign)` with `u < w`, sorted.
    pub fn edges(&self) -> impl Iterator<Item = (VertexId, VertexId, Sign)> + '_ {
        self.signs.iter().map(|(&(u, w), &s)| (u, w, s))
    }

    pub fn common_neighbors(&self, u: VertexId, w: VertexId) -> BTreeSet<VertexId> {
        let nu: BTreeSet<_> = self.rotation(u).iter().copied().collect();
        self.rotation(w).iter().copied().filter(|x| nu.contains(x)).collect()
    }

    /// True when no two neighbours of `v` are adjacent.
    pub fn has_stable_neighborhood(&self, v: VertexId) -> bool {
        let rot = self.rotation(v);
        rot.iter()
            .enumerate()
            .all(|(i, &a)| rot[i + 1..].iter().all(|&b| !self.has_edge(a, b)))
    }

    pub fn min_degree(&self) -> usize {
        self.rotations.values().map(Vec::len).min().unwrap_or(0)
    }

    /// The dart whose face (traversed with positive local orientation at its
    /// origin) is the unbounded face of the plane.
    pub fn outer_dart(&self) -> Option<Dart> {
        self.outer
    }

    /// Designates face `index` of [`trace_faces`] as the outer face.
    pub fn set_outer_face(&mut self, index: usize) -> Result<(), EmbeddingError> {
        let faces = trace_faces(self);
        let face = faces.faces().get(index).ok_or(EmbeddingError::NoSuchFace(index))?;
        let dart = face
            .steps()
            .iter()
            .find(|&&(_, o)| o == Sign::Plus)
            .map(|&(d, _)| d)
            .ok_or(EmbeddingError::NoSuchFace(index))?;
        self.outer = Some(dart);
        Ok(())
    }

    pub fn with_outer_face(mut self, index: usize) -> Result<Self, EmbeddingError> {
        self.set_outer_face(index)?;
        Ok(self)
    }

    pub fn clear_outer_face(&mut self) {
        self.outer = None;
    }

    pub(crate) fn set_outer_dart(&mut self, dart: Option<Dart>) {
        self.outer = dart.filter(|d| self.has_edge(d.origin, d.target));
    }

    /// Index of the outer face in `faces`, if one is designated.
    pub fn outer_face_index(&self, faces: &FaceList) -> Option<usize> {
        self.outer.and_then(|d| faces.face_of(d, Sign::Plus))
    }

    /// Editable copy of the rotations, with signs on both ends.
    pub fn to_table(&self) -> RotationTable {
        self.rotations
            .iter()
            .map(|(&v, rot)| {
                let row = rot.iter().map(|&w| (w, self.signs[&edge_key(v, w)])).collect();
                (v, row)
            })
            .collect()
    }

    /// The same embedding after reversing the rotation at `v` and negating its edges.
    pub fn switched(&self, v: VertexId) -> SignedRotationSystem {
        let mut g = self.clone();
        if let Some(rot) = g.rotations.get_mut(&v) {
            rot.reverse();
            normalize_rotation(rot);
            for &w in rot.iter() {
                let s = g.signs.get_mut(&edge_key(v, w)).expect("edge present");
                *s = s.flip();
            }
        }
        g
    }

    /// Renames vertices through `map`, which must be injective on the vertex set.
    pub fn relabeled(&self, map: impl Fn(VertexId) -> VertexId) -> SignedRotationSystem {
        let rotations = self
            .rotations
            .iter()
            .map(|(&v, rot)| {
                let mut rot: Vec<_> = rot.iter().map(|&w| map(w)).collect();
                normalize_rotation(&mut rot);
                (map(v), rot)
            })
            .collect();
        let signs = self.signs.iter().map(|(&(u, w), &s)| (edge_key(map(u), map(w)), s)).collect();
        SignedRotationSystem {
            surface: self.surface,
            rotations,
            signs,
            outer: self.outer.map(|d| Dart::new(map(d.origin), map(d.target))),
        }
    }

    /// Is this graph the 4-cycle?
    pub fn is_four_cycle(&self) -> bool {
        self.num_vertices() == 4 && self.num_edges() == 4 && self.rotations.values().all(|r| r.len() == 2)
    }

    fn is_connected(&self) -> bool {
        let Some(&start) = self.rotations.keys().next() else {
            return false;
        };
        let mut seen = BTreeSet::from([start]);
        let mut queue = VecDeque::from([start]);
        while let Some(v) = queue.pop_front() {
            for &w in self.rotation(v) {
                if seen.insert(w) {
                    queue.push_back(w);
                }
            }
        }
        seen.len() == self.rotations.len()
    }
}
