use std::collections::{BTreeMap, BTreeSet, HashSet, VecDeque};

use super::{edge_key, trace_faces, Dart, EmbeddingError, FaceList, Sign, SignedRotationSystem, Surface, VertexId};

/// A cycle of the graph, as a cyclic vertex sequence.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CycleHandle {
    vertices: Vec<VertexId>,
}

impl CycleHandle {
    pub fn new(g: &SignedRotationSystem, vertices: Vec<VertexId>) -> Result<Self, EmbeddingError> {
        if vertices.len() < 3 {
            return Err(EmbeddingError::NotACycle(format!("{} vertices", vertices.len())));
        }
        let distinct: BTreeSet<_> = vertices.iter().collect();
        if distinct.len() != vertices.len() {
            return Err(EmbeddingError::NotACycle("repeated vertex".into()));
        }
        let c = CycleHandle { vertices };
        for d in c.darts() {
            if !g.has_edge(d.origin, d.target) {
                return Err(EmbeddingError::NotACycle(format!("missing edge {d}")));
            }
        }
        Ok(c)
    }

    pub fn vertices(&self) -> &[VertexId] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn contains(&self, v: VertexId) -> bool {
        self.vertices.contains(&v)
    }

    pub fn darts(&self) -> Vec<Dart> {
        let n = self.vertices.len();
        (0..n).map(|i| Dart::new(self.vertices[i], self.vertices[(i + 1) % n])).collect()
    }

    /// The same cycle rotated to start at its smallest vertex, with the
    /// smaller of the two neighbours of that vertex second.
    pub fn normalized(&self) -> CycleHandle {
        let n = self.vertices.len();
        let start = (0..n).min_by_key(|&i| self.vertices[i]).unwrap_or(0);
        let fwd = self.vertices[(start + 1) % n];
        let back = self.vertices[(start + n - 1) % n];
        let vertices = if fwd <= back {
            (0..n).map(|i| self.vertices[(start + i) % n]).collect()
        } else {
            (0..n).map(|i| self.vertices[(start + n - i) % n]).collect()
        };
        CycleHandle { vertices }
    }

    /// The sorted vertex tuple, used as a deterministic tie-break.
    pub fn sorted_vertices(&self) -> Vec<VertexId> {
        let mut vs = self.vertices.clone();
        vs.sort_unstable();
        vs
    }
}

/// Product of the edge signs along `c`; `Plus` exactly when `c` is contractible.
pub fn cycle_sign(g: &SignedRotationSystem, c: &CycleHandle) -> Result<Sign, EmbeddingError> {
    c.darts().into_iter().try_fold(Sign::Plus, |acc, d| {
        g.sign(d.origin, d.target)
            .map(|s| acc * s)
            .ok_or_else(|| EmbeddingError::NotACycle(format!("missing edge {d}")))
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bipartition {
    /// Colour class (`false`/`true`) of every vertex, present when bipartite.
    pub coloring: Option<BTreeMap<VertexId, bool>>,
    /// An odd cycle, present when not bipartite.
    pub odd_cycle: Option<CycleHandle>,
}

impl Bipartition {
    pub fn is_bipartite(&self) -> bool {
        self.odd_cycle.is_none()
    }
}

pub fn is_bipartite(g: &SignedRotationSystem) -> Bipartition {
    let ids: Vec<VertexId> = g.vertices().collect();
    let index = |v: VertexId| ids.binary_search(&v).expect("vertex of the graph");
    let mut color: Vec<Option<bool>> = vec![None; ids.len()];
    let mut parent: BTreeMap<VertexId, VertexId> = BTreeMap::new();
    color[0] = Some(false);
    let mut queue = VecDeque::from([0]);
    while let Some(u) = queue.pop_front() {
        let cu = color[u].expect("queued vertices are coloured");
        for &w in g.rotation(ids[u]) {
            let wi = index(w);
            match color[wi] {
                None => {
                    color[wi] = Some(!cu);
                    parent.insert(w, ids[u]);
                    queue.push_back(wi);
                }
                Some(cw) if cw == cu => {
                    let odd = odd_cycle_from_tree(&parent, ids[u], w);
                    return Bipartition { coloring: None, odd_cycle: Some(odd) };
                }
                Some(_) => {}
            }
        }
    }
    let coloring = ids.iter().zip(&color).map(|(&v, c)| (v, c.expect("connected"))).collect();
    Bipartition { coloring: Some(coloring), odd_cycle: None }
}

fn odd_cycle_from_tree(parent: &BTreeMap<VertexId, VertexId>, u: VertexId, w: VertexId) -> CycleHandle {
    let path_to_root = |mut x: VertexId| {
        let mut path = vec![x];
        while let Some(&p) = parent.get(&x) {
            path.push(p);
            x = p;
        }
        path
    };
    let pu = path_to_root(u);
    let pw = path_to_root(w);
    let on_u: HashSet<_> = pu.iter().copied().collect();
    let meet = pw.iter().position(|x| on_u.contains(x)).expect("common root");
    let lca = pw[meet];
    let mut vertices: Vec<_> = pu.iter().copied().take_while(|&x| x != lca).collect();
    vertices.push(lca);
    vertices.extend(pw[..meet].iter().rev());
    CycleHandle { vertices }
}

/// One side of a separating cycle: a connected group of faces.
struct Region {
    faces: BTreeSet<usize>,
    vertices: BTreeSet<VertexId>,
    euler: i64,
}

fn regions(faces: &FaceList, c: &CycleHandle) -> Vec<Region> {
    let blocked: HashSet<_> = c.darts().iter().map(|d| edge_key(d.origin, d.target)).collect();
    let mut component = vec![usize::MAX; faces.len()];
    let mut out = Vec::new();
    for start in 0..faces.len() {
        if component[start] != usize::MAX {
            continue;
        }
        let id = out.len();
        component[start] = id;
        let mut queue = VecDeque::from([start]);
        let mut members = BTreeSet::new();
        while let Some(f) = queue.pop_front() {
            members.insert(f);
            for d in faces.faces()[f].darts() {
                if blocked.contains(&edge_key(d.origin, d.target)) {
                    continue;
                }
                let sides = faces.edge_faces(d.origin, d.target).expect("edge of the graph");
                for other in sides {
                    if component[other] == usize::MAX {
                        component[other] = id;
                        queue.push_back(other);
                    }
                }
            }
        }
        let mut vertices = BTreeSet::new();
        let mut edges = BTreeSet::new();
        for &f in &members {
            for d in faces.faces()[f].darts() {
                vertices.insert(d.origin);
                edges.insert(edge_key(d.origin, d.target));
            }
        }
        let euler = vertices.len() as i64 - edges.len() as i64 + members.len() as i64;
        out.push(Region { faces: members, vertices, euler });
    }
    out
}

/// The disk side of a contractible cycle.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Interior {
    /// Vertices strictly inside the disk.
    pub vertices: BTreeSet<VertexId>,
    /// Faces inside the disk.
    pub faces: BTreeSet<usize>,
    /// Vertices strictly on the other side.
    pub exterior: BTreeSet<VertexId>,
}

pub fn disk_interior(g: &SignedRotationSystem, c: &CycleHandle) -> Result<Interior, EmbeddingError> {
    disk_interior_in(g, &trace_faces(g), c)
}

/// [`disk_interior`] reusing an already traced face list of `g`.
///
/// On the sphere the interior is the side away from the outer face; on the
/// projective plane it is the side whose closure has Euler characteristic 1.
pub fn disk_interior_in(
    g: &SignedRotationSystem,
    faces: &FaceList,
    c: &CycleHandle,
) -> Result<Interior, EmbeddingError> {
    if cycle_sign(g, c)? == Sign::Minus {
        return Err(EmbeddingError::NotContractible);
    }
    let mut sides = regions(faces, c);
    if sides.len() != 2 {
        return Err(EmbeddingError::NotSeparating);
    }
    let disk = match g.surface() {
        Surface::Sphere => {
            let outer = g.outer_face_index(faces).ok_or(EmbeddingError::NoOuterFace)?;
            usize::from(sides[0].faces.contains(&outer))
        }
        Surface::ProjectivePlane => match (sides[0].euler, sides[1].euler) {
            (1, e) if e != 1 => 0,
            (e, 1) if e != 1 => 1,
            _ => return Err(EmbeddingError::NotSeparating),
        },
    };
    let other = sides.swap_remove(1 - disk);
    let inside = sides.swap_remove(0);
    let strip = |vs: BTreeSet<VertexId>| vs.into_iter().filter(|&v| !c.contains(v)).collect();
    Ok(Interior { vertices: strip(inside.vertices), faces: inside.faces, exterior: strip(other.vertices) })
}

/// Vertex sets strictly on each side of a contractible cycle, ignoring any
/// outer-face designation. `None` when the cycle does not split the surface in two.
pub(crate) fn cycle_sides(
    faces: &FaceList,
    c: &CycleHandle,
) -> Option<[BTreeSet<VertexId>; 2]> {
    let sides = regions(faces, c);
    if sides.len() != 2 {
        return None;
    }
    let strip = |r: &Region| r.vertices.iter().copied().filter(|&v| !c.contains(v)).collect();
    Some([strip(&sides[0]), strip(&sides[1])])
}

/// All 4-cycles, each once, normalized.
pub fn four_cycles(g: &SignedRotationSystem) -> Vec<CycleHandle> {
    let sorted: BTreeMap<VertexId, Vec<VertexId>> = g
        .vertices()
        .map(|v| {
            let mut r = g.rotation(v).to_vec();
            r.sort_unstable();
            (v, r)
        })
        .collect();
    let mut out = Vec::new();
    for (&a, nbrs) in &sorted {
        let nbrs = &nbrs[nbrs.partition_point(|&x| x <= a)..];
        for (i, &b) in nbrs.iter().enumerate() {
            for &d in &nbrs[i + 1..] {
                let (nb, nd) = (&sorted[&b], &sorted[&d]);
                let (mut x, mut y) = (nb.partition_point(|&c| c <= a), nd.partition_point(|&c| c <= a));
                while x < nb.len() && y < nd.len() {
                    match nb[x].cmp(&nd[y]) {
                        std::cmp::Ordering::Less => x += 1,
                        std::cmp::Ordering::Greater => y += 1,
                        std::cmp::Ordering::Equal => {
                            out.push(CycleHandle { vertices: vec![a, b, nb[x], d] });
                            x += 1;
                            y += 1;
                        }
                    }
                }
            }
        }
    }
    out.sort();
    out
}

/// All 4-cycles through `v`, each once, normalized.
pub fn four_cycles_through(g: &SignedRotationSystem, v: VertexId) -> Vec<CycleHandle> {
    let rot = g.rotation(v);
    let mut out = BTreeSet::new();
    for (i, &a) in rot.iter().enumerate() {
        for &c in &rot[i + 1..] {
            for b in g.common_neighbors(a, c) {
                if b != v {
                    out.insert(CycleHandle { vertices: vec![v, a, b, c] }.normalized());
                }
            }
        }
    }
    out.into_iter().collect()
}

/// Every cycle of `g`, each reported once, normalized. Exponential; small graphs only.
pub fn all_cycles(g: &SignedRotationSystem) -> Vec<CycleHandle> {
    fn extend(
        g: &SignedRotationSystem,
        start: VertexId,
        path: &mut Vec<VertexId>,
        on_path: &mut HashSet<VertexId>,
        out: &mut Vec<CycleHandle>,
    ) {
        let last = *path.last().expect("non-empty path");
        for &w in g.rotation(last) {
            if w == start && path.len() >= 3 && path[1] < last {
                out.push(CycleHandle { vertices: path.clone() });
            } else if w > start && !on_path.contains(&w) {
                path.push(w);
                on_path.insert(w);
                extend(g, start, path, on_path, out);
                on_path.remove(&w);
                path.pop();
            }
        }
    }
    let mut out = Vec::new();
    for s in g.vertices() {
        let mut path = vec![s];
        let mut on_path = HashSet::from([s]);
        extend(g, s, &mut path, &mut on_path, &mut out);
    }
    out.sort();
    out
}
