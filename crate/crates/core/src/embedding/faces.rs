use super::{Dart, Sign, SignedRotationSystem, VertexId};

/// One facial walk. Each step is a dart together with the local orientation
/// in force at its origin when the walk leaves along it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Face {
    steps: Vec<(Dart, Sign)>,
}

impl Face {
    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn steps(&self) -> &[(Dart, Sign)] {
        &self.steps
    }

    pub fn darts(&self) -> impl Iterator<Item = Dart> + '_ {
        self.steps.iter().map(|&(d, _)| d)
    }

    /// Vertices in walk order (origins of the darts).
    pub fn vertices(&self) -> Vec<VertexId> {
        self.steps.iter().map(|&(d, _)| d.origin).collect()
    }

    /// True when the walk is a cycle through `len()` distinct vertices.
    pub fn is_cycle(&self) -> bool {
        let mut vs = self.vertices();
        vs.sort_unstable();
        vs.dedup();
        vs.len() == self.steps.len()
    }

    /// Does the boundary read `cycle` cyclically, in either direction?
    pub fn matches_cycle(&self, cycle: &[VertexId]) -> bool {
        let vs = self.vertices();
        if vs.len() != cycle.len() || vs.is_empty() {
            return false;
        }
        let n = vs.len();
        (0..n).any(|shift| {
            (0..n).all(|i| vs[(i + shift) % n] == cycle[i])
                || (0..n).all(|i| vs[(shift + n - i) % n] == cycle[i])
        })
    }
}

/// The faces of an embedding, with a lookup from walk states to faces.
#[derive(Clone, Debug)]
pub struct FaceList {
    faces: Vec<Face>,
    index: DartIndex,
    face_of: Vec<[usize; 2]>,
}

fn slot(o: Sign) -> usize {
    match o {
        Sign::Plus => 0,
        Sign::Minus => 1,
    }
}

impl FaceList {
    pub fn faces(&self) -> &[Face] {
        &self.faces
    }

    pub fn len(&self) -> usize {
        self.faces.len()
    }

    pub fn is_empty(&self) -> bool {
        self.faces.is_empty()
    }

    /// Face containing the walk state `(dart, orientation)`.
    pub fn face_of(&self, dart: Dart, orientation: Sign) -> Option<usize> {
        self.index.id(dart).map(|i| self.face_of[i][slot(orientation)])
    }

    /// The two faces on either side of edge `u`-`w` (equal when the edge
    /// borders one face twice).
    pub fn edge_faces(&self, u: VertexId, w: VertexId) -> Option<[usize; 2]> {
        self.index.id(Dart::new(u, w)).map(|i| self.face_of[i])
    }

    /// First face whose boundary reads `cycle` (either direction).
    pub fn find_cycle(&self, cycle: &[VertexId]) -> Option<usize> {
        self.faces.iter().position(|f| f.matches_cycle(cycle))
    }
}

/// Darts numbered consecutively by origin (ascending) and rotation position.
#[derive(Clone, Debug)]
struct DartIndex {
    vertices: Vec<VertexId>,
    offset: Vec<usize>,
    darts: Vec<Dart>,
    twin: Vec<usize>,
    target: Vec<usize>,
    sign: Vec<Sign>,
}

impl DartIndex {
    fn new(g: &SignedRotationSystem) -> Self {
        let vertices: Vec<VertexId> = g.vertices().collect();
        let mut offset = Vec::with_capacity(vertices.len() + 1);
        let mut darts = Vec::with_capacity(2 * g.num_edges());
        let mut target = Vec::with_capacity(2 * g.num_edges());
        for &v in &vertices {
            offset.push(darts.len());
            darts.extend(g.rotation(v).iter().map(|&w| Dart::new(v, w)));
        }
        offset.push(darts.len());
        for d in &darts {
            target.push(vertices.binary_search(&d.target).expect("vertex of the graph"));
        }
        let mut index = DartIndex { vertices, offset, darts, twin: Vec::new(), target, sign: Vec::new() };
        index.twin = (0..index.darts.len()).map(|i| index.id(index.darts[i].twin()).expect("twin dart")).collect();
        index.sign = vec![Sign::Plus; index.darts.len()];
        for (u, w, s) in g.edges() {
            let i = index.id(Dart::new(u, w)).expect("dart of the graph");
            index.sign[i] = s;
            index.sign[index.twin[i]] = s;
        }
        index
    }

    fn id(&self, d: Dart) -> Option<usize> {
        let v = self.vertices.binary_search(&d.origin).ok()?;
        let (lo, hi) = (self.offset[v], self.offset[v + 1]);
        self.darts[lo..hi].iter().position(|x| x.target == d.target).map(|k| lo + k)
    }

    /// Cross the dart, then turn at its target in the current sense of rotation.
    fn next(&self, (i, o): (usize, Sign)) -> (usize, Sign) {
        let o = o * self.sign[i];
        let t = self.target[i];
        let (lo, deg) = (self.offset[t], self.offset[t + 1] - self.offset[t]);
        let k = self.twin[i] - lo;
        let j = match o {
            Sign::Plus => (k + 1) % deg,
            Sign::Minus => (k + deg - 1) % deg,
        };
        (lo + j, o)
    }

    /// The state traversing the same edge side in the opposite direction.
    fn reverse(&self, (i, o): (usize, Sign)) -> (usize, Sign) {
        (self.twin[i], o.flip() * self.sign[i])
    }
}

/// The facial walk starting at the state `(dart, orientation)`, traced
/// without indexing the whole graph.
pub fn face_through(g: &SignedRotationSystem, dart: Dart, orientation: Sign) -> Face {
    let next = |(d, o): (Dart, Sign)| {
        let o = o * g.sign(d.origin, d.target).expect("dart of the graph");
        let rot = g.rotation(d.target);
        let k = rot.iter().position(|&x| x == d.origin).expect("twin dart");
        let j = match o {
            Sign::Plus => (k + 1) % rot.len(),
            Sign::Minus => (k + rot.len() - 1) % rot.len(),
        };
        (Dart::new(d.target, rot[j]), o)
    };
    let start = (dart, orientation);
    let mut steps = vec![start];
    let mut state = next(start);
    while state != start {
        steps.push(state);
        state = next(state);
    }
    Face { steps }
}

/// Traces the facial walks of `g`.
///
/// Faces are discovered in a fixed order (positive orientation first, then
/// vertices ascending, then rotation position ascending), so indices are
/// reproducible. On the sphere every face is found from a positive state.
pub fn trace_faces(g: &SignedRotationSystem) -> FaceList {
    const UNSEEN: usize = usize::MAX;
    let index = DartIndex::new(g);
    let mut faces = Vec::new();
    let mut face_of = vec![[UNSEEN; 2]; index.darts.len()];
    for o in [Sign::Plus, Sign::Minus] {
        for d in 0..index.darts.len() {
            if face_of[d][slot(o)] != UNSEEN {
                continue;
            }
            let start = (d, o);
            let f = faces.len();
            let mut steps = Vec::new();
            let mut state = start;
            loop {
                face_of[state.0][slot(state.1)] = f;
                let back = index.reverse(state);
                debug_assert!(face_of[back.0][slot(back.1)] == UNSEEN || face_of[back.0][slot(back.1)] == f);
                face_of[back.0][slot(back.1)] = f;
                steps.push((index.darts[state.0], state.1));
                state = index.next(state);
                if state == start {
                    break;
                }
            }
            faces.push(Face { steps });
        }
    }
    FaceList { faces, index, face_of }
}
