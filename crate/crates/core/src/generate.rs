//! Fixed embeddings and seeded random quadrangulations.
//!
//! Random instances grow from a small base by the inverses of the reduction
//! steps: inserting a degree-2 vertex into a face, or splitting a vertex
//! into two opposite corners of a new face.

use thiserror::Error;

use crate::embedding::{trace_faces, RotationTable, Sign, SignedRotationSystem, Surface, VertexId};
use crate::surgery::{insert_at_corner, SurgeryError};

/// 64-bit linear congruential generator. Each draw advances the state and
/// returns its upper 32 bits.
#[derive(Clone, Debug)]
pub struct Lcg {
    state: u64,
}

impl Lcg {
    pub const MULTIPLIER: u64 = 6364136223846793005;
    pub const INCREMENT: u64 = 1442695040888963407;

    pub fn new(seed: u64) -> Self {
        Lcg { state: seed }
    }

    pub fn next_u32(&mut self) -> u32 {
        self.state = self.state.wrapping_mul(Self::MULTIPLIER).wrapping_add(Self::INCREMENT);
        (self.state >> 32) as u32
    }

    /// Uniform in `0..n`, rejecting draws from the incomplete last block.
    pub fn below(&mut self, n: u32) -> u32 {
        assert!(n > 0, "empty range");
        let limit = (1u64 << 32) / u64::from(n) * u64::from(n);
        loop {
            let x = self.next_u32();
            if u64::from(x) < limit {
                return x % n;
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GenerateError {
    #[error("cannot reach {n} vertices from a base of {start}")]
    SizeUnreachable { n: usize, start: usize },
    #[error("bipartite projective quadrangulations are not generated from the odd wheel")]
    Unsupported,
    #[error(transparent)]
    Surgery(#[from] SurgeryError),
}

fn build(surface: Surface, rows: Vec<(VertexId, Vec<(VertexId, Sign)>)>) -> SignedRotationSystem {
    let table: RotationTable = rows.into_iter().collect();
    SignedRotationSystem::new(surface, table).expect("fixed embedding is well formed")
}

fn plain(surface: Surface, rows: &[(VertexId, &[VertexId])]) -> SignedRotationSystem {
    build(surface, rows.iter().map(|&(v, r)| (v, r.iter().map(|&w| (w, Sign::Plus)).collect())).collect())
}

/// The 4-cycle on the sphere, with face 0 as outer face.
pub fn c4() -> SignedRotationSystem {
    plain(Surface::Sphere, &[(0, &[1, 3]), (1, &[2, 0]), (2, &[3, 1]), (3, &[0, 2])])
        .with_outer_face(0)
        .expect("c4 has two faces")
}

/// The 3-cube.
pub fn cube() -> SignedRotationSystem {
    plain(
        Surface::Sphere,
        &[
            (0, &[1, 4, 3]),
            (1, &[2, 5, 0]),
            (2, &[3, 6, 1]),
            (3, &[2, 0, 7]),
            (4, &[5, 7, 0]),
            (5, &[6, 4, 1]),
            (6, &[2, 7, 5]),
            (7, &[6, 3, 4]),
        ],
    )
}

/// `C4 x P_m`: `m` concentric 4-cycles joined radially. Vertex `4r + i` is
/// position `i` on ring `r`.
pub fn tube(m: usize) -> SignedRotationSystem {
    assert!(m >= 1, "tube needs a ring");
    let id = |r: usize, i: usize| (4 * r + i % 4) as VertexId;
    let mut rows = Vec::new();
    for r in 0..m {
        for i in 0..4 {
            let mut rot = Vec::new();
            if r + 1 < m {
                rot.push(id(r + 1, i));
            }
            rot.push(id(r, i + 1));
            if r > 0 {
                rot.push(id(r - 1, i));
            }
            rot.push(id(r, i + 3));
            rows.push((id(r, i), rot.into_iter().map(|w| (w, Sign::Plus)).collect()));
        }
    }
    build(Surface::Sphere, rows)
}

/// The standard projective-plane quadrangulation of the odd wheel
/// `W_{2k+1}`. The hub is vertex 0 and rim vertex `j` is `j + 1`; every edge
/// is twisted.
pub fn odd_wheel_embedding(k: usize) -> SignedRotationSystem {
    assert!(k >= 1, "odd wheel needs k >= 1");
    let p = 2 * k + 1;
    let rim = |j: usize| (j % p + 1) as VertexId;
    let mut rows = vec![(0, (0..p).map(|j| (rim(2 * j), Sign::Minus)).collect())];
    for j in 0..p {
        rows.push((rim(j), vec![(0, Sign::Minus), (rim(j + 1), Sign::Minus), (rim(j + p - 1), Sign::Minus)]));
    }
    build(Surface::ProjectivePlane, rows)
}

/// A bipartite quadrangulation of the projective plane: `K_{3,4}` with
/// parts `{0, 1, 2}` and `{3, 4, 5, 6}`.
pub fn bipartite_projective_base() -> SignedRotationSystem {
    use Sign::{Minus as M, Plus as P};
    build(
        Surface::ProjectivePlane,
        vec![
            (0, vec![(3, P), (4, P), (5, P), (6, P)]),
            (1, vec![(3, P), (5, M), (6, M), (4, P)]),
            (2, vec![(3, P), (6, P), (4, M), (5, M)]),
            (3, vec![(0, P), (2, P), (1, P)]),
            (4, vec![(0, P), (1, P), (2, M)]),
            (5, vec![(0, P), (2, M), (1, M)]),
            (6, vec![(0, P), (1, M), (2, P)]),
        ],
    )
}

/// Inserts a new vertex adjacent to the opposite corners `pair` of the face
/// reading `face`, splitting it in two.
pub fn add_degree2(
    g: &SignedRotationSystem,
    face: [VertexId; 4],
    pair: (VertexId, VertexId),
) -> Result<SignedRotationSystem, SurgeryError> {
    let faces = trace_faces(g);
    // The 4-cycle bounds both of its faces; prefer the one that is not outer.
    let outer = g.outer_face_index(&faces);
    let index = (0..faces.len())
        .filter(|&i| faces.faces()[i].matches_cycle(&face))
        .min_by_key(|&i| Some(i) == outer)
        .ok_or_else(|| SurgeryError::NotAFace(face.to_vec()))?;
    let walk = &faces.faces()[index];
    let vs = walk.vertices();
    let (Some(i), Some(j)) = (vs.iter().position(|&x| x == pair.0), vs.iter().position(|&x| x == pair.1)) else {
        return Err(SurgeryError::NotOpposite(pair.0, pair.1));
    };
    if (i + 4 - j) % 4 != 2 {
        return Err(SurgeryError::NotOpposite(pair.0, pair.1));
    }
    let steps = walk.steps();
    let v = g.max_vertex() + 1;
    let mut table = g.to_table();
    let mut rot = Vec::new();
    for k in [i, j] {
        let (at, o, prev) = (vs[k], steps[k].1, steps[(k + 3) % 4].0.origin);
        insert_at_corner(&mut table, at, prev, o, (v, o));
        rot.push((at, o));
    }
    table.insert(v, rot);
    let mut out = SignedRotationSystem::new(g.surface(), table).map_err(|e| SurgeryError::DegenerateResult(e.to_string()))?;
    out.set_outer_dart(g.outer_dart());
    Ok(out)
}

/// How to split a vertex: its rotation is cut at the two neighbours in
/// `corners`. The arc from `corners.0` to `corners.1` (inclusive, in rotation
/// order) stays with the vertex; the arc from `corners.1` back to
/// `corners.0` goes to a new vertex. Both corners end up adjacent to both.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SplitSpec {
    pub corners: (VertexId, VertexId),
}

/// Splits `v` per `spec`. The new vertex gets the next free identifier, and
/// `face_contract_pair(result, v, new)` undoes the split.
pub fn vertex_split(g: &SignedRotationSystem, v: VertexId, spec: SplitSpec) -> Result<SignedRotationSystem, SurgeryError> {
    if !g.contains_vertex(v) {
        return Err(SurgeryError::UnknownVertex(v));
    }
    let (a, b) = spec.corners;
    if a == b {
        return Err(SurgeryError::BadSplitSpec(format!("corners coincide at {a}, leaving an empty arc")));
    }
    let table0 = g.to_table();
    let rot = &table0[&v];
    let d = rot.len();
    let (Some(i), Some(j)) = (rot.iter().position(|e| e.0 == a), rot.iter().position(|e| e.0 == b)) else {
        return Err(SurgeryError::BadSplitSpec(format!("{a} and {b} must both be neighbours of {v}")));
    };
    let arc = |from: usize, to: usize| -> Vec<(VertexId, Sign)> {
        let len = (to + d - from) % d + 1;
        (0..len).map(|k| rot[(from + k) % d]).collect()
    };
    let (first, second) = (arc(i, j), arc(j, i));
    let w = g.max_vertex() + 1;
    let mut table = table0.clone();
    for &(y, _) in &second[1..second.len() - 1] {
        for e in table.get_mut(&y).expect("neighbour").iter_mut().filter(|e| e.0 == v) {
            e.0 = w;
        }
    }
    // At each corner the old edge becomes two; the new vertex sits on the
    // side of the arc it received.
    for (corner, new_first) in [(a, true), (b, false)] {
        let crot = table.get_mut(&corner).expect("corner");
        let k = crot.iter().position(|e| e.0 == v).expect("edge to v");
        let s = crot[k].1;
        let pair = if (s == Sign::Plus) == new_first { [(v, s), (w, s)] } else { [(w, s), (v, s)] };
        crot.splice(k..=k, pair);
    }
    table.insert(v, first);
    table.insert(w, second);
    let mut out = SignedRotationSystem::new(g.surface(), table).map_err(|e| SurgeryError::DegenerateResult(e.to_string()))?;
    if let Some(d) = g.outer_dart() {
        let keep = if d.origin == v && out.has_edge(w, d.target) && !out.has_edge(v, d.target) { w } else { d.origin };
        let target = if d.target == v && !out.has_edge(d.origin, v) { w } else { d.target };
        out.set_outer_dart(Some(crate::embedding::Dart::new(keep, target)));
    }
    let report = crate::embedding::validate_quadrangulation(&out);
    if let Some(x) = report.violations.first() {
        return Err(SurgeryError::DegenerateResult(x.to_string()));
    }
    Ok(out)
}

/// One growth step, chosen uniformly among all applicable
/// (operation, location) pairs.
fn grow(g: &SignedRotationSystem, rng: &mut Lcg) -> Result<SignedRotationSystem, SurgeryError> {
    let faces = trace_faces(g);
    let face_choices = 2 * faces.len();
    let split_choices: usize = g.vertices().map(|v| g.degree(v) * (g.degree(v) - 1)).sum();
    let total = u32::try_from(face_choices + split_choices).expect("choice count fits in u32");
    let mut pick = rng.below(total) as usize;
    if pick < face_choices {
        let vs = faces.faces()[pick / 2].vertices();
        let k = pick % 2;
        return add_degree2(g, [vs[0], vs[1], vs[2], vs[3]], (vs[k], vs[k + 2]));
    }
    pick -= face_choices;
    for v in g.vertices() {
        let d = g.degree(v);
        let here = d * (d - 1);
        if pick < here {
            let rot = g.rotation(v);
            let a = rot[pick / (d - 1)];
            let rest: Vec<VertexId> = rot.iter().copied().filter(|&x| x != a).collect();
            let b = rest[pick % (d - 1)];
            return vertex_split(g, v, SplitSpec { corners: (a, b) });
        }
        pick -= here;
    }
    unreachable!("pick is below the choice count")
}

/// A seeded random quadrangulation with `n` vertices.
///
/// The base is the 4-cycle on the sphere, the odd wheel `W3` on the
/// projective plane with `nonbipartite`, and [`bipartite_projective_base`]
/// on the projective plane without it.
pub fn gen_quadrangulation(
    surface: Surface,
    n: usize,
    seed: u64,
    nonbipartite: bool,
) -> Result<SignedRotationSystem, GenerateError> {
    let mut g = match (surface, nonbipartite) {
        (Surface::Sphere, false) => c4(),
        (Surface::Sphere, true) => return Err(GenerateError::Unsupported),
        (Surface::ProjectivePlane, true) => odd_wheel_embedding(1),
        (Surface::ProjectivePlane, false) => bipartite_projective_base(),
    };
    if n < g.num_vertices() {
        return Err(GenerateError::SizeUnreachable { n, start: g.num_vertices() });
    }
    let mut rng = Lcg::new(seed);
    while g.num_vertices() < n {
        g = grow(&g, &mut rng)?;
    }
    Ok(g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::canonical::canonical_hash;
    use crate::embedding::{is_bipartite, validate_quadrangulation};
    use crate::surgery::{delete_degree2, face_contract_pair};

    fn valid(g: &SignedRotationSystem) {
        let r = validate_quadrangulation(g);
        assert!(r.is_valid(), "{:?}", r.violations);
    }

    #[test]
    fn lcg_reference_values() {
        // state_1 = seed * a + c (mod 2^64)
        let mut r = Lcg::new(0);
        assert_eq!(r.next_u32(), (Lcg::INCREMENT >> 32) as u32);
        let s1 = Lcg::INCREMENT;
        let s2 = s1.wrapping_mul(Lcg::MULTIPLIER).wrapping_add(Lcg::INCREMENT);
        assert_eq!(r.next_u32(), (s2 >> 32) as u32);
        let mut r = Lcg::new(42);
        for _ in 0..1000 {
            assert!(r.below(7) < 7);
        }
    }

    #[test]
    fn fixed_embeddings_are_quadrangulations() {
        for g in [c4(), cube(), tube(4), odd_wheel_embedding(1), odd_wheel_embedding(2), bipartite_projective_base()] {
            valid(&g);
        }
        assert_eq!(tube(4).num_edges(), 28);
        assert!(is_bipartite(&bipartite_projective_base()).is_bipartite());
        let w3 = odd_wheel_embedding(1);
        assert_eq!((w3.num_vertices(), w3.num_edges(), trace_faces(&w3).len()), (4, 6, 3));
        let w5 = odd_wheel_embedding(2);
        assert_eq!((w5.num_vertices(), w5.num_edges(), trace_faces(&w5).len()), (6, 10, 5));
        assert!(!is_bipartite(&w5).is_bipartite());
    }

    #[test]
    fn add_degree2_on_c4_and_w3() {
        let g = add_degree2(&c4(), [0, 1, 2, 3], (1, 3)).unwrap();
        valid(&g);
        assert_eq!(g.num_vertices(), 5);
        assert_eq!(canonical_hash(&delete_degree2(&g, 4).unwrap()), canonical_hash(&c4()));
        assert!(matches!(add_degree2(&c4(), [0, 1, 2, 3], (1, 2)), Err(SurgeryError::NotOpposite(1, 2))));

        let w3 = odd_wheel_embedding(1);
        let faces = trace_faces(&w3);
        for f in faces.faces() {
            let vs = f.vertices();
            let g = add_degree2(&w3, [vs[0], vs[1], vs[2], vs[3]], (vs[0], vs[2])).unwrap();
            valid(&g);
            assert!(!is_bipartite(&g).is_bipartite());
        }
    }

    #[test]
    fn split_round_trips_and_rejects_empty_arcs() {
        let g = vertex_split(&c4(), 0, SplitSpec { corners: (1, 3) }).unwrap();
        valid(&g);
        assert_eq!(g.num_vertices(), 5);
        assert_eq!(canonical_hash(&face_contract_pair(&g, 0, 4).unwrap()), canonical_hash(&c4()));
        assert!(matches!(
            vertex_split(&c4(), 0, SplitSpec { corners: (1, 1) }),
            Err(SurgeryError::BadSplitSpec(_))
        ));
        // The cube with one face contracted grows back into the cube.
        let q = face_contract_pair(&cube(), 0, 2).unwrap();
        assert_eq!((q.num_vertices(), q.num_edges()), (7, 10));
        let back = (0..8)
            .filter(|&v| q.contains_vertex(v))
            .flat_map(|v| {
                let rot = q.rotation(v).to_vec();
                let q = &q;
                rot.clone().into_iter().flat_map(move |a| {
                    rot.clone().into_iter().filter(move |&b| b != a).map(move |b| vertex_split(q, v, SplitSpec { corners: (a, b) }))
                })
            })
            .filter_map(Result::ok)
            .any(|g| canonical_hash(&g) == canonical_hash(&cube()));
        assert!(back);
    }

    #[test]
    fn generated_sizes() {
        assert_eq!(canonical_hash(&gen_quadrangulation(Surface::Sphere, 4, 3, false).unwrap()), canonical_hash(&c4()));
        let g = gen_quadrangulation(Surface::Sphere, 50, 7, false).unwrap();
        valid(&g);
        assert_eq!(g.num_edges(), 96);
        let h = gen_quadrangulation(Surface::ProjectivePlane, 50, 7, true).unwrap();
        valid(&h);
        assert_eq!(h.num_edges(), 98);
        assert!(!is_bipartite(&h).is_bipartite());
        let b = gen_quadrangulation(Surface::ProjectivePlane, 20, 7, false).unwrap();
        valid(&b);
        assert!(is_bipartite(&b).is_bipartite());
        assert!(matches!(
            gen_quadrangulation(Surface::ProjectivePlane, 5, 1, false),
            Err(GenerateError::SizeUnreachable { n: 5, start: 7 })
        ));
    }
}
