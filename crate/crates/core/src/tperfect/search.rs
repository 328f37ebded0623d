//! Exhaustive search for even embeddings of small graphs in the projective
//! plane.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use crate::embedding::{edge_key, trace_faces, RotationTable, Sign, SignedRotationSystem, Surface, VertexId};

/// Edges of the wheel `W_p`: hub 0 and rim `1..=p`.
pub fn wheel_edges(p: usize) -> Vec<(VertexId, VertexId)> {
    let rim = |j: usize| (j % p + 1) as VertexId;
    (0..p).flat_map(|j| [(0, rim(j)), (rim(j), rim(j + 1))]).collect()
}

/// Cyclic orders of `items` with the first element fixed.
fn cyclic_orders(items: &[VertexId]) -> Vec<Vec<VertexId>> {
    fn permute(prefix: &mut Vec<VertexId>, rest: &mut Vec<VertexId>, out: &mut Vec<Vec<VertexId>>) {
        if rest.is_empty() {
            out.push(prefix.clone());
            return;
        }
        for i in 0..rest.len() {
            let x = rest.remove(i);
            prefix.push(x);
            permute(prefix, rest, out);
            prefix.pop();
            rest.insert(i, x);
        }
    }
    let Some((&first, tail)) = items.split_first() else {
        return vec![Vec::new()];
    };
    let mut out = Vec::new();
    permute(&mut vec![first], &mut tail.to_vec(), &mut out);
    out
}

/// Every signed rotation system of the connected graph `edges` on the
/// projective plane whose faces all have even length, up to `limit` results.
///
/// Edges of a BFS spanning tree are fixed positive, which loses nothing
/// since any signature can be switched to that form. All cellular
/// embeddings are visited; the count is the product of `(deg - 1)!` over the
/// vertices times `2^(E - V + 1)`.
pub fn even_embeddings(edges: &[(VertexId, VertexId)], limit: usize) -> Vec<SignedRotationSystem> {
    let mut adj: BTreeMap<VertexId, BTreeSet<VertexId>> = BTreeMap::new();
    for &(u, w) in edges {
        adj.entry(u).or_default().insert(w);
        adj.entry(w).or_default().insert(u);
    }
    let Some(&root) = adj.keys().next() else {
        return Vec::new();
    };
    let mut tree = BTreeSet::new();
    let mut seen = BTreeSet::from([root]);
    let mut queue = VecDeque::from([root]);
    while let Some(v) = queue.pop_front() {
        for &w in &adj[&v] {
            if seen.insert(w) {
                tree.insert(edge_key(v, w));
                queue.push_back(w);
            }
        }
    }
    let free: Vec<(VertexId, VertexId)> =
        adj.iter().flat_map(|(&v, ws)| ws.iter().filter(move |&&w| v < w).map(move |&w| (v, w))).filter(|e| !tree.contains(e)).collect();
    let options: Vec<(VertexId, Vec<Vec<VertexId>>)> =
        adj.iter().map(|(&v, ws)| (v, cyclic_orders(&ws.iter().copied().collect::<Vec<_>>()))).collect();
    let faces_needed = edges.len() + 1 - adj.len();
    let mut found = Vec::new();
    let mut choice = vec![0usize; options.len()];
    'rotations: loop {
        for mask in 0u64..1 << free.len() {
            let negative: BTreeSet<(VertexId, VertexId)> =
                free.iter().enumerate().filter(|&(i, _)| mask >> i & 1 == 1).map(|(_, &e)| e).collect();
            let table: RotationTable = options
                .iter()
                .zip(&choice)
                .map(|((v, orders), &c)| {
                    let row = orders[c]
                        .iter()
                        .map(|&w| (w, if negative.contains(&edge_key(*v, w)) { Sign::Minus } else { Sign::Plus }))
                        .collect();
                    (*v, row)
                })
                .collect();
            let g = SignedRotationSystem::new(Surface::ProjectivePlane, table).expect("simple connected graph");
            let faces = trace_faces(&g);
            if faces.len() == faces_needed && faces.faces().iter().all(|f| f.len() % 2 == 0) {
                found.push(g);
                if found.len() >= limit {
                    return found;
                }
            }
        }
        for i in 0..choice.len() {
            choice[i] += 1;
            if choice[i] < options[i].1.len() {
                continue 'rotations;
            }
            choice[i] = 0;
        }
        return found;
    }
}
