//! Embedding-preserving rewrites: degree-2 deletion, t-contraction and
//! face-contraction, plus the expansion of the first two into
//! face-contractions.
//!
//! All three are implemented on a [`RotationTable`] by the same two
//! primitives: contracting an edge into its endpoint (splicing the far
//! rotation into the near one) and collapsing the parallel edges that bound
//! empty 2-gons afterwards. Every result is re-validated as a quadrangulation.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use crate::canonical::{canonical_hash, Digest};
use crate::embedding::{
    cycle_sign, four_cycles_through, trace_faces, validate_quadrangulation, CycleHandle,
    Dart, EmbeddingError, FaceList, RotationTable, Sign, SignedRotationSystem, Surface, VertexId,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SurgeryError {
    #[error("vertex {0} does not exist")]
    UnknownVertex(VertexId),
    #[error("vertex {vertex} has degree {degree}, expected {expected}")]
    WrongDegree { vertex: VertexId, degree: usize, expected: usize },
    #[error("deleting a vertex of the 4-cycle leaves no quadrangulation")]
    WouldDestroyC4,
    #[error("neighbourhood of {0} is not stable")]
    NeighborhoodNotStable(VertexId),
    #[error("vertex {vertex} lies on the contractible 4-cycle {cycle:?} with a non-empty interior")]
    UnsafeContraction { vertex: VertexId, cycle: Vec<VertexId> },
    #[error("{0:?} is not a face")]
    NotAFace(Vec<VertexId>),
    #[error("{0} and {1} are adjacent")]
    AdjacentPair(VertexId, VertexId),
    #[error("{0} and {1} have common neighbours {2:?} besides the face")]
    ExtraCommonNeighbor(VertexId, VertexId, Vec<VertexId>),
    #[error("vertices {0} and {1} are not opposite corners of the face")]
    NotOpposite(VertexId, VertexId),
    #[error("bad split: {0}")]
    BadSplitSpec(String),
    #[error("result is not a quadrangulation: {0}")]
    DegenerateResult(String),
    #[error("cannot expand into face-contractions: {0}")]
    NotExpandable(String),
    #[error(transparent)]
    Embedding(#[from] EmbeddingError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum StepKind {
    DeleteDegree2,
    TContract,
    FaceContract,
}

impl StepKind {
    pub fn name(self) -> &'static str {
        match self {
            StepKind::DeleteDegree2 => "delete_degree2",
            StepKind::TContract => "t_contract",
            StepKind::FaceContract => "face_contract",
        }
    }
}

impl fmt::Display for StepKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// One surgery, identified by the vertices it acts on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Operation {
    DeleteDegree2 { vertex: VertexId },
    TContract { vertex: VertexId },
    /// Identify `merge` into `keep` across their common 4-face.
    FaceContract { keep: VertexId, merge: VertexId },
}

impl Operation {
    pub fn kind(&self) -> StepKind {
        match self {
            Operation::DeleteDegree2 { .. } => StepKind::DeleteDegree2,
            Operation::TContract { .. } => StepKind::TContract,
            Operation::FaceContract { .. } => StepKind::FaceContract,
        }
    }

    /// `v` for a deletion or t-contraction, `keep+merge` for a face-contraction.
    pub fn pivot(&self) -> String {
        match *self {
            Operation::DeleteDegree2 { vertex } | Operation::TContract { vertex } => vertex.to_string(),
            Operation::FaceContract { keep, merge } => format!("{keep}+{merge}"),
        }
    }

    /// Applies the operation; t-contractions are checked against the
    /// contractible 4-cycle condition.
    pub fn apply(&self, g: &SignedRotationSystem) -> Result<SignedRotationSystem, SurgeryError> {
        match *self {
            Operation::DeleteDegree2 { vertex } => delete_degree2(g, vertex),
            Operation::TContract { vertex } => t_contract(g, vertex, true),
            Operation::FaceContract { keep, merge } => face_contract_pair(g, keep, merge),
        }
    }
}

/// Why a step was taken.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Justification {
    /// The pivot lies strictly inside this innermost contractible 4-cycle.
    InnermostCycle { cycle: Vec<VertexId>, interior: usize },
    /// The pivot has a stable neighbourhood in a nice quadrangulation.
    StableNeighborhood,
    /// Part of the face-contraction expansion of another step.
    Expansion { of: Operation },
    Unspecified,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReductionStep {
    pub op: Operation,
    pub before_hash: Digest,
    pub after_hash: Digest,
    pub justification: Justification,
}

impl ReductionStep {
    /// Applies `op` to `g` and records the step with both hashes.
    pub fn record(
        g: &SignedRotationSystem,
        op: Operation,
        justification: Justification,
    ) -> Result<(ReductionStep, SignedRotationSystem), SurgeryError> {
        Self::record_from(g, canonical_hash(g), op, justification)
    }

    /// [`ReductionStep::record`] with the hash of `g` already known.
    pub fn record_from(
        g: &SignedRotationSystem,
        before_hash: Digest,
        op: Operation,
        justification: Justification,
    ) -> Result<(ReductionStep, SignedRotationSystem), SurgeryError> {
        let after = op.apply(g)?;
        let step = ReductionStep { op, before_hash, after_hash: canonical_hash(&after), justification };
        Ok((step, after))
    }

    /// `step <n> <kind> pivot=<v> before=<hash> after=<hash>`
    pub fn trace_line(&self, n: usize) -> String {
        format!(
            "step {n} {} pivot={} before={} after={}",
            self.op.kind(),
            self.op.pivot(),
            self.before_hash,
            self.after_hash
        )
    }
}

/// A parsed trace line.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceLine {
    pub index: usize,
    pub op: Operation,
    pub before: Digest,
    pub after: Digest,
}

pub fn parse_trace_line(line: &str) -> Result<TraceLine, String> {
    let parts: Vec<&str> = line.split_whitespace().collect();
    let [tag, index, kind, pivot, before, after] = parts.as_slice() else {
        return Err(format!("expected 6 fields in `{line}`"));
    };
    if *tag != "step" {
        return Err(format!("expected `step`, found `{tag}`"));
    }
    let index = index.parse().map_err(|_| format!("bad step number `{index}`"))?;
    let field = |s: &'static str, text: &str| -> Result<String, String> {
        text.strip_prefix(s).map(str::to_string).ok_or_else(|| format!("expected `{s}...`, found `{text}`"))
    };
    let pivot = field("pivot=", pivot)?;
    let vertex = |s: &str| s.parse::<VertexId>().map_err(|_| format!("bad vertex `{s}`"));
    let op = match *kind {
        "delete_degree2" => Operation::DeleteDegree2 { vertex: vertex(&pivot)? },
        "t_contract" => Operation::TContract { vertex: vertex(&pivot)? },
        "face_contract" => {
            let (keep, merge) = pivot.split_once('+').ok_or_else(|| format!("bad pair `{pivot}`"))?;
            Operation::FaceContract { keep: vertex(keep)?, merge: vertex(merge)? }
        }
        other => return Err(format!("unknown step kind `{other}`")),
    };
    Ok(TraceLine {
        index,
        op,
        before: field("before=", before)?.parse()?,
        after: field("after=", after)?.parse()?,
    })
}

// ---------------------------------------------------------------------------
// Rotation-table primitives

fn position(rot: &[(VertexId, Sign)], w: VertexId) -> Option<usize> {
    rot.iter().position(|&(x, _)| x == w)
}

/// Inserts `entry` into the rotation of `at`, in the corner that follows
/// `after` when turning in direction `dir`.
pub(crate) fn insert_at_corner(
    table: &mut RotationTable,
    at: VertexId,
    after: VertexId,
    dir: Sign,
    entry: (VertexId, Sign),
) {
    let rot = table.get_mut(&at).expect("corner vertex present");
    let k = position(rot, after).expect("corner neighbour present");
    match dir {
        Sign::Plus => rot.insert(k + 1, entry),
        Sign::Minus => rot.insert(k, entry),
    }
}

/// Contracts the edge `center`-`leaf` into `center`. May create parallel edges.
fn contract_into(table: &mut RotationTable, center: VertexId, leaf: VertexId) {
    let s = {
        let rot = &table[&center];
        rot[position(rot, leaf).expect("edge to leaf")].1
    };
    let leaf_rot = table.remove(&leaf).expect("leaf present");
    let n = leaf_rot.len();
    let p = position(&leaf_rot, center).expect("edge to center");
    let spliced: Vec<(VertexId, Sign)> = (1..n)
        .map(|k| match s {
            Sign::Plus => leaf_rot[(p + k) % n],
            Sign::Minus => leaf_rot[(p + n - k) % n],
        })
        .map(|(y, sy)| (y, sy * s))
        .collect();
    let rot = table.get_mut(&center).expect("center present");
    let at = position(rot, leaf).expect("edge to leaf");
    rot.splice(at..=at, spliced);
    for &(y, sy) in &leaf_rot {
        if y == center {
            continue;
        }
        let yrot = table.get_mut(&y).expect("neighbour present");
        for entry in yrot.iter_mut().filter(|e| e.0 == leaf) {
            *entry = (center, sy * s);
        }
    }
}

/// Merges every cyclic run of equal neighbours in `rot` into one entry.
/// Fails when a neighbour occurs in more than one run or with mixed signs.
fn dedupe_runs(rot: &[(VertexId, Sign)], only: Option<VertexId>) -> Result<Vec<(VertexId, Sign)>, String> {
    let n = rot.len();
    if n == 0 {
        return Ok(Vec::new());
    }
    if rot.iter().all(|e| e.0 == rot[0].0) {
        if rot.iter().any(|e| e.1 != rot[0].1) {
            return Err(format!("parallel edges to {} bound a twisted 2-gon", rot[0].0));
        }
        return Ok(vec![rot[0]]);
    }
    let mut runs: BTreeMap<VertexId, usize> = BTreeMap::new();
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let prev = rot[(i + n - 1) % n];
        let cur = rot[i];
        let affected = only.is_none_or(|x| x == cur.0);
        if affected && prev.0 == cur.0 {
            if prev.1 != cur.1 {
                return Err(format!("parallel edges to {} bound a twisted 2-gon", cur.0));
            }
            continue;
        }
        if affected {
            *runs.entry(cur.0).or_default() += 1;
        }
        out.push(cur);
    }
    if let Some((&y, _)) = runs.iter().find(|&(_, &c)| c > 1) {
        return Err(format!("parallel edges to {y} do not bound an empty 2-gon"));
    }
    Ok(out)
}

/// Removes the parallel edges at `w` created by contractions.
fn collapse_parallel(table: &mut RotationTable, w: VertexId) -> Result<(), String> {
    let rot = table[&w].clone();
    if rot.iter().any(|e| e.0 == w) {
        return Err(format!("loop at {w}"));
    }
    let mut counts: BTreeMap<VertexId, usize> = BTreeMap::new();
    for e in &rot {
        *counts.entry(e.0).or_default() += 1;
    }
    let merged = dedupe_runs(&rot, None)?;
    table.insert(w, merged);
    for (&y, &c) in &counts {
        if c > 1 {
            let yrot = table[&y].clone();
            let merged = dedupe_runs(&yrot, Some(w))?;
            table.insert(y, merged);
        }
    }
    Ok(())
}

/// Moves the outer-face designation of `before` onto `after`.
fn carry_outer(before: &SignedRotationSystem, after: &mut SignedRotationSystem, remap: &dyn Fn(VertexId) -> VertexId) {
    if before.surface() != Surface::Sphere {
        return;
    }
    let Some(outer) = before.outer_dart() else {
        return;
    };
    let walk: Vec<Dart> = crate::embedding::face_through(before, outer, Sign::Plus).darts().collect();
    let untouched = walk
        .iter()
        .find(|d| remap(d.origin) == d.origin && remap(d.target) == d.target && after.has_edge(d.origin, d.target));
    let moved = || {
        walk.iter()
            .map(|d| Dart::new(remap(d.origin), remap(d.target)))
            .find(|d| d.origin != d.target && after.has_edge(d.origin, d.target))
    };
    after.set_outer_dart(untouched.copied().or_else(moved));
}

fn finish(
    before: &SignedRotationSystem,
    table: RotationTable,
    remap: &dyn Fn(VertexId) -> VertexId,
) -> Result<SignedRotationSystem, SurgeryError> {
    let mut after = SignedRotationSystem::new(before.surface(), table)
        .map_err(|e| SurgeryError::DegenerateResult(e.to_string()))?;
    let report = validate_quadrangulation(&after);
    if let Some(v) = report.violations.first() {
        return Err(SurgeryError::DegenerateResult(v.to_string()));
    }
    carry_outer(before, &mut after, remap);
    Ok(after)
}

// ---------------------------------------------------------------------------
// Operations

pub fn delete_degree2(g: &SignedRotationSystem, v: VertexId) -> Result<SignedRotationSystem, SurgeryError> {
    if !g.contains_vertex(v) {
        return Err(SurgeryError::UnknownVertex(v));
    }
    if g.degree(v) != 2 {
        return Err(SurgeryError::WrongDegree { vertex: v, degree: g.degree(v), expected: 2 });
    }
    if g.is_four_cycle() {
        return Err(SurgeryError::WouldDestroyC4);
    }
    let mut table = g.to_table();
    table.remove(&v);
    for &u in g.rotation(v) {
        table.get_mut(&u).expect("neighbour").retain(|e| e.0 != v);
    }
    finish(g, table, &|x| x)
}

/// Does `v` lie on a contractible 4-cycle with vertices inside it?
///
/// On the projective plane, and on the sphere with an outer face, the
/// interior is the disk side; on a sphere without one, both sides must be
/// non-empty.
pub fn unsafe_cycle_at(g: &SignedRotationSystem, faces: &FaceList, v: VertexId) -> Result<Option<CycleHandle>, SurgeryError> {
    let mut adjacency = None;
    for c in four_cycles_through(g, v) {
        if cycle_sign(g, &c)? == Sign::Minus {
            continue;
        }
        let bad = if g.surface() == Surface::Sphere && g.outer_dart().is_none() {
            crate::embedding::cycle_sides(faces, &c).is_some_and(|[a, b]| !a.is_empty() && !b.is_empty())
        } else {
            adjacency.get_or_insert_with(|| crate::embedding::FaceAdjacency::new(g, faces)).disk_side(g, faces, &c)?.interior_count(g.num_vertices(), 4) > 0
        };
        if bad {
            return Ok(Some(c));
        }
    }
    Ok(None)
}

/// Contracts every edge at `v` simultaneously and removes the resulting
/// parallel edges. The merged vertex keeps the identifier `v`.
pub fn t_contract(g: &SignedRotationSystem, v: VertexId, enforce_nice: bool) -> Result<SignedRotationSystem, SurgeryError> {
    if !g.contains_vertex(v) {
        return Err(SurgeryError::UnknownVertex(v));
    }
    if !g.has_stable_neighborhood(v) {
        return Err(SurgeryError::NeighborhoodNotStable(v));
    }
    if enforce_nice {
        let faces = trace_faces(g);
        if let Some(c) = unsafe_cycle_at(g, &faces, v)? {
            return Err(SurgeryError::UnsafeContraction { vertex: v, cycle: c.vertices().to_vec() });
        }
    }
    let neighbors: Vec<VertexId> = g.rotation(v).to_vec();
    let mut table = g.to_table();
    for &x in &neighbors {
        contract_into(&mut table, v, x);
    }
    collapse_parallel(&mut table, v).map_err(SurgeryError::DegenerateResult)?;
    let merged: BTreeSet<VertexId> = neighbors.into_iter().collect();
    finish(g, table, &|x| if merged.contains(&x) { v } else { x })
}

/// Identifies `merge` into `keep` across the face they share as opposite
/// corners. The face is determined by their two common neighbours.
pub fn face_contract_pair(
    g: &SignedRotationSystem,
    keep: VertexId,
    merge: VertexId,
) -> Result<SignedRotationSystem, SurgeryError> {
    for x in [keep, merge] {
        if !g.contains_vertex(x) {
            return Err(SurgeryError::UnknownVertex(x));
        }
    }
    if keep == merge || g.has_edge(keep, merge) {
        return Err(SurgeryError::AdjacentPair(keep, merge));
    }
    let common: Vec<VertexId> = g.common_neighbors(keep, merge).into_iter().collect();
    match common.len() {
        2 => face_contract(g, [keep, common[0], merge, common[1]], (keep, merge)),
        n if n > 2 => Err(SurgeryError::ExtraCommonNeighbor(keep, merge, common)),
        _ => Err(SurgeryError::NotAFace(vec![keep, merge])),
    }
}

/// Identifies the opposite corners `pair` of the 4-face `face`; the merged
/// vertex keeps `pair.0`.
pub fn face_contract(
    g: &SignedRotationSystem,
    face: [VertexId; 4],
    pair: (VertexId, VertexId),
) -> Result<SignedRotationSystem, SurgeryError> {
    let (v1, v3) = pair;
    let faces = trace_faces(g);
    let index = faces.find_cycle(&face).ok_or_else(|| SurgeryError::NotAFace(face.to_vec()))?;
    let walk = &faces.faces()[index];
    if !walk.is_cycle() {
        return Err(SurgeryError::NotAFace(face.to_vec()));
    }
    let vs = walk.vertices();
    let (Some(i), Some(j)) = (vs.iter().position(|&x| x == v1), vs.iter().position(|&x| x == v3)) else {
        return Err(SurgeryError::NotAFace(face.to_vec()));
    };
    if g.has_edge(v1, v3) {
        return Err(SurgeryError::AdjacentPair(v1, v3));
    }
    if (i + 4 - j) % 4 != 2 {
        return Err(SurgeryError::NotOpposite(v1, v3));
    }
    let others: BTreeSet<VertexId> = [vs[(i + 1) % 4], vs[(i + 3) % 4]].into_iter().collect();
    let common = g.common_neighbors(v1, v3);
    if common != others {
        let extra = common.difference(&others).copied().collect();
        return Err(SurgeryError::ExtraCommonNeighbor(v1, v3, extra));
    }
    let steps = walk.steps();
    let (o1, prev1) = (steps[i].1, steps[(i + 3) % 4].0.origin);
    let (o3, prev3) = (steps[j].1, steps[(j + 3) % 4].0.origin);
    let s = o1 * o3;
    let mut table = g.to_table();
    insert_at_corner(&mut table, v1, prev1, o1, (v3, s));
    insert_at_corner(&mut table, v3, prev3, o3, (v1, s));
    contract_into(&mut table, v1, v3);
    collapse_parallel(&mut table, v1).map_err(SurgeryError::DegenerateResult)?;
    finish(g, table, &|x| if x == v3 { v1 } else { x })
}

/// For each face at `v`, the corner neighbours `(prev, next)` and the
/// opposite vertex.
fn faces_at(faces: &FaceList, v: VertexId) -> Vec<(VertexId, VertexId, VertexId)> {
    let mut out = Vec::new();
    for f in faces.faces() {
        let vs = f.vertices();
        if vs.len() != 4 {
            continue;
        }
        for (i, &x) in vs.iter().enumerate() {
            if x == v {
                out.push((vs[(i + 3) % 4], vs[(i + 1) % 4], vs[(i + 2) % 4]));
            }
        }
    }
    out
}

/// Rewrites a degree-2 deletion or t-contraction as face-contractions whose
/// composition gives the same embedded graph up to isomorphism.
///
/// A deletion becomes one face-contraction of `v` into an opposite corner. A
/// t-contraction at a vertex of degree `d` becomes `d` face-contractions:
/// first `v` into the corner opposite it in one face, then the neighbours
/// merged one after another around the rotation.
pub fn expand_to_face_contractions(
    g: &SignedRotationSystem,
    op: &Operation,
) -> Result<Vec<ReductionStep>, SurgeryError> {
    let target = canonical_hash(&op.apply(g).map_err(|e| SurgeryError::NotExpandable(e.to_string()))?);
    let faces = trace_faces(g);
    let candidates: Vec<Vec<Operation>> = match *op {
        Operation::DeleteDegree2 { vertex } => {
            let mut opposite: Vec<VertexId> = faces_at(&faces, vertex).into_iter().map(|f| f.2).collect();
            opposite.sort_unstable();
            opposite.dedup();
            opposite.into_iter().map(|y| vec![Operation::FaceContract { keep: y, merge: vertex }]).collect()
        }
        Operation::TContract { vertex } => {
            let rot = g.rotation(vertex).to_vec();
            let d = rot.len();
            let corners = faces_at(&faces, vertex);
            let opposite = |a: VertexId, b: VertexId| {
                corners.iter().find(|c| (c.0 == a && c.1 == b) || (c.0 == b && c.1 == a)).map(|c| c.2)
            };
            (0..d)
                .filter_map(|start| {
                    let x = |k: usize| rot[(start + k) % d];
                    let y = opposite(x(0), x(1))?;
                    let mut seq = vec![Operation::FaceContract { keep: y, merge: vertex }];
                    for k in 2..=d {
                        seq.push(Operation::FaceContract { keep: x(1), merge: x(k) });
                    }
                    Some(seq)
                })
                .collect()
        }
        Operation::FaceContract { .. } => {
            return Err(SurgeryError::NotExpandable("already a face-contraction".into()));
        }
    };
    let mut last_error = String::from("no candidate sequence");
    'candidates: for seq in candidates {
        let mut cur = g.clone();
        let mut steps = Vec::with_capacity(seq.len());
        for sub in seq {
            match ReductionStep::record(&cur, sub, Justification::Expansion { of: *op }) {
                Ok((step, next)) => {
                    steps.push(step);
                    cur = next;
                }
                Err(e) => {
                    last_error = e.to_string();
                    continue 'candidates;
                }
            }
        }
        if steps.last().map(|s| &s.after_hash) == Some(&target) {
            return Ok(steps);
        }
        last_error = "composition differs from the direct result".into();
    }
    Err(SurgeryError::NotExpandable(last_error))
}
