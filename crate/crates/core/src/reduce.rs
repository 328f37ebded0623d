//! Reduction of sphere quadrangulations to the 4-cycle and of non-bipartite
//! projective-plane quadrangulations to odd wheels.

use std::collections::{BTreeSet, HashMap};

use thiserror::Error;

pub use crate::canonical::canonical_hash;
use crate::embedding::{
    cycle_sign, four_cycles, is_bipartite, trace_faces, validate_quadrangulation, CycleHandle,
    DiskSide, FaceAdjacency, FaceList, Sign, SignedRotationSystem, Surface, VertexId,
};
use crate::generate::odd_wheel_embedding;
use crate::surgery::{expand_to_face_contractions, Justification, Operation, ReductionStep, SurgeryError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReduceError {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("input is bipartite")]
    BipartiteInput,
    #[error("no vertex of degree 2 or 3 inside {0:?}")]
    NoSuchVertex(Vec<VertexId>),
    #[error("terminal graph is not an odd wheel")]
    NotOddWheel,
    #[error("invariant violated: {0}")]
    InvariantViolated(String),
    #[error("replay diverged at step {0}")]
    ReplayMismatch(usize),
    #[error(transparent)]
    Surgery(#[from] SurgeryError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Terminal {
    FourCycle,
    /// The wheel `W_p`; `p` is the length of its rim cycle.
    OddWheel(usize),
}

impl std::fmt::Display for Terminal {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Terminal::FourCycle => f.write_str("four_cycle"),
            Terminal::OddWheel(p) => write!(f, "odd_wheel k={p}"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct ReductionTrace {
    pub initial: SignedRotationSystem,
    pub steps: Vec<ReductionStep>,
    pub final_graph: SignedRotationSystem,
    /// `None` for a partial trace such as the output of [`make_nice`].
    pub terminal: Option<Terminal>,
    /// For odd-wheel terminals: whether the final embedding equals
    /// [`odd_wheel_embedding`] up to isomorphism.
    pub matches_canonical_wheel: Option<bool>,
}

impl ReductionTrace {
    /// Re-applies every step from `initial`, checking both hashes of each,
    /// and returns the graphs after each step.
    pub fn replay(&self) -> Result<Vec<SignedRotationSystem>, ReduceError> {
        let mut cur = self.initial.clone();
        let mut out = Vec::with_capacity(self.steps.len());
        let mut hash = canonical_hash(&cur);
        for (i, step) in self.steps.iter().enumerate() {
            if hash != step.before_hash {
                return Err(ReduceError::ReplayMismatch(i + 1));
            }
            cur = step.op.apply(&cur)?;
            hash = canonical_hash(&cur);
            if hash != step.after_hash {
                return Err(ReduceError::ReplayMismatch(i + 1));
            }
            out.push(cur.clone());
        }
        if hash != canonical_hash(&self.final_graph) {
            return Err(ReduceError::ReplayMismatch(self.steps.len()));
        }
        Ok(out)
    }

    /// Face-contraction expansions of every step, chained: applying all of
    /// them in order to `initial` is a valid sequence whose end is isomorphic
    /// to `final_graph`.
    ///
    /// An expanded t-contraction leaves its merged vertex under a neighbour's
    /// label rather than the pivot's, so later pivots are translated through
    /// the accumulated renaming.
    pub fn expand_chained(&self) -> Result<Vec<Vec<ReductionStep>>, ReduceError> {
        let mut cur = self.initial.clone();
        let mut rename: HashMap<VertexId, VertexId> = HashMap::new();
        let mut out = Vec::with_capacity(self.steps.len());
        for step in &self.steps {
            let at = |v: VertexId| rename.get(&v).copied().unwrap_or(v);
            let op = match step.op {
                Operation::DeleteDegree2 { vertex } => Operation::DeleteDegree2 { vertex: at(vertex) },
                Operation::TContract { vertex } => Operation::TContract { vertex: at(vertex) },
                Operation::FaceContract { keep, merge } => Operation::FaceContract { keep: at(keep), merge: at(merge) },
            };
            let expansion = expand_to_face_contractions(&cur, &op)?;
            for sub in &expansion {
                cur = sub.op.apply(&cur)?;
            }
            if expansion.last().map(|s| &s.after_hash) != Some(&step.after_hash) {
                return Err(ReduceError::ReplayMismatch(out.len() + 1));
            }
            if let (Operation::TContract { vertex }, Some(second)) = (step.op, expansion.get(1)) {
                if let Operation::FaceContract { keep, .. } = second.op {
                    rename.insert(vertex, keep);
                }
            }
            out.push(expansion);
        }
        Ok(out)
    }

    /// The trace lines followed by the terminal line.
    pub fn render(&self) -> String {
        let mut out = String::new();
        for (i, step) in self.steps.iter().enumerate() {
            out.push_str(&step.trace_line(i + 1));
            out.push('\n');
        }
        if let Some(t) = self.terminal {
            out.push_str(&format!("terminal {t}\n"));
        }
        out
    }
}

/// Contractible 4-cycles with a vertex in their disk interior, each with its
/// interior vertex count and disk side.
///
/// A facial 4-cycle bounds a disk with nothing inside unless it is the outer
/// face on the sphere, so only non-facial cycles and the outer boundary are
/// examined.
pub fn nonempty_contractible_four_cycles(
    g: &SignedRotationSystem,
    faces: &FaceList,
) -> Result<Vec<(CycleHandle, usize, DiskSide)>, ReduceError> {
    let outer = g.outer_face_index(faces);
    let adjacency = FaceAdjacency::new(g, faces);
    let mut facial: HashMap<Vec<VertexId>, Vec<usize>> = HashMap::new();
    for (i, f) in faces.faces().iter().enumerate() {
        if Some(i) != outer {
            let mut key = f.vertices();
            key.sort_unstable();
            facial.entry(key).or_default().push(i);
        }
    }
    let mut out = Vec::new();
    for c in four_cycles(g) {
        let bounds_inner_face = facial
            .get(&c.sorted_vertices())
            .is_some_and(|fs| fs.iter().any(|&i| faces.faces()[i].matches_cycle(c.vertices())));
        if bounds_inner_face {
            continue;
        }
        if cycle_sign(g, &c).map_err(|e| ReduceError::InvariantViolated(e.to_string()))? == Sign::Minus {
            continue;
        }
        let side = adjacency.disk_side(g, faces, &c).map_err(|e| ReduceError::InvariantViolated(e.to_string()))?;
        let count = side.interior_count(g.num_vertices(), c.len());
        if count > 0 {
            out.push((c, count, side));
        }
    }
    Ok(out)
}

/// The member of `cycles` with fewest interior vertices, ties broken by the
/// sorted vertex tuple.
fn innermost(
    g: &SignedRotationSystem,
    cycles: Vec<(CycleHandle, usize, DiskSide)>,
) -> Option<(CycleHandle, BTreeSet<VertexId>)> {
    let (c, _, side) = cycles.into_iter().min_by(|a, b| (a.1, a.0.sorted_vertices()).cmp(&(b.1, b.0.sorted_vertices())))?;
    let interior = side.interior(g, &c).into_iter().collect();
    Some((c, interior))
}

/// A vertex of degree 2 or 3 among `interior`: the smallest of degree 2 if
/// any, otherwise the smallest of degree 3.
pub fn find_reducible_vertex(
    g: &SignedRotationSystem,
    cycle: &CycleHandle,
    interior: &BTreeSet<VertexId>,
) -> Result<VertexId, ReduceError> {
    [2, 3]
        .into_iter()
        .find_map(|d| interior.iter().copied().find(|&v| g.degree(v) == d))
        .ok_or_else(|| ReduceError::NoSuchVertex(cycle.vertices().to_vec()))
}

/// No contractible 4-cycle has a vertex in its interior.
pub fn is_nice(g: &SignedRotationSystem) -> bool {
    nonempty_contractible_four_cycles(g, &trace_faces(g)).is_ok_and(|c| c.is_empty())
}

fn check_valid(g: &SignedRotationSystem, surface: Surface) -> Result<(), ReduceError> {
    if g.surface() != surface {
        return Err(ReduceError::InvalidInput(format!("expected a {surface} embedding, found {}", g.surface())));
    }
    let report = validate_quadrangulation(g);
    match report.violations.first() {
        Some(v) => Err(ReduceError::InvalidInput(v.to_string())),
        None => Ok(()),
    }
}

/// Records `op` on `g`, which is the result of the last of `steps` if any.
fn record_next(
    g: &SignedRotationSystem,
    steps: &[ReductionStep],
    op: Operation,
    why: Justification,
) -> Result<(ReductionStep, SignedRotationSystem), ReduceError> {
    let before = steps.last().map_or_else(|| canonical_hash(g), |s| s.after_hash.clone());
    Ok(ReductionStep::record_from(g, before, op, why)?)
}

/// Removes the interior of the innermost contractible 4-cycle one vertex at
/// a time until none has an interior. Steps are pushed onto `steps`.
fn clear_interiors(
    mut g: SignedRotationSystem,
    steps: &mut Vec<ReductionStep>,
) -> Result<SignedRotationSystem, ReduceError> {
    let projective = g.surface() == Surface::ProjectivePlane;
    loop {
        let faces = trace_faces(&g);
        let Some((cycle, interior)) = innermost(&g, nonempty_contractible_four_cycles(&g, &faces)?) else {
            return Ok(g);
        };
        let v = find_reducible_vertex(&g, &cycle, &interior)?;
        let op = if g.degree(v) == 2 { Operation::DeleteDegree2 { vertex: v } } else { Operation::TContract { vertex: v } };
        let why = Justification::InnermostCycle { cycle: cycle.vertices().to_vec(), interior: interior.len() };
        let (step, next) = record_next(&g, steps, op, why)?;
        if projective && is_bipartite(&next).is_bipartite() {
            return Err(ReduceError::InvariantViolated(format!("step {} made the graph bipartite", step.trace_line(steps.len() + 1))));
        }
        steps.push(step);
        g = next;
    }
}

/// Reduces a quadrangulation of the sphere to the 4-cycle by deleting
/// degree-2 vertices and t-contracting degree-3 vertices inside innermost
/// separating 4-cycles.
///
/// Without an outer face, face 0 is used.
pub fn reduce_sphere(g: &SignedRotationSystem) -> Result<ReductionTrace, ReduceError> {
    check_valid(g, Surface::Sphere)?;
    let mut initial = g.clone();
    if initial.outer_dart().is_none() {
        initial.set_outer_face(0).map_err(|e| ReduceError::InvalidInput(e.to_string()))?;
    }
    let mut steps = Vec::new();
    let final_graph = clear_interiors(initial.clone(), &mut steps)?;
    if !final_graph.is_four_cycle() {
        return Err(ReduceError::InvariantViolated(format!("stopped at {} vertices", final_graph.num_vertices())));
    }
    Ok(ReductionTrace { initial, steps, final_graph, terminal: Some(Terminal::FourCycle), matches_canonical_wheel: None })
}

fn check_projective(g: &SignedRotationSystem) -> Result<(), ReduceError> {
    check_valid(g, Surface::ProjectivePlane)?;
    if is_bipartite(g).is_bipartite() {
        return Err(ReduceError::BipartiteInput);
    }
    Ok(())
}

/// Reduces a non-bipartite projective quadrangulation to a nice one.
pub fn make_nice(g: &SignedRotationSystem) -> Result<ReductionTrace, ReduceError> {
    check_projective(g)?;
    let mut steps = Vec::new();
    let final_graph = clear_interiors(g.clone(), &mut steps)?;
    Ok(ReductionTrace { initial: g.clone(), steps, final_graph, terminal: None, matches_canonical_wheel: None })
}

/// Some vertex whose neighbours are pairwise non-adjacent, smallest first.
fn stable_vertex(g: &SignedRotationSystem) -> Option<VertexId> {
    g.vertices().find(|&v| g.has_stable_neighborhood(v))
}

/// Reduces a non-bipartite projective quadrangulation to an odd wheel,
/// restoring niceness after every t-contraction.
pub fn reduce_projective(g: &SignedRotationSystem) -> Result<ReductionTrace, ReduceError> {
    check_projective(g)?;
    let mut steps = Vec::new();
    let mut cur = clear_interiors(g.clone(), &mut steps)?;
    while let Some(v) = stable_vertex(&cur) {
        let (step, next) = record_next(&cur, &steps, Operation::TContract { vertex: v }, Justification::StableNeighborhood)?;
        if is_bipartite(&next).is_bipartite() {
            return Err(ReduceError::InvariantViolated(format!("t-contraction at {v} made the graph bipartite")));
        }
        steps.push(step);
        cur = clear_interiors(next, &mut steps)?;
    }
    let p = recognize_odd_wheel(&cur).ok_or(ReduceError::NotOddWheel)?;
    let canonical = canonical_hash(&odd_wheel_embedding((p - 1) / 2)) == canonical_hash(&cur);
    Ok(ReductionTrace {
        initial: g.clone(),
        steps,
        final_graph: cur,
        terminal: Some(Terminal::OddWheel(p)),
        matches_canonical_wheel: Some(canonical),
    })
}

/// `Some(p)` when the underlying graph is the wheel `W_p` with `p` odd.
pub fn recognize_odd_wheel(g: &SignedRotationSystem) -> Option<usize> {
    let n = g.num_vertices();
    if n < 4 {
        return None;
    }
    let p = n - 1;
    if p.is_multiple_of(2) {
        return None;
    }
    let hub = g.vertices().find(|&v| g.degree(v) == p)?;
    let rim: Vec<VertexId> = g.vertices().filter(|&v| v != hub).collect();
    if rim.iter().any(|&v| g.degree(v) != 3 || !g.has_edge(v, hub)) {
        return None;
    }
    // The rim is 2-regular; it is one cycle when a walk visits all of it.
    let next = |prev: VertexId, cur: VertexId| g.rotation(cur).iter().copied().find(|&w| w != hub && w != prev);
    let start = rim[0];
    let mut prev = start;
    let mut cur = next(start, start)?;
    let mut seen = 1;
    while cur != start {
        let step = next(prev, cur)?;
        prev = cur;
        cur = step;
        seen += 1;
        if seen > p {
            return None;
        }
    }
    (seen == p).then_some(p)
}
