//! Exact checks of t-perfection: the stable set polytope, the system of
//! non-negativity, edge and induced odd-cycle inequalities, and its vertices.
//!
//! All arithmetic is over exact rationals.

mod polytope;
mod search;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num::{BigInt, BigRational, Zero};
use thiserror::Error;

use crate::embedding::{is_bipartite, validate_quadrangulation, SignedRotationSystem, Surface, VertexId};
use crate::reduce::{reduce_projective, ReduceError, ReductionTrace};
use crate::surgery::{ReductionStep, SurgeryError};

pub use polytope::enumerate_vertices;
pub use search::{even_embeddings, wheel_edges};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TPerfectError {
    #[error("{vertices} vertices exceeds the cap of {cap}")]
    TooLarge { vertices: usize, cap: usize },
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error(transparent)]
    Reduce(#[from] ReduceError),
    #[error(transparent)]
    Surgery(#[from] SurgeryError),
}

/// Vertex-count limits for the exponential routines.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Caps {
    pub enumeration: usize,
    pub polytope: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Caps { enumeration: 16, polytope: 12 }
    }
}

fn check_cap(g: &SignedRotationSystem, cap: usize) -> Result<(), TPerfectError> {
    if g.num_vertices() > cap {
        return Err(TPerfectError::TooLarge { vertices: g.num_vertices(), cap });
    }
    Ok(())
}

/// A point with exact coordinates indexed by vertex.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RationalVector {
    pub coords: BTreeMap<VertexId, BigRational>,
}

impl RationalVector {
    pub fn constant(vertices: impl IntoIterator<Item = VertexId>, value: BigRational) -> Self {
        RationalVector { coords: vertices.into_iter().map(|v| (v, value.clone())).collect() }
    }

    pub fn get(&self, v: VertexId) -> BigRational {
        self.coords.get(&v).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn is_integral(&self) -> bool {
        self.coords.values().all(|c| c.is_integer())
    }

    /// The characteristic vector of `set` over `vertices`.
    pub fn characteristic(vertices: impl IntoIterator<Item = VertexId>, set: &BTreeSet<VertexId>) -> Self {
        let one = BigRational::from_integer(1.into());
        RationalVector {
            coords: vertices
                .into_iter()
                .map(|v| (v, if set.contains(&v) { one.clone() } else { BigRational::zero() }))
                .collect(),
        }
    }
}

impl fmt::Display for RationalVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (v, c) in &self.coords {
            if !first {
                f.write_str(" ")?;
            }
            first = false;
            write!(f, "v{v}={c}")?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum RowTag {
    NonNegativity(VertexId),
    Edge(VertexId, VertexId),
    OddCycle(Vec<VertexId>),
    /// `x_v <= 1` for an isolated vertex.
    UpperBound(VertexId),
}

/// `coefficients . x <= rhs`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Row {
    pub coefficients: RationalVector,
    pub rhs: BigRational,
    pub tag: RowTag,
}

impl Row {
    pub fn satisfied_by(&self, x: &RationalVector) -> bool {
        self.lhs(x) <= self.rhs
    }

    pub fn is_tight_at(&self, x: &RationalVector) -> bool {
        self.lhs(x) == self.rhs
    }

    fn lhs(&self, x: &RationalVector) -> BigRational {
        self.coefficients.coords.iter().fold(BigRational::zero(), |acc, (v, c)| acc + c * x.get(*v))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InequalitySystem {
    /// Coordinate order.
    pub vertices: Vec<VertexId>,
    pub rows: Vec<Row>,
}

impl InequalitySystem {
    pub fn count(&self, pred: impl Fn(&RowTag) -> bool) -> usize {
        self.rows.iter().filter(|r| pred(&r.tag)).count()
    }

    pub fn contains(&self, x: &RationalVector) -> bool {
        self.rows.iter().all(|r| r.satisfied_by(x))
    }

    /// Integer form of every row except non-negativity, over the coordinate order.
    fn integer_rows(&self) -> Vec<(Vec<i64>, i64)> {
        let to_i64 = |q: &BigRational| -> i64 {
            assert!(q.is_integer(), "integral system");
            i64::try_from(q.to_integer()).expect("small coefficient")
        };
        self.rows
            .iter()
            .filter(|r| !matches!(r.tag, RowTag::NonNegativity(_)))
            .map(|r| (self.vertices.iter().map(|&v| to_i64(&r.coefficients.get(v))).collect(), to_i64(&r.rhs)))
            .collect()
    }

    /// Rank of the rows tight at `x`, over the rationals.
    pub fn tight_rank(&self, x: &RationalVector) -> usize {
        let mut m: Vec<Vec<BigRational>> = self
            .rows
            .iter()
            .filter(|r| r.is_tight_at(x))
            .map(|r| self.vertices.iter().map(|&v| r.coefficients.get(v)).collect())
            .collect();
        rank(&mut m)
    }

    pub fn is_vertex(&self, x: &RationalVector) -> bool {
        self.contains(x) && self.tight_rank(x) == self.vertices.len()
    }
}

fn rank(m: &mut [Vec<BigRational>]) -> usize {
    let cols = m.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        for i in 0..m.len() {
            if i != r && !m[i][c].is_zero() {
                let f = &m[i][c] / &m[r][c];
                let pivot = m[r].clone();
                for (x, y) in m[i].iter_mut().zip(&pivot) {
                    *x -= &f * y;
                }
            }
        }
        r += 1;
    }
    r
}

fn adjacency_masks(g: &SignedRotationSystem) -> (Vec<VertexId>, Vec<u32>) {
    let ids: Vec<VertexId> = g.vertices().collect();
    let index: BTreeMap<VertexId, usize> = ids.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let masks = ids.iter().map(|&v| g.rotation(v).iter().fold(0u32, |m, w| m | 1 << index[w])).collect();
    (ids, masks)
}

fn members(ids: &[VertexId], mask: u32) -> Vec<VertexId> {
    (0..ids.len()).filter(|&i| mask >> i & 1 == 1).map(|i| ids[i]).collect()
}

/// Every stable set including the empty one, ordered by size and then by
/// sorted vertex list.
pub fn enumerate_stable_sets(g: &SignedRotationSystem) -> Result<Vec<BTreeSet<VertexId>>, TPerfectError> {
    enumerate_stable_sets_with(g, Caps::default())
}

pub fn enumerate_stable_sets_with(g: &SignedRotationSystem, caps: Caps) -> Result<Vec<BTreeSet<VertexId>>, TPerfectError> {
    check_cap(g, caps.enumeration)?;
    let (ids, adj) = adjacency_masks(g);
    let n = ids.len();
    let mut out: Vec<Vec<VertexId>> = (0u32..1 << n)
        .filter(|&s| (0..n).all(|i| s >> i & 1 == 0 || adj[i] & s == 0))
        .map(|s| members(&ids, s))
        .collect();
    out.sort_by(|a, b| (a.len(), a).cmp(&(b.len(), b)));
    Ok(out.into_iter().map(|s| s.into_iter().collect()).collect())
}

/// Every chordless odd cycle, as a vertex sequence starting at its smallest
/// vertex and continuing towards the smaller neighbour; ordered by length
/// and then by sequence.
pub fn enumerate_induced_odd_cycles(g: &SignedRotationSystem) -> Result<Vec<Vec<VertexId>>, TPerfectError> {
    enumerate_induced_odd_cycles_with(g, Caps::default())
}

pub fn enumerate_induced_odd_cycles_with(g: &SignedRotationSystem, caps: Caps) -> Result<Vec<Vec<VertexId>>, TPerfectError> {
    check_cap(g, caps.enumeration)?;
    let (ids, adj) = adjacency_masks(g);
    let n = ids.len();
    let mut out = Vec::new();
    for s in 0u32..1 << n {
        let size = s.count_ones() as usize;
        if size < 3 || size.is_multiple_of(2) {
            continue;
        }
        let inside: Vec<usize> = (0..n).filter(|&i| s >> i & 1 == 1).collect();
        if inside.iter().any(|&i| (adj[i] & s).count_ones() != 2) {
            continue;
        }
        // 2-regular; a single cycle when the walk from the first vertex covers it.
        let start = inside[0];
        let mut order = vec![start];
        let (mut prev, mut cur) = (start, (adj[start] & s).trailing_zeros() as usize);
        while cur != start {
            order.push(cur);
            let nbrs = adj[cur] & s & !(1 << prev);
            prev = cur;
            cur = nbrs.trailing_zeros() as usize;
        }
        if order.len() != size {
            continue;
        }
        let mut cycle: Vec<VertexId> = order.into_iter().map(|i| ids[i]).collect();
        if cycle[size - 1] < cycle[1] {
            cycle[1..].reverse();
        }
        out.push(cycle);
    }
    out.sort_by(|a, b| (a.len(), a).cmp(&(b.len(), b)));
    Ok(out)
}

/// Non-negativity rows, edge rows and one row per induced odd cycle, in that
/// order; isolated vertices also get `x_v <= 1`.
pub fn build_tstab(g: &SignedRotationSystem) -> Result<InequalitySystem, TPerfectError> {
    build_tstab_with(g, Caps::default())
}

pub fn build_tstab_with(g: &SignedRotationSystem, caps: Caps) -> Result<InequalitySystem, TPerfectError> {
    let cycles = enumerate_induced_odd_cycles_with(g, caps)?;
    let int = |n: i64| BigRational::from_integer(BigInt::from(n));
    let unit = |vs: &[VertexId], c: i64| RationalVector { coords: vs.iter().map(|&v| (v, int(c))).collect() };
    let vertices: Vec<VertexId> = g.vertices().collect();
    let mut rows = Vec::new();
    for &v in &vertices {
        rows.push(Row { coefficients: unit(&[v], -1), rhs: int(0), tag: RowTag::NonNegativity(v) });
    }
    for (u, w, _) in g.edges() {
        rows.push(Row { coefficients: unit(&[u, w], 1), rhs: int(1), tag: RowTag::Edge(u, w) });
    }
    for c in cycles {
        let rhs = int((c.len() / 2) as i64);
        rows.push(Row { coefficients: unit(&c, 1), rhs, tag: RowTag::OddCycle(c) });
    }
    for &v in vertices.iter().filter(|&&v| g.degree(v) == 0) {
        rows.push(Row { coefficients: unit(&[v], 1), rhs: int(1), tag: RowTag::UpperBound(v) });
    }
    Ok(InequalitySystem { vertices, rows })
}

/// All vertices of the polytope described by `system`, sorted.
pub fn polytope_vertices(system: &InequalitySystem) -> Result<Vec<RationalVector>, TPerfectError> {
    polytope_vertices_with(system, Caps::default())
}

pub fn polytope_vertices_with(system: &InequalitySystem, caps: Caps) -> Result<Vec<RationalVector>, TPerfectError> {
    if system.vertices.len() > caps.polytope {
        return Err(TPerfectError::TooLarge { vertices: system.vertices.len(), cap: caps.polytope });
    }
    let points = enumerate_vertices(system.vertices.len(), &system.integer_rows());
    Ok(points
        .into_iter()
        .map(|x| RationalVector { coords: system.vertices.iter().copied().zip(x).collect() })
        .collect())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    TPerfect,
    NotTPerfect,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::TPerfect => "t_perfect",
            Verdict::NotTPerfect => "not_t_perfect",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certificate {
    pub verdict: Verdict,
    /// The smallest fractional vertex of the polytope, when there is one.
    pub witness: Option<RationalVector>,
    pub vertex_count: usize,
}

/// Decides whether the odd-cycle polytope of `g` is integral.
pub fn is_t_perfect(g: &SignedRotationSystem) -> Result<Certificate, TPerfectError> {
    is_t_perfect_with(g, Caps::default())
}

pub fn is_t_perfect_with(g: &SignedRotationSystem, caps: Caps) -> Result<Certificate, TPerfectError> {
    check_cap(g, caps.polytope)?;
    let system = build_tstab_with(g, caps)?;
    let vertices = polytope_vertices_with(&system, caps)?;
    for x in vertices.iter().filter(|x| x.is_integral()) {
        let stable = x.coords.iter().filter(|(_, c)| !c.is_zero()).map(|(&v, _)| v).collect::<Vec<_>>();
        let independent = stable.iter().enumerate().all(|(i, &u)| stable[i + 1..].iter().all(|&w| !g.has_edge(u, w)));
        if !independent {
            return Err(TPerfectError::InvalidInput(format!("integral vertex {x} is not a stable set")));
        }
    }
    let witness = vertices.iter().find(|x| !x.is_integral()).cloned();
    Ok(Certificate {
        verdict: if witness.is_some() { Verdict::NotTPerfect } else { Verdict::TPerfect },
        witness,
        vertex_count: vertices.len(),
    })
}

/// The all-1/3 vector on `g`'s vertices.
pub fn one_third(g: &SignedRotationSystem) -> RationalVector {
    RationalVector::constant(g.vertices(), polytope::third())
}

/// Verdict for a projective-plane quadrangulation, with the evidence behind it.
#[derive(Clone, Debug)]
pub struct QuadrangulationCheck {
    pub verdict: Verdict,
    pub bipartite: bool,
    /// For non-bipartite input: the reduction to an odd wheel.
    pub trace: Option<ReductionTrace>,
    /// For non-bipartite input: the all-1/3 vector on the terminal wheel.
    pub witness: Option<RationalVector>,
    /// The polytope verdict, when requested and within the cap.
    pub polytope: Option<Certificate>,
}

impl QuadrangulationCheck {
    /// `None` when no polytope check ran.
    pub fn agrees(&self) -> Option<bool> {
        self.polytope.as_ref().map(|c| c.verdict == self.verdict)
    }
}

/// Bipartite projective quadrangulations are t-perfect and non-bipartite
/// ones reduce to an odd wheel, which is not. With `cross_validate`, the
/// verdict is recomputed from the polytope when the graph is within the cap.
pub fn check_quadrangulation(
    g: &SignedRotationSystem,
    cross_validate: bool,
    caps: Caps,
) -> Result<QuadrangulationCheck, TPerfectError> {
    if g.surface() != Surface::ProjectivePlane {
        return Err(TPerfectError::InvalidInput("expected a projective_plane embedding".into()));
    }
    if let Some(v) = validate_quadrangulation(g).violations.first() {
        return Err(TPerfectError::InvalidInput(v.to_string()));
    }
    let bipartite = is_bipartite(g).is_bipartite();
    let (verdict, trace, witness) = if bipartite {
        (Verdict::TPerfect, None, None)
    } else {
        let trace = reduce_projective(g)?;
        let witness = one_third(&trace.final_graph);
        (Verdict::NotTPerfect, Some(trace), Some(witness))
    };
    let polytope = if cross_validate && g.num_vertices() <= caps.polytope { Some(is_t_perfect_with(g, caps)?) } else { None };
    Ok(QuadrangulationCheck { verdict, bipartite, trace, witness, polytope })
}

/// Whether t-perfection of `g` carried over to the result of `step` on this
/// instance. A test oracle only.
pub fn spot_check_preservation(g: &SignedRotationSystem, step: &ReductionStep) -> Result<bool, TPerfectError> {
    let h = step.op.apply(g)?;
    let before = is_t_perfect(g)?.verdict;
    let after = is_t_perfect(&h)?.verdict;
    Ok(before == Verdict::NotTPerfect || after == Verdict::TPerfect)
}
