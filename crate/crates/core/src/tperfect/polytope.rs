//! Exact vertex enumeration for bounded polyhedra `{x >= 0, Ax <= b}` by
//! successive constraint insertion.
//!
//! The start is the simplex `{x >= 0, sum x <= M}` with `M` large enough to
//! contain the polytope. Each new half-space cuts the current vertex set:
//! vertices on the violating side are dropped, and every adjacent
//! (kept, dropped) pair contributes the point where their edge crosses the
//! hyperplane. Adjacency is decided combinatorially from the sets of tight
//! constraints.

use num::{BigInt, BigRational, One, Signed, Zero};

#[derive(Clone, Debug, PartialEq, Eq)]
struct Bits(Vec<u64>);

impl Bits {
    fn new(n: usize) -> Self {
        Bits(vec![0; n.div_ceil(64)])
    }

    fn set(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }

    fn and(&self, other: &Bits) -> Bits {
        Bits(self.0.iter().zip(&other.0).map(|(a, b)| a & b).collect())
    }

    fn count(&self) -> usize {
        self.0.iter().map(|w| w.count_ones() as usize).sum()
    }

    fn contains(&self, other: &Bits) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a & b == *b)
    }
}

struct Point {
    x: Vec<BigRational>,
    tight: Bits,
}

/// Vertices of `{x >= 0, row . x <= rhs for each row}` in dimension `dim`.
/// Rows have integer coefficients. Returns vertices sorted lexicographically.
///
/// Panics if the polyhedron is unbounded in the direction of the simplex
/// bound, which cannot happen when every coordinate is capped by some row.
pub fn enumerate_vertices(dim: usize, rows: &[(Vec<i64>, i64)]) -> Vec<Vec<BigRational>> {
    if dim == 0 {
        return vec![Vec::new()];
    }
    // Constraint indices: 0..dim non-negativity, dim the simplex bound, then rows.
    let total = dim + 1 + rows.len();
    let bound = BigRational::from_integer(BigInt::from(dim as i64 + 1));
    let mut points: Vec<Point> = Vec::with_capacity(dim + 1);
    let mut origin = Point { x: vec![BigRational::zero(); dim], tight: Bits::new(total) };
    (0..dim).for_each(|i| origin.tight.set(i));
    points.push(origin);
    for i in 0..dim {
        let mut x = vec![BigRational::zero(); dim];
        x[i] = bound.clone();
        let mut tight = Bits::new(total);
        (0..dim).filter(|&j| j != i).for_each(|j| tight.set(j));
        tight.set(dim);
        points.push(Point { x, tight });
    }
    for (k, (a, b)) in rows.iter().enumerate() {
        let index = dim + 1 + k;
        let b = BigRational::from_integer(BigInt::from(*b));
        let slack: Vec<BigRational> = points
            .iter()
            .map(|p| {
                let ax = a.iter().zip(&p.x).filter(|(c, _)| **c != 0).fold(BigRational::zero(), |acc, (c, x)| {
                    acc + x * BigRational::from_integer(BigInt::from(*c))
                });
                &b - ax
            })
            .collect();
        if slack.iter().all(|s| !s.is_negative()) {
            for (p, s) in points.iter_mut().zip(&slack) {
                if s.is_zero() {
                    p.tight.set(index);
                }
            }
            continue;
        }
        let (mut keep, mut drop) = (Vec::new(), Vec::new());
        for (i, s) in slack.iter().enumerate() {
            if s.is_negative() {
                drop.push(i);
            } else {
                keep.push(i);
            }
        }
        let mut fresh = Vec::new();
        for &p in keep.iter().filter(|&&p| slack[p].is_positive()) {
            for &q in &drop {
                let common = points[p].tight.and(&points[q].tight);
                if common.count() + 1 < dim {
                    continue;
                }
                let adjacent = (0..points.len()).all(|r| r == p || r == q || !points[r].tight.contains(&common));
                if !adjacent {
                    continue;
                }
                // x = p + t (q - p) with a.x = b.
                let t = &slack[p] / (&slack[p] - &slack[q]);
                let x = points[p]
                    .x
                    .iter()
                    .zip(&points[q].x)
                    .map(|(xp, xq)| xp + &t * (xq - xp))
                    .collect();
                let mut tight = common;
                tight.set(index);
                fresh.push(Point { x, tight });
            }
        }
        let mut next: Vec<Point> = Vec::with_capacity(keep.len() + fresh.len());
        let mut old: Vec<Option<Point>> = points.into_iter().map(Some).collect();
        for &i in &keep {
            let mut p = old[i].take().expect("kept once");
            if slack[i].is_zero() {
                p.tight.set(index);
            }
            next.push(p);
        }
        next.extend(fresh);
        points = next;
    }
    assert!(
        points.iter().all(|p| p.x.iter().fold(BigRational::zero(), |acc, x| acc + x) < bound),
        "polyhedron is not bounded by its rows"
    );
    let mut out: Vec<Vec<BigRational>> = points.into_iter().map(|p| p.x).collect();
    out.sort();
    out.dedup();
    out
}

pub(crate) fn third() -> BigRational {
    BigRational::new(BigInt::one(), BigInt::from(3))
}
