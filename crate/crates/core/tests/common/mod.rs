//! Independent oracles for the integration tests.

#![allow(dead_code)]

use std::collections::BTreeSet;
use std::io::Write;
use std::sync::{Mutex, MutexGuard};

use num::rational::Ratio;
use num::{BigInt, BigRational, Zero};
use quadred::tperfect::{InequalitySystem, RationalVector};

/// Writes one line straight to stdout, which the test harness does not capture.
pub fn report(line: &str) {
    let mut out = std::io::stdout().lock();
    writeln!(out, "{line}").unwrap();
    out.flush().unwrap();
}

/// Held for the duration of a timed test so that budgets are not shared
/// between tests running on other threads.
pub fn serial() -> MutexGuard<'static, ()> {
    static LOCK: Mutex<()> = Mutex::new(());
    LOCK.lock().unwrap_or_else(|e| e.into_inner())
}

type Q = Ratio<i64>;

/// Solves the square system `m x = rhs`; `None` when singular.
fn solve(mut m: Vec<Vec<Q>>, mut rhs: Vec<Q>) -> Option<Vec<Q>> {
    let n = rhs.len();
    for c in 0..n {
        let p = (c..n).find(|&i| !m[i][c].is_zero())?;
        m.swap(c, p);
        rhs.swap(c, p);
        let inv = Q::from_integer(1) / m[c][c];
        for x in &mut m[c][c..] {
            *x *= inv;
        }
        rhs[c] *= inv;
        for i in 0..n {
            if i != c && !m[i][c].is_zero() {
                let f = m[i][c];
                let pivot = m[c].clone();
                for (x, p) in m[i][c..].iter_mut().zip(&pivot[c..]) {
                    *x -= f * p;
                }
                let t = rhs[c];
                rhs[i] -= f * t;
            }
        }
    }
    Some(rhs)
}

fn combinations(n: usize, k: usize, f: &mut impl FnMut(&[usize])) {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, f: &mut impl FnMut(&[usize])) {
        if cur.len() == k {
            f(cur);
            return;
        }
        for i in start..=n - (k - cur.len()) {
            cur.push(i);
            go(i + 1, n, k, cur, f);
            cur.pop();
        }
    }
    go(0, n, k, &mut Vec::new(), f);
}

/// Vertices of the polytope by brute force: every choice of `dim` rows is
/// solved as equalities, and feasible unique solutions are kept.
pub fn basis_enumeration(system: &InequalitySystem) -> BTreeSet<RationalVector> {
    let dim = system.vertices.len();
    let to_q = |q: &BigRational| -> Q {
        let n: i64 = q.numer().try_into().unwrap();
        let d: i64 = q.denom().try_into().unwrap();
        Q::new(n, d)
    };
    let rows: Vec<(Vec<Q>, Q)> = system
        .rows
        .iter()
        .map(|r| (system.vertices.iter().map(|&v| to_q(&r.coefficients.get(v))).collect(), to_q(&r.rhs)))
        .collect();
    let mut out = BTreeSet::new();
    combinations(rows.len(), dim, &mut |pick| {
        let m = pick.iter().map(|&i| rows[i].0.clone()).collect();
        let rhs = pick.iter().map(|&i| rows[i].1).collect();
        let Some(x) = solve(m, rhs) else { return };
        let feasible = rows.iter().all(|(a, b)| a.iter().zip(&x).fold(Q::zero(), |acc, (c, y)| acc + c * y) <= *b);
        if feasible {
            let coords = system
                .vertices
                .iter()
                .zip(&x)
                .map(|(&v, q)| (v, BigRational::new(BigInt::from(*q.numer()), BigInt::from(*q.denom()))))
                .collect();
            out.insert(RationalVector { coords });
        }
    });
    out
}

/// Number of row subsets [`basis_enumeration`] visits.
pub fn basis_count(system: &InequalitySystem) -> u128 {
    let (n, k) = (system.rows.len() as u128, system.vertices.len() as u128);
    (0..k).fold(1u128, |acc, i| acc * (n - i) / (i + 1))
}
