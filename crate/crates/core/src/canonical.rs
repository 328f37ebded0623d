//! Isomorphism-invariant encoding of embedded graphs.
//!
//! The code of an embedding is produced by a breadth-first walk started at a
//! dart with a chosen orientation: each vertex's rotation is read from the
//! edge it was discovered through, in its inherited orientation, recording
//! neighbour labels and effective signs. The canonical form is the
//! lexicographic minimum over an isomorphism-invariant set of starting darts
//! and both orientations, so it does not depend on labels, local switches or
//! a global reflection.

use std::fmt;

use sha2::{Digest as _, Sha256};

use crate::embedding::{SignedRotationSystem, Surface, VertexId};

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CanonicalForm {
    pub surface: Surface,
    pub code: Vec<u32>,
}

/// Short hex digest of a [`CanonicalForm`].
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Digest(String);

impl Digest {
    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Digest {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::str::FromStr for Digest {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s.len() == 16 && s.bytes().all(|b| b.is_ascii_hexdigit()) {
            Ok(Digest(s.to_ascii_lowercase()))
        } else {
            Err(format!("bad digest `{s}`"))
        }
    }
}

#[derive(Default)]
struct Scratch {
    label: Vec<u32>,
    flip: Vec<bool>,
    queue: Vec<(usize, usize)>,
    buf: Vec<u32>,
}

struct Dense {
    rot: Vec<Vec<usize>>,
    neg: Vec<Vec<bool>>,
    twin_pos: Vec<Vec<usize>>,
}

impl Dense {
    fn new(g: &SignedRotationSystem) -> Self {
        let ids: Vec<VertexId> = g.vertices().collect();
        let index = |w: &VertexId| ids.binary_search(w).expect("vertex of the graph");
        let rot: Vec<Vec<usize>> = ids.iter().map(|&v| g.rotation(v).iter().map(index).collect()).collect();
        let neg = ids
            .iter()
            .map(|&v| g.rotation(v).iter().map(|&w| g.sign(v, w) == Some(crate::embedding::Sign::Minus)).collect())
            .collect();
        let twin_pos = rot
            .iter()
            .enumerate()
            .map(|(v, r)| r.iter().map(|&w| rot[w].iter().position(|&x| x == v).expect("twin")).collect())
            .collect();
        Dense { rot, neg, twin_pos }
    }

    /// Encodes into `buf` starting from `(root, first, reversed)`. Returns
    /// `false` as soon as the code is known to exceed `best`.
    fn encode(&self, root: usize, first: usize, reversed: bool, best: Option<&[u32]>, scratch: &mut Scratch) -> bool {
        const UNSEEN: u32 = u32::MAX;
        let Scratch { label, flip, queue, buf } = scratch;
        label.clear();
        label.resize(self.rot.len(), UNSEEN);
        flip.clear();
        flip.resize(self.rot.len(), false);
        queue.clear();
        buf.clear();
        let mut tied = best.is_some();
        let push = |buf: &mut Vec<u32>, x: u32, tied: &mut bool| -> bool {
            if *tied {
                let b = best.expect("tied implies best")[buf.len()];
                if x > b {
                    return false;
                }
                if x < b {
                    *tied = false;
                }
            }
            buf.push(x);
            true
        };
        label[root] = 0;
        flip[root] = reversed;
        queue.push((root, first));
        let mut head = 0;
        let mut next_label = 1;
        while head < queue.len() {
            let (v, entry) = queue[head];
            head += 1;
            let deg = self.rot[v].len();
            if !push(&mut *buf, deg as u32, &mut tied) {
                return false;
            }
            for k in 0..deg {
                let i = if flip[v] { (entry + deg - k) % deg } else { (entry + k) % deg };
                let w = self.rot[v][i];
                let neg = self.neg[v][i];
                if label[w] == UNSEEN {
                    label[w] = next_label;
                    next_label += 1;
                    flip[w] = flip[v] ^ neg;
                    queue.push((w, self.twin_pos[v][i]));
                }
                let effective_neg = neg ^ flip[v] ^ flip[w];
                if !push(&mut *buf, label[w] * 2 + u32::from(effective_neg), &mut tied) {
                    return false;
                }
            }
        }
        true
    }
}

pub fn canonical_form(g: &SignedRotationSystem) -> CanonicalForm {
    let dense = Dense::new(g);
    let degree = |v: usize| dense.rot[v].len();
    // Starting states are restricted to a class that any isomorphism
    // preserves: roots of least (degree, sorted neighbour degrees), first
    // darts towards neighbours of least degree.
    let profile = |v: usize| {
        let mut p: Vec<usize> = dense.rot[v].iter().map(|&w| degree(w)).collect();
        p.sort_unstable();
        (degree(v), p)
    };
    let best_profile = (0..dense.rot.len()).map(profile).min();
    let mut best: Option<Vec<u32>> = None;
    let mut scratch = Scratch::default();
    for root in 0..dense.rot.len() {
        if Some(profile(root)) != best_profile {
            continue;
        }
        let least = dense.rot[root].iter().map(|&w| degree(w)).min();
        if least.is_none() {
            dense.encode(root, 0, false, None, &mut scratch);
            best = Some(std::mem::take(&mut scratch.buf));
            continue;
        }
        for first in 0..degree(root) {
            if Some(degree(dense.rot[root][first])) != least {
                continue;
            }
            for reversed in [false, true] {
                if dense.encode(root, first, reversed, best.as_deref(), &mut scratch) {
                    best = Some(std::mem::take(&mut scratch.buf));
                }
            }
        }
    }
    CanonicalForm { surface: g.surface(), code: best.unwrap_or_default() }
}

pub fn canonical_hash(g: &SignedRotationSystem) -> Digest {
    digest_of(&canonical_form(g))
}

pub fn digest_of(form: &CanonicalForm) -> Digest {
    let mut h = Sha256::new();
    h.update(form.surface.name().as_bytes());
    h.update([0u8]);
    for x in &form.code {
        h.update(x.to_le_bytes());
    }
    let bytes = h.finalize();
    Digest(bytes[..8].iter().map(|b| format!("{b:02x}")).collect())
}
