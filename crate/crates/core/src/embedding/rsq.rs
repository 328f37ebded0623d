//! The `.rsq` text format, one embedded graph per file.
//!
//! ```text
//! # the 4-cycle
//! surface sphere
//! outer 0
//! 0: 1/+ 3/+
//! 1: 0/+ 2/+
//! 2: 1/+ 3/+
//! 3: 0/+ 2/+
//! ```
//!
//! Each vertex line lists its neighbours in rotation order with the edge sign.
//! Signs appear at both ends and must agree. `outer` indexes the faces as
//! traced by [`trace_faces`](super::trace_faces). [`write`] emits the
//! canonical text: vertices ascending, each rotation starting at its smallest
//! neighbour.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use thiserror::Error;

use super::{trace_faces, EmbeddingError, RotationTable, Sign, SignedRotationSystem, Surface, VertexId};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {message}")]
pub struct RsqError {
    pub line: usize,
    pub message: String,
}

fn err(line: usize, message: impl Into<String>) -> RsqError {
    RsqError { line, message: message.into() }
}

pub fn parse(text: &str) -> Result<SignedRotationSystem, RsqError> {
    let mut surface = None;
    let mut outer = None;
    let mut table = RotationTable::new();
    let mut line_of: BTreeMap<VertexId, usize> = BTreeMap::new();
    let mut last_line = 0;
    for (i, raw) in text.lines().enumerate() {
        let n = i + 1;
        last_line = n;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix("surface") {
            if surface.is_some() {
                return Err(err(n, "duplicate surface line"));
            }
            surface = Some(match rest.trim() {
                "sphere" => Surface::Sphere,
                "projective_plane" => Surface::ProjectivePlane,
                other => return Err(err(n, format!("unknown surface `{other}`"))),
            });
            continue;
        }
        if surface.is_none() {
            return Err(err(n, "expected `surface sphere|projective_plane` first"));
        }
        if let Some(rest) = line.strip_prefix("outer") {
            let index: usize =
                rest.trim().parse().map_err(|_| err(n, format!("bad face index `{}`", rest.trim())))?;
            outer = Some((index, n));
            continue;
        }
        let (head, tail) = line.split_once(':').ok_or_else(|| err(n, "expected `<v>: <u>/<sign> ...`"))?;
        let v: VertexId = head.trim().parse().map_err(|_| err(n, format!("bad vertex `{}`", head.trim())))?;
        let mut rot = Vec::new();
        for token in tail.split_whitespace() {
            let (w, s) = token.split_once('/').ok_or_else(|| err(n, format!("bad neighbour `{token}`")))?;
            let w: VertexId = w.parse().map_err(|_| err(n, format!("bad neighbour `{token}`")))?;
            let s = match s {
                "+" => Sign::Plus,
                "-" => Sign::Minus,
                _ => return Err(err(n, format!("bad sign in `{token}`"))),
            };
            rot.push((w, s));
        }
        if table.insert(v, rot).is_some() {
            return Err(err(n, format!("vertex {v} listed twice")));
        }
        line_of.insert(v, n);
    }
    let surface = surface.ok_or_else(|| err(last_line.max(1), "missing surface line"))?;
    let mut g = SignedRotationSystem::new(surface, table).map_err(|e| {
        let line = match &e {
            EmbeddingError::Loop(v)
            | EmbeddingError::ParallelEdge(v, _)
            | EmbeddingError::MissingTwin(v, _)
            | EmbeddingError::SignMismatch(v, _)
            | EmbeddingError::SignedSphere(v, _) => line_of.get(v).copied().unwrap_or(0),
            _ => 0,
        };
        err(line, e.to_string())
    })?;
    if let Some((index, n)) = outer {
        g.set_outer_face(index).map_err(|e| err(n, e.to_string()))?;
    }
    Ok(g)
}

pub fn write(g: &SignedRotationSystem) -> String {
    let mut out = String::new();
    writeln!(out, "surface {}", g.surface()).unwrap();
    if let Some(index) = g.outer_face_index(&trace_faces(g)) {
        writeln!(out, "outer {index}").unwrap();
    }
    for v in g.vertices() {
        let rot = g.rotation(v);
        let start = (0..rot.len()).min_by_key(|&i| rot[i]).unwrap_or(0);
        write!(out, "{v}:").unwrap();
        for k in 0..rot.len() {
            let w = rot[(start + k) % rot.len()];
            let s = g.sign(v, w).expect("edge present");
            write!(out, " {w}/{}", s.symbol()).unwrap();
        }
        out.push('\n');
    }
    out
}
