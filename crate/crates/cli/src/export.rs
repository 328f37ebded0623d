//! DOT and SVG renderings.
//!
//! The SVG layout puts one facial cycle (the outer face when set, otherwise
//! face 0) on a circle and places every other vertex at the average of its
//! neighbours, repeated for a fixed number of rounds. On the projective plane
//! the drawing is a disk whose antipodal boundary points are identified: the
//! boundary is a dotted circle, a negative edge pulls towards the antipode of
//! its far end and is drawn as two segments meeting the boundary at
//! antipodal points.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use quadred::{trace_faces, Sign, SignedRotationSystem, Surface, VertexId};

const ROUNDS: usize = 50;
const SIZE: f64 = 400.0;
const DISK: f64 = 180.0;
const RING: f64 = 120.0;

pub fn dot(g: &SignedRotationSystem) -> String {
    let mut out = String::from("graph G {\n");
    writeln!(out, "  // surface {}", g.surface()).unwrap();
    for v in g.vertices() {
        writeln!(out, "  {v};").unwrap();
    }
    for (u, w, s) in g.edges() {
        let style = if s == Sign::Minus { " [style=dashed]" } else { "" };
        writeln!(out, "  {u} -- {w}{style};").unwrap();
    }
    out.push_str("}\n");
    out
}

type Point = (f64, f64);

fn layout(g: &SignedRotationSystem) -> BTreeMap<VertexId, Point> {
    let faces = trace_faces(g);
    let boundary = g.outer_face_index(&faces).unwrap_or(0);
    let mut ring: Vec<VertexId> = Vec::new();
    for v in faces.faces()[boundary].vertices() {
        if !ring.contains(&v) {
            ring.push(v);
        }
    }
    let mut pos: BTreeMap<VertexId, Point> = g.vertices().map(|v| (v, (0.0, 0.0))).collect();
    for (i, &v) in ring.iter().enumerate() {
        let a = std::f64::consts::TAU * i as f64 / ring.len() as f64;
        pos.insert(v, (RING * a.cos(), RING * a.sin()));
    }
    let free: Vec<VertexId> = g.vertices().filter(|v| !ring.contains(v)).collect();
    for _ in 0..ROUNDS {
        let prev = pos.clone();
        for &v in &free {
            let (mut x, mut y) = (0.0, 0.0);
            for &w in g.rotation(v) {
                let (px, py) = prev[&w];
                let flip = if g.sign(v, w) == Some(Sign::Minus) { -1.0 } else { 1.0 };
                x += flip * px;
                y += flip * py;
            }
            let d = g.degree(v) as f64;
            pos.insert(v, (x / d, y / d));
        }
    }
    pos
}

fn screen((x, y): Point) -> Point {
    (SIZE / 2.0 + x, SIZE / 2.0 - y)
}

fn line(out: &mut String, a: Point, b: Point, class: &str) {
    let (a, b) = (screen(a), screen(b));
    writeln!(out, r#"  <line class="{class}" x1="{:.3}" y1="{:.3}" x2="{:.3}" y2="{:.3}"/>"#, a.0, a.1, b.0, b.1).unwrap();
}

/// Where the segment from `p` towards `q` leaves the disk.
fn exit_point(p: Point, q: Point) -> Point {
    let (dx, dy) = (q.0 - p.0, q.1 - p.1);
    let a = dx * dx + dy * dy;
    if a == 0.0 {
        let r = (p.0 * p.0 + p.1 * p.1).sqrt().max(f64::EPSILON);
        return (DISK * p.0 / r, DISK * p.1 / r);
    }
    let b = 2.0 * (p.0 * dx + p.1 * dy);
    let c = p.0 * p.0 + p.1 * p.1 - DISK * DISK;
    let t = (-b + (b * b - 4.0 * a * c).max(0.0).sqrt()) / (2.0 * a);
    (p.0 + t * dx, p.1 + t * dy)
}

pub fn svg(g: &SignedRotationSystem) -> String {
    let pos = layout(g);
    let projective = g.surface() == Surface::ProjectivePlane;
    let mut out = String::new();
    writeln!(out, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">"#).unwrap();
    out.push_str("  <style>line { stroke: black; stroke-width: 1.5 } circle.vertex { fill: black } text { font: 10px sans-serif }</style>\n");
    if projective {
        writeln!(
            out,
            r#"  <circle class="boundary" cx="{c}" cy="{c}" r="{DISK}" fill="none" stroke="gray" stroke-dasharray="2 4"/>"#,
            c = SIZE / 2.0
        )
        .unwrap();
    }
    for (u, w, s) in g.edges() {
        let (p, q) = (pos[&u], pos[&w]);
        if projective && s == Sign::Minus {
            // Through the boundary: towards the antipode of the far end.
            let hit = exit_point(p, (-q.0, -q.1));
            line(&mut out, p, hit, "edge twisted");
            line(&mut out, (-hit.0, -hit.1), q, "edge twisted");
        } else {
            line(&mut out, p, q, "edge");
        }
    }
    for (v, &p) in &pos {
        let (x, y) = screen(p);
        writeln!(out, r#"  <circle class="vertex" cx="{x:.3}" cy="{y:.3}" r="4"/>"#).unwrap();
        writeln!(out, r#"  <text x="{:.3}" y="{:.3}">{v}</text>"#, x + 6.0, y - 6.0).unwrap();
    }
    out.push_str("</svg>\n");
    out
}
