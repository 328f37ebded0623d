//! The ten acceptance criteria. Each test prints one `PASS`/`FAIL` line.

mod common;

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use common::{basis_count, basis_enumeration, report, serial};
use num::{BigInt, BigRational};
use quadred::embedding::{all_cycles, cycle_sign, is_bipartite};
use quadred::generate::{
    add_degree2, bipartite_projective_base, c4, cube, gen_quadrangulation, odd_wheel_embedding, vertex_split, Lcg,
    SplitSpec,
};
use quadred::reduce::{is_nice, recognize_odd_wheel, reduce_projective, reduce_sphere};
use quadred::surgery::{delete_degree2, expand_to_face_contractions, face_contract_pair, Operation};
use quadred::tperfect::{
    build_tstab, check_quadrangulation, enumerate_stable_sets, even_embeddings, is_t_perfect, one_third,
    polytope_vertices, wheel_edges, Caps, RationalVector, Verdict,
};
use quadred::{canonical_hash, trace_faces, validate_quadrangulation, SignedRotationSystem, Surface};

fn verdict(n: usize, name: &str, failures: &[String], elapsed: Duration, detail: &str) {
    let status = if failures.is_empty() { "PASS" } else { "FAIL" };
    report(&format!("criterion {n:>2} {status} {name}: {detail} ({:.2}s)", elapsed.as_secs_f64()));
    for f in failures.iter().take(5) {
        report(&format!("    {f}"));
    }
}

fn sphere_corpus(count: u64) -> impl Iterator<Item = (u64, SignedRotationSystem)> {
    (0..count).map(|seed| {
        let n = 4 + (seed as usize * 37) % 197;
        (seed, gen_quadrangulation(Surface::Sphere, n, seed, false).unwrap())
    })
}

fn projective_corpus(count: u64, max: usize) -> impl Iterator<Item = (u64, SignedRotationSystem)> {
    (0..count).map(move |seed| {
        let n = 4 + (seed as usize * 31) % (max - 3);
        (seed, gen_quadrangulation(Surface::ProjectivePlane, n, seed, true).unwrap())
    })
}

#[test]
fn criterion_01_sphere_reduction_at_scale() {
    let _serial = serial();
    let start = Instant::now();
    let mut failures = Vec::new();
    let mut steps = 0;
    for (seed, g) in sphere_corpus(500) {
        let trace = match reduce_sphere(&g) {
            Ok(t) => t,
            Err(e) => {
                failures.push(format!("seed {seed}: {e}"));
                continue;
            }
        };
        steps += trace.steps.len();
        if !trace.final_graph.is_four_cycle() {
            failures.push(format!("seed {seed}: final graph is not C4"));
        }
        let graphs = trace.replay().unwrap();
        let mut before = trace.initial.clone();
        for (step, after) in trace.steps.iter().zip(&graphs) {
            if !validate_quadrangulation(after).is_valid() {
                failures.push(format!("seed {seed}: invalid intermediate"));
            }
            if let Operation::TContract { vertex } = step.op {
                if before.degree(vertex) != 3 || !before.has_stable_neighborhood(vertex) {
                    failures.push(format!("seed {seed}: t-contraction pivot {vertex} of degree {}", before.degree(vertex)));
                }
            }
            before = after.clone();
        }
    }
    let elapsed = start.elapsed();
    if elapsed > Duration::from_secs(60) {
        failures.push(format!("took {elapsed:?}, budget 60s"));
    }
    verdict(1, "sphere quadrangulations reduce to C4", &failures, elapsed, &format!("500 instances, {steps} steps"));
    assert!(failures.is_empty(), "{failures:?}");
}

#[test]
fn criterion_02_projective_reduction_at_scale() {
    let _serial = serial();
    let start = Instant::now();
    let mut failures = Vec::new();
    let mut wheels = BTreeSet::new();
    let mut noncanonical = 0;
    for (seed, g) in projective_corpus(300, 150) {
        let trace = match reduce_projective(&g) {
            Ok(t) => t,
            Err(e) => {
                failures.push(format!("seed {seed}: {e}"));
                continue;
            }
        };
        // Flagged, not failed: the terminal embedding may differ from the construction.
        if trace.matches_canonical_wheel != Some(true) {
            noncanonical += 1;
        }
        match recognize_odd_wheel(&trace.final_graph) {
            Some(p) if p % 2 == 1 => {
                wheels.insert(p);
            }
            other => failures.push(format!("seed {seed}: terminal {other:?}")),
        }
        for h in std::iter::once(trace.initial.clone()).chain(trace.replay().unwrap()) {
            if !validate_quadrangulation(&h).is_valid() || is_bipartite(&h).is_bipartite() {
                failures.push(format!("seed {seed}: intermediate is not a non-bipartite quadrangulation"));
            }
            if is_nice(&h) && h.min_degree() < 3 {
                failures.push(format!("seed {seed}: nice intermediate with minimum degree {}", h.min_degree()));
            }
        }
    }
    let elapsed = start.elapsed();
    if elapsed > Duration::from_secs(120) {
        failures.push(format!("took {elapsed:?}, budget 120s"));
    }
    verdict(
        2,
        "projective quadrangulations reduce to odd wheels",
        &failures,
        elapsed,
        &format!("300 instances, terminal wheels {wheels:?}, {noncanonical} non-canonical terminal embeddings"),
    );
    assert!(failures.is_empty(), "{failures:?}");
}

#[test]
fn criterion_03_euler_identities() {
    let _serial = serial();
    let start = Instant::now();
    let mut failures = Vec::new();
    let mut graphs: Vec<SignedRotationSystem> = vec![c4(), cube(), odd_wheel_embedding(1), odd_wheel_embedding(2), bipartite_projective_base()];
    graphs.extend(sphere_corpus(100).map(|(_, g)| g));
    graphs.extend(projective_corpus(100, 150).map(|(_, g)| g));
    graphs.extend((0..50).map(|s| gen_quadrangulation(Surface::ProjectivePlane, 7 + s as usize, s, false).unwrap()));
    for g in &graphs {
        let r = validate_quadrangulation(g);
        let (v, e) = (g.num_vertices(), g.num_edges());
        let expected = match g.surface() {
            Surface::Sphere => 2 * v - 4,
            Surface::ProjectivePlane => 2 * v - 2,
        };
        let f = trace_faces(g).len() as i64;
        if !r.is_valid() || e != expected || v as i64 - e as i64 + f != g.surface().euler_characteristic() {
            failures.push(format!("{} V={v} E={e} F={f}", g.surface()));
        }
    }
    verdict(3, "E = 2V - 4 and E = 2V - 2", &failures, start.elapsed(), &format!("{} instances", graphs.len()));
    assert!(failures.is_empty(), "{failures:?}");
}

#[test]
fn criterion_04_contractible_iff_even() {
    let _serial = serial();
    let start = Instant::now();
    let mut failures = Vec::new();
    let mut cycles = 0;
    for seed in 0..100u64 {
        let n = 4 + (seed as usize) % 11;
        let g = gen_quadrangulation(Surface::ProjectivePlane, n, 1000 + seed, true).unwrap();
        for c in all_cycles(&g) {
            cycles += 1;
            let contractible = cycle_sign(&g, &c).unwrap() == quadred::Sign::Plus;
            if contractible != (c.len() % 2 == 0) {
                failures.push(format!("seed {seed}: cycle {:?}", c.vertices()));
            }
        }
    }
    verdict(4, "cycle sign +1 iff even length", &failures, start.elapsed(), &format!("100 instances, {cycles} cycles"));
    assert!(failures.is_empty(), "{failures:?}");
}

/// Expansions of every step of 50 sphere traces, with the t-contraction
/// degrees they came from.
fn expansions() -> (Vec<String>, Vec<(Operation, usize, usize)>) {
    let mut failures = Vec::new();
    let mut lengths = Vec::new();
    for (seed, g) in sphere_corpus(50) {
        let trace = reduce_sphere(&g).unwrap();
        let mut cur = trace.initial.clone();
        for step in &trace.steps {
            let degree = match step.op {
                Operation::DeleteDegree2 { vertex } | Operation::TContract { vertex } => cur.degree(vertex),
                Operation::FaceContract { .. } => 0,
            };
            match expand_to_face_contractions(&cur, &step.op) {
                Ok(seq) => {
                    if seq.last().map(|s| &s.after_hash) != Some(&step.after_hash) {
                        failures.push(format!("seed {seed}: {:?} composes to a different graph", step.op));
                    }
                    lengths.push((step.op, degree, seq.len()));
                }
                Err(e) => failures.push(format!("seed {seed}: {:?}: {e}", step.op)),
            }
            cur = step.op.apply(&cur).unwrap();
        }
    }
    (failures, lengths)
}

#[test]
fn criterion_05a_expansions_compose_to_the_step() {
    let _serial = serial();
    let start = Instant::now();
    let (failures, lengths) = expansions();
    verdict(5, "face-contraction expansions compose to each step", &failures, start.elapsed(), &format!("{} steps", lengths.len()));
    assert!(failures.is_empty(), "{failures:?}");
}

/// Expansion lengths of 1 for a deletion and `deg - 1` for a t-contraction.
///
/// This fails: a face-contraction removes exactly one vertex and a
/// t-contraction at `v` removes `deg(v)`, so no sequence of `deg(v) - 1`
/// face-contractions reaches the same graph. The observed length is `deg(v)`.
#[test]
fn criterion_05b_expansion_lengths() {
    let _serial = serial();
    let start = Instant::now();
    let (_, lengths) = expansions();
    let mut failures = Vec::new();
    for (op, degree, len) in &lengths {
        let expected = match op {
            Operation::DeleteDegree2 { .. } => 1,
            _ => degree - 1,
        };
        if *len != expected {
            failures.push(format!("{op:?} at degree {degree}: expansion of length {len}, expected {expected}"));
        }
    }
    let tcount = lengths.iter().filter(|l| matches!(l.0, Operation::TContract { .. })).count();
    verdict(
        5,
        "expansion lengths 1 and deg - 1",
        &failures,
        start.elapsed(),
        &format!("{} steps, {} t-contractions, {} length mismatches", lengths.len(), tcount, failures.len()),
    );
    assert!(failures.is_empty(), "{} mismatches, first: {:?}", failures.len(), failures.first());
}

#[test]
fn criterion_06_odd_wheel_witnesses() {
    let _serial = serial();
    let start = Instant::now();
    let mut failures = Vec::new();
    for k in 1..=3usize {
        let w = odd_wheel_embedding(k);
        let cert = is_t_perfect(&w).unwrap();
        if cert.verdict != Verdict::NotTPerfect {
            failures.push(format!("W{}: verdict {}", 2 * k + 1, cert.verdict));
        }
        let system = build_tstab(&w).unwrap();
        let third = one_third(&w);
        if !system.contains(&third) || third.is_integral() {
            failures.push(format!("W{}: 1/3 vector infeasible or integral", 2 * k + 1));
        }
        // Rim sum plus k times the hub is at most k on every stable set, and
        // exceeds k at the 1/3 vector, so that vector is outside the hull.
        let kq = BigRational::from_integer(BigInt::from(k as i64));
        let wheel = |x: &RationalVector| {
            w.vertices().filter(|&v| v != 0).map(|v| x.get(v)).fold(BigRational::from_integer(0.into()), |a, b| a + b)
                + &kq * x.get(0)
        };
        let valid = enumerate_stable_sets(&w).unwrap().iter().all(|s| wheel(&RationalVector::characteristic(w.vertices(), s)) <= kq);
        if !valid || wheel(&third) <= kq {
            failures.push(format!("W{}: wheel inequality does not separate the 1/3 vector", 2 * k + 1));
        }
        match &cert.witness {
            Some(x) if system.is_vertex(x) && !x.is_integral() => {}
            other => failures.push(format!("W{}: bad witness {other:?}", 2 * k + 1)),
        }
    }
    let elapsed = start.elapsed();
    if elapsed > Duration::from_secs(10) {
        failures.push(format!("took {elapsed:?}, budget 10s"));
    }
    verdict(6, "W3, W5, W7 not t-perfect; 1/3 vector in TSTAB, not in SSP", &failures, elapsed, "exact rationals");
    assert!(failures.is_empty(), "{failures:?}");
}

#[test]
fn criterion_07_t_perfect_iff_bipartite() {
    let _serial = serial();
    let start = Instant::now();
    let mut failures = Vec::new();
    let mut corpus = Vec::new();
    for seed in 0..24u64 {
        corpus.push(gen_quadrangulation(Surface::ProjectivePlane, 4 + (seed as usize) % 9, seed, true).unwrap());
    }
    for seed in 0..12u64 {
        corpus.push(gen_quadrangulation(Surface::ProjectivePlane, 7 + (seed as usize) % 6, seed, false).unwrap());
    }
    corpus.push(add_degree2(&bipartite_projective_base(), [0, 3, 1, 4], (0, 1)).unwrap());
    let bipartite_count = corpus.iter().filter(|g| is_bipartite(g).is_bipartite()).count();
    for (i, g) in corpus.iter().enumerate() {
        let bipartite = is_bipartite(g).is_bipartite();
        let cert = is_t_perfect(g).unwrap();
        if (cert.verdict == Verdict::TPerfect) != bipartite {
            failures.push(format!("instance {i}: verdict {} but bipartite={bipartite}", cert.verdict));
        }
        let fast = check_quadrangulation(g, true, Caps::default()).unwrap();
        if fast.agrees() != Some(true) {
            failures.push(format!("instance {i}: fast path {} disagrees with polytope", fast.verdict));
        }
    }
    if corpus.len() < 30 {
        failures.push(format!("only {} instances", corpus.len()));
    }
    verdict(
        7,
        "t-perfect iff bipartite",
        &failures,
        start.elapsed(),
        &format!("{} instances, {bipartite_count} bipartite", corpus.len()),
    );
    assert!(failures.is_empty(), "{failures:?}");
}

#[test]
fn criterion_08_polytope_oracle() {
    let _serial = serial();
    let start = Instant::now();
    let c5 = SignedRotationSystem::from_rotations(Surface::Sphere, (0..5).map(|i| (i, vec![(i + 1) % 5, (i + 4) % 5]))).unwrap();
    let mut graphs = vec![
        ("C4", c4()),
        ("C5", c5),
        ("K4", odd_wheel_embedding(1)),
        ("W5", odd_wheel_embedding(2)),
        ("cube", cube()),
        ("K3,4", bipartite_projective_base()),
    ];
    for seed in 0..6u64 {
        graphs.push(("projective", gen_quadrangulation(Surface::ProjectivePlane, 5 + (seed as usize) % 3, seed, true).unwrap()));
        graphs.push(("sphere", gen_quadrangulation(Surface::Sphere, 5 + (seed as usize) % 4, seed, false).unwrap()));
    }
    let mut failures = Vec::new();
    let mut checked = 0;
    for (name, g) in &graphs {
        let system = build_tstab(g).unwrap();
        assert!(basis_count(&system) < 5_000_000, "{name} too large for the oracle");
        let fast: BTreeSet<RationalVector> = polytope_vertices(&system).unwrap().into_iter().collect();
        let slow = basis_enumeration(&system);
        if fast != slow {
            failures.push(format!("{name}: {} vertices vs oracle {}", fast.len(), slow.len()));
        }
        checked += 1;
    }
    verdict(8, "vertex enumeration matches basis enumeration", &failures, start.elapsed(), &format!("{checked} graphs"));
    assert!(failures.is_empty(), "{failures:?}");
}

#[test]
fn criterion_09_no_even_embedding_of_w4() {
    let _serial = serial();
    let start = Instant::now();
    let mut failures = Vec::new();
    let found = even_embeddings(&wheel_edges(4), usize::MAX);
    if !found.is_empty() {
        failures.push(format!("{} even embeddings of W4", found.len()));
    }
    // The same search does find the odd wheels' embeddings.
    for p in [3, 5] {
        if even_embeddings(&wheel_edges(p), 1).is_empty() {
            failures.push(format!("search missed W{p}"));
        }
    }
    let elapsed = start.elapsed();
    if elapsed > Duration::from_secs(120) {
        failures.push(format!("took {elapsed:?}, budget 120s"));
    }
    verdict(9, "W4 has no even projective embedding", &failures, elapsed, "exhaustive over rotations and signatures");
    assert!(failures.is_empty(), "{failures:?}");
}

#[test]
fn criterion_10_inverse_round_trips() {
    let _serial = serial();
    let start = Instant::now();
    let mut failures = Vec::new();
    let mut rng = Lcg::new(2024);
    let mut pairs = 0;
    for i in 0..1000u64 {
        let surface = if i % 2 == 0 { Surface::Sphere } else { Surface::ProjectivePlane };
        let nonbipartite = surface == Surface::ProjectivePlane && i % 4 == 1;
        // The bipartite projective base already has 7 vertices.
        let smallest = if surface == Surface::ProjectivePlane && !nonbipartite { 7 } else { 5 };
        let n = smallest + rng.below(30) as usize;
        let g = gen_quadrangulation(surface, n, i, nonbipartite).unwrap();
        let h = canonical_hash(&g);
        let faces = trace_faces(&g);
        let f = faces.faces()[rng.below(faces.len() as u32) as usize].vertices();
        let k = rng.below(2) as usize;
        let added = add_degree2(&g, [f[0], f[1], f[2], f[3]], (f[k], f[k + 2])).unwrap();
        let new = added.max_vertex();
        if canonical_hash(&delete_degree2(&added, new).unwrap()) != h {
            failures.push(format!("instance {i}: add/delete"));
        }
        let vs: Vec<_> = g.vertices().collect();
        let v = vs[rng.below(vs.len() as u32) as usize];
        let rot = g.rotation(v);
        let a = rng.below(rot.len() as u32) as usize;
        let b = (a + 1 + rng.below(rot.len() as u32 - 1) as usize) % rot.len();
        let split = vertex_split(&g, v, SplitSpec { corners: (rot[a], rot[b]) }).unwrap();
        if canonical_hash(&face_contract_pair(&split, v, split.max_vertex()).unwrap()) != h {
            failures.push(format!("instance {i}: split/contract"));
        }
        pairs += 2;
    }
    verdict(10, "inverse round-trips restore the hash", &failures, start.elapsed(), &format!("{pairs} pairs"));
    assert!(failures.is_empty(), "{failures:?}");
}
