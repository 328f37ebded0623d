use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use quadred::embedding::rsq;
use quadred::generate::{c4, odd_wheel_embedding};
use quadred::surgery::{parse_trace_line, Operation};
use quadred::{canonical_hash, gen_quadrangulation, SignedRotationSystem, Surface};
use tempfile::TempDir;

fn quadred(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_quadred")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn write(dir: &TempDir, name: &str, g: &SignedRotationSystem) -> PathBuf {
    let path = dir.path().join(name);
    fs::write(&path, rsq::write(g)).unwrap();
    path
}

fn arg(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn validate_reports_counts() {
    let dir = TempDir::new().unwrap();
    let c4 = write(&dir, "c4.rsq", &c4());
    let o = quadred(&["validate", arg(&c4)]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("faces=2 euler=2 bipartite=true"), "{}", stdout(&o));

    let w5 = write(&dir, "w5.rsq", &odd_wheel_embedding(2));
    let o = quadred(&["validate", arg(&w5)]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("faces=5 euler=1 bipartite=false"), "{}", stdout(&o));
}

#[test]
fn validate_rejects_non_quadrangulations() {
    let dir = TempDir::new().unwrap();
    let path = dir.path().join("triangle.rsq");
    fs::write(&path, "surface sphere\n0: 1/+ 2/+\n1: 2/+ 0/+\n2: 0/+ 1/+\n").unwrap();
    let o = quadred(&["validate", arg(&path)]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("valid=false"));
}

#[test]
fn sign_mismatch_is_a_parse_error_with_a_line_number() {
    let dir = TempDir::new().unwrap();
    let path = dir.path().join("bad.rsq");
    fs::write(&path, "surface projective_plane\n0: 1/+ 3/+\n1: 0/- 2/+\n2: 1/+ 3/+\n3: 0/+ 2/+\n").unwrap();
    let o = quadred(&["validate", arg(&path)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line "), "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn generate_is_deterministic_and_valid() {
    let dir = TempDir::new().unwrap();
    let a = dir.path().join("a.rsq");
    let b = dir.path().join("b.rsq");
    for p in [&a, &b] {
        let o = quadred(&["generate", "--surface", "projective-plane", "--n", "20", "--seed", "9", "--nonbipartite", "-o", arg(p)]);
        assert_eq!(o.status.code(), Some(0));
    }
    assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());
    let o = quadred(&["validate", arg(&a)]);
    assert!(stdout(&o).contains("vertices=20") && stdout(&o).contains("bipartite=false"), "{}", stdout(&o));
}

/// Replays the indented face-contraction lines from the initial graph and
/// checks that they end at the terminal.
fn replay_face_contractions(initial: &SignedRotationSystem, out: &str) {
    let mut g = initial.clone();
    let mut last_top = None;
    let mut face_steps = 0;
    for line in out.lines() {
        if line.starts_with("terminal") {
            break;
        }
        let parsed = parse_trace_line(line).unwrap();
        if line.starts_with("  ") {
            let Operation::FaceContract { .. } = parsed.op else { panic!("expected a face-contraction in `{line}`") };
            assert_eq!(canonical_hash(&g), parsed.before);
            g = parsed.op.apply(&g).unwrap();
            assert_eq!(canonical_hash(&g), parsed.after);
            face_steps += 1;
        } else {
            last_top = Some(parsed.after);
        }
    }
    assert!(face_steps > 0);
    assert_eq!(Some(canonical_hash(&g)), last_top);
}

#[test]
fn emitted_face_contractions_reproduce_the_terminal() {
    let dir = TempDir::new().unwrap();
    for (name, g, terminal) in [
        ("s.rsq", gen_quadrangulation(Surface::Sphere, 40, 3, false).unwrap(), "terminal four_cycle"),
        ("p.rsq", gen_quadrangulation(Surface::ProjectivePlane, 30, 4, true).unwrap(), "terminal odd_wheel k="),
    ] {
        let path = write(&dir, name, &g);
        let o = quadred(&["reduce", "--emit-face-contractions", arg(&path)]);
        assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
        let out = stdout(&o);
        assert!(out.lines().last().unwrap().starts_with(terminal), "{out}");
        replay_face_contractions(&g, &out);

        let plain = stdout(&quadred(&["reduce", arg(&path)]));
        let top: Vec<&str> = out.lines().filter(|l| !l.starts_with("  ")).collect();
        assert_eq!(plain.lines().collect::<Vec<_>>(), top);
    }
}

#[test]
fn expand_one_t_contraction() {
    let dir = TempDir::new().unwrap();
    let path = write(&dir, "cube.rsq", &quadred::generate::cube());
    let o = quadred(&["expand", arg(&path), "--vertex", "0"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let out = stdout(&o);
    assert!(out.starts_with("step 1 t_contract pivot=0"));
    assert_eq!(out.lines().filter(|l| l.starts_with("  step")).count(), 3);
}

#[test]
fn check_tperfect_prints_a_third_witness() {
    let dir = TempDir::new().unwrap();
    let w5 = write(&dir, "w5.rsq", &odd_wheel_embedding(2));
    let o = quadred(&["check-tperfect", "--cross-validate", arg(&w5)]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let out = stdout(&o);
    assert!(out.contains("verdict=not_t_perfect"), "{out}");
    assert!(out.contains("witness v0=1/3 v1=1/3"), "{out}");
    assert!(out.contains("agrees=true"), "{out}");

    let base = write(&dir, "k34.rsq", &quadred::generate::bipartite_projective_base());
    let out = stdout(&quadred(&["check-tperfect", "--cross-validate", arg(&base)]));
    assert!(out.contains("verdict=t_perfect") && out.contains("agrees=true"), "{out}");
}

#[test]
fn polytope_cap_exits_with_three() {
    let dir = TempDir::new().unwrap();
    let big = write(&dir, "big.rsq", &gen_quadrangulation(Surface::ProjectivePlane, 20, 1, true).unwrap());
    let o = quadred(&["check-tperfect", "--cross-validate", arg(&big)]);
    assert_eq!(o.status.code(), Some(3));
    let o = quadred(&["check-tperfect", arg(&big)]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn export_dot_and_svg() {
    let dir = TempDir::new().unwrap();
    let c4 = write(&dir, "c4.rsq", &c4());
    let dot = stdout(&quadred(&["export", "--format", "dot", arg(&c4)]));
    assert_eq!(dot.lines().filter(|l| l.trim_end().ends_with(';') && !l.contains("--")).count(), 4);
    assert_eq!(dot.lines().filter(|l| l.contains("--")).count(), 4);

    let w5 = write(&dir, "w5.rsq", &odd_wheel_embedding(2));
    let svg = stdout(&quadred(&["export", "--format", "svg", arg(&w5)]));
    assert!(svg.starts_with("<svg"));
    assert_eq!(svg.matches("<circle").count(), 7);
    assert_eq!(svg.lines().filter(|l| l.contains("<circle") && l.contains("stroke-dasharray")).count(), 1);
    let again = stdout(&quadred(&["export", "--format", "svg", arg(&w5)]));
    assert_eq!(svg, again);
}

#[test]
fn parallel_jobs_keep_input_order() {
    let dir = TempDir::new().unwrap();
    let files: Vec<PathBuf> = (0..4)
        .map(|i| write(&dir, &format!("g{i}.rsq"), &gen_quadrangulation(Surface::Sphere, 10 + 5 * i, i as u64, false).unwrap()))
        .collect();
    let mut args = vec!["reduce"];
    args.extend(files.iter().map(|p| arg(p)));
    let serial = stdout(&quadred(&args));
    args.extend(["--jobs", "3"]);
    let parallel = stdout(&quadred(&args));
    assert_eq!(serial, parallel);
    assert_eq!(serial.matches("terminal four_cycle").count(), 4);
}
