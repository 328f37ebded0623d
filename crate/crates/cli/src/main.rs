mod export;

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context as _;
use clap::{Parser, Subcommand, ValueEnum};
use quadred::embedding::{is_bipartite, rsq};
use quadred::reduce::{reduce_projective, reduce_sphere, ReduceError};
use quadred::surgery::{expand_to_face_contractions, Operation};
use quadred::tperfect::{check_quadrangulation, is_t_perfect_with, Caps, TPerfectError, Verdict};
use quadred::{gen_quadrangulation, validate_quadrangulation, SignedRotationSystem, Surface, VertexId};

#[derive(Parser)]
#[command(name = "quadred", version, about = "Quadrangulation reductions and t-perfection checks on .rsq files")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check that each file is a quadrangulation of its surface.
    Validate {
        files: Vec<PathBuf>,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
    },
    /// Generate a random quadrangulation and write it as .rsq.
    Generate {
        #[arg(long, value_enum)]
        surface: SurfaceArg,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Projective plane only: grow from an odd wheel.
        #[arg(long)]
        nonbipartite: bool,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Reduce to the 4-cycle (sphere) or an odd wheel (projective plane).
    Reduce {
        files: Vec<PathBuf>,
        /// Follow every step with its face-contraction expansion.
        #[arg(long)]
        emit_face_contractions: bool,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
    },
    /// Expand one deletion or t-contraction into face-contractions.
    Expand {
        file: PathBuf,
        #[arg(long)]
        vertex: VertexId,
    },
    /// Decide t-perfection.
    CheckTperfect {
        files: Vec<PathBuf>,
        /// Also compute the verdict from the polytope's vertices.
        #[arg(long)]
        cross_validate: bool,
        /// Largest vertex count for exact polytope computations.
        #[arg(long, default_value_t = Caps::default().polytope)]
        cap: usize,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
    },
    /// Render a file as Graphviz DOT or SVG.
    Export {
        file: PathBuf,
        #[arg(long, value_enum)]
        format: Format,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum SurfaceArg {
    Sphere,
    #[value(alias = "projective_plane")]
    ProjectivePlane,
}

impl From<SurfaceArg> for Surface {
    fn from(s: SurfaceArg) -> Self {
        match s {
            SurfaceArg::Sphere => Surface::Sphere,
            SurfaceArg::ProjectivePlane => Surface::ProjectivePlane,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Dot,
    Svg,
}

/// Why a command failed, mapped to the exit status.
#[derive(Debug)]
enum Failure {
    Invalid(String),
    Parse(String),
    Cap(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Invalid(_) => 1,
            Failure::Parse(_) => 2,
            Failure::Cap(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Invalid(m) | Failure::Parse(m) | Failure::Cap(m) => m,
        }
    }
}

impl From<ReduceError> for Failure {
    fn from(e: ReduceError) -> Self {
        Failure::Invalid(e.to_string())
    }
}

impl From<TPerfectError> for Failure {
    fn from(e: TPerfectError) -> Self {
        match e {
            TPerfectError::TooLarge { .. } => Failure::Cap(e.to_string()),
            other => Failure::Invalid(other.to_string()),
        }
    }
}

/// Text for stdout and the exit status of one file.
struct Report {
    text: String,
    code: u8,
}

impl Report {
    fn ok(text: String) -> Self {
        Report { text, code: 0 }
    }
}

fn load(path: &Path) -> Result<SignedRotationSystem, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::Parse(format!("{}: {e}", path.display())))?;
    rsq::parse(&text).map_err(|e| Failure::Parse(format!("{}: {e}", path.display())))
}

fn validate(path: &Path) -> Result<Report, Failure> {
    let g = load(path)?;
    let r = validate_quadrangulation(&g);
    let mut text = format!(
        "surface={} vertices={} edges={} faces={} euler={} bipartite={} valid={}\n",
        r.surface,
        r.vertices,
        r.edges,
        r.faces,
        r.euler_characteristic,
        r.bipartite,
        r.is_valid()
    );
    for v in &r.violations {
        writeln!(text, "violation {v}").unwrap();
    }
    Ok(Report { text, code: if r.is_valid() { 0 } else { 1 } })
}

fn expansion_lines(g: &SignedRotationSystem, op: &Operation, out: &mut String) -> Result<(), Failure> {
    let steps = expand_to_face_contractions(g, op).map_err(|e| Failure::Invalid(e.to_string()))?;
    for (j, s) in steps.iter().enumerate() {
        writeln!(out, "  {}", s.trace_line(j + 1)).unwrap();
    }
    Ok(())
}

fn reduce(path: &Path, emit: bool) -> Result<Report, Failure> {
    let g = load(path)?;
    let trace = match g.surface() {
        Surface::Sphere => reduce_sphere(&g)?,
        Surface::ProjectivePlane => reduce_projective(&g)?,
    };
    if !emit {
        return Ok(Report::ok(trace.render()));
    }
    let mut text = String::new();
    for (i, (step, expansion)) in trace.steps.iter().zip(trace.expand_chained()?).enumerate() {
        writeln!(text, "{}", step.trace_line(i + 1)).unwrap();
        for (j, sub) in expansion.iter().enumerate() {
            writeln!(text, "  {}", sub.trace_line(j + 1)).unwrap();
        }
    }
    if let Some(t) = trace.terminal {
        writeln!(text, "terminal {t}").unwrap();
    }
    Ok(Report::ok(text))
}

fn expand(path: &Path, vertex: VertexId) -> Result<Report, Failure> {
    let g = load(path)?;
    if !g.contains_vertex(vertex) {
        return Err(Failure::Invalid(format!("no vertex {vertex}")));
    }
    let op = match g.degree(vertex) {
        2 => Operation::DeleteDegree2 { vertex },
        _ => Operation::TContract { vertex },
    };
    let (step, _) = quadred::ReductionStep::record(&g, op, quadred::surgery::Justification::Unspecified)
        .map_err(|e| Failure::Invalid(e.to_string()))?;
    let mut text = format!("{}\n", step.trace_line(1));
    expansion_lines(&g, &op, &mut text)?;
    Ok(Report::ok(text))
}

fn check_tperfect(path: &Path, cross_validate: bool, cap: usize) -> Result<Report, Failure> {
    let g = load(path)?;
    let caps = Caps { polytope: cap, enumeration: Caps::default().enumeration.max(cap) };
    let quadrangulation = g.surface() == Surface::ProjectivePlane && validate_quadrangulation(&g).is_valid();
    let mut text = String::new();
    if !quadrangulation {
        if !cross_validate && is_bipartite(&g).is_bipartite() {
            writeln!(text, "verdict={} method=bipartite bipartite=true", Verdict::TPerfect).unwrap();
            return Ok(Report::ok(text));
        }
        let cert = is_t_perfect_with(&g, caps)?;
        writeln!(text, "verdict={} method=polytope vertices={}", cert.verdict, cert.vertex_count).unwrap();
        if let Some(w) = cert.witness {
            writeln!(text, "witness {w}").unwrap();
        }
        return Ok(Report::ok(text));
    }
    if cross_validate && g.num_vertices() > cap {
        return Err(Failure::Cap(format!("{} vertices exceeds the polytope cap of {cap}", g.num_vertices())));
    }
    let check = check_quadrangulation(&g, cross_validate, caps)?;
    let method = if check.bipartite { "bipartite" } else { "reduction" };
    writeln!(text, "verdict={} method={method} bipartite={}", check.verdict, check.bipartite).unwrap();
    if let Some(trace) = &check.trace {
        if let Some(t) = trace.terminal {
            writeln!(text, "terminal {t} steps={}", trace.steps.len()).unwrap();
        }
    }
    if let Some(w) = &check.witness {
        writeln!(text, "witness {w}").unwrap();
    }
    if let Some(cert) = &check.polytope {
        writeln!(text, "polytope verdict={} vertices={} agrees={}", cert.verdict, cert.vertex_count, cert.verdict == check.verdict)
            .unwrap();
        if let Some(w) = &cert.witness {
            writeln!(text, "polytope_witness {w}").unwrap();
        }
    }
    let code = if check.agrees() == Some(false) { 1 } else { 0 };
    Ok(Report { text, code })
}

/// Runs `f` on every file, in parallel when `jobs > 1`, and prints the
/// reports in input order. The exit status is the largest one seen.
fn for_each_file(files: &[PathBuf], jobs: usize, f: impl Fn(&Path) -> Result<Report, Failure> + Sync) -> anyhow::Result<u8> {
    if files.is_empty() {
        anyhow::bail!("no input files");
    }
    let results: Vec<Result<Report, Failure>> = if jobs > 1 {
        use rayon::prelude::*;
        let pool = rayon::ThreadPoolBuilder::new().num_threads(jobs).build()?;
        pool.install(|| files.par_iter().map(|p| f(p)).collect())
    } else {
        files.iter().map(|p| f(p)).collect()
    };
    let mut code = 0;
    for (path, result) in files.iter().zip(results) {
        if files.len() > 1 {
            println!("# {}", path.display());
        }
        match result {
            Ok(r) => {
                print!("{}", r.text);
                code = code.max(r.code);
            }
            Err(e) => {
                eprintln!("error: {}", e.message());
                code = code.max(e.code());
            }
        }
    }
    Ok(code)
}

fn write_output(output: Option<&Path>, text: &str) -> anyhow::Result<()> {
    match output {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn single(result: Result<Report, Failure>) -> u8 {
    match result {
        Ok(r) => {
            print!("{}", r.text);
            r.code
        }
        Err(e) => {
            eprintln!("error: {}", e.message());
            e.code()
        }
    }
}

fn run(cli: Cli) -> anyhow::Result<u8> {
    match cli.command {
        Command::Validate { files, jobs } => for_each_file(&files, jobs, validate),
        Command::Generate { surface, n, seed, nonbipartite, output } => {
            let g = match gen_quadrangulation(surface.into(), n, seed, nonbipartite) {
                Ok(g) => g,
                Err(e) => {
                    eprintln!("error: {e}");
                    return Ok(1);
                }
            };
            write_output(output.as_deref(), &rsq::write(&g))?;
            Ok(0)
        }
        Command::Reduce { files, emit_face_contractions, jobs } => {
            for_each_file(&files, jobs, |p| reduce(p, emit_face_contractions))
        }
        Command::Expand { file, vertex } => Ok(single(expand(&file, vertex))),
        Command::CheckTperfect { files, cross_validate, cap, jobs } => {
            for_each_file(&files, jobs, |p| check_tperfect(p, cross_validate, cap))
        }
        Command::Export { file, format, output } => {
            let g = match load(&file) {
                Ok(g) => g,
                Err(e) => return Ok(single(Err(e))),
            };
            let text = match format {
                Format::Dot => export::dot(&g),
                Format::Svg => export::svg(&g),
            };
            write_output(output.as_deref(), &text)?;
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
