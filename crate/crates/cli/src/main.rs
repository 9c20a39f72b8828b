mod exit;
mod report;

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use seifert_core::dual::{maximal_plug_set, smallest_face};
use seifert_core::format::{CycleFile, MeshFile, SurfaceFile};
use seifert_core::generate::{self, barycentric_subdivision, MeshData};
use seifert_core::seifert::{Provenance, SeifertResult};
use seifert_core::suite::{instances, Suite};
use seifert_core::trees::{bfs1_tree, bfs2_tree, classify_tree};
use seifert_core::{build_dual, solve, solve_internal, Chain1, Point3, SeifertError, TreeStrategy, Triangulation};

use exit::{Failure, Status};
use report::Report;

#[derive(Parser)]
#[command(name = "seifert", version, about = "Integer Seifert surfaces for edge cycles in tetrahedral meshes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a structured tetrahedral mesh.
    Gen {
        kind: MeshKind,
        /// Cubes per side (ignored for `tet`).
        #[arg(short, default_value_t = 2)]
        n: usize,
        /// Apply one barycentric subdivision.
        #[arg(long)]
        subdivide: bool,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Write a named cycle on a generated grid mesh.
    GenCycle {
        name: CycleKind,
        #[arg(long)]
        mesh: PathBuf,
        /// Patch size for the random cycles.
        #[arg(long, default_value_t = 8)]
        faces: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Compute a surface bounded by a cycle.
    Solve {
        #[arg(long)]
        mesh: PathBuf,
        #[arg(long)]
        cycle: PathBuf,
        #[arg(long, value_enum, default_value_t = StrategyArg::Bfs2)]
        strategy: StrategyArg,
        /// Require a surface that avoids the mesh boundary.
        #[arg(long, conflicts_with = "strategy")]
        internal: bool,
        /// Number of tunnels of the domain; checked against the Euler characteristic.
        #[arg(long, value_name = "G")]
        betti: Option<usize>,
        /// Surface file; without it the surface goes to standard output.
        #[arg(short, long)]
        out: Option<PathBuf>,
        /// Print coefficient histogram and provenance counts.
        #[arg(long)]
        stats: bool,
    },
    /// Run a benchmark suite: toy, scaling, hollow, tunnel or linked.
    Bench {
        suite: Suite,
        /// Runs per case; the median time is reported.
        #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u32).range(1..))]
        repeat: u32,
        /// Also write the rows as CSV to this file (`-` for standard output).
        #[arg(long)]
        csv: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum MeshKind {
    Kuhn,
    Hollow,
    Tunnel,
    Tet,
}

#[derive(Clone, Copy, ValueEnum)]
enum CycleKind {
    FacePerimeter,
    Belt,
    LinkedRectA,
    LinkedRectB,
    InteriorLoop,
    TunnelLoop,
    RandomPatch,
    RandomBoundary,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum StrategyArg {
    Bfs1,
    Bfs2,
}

impl From<StrategyArg> for TreeStrategy {
    fn from(s: StrategyArg) -> Self {
        match s {
            StrategyArg::Bfs1 => TreeStrategy::Bfs1,
            StrategyArg::Bfs2 => TreeStrategy::Bfs2,
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(Status::Parse as u8) } else { ExitCode::SUCCESS };
        }
    };
    let result = match cli.command {
        Command::Gen { kind, n, subdivide, out } => cmd_gen(kind, n, subdivide, out.as_deref()),
        Command::GenCycle { name, mesh, faces, seed, out } => cmd_gen_cycle(name, &mesh, faces, seed, out.as_deref()),
        Command::Solve { mesh, cycle, strategy, internal, betti, out, stats } => {
            cmd_solve(&mesh, &cycle, strategy.into(), internal, betti, out.as_deref(), stats)
        }
        Command::Bench { suite, repeat, csv } => cmd_bench(suite, repeat as usize, csv.as_deref()),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {f}");
            f.exit_code()
        }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::from(e).context(format!("reading {}", path.display())))
}

fn write_output(out: Option<&Path>, text: &str) -> Result<(), Failure> {
    match out {
        Some(p) => fs::write(p, text).map_err(|e| Failure::from(e).context(format!("writing {}", p.display()))),
        None => Ok(io::stdout().write_all(text.as_bytes())?),
    }
}

fn load_mesh(path: &Path) -> Result<Triangulation, Failure> {
    let file = MeshFile::parse(&read(path)?).map_err(|e| Failure::from(e).context(path.display().to_string()))?;
    Ok(Triangulation::new(file.vertices, &file.tets)?)
}

fn single_tet() -> MeshData {
    let p = |x, y, z| Point3::new(x, y, z);
    MeshData {
        vertices: vec![p(0.0, 0.0, 0.0), p(1.0, 0.0, 0.0), p(0.0, 1.0, 0.0), p(0.0, 0.0, 1.0)],
        tets: vec![[0, 1, 2, 3]],
    }
}

fn cmd_gen(kind: MeshKind, n: usize, subdivide: bool, out: Option<&Path>) -> Result<(), Failure> {
    let mut data = match kind {
        MeshKind::Kuhn => generate::kuhn_cube(n)?,
        MeshKind::Hollow => generate::hollow_cube(n)?,
        MeshKind::Tunnel => generate::tunnel_cube(n)?,
        MeshKind::Tet => single_tet(),
    };
    if subdivide {
        data = barycentric_subdivision(&data.build()?);
    }
    data.build()?;
    write_output(out, &MeshFile { vertices: data.vertices, tets: data.tets }.emit())
}

/// Side length of a grid mesh, read off its largest x coordinate.
fn grid_size(mesh: &Triangulation) -> Result<usize, Failure> {
    let x = mesh.vertices().iter().map(|p| p.x).fold(f64::NEG_INFINITY, f64::max);
    if x >= 1.0 && x.fract() == 0.0 {
        Ok(x as usize)
    } else {
        Err(Failure::new(Status::Topology, anyhow::anyhow!("mesh is not a unit grid (max x = {x})")))
    }
}

fn cmd_gen_cycle(name: CycleKind, mesh: &Path, faces: usize, seed: u64, out: Option<&Path>) -> Result<(), Failure> {
    let m = load_mesh(mesh)?;
    let chain: Chain1 = match name {
        CycleKind::RandomPatch => generate::random_patch_boundary(&m, faces, seed),
        CycleKind::RandomBoundary => generate::random_boundary(&m, faces, seed),
        grid => {
            let n = grid_size(&m)?;
            match grid {
                CycleKind::FacePerimeter => generate::face_perimeter(&m, n)?,
                CycleKind::Belt => generate::belt_perimeter(&m, n)?,
                CycleKind::LinkedRectA => generate::linked_rects(&m, n)?.0,
                CycleKind::LinkedRectB => generate::linked_rects(&m, n)?.1,
                CycleKind::InteriorLoop => generate::interior_loop(&m, n)?,
                CycleKind::TunnelLoop => generate::tunnel_loop(&m, n)?,
                CycleKind::RandomPatch | CycleKind::RandomBoundary => unreachable!(),
            }
        }
    };
    write_output(out, &CycleFile::from_chain(&m, &chain).emit())
}

fn yes_no(b: bool) -> String {
    if b { "yes" } else { "no" }.to_string()
}

fn cmd_solve(
    mesh_path: &Path,
    cycle_path: &Path,
    strategy: TreeStrategy,
    internal: bool,
    betti: Option<usize>,
    out: Option<&Path>,
    stats: bool,
) -> Result<(), Failure> {
    let mesh = load_mesh(mesh_path)?;
    let graph = build_dual(&mesh)?;
    if let Some(g) = betti {
        if !mesh.euler_check(g, mesh.p()) {
            return Err(Failure::new(
                Status::Topology,
                anyhow::anyhow!(
                    "Euler characteristic {} does not match {g} tunnels and {} boundary components",
                    mesh.euler_characteristic(),
                    mesh.n_boundary_components()
                ),
            ));
        }
    }
    let cycle = CycleFile::parse(&read(cycle_path)?)?.to_chain(&mesh)?;
    let start = Instant::now();
    let result = if internal { solve_internal(&mesh, &graph, &cycle) } else { solve(&mesh, &graph, &cycle, strategy) };
    let elapsed_ms = start.elapsed().as_secs_f64() * 1e3;
    let r = result?;

    let label = if internal { "bfs2-internal".to_string() } else { strategy.to_string() };
    let mut surface = SurfaceFile::from_chain(&mesh, &r.surface);
    surface.footer = vec![
        format!("strategy {label}"),
        format!("support {}", r.stats.support),
        format!("self-intersecting {}", yes_no(r.stats.self_intersecting)),
        format!("fallbacks {}", r.fallback_count),
        format!("time-ms {elapsed_ms:.3}"),
    ];
    write_output(out, &surface.emit())?;

    let mut row = Report::new(vec!["strategy", "card", "ms", "self-inters", "fallbacks"]);
    row.push(vec![
        label,
        r.stats.support.to_string(),
        format!("{elapsed_ms:.3}"),
        yes_no(r.stats.self_intersecting),
        r.fallback_count.to_string(),
    ]);
    // Keep standard output clean for the surface when it goes there.
    let mut sink: Box<dyn Write> = if out.is_some() { Box::new(io::stdout()) } else { Box::new(io::stderr()) };
    row.write_table(&mut sink)?;
    if stats {
        write_stats(&mut sink, &mesh, &r, betti)?;
    }
    Ok(())
}

fn write_stats(out: &mut dyn Write, mesh: &Triangulation, r: &SeifertResult, betti: Option<usize>) -> io::Result<()> {
    let hist: Vec<String> = r.stats.histogram.iter().map(|(c, n)| format!("{c:+}:{n}")).collect();
    writeln!(out, "coefficients      {}", if hist.is_empty() { "-".into() } else { hist.join(" ") })?;
    writeln!(out, "max edge valence  {}", r.stats.max_edge_valence)?;
    let count = |p: Provenance| r.provenance.iter().filter(|&&x| x == p).count();
    writeln!(
        out,
        "faces             {} tree-zero, {} eliminated, {} from linking numbers",
        count(Provenance::TreeZero),
        count(Provenance::Eliminated),
        count(Provenance::LinkingFormula)
    )?;
    let free = mesh.n_faces() - count(Provenance::TreeZero);
    match betti {
        Some(g) => {
            writeln!(out, "free faces        {free} (e - v + 1 - g = {})", mesh.n_edges() + 1 - mesh.n_vertices() - g)
        }
        None => writeln!(out, "free faces        {free}"),
    }
}

fn median(mut v: Vec<f64>) -> f64 {
    v.sort_by(f64::total_cmp);
    v[v.len() / 2]
}

fn cmd_bench(suite: Suite, repeat: usize, csv: Option<&Path>) -> Result<(), Failure> {
    let mut report = Report::new(vec![
        "suite",
        "mesh",
        "tets",
        "faces",
        "edges",
        "verts",
        "g",
        "p",
        "cycle",
        "|gamma|",
        "strategy",
        "tree",
        "card",
        "ms",
        "self-inters",
        "fallbacks",
        "status",
    ]);
    let mut unexpected = Vec::new();
    for inst in instances(suite)? {
        let mesh = &inst.mesh;
        let graph = build_dual(mesh)?;
        let corners = mesh.classify_corners();
        let plugs = maximal_plug_set(mesh, &corners, smallest_face);
        let (t, f, e, v) = mesh.counts().as_tuple();
        for strategy in [TreeStrategy::Bfs1, TreeStrategy::Bfs2] {
            let tree = match strategy {
                TreeStrategy::Bfs1 => bfs1_tree(mesh, &graph)?,
                TreeStrategy::Bfs2 => bfs2_tree(mesh, &graph, &plugs)?,
            };
            let class = classify_tree(mesh, &graph, &tree, &corners);
            let tree_label = match (class.is_strongly_seifert, class.is_seifert) {
                (true, _) => "strong",
                (false, true) => "seifert",
                _ => "invalid",
            };
            for cycle in &inst.cycles {
                let mut times = Vec::with_capacity(repeat);
                let mut outcome = None;
                for _ in 0..repeat {
                    let start = Instant::now();
                    let r = solve(mesh, &graph, &cycle.chain, strategy);
                    times.push(start.elapsed().as_secs_f64() * 1e3);
                    outcome = Some(r);
                }
                let (card, self_inters, fallbacks, status) = match outcome.expect("repeat >= 1") {
                    Ok(r) => {
                        if !cycle.bounds {
                            unexpected
                                .push(format!("{}/{}/{strategy}: solved a non-bounding cycle", inst.label, cycle.name));
                        }
                        (
                            r.stats.support.to_string(),
                            yes_no(r.stats.self_intersecting),
                            r.fallback_count.to_string(),
                            "ok",
                        )
                    }
                    Err(SeifertError::VerificationFailed { .. }) if !cycle.bounds => {
                        ("-".into(), "-".into(), "-".into(), "not-a-boundary")
                    }
                    Err(err) => {
                        unexpected.push(format!("{}/{}/{strategy}: {err}", inst.label, cycle.name));
                        ("-".into(), "-".into(), "-".into(), "error")
                    }
                };
                report.push(vec![
                    suite.to_string(),
                    inst.label.clone(),
                    t.to_string(),
                    f.to_string(),
                    e.to_string(),
                    v.to_string(),
                    inst.genus.to_string(),
                    mesh.p().to_string(),
                    cycle.name.clone(),
                    cycle.chain.len().to_string(),
                    strategy.to_string(),
                    tree_label.to_string(),
                    card,
                    format!("{:.3}", median(times)),
                    self_inters,
                    fallbacks,
                    status.to_string(),
                ]);
            }
        }
    }
    match csv {
        Some(p) if p == Path::new("-") => report.write_csv(io::stdout())?,
        Some(p) => report.write_csv(fs::File::create(p)?)?,
        None => {}
    }
    if csv != Some(Path::new("-")) {
        report.write_table(&mut io::stdout())?;
    }
    if unexpected.is_empty() {
        Ok(())
    } else {
        Err(Failure::new(Status::NotBoundary, anyhow::anyhow!(unexpected.join("; "))))
    }
}
