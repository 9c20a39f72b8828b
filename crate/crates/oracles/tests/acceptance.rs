//! Acceptance criteria, run serially so the timing budgets are meaningful.
//! Prints one `PASS`/`FAIL` line per criterion and exits non-zero if any
//! criterion fails.

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use seifert_core::dual::{coil, maximal_plug_set, smallest_face};
use seifert_core::generate::{
    barycentric_subdivision, belt_perimeter, face_perimeter, hollow_cube, kuhn_cube, linked_rects, random_boundary,
    random_patch_boundary, tunnel_cube, tunnel_generator, tunnel_loop,
};
use seifert_core::linking::{crossing_oracle, is_one_boundary, linking_number, retract_plus, LinkError};
use seifert_core::seifert::verify;
use seifert_core::suite::{instances, Suite};
use seifert_core::trees::{bfs1_tree, bfs2_tree, classify_tree};
use seifert_core::{
    build_dual, eliminate, solve, solve_internal, Chain2, DualGraph, PLCycle, Point3, SeifertError, SeifertProblem,
    TreeStrategy, Triangulation,
};
use seifert_oracles::min_surface;

const STRATEGIES: [TreeStrategy; 2] = [TreeStrategy::Bfs1, TreeStrategy::Bfs2];

#[derive(Default)]
struct Outcome {
    failures: Vec<String>,
    notes: Vec<String>,
}

impl Outcome {
    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        if !ok {
            self.failures.push(what());
        }
    }
    fn note(&mut self, s: impl Into<String>) {
        self.notes.push(s.into());
    }
}

struct Criterion {
    id: u32,
    title: &'static str,
    budget: Duration,
    run: fn(&mut Outcome),
}

fn mesh_and_dual(data: seifert_core::generate::MeshData) -> (Triangulation, DualGraph) {
    let m = data.build().expect("generator mesh is valid");
    let g = build_dual(&m).expect("generator mesh has a dual");
    (m, g)
}

fn single_tet() -> Triangulation {
    let p = |x, y, z| Point3::new(x, y, z);
    Triangulation::new(vec![p(0.0, 0.0, 0.0), p(1.0, 0.0, 0.0), p(0.0, 1.0, 0.0), p(0.0, 0.0, 1.0)], &[[0, 1, 2, 3]])
        .unwrap()
}

/// Meshes of criteria 2 and 3 with their genus and extra boundary components.
fn topology_meshes() -> Vec<(String, Triangulation, usize, usize)> {
    let mut out = Vec::new();
    for n in 1..=4 {
        out.push((format!("kuhn-{n}"), kuhn_cube(n).unwrap().build().unwrap(), 0, 0));
    }
    out.push(("hollow-3".into(), hollow_cube(3).unwrap().build().unwrap(), 0, 1));
    out.push(("tunnel-3".into(), tunnel_cube(3).unwrap().build().unwrap(), 1, 0));
    out
}

fn c1_table_counts(o: &mut Outcome) {
    let counts = kuhn_cube(2).unwrap().build().unwrap().counts().as_tuple();
    o.check(counts == (48, 120, 98, 27), || format!("counts {counts:?}"));
    o.note(format!("(t,f,e,v) = {counts:?}"));
}

fn c2_euler(o: &mut Outcome) {
    for (name, m, g, p) in topology_meshes() {
        o.check(m.euler_check(g, p), || format!("{name}: chi = {}", m.euler_characteristic()));
        o.check(m.p() == p, || format!("{name}: p = {}", m.p()));
    }
    o.note("6 meshes");
}

fn c3_rank_identity(o: &mut Outcome) {
    for (name, m, genus, _) in topology_meshes() {
        let g = build_dual(&m).unwrap();
        let corners = m.classify_corners();
        let plugs = maximal_plug_set(&m, &corners, smallest_face);
        let trees = [bfs1_tree(&m, &g).unwrap(), bfs2_tree(&m, &g, &plugs).unwrap()];
        for (tree, strategy) in trees.iter().zip(STRATEGIES) {
            let c = classify_tree(&m, &g, tree, &corners);
            o.check(c.face_dedges == m.n_tets() + m.p(), || {
                format!("{name} {strategy}: {} face duals, t + p = {}", c.face_dedges, m.n_tets() + m.p())
            });
            o.check(c.is_seifert, || format!("{name} {strategy}: not Seifert"));
            let free = m.n_faces() - c.face_dedges;
            let expected = m.n_edges() + 1 - m.n_vertices() - genus;
            o.check(free == expected, || format!("{name} {strategy}: {free} free faces, expected {expected}"));
        }
    }
    o.note("12 trees");
}

fn c4_solver_exact(o: &mut Outcome) {
    let mut runs = 0;
    for suite in Suite::ALL {
        for inst in instances(suite).unwrap() {
            let g = build_dual(&inst.mesh).unwrap();
            for cycle in inst.cycles.iter().filter(|c| c.bounds) {
                for strategy in STRATEGIES {
                    runs += 1;
                    let tag = || format!("{suite}/{}/{}/{strategy}", inst.label, cycle.name);
                    match solve(&inst.mesh, &g, &cycle.chain, strategy) {
                        Ok(r) => o.check(verify(&inst.mesh, &r.surface, &cycle.chain), || format!("{}: ∂S ≠ γ", tag())),
                        Err(e) => o.check(false, || format!("{}: {e}", tag())),
                    }
                }
            }
        }
    }
    o.note(format!("{runs} solves verified"));
}

fn c5_toy_surface(o: &mut Outcome) {
    let (m, g) = mesh_and_dual(kuhn_cube(2).unwrap());
    let gamma = face_perimeter(&m, 2).unwrap();
    o.check(gamma.len() == 8, || format!("|γ| = {}", gamma.len()));

    let minimum = min_surface(&m, &gamma, &BTreeSet::new(), 8).map(|s| s.len());
    o.check(minimum == Some(8), || format!("brute-force minimum {minimum:?}, expected 8"));

    let r2 = solve(&m, &g, &gamma, TreeStrategy::Bfs2).unwrap();
    let r1 = solve(&m, &g, &gamma, TreeStrategy::Bfs1).unwrap();
    o.check(verify(&m, &r1.surface, &gamma) && verify(&m, &r2.surface, &gamma), || "∂S ≠ γ".into());
    o.check((8..=120).contains(&r1.stats.support), || format!("bfs1 card {}", r1.stats.support));
    o.check(r2.fallback_count == 0, || format!("bfs2 used {} fallbacks", r2.fallback_count));
    o.check(!r2.stats.self_intersecting, || "bfs2 surface self-intersecting".into());
    o.check(r2.stats.support == 8, || format!("bfs2 card {} ≠ 8", r2.stats.support));
    o.note(format!(
        "brute-force min {}, bfs2 card {}, bfs1 card {} (reported)",
        minimum.map_or("-".into(), |v| v.to_string()),
        r2.stats.support,
        r1.stats.support
    ));

    if r2.stats.support != 8 {
        // Every maximal plug-set holds all regular plugs, so these faces are
        // zero in any strongly-Seifert solution.
        let corners = m.classify_corners();
        let regular: BTreeSet<usize> =
            m.boundary_faces().iter().copied().filter(|&f| !corners.is_corner_tet(m.face_tets(f)[0])).collect();
        let avoiding = min_surface(&m, &gamma, &regular, 8);
        o.note(format!(
            "no surface with ≤ 8 faces avoids the regular boundary faces: {}",
            if avoiding.is_none() { "confirmed" } else { "refuted" }
        ));
        let belt = belt_perimeter(&m, 2).unwrap();
        let b1 = solve(&m, &g, &belt, TreeStrategy::Bfs1).unwrap().stats.support;
        let b2 = solve(&m, &g, &belt, TreeStrategy::Bfs2).unwrap().stats.support;
        o.note(format!("belt loop for comparison: bfs1 card {b1}, bfs2 card {b2}"));
    }
}

fn c6_oracle_equivalence(o: &mut Outcome) {
    let (m, g) = mesh_and_dual(kuhn_cube(2).unwrap());
    let cycles = [
        ("face-perimeter", face_perimeter(&m, 2).unwrap()),
        ("belt", belt_perimeter(&m, 2).unwrap()),
        ("random-patch", random_patch_boundary(&m, 10, 6)),
    ];
    let mut evaluations = 0;
    for (name, gamma) in cycles {
        for strategy in STRATEGIES {
            let p = SeifertProblem::new(&m, &g, gamma.clone(), strategy).unwrap();
            let eliminated = eliminate(&p).unwrap().surface;
            evaluations += p.free_faces().len();
            let explicit = p.explicit_surface().unwrap();
            let mismatched = p.free_faces().into_iter().filter(|&f| eliminated.get(f) != explicit.get(f)).count();
            o.check(mismatched == 0, || format!("{name} {strategy}: {mismatched} faces differ"));
        }
    }
    o.note(format!("{evaluations} linking-formula coefficients compared"));
}

fn random_polygon(rng: &mut ChaCha8Rng, center: Point3) -> PLCycle {
    let k = rng.random_range(3..=8);
    let pts: Vec<Point3> = (0..k)
        .map(|_| {
            center + Point3::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
        })
        .collect();
    PLCycle::polygon(&pts, 1).unwrap()
}

fn c7_linking_cross_validation(o: &mut Outcome) {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let (mut agreed, mut linked, mut worst) = (0, 0, 0.0f64);
    while agreed < 250 {
        let a = random_polygon(&mut rng, Point3::new(0.0, 0.0, 0.0));
        let shift = Point3::new(rng.random_range(-0.5..0.5), rng.random_range(-0.5..0.5), rng.random_range(-0.5..0.5));
        let b = random_polygon(&mut rng, shift);
        let r = match linking_number(&a, &b) {
            Ok(r) => r,
            Err(LinkError::SupportsIntersect { .. }) => continue,
            Err(e) => {
                o.check(false, || format!("pair {agreed}: {e}"));
                break;
            }
        };
        let oracle = crossing_oracle(&a, &b).unwrap();
        o.check(oracle == r.value, || format!("pair {agreed}: gauss {} vs crossings {oracle}", r.value));
        worst = worst.max(r.residual);
        agreed += 1;
        linked += usize::from(r.value != 0);
    }
    o.check(worst < 0.1, || format!("residual {worst}"));

    let mesh = kuhn_cube(4).unwrap().build().unwrap();
    let (a, b) = linked_rects(&mesh, 4).unwrap();
    let (a, b) = (PLCycle::from_chain(&mesh, &a).unwrap(), PLCycle::from_chain(&mesh, &b).unwrap());
    let lk = linking_number(&a, &b).unwrap().value;
    o.check(lk.abs() == 1, || format!("linked rectangles give {lk}"));
    o.check(crossing_oracle(&a, &b).unwrap() == lk, || "linked rectangles: oracle disagrees".into());
    o.note(format!("{agreed} random pairs ({linked} linked), max residual {worst:.1e}, linked-rects {lk:+}"));
}

fn c8_coil_identity(o: &mut Outcome) {
    let (m, g) = mesh_and_dual(kuhn_cube(2).unwrap());
    let internal: Vec<usize> = (0..m.n_edges()).filter(|&e| !m.is_boundary_edge(e)).collect();
    let coils: Vec<PLCycle> =
        internal.iter().map(|&e| PLCycle::from_dual(&g, &coil(&m, &g, e).unwrap().dual).unwrap()).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut checked = 0;
    for seed in 0..50u64 {
        let k = rng.random_range(1..=3);
        let xi = random_boundary(&m, rng.random_range(1..=4), seed).scaled(k);
        let retracted = retract_plus(&m, &xi).unwrap();
        for (&e, c) in internal.iter().zip(&coils) {
            let lk = linking_number(&retracted, c).unwrap().value;
            checked += 1;
            o.check(lk == xi.get(e), || format!("ξ #{seed}, edge {e}: linking {lk}, coefficient {}", xi.get(e)));
        }
    }
    o.note(format!("{checked} (ξ, edge) pairs over {} internal edges", internal.len()));
}

fn c9_internal_dichotomy(o: &mut Outcome) {
    // Single tet: every boundary edge is a corner edge.
    let tet = single_tet();
    let g = build_dual(&tet).unwrap();
    let gamma = tet.boundary_2(&Chain2::unit(0, 1));
    let r = solve_internal(&tet, &g, &gamma);
    o.check(matches!(r, Err(SeifertError::CornerObstruction { .. })), || format!("single tet: {r:?}"));

    // Its subdivision has no corner edges, so every boundary bounds internally.
    let sub = barycentric_subdivision(&tet).build().unwrap();
    let gs = build_dual(&sub).unwrap();
    let corners = sub.classify_corners();
    o.check(corners.edges.is_empty(), || format!("subdivision has {} corner edges", corners.edges.len()));
    let mut cases = vec![sub.boundary_2(&Chain2::unit(sub.boundary_faces()[0], 1))];
    cases.extend((0..5).map(|s| random_boundary(&sub, 4, s)));
    for (i, gamma) in cases.iter().enumerate() {
        match solve_internal(&sub, &gs, gamma) {
            Ok(r) => o.check(sub.is_internal(&r.surface) && verify(&sub, &r.surface, gamma), || {
                format!("subdivision case {i}: not internal")
            }),
            Err(e) => o.check(false, || format!("subdivision case {i}: {e}")),
        }
    }

    // Kuhn n = 2: both sides of the dichotomy.
    let (m, g) = mesh_and_dual(kuhn_cube(2).unwrap());
    let corners = m.classify_corners();
    let (mut free, mut blocked) = (0, 0);
    for seed in 0..40 {
        let gamma = random_boundary(&m, 3, seed);
        let r = solve_internal(&m, &g, &gamma);
        if m.is_corner_free(&gamma, &corners) {
            free += 1;
            o.check(r.as_ref().is_ok_and(|r| m.is_internal(&r.surface)), || format!("kuhn seed {seed}: {r:?}"));
        } else {
            blocked += 1;
            o.check(matches!(r, Err(SeifertError::CornerObstruction { .. })), || format!("kuhn seed {seed}: {r:?}"));
        }
    }
    o.check(free > 0 && blocked > 0, || format!("kuhn: {free} corner-free, {blocked} with corners"));
    o.note(format!("kuhn-2: {free} corner-free, {blocked} obstructed"));
}

fn c10_non_boundary(o: &mut Outcome) {
    let (m, g) = mesh_and_dual(tunnel_cube(3).unwrap());
    let gamma = tunnel_loop(&m, 3).unwrap();
    for strategy in STRATEGIES {
        let r = solve(&m, &g, &gamma, strategy);
        o.check(matches!(r, Err(SeifertError::VerificationFailed { .. })), || format!("{strategy}: {r:?}"));
    }
    let generator = tunnel_generator(3);
    let bounds = is_one_boundary(&m, &gamma, std::slice::from_ref(&generator)).unwrap();
    o.check(!bounds, || "is_one_boundary returned true".into());
    let lk = crossing_oracle(&retract_plus(&m, &gamma).unwrap(), &generator).unwrap();
    o.check(lk.abs() == 1, || format!("crossing oracle gives {lk}"));
    let patch = random_patch_boundary(&m, 9, 3);
    o.check(is_one_boundary(&m, &patch, &[generator]).unwrap(), || "bounding patch flagged".into());
    o.note(format!("linking with the threading generator {lk:+}"));
}

fn c11_performance(o: &mut Outcome) {
    let mut times = Vec::new();
    for n in [4usize, 8, 16] {
        let mut samples = Vec::new();
        let mut fallbacks = 0;
        for _ in 0..5 {
            let start = Instant::now();
            let (m, g) = mesh_and_dual(kuhn_cube(n).unwrap());
            let gamma = random_patch_boundary(&m, n * n, n as u64);
            let r = solve(&m, &g, &gamma, TreeStrategy::Bfs2).unwrap();
            samples.push(start.elapsed().as_secs_f64());
            o.check(verify(&m, &r.surface, &gamma), || format!("n = {n}: ∂S ≠ γ"));
            fallbacks = r.fallback_count;
        }
        samples.sort_by(f64::total_cmp);
        times.push((n, 6 * n * n * n, samples[2], fallbacks));
    }
    let (_, _, t16, _) = times[2];
    o.check(t16 < 2.0, || format!("n = 16 took {t16:.3} s"));
    // log-log slope of time against tet count
    let slope = |a: (usize, usize, f64, usize), b: (usize, usize, f64, usize)| {
        (b.2 / a.2).ln() / (b.1 as f64 / a.1 as f64).ln()
    };
    let overall = slope(times[0], times[2]);
    let upper = slope(times[1], times[2]);
    o.check(overall <= 1.25 && upper <= 1.25, || format!("growth exponents {overall:.2}, {upper:.2}"));
    let rows: Vec<String> =
        times.iter().map(|(n, t, s, f)| format!("n={n} ({t} tets) {:.1} ms, {f} fallbacks", s * 1e3)).collect();
    o.note(format!("{}; growth exponent {overall:.2}", rows.join(", ")));
}

fn main() -> ExitCode {
    let criteria = [
        Criterion { id: 1, title: "mesh counts", budget: Duration::from_secs(1), run: c1_table_counts },
        Criterion { id: 2, title: "Euler identity", budget: Duration::from_secs(5), run: c2_euler },
        Criterion { id: 3, title: "rank identity", budget: Duration::from_secs(5), run: c3_rank_identity },
        Criterion { id: 4, title: "solver exactness", budget: Duration::from_secs(300), run: c4_solver_exact },
        Criterion { id: 5, title: "toy surface size", budget: Duration::from_secs(10), run: c5_toy_surface },
        Criterion { id: 6, title: "oracle equivalence", budget: Duration::from_secs(60), run: c6_oracle_equivalence },
        Criterion {
            id: 7,
            title: "linking cross-check",
            budget: Duration::from_secs(30),
            run: c7_linking_cross_validation,
        },
        Criterion { id: 8, title: "coil identity", budget: Duration::from_secs(60), run: c8_coil_identity },
        Criterion { id: 9, title: "internal dichotomy", budget: Duration::from_secs(5), run: c9_internal_dichotomy },
        Criterion { id: 10, title: "non-boundary detection", budget: Duration::from_secs(5), run: c10_non_boundary },
        Criterion { id: 11, title: "performance", budget: Duration::from_secs(60), run: c11_performance },
    ];
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut failed = 0;
    for c in criteria {
        if !filter.is_empty() && !filter.iter().any(|f| c.id.to_string() == *f || c.title.contains(f.as_str())) {
            continue;
        }
        let mut outcome = Outcome::default();
        let start = Instant::now();
        (c.run)(&mut outcome);
        let elapsed = start.elapsed();
        if elapsed > c.budget {
            outcome.failures.push(format!("took {elapsed:.2?}, budget {:?}", c.budget));
        }
        let verdict = if outcome.failures.is_empty() { "PASS" } else { "FAIL" };
        println!("{verdict} {:>2} {:<22} {:>9.2?}  {}", c.id, c.title, elapsed, outcome.notes.join("; "));
        for f in &outcome.failures {
            println!("        - {f}");
        }
        failed += usize::from(!outcome.failures.is_empty());
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    }
}
