use std::collections::BTreeMap;

use proptest::prelude::*;
use seifert_core::dual::{coil, maximal_plug_set, Anchor};
use seifert_core::generate::{
    barycentric_subdivision, hollow_cube, interior_loop, kuhn_cube, random_boundary, random_patch_boundary, tunnel_cube,
};
use seifert_core::geometry::triple;
use seifert_core::seifert::{verify, Provenance};
use seifert_core::trees::{bfs1_plan, bfs2_plan, LazyTree};
use seifert_core::{
    build_dual, eliminate, solve, solve_internal, Chain1, Chain2, DualGraph, Point3, SeifertProblem, TreeStrategy,
    Triangulation,
};

fn build(data: seifert_core::generate::MeshData) -> (Triangulation, DualGraph) {
    let m = data.build().unwrap();
    let g = build_dual(&m).unwrap();
    (m, g)
}

fn single_tet() -> Triangulation {
    Triangulation::new(
        vec![
            Point3::new(0.0, 0.0, 0.0),
            Point3::new(1.0, 0.0, 0.0),
            Point3::new(0.0, 1.0, 0.0),
            Point3::new(0.0, 0.0, 1.0),
        ],
        &[[0, 1, 2, 3]],
    )
    .unwrap()
}

/// BFS₂ tree whose corner plugs use the largest candidate face.
fn bfs2_largest(m: &Triangulation, g: &DualGraph) -> LazyTree {
    let corners = m.classify_corners();
    let plugs = maximal_plug_set(m, &corners, |_, c| *c.last().unwrap());
    bfs2_plan(m, g, &plugs).unwrap()
}

/// Writes a 2-cycle `z` as `Σ c_t ∂t + Σ d_i Γ_i`, with `Γ_i` the outward
/// boundary surface of component `i`, or returns `None` if impossible.
fn decompose_two_cycle(m: &Triangulation, z: &Chain2) -> Option<(BTreeMap<usize, i64>, Vec<i64>)> {
    let outward = |t: usize| {
        let [a, b, c, d] = m.tet(t).map(|v| m.vertex(v));
        triple(b - a, c - a, d - a).signum() as i64
    };
    // Propagate tet coefficients across interior faces from tet 0.
    let mut coef: Vec<Option<i64>> = vec![None; m.n_tets()];
    coef[0] = Some(0);
    let mut stack = vec![0];
    while let Some(t) = stack.pop() {
        for f in m.tet_faces(t) {
            let &[u, v] = m.face_tets(f) else { continue };
            let other = if u == t { v } else { u };
            if coef[other].is_none() {
                let here = coef[t].unwrap() * m.face_tet_sign(f, t);
                coef[other] = Some((z.get(f) - here) * m.face_tet_sign(f, other));
                stack.push(other);
            }
        }
    }
    let coef: Vec<i64> = coef.into_iter().collect::<Option<_>>()?;
    let mut d = vec![None; m.n_boundary_components()];
    for &f in m.boundary_faces() {
        let t = m.face_tets(f)[0];
        let gamma_sign = m.face_tet_sign(f, t) * outward(t);
        let rest = z.get(f) - coef[t] * m.face_tet_sign(f, t);
        let i = m.face_component(f).unwrap();
        let want = rest * gamma_sign;
        if *d[i].get_or_insert(want) != want {
            return None;
        }
    }
    let total: Chain2 = (0..m.n_tets())
        .map(|t| m.boundary_3(&seifert_core::Chain3::unit(t, coef[t])))
        .fold(Chain2::new(), |acc, s| &acc + &s);
    let mut shell = Chain2::new();
    for &f in m.boundary_faces() {
        let t = m.face_tets(f)[0];
        let i = m.face_component(f).unwrap();
        shell.add_term(f, d[i].unwrap() * m.face_tet_sign(f, t) * outward(t));
    }
    if &total + &shell != *z {
        return None;
    }
    Some(((0..m.n_tets()).map(|t| (t, coef[t])).collect(), d.into_iter().map(Option::unwrap).collect()))
}

#[test]
fn coils_are_closed_on_every_edge() {
    let (m, g) = build(kuhn_cube(2).unwrap());
    for e in 0..m.n_edges() {
        let c = coil(&m, &g, e).unwrap();
        assert!(g.chain_boundary(&c.dual).is_empty(), "edge {e}");
        let mut ends: BTreeMap<Anchor, i64> = BTreeMap::new();
        for &(p, q, k) in &c.segments {
            *ends.entry(q).or_insert(0) += k;
            *ends.entry(p).or_insert(0) -= k;
        }
        assert!(ends.values().all(|&k| k == 0), "edge {e}");
        let internal = !m.is_boundary_edge(e);
        assert_eq!(c.dual.len(), m.edge_faces(e).len() + usize::from(!internal));
    }
}

#[test]
fn dual_orientation_matches_volume_sign() {
    let (m, g) = build(kuhn_cube(2).unwrap());
    for f in 0..m.n_faces() {
        let d = g.dedge(g.face_dedge(f));
        if let &[_, _] = m.face_tets(f) {
            let [a, b, c] = m.face(f).map(|v| m.vertex(v));
            let head = match g.node(d.head).kind {
                seifert_core::dual::NodeKind::Tet(t) => t,
                k => panic!("face {f} points at {k:?}"),
            };
            let apex = m.vertex(m.opposite_vertex(head, f));
            assert!(triple(b - a, c - a, apex - a) > 0.0, "face {f}");
        }
    }
}

#[test]
fn single_face_boundary_gives_that_face() {
    let (m, g) = build(kuhn_cube(2).unwrap());
    let problem = SeifertProblem::new(&m, &g, Chain1::new(), TreeStrategy::Bfs1).unwrap();
    let free = problem.free_faces();
    for &f0 in free.iter().filter(|&&f| !m.is_boundary_face(f)).take(6) {
        let gamma = m.boundary_2(&Chain2::unit(f0, 1));
        let p = SeifertProblem::new(&m, &g, gamma, TreeStrategy::Bfs1).unwrap();
        for f in (0..m.n_faces()).step_by(7).chain([f0]) {
            assert_eq!(p.explicit_coefficient(f).unwrap(), i64::from(f == f0), "f0 {f0}, f {f}");
        }
    }
}

#[test]
fn free_face_count_matches_rank_identity() {
    let subdivided = barycentric_subdivision(&single_tet());
    let meshes = [
        (kuhn_cube(1).unwrap(), 0),
        (kuhn_cube(2).unwrap(), 0),
        (kuhn_cube(3).unwrap(), 0),
        (hollow_cube(3).unwrap(), 0),
        (tunnel_cube(3).unwrap(), 1),
        (subdivided, 0),
    ];
    for (data, genus) in meshes {
        let (m, g) = build(data);
        let expected = m.n_edges() + 1 - m.n_vertices() - genus;
        for strategy in [TreeStrategy::Bfs1, TreeStrategy::Bfs2] {
            let p = SeifertProblem::new(&m, &g, Chain1::new(), strategy).unwrap();
            assert_eq!(p.free_faces().len(), expected, "{strategy} on {:?}", m.counts());
        }
    }
}

#[test]
fn elimination_matches_linking_formula_on_small_meshes() {
    let meshes = [kuhn_cube(1).unwrap(), kuhn_cube(2).unwrap(), barycentric_subdivision(&single_tet())];
    for data in meshes {
        let (m, g) = build(data);
        for seed in 0..3 {
            let gamma = random_boundary(&m, 5, seed);
            for tree in [bfs1_plan(&m, &g).unwrap(), bfs2_largest(&m, &g)] {
                let p = SeifertProblem::with_tree(&m, &g, gamma.clone(), tree).unwrap();
                let r = eliminate(&p).unwrap();
                assert_eq!(p.explicit_surface().unwrap(), r.surface, "seed {seed}");
            }
        }
    }
}

#[test]
fn surfaces_differ_by_closed_surfaces() {
    for data in [kuhn_cube(2).unwrap(), hollow_cube(3).unwrap()] {
        let (m, g) = build(data);
        for seed in 0..4 {
            let gamma = random_patch_boundary(&m, 12, seed);
            let s1 = solve(&m, &g, &gamma, TreeStrategy::Bfs1).unwrap().surface;
            let s2 = solve(&m, &g, &gamma, TreeStrategy::Bfs2).unwrap().surface;
            let p = SeifertProblem::with_tree(&m, &g, gamma.clone(), bfs2_largest(&m, &g)).unwrap();
            let s3 = eliminate(&p).unwrap().surface;
            for diff in [&s1 - &s2, &s1 - &s3] {
                assert!(m.boundary_2(&diff).is_zero());
                assert!(decompose_two_cycle(&m, &diff).is_some(), "seed {seed}");
            }
        }
    }
}

#[test]
fn decomposition_oracle_rejects_non_cycles() {
    let (m, _) = build(kuhn_cube(1).unwrap());
    assert!(decompose_two_cycle(&m, &Chain2::unit(0, 1)).is_none());
    let shell = m.boundary_3(&seifert_core::Chain3::unit(2, 3));
    let (c, _) = decompose_two_cycle(&m, &shell).unwrap();
    assert!(c.values().any(|&k| k != 0));
}

#[test]
fn tree_faces_stay_zero() {
    let (m, g) = build(hollow_cube(3).unwrap());
    let gamma = random_boundary(&m, 30, 7);
    for strategy in [TreeStrategy::Bfs1, TreeStrategy::Bfs2] {
        let p = SeifertProblem::new(&m, &g, gamma.clone(), strategy).unwrap();
        let r = eliminate(&p).unwrap();
        assert!(verify(&m, &r.surface, &gamma));
        for f in 0..m.n_faces() {
            if p.tree().face_in_tree(f) {
                assert_eq!(r.surface.get(f), 0);
                assert_eq!(r.provenance[f], Provenance::TreeZero);
            } else {
                assert_ne!(r.provenance[f], Provenance::TreeZero);
            }
        }
    }
}

#[test]
fn internal_loop_gets_internal_surface() {
    let (m, g) = build(kuhn_cube(4).unwrap());
    let gamma = interior_loop(&m, 4).unwrap();
    assert!(m.is_internal(&gamma));
    let r = solve_internal(&m, &g, &gamma).unwrap();
    assert!(verify(&m, &r.surface, &gamma));
    assert!(m.is_internal(&r.surface));
}

#[test]
fn non_cycles_are_rejected() {
    let (m, g) = build(kuhn_cube(1).unwrap());
    let open = Chain1::unit(0, 1);
    assert!(matches!(solve(&m, &g, &open, TreeStrategy::Bfs1), Err(seifert_core::SeifertError::NotACycle)));
    assert!(matches!(solve_internal(&m, &g, &open), Err(seifert_core::SeifertError::NotACycle)));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn random_boundaries_are_filled(seed in any::<u64>(), faces in 1usize..40, bfs2 in any::<bool>()) {
        static MESH: std::sync::LazyLock<(Triangulation, DualGraph)> =
            std::sync::LazyLock::new(|| build(kuhn_cube(3).unwrap()));
        let (m, g) = &*MESH;
        let gamma = random_boundary(m, faces, seed);
        let strategy = if bfs2 { TreeStrategy::Bfs2 } else { TreeStrategy::Bfs1 };
        let r = solve(m, g, &gamma, strategy).unwrap();
        prop_assert!(verify(m, &r.surface, &gamma));
        prop_assert_eq!(r.stats.support, r.surface.len());
    }
}
