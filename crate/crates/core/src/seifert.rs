//! Homological Seifert surfaces: 2-chains whose boundary is a given 1-cycle.
//!
//! Unknowns are one integer per face. Faces whose dual lies in the spanning
//! tree are fixed to zero; every other coefficient is either forced by an
//! edge with a single unresolved face or, when no such edge is left, read
//! off from a linking number.

use std::collections::{BTreeMap, VecDeque};
use std::sync::OnceLock;
use std::time::{Duration, Instant};

use thiserror::Error;

use crate::complex::{Chain1, Chain2, Triangulation};
use crate::dual::{maximal_plug_set, smallest_face, DualGraph};
use crate::linking::{linking_number, retract_plus, LinkError, PLCycle};
use crate::par;
use crate::trees::{bfs1_plan, bfs2_plan, LazyTree, TreeError, TreeStrategy};

#[derive(Clone, Debug, Error, PartialEq)]
#[non_exhaustive]
pub enum SeifertError {
    #[error("input chain is not a 1-cycle")]
    NotACycle,
    #[error("cycle uses corner edge {edge}; no internal surface exists")]
    CornerObstruction { edge: usize },
    #[error(
        "boundary of the computed surface differs from the cycle on {mismatched_edges} edges; the cycle does not bound"
    )]
    VerificationFailed { mismatched_edges: usize },
    #[error("internal surface has nonzero coefficient on boundary face {face}")]
    NotInternal { face: usize },
    #[error(transparent)]
    Tree(#[from] TreeError),
    #[error(transparent)]
    Link(#[from] LinkError),
}

/// How a face coefficient was obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Provenance {
    /// Dual edge in the tree: coefficient fixed to zero.
    TreeZero,
    /// Forced by an edge with one unresolved face.
    Eliminated,
    /// Computed from a linking number.
    LinkingFormula,
}

/// One solve: mesh, dual graph, tree and the cycle to fill.
#[derive(Debug)]
pub struct SeifertProblem<'a> {
    mesh: &'a Triangulation,
    graph: &'a DualGraph,
    tree: LazyTree,
    gamma: Chain1,
    retracted: OnceLock<Result<PLCycle, LinkError>>,
}

impl<'a> SeifertProblem<'a> {
    /// Builds the tree for `strategy`; BFS₂ uses the default maximal plug-set.
    pub fn new(
        mesh: &'a Triangulation,
        graph: &'a DualGraph,
        gamma: Chain1,
        strategy: TreeStrategy,
    ) -> Result<Self, SeifertError> {
        let tree = match strategy {
            TreeStrategy::Bfs1 => bfs1_plan(mesh, graph)?,
            TreeStrategy::Bfs2 => {
                let corners = mesh.classify_corners();
                let plugs = maximal_plug_set(mesh, &corners, smallest_face);
                bfs2_plan(mesh, graph, &plugs)?
            }
        };
        Self::with_tree(mesh, graph, gamma, tree)
    }

    pub fn with_tree(
        mesh: &'a Triangulation,
        graph: &'a DualGraph,
        gamma: Chain1,
        tree: LazyTree,
    ) -> Result<Self, SeifertError> {
        if !mesh.is_cycle(&gamma) {
            return Err(SeifertError::NotACycle);
        }
        Ok(SeifertProblem { mesh, graph, tree, gamma, retracted: OnceLock::new() })
    }

    pub fn mesh(&self) -> &Triangulation {
        self.mesh
    }
    pub fn graph(&self) -> &DualGraph {
        self.graph
    }
    pub fn tree(&self) -> &LazyTree {
        &self.tree
    }
    pub fn gamma(&self) -> &Chain1 {
        &self.gamma
    }

    /// Faces whose dual is not a tree edge.
    pub fn free_faces(&self) -> Vec<usize> {
        (0..self.mesh.n_faces()).filter(|&f| !self.tree.face_in_tree(f)).collect()
    }

    fn retracted(&self) -> Result<&PLCycle, LinkError> {
        self.retracted.get_or_init(|| retract_plus(self.mesh, &self.gamma)).as_ref().map_err(Clone::clone)
    }

    /// Coefficient of face `f` from the linking number of the retracted
    /// cycle with the fundamental cycle of `f`'s dual.
    pub fn explicit_coefficient(&self, f: usize) -> Result<i64, SeifertError> {
        if self.tree.face_in_tree(f) {
            return Ok(0);
        }
        let tree = self.tree.tree(self.graph)?;
        let cycle = tree.tree_cycle(self.graph, self.graph.face_dedge(f))?;
        let sigma = PLCycle::from_dual(self.graph, &cycle)?;
        Ok(linking_number(self.retracted()?, &sigma)?.value)
    }

    /// Every coefficient from the linking formula, faces evaluated in parallel.
    pub fn explicit_surface(&self) -> Result<Chain2, SeifertError> {
        self.tree.tree(self.graph)?;
        self.retracted()?;
        let free = self.free_faces();
        let values = par::map_slice(&free, |&f| self.explicit_coefficient(f));
        let mut s = Chain2::new();
        for (f, v) in free.into_iter().zip(values) {
            s.add_term(f, v?);
        }
        Ok(s)
    }
}

/// Surface statistics.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SurfaceStats {
    /// Faces with nonzero coefficient.
    pub support: usize,
    /// Some coefficient has magnitude at least 2, or some edge meets three or
    /// more support faces.
    pub self_intersecting: bool,
    pub max_edge_valence: usize,
    /// Coefficient value -> number of faces.
    pub histogram: BTreeMap<i64, usize>,
}

pub fn surface_stats(mesh: &Triangulation, s: &Chain2) -> SurfaceStats {
    let mut histogram = BTreeMap::new();
    let mut valence: BTreeMap<usize, usize> = BTreeMap::new();
    for (f, c) in s.iter() {
        *histogram.entry(c).or_insert(0) += 1;
        for e in mesh.face_edges(f) {
            *valence.entry(e).or_insert(0) += 1;
        }
    }
    let max_edge_valence = valence.values().copied().max().unwrap_or(0);
    SurfaceStats {
        support: s.len(),
        self_intersecting: s.max_abs_coefficient() >= 2 || max_edge_valence >= 3,
        max_edge_valence,
        histogram,
    }
}

/// Exact check of `∂S = γ`.
pub fn verify(mesh: &Triangulation, s: &Chain2, gamma: &Chain1) -> bool {
    mesh.boundary_2(s) == *gamma
}

#[derive(Clone, Debug, PartialEq)]
pub struct SeifertResult {
    pub surface: Chain2,
    /// Indexed by face id.
    pub provenance: Vec<Provenance>,
    pub stats: SurfaceStats,
    pub fallback_count: usize,
    pub elapsed: Duration,
}

impl SeifertResult {
    pub fn elapsed_ms(&self) -> f64 {
        self.elapsed.as_secs_f64() * 1e3
    }
}

struct Elimination {
    value: Vec<i64>,
    provenance: Vec<Provenance>,
    resolved: Vec<bool>,
    unresolved_on_edge: Vec<usize>,
    residual: Vec<i64>,
    queue: VecDeque<usize>,
    remaining: usize,
}

impl Elimination {
    fn resolve(&mut self, mesh: &Triangulation, f: usize, v: i64, how: Provenance) {
        self.resolved[f] = true;
        self.value[f] = v;
        self.provenance[f] = how;
        self.remaining -= 1;
        for e in mesh.face_edges(f) {
            self.residual[e] -= mesh.edge_face_sign(e, f) * v;
            self.unresolved_on_edge[e] -= 1;
            if self.unresolved_on_edge[e] == 1 {
                self.queue.push_back(e);
            }
        }
    }
}

/// Solves edge by edge, falling back to the linking formula on the
/// smallest unresolved face whenever no edge has a single unknown left.
pub fn eliminate(problem: &SeifertProblem<'_>) -> Result<SeifertResult, SeifertError> {
    let start = Instant::now();
    let mesh = problem.mesh;
    let nf = mesh.n_faces();
    let ne = mesh.n_edges();

    let mut st = Elimination {
        value: vec![0; nf],
        provenance: vec![Provenance::TreeZero; nf],
        resolved: vec![false; nf],
        unresolved_on_edge: vec![0; ne],
        residual: vec![0; ne],
        queue: VecDeque::new(),
        remaining: 0,
    };
    for (e, a) in problem.gamma.iter() {
        st.residual[e] = a;
    }
    for f in 0..nf {
        if problem.tree.face_in_tree(f) {
            st.resolved[f] = true;
        } else {
            st.remaining += 1;
            for e in mesh.face_edges(f) {
                st.unresolved_on_edge[e] += 1;
            }
        }
    }
    st.queue = (0..ne).filter(|&e| st.unresolved_on_edge[e] == 1).collect();

    let mut fallback_count = 0;
    let mut cursor = 0usize;
    while st.remaining > 0 {
        while let Some(e) = st.queue.pop_front() {
            if st.unresolved_on_edge[e] != 1 {
                continue;
            }
            let f =
                *mesh.edge_faces(e).iter().find(|&&f| !st.resolved[f]).expect("counter says one face is unresolved");
            let v = st.residual[e] * mesh.edge_face_sign(e, f);
            st.resolve(mesh, f, v, Provenance::Eliminated);
        }
        if st.remaining == 0 {
            break;
        }
        while st.resolved[cursor] {
            cursor += 1;
        }
        let v = problem.explicit_coefficient(cursor)?;
        fallback_count += 1;
        st.resolve(mesh, cursor, v, Provenance::LinkingFormula);
    }

    let surface: Chain2 = st.value.iter().enumerate().map(|(f, &v)| (f, v)).collect();
    let diff = &mesh.boundary_2(&surface) - &problem.gamma;
    if !diff.is_zero() {
        return Err(SeifertError::VerificationFailed { mismatched_edges: diff.len() });
    }
    let stats = surface_stats(mesh, &surface);
    Ok(SeifertResult { surface, provenance: st.provenance, stats, fallback_count, elapsed: start.elapsed() })
}

/// A surface avoiding the boundary, which exists exactly when `gamma` uses
/// no corner edge. Uses a BFS₂ tree.
pub fn solve_internal(mesh: &Triangulation, graph: &DualGraph, gamma: &Chain1) -> Result<SeifertResult, SeifertError> {
    if !mesh.is_cycle(gamma) {
        return Err(SeifertError::NotACycle);
    }
    let corners = mesh.classify_corners();
    if let Some(edge) = gamma.support().find(|&e| corners.is_corner_edge(e)) {
        return Err(SeifertError::CornerObstruction { edge });
    }
    let plugs = maximal_plug_set(mesh, &corners, smallest_face);
    let tree = bfs2_plan(mesh, graph, &plugs)?;
    let problem = SeifertProblem::with_tree(mesh, graph, gamma.clone(), tree)?;
    let result = eliminate(&problem)?;
    if let Some(face) = result.surface.support().find(|&f| mesh.is_boundary_face(f)) {
        return Err(SeifertError::NotInternal { face });
    }
    Ok(result)
}

/// Builds the problem and runs [`eliminate`].
pub fn solve(
    mesh: &Triangulation,
    graph: &DualGraph,
    gamma: &Chain1,
    strategy: TreeStrategy,
) -> Result<SeifertResult, SeifertError> {
    let problem = SeifertProblem::new(mesh, graph, gamma.clone(), strategy)?;
    eliminate(&problem)
}
