//! Spanning trees of the dual graph and their fundamental cycles.

use std::collections::{BTreeMap, VecDeque};
use std::sync::OnceLock;

use thiserror::Error;

use crate::complex::{CornerData, Dsu, Triangulation};
use crate::dual::{DualGraph, PlugSet};

#[derive(Clone, Debug, Error, PartialEq, Eq)]
#[non_exhaustive]
pub enum TreeError {
    #[error("dual graph is not connected ({reached} of {total} nodes reachable)")]
    NotConnected { reached: usize, total: usize },
    #[error("edge set has {edges} edges but a spanning tree on {nodes} nodes needs {}", nodes - 1)]
    WrongEdgeCount { edges: usize, nodes: usize },
    #[error("unknown dual edge {0}")]
    UnknownDedge(usize),
}

/// Link from a node to its parent: `delta * dedge` runs child -> parent.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ParentLink {
    pub node: usize,
    pub dedge: usize,
    pub delta: i64,
}

/// A rooted spanning tree of the dual graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpanningTree {
    root: usize,
    parent: Vec<Option<ParentLink>>,
    depth: Vec<usize>,
    in_tree: Vec<bool>,
    n_tree: usize,
}

impl SpanningTree {
    /// Roots the edge set at `root`. Fails unless the edges form a spanning
    /// tree of the dual graph.
    pub fn from_edges(graph: &DualGraph, edges: &[usize], root: usize) -> Result<Self, TreeError> {
        let n = graph.n_nodes();
        let mut in_tree = vec![false; graph.n_dedges()];
        for &d in edges {
            if d >= graph.n_dedges() {
                return Err(TreeError::UnknownDedge(d));
            }
            in_tree[d] = true;
        }
        let count = in_tree.iter().filter(|&&b| b).count();
        if count + 1 != n {
            return Err(TreeError::WrongEdgeCount { edges: count, nodes: n });
        }
        let mut parent = vec![None; n];
        let mut depth = vec![0usize; n];
        let mut seen = vec![false; n];
        seen[root] = true;
        let mut queue = VecDeque::from([root]);
        let mut reached = 1;
        while let Some(u) = queue.pop_front() {
            for &d in graph.incident(u) {
                if !in_tree[d] {
                    continue;
                }
                let de = graph.dedge(d);
                let v = de.other(u);
                if seen[v] {
                    continue;
                }
                seen[v] = true;
                reached += 1;
                // Child v, parent u: +d if d already points v -> u.
                let delta = if de.tail == v { 1 } else { -1 };
                parent[v] = Some(ParentLink { node: u, dedge: d, delta });
                depth[v] = depth[u] + 1;
                queue.push_back(v);
            }
        }
        if reached != n {
            return Err(TreeError::NotConnected { reached, total: n });
        }
        Ok(SpanningTree { root, parent, depth, in_tree, n_tree: count })
    }

    pub fn root(&self) -> usize {
        self.root
    }
    pub fn parent(&self, node: usize) -> Option<ParentLink> {
        self.parent[node]
    }
    pub fn depth(&self, node: usize) -> usize {
        self.depth[node]
    }
    pub fn contains(&self, d: usize) -> bool {
        self.in_tree[d]
    }
    pub fn len(&self) -> usize {
        self.n_tree
    }
    pub fn is_empty(&self) -> bool {
        self.n_tree == 0
    }
    /// Tree dual-edge ids, ascending.
    pub fn dedges(&self) -> impl Iterator<Item = usize> + '_ {
        self.in_tree.iter().enumerate().filter(|(_, &b)| b).map(|(d, _)| d)
    }

    /// Fundamental cycle of `d`: `d` plus the tree path from its head back
    /// to its tail. Empty when `d` is a tree edge.
    pub fn tree_cycle(&self, graph: &DualGraph, d: usize) -> Result<BTreeMap<usize, i64>, TreeError> {
        if d >= graph.n_dedges() {
            return Err(TreeError::UnknownDedge(d));
        }
        let mut out = BTreeMap::new();
        if self.in_tree[d] {
            return Ok(out);
        }
        out.insert(d, 1);
        let de = graph.dedge(d);
        let (mut u, mut w) = (de.head, de.tail);
        let climb = |node: &mut usize, sign: i64, out: &mut BTreeMap<usize, i64>| {
            let link = self.parent[*node].expect("non-root node has a parent");
            *out.entry(link.dedge).or_insert(0) += sign * link.delta;
            *node = link.node;
        };
        while self.depth[u] > self.depth[w] {
            climb(&mut u, 1, &mut out);
        }
        while self.depth[w] > self.depth[u] {
            climb(&mut w, -1, &mut out);
        }
        while u != w {
            climb(&mut u, 1, &mut out);
            climb(&mut w, -1, &mut out);
        }
        out.retain(|_, c| *c != 0);
        Ok(out)
    }
}

/// Which construction produced a tree.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TreeStrategy {
    Bfs1,
    Bfs2,
}

impl std::fmt::Display for TreeStrategy {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            TreeStrategy::Bfs1 => "bfs1",
            TreeStrategy::Bfs2 => "bfs2",
        })
    }
}

/// A Seifert tree whose face-dual part is known up front; the boundary
/// spanning trees are only grown when the full tree is first requested.
#[derive(Debug)]
pub struct LazyTree {
    face_in_tree: Vec<bool>,
    face_dedges: Vec<usize>,
    full: OnceLock<Result<SpanningTree, TreeError>>,
}

impl LazyTree {
    fn from_face_dedges(n_faces: usize, mut face_dedges: Vec<usize>) -> Self {
        face_dedges.sort_unstable();
        let mut face_in_tree = vec![false; n_faces];
        for &d in &face_dedges {
            face_in_tree[d] = true;
        }
        LazyTree { face_in_tree, face_dedges, full: OnceLock::new() }
    }

    /// Wraps an already-built tree.
    pub fn from_tree(graph: &DualGraph, tree: SpanningTree) -> Self {
        let faces: Vec<usize> = tree.dedges().filter(|&d| d < graph.n_face_dedges()).collect();
        let lazy = Self::from_face_dedges(graph.n_face_dedges(), faces);
        let _ = lazy.full.set(Ok(tree));
        lazy
    }

    /// Whether the dual of face `f` is a tree edge.
    pub fn face_in_tree(&self, f: usize) -> bool {
        self.face_in_tree[f]
    }

    /// Face duals in the tree, ascending.
    pub fn face_dedges(&self) -> &[usize] {
        &self.face_dedges
    }

    /// Whether the boundary trees have been grown yet.
    pub fn is_materialized(&self) -> bool {
        self.full.get().is_some()
    }

    /// The full spanning tree, adding BFS trees of every boundary dual graph.
    pub fn tree(&self, graph: &DualGraph) -> Result<&SpanningTree, TreeError> {
        self.full
            .get_or_init(|| {
                let mut edges = self.face_dedges.clone();
                for c in 0..graph.n_components() {
                    edges.extend(boundary_bfs(graph, c));
                }
                SpanningTree::from_edges(graph, &edges, 0)
            })
            .as_ref()
            .map_err(Clone::clone)
    }
}

/// BFS tree of the dual graph of boundary component `c`, rooted at its
/// smallest node.
fn boundary_bfs(graph: &DualGraph, c: usize) -> Vec<usize> {
    let nodes = graph.component_nodes(c);
    let mut seen = vec![false; graph.n_nodes()];
    let mut out = Vec::with_capacity(nodes.len().saturating_sub(1));
    let root = nodes[0];
    seen[root] = true;
    let mut queue = VecDeque::from([root]);
    let nf = graph.n_face_dedges();
    while let Some(u) = queue.pop_front() {
        for &d in graph.incident(u) {
            if d < nf {
                continue;
            }
            let v = graph.dedge(d).other(u);
            if !seen[v] {
                seen[v] = true;
                out.push(d);
                queue.push_back(v);
            }
        }
    }
    out
}

/// Face duals between tets reached by BFS from `seeds`, in BFS order.
fn tet_bfs(graph: &DualGraph, seeds: &[usize], seen: &mut [bool]) -> Vec<usize> {
    let mut out = Vec::new();
    let mut queue: VecDeque<usize> = VecDeque::new();
    for &s in seeds {
        if !seen[s] {
            seen[s] = true;
            queue.push_back(s);
        }
    }
    let nf = graph.n_face_dedges();
    while let Some(u) = queue.pop_front() {
        for &d in graph.incident(u) {
            if d >= nf {
                break;
            }
            let v = graph.dedge(d).other(u);
            if graph.is_tet_node(v) && !seen[v] {
                seen[v] = true;
                out.push(d);
                queue.push_back(v);
            }
        }
    }
    out
}

/// BFS₁ face part: a BFS tree of the tet graph from tet 0 and, for every
/// boundary component, the plug of its smallest face.
pub fn bfs1_plan(mesh: &Triangulation, graph: &DualGraph) -> Result<LazyTree, TreeError> {
    let nt = graph.n_tet_nodes();
    let mut seen = vec![false; nt];
    let mut faces = tet_bfs(graph, &[0], &mut seen);
    if faces.len() + 1 != nt {
        return Err(TreeError::NotConnected { reached: faces.len() + 1, total: nt });
    }
    for c in 0..graph.n_components() {
        let f = mesh
            .boundary_faces()
            .iter()
            .copied()
            .find(|&f| mesh.face_component(f) == Some(c))
            .expect("component has a face");
        faces.push(f);
    }
    Ok(LazyTree::from_face_dedges(graph.n_face_dedges(), faces))
}

/// BFS₂ face part: every plug of `plugs`, a multi-source BFS over tets
/// seeded by all tets that touch the boundary, then Kruskal over the
/// remaining face duals in ascending id until the graph is spanned.
pub fn bfs2_plan(mesh: &Triangulation, graph: &DualGraph, plugs: &PlugSet) -> Result<LazyTree, TreeError> {
    let nt = graph.n_tet_nodes();
    let mut faces: Vec<usize> = plugs.dedges().collect();
    let mut seeds: Vec<usize> = mesh.boundary_faces().iter().map(|&f| mesh.face_tets(f)[0]).collect();
    seeds.sort_unstable();
    seeds.dedup();
    let mut seen = vec![false; nt];
    faces.extend(tet_bfs(graph, &seeds, &mut seen));

    // Boundary components act as single blocks once their trees exist.
    let mut dsu = Dsu::new(graph.n_nodes());
    for c in 0..graph.n_components() {
        let nodes = graph.component_nodes(c);
        for &n in &nodes[1..] {
            dsu.union(nodes[0], n);
        }
    }
    let mut blocks = nt + graph.n_components();
    for &d in &faces {
        let de = graph.dedge(d);
        if dsu.union(de.head, de.tail) {
            blocks -= 1;
        }
    }
    for d in 0..graph.n_face_dedges() {
        if blocks == 1 {
            break;
        }
        let de = graph.dedge(d);
        if dsu.union(de.head, de.tail) {
            faces.push(d);
            blocks -= 1;
        }
    }
    if blocks != 1 {
        let root = dsu.find(0);
        let reached = (0..graph.n_nodes()).filter(|&n| dsu.find(n) == root).count();
        return Err(TreeError::NotConnected { reached, total: graph.n_nodes() });
    }
    Ok(LazyTree::from_face_dedges(graph.n_face_dedges(), faces))
}

pub fn bfs1_tree(mesh: &Triangulation, graph: &DualGraph) -> Result<SpanningTree, TreeError> {
    bfs1_plan(mesh, graph)?.tree(graph).cloned()
}

pub fn bfs2_tree(mesh: &Triangulation, graph: &DualGraph, plugs: &PlugSet) -> Result<SpanningTree, TreeError> {
    bfs2_plan(mesh, graph, plugs)?.tree(graph).cloned()
}

/// BFS over the whole dual graph from node 0, ignoring boundary structure.
pub fn plain_bfs_tree(graph: &DualGraph) -> Result<SpanningTree, TreeError> {
    let n = graph.n_nodes();
    let mut seen = vec![false; n];
    seen[0] = true;
    let mut edges = Vec::with_capacity(n - 1);
    let mut queue = VecDeque::from([0usize]);
    while let Some(u) = queue.pop_front() {
        for &d in graph.incident(u) {
            let v = graph.dedge(d).other(u);
            if !seen[v] {
                seen[v] = true;
                edges.push(d);
                queue.push_back(v);
            }
        }
    }
    SpanningTree::from_edges(graph, &edges, 0)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TreeClassification {
    pub is_seifert: bool,
    pub is_strongly_seifert: bool,
    /// Face duals in the tree.
    pub face_dedges: usize,
    /// `t + p`, the face-dual count of any Seifert tree.
    pub seifert_face_dedges: usize,
}

impl TreeClassification {
    /// The count criterion agrees with the structural one.
    pub fn rank_identity_consistent(&self) -> bool {
        self.is_seifert == (self.face_dedges == self.seifert_face_dedges)
    }
}

/// Checks whether the tree restricts to a spanning tree on every boundary
/// dual graph, and whether it also holds a maximal plug-set.
pub fn classify_tree(
    mesh: &Triangulation,
    graph: &DualGraph,
    tree: &SpanningTree,
    corners: &CornerData,
) -> TreeClassification {
    let mut is_seifert = true;
    for c in 0..graph.n_components() {
        let nodes = graph.component_nodes(c);
        let mut dsu = Dsu::new(graph.n_nodes());
        let mut count = 0;
        for &d in graph.component_dedges(c) {
            if tree.contains(d) {
                let de = graph.dedge(d);
                dsu.union(de.head, de.tail);
                count += 1;
            }
        }
        let root = dsu.find(nodes[0]);
        if count + 1 != nodes.len() || nodes.iter().any(|&n| dsu.find(n) != root) {
            is_seifert = false;
        }
    }

    let mut has_all_plugs = true;
    let mut corner_covered: BTreeMap<usize, bool> = corners.tets.iter().map(|&t| (t, false)).collect();
    for &f in mesh.boundary_faces() {
        let t = mesh.face_tets(f)[0];
        if corners.is_corner_tet(t) {
            if tree.contains(f) {
                corner_covered.insert(t, true);
            }
        } else if !tree.contains(f) {
            has_all_plugs = false;
        }
    }
    let has_maximal_plug_set = has_all_plugs && corner_covered.values().all(|&b| b);

    let face_dedges = tree.dedges().filter(|&d| d < graph.n_face_dedges()).count();
    TreeClassification {
        is_seifert,
        is_strongly_seifert: is_seifert && has_maximal_plug_set,
        face_dedges,
        seifert_face_dedges: mesh.n_tets() + mesh.p(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dual::{build_dual, maximal_plug_set, smallest_face};
    use crate::generate::{hollow_cube, kuhn_cube};

    fn kuhn(n: usize) -> (Triangulation, DualGraph) {
        let m = kuhn_cube(n).unwrap().build().unwrap();
        let g = build_dual(&m).unwrap();
        (m, g)
    }

    #[test]
    fn fundamental_cycles_are_closed() {
        let (m, g) = kuhn(2);
        let tree = bfs1_tree(&m, &g).unwrap();
        for d in 0..g.n_dedges() {
            let cycle = tree.tree_cycle(&g, d).unwrap();
            assert!(g.chain_boundary(&cycle).is_empty(), "dual edge {d}");
            assert_eq!(cycle.is_empty(), tree.contains(d));
            if !cycle.is_empty() {
                assert_eq!(cycle[&d], 1);
            }
        }
    }

    #[test]
    fn bfs_trees_are_seifert() {
        for (m, g) in [kuhn(1), kuhn(2)] {
            let corners = m.classify_corners();
            let plugs = maximal_plug_set(&m, &corners, smallest_face);
            let t1 = bfs1_tree(&m, &g).unwrap();
            let t2 = bfs2_tree(&m, &g, &plugs).unwrap();
            let c1 = classify_tree(&m, &g, &t1, &corners);
            let c2 = classify_tree(&m, &g, &t2, &corners);
            assert!(c1.is_seifert && c1.rank_identity_consistent());
            assert!(c2.is_strongly_seifert && c2.rank_identity_consistent());
            assert_eq!(t1.len() + 1, g.n_nodes());
        }
    }

    #[test]
    fn plain_bfs_is_not_seifert_on_a_hollow_cube() {
        let m = hollow_cube(3).unwrap().build().unwrap();
        let g = build_dual(&m).unwrap();
        let corners = m.classify_corners();
        let c = classify_tree(&m, &g, &plain_bfs_tree(&g).unwrap(), &corners);
        assert!(!c.is_seifert);
        assert!(c.rank_identity_consistent());
    }

    #[test]
    fn lazy_tree_grows_boundary_part_on_demand() {
        let (m, g) = kuhn(2);
        let lazy = bfs1_plan(&m, &g).unwrap();
        assert!(!lazy.is_materialized());
        assert_eq!(lazy.face_dedges().len(), m.n_tets() + m.p());
        let tree = lazy.tree(&g).unwrap();
        assert!(lazy.is_materialized());
        assert!(lazy.face_dedges().iter().all(|&d| tree.contains(d)));
    }

    #[test]
    fn rejects_non_trees() {
        let (_, g) = kuhn(1);
        assert!(matches!(SpanningTree::from_edges(&g, &[0], 0), Err(TreeError::WrongEdgeCount { .. })));
        assert_eq!(SpanningTree::from_edges(&g, &[usize::MAX], 0), Err(TreeError::UnknownDedge(usize::MAX)));
    }
}
