//! The complete dual graph: tetrahedron and boundary-face barycenters joined
//! by one dual edge per face and one per boundary edge.
//!
//! Node ids: tetrahedra first (`0..t`), then boundary faces in the order of
//! [`Triangulation::boundary_faces`]. Dual-edge ids: face `f` has id `f`,
//! boundary edge at slot `s` has id `|F| + s`.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::complex::{CornerData, Dsu, Triangulation};
use crate::geometry::{triple, Point3};

#[derive(Clone, Debug, Error, PartialEq)]
#[non_exhaustive]
pub enum DualError {
    #[error("tetrahedron {tet} is flat")]
    DegenerateTet { tet: usize },
    #[error("both tetrahedra of face {face} lie on the same side of it")]
    InconsistentOrientation { face: usize },
    #[error("boundary faces around edge {edge} induce the same orientation on it")]
    InconsistentBoundaryOrientation { edge: usize },
    #[error("dual graph of boundary component {component} is disconnected")]
    DisconnectedBoundaryDual { component: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum NodeKind {
    Tet(usize),
    BoundaryFace(usize),
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DualNode {
    pub kind: NodeKind,
    pub position: Point3,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum EdgeKind {
    /// Dual of a face: joins two tets, or a boundary face to its tet.
    Face(usize),
    /// Dual of a boundary edge: joins its two boundary faces.
    BoundaryEdge(usize),
}

/// An oriented dual edge; its realization runs `tail -> via -> head`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DualEdge {
    pub kind: EdgeKind,
    pub head: usize,
    pub tail: usize,
    /// Barycenter of the primal face or edge, absent on plugs.
    pub via: Option<Point3>,
}

impl DualEdge {
    pub fn is_plug(&self) -> bool {
        matches!(self.kind, EdgeKind::Face(_)) && self.via.is_none()
    }

    pub fn other(&self, node: usize) -> usize {
        if node == self.head {
            self.tail
        } else {
            self.head
        }
    }
}

/// A point of the barycentric subdivision, named by the simplex it is the
/// barycenter of. Used to cancel segments exactly.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Anchor {
    Edge(usize),
    Face(usize),
    Tet(usize),
}

impl Anchor {
    pub fn position(self, mesh: &Triangulation) -> Point3 {
        match self {
            Anchor::Edge(e) => mesh.edge_barycenter(e),
            Anchor::Face(f) => mesh.face_barycenter(f),
            Anchor::Tet(t) => mesh.tet_barycenter(t),
        }
    }
}

/// One signed triangle `[B(e), B(f), B(t)]` of a dual face.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DualTriangle {
    pub face: usize,
    pub tet: usize,
    pub sign: i64,
    pub points: [Point3; 3],
}

/// Boundary of a dual face, as symbolic segments and as a dual-graph chain.
#[derive(Clone, Debug, PartialEq)]
pub struct Coil {
    pub segments: Vec<(Anchor, Anchor, i64)>,
    pub dual: BTreeMap<usize, i64>,
}

/// The complete dual graph with orientation and geometry.
#[derive(Clone, Debug)]
pub struct DualGraph {
    n_tets: usize,
    n_faces: usize,
    nodes: Vec<DualNode>,
    dedges: Vec<DualEdge>,
    adj_offsets: Vec<usize>,
    adj_list: Vec<usize>,
    component_nodes: Vec<Vec<usize>>,
    component_dedges: Vec<Vec<usize>>,
}

impl DualGraph {
    /// Builds nodes, oriented dual edges, adjacency and per-component indices.
    pub fn build(mesh: &Triangulation) -> Result<Self, DualError> {
        let nt = mesh.n_tets();
        let nf = mesh.n_faces();

        let mut nodes: Vec<DualNode> =
            (0..nt).map(|t| DualNode { kind: NodeKind::Tet(t), position: mesh.tet_barycenter(t) }).collect();
        nodes.extend(
            mesh.boundary_faces()
                .iter()
                .map(|&f| DualNode { kind: NodeKind::BoundaryFace(f), position: mesh.face_barycenter(f) }),
        );

        let mut dedges = Vec::with_capacity(nf + mesh.boundary_edges().len());
        for f in 0..nf {
            dedges.push(face_dual(mesh, f, nt)?);
        }
        for &e in mesh.boundary_edges() {
            dedges.push(boundary_edge_dual(mesh, e, nt)?);
        }

        let mut degree = vec![0usize; nodes.len()];
        for d in &dedges {
            degree[d.head] += 1;
            degree[d.tail] += 1;
        }
        let mut adj_offsets = Vec::with_capacity(nodes.len() + 1);
        adj_offsets.push(0);
        for d in &degree {
            adj_offsets.push(adj_offsets.last().unwrap() + d);
        }
        let mut cursor = adj_offsets.clone();
        let mut adj_list = vec![0; *adj_offsets.last().unwrap()];
        for (id, d) in dedges.iter().enumerate() {
            for n in [d.head, d.tail] {
                adj_list[cursor[n]] = id;
                cursor[n] += 1;
            }
        }

        let nc = mesh.n_boundary_components();
        let mut component_nodes = vec![Vec::new(); nc];
        for (slot, &f) in mesh.boundary_faces().iter().enumerate() {
            component_nodes[mesh.face_component(f).unwrap()].push(nt + slot);
        }
        let mut component_dedges = vec![Vec::new(); nc];
        for (slot, &e) in mesh.boundary_edges().iter().enumerate() {
            component_dedges[mesh.edge_component(e).unwrap()].push(nf + slot);
        }

        let graph = DualGraph {
            n_tets: nt,
            n_faces: nf,
            nodes,
            dedges,
            adj_offsets,
            adj_list,
            component_nodes,
            component_dedges,
        };
        for c in 0..nc {
            let mut dsu = Dsu::new(graph.nodes.len());
            for &d in &graph.component_dedges[c] {
                dsu.union(graph.dedges[d].head, graph.dedges[d].tail);
            }
            let nodes = &graph.component_nodes[c];
            let root = dsu.find(nodes[0]);
            if nodes.iter().any(|&n| dsu.find(n) != root) {
                return Err(DualError::DisconnectedBoundaryDual { component: c });
            }
        }
        Ok(graph)
    }

    pub fn n_nodes(&self) -> usize {
        self.nodes.len()
    }
    pub fn n_dedges(&self) -> usize {
        self.dedges.len()
    }
    pub fn n_tet_nodes(&self) -> usize {
        self.n_tets
    }
    /// Number of face duals, which occupy dual-edge ids `0..n_face_dedges`.
    pub fn n_face_dedges(&self) -> usize {
        self.n_faces
    }
    pub fn nodes(&self) -> &[DualNode] {
        &self.nodes
    }
    pub fn node(&self, n: usize) -> &DualNode {
        &self.nodes[n]
    }
    pub fn dedges(&self) -> &[DualEdge] {
        &self.dedges
    }
    pub fn dedge(&self, d: usize) -> &DualEdge {
        &self.dedges[d]
    }

    /// Dual edges incident on node `n`, ascending by id.
    pub fn incident(&self, n: usize) -> &[usize] {
        &self.adj_list[self.adj_offsets[n]..self.adj_offsets[n + 1]]
    }

    pub fn n_components(&self) -> usize {
        self.component_nodes.len()
    }
    /// Boundary-face nodes of component `c`, ascending.
    pub fn component_nodes(&self, c: usize) -> &[usize] {
        &self.component_nodes[c]
    }
    /// Boundary-edge duals of component `c`, ascending.
    pub fn component_dedges(&self, c: usize) -> &[usize] {
        &self.component_dedges[c]
    }

    pub fn tet_node(&self, t: usize) -> usize {
        t
    }

    pub fn boundary_face_node(&self, mesh: &Triangulation, f: usize) -> Option<usize> {
        mesh.boundary_face_slot(f).map(|s| self.n_tets + s)
    }

    pub fn face_dedge(&self, f: usize) -> usize {
        f
    }

    pub fn boundary_edge_dedge(&self, mesh: &Triangulation, e: usize) -> Option<usize> {
        mesh.boundary_edge_slot(e).map(|s| self.n_faces + s)
    }

    pub fn is_tet_node(&self, n: usize) -> bool {
        n < self.n_tets
    }

    /// Ordered points of the realization of dual edge `d`, tail first.
    pub fn polyline(&self, d: usize) -> Vec<Point3> {
        let de = &self.dedges[d];
        let mut out = vec![self.nodes[de.tail].position];
        if let Some(v) = de.via {
            out.push(v);
        }
        out.push(self.nodes[de.head].position);
        out
    }

    /// `∂` of a dual 1-chain, as node -> coefficient.
    pub fn chain_boundary(&self, chain: &BTreeMap<usize, i64>) -> BTreeMap<usize, i64> {
        let mut out = BTreeMap::new();
        for (&d, &c) in chain {
            *out.entry(self.dedges[d].head).or_insert(0) += c;
            *out.entry(self.dedges[d].tail).or_insert(0) -= c;
        }
        out.retain(|_, c| *c != 0);
        out
    }
}

/// Builds the complete dual graph.
pub fn build_dual(mesh: &Triangulation) -> Result<DualGraph, DualError> {
    DualGraph::build(mesh)
}

/// Sign of `ν(f) · (d - a)` where `ν(f) = (b - a) × (c - a)` and `d` is the
/// vertex of `t` opposite `f`.
fn side_of_face(mesh: &Triangulation, f: usize, t: usize) -> Result<i64, DualError> {
    let [a, b, c] = mesh.face(f).map(|v| mesh.vertex(v));
    let d = mesh.vertex(mesh.opposite_vertex(t, f));
    let s = triple(b - a, c - a, d - a);
    if s > 0.0 {
        Ok(1)
    } else if s < 0.0 {
        Ok(-1)
    } else {
        Err(DualError::DegenerateTet { tet: t })
    }
}

fn face_dual(mesh: &Triangulation, f: usize, nt: usize) -> Result<DualEdge, DualError> {
    match *mesh.face_tets(f) {
        [t] => {
            let bnode = nt + mesh.boundary_face_slot(f).unwrap();
            let (head, tail) = if side_of_face(mesh, f, t)? > 0 { (t, bnode) } else { (bnode, t) };
            Ok(DualEdge { kind: EdgeKind::Face(f), head, tail, via: None })
        }
        [t1, t2] => {
            let s1 = side_of_face(mesh, f, t1)?;
            let s2 = side_of_face(mesh, f, t2)?;
            if s1 == s2 {
                return Err(DualError::InconsistentOrientation { face: f });
            }
            let (head, tail) = if s1 > 0 { (t1, t2) } else { (t2, t1) };
            Ok(DualEdge { kind: EdgeKind::Face(f), head, tail, via: Some(mesh.face_barycenter(f)) })
        }
        _ => unreachable!("faces have one or two tets"),
    }
}

/// Orientation of boundary face `f` that makes its normal point away from
/// its tet: `+1` if the ascending orientation already does.
pub(crate) fn outward_sign(mesh: &Triangulation, f: usize) -> Result<i64, DualError> {
    let t = mesh.face_tets(f)[0];
    Ok(-side_of_face(mesh, f, t)?)
}

/// Boundary faces around boundary edge `e` as `(left, right)`: the left one
/// induces the ascending orientation of `e` when oriented outward.
pub(crate) fn left_right(mesh: &Triangulation, e: usize) -> Result<(usize, usize), DualError> {
    let [f1, f2] = mesh.boundary_faces_of_edge(e).expect("boundary edge");
    let s1 = outward_sign(mesh, f1)? * mesh.edge_face_sign(e, f1);
    let s2 = outward_sign(mesh, f2)? * mesh.edge_face_sign(e, f2);
    if s1 == s2 {
        return Err(DualError::InconsistentBoundaryOrientation { edge: e });
    }
    Ok(if s1 > 0 { (f1, f2) } else { (f2, f1) })
}

fn boundary_edge_dual(mesh: &Triangulation, e: usize, nt: usize) -> Result<DualEdge, DualError> {
    let (left, right) = left_right(mesh, e)?;
    Ok(DualEdge {
        kind: EdgeKind::BoundaryEdge(e),
        head: nt + mesh.boundary_face_slot(right).unwrap(),
        tail: nt + mesh.boundary_face_slot(left).unwrap(),
        via: Some(mesh.edge_barycenter(e)),
    })
}

fn signum(x: f64) -> i64 {
    if x > 0.0 {
        1
    } else if x < 0.0 {
        -1
    } else {
        0
    }
}

/// The dual face of edge `e`: triangles `[B(e), B(f), B(t)]` for every face
/// `f` on `e` and tet `t` on `f`, each signed by `τ(e) · ν(triangle)`.
pub fn dual_face(mesh: &Triangulation, e: usize) -> Vec<DualTriangle> {
    let [v, w] = mesh.edge(e);
    let tau = mesh.vertex(w) - mesh.vertex(v);
    let be = mesh.edge_barycenter(e);
    let mut out = Vec::new();
    for &f in mesh.edge_faces(e) {
        let bf = mesh.face_barycenter(f);
        for &t in mesh.face_tets(f) {
            let bt = mesh.tet_barycenter(t);
            let sign = signum(tau.dot((bf - be).cross(bt - be)));
            out.push(DualTriangle { face: f, tet: t, sign, points: [be, bf, bt] });
        }
    }
    out
}

/// Boundary of the dual face of `e`, with spokes `[B(e), B(t)]` cancelled.
///
/// The surviving half-segments are reassembled into whole dual edges. An
/// error means the half-segment signs disagree with the stored orientation.
pub fn coil(mesh: &Triangulation, graph: &DualGraph, e: usize) -> Result<Coil, DualError> {
    let mut seg: BTreeMap<(Anchor, Anchor), i64> = BTreeMap::new();
    let mut add = |p: Anchor, q: Anchor, c: i64| {
        let (key, c) = if p <= q { ((p, q), c) } else { ((q, p), -c) };
        *seg.entry(key).or_insert(0) += c;
    };
    for tri in dual_face(mesh, e) {
        let (p, q, r) = (Anchor::Edge(e), Anchor::Face(tri.face), Anchor::Tet(tri.tet));
        add(q, r, tri.sign);
        add(p, r, -tri.sign);
        add(p, q, tri.sign);
    }
    seg.retain(|_, c| *c != 0);

    let mut dual: BTreeMap<usize, i64> = BTreeMap::new();
    let mut assign = |d: usize, c: i64| -> Result<(), DualError> {
        match dual.insert(d, c) {
            Some(prev) if prev != c => Err(DualError::InconsistentOrientation { face: d }),
            _ => Ok(()),
        }
    };
    for (&(p, q), &c) in &seg {
        match (p, q) {
            (Anchor::Face(f), Anchor::Tet(t)) => {
                // B(f) -> B(t) runs along D(f) exactly when t is its head.
                let c = if graph.dedge(f).head == t { c } else { -c };
                assign(f, c)?;
            }
            (Anchor::Edge(edge), Anchor::Face(f)) => {
                let d =
                    graph.boundary_edge_dedge(mesh, edge).ok_or(DualError::InconsistentBoundaryOrientation { edge })?;
                let de = graph.dedge(d);
                // D∂ runs left -> B(e) -> right, so [B(e), B(f)] enters it
                // with +1 on the right face and -1 on the left face.
                let right = graph.node(de.head).kind == NodeKind::BoundaryFace(f);
                assign(d, if right { c } else { -c })?;
            }
            _ => return Err(DualError::InconsistentOrientation { face: usize::MAX }),
        }
    }
    Ok(Coil { segments: seg.into_iter().map(|((p, q), c)| (p, q, c)).collect(), dual })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PlugKind {
    Regular,
    Corner,
}

/// A set of plugs, stored as face-dual ids.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlugSet {
    plugs: BTreeMap<usize, PlugKind>,
}

impl PlugSet {
    pub fn contains(&self, d: usize) -> bool {
        self.plugs.contains_key(&d)
    }
    pub fn len(&self) -> usize {
        self.plugs.len()
    }
    pub fn is_empty(&self) -> bool {
        self.plugs.is_empty()
    }
    pub fn iter(&self) -> impl Iterator<Item = (usize, PlugKind)> + '_ {
        self.plugs.iter().map(|(&d, &k)| (d, k))
    }
    pub fn dedges(&self) -> impl Iterator<Item = usize> + '_ {
        self.plugs.keys().copied()
    }
}

/// Smallest face id among the candidates.
pub fn smallest_face(_tet: usize, candidates: &[usize]) -> usize {
    candidates[0]
}

/// All regular plugs plus one corner plug per corner tetrahedron, the
/// latter picked by `chooser(tet, corner_faces_of_tet)`.
pub fn maximal_plug_set<F>(mesh: &Triangulation, corners: &CornerData, chooser: F) -> PlugSet
where
    F: Fn(usize, &[usize]) -> usize,
{
    let mut plugs = BTreeMap::new();
    let mut per_corner_tet: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for &f in mesh.boundary_faces() {
        let t = mesh.face_tets(f)[0];
        if corners.is_corner_tet(t) {
            per_corner_tet.entry(t).or_default().push(f);
        } else {
            plugs.insert(f, PlugKind::Regular);
        }
    }
    for (t, faces) in per_corner_tet {
        let f = chooser(t, &faces);
        assert!(faces.contains(&f), "chooser returned a face outside the candidates");
        plugs.insert(f, PlugKind::Corner);
    }
    PlugSet { plugs }
}

/// Realizes a dual 1-chain as oriented segments `(start, end, coefficient)`.
pub fn realize(graph: &DualGraph, chain: &BTreeMap<usize, i64>) -> Vec<(Point3, Point3, i64)> {
    let mut out = Vec::with_capacity(chain.len() * 2);
    for (&d, &c) in chain {
        let pts = graph.polyline(d);
        for w in pts.windows(2) {
            out.push((w[0], w[1], c));
        }
    }
    out
}
