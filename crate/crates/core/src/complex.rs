//! Tetrahedral simplicial complexes and their integer chain groups.
//!
//! Every simplex is stored with its vertex ids sorted ascending, and that
//! ascending order *is* its orientation. Tetrahedra keep their input
//! positions as ids; edge and face ids are positions in lexicographically
//! sorted lists.

use std::collections::BTreeMap;
use std::ops::{Add, Neg, Sub};

use thiserror::Error;

use crate::geometry::Point3;

/// Errors raised while assembling a [`Triangulation`].
#[derive(Clone, Debug, Error, PartialEq, Eq)]
#[non_exhaustive]
pub enum ComplexError {
    #[error("mesh has no tetrahedra")]
    Empty,
    #[error("tetrahedron {tet} references vertex {vertex} but only {count} vertices exist")]
    DanglingVertexId { tet: usize, vertex: usize, count: usize },
    #[error("tetrahedron {tet} repeats vertex {vertex}")]
    DegenerateTet { tet: usize, vertex: usize },
    #[error("tetrahedra {first} and {second} have the same vertex set")]
    DuplicateTet { first: usize, second: usize },
    #[error("vertex {vertex} has a non-finite coordinate")]
    NonFiniteCoordinate { vertex: usize },
    #[error("vertex {vertex} is not used by any tetrahedron")]
    IsolatedVertex { vertex: usize },
    #[error("face {face:?} is shared by {count} tetrahedra (expected 1 or 2)")]
    NonManifoldFace { face: [usize; 3], count: usize },
    #[error("boundary edge {edge:?} has {count} incident boundary faces (expected 2)")]
    NonManifoldBoundary { edge: [usize; 2], count: usize },
}

/// A sparse integer `K`-chain: a formal sum of oriented `K`-simplices.
///
/// Zero coefficients are never stored; iteration is in ascending simplex id.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Chain<const K: usize> {
    coeffs: BTreeMap<usize, i64>,
}

pub type Chain0 = Chain<0>;
pub type Chain1 = Chain<1>;
pub type Chain2 = Chain<2>;
pub type Chain3 = Chain<3>;

impl<const K: usize> Chain<K> {
    pub fn new() -> Self {
        Chain { coeffs: BTreeMap::new() }
    }

    /// Single simplex with coefficient `coef`.
    pub fn unit(idx: usize, coef: i64) -> Self {
        let mut c = Self::new();
        c.add_term(idx, coef);
        c
    }

    /// Adds `coef` to the coefficient of simplex `idx`, dropping it if it
    /// cancels to zero.
    pub fn add_term(&mut self, idx: usize, coef: i64) {
        if coef == 0 {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.coeffs.entry(idx) {
            Entry::Vacant(v) => {
                v.insert(coef);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += coef;
                if *o.get() == 0 {
                    o.remove();
                }
            }
        }
    }

    /// Overwrites the coefficient of `idx`.
    pub fn set(&mut self, idx: usize, coef: i64) {
        if coef == 0 {
            self.coeffs.remove(&idx);
        } else {
            self.coeffs.insert(idx, coef);
        }
    }

    pub fn get(&self, idx: usize) -> i64 {
        self.coeffs.get(&idx).copied().unwrap_or(0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, i64)> + '_ {
        self.coeffs.iter().map(|(&i, &c)| (i, c))
    }

    /// Simplex ids with nonzero coefficient, ascending.
    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.coeffs.keys().copied()
    }

    /// Number of simplices with nonzero coefficient.
    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn scaled(&self, k: i64) -> Self {
        if k == 0 {
            return Self::new();
        }
        Chain { coeffs: self.coeffs.iter().map(|(&i, &c)| (i, c * k)).collect() }
    }

    pub fn max_abs_coefficient(&self) -> i64 {
        self.coeffs.values().map(|c| c.abs()).max().unwrap_or(0)
    }
}

impl<const K: usize> FromIterator<(usize, i64)> for Chain<K> {
    fn from_iter<I: IntoIterator<Item = (usize, i64)>>(iter: I) -> Self {
        let mut c = Chain::new();
        for (i, k) in iter {
            c.add_term(i, k);
        }
        c
    }
}

impl<const K: usize> Add for &Chain<K> {
    type Output = Chain<K>;
    fn add(self, o: &Chain<K>) -> Chain<K> {
        let mut out = self.clone();
        for (i, c) in o.iter() {
            out.add_term(i, c);
        }
        out
    }
}

impl<const K: usize> Add for Chain<K> {
    type Output = Chain<K>;
    fn add(self, o: Chain<K>) -> Chain<K> {
        &self + &o
    }
}

impl<const K: usize> Sub for &Chain<K> {
    type Output = Chain<K>;
    fn sub(self, o: &Chain<K>) -> Chain<K> {
        let mut out = self.clone();
        for (i, c) in o.iter() {
            out.add_term(i, -c);
        }
        out
    }
}

impl<const K: usize> Sub for Chain<K> {
    type Output = Chain<K>;
    fn sub(self, o: Chain<K>) -> Chain<K> {
        &self - &o
    }
}

impl<const K: usize> Neg for Chain<K> {
    type Output = Chain<K>;
    fn neg(self) -> Chain<K> {
        self.scaled(-1)
    }
}

/// Simplex counts `(tets, faces, edges, vertices)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MeshCounts {
    pub tets: usize,
    pub faces: usize,
    pub edges: usize,
    pub vertices: usize,
}

impl MeshCounts {
    pub fn as_tuple(&self) -> (usize, usize, usize, usize) {
        (self.tets, self.faces, self.edges, self.vertices)
    }
}

/// Sign of the `i`-th facet in the boundary formula of a simplex
/// (facet `i` omits vertex `i`).
#[inline]
fn facet_sign(i: usize) -> i64 {
    if i.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// A tetrahedral mesh of a polyhedral domain with all incidence data derived.
#[derive(Clone, Debug)]
pub struct Triangulation {
    vertices: Vec<Point3>,
    tets: Vec<[usize; 4]>,
    /// Tet ids in lexicographic order of their vertex tuples.
    tet_order: Vec<usize>,
    edges: Vec<[usize; 2]>,
    faces: Vec<[usize; 3]>,
    /// Facet `i` of a tet omits its `i`-th vertex.
    tet_faces: Vec<[usize; 4]>,
    /// Facet `i` of a face omits its `i`-th vertex: `[bc, ac, ab]`.
    face_edges: Vec<[usize; 3]>,
    face_tet_pair: Vec<[usize; 2]>,
    face_tet_count: Vec<u8>,
    edge_face_offsets: Vec<usize>,
    edge_face_list: Vec<usize>,
    boundary_faces: Vec<usize>,
    boundary_edges: Vec<usize>,
    boundary_vertices: Vec<usize>,
    face_boundary_slot: Vec<Option<usize>>,
    edge_boundary_slot: Vec<Option<usize>>,
    vertex_on_boundary: Vec<bool>,
    face_component: Vec<Option<usize>>,
    edge_component: Vec<Option<usize>>,
    vertex_component: Vec<Option<usize>>,
    n_components: usize,
}

impl Triangulation {
    /// Builds the complex from vertex coordinates and tetrahedra.
    ///
    /// Vertex order is the total order that orients every simplex. Boundary
    /// components are the connected components of boundary faces glued
    /// along boundary edges; component 0 contains the boundary face whose
    /// barycenter is lexicographically largest.
    pub fn new(vertices: Vec<Point3>, tets: &[[usize; 4]]) -> Result<Self, ComplexError> {
        if tets.is_empty() {
            return Err(ComplexError::Empty);
        }
        let nv = vertices.len();
        if let Some(v) = vertices.iter().position(|p| !p.is_finite()) {
            return Err(ComplexError::NonFiniteCoordinate { vertex: v });
        }

        let mut sorted_tets = Vec::with_capacity(tets.len());
        let mut used = vec![false; nv];
        for (ti, t) in tets.iter().enumerate() {
            for &v in t {
                if v >= nv {
                    return Err(ComplexError::DanglingVertexId { tet: ti, vertex: v, count: nv });
                }
                used[v] = true;
            }
            let mut s = *t;
            s.sort_unstable();
            if let Some(w) = s.windows(2).find(|w| w[0] == w[1]) {
                return Err(ComplexError::DegenerateTet { tet: ti, vertex: w[0] });
            }
            sorted_tets.push(s);
        }
        if let Some(v) = used.iter().position(|u| !u) {
            return Err(ComplexError::IsolatedVertex { vertex: v });
        }

        let mut order: Vec<usize> = (0..sorted_tets.len()).collect();
        order.sort_by(|&a, &b| sorted_tets[a].cmp(&sorted_tets[b]).then(a.cmp(&b)));
        for w in order.windows(2) {
            if sorted_tets[w[0]] == sorted_tets[w[1]] {
                return Err(ComplexError::DuplicateTet { first: w[0], second: w[1] });
            }
        }
        let tets = sorted_tets;
        let tet_order = order;

        // Faces, grouped with their incident tets.
        let mut face_incidences: Vec<([usize; 3], usize, usize)> = Vec::with_capacity(tets.len() * 4);
        for (ti, t) in tets.iter().enumerate() {
            for skip in 0..4 {
                face_incidences.push((drop_index3(t, skip), ti, skip));
            }
        }
        face_incidences.sort_unstable();
        let mut faces: Vec<[usize; 3]> = Vec::new();
        let mut face_tet_pair: Vec<[usize; 2]> = Vec::new();
        let mut face_tet_count: Vec<u8> = Vec::new();
        let mut tet_faces = vec![[usize::MAX; 4]; tets.len()];
        let mut i = 0;
        while i < face_incidences.len() {
            let key = face_incidences[i].0;
            let mut j = i;
            while j < face_incidences.len() && face_incidences[j].0 == key {
                j += 1;
            }
            let count = j - i;
            if count > 2 {
                return Err(ComplexError::NonManifoldFace { face: key, count });
            }
            let fid = faces.len();
            faces.push(key);
            let mut pair = [usize::MAX; 2];
            for (k, &(_, ti, skip)) in face_incidences[i..j].iter().enumerate() {
                pair[k] = ti;
                tet_faces[ti][skip] = fid;
            }
            face_tet_pair.push(pair);
            face_tet_count.push(count as u8);
            i = j;
        }

        let mut edges: Vec<[usize; 2]> = Vec::with_capacity(tets.len() * 6);
        for t in &tets {
            for a in 0..4 {
                for b in a + 1..4 {
                    edges.push([t[a], t[b]]);
                }
            }
        }
        edges.sort_unstable();
        edges.dedup();

        let face_edges: Vec<[usize; 3]> = faces
            .iter()
            .map(|f| {
                let mut out = [0; 3];
                for (skip, slot) in out.iter_mut().enumerate() {
                    let e = drop_index2(f, skip);
                    *slot = edges.binary_search(&e).expect("edge of a face must exist");
                }
                out
            })
            .collect();

        // Edge -> faces in CSR layout, faces ascending per edge.
        let mut degree = vec![0usize; edges.len()];
        for fe in &face_edges {
            for &e in fe {
                degree[e] += 1;
            }
        }
        let mut edge_face_offsets = Vec::with_capacity(edges.len() + 1);
        edge_face_offsets.push(0);
        for d in &degree {
            edge_face_offsets.push(edge_face_offsets.last().unwrap() + d);
        }
        let mut cursor = edge_face_offsets.clone();
        let mut edge_face_list = vec![0usize; *edge_face_offsets.last().unwrap()];
        for (fi, fe) in face_edges.iter().enumerate() {
            for &e in fe {
                edge_face_list[cursor[e]] = fi;
                cursor[e] += 1;
            }
        }

        let mut mesh = Triangulation {
            vertices,
            tets,
            tet_order,
            edges,
            faces,
            tet_faces,
            face_edges,
            face_tet_pair,
            face_tet_count,
            edge_face_offsets,
            edge_face_list,
            boundary_faces: Vec::new(),
            boundary_edges: Vec::new(),
            boundary_vertices: Vec::new(),
            face_boundary_slot: Vec::new(),
            edge_boundary_slot: Vec::new(),
            vertex_on_boundary: Vec::new(),
            face_component: Vec::new(),
            edge_component: Vec::new(),
            vertex_component: Vec::new(),
            n_components: 0,
        };
        mesh.classify_boundary()?;
        Ok(mesh)
    }

    fn classify_boundary(&mut self) -> Result<(), ComplexError> {
        let nf = self.faces.len();
        let ne = self.edges.len();
        let nv = self.vertices.len();
        let boundary_faces: Vec<usize> = (0..nf).filter(|&f| self.face_tet_count[f] == 1).collect();
        let mut face_slot = vec![None; nf];
        for (slot, &f) in boundary_faces.iter().enumerate() {
            face_slot[f] = Some(slot);
        }
        let mut edge_is_b = vec![false; ne];
        let mut vertex_is_b = vec![false; nv];
        for &f in &boundary_faces {
            for &e in &self.face_edges[f] {
                edge_is_b[e] = true;
            }
            for &v in &self.faces[f] {
                vertex_is_b[v] = true;
            }
        }
        let boundary_edges: Vec<usize> = (0..ne).filter(|&e| edge_is_b[e]).collect();
        let mut edge_slot = vec![None; ne];
        for (slot, &e) in boundary_edges.iter().enumerate() {
            edge_slot[e] = Some(slot);
        }

        // Union boundary faces across boundary edges.
        let mut dsu = Dsu::new(boundary_faces.len());
        for &e in &boundary_edges {
            let bf: Vec<usize> = self.edge_faces(e).iter().copied().filter(|&f| face_slot[f].is_some()).collect();
            if bf.len() != 2 {
                return Err(ComplexError::NonManifoldBoundary { edge: self.edges[e], count: bf.len() });
            }
            dsu.union(face_slot[bf[0]].unwrap(), face_slot[bf[1]].unwrap());
        }

        // Component 0: the one holding the lexicographically largest
        // boundary-face barycenter. Others by smallest face id.
        let mut best = 0usize;
        for slot in 1..boundary_faces.len() {
            let c = self.face_barycenter(boundary_faces[slot]);
            let b = self.face_barycenter(boundary_faces[best]);
            if c.lex_cmp(b).is_gt() {
                best = slot;
            }
        }
        let mut root_label: BTreeMap<usize, usize> = BTreeMap::new();
        root_label.insert(dsu.find(best), 0);
        for slot in 0..boundary_faces.len() {
            let r = dsu.find(slot);
            let next = root_label.len();
            root_label.entry(r).or_insert(next);
        }
        let mut face_component = vec![None; nf];
        let mut edge_component = vec![None; ne];
        let mut vertex_component = vec![None; nv];
        for (slot, &f) in boundary_faces.iter().enumerate() {
            let c = root_label[&dsu.find(slot)];
            face_component[f] = Some(c);
            for &e in &self.face_edges[f] {
                edge_component[e] = Some(c);
            }
            for &v in &self.faces[f] {
                vertex_component[v].get_or_insert(c);
            }
        }

        self.boundary_vertices = (0..nv).filter(|&v| vertex_is_b[v]).collect();
        self.boundary_faces = boundary_faces;
        self.boundary_edges = boundary_edges;
        self.face_boundary_slot = face_slot;
        self.edge_boundary_slot = edge_slot;
        self.vertex_on_boundary = vertex_is_b;
        self.face_component = face_component;
        self.edge_component = edge_component;
        self.vertex_component = vertex_component;
        self.n_components = root_label.len();
        Ok(())
    }

    // ---- sizes and raw access ----

    pub fn n_vertices(&self) -> usize {
        self.vertices.len()
    }
    pub fn n_edges(&self) -> usize {
        self.edges.len()
    }
    pub fn n_faces(&self) -> usize {
        self.faces.len()
    }
    pub fn n_tets(&self) -> usize {
        self.tets.len()
    }

    pub fn counts(&self) -> MeshCounts {
        MeshCounts { tets: self.n_tets(), faces: self.n_faces(), edges: self.n_edges(), vertices: self.n_vertices() }
    }

    pub fn vertices(&self) -> &[Point3] {
        &self.vertices
    }
    pub fn vertex(&self, v: usize) -> Point3 {
        self.vertices[v]
    }
    pub fn edges(&self) -> &[[usize; 2]] {
        &self.edges
    }
    pub fn edge(&self, e: usize) -> [usize; 2] {
        self.edges[e]
    }
    pub fn faces(&self) -> &[[usize; 3]] {
        &self.faces
    }
    pub fn face(&self, f: usize) -> [usize; 3] {
        self.faces[f]
    }
    pub fn tets(&self) -> &[[usize; 4]] {
        &self.tets
    }
    pub fn tet(&self, t: usize) -> [usize; 4] {
        self.tets[t]
    }

    /// Edge id of `{a, b}` in either order.
    pub fn find_edge(&self, a: usize, b: usize) -> Option<usize> {
        let key = if a < b { [a, b] } else { [b, a] };
        self.edges.binary_search(&key).ok()
    }

    /// Face id of `{a, b, c}` in any order.
    pub fn find_face(&self, a: usize, b: usize, c: usize) -> Option<usize> {
        let mut key = [a, b, c];
        key.sort_unstable();
        self.faces.binary_search(&key).ok()
    }

    /// Tet id of the given vertex set in any order.
    pub fn find_tet(&self, mut vs: [usize; 4]) -> Option<usize> {
        vs.sort_unstable();
        self.tet_order.binary_search_by(|&t| self.tets[t].cmp(&vs)).ok().map(|i| self.tet_order[i])
    }

    /// Faces `[bcd, acd, abd, abc]` of tet `t`.
    pub fn tet_faces(&self, t: usize) -> [usize; 4] {
        self.tet_faces[t]
    }

    /// Edges `[bc, ac, ab]` of face `f`.
    pub fn face_edges(&self, f: usize) -> [usize; 3] {
        self.face_edges[f]
    }

    /// The one or two tets incident on face `f`, ascending.
    pub fn face_tets(&self, f: usize) -> &[usize] {
        &self.face_tet_pair[f][..self.face_tet_count[f] as usize]
    }

    /// Faces incident on edge `e`, ascending.
    pub fn edge_faces(&self, e: usize) -> &[usize] {
        &self.edge_face_list[self.edge_face_offsets[e]..self.edge_face_offsets[e + 1]]
    }

    /// Tets incident on edge `e`, ascending.
    pub fn edge_tets(&self, e: usize) -> Vec<usize> {
        let mut out: Vec<usize> = self.edge_faces(e).iter().flat_map(|&f| self.face_tets(f).iter().copied()).collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    /// Coefficient of edge `e` in the boundary of face `f` (0 if `e ⊄ f`).
    pub fn edge_face_sign(&self, e: usize, f: usize) -> i64 {
        self.face_edges[f].iter().position(|&x| x == e).map_or(0, facet_sign)
    }

    /// Coefficient of face `f` in the boundary of tet `t` (0 if `f ⊄ t`).
    pub fn face_tet_sign(&self, f: usize, t: usize) -> i64 {
        self.tet_faces[t].iter().position(|&x| x == f).map_or(0, facet_sign)
    }

    /// Vertex of tet `t` not in face `f`.
    pub fn opposite_vertex(&self, t: usize, f: usize) -> usize {
        let local = self.tet_faces[t].iter().position(|&x| x == f).expect("face is not a facet of tet");
        self.tets[t][local]
    }

    // ---- barycenters ----

    pub fn edge_barycenter(&self, e: usize) -> Point3 {
        Point3::mean(self.edges[e].iter().map(|&v| self.vertices[v]))
    }
    pub fn face_barycenter(&self, f: usize) -> Point3 {
        Point3::mean(self.faces[f].iter().map(|&v| self.vertices[v]))
    }
    pub fn tet_barycenter(&self, t: usize) -> Point3 {
        Point3::mean(self.tets[t].iter().map(|&v| self.vertices[v]))
    }

    /// Diagonal length of the axis-aligned bounding box of the vertices.
    pub fn bounding_diagonal(&self) -> f64 {
        bounding_diagonal(self.vertices.iter().copied())
    }

    // ---- boundary classification ----

    pub fn boundary_faces(&self) -> &[usize] {
        &self.boundary_faces
    }
    pub fn boundary_edges(&self) -> &[usize] {
        &self.boundary_edges
    }
    pub fn boundary_vertices(&self) -> &[usize] {
        &self.boundary_vertices
    }
    pub fn is_boundary_face(&self, f: usize) -> bool {
        self.face_boundary_slot[f].is_some()
    }
    pub fn is_boundary_edge(&self, e: usize) -> bool {
        self.edge_boundary_slot[e].is_some()
    }
    pub fn is_boundary_vertex(&self, v: usize) -> bool {
        self.vertex_on_boundary[v]
    }
    /// Position of `f` in [`Self::boundary_faces`].
    pub fn boundary_face_slot(&self, f: usize) -> Option<usize> {
        self.face_boundary_slot[f]
    }
    /// Position of `e` in [`Self::boundary_edges`].
    pub fn boundary_edge_slot(&self, e: usize) -> Option<usize> {
        self.edge_boundary_slot[e]
    }

    /// The two boundary faces incident on boundary edge `e`, ascending.
    pub fn boundary_faces_of_edge(&self, e: usize) -> Option<[usize; 2]> {
        self.edge_boundary_slot[e]?;
        let mut it = self.edge_faces(e).iter().copied().filter(|&f| self.is_boundary_face(f));
        Some([it.next()?, it.next()?])
    }

    /// Number of connected components of the boundary surface.
    pub fn n_boundary_components(&self) -> usize {
        self.n_components
    }

    /// `p` in the Euler relation: boundary components minus one.
    pub fn p(&self) -> usize {
        self.n_components.saturating_sub(1)
    }

    pub fn face_component(&self, f: usize) -> Option<usize> {
        self.face_component[f]
    }
    pub fn edge_component(&self, e: usize) -> Option<usize> {
        self.edge_component[e]
    }
    pub fn vertex_component(&self, v: usize) -> Option<usize> {
        self.vertex_component[v]
    }

    // ---- boundary operators ----

    /// `∂[a,b] = b - a`.
    pub fn boundary_1(&self, c: &Chain1) -> Chain0 {
        let mut out = Chain0::new();
        for (e, k) in c.iter() {
            let [a, b] = self.edges[e];
            out.add_term(b, k);
            out.add_term(a, -k);
        }
        out
    }

    /// `∂[a,b,c] = [b,c] - [a,c] + [a,b]`.
    pub fn boundary_2(&self, c: &Chain2) -> Chain1 {
        let mut out = Chain1::new();
        for (f, k) in c.iter() {
            for (i, &e) in self.face_edges[f].iter().enumerate() {
                out.add_term(e, facet_sign(i) * k);
            }
        }
        out
    }

    /// `∂[a,b,c,d] = [b,c,d] - [a,c,d] + [a,b,d] - [a,b,c]`.
    pub fn boundary_3(&self, c: &Chain3) -> Chain2 {
        let mut out = Chain2::new();
        for (t, k) in c.iter() {
            for (i, &f) in self.tet_faces[t].iter().enumerate() {
                out.add_term(f, facet_sign(i) * k);
            }
        }
        out
    }

    // ---- predicates ----

    pub fn is_cycle(&self, c: &Chain1) -> bool {
        self.boundary_1(c).is_zero()
    }

    /// No simplex of the chain lies in the boundary surface.
    pub fn is_internal<const K: usize>(&self, c: &Chain<K>) -> bool {
        match K {
            0 => c.support().all(|v| !self.vertex_on_boundary[v]),
            1 => c.support().all(|e| !self.is_boundary_edge(e)),
            2 => c.support().all(|f| !self.is_boundary_face(f)),
            _ => true,
        }
    }

    pub fn is_corner_free(&self, c: &Chain1, corners: &CornerData) -> bool {
        c.support().all(|e| !corners.is_corner_edge(e))
    }

    // ---- Euler relation ----

    /// `v - e + f - t`.
    pub fn euler_characteristic(&self) -> i64 {
        self.n_vertices() as i64 - self.n_edges() as i64 + self.n_faces() as i64 - self.n_tets() as i64
    }

    /// Checks `v - e + f - t = 1 - g + p` for a claimed first Betti number
    /// `g` and `p + 1` boundary components.
    pub fn euler_check(&self, g: usize, p: usize) -> bool {
        self.euler_characteristic() == 1 - g as i64 + p as i64
    }

    // ---- corners ----

    /// Enumerates corner edges: boundary edges whose two boundary faces lie
    /// in one common tetrahedron.
    pub fn classify_corners(&self) -> CornerData {
        let mut corner_edges = Vec::new();
        let mut edge_mask = vec![false; self.n_edges()];
        let mut face_mask = vec![false; self.n_faces()];
        let mut tet_mask = vec![false; self.n_tets()];
        for &e in &self.boundary_edges {
            let [f1, f2] = self.boundary_faces_of_edge(e).expect("boundary edge has two boundary faces");
            let t1 = self.face_tets(f1)[0];
            let t2 = self.face_tets(f2)[0];
            if t1 == t2 {
                corner_edges.push(CornerEdge { edge: e, faces: [f1, f2], tet: t1 });
                edge_mask[e] = true;
                face_mask[f1] = true;
                face_mask[f2] = true;
                tet_mask[t1] = true;
            }
        }
        CornerData {
            faces: (0..self.n_faces()).filter(|&f| face_mask[f]).collect(),
            tets: (0..self.n_tets()).filter(|&t| tet_mask[t]).collect(),
            edges: corner_edges,
            edge_mask,
            face_mask,
            tet_mask,
        }
    }
}

/// A corner edge with its two corner faces and corner tetrahedron.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CornerEdge {
    pub edge: usize,
    pub faces: [usize; 2],
    pub tet: usize,
}

/// Corner edges, faces and tetrahedra of a triangulation.
#[derive(Clone, Debug)]
pub struct CornerData {
    pub edges: Vec<CornerEdge>,
    pub faces: Vec<usize>,
    pub tets: Vec<usize>,
    edge_mask: Vec<bool>,
    face_mask: Vec<bool>,
    tet_mask: Vec<bool>,
}

impl CornerData {
    pub fn is_corner_edge(&self, e: usize) -> bool {
        self.edge_mask[e]
    }
    pub fn is_corner_face(&self, f: usize) -> bool {
        self.face_mask[f]
    }
    pub fn is_corner_tet(&self, t: usize) -> bool {
        self.tet_mask[t]
    }
}

pub(crate) fn bounding_diagonal<I: IntoIterator<Item = Point3>>(pts: I) -> f64 {
    let mut lo = Point3::new(f64::INFINITY, f64::INFINITY, f64::INFINITY);
    let mut hi = Point3::new(f64::NEG_INFINITY, f64::NEG_INFINITY, f64::NEG_INFINITY);
    let mut any = false;
    for p in pts {
        any = true;
        lo = Point3::new(lo.x.min(p.x), lo.y.min(p.y), lo.z.min(p.z));
        hi = Point3::new(hi.x.max(p.x), hi.y.max(p.y), hi.z.max(p.z));
    }
    if any {
        (hi - lo).norm()
    } else {
        0.0
    }
}

fn drop_index3(t: &[usize; 4], skip: usize) -> [usize; 3] {
    let mut out = [0; 3];
    let mut k = 0;
    for (i, &v) in t.iter().enumerate() {
        if i != skip {
            out[k] = v;
            k += 1;
        }
    }
    out
}

fn drop_index2(f: &[usize; 3], skip: usize) -> [usize; 2] {
    let mut out = [0; 2];
    let mut k = 0;
    for (i, &v) in f.iter().enumerate() {
        if i != skip {
            out[k] = v;
            k += 1;
        }
    }
    out
}

/// Disjoint-set forest with path halving and union by size.
#[derive(Clone, Debug)]
pub(crate) struct Dsu {
    parent: Vec<usize>,
    size: Vec<usize>,
}

impl Dsu {
    pub(crate) fn new(n: usize) -> Self {
        Dsu { parent: (0..n).collect(), size: vec![1; n] }
    }

    pub(crate) fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Returns false if already joined.
    pub(crate) fn union(&mut self, a: usize, b: usize) -> bool {
        let (mut ra, mut rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        if self.size[ra] < self.size[rb] {
            std::mem::swap(&mut ra, &mut rb);
        }
        self.parent[rb] = ra;
        self.size[ra] += self.size[rb];
        true
    }
}
