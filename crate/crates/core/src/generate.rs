//! Structured test meshes and canonical cycles on them.
//!
//! Grid meshes split every unit cube into six tetrahedra around the diagonal
//! from its lowest to its highest corner, so neighbouring cubes conform.
//! Vertex ids run x-fastest over the grid points that are actually used.

use std::collections::HashMap;

use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::complex::{Chain1, Chain2, ComplexError, Triangulation};
use crate::geometry::Point3;
use crate::linking::PLCycle;

#[derive(Clone, Debug, Error, PartialEq)]
#[non_exhaustive]
pub enum GenError {
    #[error("size {n} is too small (need at least {min})")]
    TooSmall { n: usize, min: usize },
    #[error("no mesh vertex at {0}")]
    MissingVertex(Point3),
    #[error("no mesh edge between {0} and {1}")]
    MissingEdge(Point3, Point3),
    #[error("cycle corners {0} and {1} are not joined by an axis-parallel line")]
    NotAxisAligned(Point3, Point3),
    #[error(transparent)]
    Complex(#[from] ComplexError),
}

/// Raw vertex and tetrahedron lists, before validation.
#[derive(Clone, Debug, PartialEq)]
pub struct MeshData {
    pub vertices: Vec<Point3>,
    pub tets: Vec<[usize; 4]>,
}

impl MeshData {
    pub fn build(&self) -> Result<Triangulation, ComplexError> {
        Triangulation::new(self.vertices.clone(), &self.tets)
    }
}

const PERMUTATIONS: [[usize; 3]; 6] = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];

/// Cubes `(i, j, k)` of the `n³` grid for which `keep` holds, six tets each.
pub fn grid_mesh(n: usize, keep: impl Fn(usize, usize, usize) -> bool) -> MeshData {
    let side = n + 1;
    let gid = |p: [usize; 3]| p[0] + side * (p[1] + side * p[2]);
    let mut raw: Vec<[usize; 4]> = Vec::new();
    for k in 0..n {
        for j in 0..n {
            for i in 0..n {
                if !keep(i, j, k) {
                    continue;
                }
                for perm in PERMUTATIONS {
                    let mut p = [i, j, k];
                    let mut tet = [gid(p); 4];
                    for (step, &axis) in perm.iter().enumerate() {
                        p[axis] += 1;
                        tet[step + 1] = gid(p);
                    }
                    raw.push(tet);
                }
            }
        }
    }
    let mut remap = vec![usize::MAX; side * side * side];
    let mut used: Vec<usize> = raw.iter().flatten().copied().collect();
    used.sort_unstable();
    used.dedup();
    let mut vertices = Vec::with_capacity(used.len());
    for (new, &old) in used.iter().enumerate() {
        remap[old] = new;
        let (x, y, z) = (old % side, (old / side) % side, old / (side * side));
        vertices.push(Point3::new(x as f64, y as f64, z as f64));
    }
    let tets = raw.iter().map(|t| t.map(|v| remap[v])).collect();
    MeshData { vertices, tets }
}

/// `n × n × n` cubes, six tets each.
pub fn kuhn_cube(n: usize) -> Result<MeshData, GenError> {
    if n < 1 {
        return Err(GenError::TooSmall { n, min: 1 });
    }
    Ok(grid_mesh(n, |_, _, _| true))
}

/// Kuhn cube with the inner `(n-2)³` block of cubes removed: two boundary
/// components, no tunnels.
pub fn hollow_cube(n: usize) -> Result<MeshData, GenError> {
    if n < 3 {
        return Err(GenError::TooSmall { n, min: 3 });
    }
    let inner = |c: usize| c >= 1 && c + 1 < n;
    Ok(grid_mesh(n, |i, j, k| !(inner(i) && inner(j) && inner(k))))
}

/// Column index removed by [`tunnel_cube`].
pub fn tunnel_column(n: usize) -> usize {
    n / 2
}

/// Kuhn cube with the vertical column of cubes at `i = j = n/2` removed:
/// one boundary component, one tunnel.
pub fn tunnel_cube(n: usize) -> Result<MeshData, GenError> {
    if n < 3 {
        return Err(GenError::TooSmall { n, min: 3 });
    }
    let c = tunnel_column(n);
    Ok(grid_mesh(n, |i, j, _| !(i == c && j == c)))
}

/// First barycentric subdivision: 24 tets per tet, one per chain
/// vertex < edge < face < tet. New vertices follow the originals in the
/// order edges, faces, tets.
pub fn barycentric_subdivision(mesh: &Triangulation) -> MeshData {
    let nv = mesh.n_vertices();
    let ne = mesh.n_edges();
    let nf = mesh.n_faces();
    let mut vertices = mesh.vertices().to_vec();
    vertices.extend((0..ne).map(|e| mesh.edge_barycenter(e)));
    vertices.extend((0..nf).map(|f| mesh.face_barycenter(f)));
    vertices.extend((0..mesh.n_tets()).map(|t| mesh.tet_barycenter(t)));
    let mut tets = Vec::with_capacity(24 * mesh.n_tets());
    for t in 0..mesh.n_tets() {
        for f in mesh.tet_faces(t) {
            for e in mesh.face_edges(f) {
                for v in mesh.edge(e) {
                    tets.push([v, nv + e, nv + ne + f, nv + ne + nf + t]);
                }
            }
        }
    }
    MeshData { vertices, tets }
}

/// Lookup of mesh vertices by exact coordinates.
pub struct VertexLocator<'a> {
    mesh: &'a Triangulation,
    by_point: HashMap<[u64; 3], usize>,
}

impl<'a> VertexLocator<'a> {
    pub fn new(mesh: &'a Triangulation) -> Self {
        let by_point = mesh.vertices().iter().enumerate().map(|(i, p)| (p.bit_key(), i)).collect();
        VertexLocator { mesh, by_point }
    }

    pub fn vertex(&self, p: Point3) -> Result<usize, GenError> {
        self.by_point.get(&p.bit_key()).copied().ok_or(GenError::MissingVertex(p))
    }

    /// Closed loop through `corners` along unit grid steps.
    pub fn grid_loop(&self, corners: &[Point3]) -> Result<Chain1, GenError> {
        let mut chain = Chain1::new();
        for i in 0..corners.len() {
            let (a, b) = (corners[i], corners[(i + 1) % corners.len()]);
            let d = b - a;
            let axes = [d.x, d.y, d.z].iter().filter(|c| **c != 0.0).count();
            let len = d.x.abs() + d.y.abs() + d.z.abs();
            if axes != 1 || len.fract() != 0.0 {
                return Err(GenError::NotAxisAligned(a, b));
            }
            let step = d / len;
            let mut p = a;
            for _ in 0..len as usize {
                let q = p + step;
                let (u, v) = (self.vertex(p)?, self.vertex(q)?);
                let e = self.mesh.find_edge(u, v).ok_or(GenError::MissingEdge(p, q))?;
                chain.add_term(e, if u < v { 1 } else { -1 });
                p = q;
            }
        }
        Ok(chain)
    }
}

fn pt(x: f64, y: f64, z: f64) -> Point3 {
    Point3::new(x, y, z)
}

/// Perimeter of the top face `z = n` of a Kuhn cube, counterclockwise seen
/// from above.
pub fn face_perimeter(mesh: &Triangulation, n: usize) -> Result<Chain1, GenError> {
    let s = n as f64;
    VertexLocator::new(mesh).grid_loop(&[pt(0.0, 0.0, s), pt(s, 0.0, s), pt(s, s, s), pt(0.0, s, s)])
}

/// Square around the mid-height belt `z = n/2` of a Kuhn cube with even `n`.
pub fn belt_perimeter(mesh: &Triangulation, n: usize) -> Result<Chain1, GenError> {
    let (s, h) = (n as f64, (n / 2) as f64);
    VertexLocator::new(mesh).grid_loop(&[pt(0.0, 0.0, h), pt(s, 0.0, h), pt(s, s, h), pt(0.0, s, h)])
}

/// Two grid rectangles that link once, inside a Kuhn cube with `n >= 4`:
/// one in the plane `z = 2`, one in the plane `x = 2`.
pub fn linked_rects(mesh: &Triangulation, n: usize) -> Result<(Chain1, Chain1), GenError> {
    if n < 4 {
        return Err(GenError::TooSmall { n, min: 4 });
    }
    let loc = VertexLocator::new(mesh);
    let a = loc.grid_loop(&[pt(1.0, 1.0, 2.0), pt(3.0, 1.0, 2.0), pt(3.0, 3.0, 2.0), pt(1.0, 3.0, 2.0)])?;
    let b = loc.grid_loop(&[pt(2.0, 2.0, 1.0), pt(2.0, 4.0, 1.0), pt(2.0, 4.0, 3.0), pt(2.0, 2.0, 3.0)])?;
    Ok((a, b))
}

/// Unit square of interior edges at `(1..2, 1..2, 1)`; needs `n >= 3`.
pub fn interior_loop(mesh: &Triangulation, n: usize) -> Result<Chain1, GenError> {
    if n < 3 {
        return Err(GenError::TooSmall { n, min: 3 });
    }
    VertexLocator::new(mesh).grid_loop(&[pt(1.0, 1.0, 1.0), pt(2.0, 1.0, 1.0), pt(2.0, 2.0, 1.0), pt(1.0, 2.0, 1.0)])
}

/// Unit square around the removed column of [`tunnel_cube`], at height 1.
pub fn tunnel_loop(mesh: &Triangulation, n: usize) -> Result<Chain1, GenError> {
    let c = tunnel_column(n) as f64;
    VertexLocator::new(mesh).grid_loop(&[
        pt(c, c, 1.0),
        pt(c + 1.0, c, 1.0),
        pt(c + 1.0, c + 1.0, 1.0),
        pt(c, c + 1.0, 1.0),
    ])
}

/// Rectangle outside the mesh that threads the tunnel of [`tunnel_cube`];
/// it generates the first homology of the complement.
pub fn tunnel_generator(n: usize) -> PLCycle {
    let c = tunnel_column(n) as f64 + 0.5;
    let s = n as f64;
    PLCycle::polygon(&[pt(c, c, -1.0), pt(s + 1.0, c, -1.0), pt(s + 1.0, c, s + 1.0), pt(c, c, s + 1.0)], 1)
        .expect("rectangle is closed")
}

/// Boundary of a random 2-chain with `faces` faces and coefficients ±1.
pub fn random_boundary(mesh: &Triangulation, faces: usize, seed: u64) -> Chain1 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let ids: Vec<usize> = (0..mesh.n_faces()).collect();
    let mut s = Chain2::new();
    for &f in ids.choose_multiple(&mut rng, faces.min(ids.len())) {
        s.add_term(f, if rng.random_bool(0.5) { 1 } else { -1 });
    }
    mesh.boundary_2(&s)
}

/// Boundary of a random connected patch grown face by face across edges,
/// which makes a compact cycle with a small filling.
pub fn random_patch_boundary(mesh: &Triangulation, faces: usize, seed: u64) -> Chain1 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut s = Chain2::new();
    let start = rng.random_range(0..mesh.n_faces());
    let mut frontier = vec![start];
    while s.len() < faces && !frontier.is_empty() {
        let i = rng.random_range(0..frontier.len());
        let f = frontier.swap_remove(i);
        if s.get(f) != 0 {
            continue;
        }
        s.add_term(f, 1);
        for e in mesh.face_edges(f) {
            frontier.extend(mesh.edge_faces(e).iter().copied().filter(|&g| s.get(g) == 0));
        }
    }
    mesh.boundary_2(&s)
}
