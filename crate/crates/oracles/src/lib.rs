//! Reference computations that share no code path with the solver.

use std::collections::BTreeSet;

use seifert_core::{Chain1, Chain2, Triangulation};

/// A smallest 2-chain with coefficients in `{-1, 0, 1}` and boundary
/// `gamma`, found by iterative deepening over face counts up to
/// `max_faces`. Faces in `forbidden` are never used.
///
/// At each step the lowest edge with a nonzero residual must be reduced by
/// some unused face carrying the matching sign, which keeps the search
/// exhaustive while branching only over that edge's faces.
pub fn min_surface(
    mesh: &Triangulation,
    gamma: &Chain1,
    forbidden: &BTreeSet<usize>,
    max_faces: usize,
) -> Option<Chain2> {
    let mut search = Search { mesh, forbidden, residual: vec![0; mesh.n_edges()], used: vec![0; mesh.n_faces()] };
    for (e, c) in gamma.iter() {
        search.residual[e] = c;
    }
    (0..=max_faces).find_map(|depth| {
        search
            .run(depth)
            .then(|| search.used.iter().enumerate().filter(|(_, &c)| c != 0).map(|(f, &c)| (f, c)).collect())
    })
}

struct Search<'a> {
    mesh: &'a Triangulation,
    forbidden: &'a BTreeSet<usize>,
    residual: Vec<i64>,
    used: Vec<i64>,
}

impl Search<'_> {
    fn apply(&mut self, f: usize, c: i64) {
        self.used[f] += c;
        for x in self.mesh.face_edges(f) {
            self.residual[x] -= c * self.mesh.edge_face_sign(x, f);
        }
    }

    fn run(&mut self, left: usize) -> bool {
        let Some(e) = self.residual.iter().position(|&r| r != 0) else { return true };
        let weight: i64 = self.residual.iter().map(|r| r.abs()).sum();
        // each face touches three edges
        if left == 0 || weight > 3 * left as i64 {
            return false;
        }
        let want = self.residual[e].signum();
        for &f in self.mesh.edge_faces(e) {
            if self.used[f] != 0 || self.forbidden.contains(&f) {
                continue;
            }
            let c = want * self.mesh.edge_face_sign(e, f);
            self.apply(f, c);
            if self.run(left - 1) {
                return true;
            }
            self.apply(f, -c);
        }
        false
    }
}
