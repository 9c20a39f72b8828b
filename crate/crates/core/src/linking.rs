//! Linking numbers of disjoint piecewise-linear 1-cycles.
//!
//! [`linking_number`] evaluates the Gauss double integral in closed form: for
//! two straight segments it equals the signed solid angle swept by the
//! difference vector, which splits into two spherical triangles. The
//! projection-based [`crossing_oracle`] is an independent check.

use std::collections::HashMap;
use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::complex::{bounding_diagonal, Chain1, Triangulation};
use crate::dual::{realize, DualGraph};
use crate::geometry::{segment_distance_squared, triple, Point3};
use crate::par;

/// Maximum distance from an integer accepted when rounding.
pub const ROUNDING_TOLERANCE: f64 = 0.1;
/// Default disjointness threshold, relative to the bounding-box diagonal.
pub const DEFAULT_RELATIVE_EPS: f64 = 1e-9;
/// Projection directions tried by the crossing oracle.
pub const MAX_PERTURBATIONS: usize = 64;

#[derive(Clone, Debug, Error, PartialEq)]
#[non_exhaustive]
pub enum LinkError {
    #[error("the two cycles come within {distance:e} of each other (tolerance {tolerance:e})")]
    SupportsIntersect { distance: f64, tolerance: f64 },
    #[error("linking sum {raw} is not within {ROUNDING_TOLERANCE} of an integer")]
    NonIntegerResult { raw: f64 },
    #[error("chain is not a cycle")]
    NotACycle,
    #[error("segments do not close up at point {0}")]
    OpenPolyline(Point3),
    #[error("no generic projection found after {0} directions")]
    DegenerateAfterMaxPerturbations(usize),
}

/// An oriented segment with an integer coefficient.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Segment {
    pub start: Point3,
    pub end: Point3,
    pub coef: i64,
}

/// A 1-cycle of space: a closed integer combination of segments.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct PLCycle {
    segments: Vec<Segment>,
}

impl PLCycle {
    /// Checks that the boundary vanishes, matching endpoints bit-exactly.
    /// Zero-length segments and zero coefficients are dropped.
    pub fn new<I: IntoIterator<Item = Segment>>(segments: I) -> Result<Self, LinkError> {
        let segments: Vec<Segment> =
            segments.into_iter().filter(|s| s.coef != 0 && s.start.bit_key() != s.end.bit_key()).collect();
        let mut boundary: HashMap<[u64; 3], (i64, Point3)> = HashMap::new();
        for s in &segments {
            boundary.entry(s.end.bit_key()).or_insert((0, s.end)).0 += s.coef;
            boundary.entry(s.start.bit_key()).or_insert((0, s.start)).0 -= s.coef;
        }
        let open = boundary.values().filter(|(c, _)| *c != 0).map(|&(_, p)| p).min_by(|a, b| a.lex_cmp(*b));
        match open {
            Some(p) => Err(LinkError::OpenPolyline(p)),
            None => Ok(PLCycle { segments }),
        }
    }

    /// Closed polygon through `points`, returning to the first.
    pub fn polygon(points: &[Point3], coef: i64) -> Result<Self, LinkError> {
        let n = points.len();
        Self::new((0..n).map(|i| Segment { start: points[i], end: points[(i + 1) % n], coef }))
    }

    /// Realizes a mesh 1-chain along its straight edges.
    pub fn from_chain(mesh: &Triangulation, chain: &Chain1) -> Result<Self, LinkError> {
        Self::new(chain.iter().map(|(e, c)| {
            let [a, b] = mesh.edge(e);
            Segment { start: mesh.vertex(a), end: mesh.vertex(b), coef: c }
        }))
    }

    /// Realizes a dual-graph 1-chain through its barycenters.
    pub fn from_dual(graph: &DualGraph, chain: &std::collections::BTreeMap<usize, i64>) -> Result<Self, LinkError> {
        Self::new(realize(graph, chain).into_iter().map(|(start, end, coef)| Segment { start, end, coef }))
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    pub fn len(&self) -> usize {
        self.segments.len()
    }

    pub fn is_empty(&self) -> bool {
        self.segments.is_empty()
    }

    pub fn scaled(&self, k: i64) -> Self {
        PLCycle {
            segments: self.segments.iter().filter(|_| k != 0).map(|s| Segment { coef: s.coef * k, ..*s }).collect(),
        }
    }

    /// Formal sum of two cycles.
    pub fn plus(&self, other: &PLCycle) -> Self {
        let mut segments = self.segments.clone();
        segments.extend_from_slice(&other.segments);
        PLCycle { segments }
    }

    pub fn points(&self) -> impl Iterator<Item = Point3> + '_ {
        self.segments.iter().flat_map(|s| [s.start, s.end])
    }
}

/// Rounded Gauss sum.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LinkResult {
    pub value: i64,
    pub raw: f64,
    pub residual: f64,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LinkOptions {
    /// Disjointness threshold as a fraction of the joint bounding-box diagonal.
    pub relative_eps: f64,
}

impl Default for LinkOptions {
    fn default() -> Self {
        LinkOptions { relative_eps: DEFAULT_RELATIVE_EPS }
    }
}

/// Signed solid angle of the spherical triangle `p, q, r`.
fn solid_angle(p: Point3, q: Point3, r: Point3) -> f64 {
    let (lp, lq, lr) = (p.norm(), q.norm(), r.norm());
    let num = triple(p, q, r);
    let den = lp * lq * lr + p.dot(q) * lr + p.dot(r) * lq + q.dot(r) * lp;
    2.0 * num.atan2(den)
}

/// Gauss double integral over two straight segments, times `4π`.
///
/// The difference `a(r) - b(s)` sweeps a planar quadrilateral; its radial
/// projection covers the solid angle of the integrand with opposite sign.
pub fn segment_pair_integral(a0: Point3, a1: Point3, b0: Point3, b1: Point3) -> f64 {
    let ea = a1 - a0;
    let eb = b1 - b0;
    let scale = ea.norm() * eb.norm() * (a0 - b0).norm().max((a1 - b1).norm());
    if (triple(a0 - b0, ea, eb)).abs() <= 1e-14 * scale {
        return 0.0;
    }
    let p00 = b0 - a0;
    let p10 = b0 - a1;
    let p11 = b1 - a1;
    let p01 = b1 - a0;
    solid_angle(p00, p10, p11) + solid_angle(p00, p11, p01)
}

/// Linking number with the default disjointness threshold.
pub fn linking_number(a: &PLCycle, b: &PLCycle) -> Result<LinkResult, LinkError> {
    linking_number_with(a, b, LinkOptions::default())
}

pub fn linking_number_with(a: &PLCycle, b: &PLCycle, opts: LinkOptions) -> Result<LinkResult, LinkError> {
    if a.is_empty() || b.is_empty() {
        return Ok(LinkResult { value: 0, raw: 0.0, residual: 0.0 });
    }
    let tolerance = opts.relative_eps * bounding_diagonal(a.points().chain(b.points()));
    let bs = b.segments();
    let rows: Vec<(Vec<f64>, f64)> = par::map_slice(a.segments(), |sa| {
        let mut terms = Vec::with_capacity(bs.len());
        let mut closest = f64::INFINITY;
        for sb in bs {
            let d2 = segment_distance_squared(sa.start, sa.end, sb.start, sb.end);
            closest = closest.min(d2);
            let w = (sa.coef * sb.coef) as f64;
            terms.push(w * segment_pair_integral(sa.start, sa.end, sb.start, sb.end));
        }
        (terms, closest)
    });
    let closest = rows.iter().map(|r| r.1).fold(f64::INFINITY, f64::min).sqrt();
    if closest <= tolerance {
        return Err(LinkError::SupportsIntersect { distance: closest, tolerance });
    }
    let flat: Vec<f64> = rows.into_iter().flat_map(|r| r.0).collect();
    let raw = par::pairwise_sum(&flat) / (4.0 * PI);
    let value = raw.round();
    let residual = (raw - value).abs();
    if residual.is_nan() || residual >= ROUNDING_TOLERANCE {
        return Err(LinkError::NonIntegerResult { raw });
    }
    Ok(LinkResult { value: value as i64, raw, residual })
}

/// Linking number by projecting along a generic direction and summing the
/// signs of crossings where `a` passes over `b`.
pub fn crossing_oracle(a: &PLCycle, b: &PLCycle) -> Result<i64, LinkError> {
    let scale = bounding_diagonal(a.points().chain(b.points())).max(f64::MIN_POSITIVE);
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    for _ in 0..MAX_PERTURBATIONS {
        let dir = loop {
            let v = Point3::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
            let n = v.norm();
            if n > 0.1 && n <= 1.0 {
                break v / n;
            }
        };
        if let Some(count) = count_crossings(a, b, dir, scale) {
            return Ok(count);
        }
    }
    Err(LinkError::DegenerateAfterMaxPerturbations(MAX_PERTURBATIONS))
}

/// Signed a-over-b crossing count along `dir`, or `None` when the projection
/// is not generic.
fn count_crossings(a: &PLCycle, b: &PLCycle, dir: Point3, scale: f64) -> Option<i64> {
    let helper = if dir.x.abs() < 0.9 { Point3::new(1.0, 0.0, 0.0) } else { Point3::new(0.0, 1.0, 0.0) };
    let u = dir.cross(helper);
    let u = u / u.norm();
    let v = dir.cross(u);
    let proj = |p: Point3| (p.dot(u), p.dot(v));
    let tol = 1e-9;
    let mut total = 0i64;
    for sa in a.segments() {
        let (ax0, ay0) = proj(sa.start);
        let (ax1, ay1) = proj(sa.end);
        let (dax, day) = (ax1 - ax0, ay1 - ay0);
        for sb in b.segments() {
            let (bx0, by0) = proj(sb.start);
            let (bx1, by1) = proj(sb.end);
            let (dbx, dby) = (bx1 - bx0, by1 - by0);
            let den = dax * dby - day * dbx;
            let la = (dax * dax + day * day).sqrt();
            let lb = (dbx * dbx + dby * dby).sqrt();
            if la < tol * scale || lb < tol * scale {
                // segment seen end-on
                return None;
            }
            let (rx, ry) = (bx0 - ax0, by0 - ay0);
            if den.abs() <= tol * la * lb {
                // parallel images: degenerate only if collinear and overlapping
                let off = (rx * day - ry * dax) / la;
                if off.abs() <= tol * scale {
                    let t0 = (rx * dax + ry * day) / (la * la);
                    let t1 = ((bx1 - ax0) * dax + (by1 - ay0) * day) / (la * la);
                    let (lo, hi) = if t0 < t1 { (t0, t1) } else { (t1, t0) };
                    if hi >= -tol && lo <= 1.0 + tol {
                        return None;
                    }
                }
                continue;
            }
            let s = (rx * dby - ry * dbx) / den;
            let t = (rx * day - ry * dax) / den;
            let outside = s < -tol || s > 1.0 + tol || t < -tol || t > 1.0 + tol;
            if outside {
                continue;
            }
            let interior = s > tol && s < 1.0 - tol && t > tol && t < 1.0 - tol;
            if !interior {
                // an endpoint image lies on the other image
                return None;
            }
            let pa = sa.start + (sa.end - sa.start) * s;
            let pb = sb.start + (sb.end - sb.start) * t;
            let gap = (pa - pb).dot(dir);
            if gap.abs() <= tol * scale {
                return None;
            }
            if gap > 0.0 {
                let ta = sa.end - sa.start;
                let tb = sb.end - sb.start;
                let sign = if ta.cross(tb).dot(dir) > 0.0 { 1 } else { -1 };
                total += sign * sa.coef * sb.coef;
            }
        }
    }
    Some(total)
}

/// Detaches a mesh 1-cycle from the boundary: each boundary edge `[v, w]`
/// becomes `[v, d] + [d, w]` with `d` the centroid of `v`, `w` and the
/// barycenter of the lowest-numbered tet on the edge.
pub fn retract_plus(mesh: &Triangulation, gamma: &Chain1) -> Result<PLCycle, LinkError> {
    if !mesh.is_cycle(gamma) {
        return Err(LinkError::NotACycle);
    }
    let mut segs = Vec::with_capacity(gamma.len() * 2);
    for (e, c) in gamma.iter() {
        let [a, b] = mesh.edge(e);
        let (pa, pb) = (mesh.vertex(a), mesh.vertex(b));
        if mesh.is_boundary_edge(e) {
            let d = detour_point(mesh, e);
            segs.push(Segment { start: pa, end: d, coef: c });
            segs.push(Segment { start: d, end: pb, coef: c });
        } else {
            segs.push(Segment { start: pa, end: pb, coef: c });
        }
    }
    PLCycle::new(segs)
}

/// Interior point used by [`retract_plus`] for boundary edge `e`.
pub fn detour_point(mesh: &Triangulation, e: usize) -> Point3 {
    let [a, b] = mesh.edge(e);
    let t = mesh.edge_tets(e)[0];
    Point3::mean([mesh.vertex(a), mesh.vertex(b), mesh.tet_barycenter(t)])
}

/// Whether `gamma` links every generator zero times, which for generators
/// forming a homology basis of the complement means it bounds in the mesh.
pub fn is_one_boundary(mesh: &Triangulation, gamma: &Chain1, generators: &[PLCycle]) -> Result<bool, LinkError> {
    let r = retract_plus(mesh, gamma)?;
    for g in generators {
        if linking_number(&r, g)?.value != 0 {
            return Ok(false);
        }
    }
    Ok(true)
}
