//! Plain-text mesh, cycle and surface files.
//!
//! ```text
//! tetmesh v1          cycle v1            surface v1
//! vertices 4          1 0 1               1 0 1 2
//! 0 0 0               -1 1 2              # support 1
//! ...                 ...
//! tets 1
//! 0 1 2 3
//! ```
//!
//! Blank lines and everything after `#` are ignored. Cycle and surface
//! coefficients refer to the simplex with ascending vertex ids, whatever
//! order the ids are written in.

use std::fmt::Write as _;

use thiserror::Error;

use crate::complex::{Chain1, Chain2, Triangulation};
use crate::geometry::Point3;

#[derive(Clone, Debug, Error, PartialEq, Eq)]
#[non_exhaustive]
pub enum FormatError {
    #[error("line {line}: expected header `{expected}`")]
    Header { line: usize, expected: &'static str },
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("unexpected end of file: {0}")]
    UnexpectedEof(String),
    #[error("entry {entry}: vertices {vertices:?} are not a {kind} of the mesh")]
    UnknownSimplex { entry: usize, kind: &'static str, vertices: Vec<usize> },
}

/// Non-comment lines with their 1-based line numbers.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(i, l)| {
        let l = l.split('#').next().unwrap_or("").trim();
        (!l.is_empty()).then_some((i + 1, l))
    })
}

fn syntax(line: usize, message: impl Into<String>) -> FormatError {
    FormatError::Syntax { line, message: message.into() }
}

fn parse_fields<T: std::str::FromStr>(line: usize, text: &str, count: usize) -> Result<Vec<T>, FormatError> {
    let parts: Vec<&str> = text.split_whitespace().collect();
    if parts.len() != count {
        return Err(syntax(line, format!("expected {count} fields, found {}", parts.len())));
    }
    parts.iter().map(|p| p.parse::<T>().map_err(|_| syntax(line, format!("cannot parse `{p}`")))).collect()
}

fn expect_header<'a>(
    lines: &mut impl Iterator<Item = (usize, &'a str)>,
    expected: &'static str,
) -> Result<(), FormatError> {
    match lines.next() {
        Some((_, l)) if l.split_whitespace().collect::<Vec<_>>().join(" ") == expected => Ok(()),
        Some((line, _)) => Err(FormatError::Header { line, expected }),
        None => Err(FormatError::Header { line: 1, expected }),
    }
}

fn expect_count<'a>(lines: &mut impl Iterator<Item = (usize, &'a str)>, keyword: &str) -> Result<usize, FormatError> {
    let (line, l) = lines.next().ok_or_else(|| FormatError::UnexpectedEof(format!("missing `{keyword}` line")))?;
    let mut parts = l.split_whitespace();
    if parts.next() != Some(keyword) {
        return Err(syntax(line, format!("expected `{keyword} <count>`")));
    }
    let n = parts.next().and_then(|c| c.parse().ok()).ok_or_else(|| syntax(line, "missing or invalid count"))?;
    if parts.next().is_some() {
        return Err(syntax(line, "trailing fields"));
    }
    Ok(n)
}

/// Vertices and tetrahedra as read from a mesh file.
#[derive(Clone, Debug, PartialEq)]
pub struct MeshFile {
    pub vertices: Vec<Point3>,
    pub tets: Vec<[usize; 4]>,
}

impl MeshFile {
    pub fn parse(text: &str) -> Result<Self, FormatError> {
        let mut lines = content_lines(text);
        expect_header(&mut lines, "tetmesh v1")?;
        let nv = expect_count(&mut lines, "vertices")?;
        let mut vertices = Vec::with_capacity(nv);
        for i in 0..nv {
            let (line, l) = lines.next().ok_or_else(|| FormatError::UnexpectedEof(format!("vertex {i} of {nv}")))?;
            let c: Vec<f64> = parse_fields(line, l, 3)?;
            vertices.push(Point3::new(c[0], c[1], c[2]));
        }
        let nt = expect_count(&mut lines, "tets")?;
        let mut tets = Vec::with_capacity(nt);
        for i in 0..nt {
            let (line, l) = lines.next().ok_or_else(|| FormatError::UnexpectedEof(format!("tet {i} of {nt}")))?;
            let v: Vec<usize> = parse_fields(line, l, 4)?;
            tets.push([v[0], v[1], v[2], v[3]]);
        }
        if let Some((line, _)) = lines.next() {
            return Err(syntax(line, "unexpected content after the last tet"));
        }
        Ok(MeshFile { vertices, tets })
    }

    /// Uses Rust's shortest round-tripping float formatting.
    pub fn emit(&self) -> String {
        let mut out = String::from("tetmesh v1\n");
        let _ = writeln!(out, "vertices {}", self.vertices.len());
        for p in &self.vertices {
            let _ = writeln!(out, "{:?} {:?} {:?}", p.x, p.y, p.z);
        }
        let _ = writeln!(out, "tets {}", self.tets.len());
        for t in &self.tets {
            let _ = writeln!(out, "{} {} {} {}", t[0], t[1], t[2], t[3]);
        }
        out
    }

    pub fn from_mesh(mesh: &Triangulation) -> Self {
        MeshFile { vertices: mesh.vertices().to_vec(), tets: mesh.tets().to_vec() }
    }
}

/// Cycle entries `(coefficient, a, b)` with `a < b`, in file order.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct CycleFile {
    pub entries: Vec<(i64, usize, usize)>,
}

impl CycleFile {
    pub fn parse(text: &str) -> Result<Self, FormatError> {
        let mut lines = content_lines(text);
        expect_header(&mut lines, "cycle v1")?;
        let mut entries = Vec::new();
        for (line, l) in lines {
            let parts: Vec<&str> = l.split_whitespace().collect();
            if parts.len() != 3 {
                return Err(syntax(line, format!("expected `coef a b`, found {} fields", parts.len())));
            }
            let c: i64 = parts[0].parse().map_err(|_| syntax(line, format!("bad coefficient `{}`", parts[0])))?;
            let a: usize = parts[1].parse().map_err(|_| syntax(line, format!("bad vertex id `{}`", parts[1])))?;
            let b: usize = parts[2].parse().map_err(|_| syntax(line, format!("bad vertex id `{}`", parts[2])))?;
            if a == b {
                return Err(syntax(line, "edge endpoints coincide"));
            }
            entries.push((c, a.min(b), a.max(b)));
        }
        Ok(CycleFile { entries })
    }

    /// Resolves entries to mesh edges.
    pub fn to_chain(&self, mesh: &Triangulation) -> Result<Chain1, FormatError> {
        let mut chain = Chain1::new();
        for (i, &(c, a, b)) in self.entries.iter().enumerate() {
            let e = mesh.find_edge(a, b).ok_or(FormatError::UnknownSimplex {
                entry: i,
                kind: "edge",
                vertices: vec![a, b],
            })?;
            chain.add_term(e, c);
        }
        Ok(chain)
    }

    pub fn from_chain(mesh: &Triangulation, chain: &Chain1) -> Self {
        CycleFile {
            entries: chain
                .iter()
                .map(|(e, c)| {
                    let [a, b] = mesh.edge(e);
                    (c, a, b)
                })
                .collect(),
        }
    }

    pub fn emit(&self) -> String {
        let mut out = String::from("cycle v1\n");
        for &(c, a, b) in &self.entries {
            let _ = writeln!(out, "{c} {a} {b}");
        }
        out
    }
}

/// Surface entries `(coefficient, a, b, c)` plus free-form footer comments.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct SurfaceFile {
    pub entries: Vec<(i64, usize, usize, usize)>,
    pub footer: Vec<String>,
}

impl SurfaceFile {
    /// Comments are not retained.
    pub fn parse(text: &str) -> Result<Self, FormatError> {
        let mut lines = content_lines(text);
        expect_header(&mut lines, "surface v1")?;
        let mut entries = Vec::new();
        for (line, l) in lines {
            let v: Vec<i64> = parse_fields(line, l, 4)?;
            let mut ids = [0usize; 3];
            for (slot, &x) in ids.iter_mut().zip(&v[1..]) {
                *slot = usize::try_from(x).map_err(|_| syntax(line, format!("bad vertex id `{x}`")))?;
            }
            ids.sort_unstable();
            if ids[0] == ids[1] || ids[1] == ids[2] {
                return Err(syntax(line, "face vertices coincide"));
            }
            entries.push((v[0], ids[0], ids[1], ids[2]));
        }
        Ok(SurfaceFile { entries, footer: Vec::new() })
    }

    pub fn to_chain(&self, mesh: &Triangulation) -> Result<Chain2, FormatError> {
        let mut chain = Chain2::new();
        for (i, &(c, a, b, d)) in self.entries.iter().enumerate() {
            let f = mesh.find_face(a, b, d).ok_or(FormatError::UnknownSimplex {
                entry: i,
                kind: "face",
                vertices: vec![a, b, d],
            })?;
            chain.add_term(f, c);
        }
        Ok(chain)
    }

    pub fn from_chain(mesh: &Triangulation, chain: &Chain2) -> Self {
        SurfaceFile {
            entries: chain
                .iter()
                .map(|(f, c)| {
                    let [a, b, d] = mesh.face(f);
                    (c, a, b, d)
                })
                .collect(),
            footer: Vec::new(),
        }
    }

    pub fn emit(&self) -> String {
        let mut out = String::from("surface v1\n");
        for &(c, a, b, d) in &self.entries {
            let _ = writeln!(out, "{c} {a} {b} {d}");
        }
        for l in &self.footer {
            let _ = writeln!(out, "# {l}");
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const TET: &str = "tetmesh v1\nvertices 4\n0 0 0\n1 0 0\n0 1 0 # apex below\n0 0 1\n\ntets 1\n0 1 2 3\n";

    #[test]
    fn parses_with_comments_and_blank_lines() {
        let m = MeshFile::parse(TET).unwrap();
        assert_eq!(m.vertices.len(), 4);
        assert_eq!(m.tets, vec![[0, 1, 2, 3]]);
        assert_eq!(MeshFile::parse(&m.emit()).unwrap(), m);
    }

    #[test]
    fn errors_carry_line_numbers() {
        let bad = TET.replace("1 0 0\n", "1 0\n");
        assert_eq!(
            MeshFile::parse(&bad).unwrap_err(),
            FormatError::Syntax { line: 4, message: "expected 3 fields, found 2".into() }
        );
        assert!(matches!(MeshFile::parse("mesh v2\n"), Err(FormatError::Header { line: 1, .. })));
        assert!(matches!(MeshFile::parse("tetmesh v1\nvertices 3\n"), Err(FormatError::UnexpectedEof(_))));
    }

    #[test]
    fn cycle_edge_order_is_irrelevant() {
        let c = CycleFile::parse("cycle v1\n2 3 1\n").unwrap();
        assert_eq!(c.entries, vec![(2, 1, 3)]);
        assert!(CycleFile::parse("cycle v1\n1 2 2\n").is_err());
    }

    #[test]
    fn surface_footer_is_a_comment() {
        let s = SurfaceFile { entries: vec![(1, 0, 1, 2)], footer: vec!["support 1".into()] };
        let text = s.emit();
        assert!(text.ends_with("# support 1\n"));
        assert_eq!(SurfaceFile::parse(&text).unwrap().entries, s.entries);
    }
}
