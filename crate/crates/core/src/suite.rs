//! Named benchmark instances shared by the command-line harness and the tests.

use std::fmt;
use std::str::FromStr;

use crate::complex::{Chain1, Triangulation};
use crate::generate::{
    belt_perimeter, face_perimeter, hollow_cube, interior_loop, kuhn_cube, linked_rects, random_patch_boundary,
    tunnel_cube, tunnel_loop, GenError,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Suite {
    /// Kuhn cube `n = 2` with the face perimeter and the mid-height belt.
    Toy,
    /// Kuhn cubes `n = 4, 8, 16` with random patch boundaries.
    Scaling,
    /// Cubes with an inner void.
    Hollow,
    /// Cubes with a through-hole, including a loop that does not bound.
    Tunnel,
    /// Linked rectangles and an interior loop in a Kuhn cube `n = 4`.
    Linked,
}

impl Suite {
    pub const ALL: [Suite; 5] = [Suite::Toy, Suite::Scaling, Suite::Hollow, Suite::Tunnel, Suite::Linked];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Toy => "toy",
            Suite::Scaling => "scaling",
            Suite::Hollow => "hollow",
            Suite::Tunnel => "tunnel",
            Suite::Linked => "linked",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnknownSuite(pub String);

impl fmt::Display for UnknownSuite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<&str> = Suite::ALL.iter().map(|s| s.name()).collect();
        write!(f, "unknown suite `{}` (expected one of {})", self.0, names.join(", "))
    }
}

impl std::error::Error for UnknownSuite {}

impl FromStr for Suite {
    type Err = UnknownSuite;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Suite::ALL.into_iter().find(|x| x.name() == s).ok_or_else(|| UnknownSuite(s.to_string()))
    }
}

#[derive(Clone, Debug)]
pub struct NamedCycle {
    pub name: String,
    pub chain: Chain1,
    /// Whether the cycle is known to bound in its mesh.
    pub bounds: bool,
}

#[derive(Clone, Debug)]
pub struct Instance {
    pub label: String,
    pub mesh: Triangulation,
    /// Number of independent tunnels.
    pub genus: usize,
    pub cycles: Vec<NamedCycle>,
}

fn bounding(name: impl Into<String>, chain: Chain1) -> NamedCycle {
    NamedCycle { name: name.into(), chain, bounds: true }
}

/// Patch size used for the random cycle on a mesh of side `n`.
fn patch_faces(n: usize) -> usize {
    n * n
}

pub fn instances(suite: Suite) -> Result<Vec<Instance>, GenError> {
    let mut out = Vec::new();
    match suite {
        Suite::Toy => {
            let mesh = kuhn_cube(2)?.build()?;
            let cycles = vec![
                bounding("face-perimeter", face_perimeter(&mesh, 2)?),
                bounding("belt", belt_perimeter(&mesh, 2)?),
            ];
            out.push(Instance { label: "kuhn-2".into(), mesh, genus: 0, cycles });
        }
        Suite::Scaling => {
            for n in [4, 8, 16] {
                let mesh = kuhn_cube(n)?.build()?;
                let gamma = random_patch_boundary(&mesh, patch_faces(n), n as u64);
                let cycles = vec![bounding("random-patch", gamma)];
                out.push(Instance { label: format!("kuhn-{n}"), mesh, genus: 0, cycles });
            }
        }
        Suite::Hollow => {
            for n in [3, 4] {
                let mesh = hollow_cube(n)?.build()?;
                let cycles = vec![
                    bounding("face-perimeter", face_perimeter(&mesh, n)?),
                    bounding("random-patch", random_patch_boundary(&mesh, patch_faces(n), n as u64)),
                ];
                out.push(Instance { label: format!("hollow-{n}"), mesh, genus: 0, cycles });
            }
        }
        Suite::Tunnel => {
            for n in [3, 4] {
                let mesh = tunnel_cube(n)?.build()?;
                let cycles = vec![
                    bounding("random-patch", random_patch_boundary(&mesh, patch_faces(n), n as u64)),
                    NamedCycle { name: "tunnel-loop".into(), chain: tunnel_loop(&mesh, n)?, bounds: false },
                ];
                out.push(Instance { label: format!("tunnel-{n}"), mesh, genus: 1, cycles });
            }
        }
        Suite::Linked => {
            let mesh = kuhn_cube(4)?.build()?;
            let (a, b) = linked_rects(&mesh, 4)?;
            let cycles = vec![
                bounding("linked-rect-a", a),
                bounding("linked-rect-b", b),
                bounding("interior-loop", interior_loop(&mesh, 4)?),
            ];
            out.push(Instance { label: "kuhn-4".into(), mesh, genus: 0, cycles });
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_round_trip() {
        for s in Suite::ALL {
            assert_eq!(s.name().parse::<Suite>(), Ok(s));
        }
        assert!("nope".parse::<Suite>().is_err());
    }

    #[test]
    fn every_cycle_is_a_cycle() {
        for s in [Suite::Toy, Suite::Hollow, Suite::Tunnel, Suite::Linked] {
            for inst in instances(s).unwrap() {
                for c in &inst.cycles {
                    assert!(inst.mesh.is_cycle(&c.chain) && !c.chain.is_zero(), "{s} {} {}", inst.label, c.name);
                }
            }
        }
    }
}
