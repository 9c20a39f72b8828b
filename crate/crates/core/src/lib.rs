//! Homological Seifert surfaces on tetrahedral meshes.
//!
//! Given a 1-cycle `γ` made of mesh edges, [`seifert::solve`] returns an
//! integer 2-chain `S` of mesh faces with `∂S = γ`, or reports that none
//! exists. The pipeline is:
//!
//! 1. [`complex::Triangulation`] derives oriented edges, faces and boundary data.
//! 2. [`dual::DualGraph`] joins tetrahedron and boundary-face barycenters.
//! 3. [`trees`] picks a spanning tree of that graph that also spans each
//!    boundary component.
//! 4. [`seifert::eliminate`] solves the face unknowns, using
//!    [`linking::linking_number`] whenever propagation stalls.
//!
//! The `parallel` feature (default) evaluates linking sums and per-face
//! formulas on the rayon pool; results are identical without it.

pub mod complex;
pub mod dual;
pub mod format;
pub mod generate;
pub mod geometry;
pub mod linking;
pub mod par;
pub mod seifert;
pub mod suite;
pub mod trees;

pub use complex::{Chain, Chain0, Chain1, Chain2, Chain3, ComplexError, CornerData, Triangulation};
pub use dual::{build_dual, DualGraph};
pub use geometry::Point3;
pub use linking::{linking_number, LinkError, LinkResult, PLCycle};
pub use seifert::{eliminate, solve, solve_internal, SeifertError, SeifertProblem, SeifertResult};
pub use trees::{SpanningTree, TreeStrategy};
