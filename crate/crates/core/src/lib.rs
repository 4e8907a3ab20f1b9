//! Deciding properties of triangulated 3-manifolds: validation, homology,
//! Pachner-move equivalence certificates, normal surface enumeration, and
//! certified hyperbolic structures.
//!
//! All values are immutable after construction and every operation is a pure
//! function, so everything here is safe to use from multiple threads.

pub mod fixtures;
pub mod homology;
pub mod hyperbolic;
pub mod io;
pub mod isosig;
pub mod moves;
pub mod normal;
pub mod perm;
pub mod search;
pub mod snf;
pub mod subdivide;
pub mod triangulation;

pub use perm::Perm4;
pub use triangulation::{Gluing, Skeleton, StructuralError, Triangulation, ValidationReport};

/// Version string reported by the CLI and the C ABI.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
