//! Normal surface theory: coordinates, matching equations, cone enumeration,
//! surface reconstruction and sphere/torus candidate detection.
//!
//! Coordinates are vectors of length 7t: per tetrahedron, four triangle
//! counts (one per corner) followed by three quadrilateral counts (one per
//! opposite-edge pairing). Pairing q separates the vertex pairs
//! {0,1}|{2,3} (q=0), {0,2}|{1,3} (q=1), {0,3}|{1,2} (q=2).

mod cone;
mod detect;
mod hilbert;
mod surface;

pub use cone::vertex_solutions;
pub use detect::{
    edge_link_vector, find_essential_sphere_candidates, find_normal_tori, vertex_link_vector,
};
pub use hilbert::fundamental_solutions;
pub use surface::{reconstruct, NormalSurface, SurfaceComponent};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::snf::IntMat;
use crate::triangulation::{face_verts, Triangulation};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum NormalError {
    #[error("triangulation is not valid: {0}")]
    InvalidTriangulation(String),
    #[error("coordinate vector has wrong length {got}, expected {want}")]
    WrongLength { got: usize, want: usize },
    #[error("vector does not satisfy the matching equations")]
    NotInCone,
    #[error("two quadrilateral types meet tetrahedron {tet}; not an embedded surface")]
    NotAdmissible { tet: usize },
    #[error("enumeration exceeds the desk-scale budget ({nodes} nodes explored)")]
    BoundTooLargeForDeskScale { nodes: u64 },
}

/// Non-negative integer vector in normal surface coordinates.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct NormalCoordVector(pub Vec<i64>);

impl NormalCoordVector {
    pub fn zero(tetra_count: usize) -> Self {
        NormalCoordVector(vec![0; 7 * tetra_count])
    }

    #[inline]
    pub fn tri(&self, tet: usize, corner: usize) -> i64 {
        self.0[7 * tet + corner]
    }

    #[inline]
    pub fn quad(&self, tet: usize, pairing: usize) -> i64 {
        self.0[7 * tet + 4 + pairing]
    }

    pub fn tri_mut(&mut self, tet: usize, corner: usize) -> &mut i64 {
        &mut self.0[7 * tet + corner]
    }

    pub fn quad_mut(&mut self, tet: usize, pairing: usize) -> &mut i64 {
        &mut self.0[7 * tet + 4 + pairing]
    }

    pub fn tetra_count(&self) -> usize {
        self.0.len() / 7
    }

    pub fn l1_norm(&self) -> i64 {
        self.0.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&x| x == 0)
    }

    /// At most one quadrilateral type per tetrahedron.
    pub fn admissible(&self) -> Result<(), NormalError> {
        for i in 0..self.tetra_count() {
            let kinds = (0..3).filter(|&q| self.quad(i, q) != 0).count();
            if kinds > 1 {
                return Err(NormalError::NotAdmissible { tet: i });
            }
        }
        Ok(())
    }

    /// Componentwise `self <= other`.
    pub fn leq(&self, other: &NormalCoordVector) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    pub fn add(&self, other: &NormalCoordVector) -> NormalCoordVector {
        NormalCoordVector(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }
}

/// The pairing index of the quadrilateral separating {a, b} from the rest.
pub fn quad_type_separating(a: usize, b: usize) -> usize {
    debug_assert!(a != b);
    match (a.min(b), a.max(b)) {
        (0, 1) | (2, 3) => 0,
        (0, 2) | (1, 3) => 1,
        (0, 3) | (1, 2) => 2,
        _ => unreachable!("vertices in 0..4"),
    }
}

/// The two vertex pairs separated by pairing q, each ascending;
/// the first pair contains vertex 0.
pub fn quad_pairs(q: usize) -> ([usize; 2], [usize; 2]) {
    match q {
        0 => ([0, 1], [2, 3]),
        1 => ([0, 2], [1, 3]),
        2 => ([0, 3], [1, 2]),
        _ => unreachable!("pairing in 0..3"),
    }
}

/// The matching equations: one row per (interior triangle class, corner).
#[derive(Clone, Debug)]
pub struct MatchingSystem {
    pub tetra_count: usize,
    pub matrix: IntMat,
}

impl MatchingSystem {
    pub fn contains(&self, v: &NormalCoordVector) -> Result<(), NormalError> {
        let want = 7 * self.tetra_count;
        if v.0.len() != want {
            return Err(NormalError::WrongLength { got: v.0.len(), want });
        }
        if v.0.iter().any(|&x| x < 0) || !self.matrix.mul_vec(&v.0).iter().all(|&x| x == 0) {
            return Err(NormalError::NotInCone);
        }
        Ok(())
    }
}

/// Arcs at corner `v` of face `f` are cut by the corner triangle at `v` and
/// by the quadrilateral separating {v, f}; counts must agree across each
/// interior triangle class.
pub fn matching_system(tri: &Triangulation) -> Result<MatchingSystem, NormalError> {
    let report = tri.validate();
    if !report.is_manifold {
        return Err(NormalError::InvalidTriangulation(
            report.offending.unwrap_or_else(|| "invalid".into()),
        ));
    }
    let t = tri.tetra_count();
    let skel = tri.skeleton();
    let mut rows = Vec::new();
    for members in &skel.triangle_members {
        if members.len() != 2 {
            continue; // boundary face
        }
        let (i, f) = members[0];
        let g = tri.gluing(i, f).expect("interior face");
        let (j, sigma) = (g.tet, g.perm);
        for &v in &face_verts(f) {
            let (w, fj) = (sigma.apply(v), sigma.apply(f));
            let mut row = vec![0i64; 7 * t];
            row[7 * i + v] += 1;
            row[7 * i + 4 + quad_type_separating(v, f)] += 1;
            row[7 * j + w] -= 1;
            row[7 * j + 4 + quad_type_separating(w, fj)] -= 1;
            if row.iter().any(|&x| x != 0) {
                rows.push(row);
            }
        }
    }
    let matrix =
        if rows.is_empty() { IntMat::zeros(0, 7 * t) } else { IntMat::from_rows(rows) };
    Ok(MatchingSystem { tetra_count: t, matrix })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::homology::matrix_rank;

    #[test]
    fn vertex_links_satisfy_matching() {
        for tri in [fixtures::boundary_4_simplex(), fixtures::m004(), fixtures::lens(5, 1)] {
            let sys = matching_system(&tri).unwrap();
            let skel = tri.skeleton();
            for class in 0..skel.vertex_count {
                let v = vertex_link_vector(&skel, class);
                sys.contains(&v)
                    .unwrap_or_else(|e| panic!("{} vertex class {class}: {e}", tri.name()));
            }
        }
    }

    #[test]
    fn zero_vector_always_solves() {
        let tri = fixtures::m003();
        let sys = matching_system(&tri).unwrap();
        sys.contains(&NormalCoordVector::zero(2)).unwrap();
    }

    #[test]
    fn m004_kernel_rank_regression() {
        let sys = matching_system(&fixtures::m004()).unwrap();
        assert_eq!(sys.matrix.cols, 14);
        let rank = matrix_rank(&sys.matrix);
        let kernel_dim = 14 - rank;
        // frozen regression: the solution cone of the two-tetrahedron
        // figure-eight triangulation is four-dimensional
        assert_eq!(kernel_dim, 4, "rank {rank}");
    }
}
