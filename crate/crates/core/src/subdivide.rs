//! Barycentric subdivision: each tetrahedron splits into 24 flag tetrahedra.
//!
//! A flag is (vertex v, edge {v,w}, face {v,w,u}); the flag tetrahedron spans
//! v, the edge barycenter, the face barycenter, and the tetrahedron
//! barycenter, in that vertex order. With this convention every gluing of
//! the subdivision is the identity permutation.

use std::collections::HashMap;

use crate::triangulation::{Gluing, Triangulation};

/// (v, w, u) with w != v, u not in {v, w}; 24 flags per tetrahedron.
fn flags() -> Vec<(usize, usize, usize)> {
    let mut out = Vec::with_capacity(24);
    for v in 0..4 {
        for w in 0..4 {
            if w == v {
                continue;
            }
            for u in 0..4 {
                if u != v && u != w {
                    out.push((v, w, u));
                }
            }
        }
    }
    out
}

fn flag_index(v: usize, w: usize, u: usize) -> usize {
    let rank_w = (0..4).filter(|&x| x != v).position(|x| x == w).unwrap();
    let rank_u = (0..4).filter(|&x| x != v && x != w).position(|x| x == u).unwrap();
    v * 6 + rank_w * 2 + rank_u
}

pub fn barycentric_subdivide(tri: &Triangulation) -> Triangulation {
    let t = tri.tetra_count();
    let mut gluings = vec![[None; 4]; 24 * t];
    let id = crate::perm::Perm4::IDENTITY;
    for i in 0..t {
        for &(v, w, u) in &flags().clone() {
            let me = 24 * i + flag_index(v, w, u);
            // face 0: swap the endpoint of the edge
            gluings[me][0] = Some(Gluing { tet: 24 * i + flag_index(w, v, u), perm: id });
            // face 1: swap the third vertex of the face along the other edge at v
            gluings[me][1] = Some(Gluing { tet: 24 * i + flag_index(v, u, w), perm: id });
            // face 2: swap the face across the edge
            let x = 6 - v - w - u; // the vertex not in the face
            gluings[me][2] = Some(Gluing { tet: 24 * i + flag_index(v, w, x), perm: id });
            // face 3: cross the original face {v,w,u}, which is face x of tet i
            if let Some(g) = tri.gluing(i, x) {
                let (sv, sw, su) = (g.perm.apply(v), g.perm.apply(w), g.perm.apply(u));
                gluings[me][3] =
                    Some(Gluing { tet: 24 * g.tet + flag_index(sv, sw, su), perm: id });
            }
        }
    }
    Triangulation::new(format!("{}_bary", tri.name()), gluings)
        .expect("subdivision is well-formed")
}

/// A triangulation is simplicial when every simplex has pairwise distinct
/// vertex classes and no two distinct simplex classes of the same dimension
/// span the same vertex-class set.
pub fn is_simplicial(tri: &Triangulation) -> bool {
    let skel = tri.skeleton();
    let t = tri.tetra_count();

    let mut tet_sets = HashMap::new();
    for i in 0..t {
        let mut set: Vec<usize> = (0..4).map(|v| skel.vertex_class(i, v)).collect();
        set.sort_unstable();
        if set.windows(2).any(|w| w[0] == w[1]) {
            return false;
        }
        if let Some(&prev) = tet_sets.get(&set) {
            if prev != i {
                return false;
            }
        }
        tet_sets.insert(set, i);
    }

    let mut face_sets = HashMap::new();
    for (class, members) in skel.triangle_members.iter().enumerate() {
        let (i, f) = members[0];
        let mut set: Vec<usize> = crate::triangulation::face_verts(f)
            .iter()
            .map(|&v| skel.vertex_class(i, v))
            .collect();
        set.sort_unstable();
        if set.windows(2).any(|w| w[0] == w[1]) {
            return false;
        }
        if let Some(&prev) = face_sets.get(&set) {
            if prev != class {
                return false;
            }
        }
        face_sets.insert(set, class);
    }

    let mut edge_sets = HashMap::new();
    for (class, members) in skel.edge_members.iter().enumerate() {
        let (i, e) = members[0];
        let (a, b) = crate::triangulation::EDGE_VERTS[e];
        let mut set = [skel.vertex_class(i, a), skel.vertex_class(i, b)];
        set.sort_unstable();
        if set[0] == set[1] {
            return false;
        }
        if let Some(&prev) = edge_sets.get(&set) {
            if prev != class {
                return false;
            }
        }
        edge_sets.insert(set, class);
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::homology::homology;
    use crate::triangulation::VertexKind;

    #[test]
    fn boundary_simplex_subdivides_simplicially() {
        let tri = fixtures::boundary_4_simplex();
        let sub = barycentric_subdivide(&tri);
        assert_eq!(sub.tetra_count(), 120);
        let report = sub.validate();
        assert!(report.is_manifold, "offending: {:?}", report.offending);
        assert!(report.closed && report.orientable);
        assert!(is_simplicial(&sub), "subdivision of a simplicial complex is simplicial");
        let h = homology(&sub).unwrap();
        assert_eq!(h.groups[0].rank, 1);
        assert_eq!(h.groups[1].rank, 0);
        assert_eq!(h.groups[2].rank, 0);
        assert_eq!(h.groups[3].rank, 1);
    }

    #[test]
    fn m004_subdivision_stays_cusped() {
        let tri = fixtures::m004();
        let sub = barycentric_subdivide(&tri);
        assert_eq!(sub.tetra_count(), 48);
        let report = sub.validate();
        assert!(report.is_manifold, "offending: {:?}", report.offending);
        assert_eq!(report.cusp_count, 1);
        assert_eq!(
            report.skeleton.vertex_links.iter().filter(|l| l.kind == VertexKind::Ideal).count(),
            1
        );
        let h = homology(&sub).unwrap();
        assert_eq!(h.groups[1].rank, 1);
        assert!(h.groups[1].torsion.is_empty());
    }

    #[test]
    fn twice_subdivided_one_tet_is_simplicial() {
        let tri = fixtures::one_tet_closed();
        let once = barycentric_subdivide(&tri);
        assert_eq!(once.tetra_count(), 24);
        let twice = barycentric_subdivide(&once);
        assert_eq!(twice.tetra_count(), 576);
        assert!(twice.validate().is_manifold);
        assert!(is_simplicial(&twice));
    }

    #[test]
    fn homology_invariant_under_subdivision() {
        for tri in [fixtures::lens(5, 1), fixtures::m003()] {
            let before = homology(&tri).unwrap();
            let after = homology(&barycentric_subdivide(&tri)).unwrap();
            assert_eq!(before, after, "{}", tri.name());
        }
    }
}
