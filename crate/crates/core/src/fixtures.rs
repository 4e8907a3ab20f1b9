//! Bundled gluing tables used by the test suite and the `fixtures` CLI command.

use crate::perm::Perm4;
use crate::triangulation::{Gluing, Triangulation};

/// The boundary of the 4-simplex: five tetrahedra triangulating S^3.
///
/// Tetrahedron k is the facet omitting global vertex k; its local vertex p
/// carries the p-th smallest label of {0..4} \ {k}.
pub fn boundary_4_simplex() -> Triangulation {
    let facet: Vec<Vec<usize>> =
        (0..5).map(|k| (0..5).filter(|&v| v != k).collect()).collect();
    let mut gluings = vec![[None; 4]; 5];
    for k in 0..5 {
        for f in 0..4 {
            let j = facet[k][f]; // the facet sharing this triangle
            let mut image = [0u8; 4];
            for p in 0..4 {
                let global = if p == f { k } else { facet[k][p] };
                image[p] = facet[j].iter().position(|&v| v == global).unwrap() as u8;
            }
            gluings[k][f] = Some(Gluing { tet: j, perm: Perm4::new(image).unwrap() });
        }
    }
    Triangulation::new("s3_boundary4simplex", gluings).expect("well-formed by construction")
}

/// Lens space L(p, q) as a triangulated p-gonal bipyramid with its upper
/// hemisphere glued to the lower one shifted by q. Requires p >= 3 and
/// gcd(p, q) = 1. Tetrahedron i spans (north, south, e_i, e_{i+1}).
pub fn lens(p: usize, q: usize) -> Triangulation {
    assert!(p >= 3 && q >= 1 && q < p && gcd(p, q) == 1);
    let mut pairs = Vec::new();
    for i in 0..p {
        // internal wall (N, S, e_{i+1}): face 2 of T_i meets face 3 of T_{i+1}
        pairs.push((i, 2usize, (i + 1) % p, "0132"));
        // top (N, e_i, e_{i+1}) onto bottom (S, e_{i+q}, e_{i+q+1})
        pairs.push((i, 1usize, (i + q) % p, "1023"));
    }
    Triangulation::from_pairs(format!("lens_{p}_{q}"), p, &pairs)
        .expect("well-formed by construction")
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// The figure-eight knot complement: the standard two-tetrahedron ideal
/// triangulation from the cusped census.
pub fn m004() -> Triangulation {
    Triangulation::from_pairs(
        "m004",
        2,
        &[(0, 0, 1, "0132"), (0, 1, 1, "1230"), (0, 2, 1, "2310"), (0, 3, 1, "2103")],
    )
    .expect("census table")
}

/// The figure-eight sister: the other two-tetrahedron cusped census manifold,
/// same volume as m004 but first homology Z + Z/5.
pub fn m003() -> Triangulation {
    Triangulation::from_pairs(
        "m003",
        2,
        &[(0, 0, 1, "0132"), (0, 1, 1, "2103"), (0, 2, 1, "0321"), (0, 3, 1, "1023")],
    )
    .expect("census table")
}

/// Two copies of the boundary 4-simplex with one tetrahedron removed from
/// each, glued along the exposed boundary spheres. Topologically S^3 again,
/// but the junction sphere is carried by the triangulation.
pub fn connected_sum_demo() -> Triangulation {
    let base = boundary_4_simplex();
    let mut gluings = vec![[None; 4]; 8];
    // copy A = tets 0..4, copy B = tets 4..8, each missing old tet 4
    for copy in 0..2 {
        let shift = 4 * copy;
        for i in 0..4 {
            for f in 0..4 {
                let g = base.gluing(i, f).unwrap();
                if g.tet != 4 {
                    gluings[shift + i][f] = Some(Gluing { tet: shift + g.tet, perm: g.perm });
                }
            }
        }
    }
    // the exposed faces (face 3 of each remaining tet) are matched by label
    for i in 0..4 {
        gluings[i][3] = Some(Gluing { tet: 4 + i, perm: Perm4::IDENTITY });
        gluings[4 + i][3] = Some(Gluing { tet: i, perm: Perm4::IDENTITY });
    }
    Triangulation::new("connected_sum", gluings).expect("well-formed by construction")
}

/// A one-tetrahedron closed orientable triangulation (a 3-sphere).
/// Derived by exhausting all one-tetrahedron gluing tables; see the
/// `one_tet_enumeration_agrees` test.
pub fn one_tet_closed() -> Triangulation {
    Triangulation::from_pairs("one_tet_closed", 1, &[(0, 0, 0, "3012"), (0, 1, 0, "0213")])
        .expect("census table")
}

/// A one-tetrahedron non-orientable cusped table in the style of the
/// Gieseking manifold: single ideal vertex with a Klein bottle link.
pub fn gieseking_like() -> Triangulation {
    Triangulation::from_pairs("gieseking_like", 1, &[(0, 0, 0, "1203"), (0, 2, 0, "0231")])
        .expect("census table")
}

/// The boundary 4-simplex with one gluing composed with a transposition of
/// two face vertices. Structurally fine, but no longer a manifold.
pub fn twisted_invalid() -> Triangulation {
    let base = boundary_4_simplex();
    let mut gluings: Vec<[Option<Gluing>; 4]> = base.rows().to_vec();
    let g = gluings[0][0].unwrap();
    // face 0 of tet 0 has vertices {1,2,3}; twist two of them
    let twist = Perm4::transposition(1, 2);
    let perm = g.perm.compose(&twist);
    gluings[0][0] = Some(Gluing { tet: g.tet, perm });
    let back = perm.apply(0);
    // clear the old back-reference before setting the new one
    for f in 0..4 {
        if let Some(h) = gluings[g.tet][f] {
            if h.tet == 0 && h.perm == g.perm.inverse() {
                gluings[g.tet][f] = None;
            }
        }
    }
    gluings[g.tet][back] = Some(Gluing { tet: 0, perm: perm.inverse() });
    Triangulation::new("twisted_invalid", gluings).expect("still an involution")
}

/// Everything `fixtures` writes to disk, in a stable order.
pub fn bundled() -> Vec<Triangulation> {
    vec![boundary_4_simplex(), m003(), m004(), lens(5, 1), connected_sum_demo()]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::triangulation::VertexKind;

    /// All ways to glue the four faces of one tetrahedron in two pairs.
    fn all_one_tet_tables() -> Vec<Triangulation> {
        let pairings = [[(0, 1), (2, 3)], [(0, 2), (1, 3)], [(0, 3), (1, 2)]];
        let mut out = Vec::new();
        for pairing in pairings {
            for p1 in Perm4::all().filter(|p| p.apply(pairing[0].0) == pairing[0].1) {
                for p2 in Perm4::all().filter(|p| p.apply(pairing[1].0) == pairing[1].1) {
                    let mut gluings = vec![[None; 4]; 1];
                    for (pair, perm) in [(pairing[0], p1), (pairing[1], p2)] {
                        gluings[0][pair.0] = Some(Gluing { tet: 0, perm });
                        gluings[0][perm.apply(pair.0)] = Some(Gluing { tet: 0, perm: perm.inverse() });
                    }
                    if let Ok(tri) = Triangulation::new("cand", gluings) {
                        out.push(tri);
                    }
                }
            }
        }
        out
    }

    #[test]
    fn one_tet_enumeration_agrees() {
        let mut closed_orientable = Vec::new();
        let mut klein_cusped = Vec::new();
        for tri in all_one_tet_tables() {
            let report = tri.validate();
            if report.is_manifold && report.closed && report.orientable {
                closed_orientable.push(tri.clone());
            }
            let links = &report.skeleton.vertex_links;
            if report.self_glued_faces.is_empty()
                && report.reversed_edges.is_empty()
                && !report.orientable
                && links.len() == 1
                && links[0].euler_characteristic == 0
                && links[0].closed
                && links[0].connected
                && !links[0].orientable
            {
                klein_cusped.push(tri.clone());
            }
        }
        assert!(!closed_orientable.is_empty(), "no closed orientable one-tet table exists?");
        assert!(!klein_cusped.is_empty(), "no Gieseking-style table exists?");
        let frozen = one_tet_closed();
        assert!(
            closed_orientable.iter().any(|t| t.rows() == frozen.rows()),
            "frozen one_tet_closed not among the {} valid tables; first: {}",
            closed_orientable.len(),
            closed_orientable[0]
        );
        let frozen = gieseking_like();
        assert!(
            klein_cusped.iter().any(|t| t.rows() == frozen.rows()),
            "frozen gieseking_like not among the {} valid tables; first: {}",
            klein_cusped.len(),
            klein_cusped[0]
        );
    }

    #[test]
    fn lens_5_1_validates() {
        let tri = lens(5, 1);
        let report = tri.validate();
        assert!(report.is_manifold, "offending: {:?}", report.offending);
        assert!(report.closed && report.orientable && report.connected);
        for link in &report.skeleton.vertex_links {
            assert_eq!(link.kind, VertexKind::Material);
        }
    }

    #[test]
    fn connected_sum_validates() {
        let tri = connected_sum_demo();
        assert_eq!(tri.tetra_count(), 8);
        let report = tri.validate();
        assert!(report.is_manifold, "offending: {:?}", report.offending);
        assert!(report.closed && report.orientable && report.connected);
        assert_eq!(report.skeleton.vertex_classes, 6);
    }

    #[test]
    fn m003_validates_cusped() {
        let report = m003().validate();
        assert!(report.is_manifold, "offending: {:?}", report.offending);
        assert!(report.orientable);
        assert_eq!(report.cusp_count, 1);
    }

    #[test]
    fn bundled_all_valid() {
        for tri in bundled() {
            let report = tri.validate();
            assert!(report.is_manifold, "{}: {:?}", tri.name(), report.offending);
        }
    }
}
