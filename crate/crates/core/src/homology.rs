//! Integer chain complexes and Smith-normal-form homology.
//!
//! The complex is built on the quotient cell structure of the triangulation.
//! Ideal (torus-link) vertices are truncated: their link triangles become
//! boundary 2-cells, so cusped manifolds get the absolute homology of the
//! compact manifold with torus boundary. Closed triangulations have no ideal
//! vertices and reduce to the plain quotient complex.

use num_bigint::BigInt;
use num_traits::One;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::perm::Perm4;
use crate::snf::{invariant_factors, rank, IntMat};
use crate::triangulation::{
    edge_index, face_verts, orientation_signs, others, Skeleton, Triangulation, VertexKind,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HomologyError {
    #[error("triangulation has an edge identified with itself reversed; no consistent chain complex")]
    ReversedEdge,
    #[error("triangulation has a face glued to itself; no consistent chain complex")]
    SelfGluedFace,
    #[error("triangulation is empty")]
    Empty,
}

/// Boundary matrices of the (truncated) quotient complex. Entry (i, j) of
/// `d_k` is the coefficient of cell i of dimension k-1 in the boundary of
/// cell j of dimension k.
#[derive(Clone, Debug)]
pub struct ChainComplex {
    pub cells: [usize; 4],
    pub d1: IntMat,
    pub d2: IntMat,
    pub d3: IntMat,
    /// column index of each tetrahedron inside d3
    pub tet_columns: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HomologyGroup {
    pub rank: usize,
    /// torsion coefficients > 1, each dividing the next (decimal strings)
    pub torsion: Vec<String>,
}

impl HomologyGroup {
    fn free(rank: usize) -> Self {
        HomologyGroup { rank, torsion: Vec::new() }
    }

    pub fn display(&self) -> String {
        let mut parts = Vec::new();
        match self.rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            b => parts.push(format!("Z^{b}")),
        }
        for d in &self.torsion {
            parts.push(format!("Z/{d}"));
        }
        if parts.is_empty() {
            "0".to_string()
        } else {
            parts.join(" + ")
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HomologyGroups {
    pub groups: [HomologyGroup; 4],
}

impl HomologyGroups {
    pub fn h(&self, k: usize) -> &HomologyGroup {
        &self.groups[k]
    }
}

/// Cell indexing shared by the complex builder.
struct Cells {
    ideal: Vec<bool>,        // per vertex class
    vert_cell: Vec<usize>,   // material vertex class -> 0-cell (usize::MAX if ideal)
    linkv_cell: Vec<usize>,  // linkvert class -> 0-cell (usize::MAX if not at ideal vertex)
    n0: usize,
    edge_cell: Vec<usize>,   // edge class -> 1-cell
    le_cell: Vec<usize>,     // link-edge id (12t skel layout: 12i+3v+rank f) -> 1-cell
    le_sign: Vec<i8>,        // sign of this member vs the cell's representative direction
    le_rep: Vec<bool>,       // whether this member is the cell's representative
    n1: usize,
    face_cell: Vec<usize>,   // triangle class -> 2-cell
    lt_cell: Vec<usize>,     // (tet, ideal corner) 4i+v -> 2-cell
    n2: usize,
}

fn linkedge_index(tet: usize, v: usize, f: usize) -> usize {
    let rank = others(v).iter().position(|&x| x == f).expect("f adjacent to v");
    12 * tet + 3 * v + rank
}

fn build_cells(tri: &Triangulation, skel: &Skeleton) -> Cells {
    let t = tri.tetra_count();
    // ideal = torus link
    let mut ideal = vec![false; skel.vertex_count];
    for (c, flag) in ideal.iter_mut().enumerate() {
        let info = crate::triangulation::link_info_for_class(tri, skel, c);
        *flag = info.kind == VertexKind::Ideal;
    }

    let mut n0 = 0;
    let mut vert_cell = vec![usize::MAX; skel.vertex_count];
    for (c, cell) in vert_cell.iter_mut().enumerate() {
        if !ideal[c] {
            *cell = n0;
            n0 += 1;
        }
    }
    let mut linkv_cell = vec![usize::MAX; skel.linkvert_count];
    for i in 0..t {
        for v in 0..4 {
            if ideal[skel.vertex_class(i, v)] {
                for w in others(v) {
                    let cls = skel.linkvert_class(i, v, w);
                    if linkv_cell[cls] == usize::MAX {
                        linkv_cell[cls] = n0;
                        n0 += 1;
                    }
                }
            }
        }
    }

    let mut n1 = 0;
    let mut edge_cell = vec![0usize; skel.edge_count];
    for cell in edge_cell.iter_mut() {
        *cell = n1;
        n1 += 1;
    }
    // link-edge cells: sides (i, v, f) at ideal corners, paired via gluings
    let mut le_cell = vec![usize::MAX; 12 * t];
    let mut le_sign = vec![0i8; 12 * t];
    let mut le_rep = vec![false; 12 * t];
    for i in 0..t {
        for v in 0..4 {
            if !ideal[skel.vertex_class(i, v)] {
                continue;
            }
            for f in 0..4 {
                if f == v {
                    continue;
                }
                let id = linkedge_index(i, v, f);
                if le_cell[id] != usize::MAX {
                    continue;
                }
                le_cell[id] = n1;
                le_sign[id] = 1;
                le_rep[id] = true;
                if let Some(g) = tri.gluing(i, f) {
                    let (j, sigma) = (g.tet, g.perm);
                    let (w, fj) = (sigma.apply(v), sigma.apply(f));
                    let pid = linkedge_index(j, w, fj);
                    if pid != id {
                        le_cell[pid] = n1;
                        // rep direction: ascending endpoints (v, x) -> (v, y), x < y on face f
                        let [a, b] = side_endpoints(v, f);
                        let (ia, ib) = (sigma.apply(a), sigma.apply(b));
                        let [pa, pb] = side_endpoints(w, fj);
                        le_sign[pid] = if (ia, ib) == (pa, pb) {
                            1
                        } else {
                            debug_assert_eq!((ia, ib), (pb, pa));
                            -1
                        };
                    }
                }
                n1 += 1;
            }
        }
    }

    let mut n2 = 0;
    let mut face_cell = vec![0usize; skel.triangle_count];
    for cell in face_cell.iter_mut() {
        *cell = n2;
        n2 += 1;
    }
    let mut lt_cell = vec![usize::MAX; 4 * t];
    for i in 0..t {
        for v in 0..4 {
            if ideal[skel.vertex_class(i, v)] {
                lt_cell[4 * i + v] = n2;
                n2 += 1;
            }
        }
    }

    Cells {
        ideal,
        vert_cell,
        linkv_cell,
        n0,
        edge_cell,
        le_cell,
        le_sign,
        le_rep,
        n1,
        face_cell,
        lt_cell,
        n2,
    }
}

/// The two endpoints (as "other vertex" labels) of the side of the corner
/// triangle at `v` lying on face `f`, ascending.
fn side_endpoints(v: usize, f: usize) -> [usize; 2] {
    let mut out = [0usize; 2];
    let mut k = 0;
    for x in 0..4 {
        if x != v && x != f {
            out[k] = x;
            k += 1;
        }
    }
    out
}

pub fn chain_complex(tri: &Triangulation) -> Result<ChainComplex, HomologyError> {
    if tri.tetra_count() == 0 {
        return Err(HomologyError::Empty);
    }
    let skel = tri.skeleton();
    if skel.edge_reversed.iter().any(|&r| r) {
        return Err(HomologyError::ReversedEdge);
    }
    for members in &skel.triangle_members {
        if members.len() == 2 && members[0] == members[1] {
            return Err(HomologyError::SelfGluedFace);
        }
    }
    for i in 0..tri.tetra_count() {
        for f in 0..4 {
            if let Some(g) = tri.gluing(i, f) {
                if g.tet == i && g.perm.apply(f) == f {
                    return Err(HomologyError::SelfGluedFace);
                }
            }
        }
    }

    let cells = build_cells(tri, &skel);
    let t = tri.tetra_count();

    // d1: endpoints of 1-cells
    let mut d1 = IntMat::zeros(cells.n0, cells.n1);
    for (class, members) in skel.edge_members.iter().enumerate() {
        let (i, e) = members[0]; // representative, ascending direction
        let (a, b) = crate::triangulation::EDGE_VERTS[e];
        let col = cells.edge_cell[class];
        for (vertex, sign) in [(b, 1i64), (a, -1i64)] {
            let other = if vertex == a { b } else { a };
            let vc = skel.vertex_class(i, vertex);
            let cell = if cells.ideal[vc] {
                cells.linkv_cell[skel.linkvert_class(i, vertex, other)]
            } else {
                cells.vert_cell[vc]
            };
            d1.add_to(cell, col, sign);
        }
    }
    for i in 0..t {
        for v in 0..4 {
            if !cells.ideal[skel.vertex_class(i, v)] {
                continue;
            }
            for f in 0..4 {
                if f == v {
                    continue;
                }
                let id = linkedge_index(i, v, f);
                if !cells.le_rep[id] {
                    continue; // only the representative writes the column
                }
                let col = cells.le_cell[id];
                let [x, y] = side_endpoints(v, f);
                d1.add_to(cells.linkv_cell[skel.linkvert_class(i, v, y)], col, 1);
                d1.add_to(cells.linkv_cell[skel.linkvert_class(i, v, x)], col, -1);
            }
        }
    }

    // d2: boundaries of big faces and link triangles
    let mut d2 = IntMat::zeros(cells.n1, cells.n2);
    for (class, members) in skel.triangle_members.iter().enumerate() {
        let (i, f) = members[0];
        let col = cells.face_cell[class];
        let u = face_verts(f);
        // simplicial part: [u1,u2] - [u0,u2] + [u0,u1]
        for (pair, base) in [((u[1], u[2]), 1i64), ((u[0], u[2]), -1), ((u[0], u[1]), 1)] {
            let e = edge_index(pair.0, pair.1);
            let sign = skel.edge_direction[6 * i + e] as i64;
            d2.add_to(cells.edge_cell[skel.edge_class_of[6 * i + e]], col, base * sign);
        }
        // corner cuts at ideal corners: traversal at corner u_k runs
        // (prev -> next) around the face; sign against the ascending side
        for k in 0..3 {
            let v = u[k];
            if !cells.ideal[skel.vertex_class(i, v)] {
                continue;
            }
            let prev = u[(k + 2) % 3];
            let next = u[(k + 1) % 3];
            let id = linkedge_index(i, v, f);
            let [x, _y] = side_endpoints(v, f);
            let local: i64 = if prev == x { 1 } else { -1 }; // (x->y) is ascending
            debug_assert!(prev == x || next == x);
            let sign = local * cells.le_sign[id] as i64;
            d2.add_to(cells.le_cell[id], col, sign);
        }
    }
    for i in 0..t {
        for v in 0..4 {
            let cell = cells.lt_cell[4 * i + v];
            if cell == usize::MAX {
                continue;
            }
            let w = others(v);
            // sides opposite w3, w1, w2 traversed (w1->w2), (w2->w3), (w3->w1)
            for (f, from) in [(w[2], w[0]), (w[0], w[1]), (w[1], w[2])] {
                let id = linkedge_index(i, v, f);
                let [x, _y] = side_endpoints(v, f);
                let local: i64 = if from == x { 1 } else { -1 };
                d2.add_to(cells.le_cell[id], cell, local * cells.le_sign[id] as i64);
            }
        }
    }

    // d3: truncated tetrahedra
    let mut d3 = IntMat::zeros(cells.n2, t);
    for i in 0..t {
        for f in 0..4 {
            let class = skel.triangle_class(i, f);
            let (ri, rf) = skel.triangle_members[class][0];
            let transport: i64 = if (ri, rf) == (i, f) {
                1
            } else {
                let g = tri.gluing(i, f).expect("interior face");
                debug_assert_eq!((g.tet, g.perm.apply(f)), (ri, rf));
                let u = face_verts(f);
                let mapped = [g.perm.apply(u[0]), g.perm.apply(u[1]), g.perm.apply(u[2])];
                Perm4::triple_parity(mapped, face_verts(rf)) as i64
            };
            let base = if f % 2 == 0 { 1i64 } else { -1 };
            d3.add_to(cells.face_cell[class], i, base * transport);
        }
        for v in 0..4 {
            let cell = cells.lt_cell[4 * i + v];
            if cell != usize::MAX {
                let d_v = if v % 2 == 0 { -1i64 } else { 1 };
                d3.add_to(cell, i, d_v);
            }
        }
    }

    Ok(ChainComplex {
        cells: [cells.n0, cells.n1, cells.n2, t],
        d1,
        d2,
        d3,
        tet_columns: (0..t).collect(),
    })
}

pub fn homology(tri: &Triangulation) -> Result<HomologyGroups, HomologyError> {
    let cx = chain_complex(tri)?;
    Ok(homology_of_complex(&cx))
}

pub fn homology_of_complex(cx: &ChainComplex) -> HomologyGroups {
    let one = BigInt::one();
    let torsion = |factors: &[BigInt]| -> Vec<String> {
        factors.iter().filter(|d| **d > one).map(|d| d.to_string()).collect()
    };
    let f1 = invariant_factors(&cx.d1);
    let f2 = invariant_factors(&cx.d2);
    let f3 = invariant_factors(&cx.d3);
    let (r1, r2, r3) = (f1.len(), f2.len(), f3.len());
    let groups = [
        HomologyGroup { rank: cx.cells[0] - r1, torsion: torsion(&f1) },
        HomologyGroup { rank: cx.cells[1] - r1 - r2, torsion: torsion(&f2) },
        HomologyGroup { rank: cx.cells[2] - r2 - r3, torsion: torsion(&f3) },
        HomologyGroup::free(cx.cells[3] - r3),
    ];
    HomologyGroups { groups }
}

/// Orientability via sign propagation, plus the fundamental class for closed
/// orientable triangulations: the signed sum of tetrahedra is a 3-cycle.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct OrientationInfo {
    pub orientable: bool,
    pub closed: bool,
    /// per-tetrahedron signs when orientable
    pub orientation: Option<Vec<i8>>,
    /// set when closed and orientable
    pub fundamental_class: Option<Vec<i8>>,
}

pub fn orientability_and_fundamental_class(
    tri: &Triangulation,
) -> Result<OrientationInfo, HomologyError> {
    let signs = orientation_signs(tri);
    // closed manifold: no boundary faces and no ideal vertices
    let report = tri.validate();
    let closed = report.closed && report.cusp_count == 0
        && report.skeleton.vertex_links.iter().all(|l| l.kind == VertexKind::Material);
    let fundamental_class = match (&signs, closed) {
        (Some(s), true) => {
            let cx = chain_complex(tri)?;
            let chain: Vec<i64> = s.iter().map(|&x| x as i64).collect();
            let image = cx.d3.mul_vec(&chain);
            debug_assert!(
                image.iter().all(|&x| x == 0),
                "signed tetrahedra must form a cycle"
            );
            if image.iter().all(|&x| x == 0) {
                Some(s.clone())
            } else {
                None
            }
        }
        _ => None,
    };
    Ok(OrientationInfo {
        orientable: signs.is_some(),
        closed,
        orientation: signs,
        fundamental_class,
    })
}

/// Quick rank used by regression tests: rank of an arbitrary i64 matrix.
pub fn matrix_rank(m: &IntMat) -> usize {
    rank(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn assert_groups(h: &HomologyGroups, expect: [(usize, &[u64]); 4]) {
        for k in 0..4 {
            assert_eq!(h.groups[k].rank, expect[k].0, "rank of H_{k}: {h:?}");
            let tors: Vec<String> = expect[k].1.iter().map(|d| d.to_string()).collect();
            assert_eq!(h.groups[k].torsion, tors, "torsion of H_{k}");
        }
    }

    #[test]
    fn chain_condition_everywhere() {
        for tri in [
            fixtures::boundary_4_simplex(),
            fixtures::m004(),
            fixtures::m003(),
            fixtures::lens(5, 1),
            fixtures::connected_sum_demo(),
            fixtures::one_tet_closed(),
        ] {
            let cx = chain_complex(&tri).unwrap();
            assert!(cx.d1.mul(&cx.d2).is_zero(), "{}: d1 d2 != 0", tri.name());
            assert!(cx.d2.mul(&cx.d3).is_zero(), "{}: d2 d3 != 0", tri.name());
            assert_eq!(cx.d3.cols, tri.tetra_count());
        }
    }

    #[test]
    fn sphere_homology() {
        let h = homology(&fixtures::boundary_4_simplex()).unwrap();
        assert_groups(&h, [(1, &[]), (0, &[]), (0, &[]), (1, &[])]);
        let h = homology(&fixtures::one_tet_closed()).unwrap();
        assert_groups(&h, [(1, &[]), (0, &[]), (0, &[]), (1, &[])]);
    }

    #[test]
    fn lens_homology() {
        let h = homology(&fixtures::lens(5, 1)).unwrap();
        assert_groups(&h, [(1, &[]), (0, &[5]), (0, &[]), (1, &[])]);
        let h = homology(&fixtures::lens(4, 1)).unwrap();
        assert_groups(&h, [(1, &[]), (0, &[4]), (0, &[]), (1, &[])]);
    }

    #[test]
    fn cusped_homology_is_of_the_compact_manifold() {
        // figure-eight knot exterior: H = (Z, Z, 0, 0)
        let h = homology(&fixtures::m004()).unwrap();
        assert_groups(&h, [(1, &[]), (1, &[]), (0, &[]), (0, &[])]);
        // its sister: H_1 = Z + Z/5
        let h = homology(&fixtures::m003()).unwrap();
        assert_groups(&h, [(1, &[]), (1, &[5]), (0, &[]), (0, &[])]);
    }

    #[test]
    fn connected_sum_is_a_sphere() {
        let h = homology(&fixtures::connected_sum_demo()).unwrap();
        assert_groups(&h, [(1, &[]), (0, &[]), (0, &[]), (1, &[])]);
    }

    #[test]
    fn orientation_and_fundamental_class() {
        let info = orientability_and_fundamental_class(&fixtures::boundary_4_simplex()).unwrap();
        assert!(info.orientable && info.closed);
        assert!(info.fundamental_class.is_some());

        let info = orientability_and_fundamental_class(&fixtures::m004()).unwrap();
        assert!(info.orientable && !info.closed);
        assert!(info.fundamental_class.is_none());

        let info = orientability_and_fundamental_class(&fixtures::gieseking_like()).unwrap();
        assert!(!info.orientable);
    }

    #[test]
    fn disjoint_union_adds() {
        let a = fixtures::m004();
        let u = a.disjoint_union(&fixtures::lens(5, 1), "mix");
        let h = homology(&u).unwrap();
        assert_eq!(h.groups[0].rank, 2);
        assert_eq!(h.groups[1].rank, 1);
        assert_eq!(h.groups[1].torsion, vec!["5".to_string()]);
    }

    /// Independent oracle: a plain fraction-free row reduction computing the
    /// same invariant factors by gcd elimination, no pivot strategy shared
    /// with the production code path.
    mod oracle {
        use num_bigint::BigInt;
        use num_traits::{Signed, Zero};

        pub fn invariant_factors(rows: Vec<Vec<i64>>) -> Vec<BigInt> {
            let r = rows.len();
            let c = rows.first().map_or(0, |x| x.len());
            let mut a: Vec<Vec<BigInt>> = rows
                .into_iter()
                .map(|row| row.into_iter().map(BigInt::from).collect())
                .collect();
            let mut out = Vec::new();
            let mut t = 0;
            while t < r.min(c) {
                // any nonzero entry will do; reduce the whole submatrix by gcd steps
                let mut found = false;
                'outer: for i in t..r {
                    for j in t..c {
                        if !a[i][j].is_zero() {
                            a.swap(t, i);
                            for row in a.iter_mut() {
                                row.swap(t, j);
                            }
                            found = true;
                            break 'outer;
                        }
                    }
                }
                if !found {
                    break;
                }
                loop {
                    let mut changed = false;
                    for i in t + 1..r {
                        while !a[i][t].is_zero() {
                            let q = &a[i][t] / &a[t][t];
                            for j in t..c {
                                let s = &q * &a[t][j];
                                a[i][j] = &a[i][j] - s;
                            }
                            if !a[i][t].is_zero() {
                                a.swap(t, i);
                                changed = true;
                            }
                        }
                    }
                    for j in t + 1..c {
                        while !a[t][j].is_zero() {
                            let q = &a[t][j] / &a[t][t];
                            for i in t..r {
                                let s = &q * &a[i][t];
                                a[i][j] = &a[i][j] - s;
                            }
                            if !a[t][j].is_zero() {
                                for row in a.iter_mut() {
                                    row.swap(t, j);
                                }
                                changed = true;
                            }
                        }
                    }
                    if !changed {
                        break;
                    }
                }
                out.push(a[t][t].abs());
                t += 1;
            }
            // enforce the divisibility chain by pairwise gcd/lcm fixups
            loop {
                let mut stable = true;
                for i in 0..out.len().saturating_sub(1) {
                    for j in i + 1..out.len() {
                        let (x, y) = (out[i].clone(), out[j].clone());
                        if (&y % &x).is_zero() {
                            continue;
                        }
                        let g = gcd(x.clone(), y.clone());
                        let l = &x * &y / &g;
                        out[i] = g;
                        out[j] = l;
                        stable = false;
                    }
                }
                if stable {
                    break;
                }
            }
            out
        }

        fn gcd(a: BigInt, b: BigInt) -> BigInt {
            if b.is_zero() {
                a.abs()
            } else {
                gcd(b.clone(), a % b)
            }
        }
    }

    #[test]
    fn snf_matches_row_reduction_oracle_on_fixture_matrices() {
        for tri in [fixtures::lens(5, 1), fixtures::m004(), fixtures::m003()] {
            let cx = chain_complex(&tri).unwrap();
            for d in [&cx.d1, &cx.d2, &cx.d3] {
                let rows: Vec<Vec<i64>> =
                    (0..d.rows).map(|i| (0..d.cols).map(|j| d.get(i, j)).collect()).collect();
                let ours = invariant_factors(&IntMat::from_rows(rows.clone()));
                let theirs = oracle::invariant_factors(rows);
                assert_eq!(ours, theirs, "{}", tri.name());
            }
        }
    }
}
