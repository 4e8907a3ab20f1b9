//! Reconstruction of the surface carried by an admissible coordinate vector:
//! explicit elementary disks, glued along normal arcs, with per-component
//! Euler characteristic and orientability.
//!
//! Exponential in the coordinates, which is fine at desk scale; points on a
//! tetrahedron edge are indexed by their order along the edge (triangles at
//! the near corner first, then quadrilaterals, then the far corner's
//! triangles reversed).

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::triangulation::{edge_index, others, Triangulation, EDGE_VERTS};

use super::{matching_system, quad_pairs, NormalCoordVector, NormalError};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurfaceComponent {
    pub euler_characteristic: i64,
    pub orientable: bool,
    pub closed: bool,
    pub disks: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NormalSurface {
    pub coordinates: NormalCoordVector,
    pub components: Vec<SurfaceComponent>,
    pub total_euler_characteristic: i64,
}

impl NormalSurface {
    pub fn connected(&self) -> bool {
        self.components.len() == 1
    }

    pub fn is_sphere(&self) -> bool {
        self.connected() && self.components[0].closed && self.components[0].euler_characteristic == 2
    }

    pub fn is_torus(&self) -> bool {
        self.connected()
            && self.components[0].closed
            && self.components[0].euler_characteristic == 0
            && self.components[0].orientable
    }
}

/// A disk of the surface inside one tetrahedron.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
enum Disk {
    Tri { tet: usize, corner: usize, copy: i64 },
    Quad { tet: usize, pairing: usize, copy: i64 },
}

pub fn reconstruct(
    tri: &Triangulation,
    v: &NormalCoordVector,
) -> Result<NormalSurface, NormalError> {
    let sys = matching_system(tri)?;
    sys.contains(v)?;
    v.admissible()?;
    let skel = tri.skeleton();
    let t = tri.tetra_count();

    // --- points on edges ---------------------------------------------------
    // position of a crossing along tetrahedron edge (a, b), measured from a
    let count_on_edge = |tet: usize, a: usize, b: usize| -> i64 {
        let crossing: i64 = (0..3)
            .filter(|&q| {
                let (p1, p2) = quad_pairs(q);
                // the quad crosses (a, b) unless it separates {a, b}
                !(p1 == [a.min(b), a.max(b)] || p2 == [a.min(b), a.max(b)])
            })
            .map(|q| v.quad(tet, q))
            .sum();
        v.tri(tet, a) + crossing + v.tri(tet, b)
    };

    // global point id: (edge class, position along the class representative)
    let mut point_ids: HashMap<(usize, i64), usize> = HashMap::new();
    let mut point_of = |skel_class: usize, pos_rep: i64, next: &mut usize| -> usize {
        *point_ids.entry((skel_class, pos_rep)).or_insert_with(|| {
            let id = *next;
            *next += 1;
            id
        })
    };
    let mut next_point = 0usize;

    // position of a crossing along the class representative direction
    let rep_position = |tet: usize, a: usize, b: usize, pos_from_a: i64| -> (usize, i64) {
        let e = edge_index(a, b);
        let class = skel.edge_class_of[6 * tet + e];
        let n = count_on_edge(tet, a, b);
        let (lo, _hi) = EDGE_VERTS[e];
        // pos measured from the ascending end of this member
        let pos_asc = if a == lo { pos_from_a } else { n - 1 - pos_from_a };
        let dir = skel.edge_direction[6 * tet + e];
        let pos_rep = if dir == 1 { pos_asc } else { n - 1 - pos_asc };
        (class, pos_rep)
    };

    // point where a disk crosses tetrahedron edge (a, b):
    // triangles at a sit at 0..tri(a); quadrilateral copies follow, ordered
    // away from the pair containing vertex 0; triangles at b come last.
    let tri_point = |tet: usize, corner: usize, other: usize, copy: i64| -> (usize, i64) {
        rep_position(tet, corner, other, copy)
    };
    let quad_point = |tet: usize, q: usize, copy: i64, a: usize, b: usize| -> (usize, i64) {
        let (p1, _p2) = quad_pairs(q);
        let qn = v.quad(tet, q);
        // copy 0 lies nearest the p1 edge; from vertex a the copies run
        // outward if a is in p1, inward otherwise
        let from_a = if p1.contains(&a) {
            v.tri(tet, a) + copy
        } else {
            v.tri(tet, a) + (qn - 1 - copy)
        };
        let _ = b;
        rep_position(tet, a, b, from_a)
    };

    // --- disks and their boundary sides ------------------------------------
    let mut disks: Vec<Disk> = Vec::new();
    let mut disk_index: HashMap<Disk, usize> = HashMap::new();
    for tet in 0..t {
        for corner in 0..4 {
            for copy in 0..v.tri(tet, corner) {
                let d = Disk::Tri { tet, corner, copy };
                disk_index.insert(d, disks.len());
                disks.push(d);
            }
        }
        for pairing in 0..3 {
            for copy in 0..v.quad(tet, pairing) {
                let d = Disk::Quad { tet, pairing, copy };
                disk_index.insert(d, disks.len());
                disks.push(d);
            }
        }
    }

    // each side: (disk, face, start point, end point) in traversal order
    struct Side {
        disk: usize,
        start: usize,
        end: usize,
    }
    // sides keyed by (triangle class, unordered point pair)
    let mut by_arc: HashMap<(usize, (usize, usize)), Vec<Side>> = HashMap::new();
    let mut total_sides = 0usize;

    for (di, d) in disks.iter().enumerate() {
        let sides: Vec<(usize, (usize, i64), (usize, i64))> = match *d {
            Disk::Tri { tet, corner, copy } => {
                let [x, y, z] = others(corner);
                // boundary cycle P_x -> P_y -> P_z; side between P_u and P_w
                // lies on the face {corner, u, w}, i.e. face index = third
                let px = tri_point(tet, corner, x, copy);
                let py = tri_point(tet, corner, y, copy);
                let pz = tri_point(tet, corner, z, copy);
                vec![(z, px, py), (x, py, pz), (y, pz, px)]
                    .into_iter()
                    .map(|(f, p, q)| (4 * tet + f, p, q))
                    .collect()
            }
            Disk::Quad { tet, pairing, copy } => {
                let ([x, y], [z, w]) = quad_pairs(pairing);
                let pxz = quad_point(tet, pairing, copy, x, z);
                let pxw = quad_point(tet, pairing, copy, x, w);
                let pyw = quad_point(tet, pairing, copy, y, w);
                let pyz = quad_point(tet, pairing, copy, y, z);
                // cycle P_xz -> P_xw -> P_yw -> P_yz; faces are the vertices
                // missing from each side
                vec![(y, pxz, pxw), (z, pxw, pyw), (x, pyw, pyz), (w, pyz, pxz)]
                    .into_iter()
                    .map(|(f, p, q)| (4 * tet + f, p, q))
                    .collect()
            }
        };
        for (face_slot, p, q) in sides {
            let (tet, face) = (face_slot / 4, face_slot % 4);
            let class = skel.triangle_class(tet, face);
            let pid = point_of(p.0, p.1, &mut next_point);
            let qid = point_of(q.0, q.1, &mut next_point);
            let key = (class, (pid.min(qid), pid.max(qid)));
            by_arc.entry(key).or_default().push(Side { disk: di, start: pid, end: qid });
            total_sides += 1;
        }
    }

    // --- glue, count, orient ------------------------------------------------
    let mut conn = crate::triangulation::UnionFind::new(disks.len().max(1));
    let mut orient = crate::triangulation::ParityUnionFind::new(disks.len().max(1));
    let mut orientable_conflict: Vec<bool> = vec![false; disks.len().max(1)];
    let mut glued_pairs = 0usize;
    let mut boundary_sides = 0usize;

    for (key, sides) in &by_arc {
        match sides.len() {
            1 => boundary_sides += 1,
            2 => {
                glued_pairs += 1;
                let (s1, s2) = (&sides[0], &sides[1]);
                conn.union(s1.disk, s2.disk);
                // compatible orientations traverse the shared arc oppositely
                let rel = if s1.start == s2.end && s1.end == s2.start {
                    0
                } else {
                    debug_assert!(s1.start == s2.start && s1.end == s2.end);
                    1
                };
                if !orient.union(s1.disk, s2.disk, rel) {
                    orientable_conflict[conn.find(s1.disk)] = true;
                }
            }
            n => panic!("arc {key:?} carried by {n} sides; matching equations violated"),
        }
    }
    let _ = boundary_sides;

    // vertices per component: each point is incident to one component
    let mut points_of_component: HashMap<usize, std::collections::HashSet<usize>> = HashMap::new();
    let mut sides_of_component: HashMap<usize, usize> = HashMap::new();
    let mut disks_of_component: HashMap<usize, usize> = HashMap::new();
    let mut closed_of_component: HashMap<usize, bool> = HashMap::new();
    for sides in by_arc.values() {
        for s in sides {
            let root = conn.find(s.disk);
            points_of_component.entry(root).or_default().insert(s.start);
            points_of_component.entry(root).or_default().insert(s.end);
        }
        let root = conn.find(sides[0].disk);
        *sides_of_component.entry(root).or_default() += 1;
        if sides.len() == 1 {
            closed_of_component.insert(root, false);
        }
    }
    for di in 0..disks.len() {
        *disks_of_component.entry(conn.find(di)).or_default() += 1;
    }

    // orientation conflicts may have been recorded under stale roots
    let mut conflict_roots: std::collections::HashSet<usize> = Default::default();
    for (di, &flag) in orientable_conflict.iter().enumerate() {
        if flag {
            conflict_roots.insert(conn.find(di));
        }
    }

    let mut roots: Vec<usize> = disks_of_component.keys().copied().collect();
    roots.sort_unstable();
    let mut components = Vec::new();
    for root in roots {
        let v_count = points_of_component.get(&root).map_or(0, |s| s.len()) as i64;
        let e_count = *sides_of_component.get(&root).unwrap_or(&0) as i64;
        let f_count = disks_of_component[&root] as i64;
        let closed = *closed_of_component.get(&root).unwrap_or(&true);
        components.push(SurfaceComponent {
            euler_characteristic: v_count - e_count + f_count,
            orientable: !conflict_roots.contains(&root),
            closed,
            disks: f_count as usize,
        });
    }
    debug_assert_eq!(total_sides, 2 * glued_pairs + boundary_sides);
    let total = components.iter().map(|c| c.euler_characteristic).sum();
    Ok(NormalSurface {
        coordinates: v.clone(),
        components,
        total_euler_characteristic: total,
    })
}
