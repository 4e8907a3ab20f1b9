//! Pachner (bistellar) moves: 1-4, 2-3, 3-2, 4-1.
//!
//! Moves act on simplex classes of a valid closed or cusped triangulation.
//! `apply_move` returns the new triangulation together with the descriptor of
//! the inverse move, located in the new triangulation, so move sequences can
//! be unwound exactly.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::perm::Perm4;
use crate::triangulation::{
    edge_index, others, Gluing, Triangulation, VertexKind, EDGE_VERTS,
};

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum MoveKind {
    #[serde(rename = "1-4")]
    OneFour,
    #[serde(rename = "2-3")]
    TwoThree,
    #[serde(rename = "3-2")]
    ThreeTwo,
    #[serde(rename = "4-1")]
    FourOne,
}

impl std::fmt::Display for MoveKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            MoveKind::OneFour => "1-4",
            MoveKind::TwoThree => "2-3",
            MoveKind::ThreeTwo => "3-2",
            MoveKind::FourOne => "4-1",
        };
        f.write_str(s)
    }
}

/// Where a move acts: the class representative of the simplex involved.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "at")]
pub enum MoveLocation {
    #[serde(rename = "tetrahedron")]
    Tet { tet: usize },
    #[serde(rename = "triangle")]
    Triangle { tet: usize, face: usize },
    #[serde(rename = "edge")]
    Edge { tet: usize, edge: usize },
    #[serde(rename = "vertex")]
    Vertex { tet: usize, corner: usize },
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PachnerMove {
    pub kind: MoveKind,
    #[serde(flatten)]
    pub location: MoveLocation,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MoveError {
    #[error("triangulation is not a valid closed or cusped manifold: {0}")]
    InvalidTriangulation(String),
    #[error("move {kind} is not applicable at {location:?}")]
    NotApplicable { kind: MoveKind, location: MoveLocation },
}

pub struct MoveOutcome {
    pub result: Triangulation,
    /// the inverse move, located in `result`
    pub inverse: PachnerMove,
}

/// Exactly the applicable moves: 1-4 at every tetrahedron, 2-3 at interior
/// triangle classes with two distinct tetrahedra, 3-2 at interior degree-3
/// edge classes with three distinct tetrahedra, 4-1 at material degree-4
/// vertex classes with embedded stars.
pub fn enumerate_moves(tri: &Triangulation) -> Result<Vec<PachnerMove>, MoveError> {
    let report = tri.validate();
    if !report.is_manifold {
        return Err(MoveError::InvalidTriangulation(
            report.offending.unwrap_or_else(|| "invalid".into()),
        ));
    }
    let skel = tri.skeleton();
    let mut out = Vec::new();
    for i in 0..tri.tetra_count() {
        out.push(PachnerMove { kind: MoveKind::OneFour, location: MoveLocation::Tet { tet: i } });
    }
    for members in &skel.triangle_members {
        if members.len() == 2 && members[0].0 != members[1].0 {
            let (tet, face) = members[0];
            out.push(PachnerMove {
                kind: MoveKind::TwoThree,
                location: MoveLocation::Triangle { tet, face },
            });
        }
    }
    for (class, members) in skel.edge_members.iter().enumerate() {
        if members.len() == 3 && distinct_tets(members) && walk_edge(tri, members[0]).is_some() {
            let _ = class;
            let (tet, edge) = members[0];
            out.push(PachnerMove {
                kind: MoveKind::ThreeTwo,
                location: MoveLocation::Edge { tet, edge },
            });
        }
    }
    for (class, members) in skel.vertex_members.iter().enumerate() {
        if members.len() == 4
            && distinct_tets(members)
            && report.skeleton.vertex_links[class].kind == VertexKind::Material
            && star_outer_classes(tri, members).is_some()
        {
            let (tet, corner) = members[0];
            out.push(PachnerMove {
                kind: MoveKind::FourOne,
                location: MoveLocation::Vertex { tet, corner },
            });
        }
    }
    Ok(out)
}

fn distinct_tets(members: &[(usize, usize)]) -> bool {
    for a in 0..members.len() {
        for b in a + 1..members.len() {
            if members[a].0 == members[b].0 {
                return false;
            }
        }
    }
    true
}

pub fn apply_move(tri: &Triangulation, mv: PachnerMove) -> Result<MoveOutcome, MoveError> {
    match (mv.kind, mv.location) {
        (MoveKind::OneFour, MoveLocation::Tet { tet }) => one_four(tri, tet, mv),
        (MoveKind::TwoThree, MoveLocation::Triangle { tet, face }) => {
            two_three(tri, tet, face, mv)
        }
        (MoveKind::ThreeTwo, MoveLocation::Edge { tet, edge }) => three_two(tri, tet, edge, mv),
        (MoveKind::FourOne, MoveLocation::Vertex { tet, corner }) => {
            four_one(tri, tet, corner, mv)
        }
        _ => Err(MoveError::NotApplicable { kind: mv.kind, location: mv.location }),
    }
}

/// Shared rebuild: removes the `removed` tetrahedra, appends the `added`
/// rows (internal references indexed within the added block), and rewires
/// every reference into the removed block through `face_map`, which sends an
/// external (old tet, old face) of the removed block to
/// (added index, vertex translation from old positions to new positions).
fn rebuild(
    tri: &Triangulation,
    name: &str,
    removed: &[usize],
    added: Vec<[Option<Gluing>; 4]>,
    face_map: &std::collections::HashMap<(usize, usize), (usize, Perm4)>,
) -> (Triangulation, Vec<usize>, usize) {
    let t = tri.tetra_count();
    let keep: Vec<usize> = (0..t).filter(|i| !removed.contains(i)).collect();
    let mut compact = vec![usize::MAX; t];
    for (n, &old) in keep.iter().enumerate() {
        compact[old] = n;
    }
    let base = keep.len();
    let mut gluings: Vec<[Option<Gluing>; 4]> = Vec::with_capacity(base + added.len());

    for &old in &keep {
        let mut row = [None; 4];
        for f in 0..4 {
            if let Some(g) = tri.gluing(old, f) {
                row[f] = if compact[g.tet] != usize::MAX {
                    Some(Gluing { tet: compact[g.tet], perm: g.perm })
                } else {
                    // the glued face on the removed tet is sigma(f)
                    let (a, tau) = face_map[&(g.tet, g.perm.apply(f))];
                    Some(Gluing { tet: base + a, perm: tau.compose(&g.perm) })
                };
            }
        }
        gluings.push(row);
    }
    for row in &added {
        let mut fixed = [None; 4];
        for f in 0..4 {
            if let Some(g) = row[f] {
                fixed[f] = Some(Gluing { tet: base + g.tet, perm: g.perm });
            }
        }
        gluings.push(fixed);
    }
    for (&(r, fr), &(a, tau)) in face_map {
        let Some(g) = tri.gluing(r, fr) else { continue };
        let fa = tau.apply(fr);
        let entry = if compact[g.tet] != usize::MAX {
            Gluing { tet: compact[g.tet], perm: g.perm.compose(&tau.inverse()) }
        } else {
            let (b, tau2) = face_map[&(g.tet, g.perm.apply(fr))];
            Gluing { tet: base + b, perm: tau2.compose(&g.perm).compose(&tau.inverse()) }
        };
        gluings[base + a][fa] = Some(entry);
    }
    let result = Triangulation::new(name, gluings).expect("moves produce well-formed tables");
    (result, compact, base)
}

// 1-4: cone a tetrahedron to its barycenter. New tet N_a keeps the old
// vertices except that position a holds the new center.
fn one_four(tri: &Triangulation, tet: usize, mv: PachnerMove) -> Result<MoveOutcome, MoveError> {
    if tet >= tri.tetra_count() {
        return Err(MoveError::NotApplicable { kind: mv.kind, location: mv.location });
    }
    let mut added: Vec<[Option<Gluing>; 4]> = vec![[None; 4]; 4];
    for a in 0..4 {
        for b in 0..4 {
            if a != b {
                // N_a face b meets N_b face a; vertices swap roles a <-> b
                added[a][b] =
                    Some(Gluing { tet: b, perm: Perm4::transposition(a, b) });
            }
        }
    }
    let mut face_map = std::collections::HashMap::new();
    for a in 0..4 {
        face_map.insert((tet, a), (a, Perm4::IDENTITY));
    }
    let (result, _, base) = rebuild(tri, tri.name(), &[tet], added, &face_map);
    let inverse = PachnerMove {
        kind: MoveKind::FourOne,
        location: MoveLocation::Vertex { tet: base, corner: 0 },
    };
    Ok(MoveOutcome { result, inverse })
}

// 2-3: replace two tetrahedra sharing a face by three around a new edge.
fn two_three(
    tri: &Triangulation,
    tet: usize,
    face: usize,
    mv: PachnerMove,
) -> Result<MoveOutcome, MoveError> {
    let fail = || MoveError::NotApplicable { kind: mv.kind, location: mv.location };
    if tet >= tri.tetra_count() || face >= 4 {
        return Err(fail());
    }
    let g = tri.gluing(tet, face).ok_or_else(fail)?;
    let (a_tet, b_tet, sigma) = (tet, g.tet, g.perm);
    if a_tet == b_tet {
        return Err(fail());
    }
    let fa = face;
    let fb = sigma.apply(face);
    // x-roles: ascending positions of A's shared face
    let xs_a = others(fa); // A position of x_k
    let xs_b: [usize; 3] = [sigma.apply(xs_a[0]), sigma.apply(xs_a[1]), sigma.apply(xs_a[2])];

    // C_k: 0 = apex of A, 1 = apex of B, 2 and 3 = the two x's other than
    // x_k in ascending index order
    let xpos = |k: usize, m: usize| -> usize {
        // position of x_m inside C_k
        let mine: Vec<usize> = (0..3).filter(|&x| x != k).collect();
        2 + mine.iter().position(|&x| x == m).expect("x_m in C_k")
    };

    let mut added: Vec<[Option<Gluing>; 4]> = vec![[None; 4]; 3];
    for k in 0..3 {
        for l in 0..3 {
            if k == l {
                continue;
            }
            // C_k and C_l share face {a, b, x_m}, m the third index
            let m = 3 - k - l;
            let my_face = xpos(k, l); // omits x_l
            let mut image = [0u8; 4];
            image[0] = 0;
            image[1] = 1;
            image[xpos(k, m)] = xpos(l, m) as u8;
            image[my_face] = xpos(l, k) as u8; // face index on the far side
            added[k][my_face] = Some(Gluing { tet: l, perm: Perm4::new(image).unwrap() });
        }
    }

    let mut face_map = std::collections::HashMap::new();
    for k in 0..3 {
        // A's face omitting x_k maps to C_k face 1
        let p = xs_a[k];
        let mut image = [0u8; 4];
        image[fa] = 0;
        image[p] = 1;
        for m in 0..3 {
            if m != k {
                image[xs_a[m]] = xpos(k, m) as u8;
            }
        }
        face_map.insert((a_tet, p), (k, Perm4::new(image).unwrap()));
        // B's face omitting x_k maps to C_k face 0
        let q = xs_b[k];
        let mut image = [0u8; 4];
        image[fb] = 1;
        image[q] = 0;
        for m in 0..3 {
            if m != k {
                image[xs_b[m]] = xpos(k, m) as u8;
            }
        }
        face_map.insert((b_tet, q), (k, Perm4::new(image).unwrap()));
    }

    let removed = if a_tet < b_tet { vec![a_tet, b_tet] } else { vec![b_tet, a_tet] };
    let (result, _, base) = rebuild(tri, tri.name(), &removed, added, &face_map);
    let inverse = PachnerMove {
        kind: MoveKind::ThreeTwo,
        location: MoveLocation::Edge { tet: base, edge: edge_index(0, 1) },
    };
    Ok(MoveOutcome { result, inverse })
}

/// Walks around an edge of degree 3. Returns the cycle as
/// (tet, a position, b position, entry face, exit face) triples, or None if
/// the configuration does not close up through three distinct tetrahedra.
fn walk_edge(
    tri: &Triangulation,
    start: (usize, usize),
) -> Option<[(usize, usize, usize, usize, usize); 3]> {
    let (t0, e0) = start;
    let (a0, b0) = EDGE_VERTS[e0];
    // the two faces of t0 containing the edge
    let fs: Vec<usize> = (0..4).filter(|&f| f != a0 && f != b0).collect();
    let (entry0, exit0) = (fs[0], fs[1]);
    let mut cycle = [(0usize, 0usize, 0usize, 0usize, 0usize); 3];
    let (mut t, mut a, mut b, mut exit) = (t0, a0, b0, exit0);
    let mut entry = entry0;
    for step in 0..3 {
        cycle[step] = (t, a, b, entry, exit);
        let g = tri.gluing(t, exit)?;
        let sigma = g.perm;
        let (nt, na, nb) = (g.tet, sigma.apply(a), sigma.apply(b));
        let nentry = sigma.apply(exit);
        let nexit = (0..4).find(|&f| f != na && f != nb && f != nentry).unwrap();
        t = nt;
        a = na;
        b = nb;
        entry = nentry;
        exit = nexit;
    }
    // must close on the same oriented edge through the expected face
    if (t, a, b, entry) != (t0, a0, b0, entry0) {
        return None;
    }
    let tets = [cycle[0].0, cycle[1].0, cycle[2].0];
    if tets[0] == tets[1] || tets[0] == tets[2] || tets[1] == tets[2] {
        return None;
    }
    Some(cycle)
}

// 3-2: collapse three tetrahedra around a degree-3 edge into two.
fn three_two(
    tri: &Triangulation,
    tet: usize,
    edge: usize,
    mv: PachnerMove,
) -> Result<MoveOutcome, MoveError> {
    let fail = || MoveError::NotApplicable { kind: mv.kind, location: mv.location };
    if tet >= tri.tetra_count() || edge >= 6 {
        return Err(fail());
    }
    let skel = tri.skeleton();
    let class = skel.edge_class_of[6 * tet + edge];
    if skel.edge_members[class].len() != 3 {
        return Err(fail());
    }
    let cycle = walk_edge(tri, (tet, edge)).ok_or_else(fail)?;

    // x_2 is the third vertex of the face between C_0 and C_1, x_0 between
    // C_1 and C_2, x_1 between C_2 and C_0; record positions per tet.
    // cycle[k] = (tet, a, b, entry, exit); exit face of C_k leads to C_{k+1}
    let third = |k: usize| -> usize {
        let (_, a, b, _, exit) = cycle[k];
        (0..4).find(|&v| v != a && v != b && v != exit).unwrap()
    };
    let _ = third;
    // position of x_m inside C_k: x assigned from shared faces
    // exit of C_0 carries x_2, exit of C_1 carries x_0, exit of C_2 carries x_1
    let mut xpos = [[usize::MAX; 3]; 3]; // xpos[k][m] = position of x_m in C_k
    let xout = [2usize, 0, 1]; // exit of C_k names x_{xout[k]}
    for k in 0..3 {
        let (t_k, a, b, _, exit) = cycle[k];
        let m = xout[k];
        // the vertex on the exit face other than a, b
        let v = (0..4).find(|&v| v != a && v != b && v != exit).unwrap();
        xpos[k][m] = v;
        // transport across the gluing to C_{k+1}: entry face there
        let g = tri.gluing(t_k, exit).unwrap();
        xpos[(k + 1) % 3][m] = g.perm.apply(v);
    }
    for k in 0..3 {
        // C_k must carry exactly the two xs other than x_k, in distinct slots
        let (t_k, a, b, ..) = cycle[k];
        let mut seen = vec![a, b];
        for m in 0..3 {
            if m == k {
                if xpos[k][m] != usize::MAX {
                    return Err(fail());
                }
                continue;
            }
            let p = xpos[k][m];
            if p == usize::MAX || seen.contains(&p) {
                return Err(fail());
            }
            seen.push(p);
        }
        let _ = t_k;
    }

    // A = (x0, x1, x2, a), B = (x0, x1, x2, b), glued along face 3
    let mut added: Vec<[Option<Gluing>; 4]> = vec![[None; 4]; 2];
    added[0][3] = Some(Gluing { tet: 1, perm: Perm4::IDENTITY });
    added[1][3] = Some(Gluing { tet: 0, perm: Perm4::IDENTITY });

    let mut face_map = std::collections::HashMap::new();
    for k in 0..3 {
        let (t_k, a, b, ..) = cycle[k];
        // face of C_k omitting b -> A's face k
        let mut image = [0u8; 4];
        image[a] = 3;
        image[b] = k as u8;
        for m in 0..3 {
            if m != k {
                image[xpos[k][m]] = m as u8;
            }
        }
        face_map.insert((t_k, b), (0, Perm4::new(image).unwrap()));
        // face of C_k omitting a -> B's face k
        let mut image = [0u8; 4];
        image[b] = 3;
        image[a] = k as u8;
        for m in 0..3 {
            if m != k {
                image[xpos[k][m]] = m as u8;
            }
        }
        face_map.insert((t_k, a), (1, Perm4::new(image).unwrap()));
    }

    let mut removed: Vec<usize> = vec![cycle[0].0, cycle[1].0, cycle[2].0];
    removed.sort_unstable();
    let (result, _, base) = rebuild(tri, tri.name(), &removed, added, &face_map);
    let inverse = PachnerMove {
        kind: MoveKind::TwoThree,
        location: MoveLocation::Triangle { tet: base, face: 3 },
    };
    Ok(MoveOutcome { result, inverse })
}

/// The outer-vertex structure of an embedded degree-4 star: local classes of
/// non-center corners, one absent from each star tetrahedron.
/// Returns cls[member][position] = outer class index, or None if not a model star.
fn star_outer_classes(
    tri: &Triangulation,
    members: &[(usize, usize)],
) -> Option<Vec<[usize; 4]>> {
    let member_of = |tet: usize| members.iter().position(|&(t, _)| t == tet);
    // local union-find keyed by member*4 + position
    let mut uf = crate::triangulation::UnionFind::new(16);
    for (mi, &(t, c)) in members.iter().enumerate() {
        for f in 0..4 {
            if f == c {
                continue; // the face opposite the center is external
            }
            let g = tri.gluing(t, f)?;
            let mj = member_of(g.tet)?;
            // the gluing must send center to center
            if g.perm.apply(c) != members[mj].1 {
                return None;
            }
            for p in 0..4 {
                if p != f && p != c {
                    uf.union(4 * mi + p, 4 * mj + g.perm.apply(p));
                }
            }
        }
    }
    // collect outer classes
    let mut ids = std::collections::HashMap::new();
    let mut cls = vec![[usize::MAX; 4]; 4];
    for (mi, &(_, c)) in members.iter().enumerate() {
        for p in 0..4 {
            if p == c {
                continue;
            }
            let root = uf.find(4 * mi + p);
            let next = ids.len();
            let id = *ids.entry(root).or_insert(next);
            cls[mi][p] = id;
        }
    }
    if ids.len() != 4 {
        return None;
    }
    // outer class k must be present in exactly the three members other than
    // some unique member; renumber classes so class absent from member k is k
    let mut absent = [usize::MAX; 4]; // absent[class] = member missing it
    for class in 0..4 {
        let mut missing = Vec::new();
        for (mi, &(_, c)) in members.iter().enumerate() {
            let mut found = false;
            for p in 0..4 {
                if p != c && cls[mi][p] == class {
                    found = true;
                }
            }
            if !found {
                missing.push(mi);
            }
        }
        if missing.len() != 1 {
            return None;
        }
        absent[class] = missing[0];
    }
    // renumber: class -> absent member index
    let mut renumbered = vec![[usize::MAX; 4]; 4];
    for mi in 0..4 {
        let (_, c) = members[mi];
        for p in 0..4 {
            if p != c {
                renumbered[mi][p] = absent[cls[mi][p]];
            }
        }
    }
    // each member must see the three classes other than its own index
    for (mi, row) in renumbered.iter().enumerate() {
        let (_, c) = members[mi];
        let mut seen: Vec<usize> = (0..4).filter(|&p| p != c).map(|p| row[p]).collect();
        seen.sort_unstable();
        let expect: Vec<usize> = (0..4).filter(|&k| k != mi).collect();
        if seen != expect {
            return None;
        }
    }
    Some(renumbered)
}

// 4-1: collapse the embedded star of a degree-4 material vertex to one tet.
fn four_one(
    tri: &Triangulation,
    tet: usize,
    corner: usize,
    mv: PachnerMove,
) -> Result<MoveOutcome, MoveError> {
    let fail = || MoveError::NotApplicable { kind: mv.kind, location: mv.location };
    if tet >= tri.tetra_count() || corner >= 4 {
        return Err(fail());
    }
    let skel = tri.skeleton();
    let class = skel.vertex_class(tet, corner);
    let members = skel.vertex_members[class].clone();
    if members.len() != 4 || !distinct_tets(&members) {
        return Err(fail());
    }
    if crate::triangulation::link_info_for_class(tri, &skel, class).kind != VertexKind::Material {
        return Err(fail());
    }
    let cls = star_outer_classes(tri, &members).ok_or_else(fail)?;

    // single new tet D; member k's external face becomes D's face k
    let added: Vec<[Option<Gluing>; 4]> = vec![[None; 4]; 1];
    let mut face_map = std::collections::HashMap::new();
    for (mi, &(t, c)) in members.iter().enumerate() {
        let mut image = [0u8; 4];
        image[c] = mi as u8;
        for p in 0..4 {
            if p != c {
                image[p] = cls[mi][p] as u8;
            }
        }
        face_map.insert((t, c), (0, Perm4::new(image).unwrap()));
    }

    let mut removed: Vec<usize> = members.iter().map(|&(t, _)| t).collect();
    removed.sort_unstable();
    let (result, _, base) = rebuild(tri, tri.name(), &removed, added, &face_map);
    let inverse =
        PachnerMove { kind: MoveKind::OneFour, location: MoveLocation::Tet { tet: base } };
    Ok(MoveOutcome { result, inverse })
}
