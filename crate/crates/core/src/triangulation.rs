//! Generalized triangulations: tetrahedra with affine face pairings.
//!
//! A triangulation is a gluing table. Entry `(i, f)` describes what face `f`
//! of tetrahedron `i` (the face opposite vertex `f`) is glued to: either
//! nothing (a boundary face) or a pair `(j, sigma)` meaning vertex `k` of
//! tetrahedron `i` corresponds to vertex `sigma(k)` of tetrahedron `j`.
//! Faces are identified in pairs; the table must be an involution.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::perm::Perm4;

/// Vertex pairs of the six edges of a tetrahedron, indexed 0..6.
pub const EDGE_VERTS: [(usize, usize); 6] = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];

/// Index of the edge with endpoints {a, b}.
pub fn edge_index(a: usize, b: usize) -> usize {
    let (lo, hi) = if a < b { (a, b) } else { (b, a) };
    EDGE_VERTS.iter().position(|&e| e == (lo, hi)).expect("distinct vertices in 0..4")
}

/// The three vertices of face `f`, ascending.
pub fn face_verts(f: usize) -> [usize; 3] {
    let mut out = [0usize; 3];
    let mut k = 0;
    for v in 0..4 {
        if v != f {
            out[k] = v;
            k += 1;
        }
    }
    out
}

/// The three vertices adjacent to `v`, ascending. Same as `face_verts`.
pub fn others(v: usize) -> [usize; 3] {
    face_verts(v)
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum StructuralError {
    #[error("permutation is not a bijection of 0..4: {digits:?}")]
    BadPermutation { digits: String },
    #[error("gluing of tetrahedron {tet} face {face} points at tetrahedron {target} which is out of range")]
    TargetOutOfRange { tet: usize, face: usize, target: usize },
    #[error("gluing table is not an involution at tetrahedron {tet} face {face}")]
    NotInvolution { tet: usize, face: usize },
    #[error("tetrahedron {tet} face {face} is glued to itself by the identity")]
    IdentitySelfGluing { tet: usize, face: usize },
}

/// One side of a face pairing.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Gluing {
    pub tet: usize,
    pub perm: Perm4,
}

/// An immutable generalized triangulation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Triangulation {
    name: String,
    gluings: Vec<[Option<Gluing>; 4]>,
}

impl Triangulation {
    /// Builds a triangulation and checks the structural invariants:
    /// indices in range, the table an involution, no identity self-gluings.
    pub fn new(
        name: impl Into<String>,
        gluings: Vec<[Option<Gluing>; 4]>,
    ) -> Result<Self, StructuralError> {
        let t = gluings.len();
        for (i, row) in gluings.iter().enumerate() {
            for (f, entry) in row.iter().enumerate() {
                let Some(g) = entry else { continue };
                if g.tet >= t {
                    return Err(StructuralError::TargetOutOfRange { tet: i, face: f, target: g.tet });
                }
                let back = gluings[g.tet][g.perm.apply(f)];
                let expect = Gluing { tet: i, perm: g.perm.inverse() };
                if back != Some(expect) {
                    return Err(StructuralError::NotInvolution { tet: i, face: f });
                }
                if g.tet == i && g.perm.apply(f) == f && g.perm.is_identity() {
                    return Err(StructuralError::IdentitySelfGluing { tet: i, face: f });
                }
            }
        }
        Ok(Triangulation { name: name.into(), gluings })
    }

    /// Convenience builder: `pairs` lists one side of each face pairing;
    /// the reverse entries are filled in automatically.
    pub fn from_pairs(
        name: impl Into<String>,
        tetra_count: usize,
        pairs: &[(usize, usize, usize, &str)],
    ) -> Result<Self, StructuralError> {
        let mut gluings = vec![[None; 4]; tetra_count];
        for &(i, f, j, digits) in pairs {
            let perm = Perm4::from_digits(digits)?;
            gluings[i][f] = Some(Gluing { tet: j, perm });
            gluings[j][perm.apply(f)] = Some(Gluing { tet: i, perm: perm.inverse() });
        }
        Triangulation::new(name, gluings)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(&self, name: impl Into<String>) -> Triangulation {
        Triangulation { name: name.into(), gluings: self.gluings.clone() }
    }

    pub fn tetra_count(&self) -> usize {
        self.gluings.len()
    }

    pub fn gluing(&self, tet: usize, face: usize) -> Option<Gluing> {
        self.gluings[tet][face]
    }

    pub fn rows(&self) -> &[[Option<Gluing>; 4]] {
        &self.gluings
    }

    pub fn boundary_faces(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for (i, row) in self.gluings.iter().enumerate() {
            for (f, entry) in row.iter().enumerate() {
                if entry.is_none() {
                    out.push((i, f));
                }
            }
        }
        out
    }

    pub fn is_closed_complex(&self) -> bool {
        self.boundary_faces().is_empty()
    }

    /// Disjoint union; the tetrahedra of `other` are appended after ours.
    pub fn disjoint_union(&self, other: &Triangulation, name: impl Into<String>) -> Triangulation {
        let shift = self.tetra_count();
        let mut gluings = self.gluings.clone();
        for row in &other.gluings {
            let mut shifted = [None; 4];
            for (f, entry) in row.iter().enumerate() {
                shifted[f] = entry.map(|g| Gluing { tet: g.tet + shift, perm: g.perm });
            }
            gluings.push(shifted);
        }
        Triangulation { name: name.into(), gluings }
    }

    /// Applies `relabel[i] = (new index, vertex permutation)` to every tetrahedron.
    /// `relabel` must be a bijection on indices.
    pub fn relabeled(&self, name: impl Into<String>, relabel: &[(usize, Perm4)]) -> Triangulation {
        let t = self.tetra_count();
        let mut gluings = vec![[None; 4]; t];
        for i in 0..t {
            let (ni, rho_i) = relabel[i];
            for f in 0..4 {
                if let Some(g) = self.gluings[i][f] {
                    let (nj, rho_j) = relabel[g.tet];
                    let nf = rho_i.apply(f);
                    let nperm = rho_j.compose(&g.perm).compose(&rho_i.inverse());
                    gluings[ni][nf] = Some(Gluing { tet: nj, perm: nperm });
                }
            }
        }
        Triangulation { name: name.into(), gluings }
    }

    pub fn skeleton(&self) -> Skeleton {
        Skeleton::build(self)
    }

    pub fn validate(&self) -> ValidationReport {
        ValidationReport::build(self)
    }
}

impl fmt::Display for Triangulation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} ({} tetrahedra)", self.name, self.tetra_count())?;
        for (i, row) in self.gluings.iter().enumerate() {
            write!(f, "  {i}:")?;
            for entry in row {
                match entry {
                    Some(g) => write!(f, " {}({})", g.tet, g.perm)?,
                    None => write!(f, " -")?,
                }
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// Union-find
// ---------------------------------------------------------------------------

#[derive(Clone, Debug)]
pub(crate) struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect() }
    }

    pub fn find(&mut self, x: usize) -> usize {
        let mut root = x;
        while self.parent[root] != root {
            root = self.parent[root];
        }
        let mut cur = x;
        while self.parent[cur] != root {
            let next = self.parent[cur];
            self.parent[cur] = root;
            cur = next;
        }
        root
    }

    pub fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            // smaller root wins, keeping class reps deterministic
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.parent[hi] = lo;
        }
    }

    /// Class ids numbered 0.. in order of first appearance; returns (id per element, class count).
    pub fn classes(&mut self) -> (Vec<usize>, usize) {
        let n = self.parent.len();
        let mut id = vec![usize::MAX; n];
        let mut count = 0;
        for x in 0..n {
            let r = self.find(x);
            if id[r] == usize::MAX {
                id[r] = count;
                count += 1;
            }
            id[x] = id[r];
        }
        (id, count)
    }
}

/// Union-find that also tracks a Z/2 parity relative to the root.
/// `union(a, b, p)` asserts parity(a) + parity(b) = p; returns false on conflict.
#[derive(Clone, Debug)]
pub(crate) struct ParityUnionFind {
    parent: Vec<usize>,
    parity: Vec<u8>, // parity relative to parent
}

impl ParityUnionFind {
    pub fn new(n: usize) -> Self {
        ParityUnionFind { parent: (0..n).collect(), parity: vec![0; n] }
    }

    pub fn find(&mut self, x: usize) -> (usize, u8) {
        if self.parent[x] == x {
            return (x, 0);
        }
        let (root, p) = self.find(self.parent[x]);
        self.parent[x] = root;
        self.parity[x] ^= p;
        (root, self.parity[x])
    }

    pub fn union(&mut self, a: usize, b: usize, rel: u8) -> bool {
        let (ra, pa) = self.find(a);
        let (rb, pb) = self.find(b);
        if ra == rb {
            return pa ^ pb == rel;
        }
        let (lo, hi, plo_hi) = if ra < rb { (ra, rb, pa ^ pb ^ rel) } else { (rb, ra, pa ^ pb ^ rel) };
        self.parent[hi] = lo;
        self.parity[hi] = plo_hi;
        true
    }
}

// ---------------------------------------------------------------------------
// Skeleton: quotient simplex classes
// ---------------------------------------------------------------------------

/// Quotient classes of the vertices, edges and triangles of a triangulation,
/// plus the vertex-link corner classes needed for link surfaces and truncation.
#[derive(Clone, Debug)]
pub struct Skeleton {
    pub tetra_count: usize,
    /// class of corner (tet, v); index `4*tet + v`
    pub vertex_class_of: Vec<usize>,
    pub vertex_count: usize,
    /// members of each vertex class as (tet, v)
    pub vertex_members: Vec<Vec<(usize, usize)>>,
    /// class of edge (tet, edge_idx); index `6*tet + e`
    pub edge_class_of: Vec<usize>,
    pub edge_count: usize,
    pub edge_members: Vec<Vec<(usize, usize)>>,
    /// an edge class identified with itself reversing orientation
    pub edge_reversed: Vec<bool>,
    /// +1 if the ascending direction of this (tet, edge_idx) matches the class
    /// representative's ascending direction, -1 otherwise; index `6*tet + e`
    pub edge_direction: Vec<i8>,
    /// class of face (tet, f); index `4*tet + f`
    pub triangle_class_of: Vec<usize>,
    pub triangle_count: usize,
    pub triangle_members: Vec<Vec<(usize, usize)>>,
    /// class of the link corner (tet, v, w); index `12*tet + 3*v + rank of w in others(v)`
    pub linkvert_class_of: Vec<usize>,
    pub linkvert_count: usize,
    /// connected components of the tetrahedron gluing graph
    pub component_of: Vec<usize>,
    pub component_count: usize,
}

pub(crate) fn linkvert_index(tet: usize, v: usize, w: usize) -> usize {
    let rank = others(v).iter().position(|&x| x == w).expect("w adjacent to v");
    12 * tet + 3 * v + rank
}

impl Skeleton {
    fn build(tri: &Triangulation) -> Skeleton {
        let t = tri.tetra_count();
        let mut vert = UnionFind::new(4 * t);
        let mut dedge = UnionFind::new(12 * t); // directed edges: 12*tet + 2*e + dir
        let mut face = UnionFind::new(4 * t);
        let mut linkv = UnionFind::new(12 * t);
        let mut comp = UnionFind::new(t.max(1));

        let didx = |tet: usize, a: usize, b: usize| -> usize {
            let e = edge_index(a, b);
            let dir = usize::from(a > b);
            12 * tet + 2 * e + dir
        };

        for i in 0..t {
            for f in 0..4 {
                let Some(g) = tri.gluing(i, f) else { continue };
                let (j, sigma) = (g.tet, g.perm);
                comp.union(i, j);
                face.union(4 * i + f, 4 * j + sigma.apply(f));
                let fv = face_verts(f);
                for &v in &fv {
                    vert.union(4 * i + v, 4 * j + sigma.apply(v));
                }
                for a in 0..3 {
                    for b in 0..3 {
                        if a != b {
                            let (va, vb) = (fv[a], fv[b]);
                            dedge.union(didx(i, va, vb), didx(j, sigma.apply(va), sigma.apply(vb)));
                        }
                    }
                }
                // link corners (v, w): both v and w must lie on the glued face
                for &v in &fv {
                    for &w in &fv {
                        if v != w {
                            linkv.union(
                                linkvert_index(i, v, w),
                                linkvert_index(j, sigma.apply(v), sigma.apply(w)),
                            );
                        }
                    }
                }
            }
        }

        let (vertex_class_of, vertex_count) = vert.classes();
        let mut vertex_members = vec![Vec::new(); vertex_count];
        for i in 0..t {
            for v in 0..4 {
                vertex_members[vertex_class_of[4 * i + v]].push((i, v));
            }
        }

        // undirected edge classes from the directed ones
        let mut undirected = UnionFind::new(6 * t);
        for i in 0..t {
            for e in 0..6 {
                let root = dedge.find(12 * i + 2 * e);
                let (rt, re_dir) = (root / 12, (root % 12) / 2);
                undirected.union(6 * i + e, 6 * rt + re_dir);
            }
        }
        let (edge_class_of, edge_count) = undirected.classes();
        let mut edge_members = vec![Vec::new(); edge_count];
        for i in 0..t {
            for e in 0..6 {
                edge_members[edge_class_of[6 * i + e]].push((i, e));
            }
        }
        let mut edge_reversed = vec![false; edge_count];
        for (c, members) in edge_members.iter().enumerate() {
            let (i, e) = members[0];
            let fwd = dedge.find(12 * i + 2 * e);
            let rev = dedge.find(12 * i + 2 * e + 1);
            edge_reversed[c] = fwd == rev;
        }
        // direction of each member relative to its class representative
        let mut edge_direction = vec![0i8; 6 * t];
        for members in &edge_members {
            let (ri, re) = members[0];
            let rep_fwd = dedge.find(12 * ri + 2 * re);
            for &(i, e) in members {
                let fwd = dedge.find(12 * i + 2 * e);
                edge_direction[6 * i + e] = if fwd == rep_fwd { 1 } else { -1 };
            }
        }

        let (triangle_class_of, triangle_count) = face.classes();
        let mut triangle_members = vec![Vec::new(); triangle_count];
        for i in 0..t {
            for f in 0..4 {
                triangle_members[triangle_class_of[4 * i + f]].push((i, f));
            }
        }

        let (linkvert_class_of, linkvert_count) = linkv.classes();
        let (component_of, component_count) = comp.classes();

        Skeleton {
            tetra_count: t,
            vertex_class_of,
            vertex_count,
            vertex_members,
            edge_class_of,
            edge_count,
            edge_members,
            edge_reversed,
            edge_direction,
            triangle_class_of,
            triangle_count,
            triangle_members,
            linkvert_class_of,
            linkvert_count,
            component_of,
            component_count: if t == 0 { 0 } else { component_count },
        }
    }

    pub fn vertex_class(&self, tet: usize, v: usize) -> usize {
        self.vertex_class_of[4 * tet + v]
    }

    pub fn edge_class(&self, tet: usize, a: usize, b: usize) -> usize {
        self.edge_class_of[6 * tet + edge_index(a, b)]
    }

    pub fn triangle_class(&self, tet: usize, f: usize) -> usize {
        self.triangle_class_of[4 * tet + f]
    }

    pub fn linkvert_class(&self, tet: usize, v: usize, w: usize) -> usize {
        self.linkvert_class_of[linkvert_index(tet, v, w)]
    }

    /// Degree of an edge class = number of (tet, edge) incidences.
    pub fn edge_degree(&self, class: usize) -> usize {
        self.edge_members[class].len()
    }
}

// ---------------------------------------------------------------------------
// Vertex links and validation
// ---------------------------------------------------------------------------

/// What the link of a vertex class looks like.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum VertexKind {
    /// link is a 2-sphere
    Material,
    /// link is a torus: an ideal vertex, a cusp
    Ideal,
    /// link is a surface with boundary (boundary faces present)
    Boundary,
    /// anything else: not a manifold point under our conventions
    Invalid,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LinkInfo {
    pub euler_characteristic: i64,
    pub connected: bool,
    pub orientable: bool,
    pub closed: bool,
    pub triangle_count: usize,
    pub kind: VertexKind,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SkeletonSummary {
    pub tetra_count: usize,
    pub vertex_classes: usize,
    pub edge_classes: usize,
    pub triangle_classes: usize,
    pub vertex_links: Vec<LinkInfo>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ValidationReport {
    pub name: String,
    pub is_manifold: bool,
    pub closed: bool,
    pub orientable: bool,
    pub connected: bool,
    pub cusp_count: usize,
    pub boundary_faces: Vec<(usize, usize)>,
    /// edge classes glued to themselves reversing orientation
    pub reversed_edges: Vec<usize>,
    /// faces glued to themselves (never manifold points)
    pub self_glued_faces: Vec<(usize, usize)>,
    pub skeleton: SkeletonSummary,
    /// first simplex class that disqualifies the triangulation, if any
    pub offending: Option<String>,
}

impl ValidationReport {
    fn build(tri: &Triangulation) -> ValidationReport {
        let skel = tri.skeleton();
        let t = tri.tetra_count();
        let boundary_faces = tri.boundary_faces();

        let mut self_glued_faces = Vec::new();
        for i in 0..t {
            for f in 0..4 {
                if let Some(g) = tri.gluing(i, f) {
                    if g.tet == i && g.perm.apply(f) == f {
                        self_glued_faces.push((i, f));
                    }
                }
            }
        }

        let reversed_edges: Vec<usize> =
            (0..skel.edge_count).filter(|&c| skel.edge_reversed[c]).collect();

        let vertex_links: Vec<LinkInfo> =
            (0..skel.vertex_count).map(|c| link_info_for_class(tri, &skel, c)).collect();

        let orientable = orientation_signs(tri).is_some();
        let closed = boundary_faces.is_empty();
        let mut offending = None;
        if let Some((i, f)) = self_glued_faces.first() {
            offending = Some(format!("face ({i},{f}) glued to itself"));
        } else if let Some(c) = reversed_edges.first() {
            offending = Some(format!("edge class {c} identified with itself reversed"));
        } else if !closed {
            offending = Some(format!("{} boundary faces", boundary_faces.len()));
        } else if let Some((c, _)) = vertex_links
            .iter()
            .enumerate()
            .find(|(_, l)| !matches!(l.kind, VertexKind::Material | VertexKind::Ideal))
        {
            offending = Some(format!("vertex class {c} has a bad link"));
        }

        let is_manifold = offending.is_none() && t > 0;
        let cusp_count = vertex_links.iter().filter(|l| l.kind == VertexKind::Ideal).count();

        ValidationReport {
            name: tri.name().to_string(),
            is_manifold,
            closed,
            orientable,
            connected: skel.component_count <= 1,
            cusp_count,
            boundary_faces,
            reversed_edges,
            self_glued_faces,
            skeleton: SkeletonSummary {
                tetra_count: t,
                vertex_classes: skel.vertex_count,
                edge_classes: skel.edge_count,
                triangle_classes: skel.triangle_count,
                vertex_links,
            },
            offending,
        }
    }

    pub fn cusped(&self) -> bool {
        self.is_manifold && self.cusp_count > 0
    }

    /// Valid closed or cusped manifold with every vertex ideal.
    pub fn all_ideal(&self) -> bool {
        self.is_manifold
            && self.skeleton.vertex_links.iter().all(|l| l.kind == VertexKind::Ideal)
    }
}

/// Link surface of one vertex class, computed from its corner triangles.
pub fn link_info_for_class(tri: &Triangulation, skel: &Skeleton, class: usize) -> LinkInfo {
    let members = &skel.vertex_members[class];
    let triangle_count = members.len();

    // Link edges are (tet, v, f) with f != v: the side of the corner triangle
    // of (tet, v) lying on face f. Interior sides pair up via the face gluing.
    // Count edge classes, check closedness, connectivity and orientability.
    let mut side_ids = std::collections::HashMap::new();
    for (idx, &(i, v)) in members.iter().enumerate() {
        for f in 0..4 {
            if f != v {
                side_ids.insert((i, v, f), idx);
            }
        }
    }

    let mut edge_classes = 0usize;
    let mut closed = true;
    let mut seen = std::collections::HashSet::new();
    // connectivity over corner triangles; parity for orientability
    let mut conn = UnionFind::new(triangle_count.max(1));
    let mut orient = ParityUnionFind::new(triangle_count.max(1));
    let mut orientable = true;

    for &(i, v) in members.iter() {
        for f in 0..4 {
            if f == v || seen.contains(&(i, v, f)) {
                continue;
            }
            seen.insert((i, v, f));
            match tri.gluing(i, f) {
                None => {
                    edge_classes += 1;
                    closed = false;
                }
                Some(g) => {
                    let (j, sigma) = (g.tet, g.perm);
                    let (w, fj) = (sigma.apply(v), sigma.apply(f));
                    seen.insert((j, w, fj));
                    edge_classes += 1;
                    let a = side_ids[&(i, v, f)];
                    let b = side_ids[&(j, w, fj)];
                    conn.union(a, b);
                    // Orientation parity: the reference cycle of a corner
                    // triangle at (i, v) is the ascending order of others(v).
                    // The side on face f is traversed (x -> y) where (x, y)
                    // follows the cyclic rule: side opposite w_k runs
                    // w_{k+1} -> w_{k+2}.
                    let (x, y) = side_direction(v, f);
                    let (xj, yj) = side_direction(w, fj);
                    // the gluing maps direction (x -> y) to (sigma x -> sigma y)
                    let same = (sigma.apply(x), sigma.apply(y)) == (xj, yj);
                    // compatible orientations need opposite induced directions
                    let rel = u8::from(same);
                    if !orient.union(a, b, rel) {
                        orientable = false;
                    }
                }
            }
        }
    }

    // vertices of the link = corner classes (tet, v, w) restricted to this class
    let mut link_vert_classes = std::collections::HashSet::new();
    for &(i, v) in members.iter() {
        for w in others(v) {
            link_vert_classes.insert(skel.linkvert_class_of[linkvert_index(i, v, w)]);
        }
    }

    let chi = link_vert_classes.len() as i64 - edge_classes as i64 + triangle_count as i64;
    let mut roots = std::collections::HashSet::new();
    for idx in 0..triangle_count {
        roots.insert(conn.find(idx));
    }
    let connected = roots.len() <= 1;

    let kind = if !closed {
        VertexKind::Boundary
    } else if connected && chi == 2 {
        VertexKind::Material
    } else if connected && chi == 0 && orientable {
        VertexKind::Ideal
    } else {
        VertexKind::Invalid
    };

    LinkInfo {
        euler_characteristic: chi,
        connected,
        orientable,
        closed,
        triangle_count,
        kind,
    }
}

/// Direction (x -> y) in which the reference orientation of the corner
/// triangle at vertex `v` traverses its side on face `f`.
fn side_direction(v: usize, f: usize) -> (usize, usize) {
    let w = others(v);
    let k = w.iter().position(|&x| x == f).expect("f adjacent to v");
    (w[(k + 1) % 3], w[(k + 2) % 3])
}

/// Consistent orientation signs for the tetrahedra, if any exist.
///
/// A face gluing by an odd permutation preserves the sign, an even one flips
/// it (the gluing map must reverse the induced boundary orientation).
pub fn orientation_signs(tri: &Triangulation) -> Option<Vec<i8>> {
    let t = tri.tetra_count();
    let mut puf = ParityUnionFind::new(t.max(1));
    for i in 0..t {
        for f in 0..4 {
            if let Some(g) = tri.gluing(i, f) {
                let rel = u8::from(g.perm.sign() > 0); // even => opposite signs
                if !puf.union(i, g.tet, rel) {
                    return None;
                }
            }
        }
    }
    // normalize: lowest-index tetrahedron of each component gets +1
    let mut signs = vec![0i8; t];
    for i in 0..t {
        let (_, p) = puf.find(i);
        signs[i] = if p == 0 { 1 } else { -1 };
    }
    for i in 0..t {
        let (root, _) = puf.find(i);
        if signs[root] < 0 {
            // cannot happen: root parity is 0, but keep the invariant explicit
            signs[i] = -signs[i];
        }
    }
    Some(signs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn involution_enforced() {
        let g = |tet, digits: &str| Some(Gluing { tet, perm: Perm4::from_digits(digits).unwrap() });
        // one-sided entry: not an involution
        let bad = Triangulation::new("bad", vec![[g(0, "1023"), None, None, None]]);
        assert!(matches!(bad, Err(StructuralError::NotInvolution { .. })));
        // identity self-gluing rejected
        let worse = Triangulation::new("worse", vec![[g(0, "0123"), None, None, None]]);
        assert!(matches!(worse, Err(StructuralError::IdentitySelfGluing { .. })));
        let oor = Triangulation::new("oor", vec![[g(5, "1023"), None, None, None]]);
        assert!(matches!(oor, Err(StructuralError::TargetOutOfRange { .. })));
    }

    #[test]
    fn boundary_simplex_validates_closed_orientable() {
        let tri = fixtures::boundary_4_simplex();
        let report = tri.validate();
        assert!(report.is_manifold, "offending: {:?}", report.offending);
        assert!(report.closed);
        assert!(report.orientable);
        assert!(report.connected);
        assert_eq!(report.cusp_count, 0);
        assert_eq!(report.skeleton.vertex_classes, 5);
        assert_eq!(report.skeleton.edge_classes, 10);
        assert_eq!(report.skeleton.triangle_classes, 10);
        for link in &report.skeleton.vertex_links {
            assert_eq!(link.kind, VertexKind::Material);
            assert_eq!(link.euler_characteristic, 2);
        }
    }

    #[test]
    fn m004_validates_cusped() {
        let tri = fixtures::m004();
        let report = tri.validate();
        assert!(report.is_manifold, "offending: {:?}", report.offending);
        assert!(report.closed);
        assert!(report.orientable);
        assert_eq!(report.cusp_count, 1);
        assert_eq!(report.skeleton.vertex_classes, 1);
        assert_eq!(report.skeleton.edge_classes, 2);
        let link = &report.skeleton.vertex_links[0];
        assert_eq!(link.kind, VertexKind::Ideal);
        assert_eq!(link.euler_characteristic, 0);
        assert!(link.orientable);
        assert_eq!(link.triangle_count, 8);
    }

    #[test]
    fn single_tet_reports_boundary() {
        let tri = Triangulation::new("open", vec![[None; 4]]).unwrap();
        let report = tri.validate();
        assert!(!report.is_manifold);
        assert!(!report.closed);
        assert_eq!(report.boundary_faces.len(), 4);
    }

    #[test]
    fn twisted_gluing_rejected_by_validation() {
        let tri = fixtures::twisted_invalid();
        let report = tri.validate();
        assert!(!report.is_manifold);
        assert!(report.offending.is_some());
    }

    #[test]
    fn gieseking_is_nonorientable() {
        let tri = fixtures::gieseking_like();
        assert!(orientation_signs(&tri).is_none());
        let report = tri.validate();
        assert!(!report.orientable);
    }

    #[test]
    fn disjoint_union_has_two_components() {
        let a = fixtures::m004();
        let u = a.disjoint_union(&a, "m004+m004");
        let report = u.validate();
        assert!(!report.connected);
        assert!(report.is_manifold);
        assert_eq!(report.cusp_count, 2);
    }
}
