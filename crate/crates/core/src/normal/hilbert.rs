//! Fundamental solutions: lattice points of the matching cone, within an
//! l1 bound, that are not sums of two nonzero solutions.
//!
//! Enumeration exploits the cone structure: once the quadrilateral
//! coordinates are fixed, the matching equations determine every triangle
//! coordinate around a vertex class up to one common shift. The search runs
//! over quadrilateral assignments tetrahedron by tetrahedron, pruning on
//! corner-potential conflicts, then enumerates the per-class shifts.

use std::collections::HashMap;

use crate::triangulation::{face_verts, Triangulation};

use super::{matching_system, quad_type_separating, NormalCoordVector, NormalError};

/// Hard cap on search nodes; exceeding it is a desk-scale refusal rather
/// than an open-ended computation.
const NODE_BUDGET: u64 = 50_000_000;

struct Searcher<'a> {
    tri: &'a Triangulation,
    t: usize,
    bound: i64,
    /// interior face gluings as (i, v, j, w, qi, qj): tri(j,w) = tri(i,v) + quad(i,qi) - quad(j,qj)
    relations: Vec<(usize, usize, usize, usize, usize, usize)>,
    quads: Vec<[i64; 3]>,
    solutions: Vec<NormalCoordVector>,
    nodes: u64,
}

impl<'a> Searcher<'a> {
    fn run(mut self) -> Result<Vec<NormalCoordVector>, NormalError> {
        self.assign_tet(0, 0)?;
        Ok(self.solutions)
    }

    fn assign_tet(&mut self, tet: usize, used: i64) -> Result<(), NormalError> {
        self.nodes += 1;
        if self.nodes > NODE_BUDGET {
            return Err(NormalError::BoundTooLargeForDeskScale { nodes: self.nodes });
        }
        if tet == self.t {
            return self.complete(used);
        }
        let left = self.bound - used;
        for q0 in 0..=left {
            for q1 in 0..=(left - q0) {
                for q2 in 0..=(left - q0 - q1) {
                    self.quads[tet] = [q0, q1, q2];
                    if self.consistent(tet + 1) {
                        self.assign_tet(tet + 1, used + q0 + q1 + q2)?;
                    }
                }
            }
        }
        self.quads[tet] = [0; 3];
        Ok(())
    }

    /// Checks corner-potential consistency of the relations among the first
    /// `assigned` tetrahedra and, as a lower bound, that the forced minimum
    /// triangle mass of completed classes still fits the budget.
    fn consistent(&mut self, assigned: usize) -> bool {
        self.potentials(assigned).is_some()
    }

    /// Corner potentials: tri(corner) = h(class root) + offset(corner).
    /// Returns per-corner (root, offset) or None on conflict.
    fn potentials(&self, assigned: usize) -> Option<Vec<(usize, i64)>> {
        let n = 4 * assigned;
        // union-find with additive offsets to the parent
        let mut parent: Vec<usize> = (0..n).collect();
        let mut offset: Vec<i64> = vec![0; n];
        fn find(parent: &mut Vec<usize>, offset: &mut Vec<i64>, x: usize) -> (usize, i64) {
            if parent[x] == x {
                return (x, 0);
            }
            let (root, off) = find(parent, offset, parent[x]);
            parent[x] = root;
            offset[x] += off;
            (root, offset[x])
        }
        for &(i, v, j, w, qi, qj) in &self.relations {
            if i >= assigned || j >= assigned {
                continue;
            }
            let delta = self.quads[i][qi] - self.quads[j][qj]; // tri(j,w) - tri(i,v)
            let (ra, oa) = find(&mut parent, &mut offset, 4 * i + v);
            let (rb, ob) = find(&mut parent, &mut offset, 4 * j + w);
            if ra == rb {
                if ob - oa != delta {
                    return None;
                }
            } else {
                // attach rb under ra: offset(rb) = oa + delta - ob
                parent[rb] = ra;
                offset[rb] = oa + delta - ob;
            }
        }
        let mut out = Vec::with_capacity(n);
        let mut parent2 = parent;
        let mut offset2 = offset;
        for x in 0..n {
            out.push(find(&mut parent2, &mut offset2, x));
        }
        Some(out)
    }

    fn complete(&mut self, used: i64) -> Result<(), NormalError> {
        let Some(pots) = self.potentials(self.t) else { return Ok(()) };
        // group corners by root
        let mut classes: HashMap<usize, Vec<(usize, i64)>> = HashMap::new();
        for (corner, &(root, off)) in pots.iter().enumerate() {
            classes.entry(root).or_default().push((corner, off));
        }
        let groups: Vec<Vec<(usize, i64)>> = {
            let mut keys: Vec<usize> = classes.keys().copied().collect();
            keys.sort_unstable();
            keys.into_iter().map(|k| classes.remove(&k).unwrap()).collect()
        };
        // minimal shift per class and the resulting mass
        let mut base = Vec::new();
        let mut mass = Vec::new();
        for g in &groups {
            let h0 = -g.iter().map(|&(_, off)| off).min().unwrap();
            let m0: i64 = g.iter().map(|&(_, off)| h0 + off).sum();
            base.push(h0);
            mass.push(m0);
        }
        let min_total: i64 = mass.iter().sum();
        if used + min_total > self.bound {
            return Ok(());
        }
        // enumerate extra shifts; each +1 shift of class g adds g.len() mass
        let left = self.bound - used - min_total;
        let mut shifts = vec![0i64; groups.len()];
        self.enumerate_shifts(0, left, &mut shifts, &groups, &base, used)?;
        Ok(())
    }

    fn enumerate_shifts(
        &mut self,
        idx: usize,
        left: i64,
        shifts: &mut Vec<i64>,
        groups: &Vec<Vec<(usize, i64)>>,
        base: &[i64],
        used: i64,
    ) -> Result<(), NormalError> {
        self.nodes += 1;
        if self.nodes > NODE_BUDGET {
            return Err(NormalError::BoundTooLargeForDeskScale { nodes: self.nodes });
        }
        if idx == groups.len() {
            let mut v = NormalCoordVector::zero(self.t);
            for i in 0..self.t {
                for q in 0..3 {
                    *v.quad_mut(i, q) = self.quads[i][q];
                }
            }
            for (gi, g) in groups.iter().enumerate() {
                for &(corner, off) in g {
                    let (i, c) = (corner / 4, corner % 4);
                    *v.tri_mut(i, c) = base[gi] + shifts[gi] + off;
                }
            }
            debug_assert!(v.l1_norm() <= self.bound);
            let _ = used;
            if !v.is_zero() {
                self.solutions.push(v);
            }
            return Ok(());
        }
        let size = groups[idx].len() as i64;
        let max_shift = left / size;
        for s in 0..=max_shift {
            shifts[idx] = s;
            self.enumerate_shifts(idx + 1, left - s * size, shifts, groups, base, used)?;
        }
        shifts[idx] = 0;
        Ok(())
    }
}

/// All lattice points of the cone with l1 norm at most `bound` that are not
/// the sum of two nonzero solutions. Complete within the bound.
pub fn fundamental_solutions(
    tri: &Triangulation,
    bound: i64,
) -> Result<Vec<NormalCoordVector>, NormalError> {
    if bound < 0 {
        return Ok(Vec::new());
    }
    // validation happens here; also keeps the relation layout honest
    let _sys = matching_system(tri)?;
    let t = tri.tetra_count();
    let mut relations = Vec::new();
    let skel = tri.skeleton();
    for members in &skel.triangle_members {
        if members.len() != 2 {
            continue;
        }
        let (i, f) = members[0];
        let g = tri.gluing(i, f).expect("interior face");
        for &v in &face_verts(f) {
            let (j, w, fj) = (g.tet, g.perm.apply(v), g.perm.apply(f));
            relations.push((i, v, j, w, quad_type_separating(v, f), quad_type_separating(w, fj)));
        }
    }
    let searcher = Searcher {
        tri,
        t,
        bound,
        relations,
        quads: vec![[0; 3]; t],
        solutions: Vec::new(),
        nodes: 0,
    };
    let mut all = searcher.run()?;
    all.sort_by_key(|v| (v.l1_norm(), v.0.clone()));

    // keep the indecomposables: reduce against the fundamental set built so
    // far, in order of increasing norm
    let mut fundamental: Vec<NormalCoordVector> = Vec::new();
    for v in all {
        let decomposable =
            fundamental.iter().any(|h| h.l1_norm() < v.l1_norm() && h.leq(&v));
        if !decomposable {
            fundamental.push(v);
        }
    }
    Ok(fundamental)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::normal::vertex_solutions;

    /// Dumb oracle: depth-first over all 7t coordinates with residual
    /// pruning on the matching equations, then the same indecomposability
    /// filter by pairwise subtraction.
    pub fn lattice_oracle(tri: &Triangulation, bound: i64) -> Vec<NormalCoordVector> {
        let sys = matching_system(tri).unwrap();
        let n = 7 * tri.tetra_count();
        let a = &sys.matrix;
        let mut v = vec![0i64; n];
        let mut sols = Vec::new();
        fn feasible(a: &crate::snf::IntMat, v: &[i64], fixed: usize, left: i64) -> bool {
            for r in 0..a.rows {
                let mut res = 0i64;
                let mut pos = 0i64;
                let mut neg = 0i64;
                for c in 0..a.cols {
                    let coef = a.get(r, c);
                    if c < fixed {
                        res += coef * v[c];
                    } else {
                        if coef > 0 {
                            pos += coef;
                        }
                        if coef < 0 {
                            neg -= coef;
                        }
                    }
                }
                // remaining coordinates can move the row by [-neg*left, pos*left]
                if res > neg * left || res < -pos * left {
                    return false;
                }
            }
            true
        }
        fn rec(
            a: &crate::snf::IntMat,
            v: &mut Vec<i64>,
            idx: usize,
            left: i64,
            sols: &mut Vec<NormalCoordVector>,
        ) {
            if idx == v.len() {
                let w = NormalCoordVector(v.clone());
                if !w.is_zero() && a.mul_vec(v).iter().all(|&x| x == 0) {
                    sols.push(w);
                }
                return;
            }
            for x in 0..=left {
                v[idx] = x;
                if feasible(a, v, idx + 1, left - x) {
                    rec(a, v, idx + 1, left - x, sols);
                }
            }
            v[idx] = 0;
        }
        rec(a, &mut v, 0, bound, &mut sols);
        // indecomposability by direct pairwise test
        let mut fundamental = Vec::new();
        'outer: for w in &sols {
            for x in &sols {
                if !x.is_zero() && x != w && x.leq(w) {
                    let diff = NormalCoordVector(
                        w.0.iter().zip(&x.0).map(|(a, b)| a - b).collect(),
                    );
                    if !diff.is_zero() {
                        continue 'outer;
                    }
                }
            }
            fundamental.push(w.clone());
        }
        fundamental.sort();
        fundamental
    }

    #[test]
    fn one_tet_matches_lattice_oracle_bound_20() {
        let tri = fixtures::one_tet_closed();
        let mut ours = fundamental_solutions(&tri, 20).unwrap();
        ours.sort();
        let oracle = lattice_oracle(&tri, 20);
        assert_eq!(ours, oracle);
    }

    #[test]
    fn vertex_rays_with_coprime_coordinates_are_fundamental() {
        let tri = fixtures::m004();
        let rays = vertex_solutions(&matching_system(&tri).unwrap());
        let bound = rays.iter().map(|(v, _)| v.l1_norm()).max().unwrap();
        let fundamental = fundamental_solutions(&tri, bound).unwrap();
        for (ray, _) in &rays {
            assert!(
                fundamental.contains(ray),
                "extreme ray {ray:?} missing among fundamental solutions"
            );
        }
    }

    #[test]
    fn doubles_are_not_fundamental() {
        let tri = fixtures::m004();
        let fundamental = fundamental_solutions(&tri, 24).unwrap();
        for v in &fundamental {
            let double = v.add(v);
            assert!(!fundamental.contains(&double));
        }
    }

    #[test]
    fn bound_zero_is_empty() {
        let tri = fixtures::boundary_4_simplex();
        assert!(fundamental_solutions(&tri, 0).unwrap().is_empty());
    }
}
