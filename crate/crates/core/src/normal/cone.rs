//! Extreme rays of the solution cone by double description.
//!
//! Works in kernel coordinates: an integer basis of ker(A) turns the cone
//! {Av = 0, v >= 0} into {y : M y >= 0} with M the kernel basis written as
//! rows per original coordinate. Constraints are inserted in coordinate
//! order; adjacency of rays is decided by the rank of their common active
//! set, as exact integer arithmetic.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::snf::{integer_kernel_basis, rank, IntMat};

use super::{MatchingSystem, NormalCoordVector};

/// Extreme rays of the cone, scaled to the smallest integer vectors and
/// flagged for the quadrilateral admissibility condition.
pub fn vertex_solutions(sys: &MatchingSystem) -> Vec<(NormalCoordVector, bool)> {
    let n = 7 * sys.tetra_count;
    let kernel = integer_kernel_basis(&sys.matrix);
    let d = kernel.len();
    if d == 0 {
        return Vec::new();
    }
    // m[i][j]: coefficient of kernel vector j in coordinate i
    let m: Vec<Vec<BigInt>> =
        (0..n).map(|i| (0..d).map(|j| kernel[j][i].clone()).collect()).collect();

    // initial simplicial cone from d linearly independent constraint rows
    let mut chosen: Vec<usize> = Vec::new();
    for i in 0..n {
        if chosen.len() == d {
            break;
        }
        let mut trial = chosen.clone();
        trial.push(i);
        if rank_of_rows(&m, &trial) == trial.len() {
            chosen = trial;
        }
    }
    assert_eq!(chosen.len(), d, "constraint matrix must have full column rank");

    // rays of {y : B y >= 0} with B invertible: solve B r_k = det * e_k
    let b: Vec<Vec<BigInt>> = chosen.iter().map(|&i| m[i].clone()).collect();
    let mut rays: Vec<Vec<BigInt>> = Vec::new();
    for k in 0..d {
        let mut rhs = vec![BigInt::from(0); d];
        rhs[k] = BigInt::from(1);
        let r = solve_scaled(&b, &rhs);
        rays.push(primitive(r));
    }

    let mut processed = chosen.clone();
    for i in 0..n {
        if chosen.contains(&i) {
            continue;
        }
        let dot = |r: &Vec<BigInt>| -> BigInt {
            m[i].iter().zip(r).map(|(a, b)| a * b).sum()
        };
        let mut pos = Vec::new();
        let mut zero = Vec::new();
        let mut neg = Vec::new();
        for r in rays.drain(..) {
            let v = dot(&r);
            if v.is_zero() {
                zero.push(r);
            } else if v.is_positive() {
                pos.push(r);
            } else {
                neg.push(r);
            }
        }
        let mut next = Vec::new();
        for (p, pr) in pos.iter().enumerate() {
            let _ = p;
            for nr in &neg {
                if !adjacent(&m, &processed, pr, nr, d) {
                    continue;
                }
                let a = dot(pr);
                let b_val = -dot(nr);
                let combo: Vec<BigInt> = pr
                    .iter()
                    .zip(nr)
                    .map(|(x, y)| &b_val * x + &a * y)
                    .collect();
                let combo = primitive(combo);
                if combo.iter().any(|c| !c.is_zero()) {
                    next.push(combo);
                }
            }
        }
        rays = pos;
        rays.append(&mut zero);
        rays.append(&mut next);
        dedup(&mut rays);
        processed.push(i);
    }

    // map back to normal coordinates, normalize, sort
    let mut out: Vec<(NormalCoordVector, bool)> = Vec::new();
    for r in &rays {
        let coords: Vec<BigInt> =
            (0..n).map(|i| m[i].iter().zip(r).map(|(a, b)| a * b).sum()).collect();
        if coords.iter().all(|c| c.is_zero()) {
            continue;
        }
        assert!(coords.iter().all(|c| !c.is_negative()), "ray outside the cone");
        let coords = primitive(coords);
        let v = NormalCoordVector(
            coords
                .iter()
                .map(|c| i64::try_from(c).expect("desk-scale ray coordinates fit i64"))
                .collect(),
        );
        let admissible = v.admissible().is_ok();
        out.push((v, admissible));
    }
    out.sort();
    out.dedup();
    out
}

fn rank_of_rows(m: &[Vec<BigInt>], rows: &[usize]) -> usize {
    let data: Vec<Vec<i64>> = rows
        .iter()
        .map(|&i| {
            m[i].iter()
                .map(|x| i64::try_from(x).expect("kernel entries fit i64"))
                .collect()
        })
        .collect();
    if data.is_empty() {
        return 0;
    }
    rank(&IntMat::from_rows(data))
}

/// Rays r1, r2 of the current cone are adjacent when the constraints active
/// on both span a subspace of rank d-2.
fn adjacent(
    m: &[Vec<BigInt>],
    processed: &[usize],
    r1: &[BigInt],
    r2: &[BigInt],
    d: usize,
) -> bool {
    let active: Vec<usize> = processed
        .iter()
        .copied()
        .filter(|&i| {
            let d1: BigInt = m[i].iter().zip(r1).map(|(a, b)| a * b).sum();
            let d2: BigInt = m[i].iter().zip(r2).map(|(a, b)| a * b).sum();
            d1.is_zero() && d2.is_zero()
        })
        .collect();
    if active.len() < d.saturating_sub(2) {
        return false;
    }
    rank_of_rows(m, &active) == d - 2
}

/// Fraction-free solve of B x = rhs, returning x scaled by an arbitrary
/// positive factor (Cramer columns over the determinant, kept integral).
fn solve_scaled(b: &[Vec<BigInt>], rhs: &[BigInt]) -> Vec<BigInt> {
    let d = b.len();
    let det = determinant(b);
    assert!(!det.is_zero());
    let mut x = Vec::with_capacity(d);
    for k in 0..d {
        let mut bk: Vec<Vec<BigInt>> = b.to_vec();
        for (row, r) in bk.iter_mut().zip(rhs) {
            row[k] = r.clone();
        }
        x.push(determinant(&bk));
    }
    // B x = det(B) * rhs; flip sign so the scale factor is positive
    if det.is_negative() {
        for v in &mut x {
            *v = -v.clone();
        }
    }
    x
}

fn determinant(m: &[Vec<BigInt>]) -> BigInt {
    // Bareiss fraction-free elimination
    let n = m.len();
    let mut a: Vec<Vec<BigInt>> = m.to_vec();
    let mut sign = BigInt::from(1);
    let mut prev = BigInt::from(1);
    for k in 0..n {
        if a[k][k].is_zero() {
            let Some(swap) = (k + 1..n).find(|&i| !a[i][k].is_zero()) else {
                return BigInt::from(0);
            };
            a.swap(k, swap);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = num / &prev;
            }
            a[i][k] = BigInt::from(0);
        }
        prev = a[k][k].clone();
    }
    sign * a[n - 1][n - 1].clone()
}

fn primitive(mut v: Vec<BigInt>) -> Vec<BigInt> {
    let mut g = BigInt::from(0);
    for x in &v {
        g = gcd(g, x.abs());
    }
    if g > BigInt::from(1) {
        for x in &mut v {
            *x = &*x / &g;
        }
    }
    v
}

fn gcd(a: BigInt, b: BigInt) -> BigInt {
    if b.is_zero() {
        a
    } else {
        gcd(b.clone(), a % b)
    }
}

fn dedup(rays: &mut Vec<Vec<BigInt>>) {
    rays.sort();
    rays.dedup();
}

#[cfg(test)]
mod tests {
    use super::super::{matching_system, vertex_link_vector};
    use super::*;
    use crate::fixtures;

    /// Brute-force oracle: a vector is an extreme ray iff the constraints
    /// active on it (matching rows plus its zero coordinates) have rank n-1.
    /// Enumerate candidate zero-sets as subsets of coordinates.
    fn extreme_ray_oracle(sys: &MatchingSystem) -> Vec<NormalCoordVector> {
        let n = 7 * sys.tetra_count;
        let a = &sys.matrix;
        let mut out: Vec<NormalCoordVector> = Vec::new();
        for mask in 0u32..(1 << n) {
            let zeros: Vec<usize> = (0..n).filter(|&i| mask & (1 << i) != 0).collect();
            // rows: matching system plus e_i for i in zeros
            let mut rows: Vec<Vec<i64>> = (0..a.rows)
                .map(|r| (0..n).map(|c| a.get(r, c)).collect())
                .collect();
            for &z in &zeros {
                let mut e = vec![0i64; n];
                e[z] = 1;
                rows.push(e);
            }
            let mat = IntMat::from_rows(rows);
            if rank(&mat) != n - 1 {
                continue;
            }
            // one-dimensional solution space: find its generator
            let basis = integer_kernel_basis(&mat);
            if basis.len() != 1 {
                continue;
            }
            let gen: Vec<i64> =
                basis[0].iter().map(|x| i64::try_from(x).unwrap()).collect();
            let gen: Vec<i64> = if gen.iter().any(|&x| x < 0) {
                if gen.iter().any(|&x| x > 0) {
                    continue; // mixed signs: not in the positive cone
                }
                gen.iter().map(|&x| -x).collect()
            } else {
                gen
            };
            if gen.iter().all(|&x| x == 0) {
                continue;
            }
            let v = NormalCoordVector(gen);
            if !out.contains(&v) {
                out.push(v);
            }
        }
        out.sort();
        out
    }

    #[test]
    fn one_tet_matches_facet_subset_oracle() {
        let tri = fixtures::one_tet_closed();
        let sys = matching_system(&tri).unwrap();
        let ours: Vec<NormalCoordVector> =
            vertex_solutions(&sys).into_iter().map(|(v, _)| v).collect();
        let oracle = extreme_ray_oracle(&sys);
        assert_eq!(ours, oracle);
    }

    #[test]
    fn boundary_simplex_includes_vertex_links() {
        let tri = fixtures::boundary_4_simplex();
        let sys = matching_system(&tri).unwrap();
        let rays = vertex_solutions(&sys);
        let skel = tri.skeleton();
        for class in 0..skel.vertex_count {
            let link = vertex_link_vector(&skel, class);
            assert!(
                rays.iter().any(|(v, _)| *v == link),
                "vertex link {class} missing from extreme rays"
            );
        }
        // every ray satisfies the system exactly
        for (v, _) in &rays {
            sys.contains(v).unwrap();
        }
    }
}
