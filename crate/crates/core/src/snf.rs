//! Integer matrices and Smith normal form.
//!
//! The fast path runs in checked i128 arithmetic; any overflow restarts the
//! computation with arbitrary-precision integers, so results are always
//! exact. Pivoting picks the smallest nonzero absolute value, ties broken by
//! row-major position.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

/// Dense row-major integer matrix with i64 entries.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntMat {
    pub rows: usize,
    pub cols: usize,
    data: Vec<i64>,
}

impl IntMat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMat { rows, cols, data: vec![0; rows * cols] }
    }

    pub fn from_rows(rows: Vec<Vec<i64>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c);
            data.extend(row);
        }
        IntMat { rows: r, cols: c, data }
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: i64) {
        self.data[i * self.cols + j] = v;
    }

    pub fn add_to(&mut self, i: usize, j: usize, v: i64) {
        self.data[i * self.cols + j] += v;
    }

    pub fn mul_vec(&self, v: &[i64]) -> Vec<i64> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.get(i, j) * v[j]).sum())
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    pub fn transpose(&self) -> IntMat {
        let mut out = IntMat::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.get(i, j));
            }
        }
        out
    }

    /// Matrix product, panicking on i64 overflow (fine for the small
    /// incidence matrices this is used on in tests).
    pub fn mul(&self, other: &IntMat) -> IntMat {
        assert_eq!(self.cols, other.rows);
        let mut out = IntMat::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    let v = out.get(i, j).checked_add(a.checked_mul(other.get(k, j)).unwrap());
                    out.set(i, j, v.unwrap());
                }
            }
        }
        out
    }
}

/// Invariant factors d_1 | d_2 | ... (positive, trivial 1s included) of a
/// matrix, i.e. the diagonal of its Smith normal form up to the rank.
pub fn invariant_factors(m: &IntMat) -> Vec<BigInt> {
    if let Some(d) = snf_diag_i128(m) {
        return d.into_iter().map(BigInt::from).collect();
    }
    snf_diag_big(m)
}

pub fn rank(m: &IntMat) -> usize {
    invariant_factors(m).len()
}

fn snf_diag_i128(m: &IntMat) -> Option<Vec<i128>> {
    let (r, c) = (m.rows, m.cols);
    let mut a: Vec<i128> = m.data.iter().map(|&x| x as i128).collect();
    let idx = |i: usize, j: usize| i * c + j;
    let mut diag = Vec::new();
    let mut t = 0;
    while t < r.min(c) {
        // pivot: smallest nonzero absolute value in the trailing submatrix
        let mut pivot: Option<(usize, usize)> = None;
        for i in t..r {
            for j in t..c {
                let v = a[idx(i, j)];
                if v != 0 && pivot.map_or(true, |(pi, pj)| v.abs() < a[idx(pi, pj)].abs()) {
                    pivot = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = pivot else { break };
        if pi != t {
            for j in 0..c {
                a.swap(idx(t, j), idx(pi, j));
            }
        }
        if pj != t {
            for i in 0..r {
                a.swap(idx(i, t), idx(i, pj));
            }
        }
        loop {
            // clear column t
            let mut dirty = false;
            for i in t + 1..r {
                let v = a[idx(i, t)];
                if v == 0 {
                    continue;
                }
                let p = a[idx(t, t)];
                let q = v.div_euclid(p);
                for j in t..c {
                    let s = q.checked_mul(a[idx(t, j)])?;
                    a[idx(i, j)] = a[idx(i, j)].checked_sub(s)?;
                }
                if a[idx(i, t)] != 0 {
                    // remainder is smaller than the pivot; swap it up
                    for j in 0..c {
                        a.swap(idx(t, j), idx(i, j));
                    }
                    dirty = true;
                }
            }
            // clear row t
            for j in t + 1..c {
                let v = a[idx(t, j)];
                if v == 0 {
                    continue;
                }
                let p = a[idx(t, t)];
                let q = v.div_euclid(p);
                for i in t..r {
                    let s = q.checked_mul(a[idx(i, t)])?;
                    a[idx(i, j)] = a[idx(i, j)].checked_sub(s)?;
                }
                if a[idx(t, j)] != 0 {
                    for i in 0..r {
                        a.swap(idx(i, t), idx(i, j));
                    }
                    dirty = true;
                }
            }
            if dirty {
                continue;
            }
            let col_clean = (t + 1..r).all(|i| a[idx(i, t)] == 0);
            let row_clean = (t + 1..c).all(|j| a[idx(t, j)] == 0);
            if col_clean && row_clean {
                // divisibility: every trailing entry must be divisible by the pivot
                let p = a[idx(t, t)];
                let mut fixed = true;
                'scan: for i in t + 1..r {
                    for j in t + 1..c {
                        if a[idx(i, j)] % p != 0 {
                            for jj in t..c {
                                let s = a[idx(i, jj)];
                                a[idx(t, jj)] = a[idx(t, jj)].checked_add(s)?;
                            }
                            fixed = false;
                            break 'scan;
                        }
                    }
                }
                if fixed {
                    break;
                }
            }
        }
        let mut p = a[idx(t, t)];
        if p < 0 {
            p = -p;
        }
        diag.push(p);
        t += 1;
    }
    Some(diag)
}

fn snf_diag_big(m: &IntMat) -> Vec<BigInt> {
    let (r, c) = (m.rows, m.cols);
    let mut a: Vec<BigInt> = m.data.iter().map(|&x| BigInt::from(x)).collect();
    let idx = |i: usize, j: usize| i * c + j;
    let mut diag = Vec::new();
    let mut t = 0;
    while t < r.min(c) {
        let mut pivot: Option<(usize, usize)> = None;
        for i in t..r {
            for j in t..c {
                if !a[idx(i, j)].is_zero()
                    && pivot
                        .map_or(true, |(pi, pj)| a[idx(i, j)].abs() < a[idx(pi, pj)].abs())
                {
                    pivot = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = pivot else { break };
        if pi != t {
            for j in 0..c {
                a.swap(idx(t, j), idx(pi, j));
            }
        }
        if pj != t {
            for i in 0..r {
                a.swap(idx(i, t), idx(i, pj));
            }
        }
        loop {
            let mut dirty = false;
            for i in t + 1..r {
                if a[idx(i, t)].is_zero() {
                    continue;
                }
                let q = div_euclid_big(&a[idx(i, t)], &a[idx(t, t)]);
                for j in t..c {
                    let s = &q * &a[idx(t, j)];
                    a[idx(i, j)] = &a[idx(i, j)] - s;
                }
                if !a[idx(i, t)].is_zero() {
                    for j in 0..c {
                        a.swap(idx(t, j), idx(i, j));
                    }
                    dirty = true;
                }
            }
            for j in t + 1..c {
                if a[idx(t, j)].is_zero() {
                    continue;
                }
                let q = div_euclid_big(&a[idx(t, j)], &a[idx(t, t)]);
                for i in t..r {
                    let s = &q * &a[idx(i, t)];
                    a[idx(i, j)] = &a[idx(i, j)] - s;
                }
                if !a[idx(t, j)].is_zero() {
                    for i in 0..r {
                        a.swap(idx(i, t), idx(i, j));
                    }
                    dirty = true;
                }
            }
            if dirty {
                continue;
            }
            let col_clean = (t + 1..r).all(|i| a[idx(i, t)].is_zero());
            let row_clean = (t + 1..c).all(|j| a[idx(t, j)].is_zero());
            if col_clean && row_clean {
                let p = a[idx(t, t)].clone();
                let mut fixed = true;
                'scan: for i in t + 1..r {
                    for j in t + 1..c {
                        if !(&a[idx(i, j)] % &p).is_zero() {
                            for jj in t..c {
                                let s = a[idx(i, jj)].clone();
                                a[idx(t, jj)] = &a[idx(t, jj)] + s;
                            }
                            fixed = false;
                            break 'scan;
                        }
                    }
                }
                if fixed {
                    break;
                }
            }
        }
        diag.push(a[idx(t, t)].abs());
        t += 1;
    }
    diag
}

fn div_euclid_big(a: &BigInt, b: &BigInt) -> BigInt {
    let (q, r) = (a / b, a % b);
    if r.is_negative() {
        if b.is_positive() {
            q - 1
        } else {
            q + 1
        }
    } else {
        q
    }
}

/// Full Smith decomposition with transforms: returns (u, v, diag) with
/// u * m * v diagonal, u and v unimodular. BigInt throughout; used where the
/// transforms are needed (integer kernels, lattice work), not in bulk.
pub struct SmithTransforms {
    pub u: Vec<Vec<BigInt>>,
    pub v: Vec<Vec<BigInt>>,
    pub diag: Vec<BigInt>,
    pub rank: usize,
}

pub fn snf_with_transforms(m: &IntMat) -> SmithTransforms {
    let (r, c) = (m.rows, m.cols);
    let mut a: Vec<BigInt> = m.data.iter().map(|&x| BigInt::from(x)).collect();
    let idx = |i: usize, j: usize| i * c + j;
    let mut u: Vec<Vec<BigInt>> =
        (0..r).map(|i| (0..r).map(|j| BigInt::from((i == j) as i64)).collect()).collect();
    let mut v: Vec<Vec<BigInt>> =
        (0..c).map(|i| (0..c).map(|j| BigInt::from((i == j) as i64)).collect()).collect();

    let mut t = 0;
    while t < r.min(c) {
        let mut pivot: Option<(usize, usize)> = None;
        for i in t..r {
            for j in t..c {
                if !a[idx(i, j)].is_zero()
                    && pivot
                        .map_or(true, |(pi, pj)| a[idx(i, j)].abs() < a[idx(pi, pj)].abs())
                {
                    pivot = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = pivot else { break };
        if pi != t {
            for j in 0..c {
                a.swap(idx(t, j), idx(pi, j));
            }
            u.swap(t, pi);
        }
        if pj != t {
            for i in 0..r {
                a.swap(idx(i, t), idx(i, pj));
            }
            for row in v.iter_mut() {
                row.swap(t, pj);
            }
        }
        loop {
            let mut dirty = false;
            for i in t + 1..r {
                if a[idx(i, t)].is_zero() {
                    continue;
                }
                let q = div_euclid_big(&a[idx(i, t)], &a[idx(t, t)]);
                for j in t..c {
                    let s = &q * &a[idx(t, j)];
                    a[idx(i, j)] = &a[idx(i, j)] - s;
                }
                for j in 0..r {
                    let s = &q * &u[t][j];
                    u[i][j] = &u[i][j] - s;
                }
                if !a[idx(i, t)].is_zero() {
                    for j in 0..c {
                        a.swap(idx(t, j), idx(i, j));
                    }
                    u.swap(t, i);
                    dirty = true;
                }
            }
            for j in t + 1..c {
                if a[idx(t, j)].is_zero() {
                    continue;
                }
                let q = div_euclid_big(&a[idx(t, j)], &a[idx(t, t)]);
                for i in t..r {
                    let s = &q * &a[idx(i, t)];
                    a[idx(i, j)] = &a[idx(i, j)] - s;
                }
                for i in 0..c {
                    let s = &q * &v[i][t];
                    v[i][j] = &v[i][j] - s;
                }
                if !a[idx(t, j)].is_zero() {
                    for i in 0..r {
                        a.swap(idx(i, t), idx(i, j));
                    }
                    for row in v.iter_mut() {
                        row.swap(t, j);
                    }
                    dirty = true;
                }
            }
            if dirty {
                continue;
            }
            let col_clean = (t + 1..r).all(|i| a[idx(i, t)].is_zero());
            let row_clean = (t + 1..c).all(|j| a[idx(t, j)].is_zero());
            if col_clean && row_clean {
                let p = a[idx(t, t)].clone();
                let mut fixed = true;
                'scan: for i in t + 1..r {
                    for j in t + 1..c {
                        if !(&a[idx(i, j)] % &p).is_zero() {
                            for jj in t..c {
                                let s = a[idx(i, jj)].clone();
                                a[idx(t, jj)] = &a[idx(t, jj)] + s;
                            }
                            let urow: Vec<BigInt> = u[i].clone();
                            for (jj, s) in urow.into_iter().enumerate() {
                                u[t][jj] = &u[t][jj] + s;
                            }
                            fixed = false;
                            break 'scan;
                        }
                    }
                }
                if fixed {
                    break;
                }
            }
        }
        t += 1;
    }
    let mut diag = Vec::new();
    for k in 0..t {
        diag.push(a[idx(k, k)].abs());
    }
    SmithTransforms { u, v, diag, rank: t }
}

/// Basis of the saturated integer kernel {x : m x = 0} as columns.
pub fn integer_kernel_basis(m: &IntMat) -> Vec<Vec<BigInt>> {
    let s = snf_with_transforms(m);
    let mut basis = Vec::new();
    for j in s.rank..m.cols {
        let col: Vec<BigInt> = (0..m.cols).map(|i| s.v[i][j].clone()).collect();
        basis.push(col);
    }
    basis
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn known_smith_form() {
        // worked example with invariant factors 1, 3, 21
        let m = IntMat::from_rows(vec![
            vec![-6, 111, -36, 6],
            vec![5, -672, 210, 74],
            vec![0, -255, 81, 24],
            vec![-7, 255, -81, -10],
        ]);
        let d = invariant_factors(&m);
        let expect: Vec<BigInt> =
            [1i64, 3, 21].iter().map(|&x| BigInt::from(x)).collect();
        assert_eq!(d, expect);
    }

    #[test]
    fn divisibility_chain() {
        let m = IntMat::from_rows(vec![vec![2, 4, 4], vec![-6, 6, 12], vec![10, 4, 16]]);
        let d = invariant_factors(&m);
        for w in d.windows(2) {
            assert!((&w[1] % &w[0]).is_zero(), "chain broken: {d:?}");
        }
    }

    #[test]
    fn kernel_basis_annihilates() {
        let m = IntMat::from_rows(vec![vec![1, 2, 3, 4], vec![2, 4, 6, 8], vec![0, 1, 1, 0]]);
        let basis = integer_kernel_basis(&m);
        assert_eq!(basis.len(), 2);
        for col in &basis {
            for i in 0..m.rows {
                let mut acc = BigInt::from(0);
                for j in 0..m.cols {
                    acc += BigInt::from(m.get(i, j)) * &col[j];
                }
                assert!(acc.is_zero());
            }
        }
    }

    #[test]
    fn transforms_diagonalize() {
        let m = IntMat::from_rows(vec![vec![2, 1, 0], vec![1, -3, 2]]);
        let s = snf_with_transforms(&m);
        // check u m v = diag
        let mut prod = vec![vec![BigInt::from(0); 3]; 2];
        for i in 0..2 {
            for j in 0..3 {
                let mut acc = BigInt::from(0);
                for k in 0..2 {
                    for l in 0..3 {
                        acc += &s.u[i][k] * BigInt::from(m.get(k, l)) * &s.v[l][j];
                    }
                }
                prod[i][j] = acc;
            }
        }
        for i in 0..2 {
            for j in 0..3 {
                if i == j && i < s.rank {
                    assert_eq!(prod[i][j].abs(), s.diag[i]);
                } else {
                    assert!(prod[i][j].is_zero(), "off-diagonal at ({i},{j}): {:?}", prod[i][j]);
                }
            }
        }
    }
}
