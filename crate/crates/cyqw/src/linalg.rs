//! Dense and sparse exact linear algebra over the rationals.
//!
//! Everything here is deterministic: row echelon forms use first-nonzero
//! pivoting, solutions set free variables to zero, and kernel bases follow
//! column order.

use crate::pathalg::Coef;
use num_traits::{One, Zero};

/// Dense row-major rational matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mat {
    rows: usize,
    cols: usize,
    a: Vec<Coef>,
}

impl Mat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Mat {
            rows,
            cols,
            a: vec![Coef::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Mat::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Coef::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Coef>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        let mut a = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged matrix rows");
            a.extend(row);
        }
        Mat { rows: r, cols: c, a }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn at(&self, i: usize, j: usize) -> &Coef {
        &self.a[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Coef) {
        self.a[i * self.cols + j] = v;
    }

    pub fn add_to(&mut self, i: usize, j: usize, v: &Coef) {
        self.a[i * self.cols + j] += v;
    }

    pub fn transpose(&self) -> Mat {
        let mut m = Mat::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m.set(j, i, self.at(i, j).clone());
            }
        }
        m
    }

    pub fn mul(&self, other: &Mat) -> Mat {
        assert_eq!(self.cols, other.rows, "matrix product shape mismatch");
        let mut m = Mat::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let aik = self.at(i, k);
                if aik.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let v = aik * other.at(k, j);
                    m.add_to(i, j, &v);
                }
            }
        }
        m
    }

    pub fn add(&self, other: &Mat) -> Mat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut m = self.clone();
        for (x, y) in m.a.iter_mut().zip(&other.a) {
            *x += y;
        }
        m
    }

    pub fn sub(&self, other: &Mat) -> Mat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut m = self.clone();
        for (x, y) in m.a.iter_mut().zip(&other.a) {
            *x -= y;
        }
        m
    }

    pub fn neg(&self) -> Mat {
        let mut m = self.clone();
        for x in m.a.iter_mut() {
            *x = -x.clone();
        }
        m
    }

    pub fn scale(&self, c: &Coef) -> Mat {
        let mut m = self.clone();
        for x in m.a.iter_mut() {
            *x = x.clone() * c;
        }
        m
    }

    pub fn apply(&self, v: &[Coef]) -> Vec<Coef> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                let mut acc = Coef::zero();
                for j in 0..self.cols {
                    let aij = self.at(i, j);
                    if !aij.is_zero() {
                        acc += aij * &v[j];
                    }
                }
                acc
            })
            .collect()
    }

    /// Reduced row echelon form; returns the pivot columns.
    pub fn rref(&self) -> (Mat, Vec<usize>) {
        self.rref_within(self.cols)
    }

    /// Reduced row echelon form with pivots restricted to the first
    /// `pivot_limit` columns; trailing columns are eliminated alongside but
    /// never host a pivot.
    fn rref_within(&self, pivot_limit: usize) -> (Mat, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..pivot_limit {
            if r == m.rows {
                break;
            }
            let pivot_row = (r..m.rows).find(|&i| !m.at(i, c).is_zero());
            let Some(p) = pivot_row else { continue };
            if p != r {
                for j in 0..m.cols {
                    m.a.swap(p * m.cols + j, r * m.cols + j);
                }
            }
            let inv = m.at(r, c).clone().recip();
            for j in c..m.cols {
                let v = m.at(r, j) * &inv;
                m.set(r, j, v);
            }
            for i in 0..m.rows {
                if i != r && !m.at(i, c).is_zero() {
                    let f = m.at(i, c).clone();
                    for j in c..m.cols {
                        let v = m.at(i, j) - &f * m.at(r, j);
                        m.set(i, j, v);
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of the right kernel, one vector per non-pivot column, with the
    /// free coordinate set to one.
    pub fn kernel_basis(&self) -> Vec<Vec<Coef>> {
        let (r, pivots) = self.rref();
        let pivot_set: Vec<Option<usize>> = {
            let mut v = vec![None; self.cols];
            for (row, &c) in pivots.iter().enumerate() {
                v[c] = Some(row);
            }
            v
        };
        let mut basis = Vec::new();
        for free in 0..self.cols {
            if pivot_set[free].is_some() {
                continue;
            }
            let mut vec = vec![Coef::zero(); self.cols];
            vec[free] = Coef::one();
            for (col, p) in pivot_set.iter().enumerate() {
                if let Some(row) = p {
                    vec[col] = -r.at(*row, free).clone();
                }
            }
            basis.push(vec);
        }
        basis
    }

    /// One solution of `self * x = b` if consistent, free variables zero.
    pub fn solve(&self, b: &[Coef]) -> Option<Vec<Coef>> {
        assert_eq!(self.rows, b.len());
        let mut col = Mat::zeros(self.rows, 1);
        for (i, v) in b.iter().enumerate() {
            col.set(i, 0, v.clone());
        }
        let x = self.solve_mat(&col)?;
        Some((0..self.cols).map(|i| x.at(i, 0).clone()).collect())
    }

    /// Solves `self * X = B` for all columns in one elimination, free
    /// variables zero; `None` if any column is inconsistent.
    pub fn solve_mat(&self, b: &Mat) -> Option<Mat> {
        assert_eq!(self.rows, b.rows);
        let mut aug = Mat::zeros(self.rows, self.cols + b.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                aug.set(i, j, self.at(i, j).clone());
            }
            for j in 0..b.cols {
                aug.set(i, self.cols + j, b.at(i, j).clone());
            }
        }
        let (r, pivots) = aug.rref_within(self.cols);
        for i in pivots.len()..self.rows {
            for j in 0..b.cols {
                if !r.at(i, self.cols + j).is_zero() {
                    return None;
                }
            }
        }
        let mut out = Mat::zeros(self.cols, b.cols);
        for (row, &c) in pivots.iter().enumerate() {
            for j in 0..b.cols {
                out.set(c, j, r.at(row, self.cols + j).clone());
            }
        }
        Some(out)
    }

    pub fn inverse(&self) -> Option<Mat> {
        assert_eq!(self.rows, self.cols, "inverse of a non-square matrix");
        let n = self.rows;
        let mut aug = Mat::zeros(n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug.set(i, j, self.at(i, j).clone());
            }
            aug.set(i, n + i, Coef::one());
        }
        let (r, pivots) = aug.rref();
        if pivots.len() < n || pivots.last().is_some_and(|&p| p >= n) {
            return None;
        }
        let mut inv = Mat::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                inv.set(i, j, r.at(i, n + j).clone());
            }
        }
        Some(inv)
    }

    pub fn det(&self) -> Coef {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let n = self.rows;
        let mut m = self.clone();
        let mut det = Coef::one();
        for c in 0..n {
            let pivot = (c..n).find(|&i| !m.at(i, c).is_zero());
            let Some(p) = pivot else { return Coef::zero() };
            if p != c {
                for j in 0..n {
                    m.a.swap(p * n + j, c * n + j);
                }
                det = -det;
            }
            det *= m.at(c, c);
            let inv = m.at(c, c).clone().recip();
            for i in c + 1..n {
                if m.at(i, c).is_zero() {
                    continue;
                }
                let f = m.at(i, c) * &inv;
                for j in c..n {
                    let v = m.at(i, j) - &f * m.at(c, j);
                    m.set(i, j, v);
                }
            }
        }
        det
    }

    pub fn is_zero(&self) -> bool {
        self.a.iter().all(|c| c.is_zero())
    }

    pub fn to_rows(&self) -> Vec<Vec<Coef>> {
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.at(i, j).clone()).collect())
            .collect()
    }
}

/// Rank of a sparse matrix given as rows of (column, coefficient) pairs.
///
/// Incremental echelon: rows are processed in order and reduced against the
/// pivots found so far; fill-in stays modest for near-incidence matrices.
pub fn sparse_rank(rows: impl IntoIterator<Item = Vec<(u32, Coef)>>) -> usize {
    use std::collections::BTreeMap;
    // pivot column -> reduced row (sorted by column, leading col = pivot)
    let mut pivots: BTreeMap<u32, Vec<(u32, Coef)>> = BTreeMap::new();
    for row in rows {
        let mut work: BTreeMap<u32, Coef> = BTreeMap::new();
        for (c, v) in row {
            if v.is_zero() {
                continue;
            }
            match work.entry(c) {
                std::collections::btree_map::Entry::Vacant(e) => {
                    e.insert(v);
                }
                std::collections::btree_map::Entry::Occupied(mut e) => {
                    let s = e.get().clone() + v;
                    if s.is_zero() {
                        e.remove();
                    } else {
                        *e.get_mut() = s;
                    }
                }
            }
        }
        loop {
            let Some((&lead, _)) = work.iter().next() else { break };
            let Some(prow) = pivots.get(&lead) else { break };
            let f = work[&lead].clone();
            for (c, v) in prow {
                let delta = v * &f;
                match work.entry(*c) {
                    std::collections::btree_map::Entry::Vacant(e) => {
                        e.insert(-delta);
                    }
                    std::collections::btree_map::Entry::Occupied(mut e) => {
                        let s = e.get().clone() - delta;
                        if s.is_zero() {
                            e.remove();
                        } else {
                            *e.get_mut() = s;
                        }
                    }
                }
            }
        }
        if let Some((&lead, _)) = work.iter().next() {
            let inv = work[&lead].clone().recip();
            let normalized: Vec<(u32, Coef)> =
                work.into_iter().map(|(c, v)| (c, v * &inv)).collect();
            pivots.insert(lead, normalized);
        }
    }
    pivots.len()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(n: i64) -> Coef {
        Coef::from_integer(n.into())
    }

    fn m(rows: &[&[i64]]) -> Mat {
        Mat::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| c(x)).collect())
                .collect(),
        )
    }

    #[test]
    fn rank_and_kernel() {
        let a = m(&[&[1, 2, 3], &[2, 4, 6], &[1, 1, 1]]);
        assert_eq!(a.rank(), 2);
        let k = a.kernel_basis();
        assert_eq!(k.len(), 1);
        for row in 0..3 {
            let dot: Coef = (0..3).map(|j| a.at(row, j) * &k[0][j]).sum();
            assert!(dot.is_zero());
        }
    }

    #[test]
    fn solve_and_inverse() {
        let a = m(&[&[2, 1], &[1, 1]]);
        let x = a.solve(&[c(3), c(2)]).unwrap();
        assert_eq!(x, vec![c(1), c(1)]);
        let inv = a.inverse().unwrap();
        assert_eq!(a.mul(&inv), Mat::identity(2));
        assert_eq!(a.det(), c(1));
        // Inconsistent system.
        let b = m(&[&[1, 1], &[1, 1]]);
        assert!(b.solve(&[c(0), c(1)]).is_none());
        assert!(b.inverse().is_none());
    }

    #[test]
    fn sparse_rank_agrees_with_dense() {
        let dense = m(&[&[1, 0, 2, 0], &[0, 1, 0, 3], &[1, 1, 2, 3], &[0, 0, 1, 1]]);
        let sparse_rows: Vec<Vec<(u32, Coef)>> = dense
            .to_rows()
            .into_iter()
            .map(|r| {
                r.into_iter()
                    .enumerate()
                    .filter(|(_, v)| !v.is_zero())
                    .map(|(j, v)| (j as u32, v))
                    .collect()
            })
            .collect();
        assert_eq!(sparse_rank(sparse_rows), dense.rank());
    }
}
