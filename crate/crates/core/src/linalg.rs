//! Dense matrices over the rationals.
//!
//! Sizes that occur here are small (tens of rows), so everything is plain
//! Gaussian elimination on `BigRational` entries.

use std::fmt;
use std::ops::{Index, IndexMut};

use num_traits::{One, Signed, Zero};

use crate::rational::{to_f64, Q};

#[derive(Clone, PartialEq, Eq)]
pub struct QMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Q>,
}

impl fmt::Debug for QMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "QMatrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            let row: Vec<String> = self.row(r).iter().map(|x| x.to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

impl Index<(usize, usize)> for QMatrix {
    type Output = Q;
    fn index(&self, (r, c): (usize, usize)) -> &Q {
        &self.data[r * self.cols + c]
    }
}

impl IndexMut<(usize, usize)> for QMatrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut Q {
        &mut self.data[r * self.cols + c]
    }
}

/// Result of reducing a matrix to reduced row echelon form.
pub struct Rref {
    pub matrix: QMatrix,
    pub pivots: Vec<usize>,
}

impl QMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        QMatrix {
            rows,
            cols,
            data: vec![Q::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Q::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Q>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        assert!(rows.iter().all(|x| x.len() == c), "ragged matrix rows");
        QMatrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn from_i64(rows: &[Vec<i64>]) -> Self {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| Q::from_integer(x.into())).collect())
                .collect(),
        )
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(cols: &[Vec<Q>], nrows: usize) -> Self {
        let mut m = Self::zeros(nrows, cols.len());
        for (j, c) in cols.iter().enumerate() {
            assert_eq!(c.len(), nrows);
            for (i, x) in c.iter().enumerate() {
                m[(i, j)] = x.clone();
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, r: usize) -> &[Q] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<Q> {
        (0..self.rows).map(|r| self[(r, c)].clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<Q>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn to_f64_rows(&self) -> Vec<Vec<f64>> {
        (0..self.rows)
            .map(|r| self.row(r).iter().map(to_f64).collect())
            .collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t[(c, r)] = self[(r, c)].clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &QMatrix) -> QMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch in product");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Q]) -> Vec<Q> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|r| {
                self.row(r)
                    .iter()
                    .zip(v)
                    .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                    .fold(Q::zero(), |acc, (a, b)| acc + a * b)
            })
            .collect()
    }

    /// Bilinear form `aᵀ M b`.
    pub fn form(&self, a: &[Q], b: &[Q]) -> Q {
        let mb = self.mul_vec(b);
        a.iter().zip(&mb).fold(Q::zero(), |acc, (x, y)| acc + x * y)
    }

    pub fn sub(&self, other: &QMatrix) -> QMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        QMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    pub fn scale(&self, s: &Q) -> QMatrix {
        QMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| a * s).collect(),
        }
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square() && (0..self.rows).all(|i| (0..i).all(|j| self[(i, j)] == self[(j, i)]))
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn rref(&self) -> Rref {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..m.cols {
            if row == m.rows {
                break;
            }
            let Some(p) = (row..m.rows).find(|&r| !m[(r, col)].is_zero()) else {
                continue;
            };
            m.swap_rows(row, p);
            let inv = m[(row, col)].recip();
            for c in col..m.cols {
                let v = &m[(row, c)] * &inv;
                m[(row, c)] = v;
            }
            for r in 0..m.rows {
                if r != row && !m[(r, col)].is_zero() {
                    let f = m[(r, col)].clone();
                    for c in col..m.cols {
                        let v = &m[(row, c)] * &f;
                        m[(r, c)] -= v;
                    }
                }
            }
            pivots.push(col);
            row += 1;
        }
        Rref { matrix: m, pivots }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().pivots.len()
    }

    /// Basis of the right kernel `{x : M x = 0}`.
    pub fn nullspace(&self) -> Vec<Vec<Q>> {
        let Rref { matrix, pivots } = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![Q::zero(); self.cols];
                v[f] = Q::one();
                for (r, &p) in pivots.iter().enumerate() {
                    v[p] = -matrix[(r, f)].clone();
                }
                v
            })
            .collect()
    }

    /// Some solution of `M x = b` (free variables set to zero), or `None` if
    /// the system is inconsistent.
    pub fn solve(&self, b: &[Q]) -> Option<Vec<Q>> {
        assert_eq!(b.len(), self.rows);
        let mut aug = Self::zeros(self.rows, self.cols + 1);
        for r in 0..self.rows {
            for c in 0..self.cols {
                aug[(r, c)] = self[(r, c)].clone();
            }
            aug[(r, self.cols)] = b[r].clone();
        }
        let Rref { matrix, pivots } = aug.rref();
        if pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![Q::zero(); self.cols];
        for (r, &p) in pivots.iter().enumerate() {
            x[p] = matrix[(r, self.cols)].clone();
        }
        Some(x)
    }

    pub fn inverse(&self) -> Option<QMatrix> {
        assert!(self.is_square());
        let n = self.rows;
        let mut aug = Self::zeros(n, 2 * n);
        for r in 0..n {
            for c in 0..n {
                aug[(r, c)] = self[(r, c)].clone();
            }
            aug[(r, n + r)] = Q::one();
        }
        let Rref { matrix, pivots } = aug.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        let mut inv = Self::zeros(n, n);
        for r in 0..n {
            for c in 0..n {
                inv[(r, c)] = matrix[(r, n + c)].clone();
            }
        }
        Some(inv)
    }

    pub fn determinant(&self) -> Q {
        assert!(self.is_square());
        let mut m = self.clone();
        let n = m.rows;
        let mut det = Q::one();
        for col in 0..n {
            let Some(p) = (col..n).find(|&r| !m[(r, col)].is_zero()) else {
                return Q::zero();
            };
            if p != col {
                m.swap_rows(p, col);
                det = -det;
            }
            let piv = m[(col, col)].clone();
            det *= &piv;
            for r in col + 1..n {
                if m[(r, col)].is_zero() {
                    continue;
                }
                let f = &m[(r, col)] / &piv;
                for c in col..n {
                    let v = &m[(col, c)] * &f;
                    m[(r, c)] -= v;
                }
            }
        }
        det
    }

    /// Characteristic polynomial `det(tI − M)`, coefficients in ascending
    /// degree (monic, length n+1). Faddeev–LeVerrier recursion.
    pub fn charpoly(&self) -> Vec<Q> {
        assert!(self.is_square());
        let n = self.rows;
        let mut coeffs = vec![Q::zero(); n + 1];
        coeffs[n] = Q::one();
        let mut mk = QMatrix::zeros(n, n);
        for k in 1..=n {
            // M_k = M·M_{k-1} + c_{n-k+1} I ; c_{n-k} = -tr(M·M_k)/k
            let mut next = self.mul(&mk);
            for i in 0..n {
                next[(i, i)] += &coeffs[n - k + 1];
            }
            let prod = self.mul(&next);
            let tr = (0..n).fold(Q::zero(), |acc, i| acc + &prod[(i, i)]);
            coeffs[n - k] = -tr / Q::from_integer((k as i64).into());
            mk = next;
        }
        coeffs
    }

    /// Inertia `(positive, negative, zero)` of a symmetric matrix, computed by
    /// exact congruence diagonalization.
    pub fn inertia(&self) -> (usize, usize, usize) {
        assert!(self.is_symmetric(), "inertia of a non-symmetric matrix");
        let mut m = self.clone();
        let n = m.rows;
        let (mut pos, mut neg, mut zero) = (0, 0, 0);
        let mut active: Vec<usize> = (0..n).collect();
        while !active.is_empty() {
            let pivot = active.iter().copied().find(|&i| !m[(i, i)].is_zero());
            let pivot = match pivot {
                Some(p) => p,
                None => {
                    // all remaining diagonal entries vanish: find an off-diagonal entry
                    let pair = active.iter().find_map(|&i| {
                        active
                            .iter()
                            .find(|&&j| j != i && !m[(i, j)].is_zero())
                            .map(|&j| (i, j))
                    });
                    match pair {
                        None => {
                            zero += active.len();
                            break;
                        }
                        Some((i, j)) => {
                            // row_i += row_j, col_i += col_j: new diag = 2 m_ij
                            for c in 0..n {
                                let v = m[(j, c)].clone();
                                m[(i, c)] += v;
                            }
                            for r in 0..n {
                                let v = m[(r, j)].clone();
                                m[(r, i)] += v;
                            }
                            i
                        }
                    }
                }
            };
            let d = m[(pivot, pivot)].clone();
            if d.is_positive() {
                pos += 1;
            } else {
                neg += 1;
            }
            active.retain(|&i| i != pivot);
            for &r in &active {
                if m[(r, pivot)].is_zero() {
                    continue;
                }
                let f = &m[(r, pivot)] / &d;
                for &c in &active {
                    let v = &m[(pivot, c)] * &f;
                    m[(r, c)] -= v;
                }
                m[(r, pivot)] = Q::zero();
            }
            for &c in &active {
                m[(pivot, c)] = Q::zero();
            }
        }
        (pos, neg, zero)
    }

    pub fn is_negative_definite(&self) -> bool {
        let (p, n, z) = self.inertia();
        p == 0 && z == 0 && n == self.rows
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{q, qf};

    #[test]
    fn determinant_and_inverse() {
        let m = QMatrix::from_i64(&[vec![2, 1], vec![1, 1]]);
        assert_eq!(m.determinant(), q(1));
        let inv = m.inverse().unwrap();
        assert_eq!(inv, QMatrix::from_i64(&[vec![1, -1], vec![-1, 2]]));
        let singular = QMatrix::from_i64(&[vec![1, 2], vec![2, 4]]);
        assert!(singular.inverse().is_none());
        assert_eq!(singular.determinant(), q(0));
    }

    #[test]
    fn charpoly_of_companion() {
        // t^2 - 3t + 1
        let m = QMatrix::from_i64(&[vec![2, 1], vec![1, 1]]);
        assert_eq!(m.charpoly(), vec![q(1), q(-3), q(1)]);
        let m3 = QMatrix::from_i64(&[vec![0, 0, 6], vec![1, 0, -11], vec![0, 1, 6]]);
        // (t-1)(t-2)(t-3) = t^3 - 6t^2 + 11t - 6
        assert_eq!(m3.charpoly(), vec![q(-6), q(11), q(-6), q(1)]);
    }

    #[test]
    fn inertia_handles_zero_diagonal() {
        let hyperbolic = QMatrix::from_i64(&[vec![0, 1], vec![1, 0]]);
        assert_eq!(hyperbolic.inertia(), (1, 1, 0));
        let lorentz = QMatrix::from_i64(&[vec![1, 0, 0], vec![0, -1, 0], vec![0, 0, -1]]);
        assert_eq!(lorentz.inertia(), (1, 2, 0));
        let degenerate = QMatrix::from_i64(&[vec![1, 1], vec![1, 1]]);
        assert_eq!(degenerate.inertia(), (1, 0, 1));
    }

    #[test]
    fn nullspace_and_solve() {
        let m = QMatrix::from_i64(&[vec![1, 2, 3], vec![2, 4, 6]]);
        let ns = m.nullspace();
        assert_eq!(ns.len(), 2);
        for v in &ns {
            assert!(m.mul_vec(v).iter().all(|x| x.is_zero()));
        }
        let x = m.solve(&[q(3), q(6)]).unwrap();
        assert_eq!(m.mul_vec(&x), vec![q(3), q(6)]);
        assert!(m.solve(&[q(1), q(1)]).is_none());
        let half = QMatrix::from_i64(&[vec![2]]).solve(&[q(1)]).unwrap();
        assert_eq!(half, vec![qf(1, 2)]);
    }
}
