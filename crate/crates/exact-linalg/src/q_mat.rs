//! Dense matrices over an exact [`Field`], with Gaussian elimination.

use crate::field::Field;
use crate::int_mat::IntMat;
use num_rational::BigRational;
use std::fmt;

/// A dense matrix over an exact field `F`, stored row-major.
#[derive(Clone, PartialEq)]
pub struct QMat<F: Field> {
    rows: usize,
    cols: usize,
    entries: Vec<F>,
}

impl<F: Field> QMat<F> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        QMat {
            rows,
            cols,
            entries: vec![F::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = F::one();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> F) -> Self {
        let mut entries = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                entries.push(f(r, c));
            }
        }
        QMat {
            rows,
            cols,
            entries,
        }
    }

    pub fn from_rows(rows: Vec<Vec<F>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        QMat {
            rows: r,
            cols: c,
            entries: rows.into_iter().flatten().collect(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row_vec(&self, r: usize) -> Vec<F> {
        self.entries[r * self.cols..(r + 1) * self.cols].to_vec()
    }

    pub fn col_vec(&self, c: usize) -> Vec<F> {
        (0..self.rows).map(|r| self[(r, c)].clone()).collect()
    }

    pub fn transpose(&self) -> Self {
        QMat::from_fn(self.cols, self.rows, |r, c| self[(c, r)].clone())
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|e| e.is_zero())
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "dimension mismatch in mul");
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
                        out[(i, j)] = out[(i, j)].add_ref(&a.mul_ref(b));
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[F]) -> Vec<F> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                let mut acc = F::zero();
                for j in 0..self.cols {
                    if !self[(i, j)].is_zero() && !v[j].is_zero() {
                        acc = acc.add_ref(&self[(i, j)].mul_ref(&v[j]));
                    }
                }
                acc
            })
            .collect()
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        QMat::from_fn(self.rows, self.cols, |r, c| self[(r, c)].add_ref(&other[(r, c)]))
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        QMat::from_fn(self.rows, self.cols, |r, c| self[(r, c)].sub_ref(&other[(r, c)]))
    }

    pub fn scale(&self, k: &F) -> Self {
        QMat::from_fn(self.rows, self.cols, |r, c| self[(r, c)].mul_ref(k))
    }

    pub fn augment(&self, other: &Self) -> Self {
        assert_eq!(self.rows, other.rows);
        QMat::from_fn(self.rows, self.cols + other.cols, |r, c| {
            if c < self.cols {
                self[(r, c)].clone()
            } else {
                other[(r, c - self.cols)].clone()
            }
        })
    }

    pub fn stack(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.cols);
        let mut entries = self.entries.clone();
        entries.extend_from_slice(&other.entries);
        QMat {
            rows: self.rows + other.rows,
            cols: self.cols,
            entries,
        }
    }

    pub fn map<G: Field>(&self, f: impl Fn(&F) -> G) -> QMat<G> {
        QMat::from_fn(self.rows, self.cols, |r, c| f(&self[(r, c)]))
    }

    /// Reduced row echelon form; returns (rref, pivot columns).
    pub fn rref(&self) -> (Self, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut pr = 0;
        for col in 0..m.cols {
            if pr == m.rows {
                break;
            }
            let Some(p) = (pr..m.rows).find(|&r| !m[(r, col)].is_zero()) else {
                continue;
            };
            m.swap_rows_in_place(pr, p);
            let inv = m[(pr, col)].inv();
            for c in col..m.cols {
                m[(pr, c)] = m[(pr, c)].mul_ref(&inv);
            }
            for r in 0..m.rows {
                if r != pr && !m[(r, col)].is_zero() {
                    let factor = m[(r, col)].clone();
                    for c in col..m.cols {
                        let t = factor.mul_ref(&m[(pr, c)]);
                        m[(r, c)] = m[(r, c)].sub_ref(&t);
                    }
                }
            }
            pivots.push(col);
            pr += 1;
        }
        (m, pivots)
    }

    fn swap_rows_in_place(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.entries.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of the right kernel `{x : m x = 0}`, one vector per row.
    pub fn right_kernel(&self) -> Vec<Vec<F>> {
        let (r, pivots) = self.rref();
        let mut free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.sort_unstable();
        let mut basis = Vec::new();
        for &fc in &free {
            let mut v = vec![F::zero(); self.cols];
            v[fc] = F::one();
            for (i, &pc) in pivots.iter().enumerate() {
                v[pc] = r[(i, fc)].neg_ref();
            }
            basis.push(v);
        }
        basis
    }

    /// One solution of `m x = b`, if any.
    pub fn solve(&self, b: &[F]) -> Option<Vec<F>> {
        assert_eq!(b.len(), self.rows);
        let rhs = QMat::from_fn(self.rows, 1, |r, _| b[r].clone());
        let (r, pivots) = self.augment(&rhs).rref();
        // Inconsistent iff a pivot lands in the last column.
        if pivots.contains(&self.cols) {
            return None;
        }
        let mut x = vec![F::zero(); self.cols];
        for (i, &pc) in pivots.iter().enumerate() {
            x[pc] = r[(i, self.cols)].clone();
        }
        Some(x)
    }

    /// Inverse of a square matrix, if it is invertible.
    pub fn inverse(&self) -> Option<Self> {
        assert_eq!(self.rows, self.cols);
        let (r, pivots) = self.augment(&Self::identity(self.rows)).rref();
        if pivots.len() != self.rows || pivots.iter().any(|&p| p >= self.rows) {
            return None;
        }
        Some(QMat::from_fn(self.rows, self.rows, |i, j| {
            r[(i, self.rows + j)].clone()
        }))
    }

    pub fn det(&self) -> F {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut m = self.clone();
        let mut det = F::one();
        for col in 0..n {
            let Some(p) = (col..n).find(|&r| !m[(r, col)].is_zero()) else {
                return F::zero();
            };
            if p != col {
                m.swap_rows_in_place(col, p);
                det = det.neg_ref();
            }
            det = det.mul_ref(&m[(col, col)]);
            let inv = m[(col, col)].inv();
            for r in col + 1..n {
                if m[(r, col)].is_zero() {
                    continue;
                }
                let factor = m[(r, col)].mul_ref(&inv);
                for c in col..n {
                    let t = factor.mul_ref(&m[(col, c)]);
                    m[(r, c)] = m[(r, c)].sub_ref(&t);
                }
            }
        }
        det
    }
}

impl QMat<BigRational> {
    pub fn from_int(m: &IntMat) -> Self {
        QMat::from_fn(m.rows(), m.cols(), |r, c| {
            BigRational::from_integer(m[(r, c)].clone())
        })
    }
}

impl<F: Field> std::ops::Index<(usize, usize)> for QMat<F> {
    type Output = F;
    fn index(&self, (r, c): (usize, usize)) -> &F {
        &self.entries[r * self.cols + c]
    }
}

impl<F: Field> std::ops::IndexMut<(usize, usize)> for QMat<F> {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut F {
        &mut self.entries[r * self.cols + c]
    }
}

impl<F: Field> fmt::Debug for QMat<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "QMat {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            writeln!(f, "  {:?}", self.row_vec(r))?;
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;
    use num_traits::Zero;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn solve_identity() {
        let m = QMat::<BigRational>::identity(3);
        let b = vec![q(1, 1), q(2, 1), q(3, 1)];
        assert_eq!(m.solve(&b).unwrap(), b);
    }

    #[test]
    fn solve_and_kernel() {
        let m = QMat::from_rows(vec![vec![q(1, 1), q(2, 1)], vec![q(2, 1), q(4, 1)]]);
        assert_eq!(m.rank(), 1);
        let k = m.right_kernel();
        assert_eq!(k.len(), 1);
        assert!(m.mul_vec(&k[0]).iter().all(|x| x.is_zero()));
        assert!(m.solve(&vec![q(1, 1), q(3, 1)]).is_none());
        let x = m.solve(&vec![q(1, 1), q(2, 1)]).unwrap();
        assert_eq!(m.mul_vec(&x), vec![q(1, 1), q(2, 1)]);
    }

    #[test]
    fn inverse_round_trip() {
        let m = QMat::from_rows(vec![vec![q(2, 1), q(1, 1)], vec![q(1, 1), q(1, 1)]]);
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv), QMat::identity(2));
        assert_eq!(m.det(), q(1, 1));
        let sing = QMat::from_rows(vec![vec![q(1, 1), q(2, 1)], vec![q(2, 1), q(4, 1)]]);
        assert!(sing.inverse().is_none());
        assert!(sing.det().is_zero());
    }

    #[test]
    fn zero_matrix_full_kernel() {
        let m = QMat::<BigRational>::zeros(2, 3);
        assert_eq!(m.rank(), 0);
        assert_eq!(m.right_kernel().len(), 3);
    }
}
