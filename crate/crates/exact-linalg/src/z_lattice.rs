//! Finitely generated subgroups of `(1/D) Z^n` in canonical Hermite form.

use crate::int_mat::IntMat;
use crate::normal_form::{hnf, right_kernel, snf};
use crate::q_mat::QMat;
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::fmt;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LatticeError {
    DimMismatch { left: usize, right: usize },
    /// Containment `sub <= sup` fails; carries a generator of `sub` outside `sup`.
    NotSubset { witness: Vec<BigRational> },
    /// Index/quotient data requested for lattices with different rational spans.
    SpanMismatch,
    NotFullRank,
}

impl fmt::Display for LatticeError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LatticeError::DimMismatch { left, right } => {
                write!(f, "ambient dimension mismatch: {} vs {}", left, right)
            }
            LatticeError::NotSubset { witness } => {
                write!(f, "lattice containment fails at vector {:?}", witness)
            }
            LatticeError::SpanMismatch => write!(f, "lattices span different subspaces"),
            LatticeError::NotFullRank => write!(f, "lattice does not have full rank"),
        }
    }
}

impl std::error::Error for LatticeError {}

/// A lattice `(1/denom) * rowspan(basis)` inside `Q^dim`.
///
/// The basis is kept in canonical row Hermite form with zero rows dropped and
/// the denominator factored out greedily, so two lattices are equal iff their
/// stored forms are identical.
#[derive(Clone, PartialEq, Eq)]
pub struct ZLattice {
    dim: usize,
    denom: BigInt,
    basis: IntMat,
}

impl ZLattice {
    pub fn zero(dim: usize) -> Self {
        ZLattice {
            dim,
            denom: BigInt::one(),
            basis: IntMat::zeros(0, dim),
        }
    }

    /// The standard lattice `Z^dim`.
    pub fn standard(dim: usize) -> Self {
        ZLattice {
            dim,
            denom: BigInt::one(),
            basis: IntMat::identity(dim),
        }
    }

    /// Lattice spanned by the rows of an integer matrix, scaled by `1/denom`.
    pub fn from_int_rows(rows: &IntMat, denom: &BigInt) -> Self {
        assert!(denom.is_positive(), "denominator must be positive");
        let r = hnf(rows);
        let nz: Vec<Vec<BigInt>> = (0..r.rank).map(|i| r.h.row_vec(i)).collect();
        let basis = if nz.is_empty() {
            IntMat::zeros(0, rows.cols())
        } else {
            IntMat::from_rows(nz)
        };
        let mut lat = ZLattice {
            dim: rows.cols(),
            denom: denom.clone(),
            basis,
        };
        lat.reduce_denom();
        lat
    }

    /// Lattice spanned by rational row vectors.
    pub fn from_q_rows(rows: &[Vec<BigRational>], dim: usize) -> Self {
        assert!(rows.iter().all(|r| r.len() == dim), "ragged rows");
        let mut denom = BigInt::one();
        for row in rows {
            for e in row {
                denom = denom.lcm(e.denom());
            }
        }
        let int = IntMat::from_fn(rows.len(), dim, |r, c| {
            let q = &rows[r][c] * BigRational::from_integer(denom.clone());
            assert!(q.is_integer());
            q.to_integer()
        });
        Self::from_int_rows(&int, &denom)
    }

    fn reduce_denom(&mut self) {
        if self.basis.rows() == 0 {
            self.denom = BigInt::one();
            return;
        }
        let g = num_integer::gcd(self.basis.content(), self.denom.clone());
        if g > BigInt::one() {
            self.basis = IntMat::from_fn(self.basis.rows(), self.basis.cols(), |r, c| {
                &self.basis[(r, c)] / &g
            });
            self.denom = &self.denom / &g;
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.basis.rows()
    }

    pub fn is_zero(&self) -> bool {
        self.basis.rows() == 0
    }

    pub fn denom(&self) -> &BigInt {
        &self.denom
    }

    /// The stored integer basis; the actual lattice is this divided by `denom`.
    pub fn int_basis(&self) -> &IntMat {
        &self.basis
    }

    /// Basis rows as rational vectors.
    pub fn q_basis_rows(&self) -> Vec<Vec<BigRational>> {
        (0..self.basis.rows())
            .map(|i| {
                self.basis
                    .row(i)
                    .iter()
                    .map(|e| BigRational::new(e.clone(), self.denom.clone()))
                    .collect()
            })
            .collect()
    }

    /// Integer basis rows after rescaling the lattice by `target / self.denom`.
    /// `target` must be a multiple of `self.denom`.
    fn int_rows_at(&self, target: &BigInt) -> IntMat {
        let factor = target / &self.denom;
        assert!((target % &self.denom).is_zero());
        self.basis.scale(&factor)
    }

    pub fn sum(&self, other: &ZLattice) -> Result<ZLattice, LatticeError> {
        self.check_dim(other)?;
        let d = self.denom.lcm(&other.denom);
        let stacked = self.int_rows_at(&d).stack(&other.int_rows_at(&d));
        Ok(ZLattice::from_int_rows(&stacked, &d))
    }

    pub fn intersect(&self, other: &ZLattice) -> Result<ZLattice, LatticeError> {
        self.check_dim(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(ZLattice::zero(self.dim));
        }
        let d = self.denom.lcm(&other.denom);
        let b1 = self.int_rows_at(&d);
        let b2 = other.int_rows_at(&d);
        // Rows (u | v) with u b1 + v b2 = 0; then u b1 runs over a basis
        // of the intersection.
        let stacked = b1.stack(&b2);
        let ker = crate::normal_form::left_kernel(&stacked);
        let mut rows = Vec::new();
        for i in 0..ker.rows() {
            let u: Vec<BigInt> = ker.row(i)[..b1.rows()].to_vec();
            let mut vec = vec![BigInt::zero(); self.dim];
            for (j, uc) in u.iter().enumerate() {
                if uc.is_zero() {
                    continue;
                }
                for c in 0..self.dim {
                    vec[c] += uc * &b1[(j, c)];
                }
            }
            rows.push(vec);
        }
        if rows.is_empty() {
            return Ok(ZLattice::zero(self.dim));
        }
        Ok(ZLattice::from_int_rows(&IntMat::from_rows(rows), &d))
    }

    /// Membership test for a rational vector.
    pub fn contains_vec(&self, v: &[BigRational]) -> bool {
        assert_eq!(v.len(), self.dim);
        // Clear denominators: w = denom * v must be integral.
        let mut w = Vec::with_capacity(self.dim);
        for e in v {
            let q = e * BigRational::from_integer(self.denom.clone());
            if !q.is_integer() {
                return false;
            }
            w.push(q.to_integer());
        }
        // Greedy reduction against the Hermite basis.
        let mut row = 0;
        for col in 0..self.dim {
            if row < self.basis.rows() && !self.basis[(row, col)].is_zero() {
                let (q, r) = w[col].div_mod_floor(&self.basis[(row, col)]);
                if !r.is_zero() {
                    return false;
                }
                if !q.is_zero() {
                    for c in col..self.dim {
                        w[c] -= &q * &self.basis[(row, c)];
                    }
                }
                row += 1;
            } else if !w[col].is_zero() {
                return false;
            }
        }
        w.iter().all(|x| x.is_zero())
    }

    /// Containment `other <= self`, with a witness generator on failure.
    pub fn contains_lattice(&self, other: &ZLattice) -> Result<bool, LatticeError> {
        self.check_dim(other)?;
        for row in other.q_basis_rows() {
            if !self.contains_vec(&row) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Verified containment, failing with the witness vector.
    pub fn require_contains(&self, other: &ZLattice) -> Result<(), LatticeError> {
        self.check_dim(other)?;
        for row in other.q_basis_rows() {
            if !self.contains_vec(&row) {
                return Err(LatticeError::NotSubset { witness: row });
            }
        }
        Ok(())
    }

    /// Index `[self : sub]` for a finite-index sublattice.
    pub fn index_of(&self, sub: &ZLattice) -> Result<BigInt, LatticeError> {
        Ok(self.quotient(sub)?.order())
    }

    /// Cyclic invariants `> 1` of `self / sub`.
    pub fn quotient_invariants(&self, sub: &ZLattice) -> Result<Vec<BigInt>, LatticeError> {
        Ok(self.quotient(sub)?.invariants)
    }

    /// Structure of the finite quotient `self / sub`.
    pub fn quotient(&self, sub: &ZLattice) -> Result<LatticeQuotient, LatticeError> {
        self.require_contains(sub)?;
        if self.rank() != sub.rank() {
            return Err(LatticeError::SpanMismatch);
        }
        let r = self.rank();
        // Coordinates of sub's basis in self's basis: x b1 = b2.
        let d = self.denom.lcm(&sub.denom);
        let b1 = self.int_rows_at(&d);
        let b2 = sub.int_rows_at(&d);
        let b1q = QMat::from_int(&b1.transpose());
        let mut xrows = Vec::new();
        for i in 0..b2.rows() {
            let rhs: Vec<BigRational> = b2
                .row(i)
                .iter()
                .map(|e| BigRational::from_integer(e.clone()))
                .collect();
            let sol = b1q.solve(&rhs).ok_or(LatticeError::SpanMismatch)?;
            let mut introw = Vec::with_capacity(r);
            for e in &sol {
                if !e.is_integer() {
                    return Err(LatticeError::SpanMismatch);
                }
                introw.push(e.to_integer());
            }
            xrows.push(introw);
        }
        let x = IntMat::from_rows(xrows);
        let s = snf(&x);
        let v_inv = QMat::from_int(&s.v)
            .inverse()
            .expect("unimodular matrix is invertible");
        let diag: Vec<BigInt> = (0..r).map(|i| s.s[(i, i)].abs()).collect();
        let invariants: Vec<BigInt> = diag.iter().filter(|d| **d > BigInt::one()).cloned().collect();
        Ok(LatticeQuotient {
            sup: self.clone(),
            v: s.v.clone(),
            v_inv,
            diag,
            invariants,
        })
    }

    /// Dual lattice `{ x : <b, x> in Z for all b in self }` of a full-rank
    /// lattice, with respect to the standard inner product.
    pub fn dual(&self) -> Result<ZLattice, LatticeError> {
        if self.rank() != self.dim {
            return Err(LatticeError::NotFullRank);
        }
        let bq = QMat::from_int(&self.basis).scale(&BigRational::new(
            BigInt::one(),
            self.denom.clone(),
        ));
        let inv = bq.inverse().ok_or(LatticeError::NotFullRank)?;
        // Condition B x in Z^r, so x ranges over the column span of B^{-1}.
        let rows: Vec<Vec<BigRational>> = (0..self.dim).map(|c| inv.col_vec(c)).collect();
        Ok(ZLattice::from_q_rows(&rows, self.dim))
    }

    /// Preimage lattice `{ x in Z^p : a x in self }` of an integer matrix
    /// `a : Z^p -> Q^dim`.
    pub fn preimage(&self, a: &IntMat) -> Result<ZLattice, LatticeError> {
        if a.rows() != self.dim {
            return Err(LatticeError::DimMismatch {
                left: a.rows(),
                right: self.dim,
            });
        }
        let p = a.cols();
        if self.is_zero() {
            // a x must be zero.
            return Ok(ZLattice::from_int_rows(&right_kernel(a), &BigInt::one()));
        }
        // a x in (1/D) rowspan(B)  <=>  D a x = B^T y for some integer y.
        let m = a.scale(&self.denom);
        let bt = self.basis.transpose().neg();
        let big = m.augment(&bt);
        let ker = right_kernel(&big);
        let rows: Vec<Vec<BigInt>> = (0..ker.rows())
            .map(|i| ker.row(i)[..p].to_vec())
            .collect();
        if rows.is_empty() {
            return Ok(ZLattice::zero(p));
        }
        Ok(ZLattice::from_int_rows(&IntMat::from_rows(rows), &BigInt::one()))
    }

    /// Saturation `(Q * self) ∩ (1/denom) Z^dim`, i.e. the smallest sublattice
    /// of `(1/denom) Z^dim` containing `self` with torsion-free quotient.
    pub fn saturate(&self) -> ZLattice {
        if self.is_zero() {
            return self.clone();
        }
        let orth = right_kernel(&self.basis);
        let sat_int = right_kernel(&orth);
        ZLattice::from_int_rows(&sat_int, &self.denom)
    }

    /// Scale the lattice by a positive rational.
    pub fn scale(&self, k: &BigRational) -> ZLattice {
        assert!(!k.is_zero());
        let num = k.numer().abs();
        let den = k.denom().abs();
        ZLattice::from_int_rows(&self.basis.scale(&num), &(&self.denom * den))
    }

    fn check_dim(&self, other: &ZLattice) -> Result<(), LatticeError> {
        if self.dim != other.dim {
            return Err(LatticeError::DimMismatch {
                left: self.dim,
                right: other.dim,
            });
        }
        Ok(())
    }
}

impl fmt::Debug for ZLattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "ZLattice(dim {}, rank {}, denom {}) {:?}",
            self.dim,
            self.rank(),
            self.denom,
            self.basis
        )
    }
}

/// Structure data for a finite quotient `sup / sub`: the coordinates of `sup`
/// are rotated by `v` so the quotient becomes `⊕ Z/diag[i]`.
#[derive(Clone, Debug)]
pub struct LatticeQuotient {
    sup: ZLattice,
    v: IntMat,
    v_inv: QMat<BigRational>,
    /// Smith diagonal, one entry per basis vector of `sup`.
    pub diag: Vec<BigInt>,
    /// The diagonal entries `> 1`.
    pub invariants: Vec<BigInt>,
}

impl LatticeQuotient {
    pub fn order(&self) -> BigInt {
        self.diag.iter().product()
    }

    pub fn is_trivial(&self) -> bool {
        self.invariants.is_empty()
    }

    /// Class of a vector of `sup` as residues along the Smith coordinates
    /// (one residue per invariant `> 1`).
    pub fn class_of(&self, v: &[BigRational]) -> Option<Vec<BigInt>> {
        // Coordinates of v in sup's basis.
        let bq = QMat::from_rows(self.sup.q_basis_rows()).transpose();
        let c = bq.solve(v)?;
        if c.iter().any(|e| !e.is_integer()) {
            return None;
        }
        let cint: Vec<BigInt> = c.iter().map(|e| e.to_integer()).collect();
        // Rotate: y = c V.
        let r = self.diag.len();
        let mut out = Vec::new();
        for j in 0..r {
            let mut acc = BigInt::zero();
            for i in 0..r {
                acc += &cint[i] * &self.v[(i, j)];
            }
            if self.diag[j] > BigInt::one() {
                out.push(acc.mod_floor(&self.diag[j]));
            }
        }
        Some(out)
    }

    /// A lattice vector representing the given residue tuple (one residue per
    /// invariant `> 1`).
    pub fn rep_of(&self, class: &[BigInt]) -> Vec<BigRational> {
        let r = self.diag.len();
        assert_eq!(class.len(), self.invariants.len());
        let mut y = vec![BigRational::from_integer(BigInt::zero()); r];
        let mut k = 0;
        for j in 0..r {
            if self.diag[j] > BigInt::one() {
                y[j] = BigRational::from_integer(class[k].clone());
                k += 1;
            }
        }
        // c = y V^{-1}, vector = c * basis.
        let c = self.v_inv.transpose().mul_vec(&y);
        let rows = self.sup.q_basis_rows();
        let dim = self.sup.dim();
        let mut out = vec![BigRational::from_integer(BigInt::zero()); dim];
        for (i, ci) in c.iter().enumerate() {
            for j in 0..dim {
                let t = ci * &rows[i][j];
                out[j] += t;
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn qv(v: &[i64]) -> Vec<BigRational> {
        v.iter()
            .map(|&x| BigRational::from_integer(BigInt::from(x)))
            .collect()
    }

    #[test]
    fn index_and_invariants() {
        let l1 = ZLattice::standard(2);
        let l2 = ZLattice::from_int_rows(&IntMat::from_i64(&[&[2, 0], &[0, 3]]), &BigInt::one());
        assert_eq!(l1.index_of(&l2).unwrap(), BigInt::from(6));
        assert_eq!(l1.quotient_invariants(&l2).unwrap(), vec![BigInt::from(6)]);
        assert_eq!(l1.index_of(&l1).unwrap(), BigInt::one());
        assert!(l1.quotient_invariants(&l1).unwrap().is_empty());
    }

    #[test]
    fn membership() {
        let l = ZLattice::from_int_rows(&IntMat::from_i64(&[&[2, 0], &[0, 2]]), &BigInt::one());
        assert!(!l.contains_vec(&qv(&[1, 1])));
        assert!(l.contains_vec(&qv(&[2, -4])));
    }

    #[test]
    fn sum_intersect_dual() {
        let a = ZLattice::from_int_rows(&IntMat::from_i64(&[&[2, 0], &[0, 1]]), &BigInt::one());
        let b = ZLattice::from_int_rows(&IntMat::from_i64(&[&[1, 0], &[0, 3]]), &BigInt::one());
        let s = a.sum(&b).unwrap();
        assert_eq!(s, ZLattice::standard(2));
        let i = a.intersect(&b).unwrap();
        assert_eq!(
            i,
            ZLattice::from_int_rows(&IntMat::from_i64(&[&[2, 0], &[0, 3]]), &BigInt::one())
        );
        let d = a.dual().unwrap();
        assert!(d.contains_vec(&[
            BigRational::new(BigInt::one(), BigInt::from(2)),
            BigRational::from_integer(BigInt::zero())
        ]));
        assert_eq!(d.index_of(&ZLattice::standard(2)).unwrap(), BigInt::from(2));
    }

    #[test]
    fn preimage_lattice() {
        // { x in Z^2 : diag(1,2) x in 2Z^2 } = 2Z x Z.
        let a = IntMat::from_i64(&[&[1, 0], &[0, 2]]);
        let l = ZLattice::from_int_rows(&IntMat::from_i64(&[&[2, 0], &[0, 2]]), &BigInt::one());
        let pre = l.preimage(&a).unwrap();
        assert_eq!(
            pre,
            ZLattice::from_int_rows(&IntMat::from_i64(&[&[2, 0], &[0, 1]]), &BigInt::one())
        );
    }

    #[test]
    fn saturation() {
        let l = ZLattice::from_int_rows(&IntMat::from_i64(&[&[2, 4]]), &BigInt::one());
        let s = l.saturate();
        assert_eq!(
            s,
            ZLattice::from_int_rows(&IntMat::from_i64(&[&[1, 2]]), &BigInt::one())
        );
    }

    #[test]
    fn quotient_classes_round_trip() {
        let l1 = ZLattice::standard(2);
        let l2 = ZLattice::from_int_rows(&IntMat::from_i64(&[&[2, 1], &[0, 4]]), &BigInt::one());
        let q = l1.quotient(&l2).unwrap();
        assert_eq!(q.order(), BigInt::from(8));
        let v = qv(&[1, 2]);
        let cls = q.class_of(&v).unwrap();
        let rep = q.rep_of(&cls);
        // v - rep must lie in l2.
        let diff: Vec<BigRational> = v.iter().zip(&rep).map(|(a, b)| a - b).collect();
        assert!(l2.contains_vec(&diff));
    }
}
