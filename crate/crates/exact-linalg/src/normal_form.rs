//! Hermite and Smith normal forms with unimodular transforms.
//!
//! The Hermite form used throughout is the canonical *row* form: pivots are
//! positive, entries above a pivot are reduced into `[0, pivot)`, zero rows
//! are collected at the bottom. Two integer row spans are equal iff their
//! Hermite forms coincide, which is the equality test every lattice
//! computation in this workspace reduces to.

use crate::int_mat::IntMat;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

/// Result of a Hermite normal form computation: `h = u * m` with `u`
/// unimodular, `rank` the number of nonzero rows of `h`.
#[derive(Clone, Debug)]
pub struct HnfResult {
    pub h: IntMat,
    pub u: IntMat,
    pub rank: usize,
    /// Pivot column of each nonzero row of `h`.
    pub pivots: Vec<usize>,
}

/// Canonical row Hermite normal form.
pub fn hnf(m: &IntMat) -> HnfResult {
    let rows = m.rows();
    let cols = m.cols();
    let mut h = m.clone();
    let mut u = IntMat::identity(rows);
    let mut pivot_row = 0;
    let mut pivots = Vec::new();

    for col in 0..cols {
        if pivot_row == rows {
            break;
        }
        // Euclidean reduction down the column.
        loop {
            let mut best: Option<usize> = None;
            for r in pivot_row..rows {
                if !h[(r, col)].is_zero() {
                    let better = match best {
                        None => true,
                        Some(b) => h[(r, col)].abs() < h[(b, col)].abs(),
                    };
                    if better {
                        best = Some(r);
                    }
                }
            }
            let Some(b) = best else { break };
            h.swap_rows(pivot_row, b);
            u.swap_rows(pivot_row, b);
            let mut done = true;
            for r in pivot_row + 1..rows {
                if !h[(r, col)].is_zero() {
                    let q = div_round(&h[(r, col)], &h[(pivot_row, col)]);
                    h.add_row_multiple(r, pivot_row, &(-&q));
                    u.add_row_multiple(r, pivot_row, &(-&q));
                    if !h[(r, col)].is_zero() {
                        done = false;
                    }
                }
            }
            if done {
                break;
            }
        }
        if h[(pivot_row, col)].is_zero() {
            continue;
        }
        if h[(pivot_row, col)].is_negative() {
            h.negate_row(pivot_row);
            u.negate_row(pivot_row);
        }
        // Reduce the entries above the pivot into [0, pivot).
        for r in 0..pivot_row {
            let q = h[(r, col)].div_floor(&h[(pivot_row, col)]);
            if !q.is_zero() {
                h.add_row_multiple(r, pivot_row, &(-&q));
                u.add_row_multiple(r, pivot_row, &(-&q));
            }
        }
        pivots.push(col);
        pivot_row += 1;
    }

    HnfResult {
        h,
        u,
        rank: pivot_row,
        pivots,
    }
}

/// Division with rounding to nearest, which keeps Hermite intermediates
/// small. `div_mod_floor` leaves a remainder with the divisor's sign, so in
/// both sign cases the closer multiple is `q + 1` when `2|r| > |b|`.
fn div_round(a: &BigInt, b: &BigInt) -> BigInt {
    let (q, r) = a.div_mod_floor(b);
    if &(r.abs() * 2u8) > &b.abs() {
        q + 1
    } else {
        q
    }
}

/// Result of a Smith normal form computation: `s = u * m * v` with `u`, `v`
/// unimodular and `s` diagonal with `d_i | d_{i+1}`.
#[derive(Clone, Debug)]
pub struct SnfResult {
    pub s: IntMat,
    pub u: IntMat,
    pub v: IntMat,
}

impl SnfResult {
    /// The nonzero diagonal entries `d_1 | d_2 | ...`.
    pub fn diagonal(&self) -> Vec<BigInt> {
        let n = self.s.rows().min(self.s.cols());
        (0..n)
            .map(|i| self.s[(i, i)].clone())
            .filter(|d| !d.is_zero())
            .collect()
    }

    /// Diagonal entries larger than one: the cyclic invariants of the cokernel
    /// torsion.
    pub fn invariants(&self) -> Vec<BigInt> {
        self.diagonal()
            .into_iter()
            .filter(|d| d.abs() > BigInt::from(1u8))
            .map(|d| d.abs())
            .collect()
    }

    pub fn rank(&self) -> usize {
        self.diagonal().len()
    }
}

/// Smith normal form with transforms.
pub fn snf(m: &IntMat) -> SnfResult {
    let rows = m.rows();
    let cols = m.cols();
    let mut s = m.clone();
    let mut u = IntMat::identity(rows);
    let mut v = IntMat::identity(cols);
    let n = rows.min(cols);

    for k in 0..n {
        // Find the smallest nonzero entry in the trailing block and bring it
        // to (k, k).
        loop {
            let mut best: Option<(usize, usize)> = None;
            for r in k..rows {
                for c in k..cols {
                    if !s[(r, c)].is_zero() {
                        let better = match best {
                            None => true,
                            Some((br, bc)) => s[(r, c)].abs() < s[(br, bc)].abs(),
                        };
                        if better {
                            best = Some((r, c));
                        }
                    }
                }
            }
            let Some((br, bc)) = best else {
                return SnfResult { s, u, v };
            };
            s.swap_rows(k, br);
            u.swap_rows(k, br);
            s.swap_cols(k, bc);
            v.swap_cols(k, bc);

            let mut clean = true;
            for r in k + 1..rows {
                if !s[(r, k)].is_zero() {
                    let q = div_round(&s[(r, k)], &s[(k, k)]);
                    s.add_row_multiple(r, k, &(-&q));
                    u.add_row_multiple(r, k, &(-&q));
                    if !s[(r, k)].is_zero() {
                        clean = false;
                    }
                }
            }
            for c in k + 1..cols {
                if !s[(k, c)].is_zero() {
                    let q = div_round(&s[(k, c)], &s[(k, k)]);
                    s.add_col_multiple(c, k, &(-&q));
                    v.add_col_multiple(c, k, &(-&q));
                    if !s[(k, c)].is_zero() {
                        clean = false;
                    }
                }
            }
            if !clean {
                continue;
            }
            // Divisibility fix-up: fold any entry not divisible by the pivot
            // into column k and restart the elimination at this pivot.
            let mut fixed = true;
            'outer: for r in k + 1..rows {
                for c in k + 1..cols {
                    if !(&s[(r, c)] % &s[(k, k)]).is_zero() {
                        s.add_col_multiple(k, c, &BigInt::from(1u8));
                        v.add_col_multiple(k, c, &BigInt::from(1u8));
                        fixed = false;
                        break 'outer;
                    }
                }
            }
            if fixed {
                break;
            }
        }
        if s[(k, k)].is_negative() {
            s.negate_row(k);
            u.negate_row(k);
        }
    }
    SnfResult { s, u, v }
}

/// Basis of the left kernel `{ x : x^T m = 0 }`, returned as the rows of a
/// matrix. The basis spans a saturated sublattice of `Z^rows`.
pub fn left_kernel(m: &IntMat) -> IntMat {
    let r = hnf(m);
    let rows: Vec<Vec<BigInt>> = (r.rank..m.rows()).map(|i| r.u.row_vec(i)).collect();
    if rows.is_empty() {
        IntMat::zeros(0, m.rows())
    } else {
        IntMat::from_rows(rows)
    }
}

/// Basis of the right kernel `{ x : m x = 0 }`, returned as the rows of a
/// matrix (each row is one kernel vector).
pub fn right_kernel(m: &IntMat) -> IntMat {
    left_kernel(&m.transpose())
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;

    fn check_hnf(m: &IntMat) {
        let r = hnf(m);
        assert!(r.u.is_unimodular());
        assert_eq!(r.u.mul(m), r.h);
        // pivot normalization
        for (i, &p) in r.pivots.iter().enumerate() {
            assert!(r.h[(i, p)].is_positive());
            for j in 0..i {
                assert!(r.h[(j, p)] >= BigInt::zero() && r.h[(j, p)] < r.h[(i, p)]);
            }
        }
    }

    #[test]
    fn hnf_identity_fixed() {
        let m = IntMat::identity(3);
        let r = hnf(&m);
        assert_eq!(r.h, m);
        assert_eq!(r.u, m);
        assert_eq!(r.rank, 3);
    }

    #[test]
    fn hnf_examples() {
        check_hnf(&IntMat::from_i64(&[&[2, 3, 6], &[4, 4, 4], &[6, 8, 4]]));
        check_hnf(&IntMat::from_i64(&[&[0, 0], &[0, 0]]));
        check_hnf(&IntMat::from_i64(&[&[0, 5], &[10, 3], &[2, 2]]));
    }

    #[test]
    fn snf_diag_2_3() {
        let r = snf(&IntMat::from_i64(&[&[2, 0], &[0, 3]]));
        assert!(r.u.is_unimodular());
        assert!(r.v.is_unimodular());
        assert_eq!(r.u.mul(&IntMat::from_i64(&[&[2, 0], &[0, 3]])).mul(&r.v), r.s);
        assert_eq!(r.diagonal(), vec![BigInt::one(), BigInt::from(6)]);
        assert_eq!(r.invariants(), vec![BigInt::from(6)]);
    }

    #[test]
    fn snf_zero_matrix() {
        let z = IntMat::zeros(2, 3);
        let r = snf(&z);
        assert!(r.s.is_zero());
        assert_eq!(r.rank(), 0);
    }

    #[test]
    fn snf_divisibility_chain() {
        let m = IntMat::from_i64(&[&[4, 6, 0], &[6, 4, 2], &[0, 2, 8]]);
        let r = snf(&m);
        assert_eq!(r.u.mul(&m).mul(&r.v), r.s);
        let d = r.diagonal();
        for w in d.windows(2) {
            assert!((&w[1] % &w[0]).is_zero(), "divisibility broken: {:?}", d);
        }
    }

    #[test]
    fn kernels() {
        let m = IntMat::from_i64(&[&[1, 2, 3], &[2, 4, 6]]);
        let k = right_kernel(&m);
        assert_eq!(k.rows(), 2);
        for i in 0..k.rows() {
            let v = k.row_vec(i);
            assert!(m.mul_vec(&v).iter().all(|x| x.is_zero()));
        }
        let lk = left_kernel(&m);
        assert_eq!(lk.rows(), 1);
        let x = lk.row_vec(0);
        for c in 0..3 {
            let mut acc = BigInt::zero();
            for r in 0..2 {
                acc += &x[r] * &m[(r, c)];
            }
            assert!(acc.is_zero());
        }
    }
}
