//! Property tests: normal forms are invariant under unimodular perturbation,
//! lattice indexes are multiplicative in chains, and field solves are exact.

use exact_linalg::{hnf, snf, IntMat, QMat, ZLattice};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use proptest::prelude::*;

/// A random unimodular matrix: a product of elementary row operations.
fn unimodular(n: usize, ops: &[(usize, usize, i64)], swaps: &[(usize, usize)]) -> IntMat {
    let mut u = IntMat::identity(n);
    for &(a, b, k) in ops {
        let (a, b) = (a % n, b % n);
        if a != b {
            u.add_row_multiple(a, b, &BigInt::from(k % 3));
        }
    }
    for &(a, b) in swaps {
        u.swap_rows(a % n, b % n);
    }
    u
}

fn mat_strategy(rows: usize, cols: usize) -> impl Strategy<Value = IntMat> {
    proptest::collection::vec(-6i64..=6, rows * cols).prop_map(move |v| {
        IntMat::from_fn(rows, cols, |r, c| BigInt::from(v[r * cols + c]))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn hnf_invariant_under_left_unimodular(
        m in mat_strategy(4, 5),
        ops in proptest::collection::vec((0usize..4, 0usize..4, -2i64..=2), 0..8),
        swaps in proptest::collection::vec((0usize..4, 0usize..4), 0..4),
    ) {
        let u = unimodular(4, &ops, &swaps);
        let h1 = hnf(&m).h;
        let h2 = hnf(&u.mul(&m)).h;
        // Same row span => identical canonical form on the nonzero rows.
        let r1 = hnf(&m).rank;
        let r2 = hnf(&u.mul(&m)).rank;
        prop_assert_eq!(r1, r2);
        for i in 0..r1 {
            prop_assert_eq!(h1.row_vec(i), h2.row_vec(i));
        }
    }

    #[test]
    fn snf_invariant_under_two_sided_unimodular(
        m in mat_strategy(3, 4),
        ops_l in proptest::collection::vec((0usize..3, 0usize..3, -2i64..=2), 0..6),
        ops_r in proptest::collection::vec((0usize..4, 0usize..4, -2i64..=2), 0..6),
    ) {
        let u = unimodular(3, &ops_l, &[]);
        let v = unimodular(4, &ops_r, &[]);
        let s1 = snf(&m);
        let s2 = snf(&u.mul(&m).mul(&v));
        prop_assert_eq!(s1.diagonal(), s2.diagonal());
    }

    #[test]
    fn index_multiplicative_in_chains(
        d1 in proptest::collection::vec(1i64..=4, 3),
        d2 in proptest::collection::vec(1i64..=4, 3),
        ops in proptest::collection::vec((0usize..3, 0usize..3, -2i64..=2), 0..6),
    ) {
        let u = unimodular(3, &ops, &[]);
        let l1 = ZLattice::standard(3);
        let m2 = u.mul(&IntMat::from_fn(3, 3, |r, c| {
            if r == c { BigInt::from(d1[r]) } else { BigInt::zero() }
        }));
        let l2 = ZLattice::from_int_rows(&m2, &BigInt::one());
        let m3_rows = IntMat::from_fn(3, 3, |r, c| {
            if r == c { BigInt::from(d2[r]) } else { BigInt::zero() }
        }).mul(&m2);
        let l3 = ZLattice::from_int_rows(&m3_rows, &BigInt::one());
        let i12 = l1.index_of(&l2).unwrap();
        let i23 = l2.index_of(&l3).unwrap();
        let i13 = l1.index_of(&l3).unwrap();
        prop_assert_eq!(i13, i12 * i23);
    }

    #[test]
    fn field_solve_exact(
        m in proptest::collection::vec(-5i64..=5, 9),
        b in proptest::collection::vec(-5i64..=5, 3),
    ) {
        let q = QMat::from_fn(3, 3, |r, c| BigRational::from_integer(BigInt::from(m[r * 3 + c])));
        let rhs: Vec<BigRational> = b.iter().map(|&x| BigRational::from_integer(BigInt::from(x))).collect();
        if let Some(x) = q.solve(&rhs) {
            prop_assert_eq!(q.mul_vec(&x), rhs);
        }
        for v in q.right_kernel() {
            prop_assert!(q.mul_vec(&v).iter().all(|e| e.is_zero()));
        }
    }
}
