//! Finite abelian groups in invariant-factor presentation.

use exact_linalg::{snf, IntMat, QMat};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::fmt;
use std::sync::Arc;

/// A finite abelian group `Z/n_1 x ... x Z/n_k` with `n_1 | n_2 | ... | n_k`,
/// each `n_i >= 2`; the empty list is the trivial group.
///
/// Elements are residue tuples `(r_1, ..., r_k)`; the element order is
/// mixed-radix lexicographic with the identity first, and every dense vector
/// in the workspace is indexed by it.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FiniteAbelianGroup {
    invariant_factors: Vec<u64>,
}

pub type GroupRef = Arc<FiniteAbelianGroup>;

impl FiniteAbelianGroup {
    pub fn new(invariant_factors: Vec<u64>) -> Result<GroupRef, String> {
        for w in invariant_factors.windows(2) {
            if w[1] % w[0] != 0 {
                return Err(format!(
                    "invariant factors must form a divisibility chain: {} does not divide {}",
                    w[0], w[1]
                ));
            }
        }
        if invariant_factors.iter().any(|&n| n < 2) {
            return Err("invariant factors must be >= 2".into());
        }
        Ok(Arc::new(FiniteAbelianGroup { invariant_factors }))
    }

    pub fn trivial() -> GroupRef {
        Arc::new(FiniteAbelianGroup {
            invariant_factors: vec![],
        })
    }

    pub fn cyclic(n: u64) -> GroupRef {
        assert!(n >= 1);
        if n == 1 {
            Self::trivial()
        } else {
            Self::new(vec![n]).unwrap()
        }
    }

    pub fn invariant_factors(&self) -> &[u64] {
        &self.invariant_factors
    }

    pub fn num_factors(&self) -> usize {
        self.invariant_factors.len()
    }

    pub fn order(&self) -> u64 {
        self.invariant_factors.iter().product()
    }

    /// The exponent: the largest invariant factor (1 for the trivial group).
    pub fn exponent(&self) -> u64 {
        self.invariant_factors.last().copied().unwrap_or(1)
    }

    /// Mixed-radix lexicographic index of an element tuple.
    pub fn index_of(&self, tuple: &[u64]) -> usize {
        assert_eq!(tuple.len(), self.invariant_factors.len());
        let mut idx = 0usize;
        for (r, n) in tuple.iter().zip(&self.invariant_factors) {
            debug_assert!(r < n);
            idx = idx * (*n as usize) + *r as usize;
        }
        idx
    }

    pub fn tuple_of(&self, mut idx: usize) -> Vec<u64> {
        let k = self.invariant_factors.len();
        let mut tuple = vec![0u64; k];
        for i in (0..k).rev() {
            let n = self.invariant_factors[i] as usize;
            tuple[i] = (idx % n) as u64;
            idx /= n;
        }
        debug_assert_eq!(idx, 0);
        tuple
    }

    pub fn identity(&self) -> usize {
        0
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        let ta = self.tuple_of(a);
        let tb = self.tuple_of(b);
        let t: Vec<u64> = ta
            .iter()
            .zip(&tb)
            .zip(&self.invariant_factors)
            .map(|((x, y), n)| (x + y) % n)
            .collect();
        self.index_of(&t)
    }

    pub fn inv(&self, a: usize) -> usize {
        let t: Vec<u64> = self
            .tuple_of(a)
            .iter()
            .zip(&self.invariant_factors)
            .map(|(x, n)| (n - x) % n)
            .collect();
        self.index_of(&t)
    }

    pub fn pow(&self, a: usize, e: u64) -> usize {
        let t: Vec<u64> = self
            .tuple_of(a)
            .iter()
            .zip(&self.invariant_factors)
            .map(|(x, n)| {
                let xe = (BigInt::from(*x) * BigInt::from(e)) % BigInt::from(*n);
                u64::try_from(xe).unwrap()
            })
            .collect();
        self.index_of(&t)
    }

    pub fn element_order(&self, a: usize) -> u64 {
        let mut e = 1u64;
        let mut cur = a;
        while cur != self.identity() {
            cur = self.mul(cur, a);
            e += 1;
        }
        e
    }

    /// Index of the i-th standard generator `(0, .., 1, .., 0)`.
    pub fn generator(&self, i: usize) -> usize {
        let mut t = vec![0u64; self.invariant_factors.len()];
        t[i] = 1;
        self.index_of(&t)
    }

    pub fn elements(&self) -> impl Iterator<Item = usize> {
        0..self.order() as usize
    }

    /// Subgroup generated by the given element indices.
    pub fn subgroup(&self, generators: &[usize]) -> Subgroup {
        let mut elems = vec![self.identity()];
        let mut frontier = vec![self.identity()];
        while let Some(x) = frontier.pop() {
            for &g in generators {
                let y = self.mul(x, g);
                if !elems.contains(&y) {
                    elems.push(y);
                    frontier.push(y);
                }
            }
        }
        elems.sort_unstable();
        Subgroup { elements: elems }
    }

    /// All subgroups, found as closures of generator subsets of size <= 2.
    /// Complete for groups whose subgroups are all 2-generated, which covers
    /// every group of order at most 8 handled here.
    pub fn all_subgroups(&self) -> Vec<Subgroup> {
        assert!(self.order() <= 16, "subgroup enumeration limited to small groups");
        let n = self.order() as usize;
        let mut seen: Vec<Subgroup> = Vec::new();
        for a in 0..n {
            for b in a..n {
                let s = self.subgroup(&[a, b]);
                if !seen.contains(&s) {
                    seen.push(s);
                }
            }
        }
        seen.sort_by_key(|s| s.elements.len());
        seen
    }
}

impl fmt::Debug for FiniteAbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.invariant_factors.is_empty() {
            write!(f, "1")
        } else {
            let parts: Vec<String> = self
                .invariant_factors
                .iter()
                .map(|n| format!("Z/{}", n))
                .collect();
            write!(f, "{}", parts.join(" x "))
        }
    }
}

/// A subgroup, stored as a sorted list of element indices.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Subgroup {
    elements: Vec<usize>,
}

impl Subgroup {
    pub fn elements(&self) -> &[usize] {
        &self.elements
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn is_trivial(&self) -> bool {
        self.elements.len() == 1
    }

    pub fn contains(&self, x: usize) -> bool {
        self.elements.binary_search(&x).is_ok()
    }

    /// Verify closure under the ambient group law.
    pub fn is_subgroup_of(&self, g: &FiniteAbelianGroup) -> bool {
        if !self.contains(g.identity()) {
            return false;
        }
        for &a in &self.elements {
            if !self.contains(g.inv(a)) {
                return false;
            }
            for &b in &self.elements {
                if !self.contains(g.mul(a, b)) {
                    return false;
                }
            }
        }
        true
    }

    /// Present this subgroup abstractly in invariant-factor form, together
    /// with the map sending each abstract element index to an ambient index.
    pub fn abstract_group(&self, g: &FiniteAbelianGroup) -> (GroupRef, Vec<usize>) {
        if self.is_trivial() {
            return (FiniteAbelianGroup::trivial(), vec![g.identity()]);
        }
        // Lattice presentation: the subgroup of Z^k generated by lifts of the
        // subgroup elements together with the relation lattice diag(n).
        let k = g.num_factors();
        let mut rows: Vec<Vec<BigInt>> = Vec::new();
        for &e in &self.elements {
            rows.push(g.tuple_of(e).iter().map(|&x| BigInt::from(x)).collect());
        }
        for i in 0..k {
            let mut row = vec![BigInt::zero(); k];
            row[i] = BigInt::from(g.invariant_factors[i]);
            rows.push(row);
        }
        let m = IntMat::from_rows(rows.clone());
        // Abstract structure: lifts / diag(n). Present via columns: express
        // diag(n) in a basis of the lift lattice.
        let lift = exact_linalg::ZLattice::from_int_rows(&m, &BigInt::one());
        let diag = exact_linalg::ZLattice::from_int_rows(
            &IntMat::from_fn(k, k, |r, c| {
                if r == c {
                    BigInt::from(g.invariant_factors[r])
                } else {
                    BigInt::zero()
                }
            }),
            &BigInt::one(),
        );
        let q = lift.quotient(&diag).expect("diag(n) is a finite-index sublattice");
        let invariants: Vec<u64> = q
            .invariants
            .iter()
            .map(|d| u64::try_from(d.clone()).unwrap())
            .collect();
        let abs = if invariants.is_empty() {
            FiniteAbelianGroup::trivial()
        } else {
            FiniteAbelianGroup::new(invariants).unwrap()
        };
        // Map abstract elements to ambient elements via quotient representatives.
        let mut map = Vec::with_capacity(abs.order() as usize);
        for idx in abs.elements() {
            let tuple = abs.tuple_of(idx);
            let class: Vec<BigInt> = tuple.iter().map(|&x| BigInt::from(x)).collect();
            let rep = q.rep_of(&class);
            let amb: Vec<u64> = rep
                .iter()
                .zip(g.invariant_factors())
                .map(|(x, n)| {
                    let xi = x.to_integer();
                    let m = xi.mod_floor(&BigInt::from(*n));
                    u64::try_from(m).unwrap()
                })
                .collect();
            map.push(g.index_of(&amb));
        }
        debug_assert_eq!(map.len(), self.order());
        (abs, map)
    }
}

use num_integer::Integer;

/// The quotient `G / J` in invariant-factor form, with the projection map on
/// element indices.
#[derive(Clone)]
pub struct QuotientGroup {
    pub group: GroupRef,
    /// `project[i]` is the quotient index of ambient element `i`.
    pub project: Vec<usize>,
}

pub fn quotient_group(g: &GroupRef, j: &Subgroup) -> QuotientGroup {
    let k = g.num_factors();
    if k == 0 {
        return QuotientGroup {
            group: FiniteAbelianGroup::trivial(),
            project: vec![0],
        };
    }
    // G/J = Z^k / L where L is generated by diag(n) and lifts of J.
    let mut rows: Vec<Vec<BigInt>> = Vec::new();
    for i in 0..k {
        let mut row = vec![BigInt::zero(); k];
        row[i] = BigInt::from(g.invariant_factors[i]);
        rows.push(row);
    }
    for &e in j.elements() {
        rows.push(g.tuple_of(e).iter().map(|&x| BigInt::from(x)).collect());
    }
    let m = IntMat::from_rows(rows);
    let s = snf(&m);
    // rowspan(M) = rowspan(S V^{-1}); in coordinates y = x V the relation
    // lattice becomes diagonal, so the quotient is ⊕ Z/d_i on the columns
    // with d_i > 1.
    let vq = QMat::from_int(&s.v);
    let mut diag: Vec<BigInt> = Vec::new();
    for i in 0..k {
        if i < s.s.rows() {
            diag.push(s.s[(i, i)].abs());
        } else {
            diag.push(BigInt::zero());
        }
    }
    assert!(
        diag.iter().all(|d| d.is_positive()),
        "quotient of a finite group must be finite"
    );
    let kept: Vec<usize> = (0..k).filter(|&i| diag[i] > BigInt::one()).collect();
    let inv: Vec<u64> = kept
        .iter()
        .map(|&i| u64::try_from(diag[i].clone()).unwrap())
        .collect();
    // SNF diagonal entries form a divisibility chain already.
    let q_group = if inv.is_empty() {
        FiniteAbelianGroup::trivial()
    } else {
        FiniteAbelianGroup::new(inv).unwrap()
    };
    let mut project = Vec::with_capacity(g.order() as usize);
    for e in g.elements() {
        let x: Vec<BigRational> = g
            .tuple_of(e)
            .iter()
            .map(|&v| BigRational::from_integer(BigInt::from(v)))
            .collect();
        let y = vq.transpose().mul_vec(&x);
        let tuple: Vec<u64> = kept
            .iter()
            .map(|&i| {
                let yi = y[i].to_integer();
                u64::try_from(yi.mod_floor(&diag[i])).unwrap()
            })
            .collect();
        project.push(q_group.index_of(&tuple));
    }
    QuotientGroup {
        group: q_group,
        project,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn indexing_round_trip() {
        let g = FiniteAbelianGroup::new(vec![2, 4]).unwrap();
        assert_eq!(g.order(), 8);
        assert_eq!(g.exponent(), 4);
        for i in g.elements() {
            assert_eq!(g.index_of(&g.tuple_of(i)), i);
        }
        // identity first
        assert_eq!(g.tuple_of(0), vec![0, 0]);
        // lexicographic: (0,0),(0,1),(0,2),(0,3),(1,0),...
        assert_eq!(g.tuple_of(1), vec![0, 1]);
        assert_eq!(g.tuple_of(4), vec![1, 0]);
    }

    #[test]
    fn group_law() {
        let g = FiniteAbelianGroup::cyclic(6);
        let a = 4usize;
        let b = 5usize;
        assert_eq!(g.mul(a, b), 3);
        assert_eq!(g.mul(a, g.inv(a)), 0);
        assert_eq!(g.element_order(2), 3);
    }

    #[test]
    fn trivial_group() {
        let g = FiniteAbelianGroup::trivial();
        assert_eq!(g.order(), 1);
        assert_eq!(g.exponent(), 1);
        assert_eq!(g.mul(0, 0), 0);
    }

    #[test]
    fn subgroups_of_klein() {
        let g = FiniteAbelianGroup::new(vec![2, 2]).unwrap();
        let subs = g.all_subgroups();
        assert_eq!(subs.len(), 5);
        assert_eq!(subs[0].order(), 1);
        assert_eq!(subs[4].order(), 4);
        for s in &subs {
            assert!(s.is_subgroup_of(&g));
        }
    }

    #[test]
    fn quotient_of_z4_by_z2() {
        let g = FiniteAbelianGroup::cyclic(4);
        let j = g.subgroup(&[2]); // {0, 2}
        assert_eq!(j.order(), 2);
        let q = quotient_group(&g, &j);
        assert_eq!(q.group.order(), 2);
        // projection is a homomorphism with kernel J
        for a in g.elements() {
            for b in g.elements() {
                assert_eq!(
                    q.project[g.mul(a, b)],
                    q.group.mul(q.project[a], q.project[b])
                );
            }
        }
        for &e in j.elements() {
            assert_eq!(q.project[e], 0);
        }
    }

    #[test]
    fn abstract_subgroup_structure() {
        let g = FiniteAbelianGroup::new(vec![2, 4]).unwrap();
        // subgroup generated by (0,2) and (1,0): Z/2 x Z/2
        let j = g.subgroup(&[g.index_of(&[0, 2]), g.index_of(&[1, 0])]);
        assert_eq!(j.order(), 4);
        let (abs, map) = j.abstract_group(&g);
        assert_eq!(abs.invariant_factors(), &[2, 2]);
        // map must be an injective homomorphism onto the subgroup
        let mut images: Vec<usize> = map.clone();
        images.sort_unstable();
        assert_eq!(images, j.elements());
        for a in abs.elements() {
            for b in abs.elements() {
                assert_eq!(map[abs.mul(a, b)], g.mul(map[a], map[b]));
            }
        }
    }
}
