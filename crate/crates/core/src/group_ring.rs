//! Exact arithmetic in `Z[G]`, `Q[G]` and `Q(zeta_e)[G]` for finite abelian
//! `G`, together with characters, idempotents and the character-coordinate
//! integrality criterion.

use crate::cyclotomic::CycScalar;
use crate::group::{FiniteAbelianGroup, GroupRef};
use exact_linalg::{Field, IntMat, QMat};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::fmt;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RingError {
    GroupMismatch,
    RankMapNotGaloisStable { orbit_witness: (usize, usize) },
}

impl fmt::Display for RingError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RingError::GroupMismatch => write!(f, "elements belong to different groups"),
            RingError::RankMapNotGaloisStable { orbit_witness: (a, b) } => write!(
                f,
                "rank map differs on Galois-conjugate characters {} and {}",
                a, b
            ),
        }
    }
}

impl std::error::Error for RingError {}

/// An element of `F[G]`, stored as a dense coefficient vector in the group's
/// element order.
#[derive(Clone, PartialEq)]
pub struct GrElt<F: Field> {
    pub group: GroupRef,
    pub coeffs: Vec<F>,
}

pub type QGrElt = GrElt<BigRational>;
pub type CycGrElt = GrElt<CycScalar>;

impl<F: Field> GrElt<F> {
    pub fn zero(group: &GroupRef) -> Self {
        GrElt {
            group: group.clone(),
            coeffs: vec![F::zero(); group.order() as usize],
        }
    }

    pub fn one(group: &GroupRef) -> Self {
        Self::of_element(group, group.identity())
    }

    /// The basis element `g`.
    pub fn of_element(group: &GroupRef, g: usize) -> Self {
        let mut e = Self::zero(group);
        e.coeffs[g] = F::one();
        e
    }

    pub fn from_coeffs(group: &GroupRef, coeffs: Vec<F>) -> Self {
        assert_eq!(coeffs.len(), group.order() as usize);
        GrElt {
            group: group.clone(),
            coeffs,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn check_group(&self, other: &Self) -> Result<(), RingError> {
        if self.group == other.group {
            Ok(())
        } else {
            Err(RingError::GroupMismatch)
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        self.check_group(other).expect("group mismatch");
        GrElt {
            group: self.group.clone(),
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a.add_ref(b))
                .collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.check_group(other).expect("group mismatch");
        GrElt {
            group: self.group.clone(),
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a.sub_ref(b))
                .collect(),
        }
    }

    pub fn neg(&self) -> Self {
        GrElt {
            group: self.group.clone(),
            coeffs: self.coeffs.iter().map(|a| a.neg_ref()).collect(),
        }
    }

    /// Convolution product.
    pub fn mul(&self, other: &Self) -> Self {
        self.check_group(other).expect("group mismatch");
        let g = &self.group;
        let mut out = Self::zero(g);
        for (a, ca) in self.coeffs.iter().enumerate() {
            if ca.is_zero() {
                continue;
            }
            for (b, cb) in other.coeffs.iter().enumerate() {
                if !cb.is_zero() {
                    let idx = g.mul(a, b);
                    out.coeffs[idx] = out.coeffs[idx].add_ref(&ca.mul_ref(cb));
                }
            }
        }
        out
    }

    pub fn scale(&self, k: &F) -> Self {
        GrElt {
            group: self.group.clone(),
            coeffs: self.coeffs.iter().map(|c| c.mul_ref(k)).collect(),
        }
    }

    /// The involution `#`: `g -> g^{-1}` on the group-element coordinates.
    pub fn involution(&self) -> Self {
        let g = &self.group;
        let mut out = Self::zero(g);
        for (a, c) in self.coeffs.iter().enumerate() {
            out.coeffs[g.inv(a)] = c.clone();
        }
        out
    }

    /// Augmentation: the coefficient sum.
    pub fn augmentation(&self) -> F {
        let mut acc = F::zero();
        for c in &self.coeffs {
            acc = acc.add_ref(c);
        }
        acc
    }

    /// Left-translate coefficients by the group element `g`.
    pub fn translate(&self, g: usize) -> Self {
        self.mul(&Self::of_element(&self.group, g))
    }

    pub fn map<G2: Field>(&self, f: impl Fn(&F) -> G2) -> GrElt<G2> {
        GrElt {
            group: self.group.clone(),
            coeffs: self.coeffs.iter().map(|c| f(c)).collect(),
        }
    }
}

impl QGrElt {
    pub fn from_int_coeffs(group: &GroupRef, coeffs: Vec<i64>) -> Self {
        assert_eq!(coeffs.len(), group.order() as usize);
        GrElt {
            group: group.clone(),
            coeffs: coeffs
                .into_iter()
                .map(|c| BigRational::from_integer(BigInt::from(c)))
                .collect(),
        }
    }

    /// True if all coefficients are integers, i.e. the element is in `Z[G]`.
    pub fn is_integral(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_integer())
    }

    /// Least common denominator of the coefficients.
    pub fn denominator(&self) -> BigInt {
        let mut d = BigInt::one();
        for c in &self.coeffs {
            d = d.lcm(c.denom());
        }
        d
    }

    pub fn to_cyc(&self) -> CycGrElt {
        self.map(|c| CycScalar::from_rational(c.clone()))
    }

    /// The regular-representation matrix: column `h` holds the coefficients
    /// of `x * h`.
    pub fn regular_rep(&self) -> QMat<BigRational> {
        let g = &self.group;
        let n = g.order() as usize;
        let mut m = QMat::zeros(n, n);
        for h in 0..n {
            for (a, c) in self.coeffs.iter().enumerate() {
                if !c.is_zero() {
                    m[(g.mul(a, h), h)] = c.clone();
                }
            }
        }
        m
    }

    /// Regular representation of an integral element over `Z`.
    pub fn regular_rep_int(&self) -> IntMat {
        assert!(self.is_integral());
        let g = &self.group;
        let n = g.order() as usize;
        let mut m = IntMat::zeros(n, n);
        for h in 0..n {
            for (a, c) in self.coeffs.iter().enumerate() {
                if !c.is_zero() {
                    m[(g.mul(a, h), h)] = c.to_integer();
                }
            }
        }
        m
    }

    /// True if this is a unit of `Z[G]`.
    pub fn is_unit(&self) -> bool {
        self.is_integral() && self.regular_rep_int().det().abs().is_one()
    }

    /// Inverse in `Q[G]`, if the element is invertible there.
    pub fn inverse(&self) -> Option<QGrElt> {
        let m = self.regular_rep();
        let inv = m.inverse()?;
        Some(GrElt {
            group: self.group.clone(),
            coeffs: inv.col_vec(self.group.identity()),
        })
    }
}

impl CycGrElt {
    pub fn is_rational(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_rational())
    }

    pub fn to_rational(&self) -> Option<QGrElt> {
        let mut out = Vec::with_capacity(self.coeffs.len());
        for c in &self.coeffs {
            out.push(c.as_rational()?);
        }
        Some(GrElt {
            group: self.group.clone(),
            coeffs: out,
        })
    }

    /// Inverse in `Q(zeta)[G]` via character coordinates.
    pub fn inverse(&self) -> Option<CycGrElt> {
        let coords = char_coords(self);
        if coords.iter().any(|c| c.is_zero()) {
            return None;
        }
        let inv: Vec<CycScalar> = coords.iter().map(|c| c.inv()).collect();
        Some(from_char_coords(&self.group, &inv))
    }
}

impl<F: Field> fmt::Debug for GrElt<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "{:?}*[{:?}]", c, self.group.tuple_of(i))?;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// A character of `G`, i.e. a homomorphism `G -> Q(zeta_e)^x`, stored by its
/// exponents on the standard generators.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Character {
    pub group: GroupRef,
    /// `exps[i]` in `Z/n_i`: the i-th generator maps to `zeta_{n_i}^{exps[i]}`.
    pub exps: Vec<u64>,
}

impl Character {
    /// The characters of `G`, indexed exactly like the group elements.
    pub fn all(group: &GroupRef) -> Vec<Character> {
        group
            .elements()
            .map(|i| Character {
                group: group.clone(),
                exps: group.tuple_of(i),
            })
            .collect()
    }

    pub fn index(&self) -> usize {
        self.group.index_of(&self.exps)
    }

    pub fn is_trivial(&self) -> bool {
        self.exps.iter().all(|&e| e == 0)
    }

    /// `chi(g)` as an exact root of unity of conductor `exponent(G)`.
    pub fn eval(&self, g: usize) -> CycScalar {
        let e = self.group.exponent();
        if e == 1 {
            return CycScalar::one();
        }
        let tuple = self.group.tuple_of(g);
        let mut total = 0u64;
        for ((r, c), n) in tuple.iter().zip(&self.exps).zip(self.group.invariant_factors()) {
            total = (total + (r * c) % n * (e / n)) % e;
        }
        CycScalar::root_of_unity(e, total)
    }

    /// Apply the induced ring map `Q(zeta)[G] -> Q(zeta)`.
    pub fn apply(&self, x: &CycGrElt) -> CycScalar {
        let mut acc = CycScalar::zero_in(1);
        for (g, c) in x.coeffs.iter().enumerate() {
            if !c.is_zero() {
                acc = acc.add_ref(&c.mul_ref(&self.eval(g)));
            }
        }
        acc
    }

    pub fn apply_q(&self, x: &QGrElt) -> CycScalar {
        self.apply(&x.to_cyc())
    }

    /// The character `chi^k` (pointwise k-th power).
    pub fn power(&self, k: u64) -> Character {
        Character {
            group: self.group.clone(),
            exps: self
                .exps
                .iter()
                .zip(self.group.invariant_factors())
                .map(|(c, n)| (c * (k % n)) % n)
                .collect(),
        }
    }

    /// Index of `chi^{-1}`.
    pub fn inverse_index(&self) -> usize {
        self.group.inv(self.index())
    }

    /// The primitive idempotent `e_chi = |G|^{-1} sum chi(g^{-1}) g`.
    pub fn idempotent(&self) -> CycGrElt {
        let g = &self.group;
        let n = g.order();
        let inv_n = CycScalar::from_rational(BigRational::new(BigInt::one(), BigInt::from(n)));
        let coeffs: Vec<CycScalar> = g
            .elements()
            .map(|x| self.eval(g.inv(x)).mul_ref(&inv_n))
            .collect();
        GrElt {
            group: g.clone(),
            coeffs,
        }
    }
}

/// Galois orbits of the characters under `zeta -> zeta^a`, `gcd(a, e) = 1`.
pub fn galois_orbits(group: &GroupRef) -> Vec<Vec<usize>> {
    let e = group.exponent();
    let chars = Character::all(group);
    let units: Vec<u64> = (1..=e)
        .filter(|a| BigInt::from(*a).gcd(&BigInt::from(e)).is_one())
        .collect();
    let mut seen = vec![false; chars.len()];
    let mut orbits = Vec::new();
    for i in 0..chars.len() {
        if seen[i] {
            continue;
        }
        let mut orbit = Vec::new();
        for &a in &units {
            let j = chars[i].power(a).index();
            if !seen[j] {
                seen[j] = true;
                orbit.push(j);
            }
        }
        orbit.sort_unstable();
        orbits.push(orbit);
    }
    orbits
}

/// `x_rho = rho(x)` for every character, in character index order.
pub fn char_coords(x: &CycGrElt) -> Vec<CycScalar> {
    Character::all(&x.group).iter().map(|c| c.apply(x)).collect()
}

/// Inverse character transform:
/// `x = |G|^{-1} sum_g g sum_rho rho(g^{-1}) x_rho`.
pub fn from_char_coords(group: &GroupRef, coords: &[CycScalar]) -> CycGrElt {
    let n = group.order() as usize;
    assert_eq!(coords.len(), n);
    let chars = Character::all(group);
    let inv_n = CycScalar::from_rational(BigRational::new(BigInt::one(), BigInt::from(n as u64)));
    let mut coeffs = Vec::with_capacity(n);
    for g in group.elements() {
        let ginv = group.inv(g);
        let mut acc = CycScalar::zero_in(1);
        for (chi, xr) in chars.iter().zip(coords) {
            if !xr.is_zero() {
                acc = acc.add_ref(&chi.eval(ginv).mul_ref(xr));
            }
        }
        coeffs.push(acc.mul_ref(&inv_n));
    }
    GrElt {
        group: group.clone(),
        coeffs,
    }
}

/// The three-condition integrality test on character coordinates: an `x` with
/// `x_rho = coords[rho]` lies in `Z[G]` iff every coordinate is an algebraic
/// integer, the family is Galois-equivariant, and for every `g` the sum
/// `sum_rho rho(g^{-1}) x_rho` vanishes mod `|G|`.
pub fn integrality_test(group: &GroupRef, coords: &[CycScalar]) -> bool {
    let n = group.order();
    let e = group.exponent();
    let chars = Character::all(group);
    // (1) integrality of each coordinate
    if !coords.iter().all(|c| c.is_integral()) {
        return false;
    }
    // (2) Galois equivariance: sigma_a(x_rho) = x_{rho^a}
    for a in 1..=e {
        if !BigInt::from(a).gcd(&BigInt::from(e)).is_one() {
            continue;
        }
        for (i, chi) in chars.iter().enumerate() {
            let j = chi.power(a).index();
            if coords[i].galois(a) != coords[j] {
                return false;
            }
        }
    }
    // (3) congruence: sum_rho rho(g^{-1}) x_rho = 0 mod |G|
    for g in group.elements() {
        let ginv = group.inv(g);
        let mut acc = CycScalar::zero_in(1);
        for (chi, xr) in chars.iter().zip(coords) {
            acc = acc.add_ref(&chi.eval(ginv).mul_ref(xr));
        }
        let Some(q) = acc.as_rational() else {
            return false;
        };
        if !q.is_integer() || !(q.to_integer() % BigInt::from(n)).is_zero() {
            return false;
        }
    }
    true
}

/// Rank-class idempotents: `e_a` sums the primitive idempotents of characters
/// with `rank[chi] = a` and `e_(a)` those with `rank[chi] >= a`; both are
/// rational when the rank map is constant on Galois orbits.
/// `min_denominator` is the least `N > 0` with `N * e_(a)` integral.
pub struct RankIdempotents {
    pub e_eq: QGrElt,
    pub e_ge: QGrElt,
    pub min_denominator: BigInt,
}

pub fn idempotent_from_rank_classes(
    group: &GroupRef,
    rank_by_character: &[usize],
    a: usize,
) -> Result<RankIdempotents, RingError> {
    assert_eq!(rank_by_character.len(), group.order() as usize);
    for orbit in galois_orbits(group) {
        let r0 = rank_by_character[orbit[0]];
        for &j in &orbit {
            if rank_by_character[j] != r0 {
                return Err(RingError::RankMapNotGaloisStable {
                    orbit_witness: (orbit[0], j),
                });
            }
        }
    }
    let chars = Character::all(group);
    let mut e_eq = CycGrElt::zero(group);
    let mut e_ge = CycGrElt::zero(group);
    for (i, chi) in chars.iter().enumerate() {
        if rank_by_character[i] == a {
            e_eq = e_eq.add(&chi.idempotent());
        }
        if rank_by_character[i] >= a {
            e_ge = e_ge.add(&chi.idempotent());
        }
    }
    let e_eq = e_eq.to_rational().expect("orbit sums are rational");
    let e_ge = e_ge.to_rational().expect("orbit sums are rational");
    let min_denominator = e_ge.denominator();
    Ok(RankIdempotents {
        e_eq,
        e_ge,
        min_denominator,
    })
}

/// Matrices over the group algebra `F[G]`.
#[derive(Clone, PartialEq)]
pub struct GrMat<F: Field> {
    pub group: GroupRef,
    rows: usize,
    cols: usize,
    entries: Vec<GrElt<F>>,
}

pub type QGrMat = GrMat<BigRational>;

impl<F: Field> GrMat<F> {
    pub fn zeros(group: &GroupRef, rows: usize, cols: usize) -> Self {
        GrMat {
            group: group.clone(),
            rows,
            cols,
            entries: vec![GrElt::zero(group); rows * cols],
        }
    }

    pub fn identity(group: &GroupRef, n: usize) -> Self {
        let mut m = Self::zeros(group, n, n);
        for i in 0..n {
            m[(i, i)] = GrElt::one(group);
        }
        m
    }

    pub fn from_fn(
        group: &GroupRef,
        rows: usize,
        cols: usize,
        f: impl Fn(usize, usize) -> GrElt<F>,
    ) -> Self {
        let mut entries = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                let e = f(r, c);
                assert!(e.group == *group);
                entries.push(e);
            }
        }
        GrMat {
            group: group.clone(),
            rows,
            cols,
            entries,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn transpose(&self) -> Self {
        GrMat::from_fn(&self.group, self.cols, self.rows, |r, c| self[(c, r)].clone())
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows);
        assert!(self.group == other.group);
        GrMat::from_fn(&self.group, self.rows, other.cols, |i, j| {
            let mut acc = GrElt::zero(&self.group);
            for k in 0..self.cols {
                if !self[(i, k)].is_zero() && !other[(k, j)].is_zero() {
                    acc = acc.add(&self[(i, k)].mul(&other[(k, j)]));
                }
            }
            acc
        })
    }

    pub fn augment(&self, other: &Self) -> Self {
        assert_eq!(self.rows, other.rows);
        GrMat::from_fn(&self.group, self.rows, self.cols + other.cols, |r, c| {
            if c < self.cols {
                self[(r, c)].clone()
            } else {
                other[(r, c - self.cols)].clone()
            }
        })
    }

    pub fn submatrix(&self, row_ids: &[usize], col_ids: &[usize]) -> Self {
        GrMat::from_fn(&self.group, row_ids.len(), col_ids.len(), |r, c| {
            self[(row_ids[r], col_ids[c])].clone()
        })
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|e| e.is_zero())
    }

    /// Determinant over the (commutative) group algebra, by Laplace expansion
    /// with memoization on column subsets.
    pub fn det(&self) -> GrElt<F> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        assert!(n <= 20, "group-ring determinant limited to small matrices");
        if n == 0 {
            return GrElt::one(&self.group);
        }
        let mut memo: std::collections::HashMap<u32, GrElt<F>> = std::collections::HashMap::new();
        self.det_rec((1u32 << n) - 1, &mut memo)
    }

    fn det_rec(&self, colmask: u32, memo: &mut std::collections::HashMap<u32, GrElt<F>>) -> GrElt<F> {
        if colmask == 0 {
            return GrElt::one(&self.group);
        }
        if let Some(v) = memo.get(&colmask) {
            return v.clone();
        }
        let size = colmask.count_ones() as usize;
        let row = self.rows - size;
        let mut acc = GrElt::zero(&self.group);
        let mut pos = 0;
        for j in 0..self.cols {
            if colmask & (1 << j) == 0 {
                continue;
            }
            let entry = &self[(row, j)];
            if !entry.is_zero() {
                let sub = self.det_rec(colmask & !(1u32 << j), memo);
                let term = entry.mul(&sub);
                if pos % 2 == 0 {
                    acc = acc.add(&term);
                } else {
                    acc = acc.sub(&term);
                }
            }
            pos += 1;
        }
        memo.insert(colmask, acc.clone());
        acc
    }

    pub fn map_entries<G2: Field>(&self, f: impl Fn(&GrElt<F>) -> GrElt<G2>) -> GrMat<G2> {
        GrMat {
            group: self.group.clone(),
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(f).collect(),
        }
    }
}

impl QGrMat {
    pub fn from_int_entries(group: &GroupRef, rows: usize, cols: usize, data: Vec<Vec<Vec<i64>>>) -> Self {
        assert_eq!(data.len(), rows);
        GrMat::from_fn(group, rows, cols, |r, c| {
            QGrElt::from_int_coeffs(group, data[r][c].clone())
        })
    }

    pub fn is_integral(&self) -> bool {
        self.entries.iter().all(|e| e.is_integral())
    }

    /// Restriction of scalars: the `(rows*|G|) x (cols*|G|)` integer matrix
    /// acting on stacked coefficient vectors. Entries must be integral.
    pub fn restrict_scalars(&self) -> IntMat {
        assert!(self.is_integral());
        let n = self.group.order() as usize;
        let mut big = IntMat::zeros(self.rows * n, self.cols * n);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let block = self[(i, j)].regular_rep_int();
                for r in 0..n {
                    for c in 0..n {
                        if !block[(r, c)].is_zero() {
                            big[(i * n + r, j * n + c)] = block[(r, c)].clone();
                        }
                    }
                }
            }
        }
        big
    }

    /// Rational restriction of scalars.
    pub fn restrict_scalars_q(&self) -> QMat<BigRational> {
        let n = self.group.order() as usize;
        let mut big = QMat::zeros(self.rows * n, self.cols * n);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let block = self[(i, j)].regular_rep();
                for r in 0..n {
                    for c in 0..n {
                        if !block[(r, c)].is_zero() {
                            big[(i * n + r, j * n + c)] = block[(r, c)].clone();
                        }
                    }
                }
            }
        }
        big
    }

    /// Apply a character entrywise.
    pub fn apply_character(&self, chi: &Character) -> QMat<CycScalar> {
        QMat::from_fn(self.rows, self.cols, |r, c| chi.apply_q(&self[(r, c)]))
    }

    /// Inverse over `Q[G]`, read back from the big rational inverse.
    pub fn inverse(&self) -> Option<QGrMat> {
        let big = self.restrict_scalars_q();
        let inv = big.inverse()?;
        let n = self.group.order() as usize;
        Some(GrMat::from_fn(&self.group, self.cols, self.rows, |i, j| {
            // identity column of block (i, j)
            let col = j * n + self.group.identity();
            let coeffs: Vec<BigRational> = (0..n).map(|r| inv[(i * n + r, col)].clone()).collect();
            GrElt::from_coeffs(&self.group, coeffs)
        }))
    }

    /// True if this is an invertible matrix over `Z[G]`.
    pub fn is_unimodular(&self) -> bool {
        self.is_integral() && self.det().is_unit()
    }

    /// Stacked coefficient vector of a `Q[G]^rows` column: entry block `i`
    /// holds the coefficients of coordinate `i`.
    pub fn column_as_vec(col: &[QGrElt]) -> Vec<BigRational> {
        let mut out = Vec::new();
        for e in col {
            out.extend(e.coeffs.iter().cloned());
        }
        out
    }

    /// Inverse of `column_as_vec`.
    pub fn vec_as_column(group: &GroupRef, v: &[BigRational]) -> Vec<QGrElt> {
        let n = group.order() as usize;
        assert_eq!(v.len() % n, 0);
        v.chunks(n)
            .map(|c| GrElt::from_coeffs(group, c.to_vec()))
            .collect()
    }
}

impl<F: Field> std::ops::Index<(usize, usize)> for GrMat<F> {
    type Output = GrElt<F>;
    fn index(&self, (r, c): (usize, usize)) -> &GrElt<F> {
        &self.entries[r * self.cols + c]
    }
}

impl<F: Field> std::ops::IndexMut<(usize, usize)> for GrMat<F> {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut GrElt<F> {
        &mut self.entries[r * self.cols + c]
    }
}

impl<F: Field> fmt::Debug for GrMat<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "GrMat {}x{} over {:?} [", self.rows, self.cols, self.group)?;
        for r in 0..self.rows {
            write!(f, "  [")?;
            for c in 0..self.cols {
                if c > 0 {
                    write!(f, "; ")?;
                }
                write!(f, "{:?}", self[(r, c)])?;
            }
            writeln!(f, "]")?;
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z2() -> GroupRef {
        FiniteAbelianGroup::cyclic(2)
    }

    fn z3() -> GroupRef {
        FiniteAbelianGroup::cyclic(3)
    }

    #[test]
    fn ring_ops_z2() {
        let g = z2();
        // (1+g)(1-g) = 0
        let a = QGrElt::from_int_coeffs(&g, vec![1, 1]);
        let b = QGrElt::from_int_coeffs(&g, vec![1, -1]);
        assert!(a.mul(&b).is_zero());
        // (2+3g)# = 2+3g
        let c = QGrElt::from_int_coeffs(&g, vec![2, 3]);
        assert_eq!(c.involution(), c);
    }

    #[test]
    fn augmentation_z3() {
        let g = z3();
        let x = QGrElt::from_int_coeffs(&g, vec![1, 2, 3]);
        assert_eq!(x.augmentation(), BigRational::from_integer(BigInt::from(6)));
    }

    #[test]
    fn char_coords_z2() {
        let g = z2();
        // x = a + b g with a=1, b=2 -> (3, -1)
        let x = QGrElt::from_int_coeffs(&g, vec![1, 2]).to_cyc();
        let coords = char_coords(&x);
        assert_eq!(coords[0].as_rational().unwrap(), BigRational::from_integer(BigInt::from(3)));
        assert_eq!(coords[1].as_rational().unwrap(), BigRational::from_integer(BigInt::from(-1)));
        assert_eq!(from_char_coords(&g, &coords), x);
    }

    #[test]
    fn char_coords_trivial_group() {
        let g = crate::group::FiniteAbelianGroup::trivial();
        let x = QGrElt::from_int_coeffs(&g, vec![5]).to_cyc();
        let coords = char_coords(&x);
        assert_eq!(coords.len(), 1);
        assert_eq!(coords[0].as_rational().unwrap(), BigRational::from_integer(BigInt::from(5)));
    }

    #[test]
    fn char_coords_z3_of_one_plus_g() {
        let g = z3();
        let x = QGrElt::from_int_coeffs(&g, vec![1, 1, 0]).to_cyc();
        let coords = char_coords(&x);
        // trivial character: 2; chi: 1 + zeta3; chi^2: 1 + zeta3^2
        assert_eq!(coords[0].as_rational().unwrap(), BigRational::from_integer(BigInt::from(2)));
        let z = CycScalar::root_of_unity(3, 1);
        assert_eq!(coords[1], CycScalar::one().add_ref(&z));
        assert_eq!(coords[2], CycScalar::one().add_ref(&z.mul_ref(&z)));
        assert_eq!(from_char_coords(&g, &coords), x);
    }

    #[test]
    fn integrality_rejects_congruence_failure() {
        let g = z2();
        // coords (1, 2): inverse transform has coefficient 3/2
        let coords = vec![CycScalar::from_int(1), CycScalar::from_int(2)];
        assert!(!integrality_test(&g, &coords));
        let back = from_char_coords(&g, &coords).to_rational().unwrap();
        assert!(!back.is_integral());
        // coords (1, 1) = the identity element
        let coords = vec![CycScalar::from_int(1), CycScalar::from_int(1)];
        assert!(integrality_test(&g, &coords));
    }

    #[test]
    fn integrality_rejects_galois_inequivariance() {
        let g = z3();
        let z = CycScalar::root_of_unity(3, 1);
        // x_chi = zeta, x_chi2 = zeta violates sigma_2(x_chi) = x_chi^2
        let coords = vec![CycScalar::from_int(1), z.clone(), z];
        assert!(!integrality_test(&g, &coords));
    }

    #[test]
    fn rank_idempotents_z2() {
        let g = z2();
        // r_triv = 1, r_sign = 0
        let ranks = vec![1usize, 0];
        let r1 = idempotent_from_rank_classes(&g, &ranks, 1).unwrap();
        let half = BigRational::new(BigInt::one(), BigInt::from(2));
        assert_eq!(r1.e_eq.coeffs, vec![half.clone(), half.clone()]);
        assert_eq!(r1.min_denominator, BigInt::from(2));
        let r0 = idempotent_from_rank_classes(&g, &ranks, 0).unwrap();
        assert_eq!(r0.e_eq.coeffs, vec![half.clone(), -half.clone()]);
        // e_(0) = 1
        assert_eq!(r0.e_ge, QGrElt::from_int_coeffs(&g, vec![1, 0]));
        assert_eq!(r0.min_denominator, BigInt::one());
    }

    #[test]
    fn rank_idempotents_galois_stability() {
        let g = z3();
        // ranks distinguishing conjugate characters chi and chi^2 must fail
        let ranks = vec![0usize, 1, 0];
        assert!(idempotent_from_rank_classes(&g, &ranks, 0).is_err());
        // all equal: e_a = 1
        let ranks = vec![2usize, 2, 2];
        let r = idempotent_from_rank_classes(&g, &ranks, 2).unwrap();
        assert_eq!(r.e_eq, QGrElt::from_int_coeffs(&g, vec![1, 0, 0]));
    }

    #[test]
    fn grmat_det_and_inverse() {
        let g = z2();
        let e = |c: Vec<i64>| QGrElt::from_int_coeffs(&g, c);
        // [[1, g],[0, 1]] is unimodular
        let m = GrMat::from_fn(&g, 2, 2, |r, c| match (r, c) {
            (0, 0) | (1, 1) => e(vec![1, 0]),
            (0, 1) => e(vec![0, 1]),
            _ => e(vec![0, 0]),
        });
        assert!(m.is_unimodular());
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv), GrMat::identity(&g, 2));
        // det of diag(1-g, 1+g) = (1-g)(1+g) = 0
        let d = GrMat::from_fn(&g, 2, 2, |r, c| match (r, c) {
            (0, 0) => e(vec![1, -1]),
            (1, 1) => e(vec![1, 1]),
            _ => e(vec![0, 0]),
        });
        assert!(d.det().is_zero());
        assert!(!d.is_unimodular());
    }

    #[test]
    fn unit_detection() {
        let g = z3();
        let minus_g = QGrElt::from_int_coeffs(&g, vec![0, -1, 0]);
        assert!(minus_g.is_unit());
        let two = QGrElt::from_int_coeffs(&g, vec![2, 0, 0]);
        assert!(!two.is_unit());
        let inv = minus_g.inverse().unwrap();
        assert_eq!(minus_g.mul(&inv), QGrElt::from_int_coeffs(&g, vec![1, 0, 0]));
    }
}
