//! Finitely generated `Z[G]`-modules: G-stable lattices, presentations,
//! linear duals, Fitting ideals, annihilators, separability and torsion.

use crate::group::GroupRef;
use crate::group_ring::{GrElt, QGrElt, QGrMat};
use exact_linalg::{right_kernel, snf, Field, IntMat, QMat, ZLattice};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::fmt;

#[derive(Clone, Debug)]
pub enum ModuleError {
    GroupMismatch,
    NotGStable { generator: usize },
    ElementOutsideModule { index: usize },
    Precondition(String),
}

impl fmt::Display for ModuleError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ModuleError::GroupMismatch => write!(f, "modules belong to different groups"),
            ModuleError::NotGStable { generator } => {
                write!(f, "lattice is not stable under group generator {}", generator)
            }
            ModuleError::ElementOutsideModule { index } => {
                write!(f, "element {} does not lie in the module", index)
            }
            ModuleError::Precondition(s) => write!(f, "{}", s),
        }
    }
}

impl std::error::Error for ModuleError {}

/// A G-stable full lattice: a free `Z`-module of finite rank with commuting
/// integer action matrices, one per invariant-factor generator of `G`.
#[derive(Clone, PartialEq)]
pub struct GLattice {
    pub group: GroupRef,
    pub rank: usize,
    /// `action[i]` is the matrix of the i-th standard generator.
    pub action: Vec<IntMat>,
}

impl GLattice {
    pub fn new(group: GroupRef, rank: usize, action: Vec<IntMat>) -> Result<Self, ModuleError> {
        assert_eq!(action.len(), group.num_factors());
        for (i, (a, &n)) in action.iter().zip(group.invariant_factors()).enumerate() {
            assert_eq!(a.rows(), rank);
            assert_eq!(a.cols(), rank);
            // order check
            let mut p = IntMat::identity(rank);
            for _ in 0..n {
                p = a.mul(&p);
            }
            if p != IntMat::identity(rank) {
                return Err(ModuleError::NotGStable { generator: i });
            }
        }
        for i in 0..action.len() {
            for j in i + 1..action.len() {
                if action[i].mul(&action[j]) != action[j].mul(&action[i]) {
                    return Err(ModuleError::NotGStable { generator: j });
                }
            }
        }
        Ok(GLattice {
            group,
            rank,
            action,
        })
    }

    /// The regular module `Z[G]^d`.
    pub fn free(group: &GroupRef, d: usize) -> Self {
        let n = group.order() as usize;
        let action = (0..group.num_factors())
            .map(|i| {
                let g = group.generator(i);
                let mut m = IntMat::zeros(d * n, d * n);
                for blk in 0..d {
                    for h in group.elements() {
                        m[(blk * n + group.mul(g, h), blk * n + h)] = BigInt::one();
                    }
                }
                m
            })
            .collect();
        GLattice {
            group: group.clone(),
            rank: d * n,
            action,
        }
    }

    pub fn zero(group: &GroupRef) -> Self {
        GLattice {
            group: group.clone(),
            rank: 0,
            action: vec![IntMat::zeros(0, 0); group.num_factors()],
        }
    }

    /// Action matrix of an arbitrary group element.
    pub fn action_of(&self, g: usize) -> IntMat {
        let tuple = self.group.tuple_of(g);
        let mut m = IntMat::identity(self.rank);
        for (i, &e) in tuple.iter().enumerate() {
            for _ in 0..e {
                m = self.action[i].mul(&m);
            }
        }
        m
    }

    /// Matrix of multiplication by a group-ring element.
    pub fn action_of_elt(&self, x: &QGrElt) -> QMat<BigRational> {
        assert!(x.group == self.group);
        let mut m = QMat::zeros(self.rank, self.rank);
        for (g, c) in x.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let a = QMat::from_int(&self.action_of(g)).scale(c);
            m = m.add(&a);
        }
        m
    }

    /// Multiplicity of each character in `Q(zeta) ⊗ self`, computed from the
    /// exact inner product of traces.
    pub fn char_multiplicities(&self) -> Vec<usize> {
        let g = &self.group;
        let chars = crate::group_ring::Character::all(g);
        let traces: Vec<BigRational> = g
            .elements()
            .map(|e| {
                let a = self.action_of(e);
                let mut t = BigRational::zero();
                for i in 0..self.rank {
                    t += BigRational::from_integer(a[(i, i)].clone());
                }
                t
            })
            .collect();
        chars
            .iter()
            .map(|chi| {
                let mut acc = crate::cyclotomic::CycScalar::zero_in(1);
                for e in g.elements() {
                    let v = chi.eval(g.inv(e)).mul_ref(&crate::cyclotomic::CycScalar::from_rational(
                        traces[e].clone(),
                    ));
                    acc = acc.add_ref(&v);
                }
                let q = acc
                    .as_rational()
                    .expect("character multiplicity must be rational")
                    / BigRational::from_integer(BigInt::from(g.order()));
                assert!(q.is_integer() && !q.is_negative());
                usize::try_from(q.to_integer()).unwrap()
            })
            .collect()
    }

    /// The `Z[G]`-linear dual, transported through `Hom_Z(M, Z)`: on the dual
    /// basis the generator actions are the plain transposes.
    pub fn dual(&self) -> GLattice {
        GLattice {
            group: self.group.clone(),
            rank: self.rank,
            action: self.action.iter().map(|a| a.transpose()).collect(),
        }
    }

    /// Value of the i-th transport-basis functional of `self.dual()` on the
    /// j-th basis vector: `Phi_i(v_j) = sum_g (A_{g^{-1}})_{ij} g`.
    pub fn dual_functional(&self, i: usize, j: usize) -> QGrElt {
        let g = &self.group;
        let coeffs: Vec<BigRational> = g
            .elements()
            .map(|e| {
                let a = self.action_of(g.inv(e));
                BigRational::from_integer(a[(i, j)].clone())
            })
            .collect();
        GrElt::from_coeffs(g, coeffs)
    }

    /// Present this lattice as a `Z[G]`-module on its `Z`-basis vectors.
    pub fn to_presented(&self) -> PresentedModule {
        let g = &self.group;
        let n = g.order() as usize;
        let k = self.rank;
        // Evaluation map Z^(k|G|) -> Z^k, (i, h) |-> column i of action(h).
        let mut ev = IntMat::zeros(k, k * n);
        for i in 0..k {
            for h in g.elements() {
                let a = self.action_of(h);
                for r in 0..k {
                    ev[(r, i * n + h)] = a[(r, i)].clone();
                }
            }
        }
        let ker = right_kernel(&ev);
        let rel_rows: Vec<Vec<QGrElt>> = (0..ker.rows())
            .map(|r| {
                let row = ker.row(r);
                (0..k)
                    .map(|i| {
                        let coeffs: Vec<BigRational> = (0..n)
                            .map(|h| BigRational::from_integer(row[i * n + h].clone()))
                            .collect();
                        GrElt::from_coeffs(g, coeffs)
                    })
                    .collect()
            })
            .collect();
        let relations = if rel_rows.is_empty() {
            QGrMat::zeros(g, 0, k)
        } else {
            QGrMat::from_fn(g, rel_rows.len(), k, |r, c| rel_rows[r][c].clone())
        };
        PresentedModule::new(g.clone(), k, relations)
    }
}

impl fmt::Debug for GLattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GLattice(rank {} over {:?})", self.rank, self.group)
    }
}

/// A finitely presented `Z[G]`-module `Z[G]^generators / rowspan(relations)`.
#[derive(Clone)]
pub struct PresentedModule {
    pub group: GroupRef,
    pub generators: usize,
    /// `s x generators`; each row is a relation vector.
    pub relations: QGrMat,
}

impl PresentedModule {
    pub fn new(group: GroupRef, generators: usize, relations: QGrMat) -> Self {
        assert_eq!(relations.cols(), generators);
        assert!(relations.is_integral(), "relations must lie in Z[G]");
        PresentedModule {
            group,
            generators,
            relations,
        }
    }

    pub fn free(group: &GroupRef, d: usize) -> Self {
        PresentedModule::new(group.clone(), d, QGrMat::zeros(group, 0, d))
    }

    fn flat_dim(&self) -> usize {
        self.generators * self.group.order() as usize
    }

    /// The restricted-scalars relation lattice inside `Z^(generators * |G|)`:
    /// the `Z`-span of all `g * (relation row)`.
    pub fn relation_lattice(&self) -> ZLattice {
        let g = &self.group;
        let n = g.order() as usize;
        let s = self.relations.rows();
        if s == 0 {
            return ZLattice::zero(self.flat_dim());
        }
        let mut rows: Vec<Vec<BigInt>> = Vec::with_capacity(s * n);
        for r in 0..s {
            for h in g.elements() {
                let mut flat = Vec::with_capacity(self.flat_dim());
                for c in 0..self.generators {
                    let e = self.relations[(r, c)].translate(h);
                    for q in &e.coeffs {
                        assert!(q.is_integer());
                        flat.push(q.to_integer());
                    }
                }
                rows.push(flat);
            }
        }
        ZLattice::from_int_rows(&IntMat::from_rows(rows), &BigInt::one())
    }

    /// Flatten an element (a coordinate vector over `Q[G]`) to its stacked
    /// rational coefficient vector.
    pub fn flatten(&self, v: &[QGrElt]) -> Vec<BigRational> {
        assert_eq!(v.len(), self.generators);
        QGrMat::column_as_vec(v)
    }

    pub fn unflatten(&self, v: &[BigRational]) -> Vec<QGrElt> {
        QGrMat::vec_as_column(&self.group, v)
    }

    /// Is the element zero in the module?
    pub fn is_zero_element(&self, v: &[QGrElt]) -> bool {
        self.relation_lattice().contains_vec(&self.flatten(v))
    }

    /// Torsion invariants and the torsion-free quotient with its action.
    pub fn torsion_decomp(&self) -> TorsionDecomp {
        let g = &self.group;
        let n = g.order() as usize;
        let dim = self.flat_dim();
        let rel = self.relation_lattice();
        let invariants: Vec<BigInt> = if rel.is_zero() {
            vec![]
        } else {
            let s = snf(rel.int_basis());
            s.invariants()
        };
        // Saturate, then split coordinates along the Smith form of the
        // saturation: M_tf = Z^dim / sat.
        let sat = rel.saturate();
        let r = sat.rank();
        let tf_rank = dim - r;
        let (v, v_inv) = if r == 0 {
            (IntMat::identity(dim), IntMat::identity(dim))
        } else {
            let s = snf(sat.int_basis());
            let vq = QMat::from_int(&s.v);
            let vi = vq.inverse().expect("unimodular");
            let v_inv = IntMat::from_fn(dim, dim, |a, b| {
                assert!(vi[(a, b)].is_integer());
                vi[(a, b)].to_integer()
            });
            (s.v.clone(), v_inv)
        };
        // In coordinates y = x V (rows), the saturation spans the first r
        // coordinates, so the projection keeps the last tf_rank entries of
        // V^T x and the section is V^{-T} on those coordinates.
        let proj = IntMat::from_fn(tf_rank, dim, |a, b| v[(b, r + a)].clone());
        let section = IntMat::from_fn(dim, tf_rank, |a, b| v_inv[(r + b, a)].clone());
        // Induced action on the quotient.
        let free = GLattice::free(g, self.generators);
        let action: Vec<IntMat> = (0..g.num_factors())
            .map(|i| {
                let a = &free.action[i];
                proj.mul(a).mul(&section)
            })
            .collect();
        let tf = GLattice::new(g.clone(), tf_rank, action).expect("induced action is G-stable");
        let _ = n;
        TorsionDecomp {
            invariants,
            tf,
            proj,
            section,
        }
    }

    /// The annihilator ideal `{x in Z[G] : x M = 0}`.
    pub fn annihilator(&self) -> IdealLattice {
        let g = &self.group;
        let n = g.order() as usize;
        let rel = self.relation_lattice();
        // x annihilates generator i iff A_i x lies in the relation lattice,
        // where A_i maps the coefficient vector of x to the flat vector of
        // x * e_i.
        let mut result: Option<ZLattice> = None;
        for i in 0..self.generators {
            let mut a = IntMat::zeros(self.flat_dim(), n);
            for h in g.elements() {
                // x = h contributes e_i-coordinate h: flat index i*n + h
                a[(i * n + h, h)] = BigInt::one();
            }
            let pre = rel.preimage(&a).expect("dimensions agree");
            result = Some(match result {
                None => pre,
                Some(l) => l.intersect(&pre).expect("same ambient"),
            });
        }
        let lat = result.unwrap_or_else(|| ZLattice::standard(n));
        IdealLattice::from_lattice(g.clone(), lat).expect("annihilator is an ideal")
    }

    /// Fitting ideal `Fit^a`: generated by the `(generators - a)`-minors of
    /// the relation matrix; the unit ideal for `a >= generators`, zero when
    /// there are too few relations.
    pub fn fitting_ideal(&self, a: usize) -> IdealLattice {
        let g = &self.group;
        let m = self.generators;
        let s = self.relations.rows();
        if a >= m {
            return IdealLattice::unit(g.clone());
        }
        let size = m - a;
        if size > s {
            return IdealLattice::zero(g.clone());
        }
        let mut gens: Vec<QGrElt> = Vec::new();
        for rows in combinations(s, size) {
            for cols in combinations(m, size) {
                let minor = self.relations.submatrix(&rows, &cols).det();
                if !minor.is_zero() {
                    gens.push(minor);
                }
            }
        }
        IdealLattice::from_generators(g.clone(), &gens)
    }

    /// Separability of an ordered subset `X` (elements given in generator
    /// coordinates): `<X>` must be free of rank `|X|` and a direct summand.
    pub fn separability(&self, xs: &[Vec<QGrElt>]) -> Result<Separability, ModuleError> {
        let g = &self.group;
        let n = g.order() as usize;
        let a = xs.len();
        for (i, x) in xs.iter().enumerate() {
            if x.len() != self.generators {
                return Err(ModuleError::ElementOutsideModule { index: i });
            }
            if x.iter().any(|e| !e.is_integral()) {
                return Err(ModuleError::ElementOutsideModule { index: i });
            }
        }
        if a == 0 {
            return Ok(Separability {
                separable: true,
                retraction: Some(QGrMat::zeros(g, 0, self.generators)),
                reason: None,
            });
        }
        // Freeness: no nontrivial Z[G]-relation among the x_i modulo the
        // relation lattice.
        let rel = self.relation_lattice();
        let mut map = IntMat::zeros(self.flat_dim(), a * n);
        for (i, x) in xs.iter().enumerate() {
            for h in g.elements() {
                let flat = self.flatten(&x.iter().map(|e| e.translate(h)).collect::<Vec<_>>());
                for (r, q) in flat.iter().enumerate() {
                    map[(r, i * n + h)] = q.to_integer();
                }
            }
        }
        let pre = rel.preimage(&map).expect("dimensions agree");
        if !pre.is_zero() {
            return Ok(Separability {
                separable: false,
                retraction: None,
                reason: Some("generated module is not free of full rank".into()),
            });
        }
        // Splitting: a Z[G]-linear retraction r with r(x_i) = e_i, encoded as
        // an integer linear system in the m*a*|G| unknown coefficients of r.
        match self.solve_retraction(xs) {
            Some(r) => Ok(Separability {
                separable: true,
                retraction: Some(r),
                reason: None,
            }),
            None => Ok(Separability {
                separable: false,
                retraction: None,
                reason: Some("no equivariant retraction exists".into()),
            }),
        }
    }

    /// Solve for `r : M -> Z[G]^a` ZG-linear with `r(x_i) = e_i`.
    fn solve_retraction(&self, xs: &[Vec<QGrElt>]) -> Option<QGrMat> {
        let g = &self.group;
        let n = g.order() as usize;
        let a = xs.len();
        let m = self.generators;
        let unknowns = a * m * n; // coefficients of r(gen_j) in Z[G]^a
        let unknown_idx = |i: usize, j: usize, h: usize| (i * m + j) * n + h;
        let mut rows: Vec<Vec<BigInt>> = Vec::new();
        let mut rhs: Vec<BigInt> = Vec::new();
        // (a) every relation row maps to zero: for each relation q and each
        // output slot i: sum_j q_j * r_i(gen_j) = 0 in Z[G].
        for rr in 0..self.relations.rows() {
            for i in 0..a {
                for out_g in g.elements() {
                    let mut row = vec![BigInt::zero(); unknowns];
                    for j in 0..m {
                        let q = &self.relations[(rr, j)];
                        // coefficient of out_g in q * r_i(gen_j):
                        // sum_h q_{out_g * h^{-1}} * r_coeff(h)
                        for h in g.elements() {
                            let qc = &q.coeffs[g.mul(out_g, g.inv(h))];
                            if !qc.is_zero() {
                                row[unknown_idx(i, j, h)] += qc.to_integer();
                            }
                        }
                    }
                    rows.push(row);
                    rhs.push(BigInt::zero());
                }
            }
        }
        // (b) r(x_i) = e_i.
        for (k, x) in xs.iter().enumerate() {
            for i in 0..a {
                for out_g in g.elements() {
                    let mut row = vec![BigInt::zero(); unknowns];
                    for j in 0..m {
                        let xc = &x[j];
                        for h in g.elements() {
                            let c = &xc.coeffs[g.mul(out_g, g.inv(h))];
                            if !c.is_zero() {
                                row[unknown_idx(i, j, h)] += c.to_integer();
                            }
                        }
                    }
                    rows.push(row);
                    let want = i == k && out_g == g.identity();
                    rhs.push(if want { BigInt::one() } else { BigInt::zero() });
                }
            }
        }
        let mat = IntMat::from_rows(rows);
        let sol = solve_integer_system(&mat, &rhs)?;
        Some(QGrMat::from_fn(g, a, m, |i, j| {
            let coeffs: Vec<BigRational> = (0..n)
                .map(|h| BigRational::from_integer(sol[unknown_idx(i, j, h)].clone()))
                .collect();
            GrElt::from_coeffs(g, coeffs)
        }))
    }
}

impl fmt::Debug for PresentedModule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "PresentedModule({} gens, {} relations over {:?})",
            self.generators,
            self.relations.rows(),
            self.group
        )
    }
}

/// Solve `mat u = rhs` over the integers via Smith normal form.
pub fn solve_integer_system(mat: &IntMat, rhs: &[BigInt]) -> Option<Vec<BigInt>> {
    let s = snf(mat);
    let ub: Vec<BigInt> = s.u.mul_vec(rhs);
    let n = mat.cols();
    let mut y = vec![BigInt::zero(); n];
    let rank = s.s.rows().min(n);
    for i in 0..mat.rows() {
        if i < rank && !s.s[(i, i)].is_zero() {
            let (q, r) = num_integer::Integer::div_mod_floor(&ub[i], &s.s[(i, i)]);
            if !r.is_zero() {
                return None;
            }
            y[i] = q;
        } else if !ub[i].is_zero() {
            return None;
        }
    }
    Some(s.v.mul_vec(&y))
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..k).collect();
    if k > n {
        return out;
    }
    loop {
        out.push(cur.clone());
        // advance
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if cur[i] != i + n - k {
                break;
            }
            if i == 0 {
                return out;
            }
        }
        cur[i] += 1;
        for j in i + 1..k {
            cur[j] = cur[j - 1] + 1;
        }
    }
}

/// All size-k index combinations of `0..n` (exposed for the oracles).
pub fn index_combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    combinations(n, k)
}

pub struct TorsionDecomp {
    pub invariants: Vec<BigInt>,
    pub tf: GLattice,
    /// Projection from flat generator coordinates onto tf coordinates.
    pub proj: IntMat,
    /// An integral section of `proj`.
    pub section: IntMat,
}

pub struct Separability {
    pub separable: bool,
    pub retraction: Option<QGrMat>,
    pub reason: Option<String>,
}

/// A G-stable lattice inside `Q[G]`: the canonical house for Fitting ideals,
/// annihilators and evaluation lattices.
#[derive(Clone, PartialEq)]
pub struct IdealLattice {
    pub group: GroupRef,
    pub lattice: ZLattice,
}

impl IdealLattice {
    pub fn zero(group: GroupRef) -> Self {
        let n = group.order() as usize;
        IdealLattice {
            group,
            lattice: ZLattice::zero(n),
        }
    }

    pub fn unit(group: GroupRef) -> Self {
        let n = group.order() as usize;
        IdealLattice {
            group,
            lattice: ZLattice::standard(n),
        }
    }

    pub fn from_lattice(group: GroupRef, lattice: ZLattice) -> Result<Self, ModuleError> {
        assert_eq!(lattice.dim(), group.order() as usize);
        // G-stability check.
        for i in 0..group.num_factors() {
            let g = group.generator(i);
            for row in lattice.q_basis_rows() {
                let x = GrElt::from_coeffs(&group, row);
                let gx = x.translate(g);
                if !lattice.contains_vec(&gx.coeffs) {
                    return Err(ModuleError::NotGStable { generator: i });
                }
            }
        }
        Ok(IdealLattice { group, lattice })
    }

    /// The `Z[G]`-span of a finite set of elements of `Q[G]`.
    pub fn from_generators(group: GroupRef, gens: &[QGrElt]) -> Self {
        let n = group.order() as usize;
        let mut rows = Vec::new();
        for x in gens {
            assert!(x.group == group);
            for h in group.elements() {
                rows.push(x.translate(h).coeffs.clone());
            }
        }
        let lattice = if rows.is_empty() {
            ZLattice::zero(n)
        } else {
            ZLattice::from_q_rows(&rows, n)
        };
        IdealLattice { group, lattice }
    }

    pub fn principal(group: GroupRef, x: &QGrElt) -> Self {
        Self::from_generators(group, std::slice::from_ref(x))
    }

    pub fn contains_elt(&self, x: &QGrElt) -> bool {
        self.lattice.contains_vec(&x.coeffs)
    }

    pub fn contains(&self, other: &IdealLattice) -> bool {
        self.lattice
            .contains_lattice(&other.lattice)
            .expect("same ambient dimension")
    }

    pub fn is_zero(&self) -> bool {
        self.lattice.is_zero()
    }

    /// Lattice product: the span of all pairwise products.
    pub fn product(&self, other: &IdealLattice) -> IdealLattice {
        assert!(self.group == other.group);
        let mut gens = Vec::new();
        for a in self.lattice.q_basis_rows() {
            let ea = GrElt::from_coeffs(&self.group, a);
            for b in other.lattice.q_basis_rows() {
                let eb = GrElt::from_coeffs(&self.group, b);
                gens.push(ea.mul(&eb));
            }
        }
        IdealLattice::from_generators(self.group.clone(), &gens)
    }

    /// Multiply by a fixed element of `Q[G]`.
    pub fn scale_elt(&self, x: &QGrElt) -> IdealLattice {
        let gens: Vec<QGrElt> = self
            .lattice
            .q_basis_rows()
            .into_iter()
            .map(|row| GrElt::from_coeffs(&self.group, row).mul(x))
            .collect();
        IdealLattice::from_generators(self.group.clone(), &gens)
    }
}

impl fmt::Debug for IdealLattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IdealLattice over {:?}: {:?}", self.group, self.lattice)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::FiniteAbelianGroup;

    fn z2() -> GroupRef {
        FiniteAbelianGroup::cyclic(2)
    }

    fn e(g: &GroupRef, c: Vec<i64>) -> QGrElt {
        QGrElt::from_int_coeffs(g, c)
    }

    #[test]
    fn fitting_of_diag_0_2() {
        // G = 1, Q = diag(0, 2): Fit^0 = (0), Fit^1 = 2Z, Fit^2 = Z.
        let g = FiniteAbelianGroup::trivial();
        let rel = QGrMat::from_fn(&g, 2, 2, |r, c| {
            if r == 0 && c == 0 {
                e(&g, vec![0])
            } else if r == 1 && c == 1 {
                e(&g, vec![2])
            } else {
                e(&g, vec![0])
            }
        });
        let m = PresentedModule::new(g.clone(), 2, rel);
        assert!(m.fitting_ideal(0).is_zero());
        let f1 = m.fitting_ideal(1);
        assert!(f1.contains_elt(&e(&g, vec![2])));
        assert!(!f1.contains_elt(&e(&g, vec![1])));
        assert_eq!(m.fitting_ideal(2), IdealLattice::unit(g.clone()));
        assert_eq!(m.fitting_ideal(5), IdealLattice::unit(g));
    }

    #[test]
    fn fitting_of_free_module() {
        let g = z2();
        let m = PresentedModule::free(&g, 2);
        assert!(m.fitting_ideal(0).is_zero());
        assert!(m.fitting_ideal(1).is_zero());
        assert_eq!(m.fitting_ideal(2), IdealLattice::unit(g));
    }

    #[test]
    fn fitting_of_one_minus_g() {
        // G = Z/2, Q = (1 - g): Fit^0 = Z[G](1 - g).
        let g = z2();
        let rel = QGrMat::from_fn(&g, 1, 1, |_, _| e(&g, vec![1, -1]));
        let m = PresentedModule::new(g.clone(), 1, rel);
        let f0 = m.fitting_ideal(0);
        let expect = IdealLattice::principal(g.clone(), &e(&g, vec![1, -1]));
        assert_eq!(f0, expect);
    }

    #[test]
    fn annihilator_examples() {
        let g = z2();
        // M = Z[G]/2 -> Ann = 2 Z[G]
        let rel = QGrMat::from_fn(&g, 1, 1, |_, _| e(&g, vec![2, 0]));
        let m = PresentedModule::new(g.clone(), 1, rel);
        let ann = m.annihilator();
        assert_eq!(ann, IdealLattice::principal(g.clone(), &e(&g, vec![2, 0])));
        // free module: Ann = 0
        let free = PresentedModule::free(&g, 1);
        assert!(free.annihilator().is_zero());
        // M = Z[G]/(1-g) -> Ann = Z[G](1-g)
        let rel = QGrMat::from_fn(&g, 1, 1, |_, _| e(&g, vec![1, -1]));
        let m = PresentedModule::new(g.clone(), 1, rel);
        assert_eq!(
            m.annihilator(),
            IdealLattice::principal(g.clone(), &e(&g, vec![1, -1]))
        );
    }

    #[test]
    fn torsion_decomposition() {
        // G = 1, Q = diag(0, 2): invariants [2], M_tf = Z.
        let g = FiniteAbelianGroup::trivial();
        let rel = QGrMat::from_fn(&g, 2, 2, |r, c| {
            if r == 1 && c == 1 {
                e(&g, vec![2])
            } else {
                e(&g, vec![0])
            }
        });
        let m = PresentedModule::new(g.clone(), 2, rel);
        let t = m.torsion_decomp();
        assert_eq!(t.invariants, vec![BigInt::from(2)]);
        assert_eq!(t.tf.rank, 1);
        // projection then section is the identity on tf coordinates
        assert_eq!(t.proj.mul(&t.section), IntMat::identity(1));
    }

    #[test]
    fn separability_projection_case() {
        // G = 1, M = Z + Z/2, X = {(1,0)}: separable with projection.
        let g = FiniteAbelianGroup::trivial();
        let rel = QGrMat::from_fn(&g, 1, 2, |_, c| {
            if c == 1 {
                e(&g, vec![2])
            } else {
                e(&g, vec![0])
            }
        });
        let m = PresentedModule::new(g.clone(), 2, rel);
        let x = vec![vec![e(&g, vec![1]), e(&g, vec![0])]];
        let sep = m.separability(&x).unwrap();
        assert!(sep.separable);
        let r = sep.retraction.unwrap();
        // r(x) = 1
        assert_eq!(r[(0, 0)], e(&g, vec![1]));
    }

    #[test]
    fn separability_fails_on_torsion_class() {
        // G = Z/2, M = Z[G]/(1-g), X = {1}: Z-rank of <X> is 1 < |G|.
        let g = z2();
        let rel = QGrMat::from_fn(&g, 1, 1, |_, _| e(&g, vec![1, -1]));
        let m = PresentedModule::new(g.clone(), 1, rel);
        let x = vec![vec![e(&g, vec![1, 0])]];
        let sep = m.separability(&x).unwrap();
        assert!(!sep.separable);
        // empty X is separable
        assert!(m.separability(&[]).unwrap().separable);
    }

    #[test]
    fn dual_of_sublattice_of_regular() {
        // G = Z/2, M = Z(1+g): rank 1, g acts as +1; the dual functional
        // transports to (1+g) |-> 1 + g.
        let g = z2();
        let m = GLattice::new(g.clone(), 1, vec![IntMat::identity(1)]).unwrap();
        let d = m.dual();
        assert_eq!(d.rank, 1);
        assert_eq!(d.action[0], IntMat::identity(1));
        let phi = m.dual_functional(0, 0);
        assert_eq!(phi, e(&g, vec![1, 1]));
    }

    #[test]
    fn presented_from_lattice_regular() {
        let g = z2();
        let m = GLattice::free(&g, 1);
        let p = m.to_presented();
        // Z[G] on two Z-generators 1, g has a one-dimensional relation space
        assert_eq!(p.generators, 2);
        let t = p.torsion_decomp();
        assert!(t.invariants.is_empty());
        assert_eq!(t.tf.rank, 2);
    }

    #[test]
    fn ideal_lattice_not_stable_rejected() {
        let g = z2();
        let lat = ZLattice::from_int_rows(&IntMat::from_i64(&[&[1, 0]]), &BigInt::one());
        assert!(IdealLattice::from_lattice(g, lat).is_err());
    }

    #[test]
    fn char_multiplicities_of_regular() {
        let g = z2();
        let m = GLattice::free(&g, 1);
        assert_eq!(m.char_multiplicities(), vec![1, 1]);
        let fixed = GLattice::new(g.clone(), 1, vec![IntMat::identity(1)]).unwrap();
        assert_eq!(fixed.char_multiplicities(), vec![1, 0]);
    }
}
