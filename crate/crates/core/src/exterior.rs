//! Exterior powers over the group algebra and exterior power biduals.
//!
//! For a G-lattice `M` with `V = Q ⊗ M`, the module `∧^a_{Q[G]} V` is
//! realized as a quotient of the plain rational wedge `∧^a_Q V`: the kernel
//! of `∧^a_Q V -> ∧^a_{Q[G]} V` is spanned by the balancing moves of group
//! elements between slots together with the polarized ring-square relations
//! `x ∧ (g x) ∧ w`. The computed quotient dimension is checked against the
//! character count `Σ_χ C(r_χ, a)` on every construction.

use crate::gmodule::{GLattice, IdealLattice, PresentedModule};
use crate::group::GroupRef;
use crate::group_ring::{GrElt, GrMat, QGrElt, QGrMat};
use exact_linalg::{Field, IntMat, QMat, ZLattice};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

/// The rational model of `∧^a_{Q[G]}(Q ⊗ M)` with its integral structures.
#[derive(Clone)]
pub struct WedgeModel {
    pub group: GroupRef,
    pub a: usize,
    pub base: GLattice,
    /// Sorted index tuples of the ambient monomial basis (empty for a = 0).
    pub monomials: Vec<Vec<usize>>,
    /// Quotient dimension.
    pub dim: usize,
    proj: QMat<BigRational>,
    section: QMat<BigRational>,
}

impl WedgeModel {
    pub fn new(base: &GLattice, a: usize) -> WedgeModel {
        let group = base.group.clone();
        let n = group.order() as usize;
        if a == 0 {
            // ∧^0 = Q[G] itself; coordinates are group-ring coefficients.
            return WedgeModel {
                group: group.clone(),
                a: 0,
                base: base.clone(),
                monomials: vec![vec![]],
                dim: n,
                proj: QMat::identity(n),
                section: QMat::identity(n),
            };
        }
        let k = base.rank;
        let monomials = crate::gmodule::index_combinations(k, a);
        let ambient = monomials.len();
        let mut rel_rows: Vec<Vec<BigRational>> = Vec::new();
        // (1) balancing: apply a generator in one slot vs the next.
        for mono in &monomials {
            for gi in 0..group.num_factors() {
                let ag = base.action[gi].clone();
                for p in 0..a.saturating_sub(1) {
                    let mut va = monomial_vectors(k, mono);
                    va[p] = int_col(&ag, mono[p]);
                    let ea = expand_q(&monomials, &va);
                    let mut vb = monomial_vectors(k, mono);
                    vb[p + 1] = int_col(&ag, mono[p + 1]);
                    let eb = expand_q(&monomials, &vb);
                    let row: Vec<BigRational> =
                        ea.iter().zip(&eb).map(|(x, y)| x - y).collect();
                    if row.iter().any(|c| !c.is_zero()) {
                        rel_rows.push(row);
                    }
                }
            }
        }
        // (2) polarized ring squares x ∧ (g x) ∧ w = 0 whenever a >= 2.
        if a >= 2 {
            let tails = crate::gmodule::index_combinations(k, a - 2);
            for g in group.elements() {
                let ag = base.action_of(g);
                for i in 0..k {
                    for j in i..k {
                        for tail in &tails {
                            // v_i ∧ (g v_j) ∧ tail + v_j ∧ (g v_i) ∧ tail
                            let mut va: Vec<Vec<BigRational>> = Vec::with_capacity(a);
                            va.push(std_col(k, i));
                            va.push(int_col(&ag, j));
                            for &t in tail {
                                va.push(std_col(k, t));
                            }
                            let ea = expand_q(&monomials, &va);
                            let mut vb: Vec<Vec<BigRational>> = Vec::with_capacity(a);
                            vb.push(std_col(k, j));
                            vb.push(int_col(&ag, i));
                            for &t in tail {
                                vb.push(std_col(k, t));
                            }
                            let eb = expand_q(&monomials, &vb);
                            let row: Vec<BigRational> =
                                ea.iter().zip(&eb).map(|(x, y)| x + y).collect();
                            if row.iter().any(|c| !c.is_zero()) {
                                rel_rows.push(row);
                            }
                        }
                    }
                }
            }
        }
        let rel = if rel_rows.is_empty() {
            QMat::zeros(0, ambient)
        } else {
            QMat::from_rows(rel_rows)
        };
        let (rref, pivots) = rel.rref();
        let free_cols: Vec<usize> = (0..ambient).filter(|c| !pivots.contains(c)).collect();
        let dim = free_cols.len();
        // Projection: reduce pivot coordinates away, then read free ones.
        let mut proj = QMat::zeros(dim, ambient);
        for (qi, &fc) in free_cols.iter().enumerate() {
            proj[(qi, fc)] = BigRational::one();
            for (ri, &pc) in pivots.iter().enumerate() {
                // coordinate pc contributes -rref[ri][fc] to the class
                let v = -rref[(ri, fc)].clone();
                proj[(qi, pc)] = v;
            }
        }
        let mut section = QMat::zeros(ambient, dim);
        for (qi, &fc) in free_cols.iter().enumerate() {
            section[(fc, qi)] = BigRational::one();
        }
        let model = WedgeModel {
            group,
            a,
            base: base.clone(),
            monomials,
            dim,
            proj,
            section,
        };
        // Dimension check against the per-character count.
        let mult = base.char_multiplicities();
        let expected: usize = mult.iter().map(|&r| binomial(r, a)).sum();
        assert_eq!(
            model.dim, expected,
            "wedge model dimension disagrees with the character count"
        );
        model
    }

    /// Class of the wedge of `a` vectors of `Q ⊗ M` (given in base
    /// coordinates, over any exact field containing Q).
    pub fn wedge_of<F: Field + From<BigRational>>(&self, vectors: &[Vec<F>]) -> Vec<F> {
        assert_eq!(vectors.len(), self.a);
        if self.a == 0 {
            // the empty wedge is the ring identity
            let mut v = vec![F::zero(); self.dim];
            v[self.group.identity()] = F::one();
            return v;
        }
        let ambient = expand_f(&self.monomials, vectors);
        self.project_f(&ambient)
    }

    pub fn project_f<F: Field + From<BigRational>>(&self, ambient: &[F]) -> Vec<F> {
        apply_q_mat(&self.proj, ambient)
    }

    pub fn section_f<F: Field + From<BigRational>>(&self, class: &[F]) -> Vec<F> {
        apply_q_mat(&self.section, class)
    }

    /// Matrix of the module action of a group element on the quotient.
    pub fn action_of(&self, g: usize) -> QMat<BigRational> {
        if self.a == 0 {
            return QGrElt::of_element(&self.group, g).regular_rep();
        }
        // Apply g in the first slot of each ambient monomial, then project.
        let ag = self.base.action_of(g);
        let ambient = self.monomials.len();
        let mut a1 = QMat::zeros(ambient, ambient);
        for (ci, mono) in self.monomials.iter().enumerate() {
            let mut vs = monomial_vectors(self.base.rank, mono);
            vs[0] = int_col(&ag, mono[0]);
            let img = expand_q(&self.monomials, &vs);
            for (r, v) in img.iter().enumerate() {
                a1[(r, ci)] = v.clone();
            }
        }
        self.proj.mul(&a1).mul(&self.section)
    }

    /// Matrix of multiplication by an element of `Q[G]`.
    pub fn action_of_elt(&self, x: &QGrElt) -> QMat<BigRational> {
        let mut m = QMat::zeros(self.dim, self.dim);
        for (g, c) in x.coeffs.iter().enumerate() {
            if !c.is_zero() {
                m = m.add(&self.action_of(g).scale(c));
            }
        }
        m
    }

    /// The image lattice of `∧^a_{Z[G]} M` (modulo torsion) inside the model:
    /// the `Z`-span of all `g * (basis monomial class)`.
    pub fn image_lattice(&self) -> ZLattice {
        if self.a == 0 {
            return ZLattice::standard(self.dim);
        }
        let mut rows: Vec<Vec<BigRational>> = Vec::new();
        for g in self.group.elements() {
            let act = self.action_of(g);
            for mono in 0..self.monomials.len() {
                let cls = self.project_f::<BigRational>(&std_col(self.monomials.len(), mono));
                rows.push(act.mul_vec(&cls));
            }
        }
        ZLattice::from_q_rows(&rows, self.dim)
    }

    /// Evaluation of the functional wedge `Φ_T = φ_{T_1} ∧ ... ∧ φ_{T_a}`
    /// (transport-basis functionals of `M*`) against a model class; the
    /// value lies in `Q[G]`.
    pub fn evaluate_functionals(&self, t: &[usize], class: &[BigRational]) -> QGrElt {
        assert_eq!(t.len(), self.a);
        if self.a == 0 {
            return GrElt::from_coeffs(&self.group, class.to_vec());
        }
        let amb = self.section_f::<BigRational>(class);
        let mut acc = QGrElt::zero(&self.group);
        for (mi, mono) in self.monomials.iter().enumerate() {
            if amb[mi].is_zero() {
                continue;
            }
            let det = self.functional_minor(t, mono);
            acc = acc.add(&det.scale(&amb[mi]));
        }
        acc
    }

    /// `det( φ_{t_i}(v_{s_j}) )` over `Z[G]`.
    fn functional_minor(&self, t: &[usize], s: &[usize]) -> QGrElt {
        let g = &self.group;
        let m = GrMat::from_fn(g, t.len(), s.len(), |i, j| {
            self.base.dual_functional(t[i], s[j])
        });
        m.det()
    }

    /// The exterior power bidual `∩^a M` as a lattice in model coordinates:
    /// all classes whose pairings against every functional wedge from a
    /// `Z`-basis of `M*` land in `Z[G]`.
    pub fn bidual_lattice(&self) -> ZLattice {
        if self.a == 0 {
            return ZLattice::standard(self.dim);
        }
        let g = &self.group;
        let n = g.order() as usize;
        let k = self.base.rank;
        let tuples = crate::gmodule::index_combinations(k, self.a);
        let mut rows: Vec<Vec<BigRational>> = Vec::new();
        for t in &tuples {
            // rows of the linear map class -> coefficients of Φ_T(class)
            let mut mat = QMat::zeros(n, self.dim);
            for c in 0..self.dim {
                let cls = std_col(self.dim, c);
                let val = self.evaluate_functionals(t, &cls);
                for r in 0..n {
                    mat[(r, c)] = val.coeffs[r].clone();
                }
            }
            for r in 0..n {
                rows.push(mat.row_vec(r));
            }
        }
        let stack = QMat::from_rows(rows.clone());
        assert_eq!(
            stack.rank(),
            self.dim,
            "wedge functional pairing must be nondegenerate"
        );
        // dual of the row lattice
        let row_lattice = ZLattice::from_q_rows(&rows, self.dim);
        dual_of_full_lattice(&row_lattice)
    }

    /// `I(eta)`: the `Z[G]`-span of all functional-wedge values on a class.
    pub fn evaluation_lattice(&self, class: &[BigRational]) -> IdealLattice {
        let k = self.base.rank;
        let tuples = crate::gmodule::index_combinations(k, self.a);
        let gens: Vec<QGrElt> = tuples
            .iter()
            .map(|t| self.evaluate_functionals(t, class))
            .collect();
        IdealLattice::from_generators(self.group.clone(), &gens)
    }

    /// The induced map of models along an equivariant linear map
    /// `f : Q ⊗ M -> Q ⊗ N` (matrix over F in base coordinates).
    pub fn induced_map<F: Field + From<BigRational>>(
        &self,
        target: &WedgeModel,
        f: &QMat<F>,
    ) -> QMat<F> {
        assert_eq!(self.a, target.a);
        if self.a == 0 {
            // ∧^0 of any map is the identity on Q[G].
            return QMat::from_fn(self.dim, self.dim, |r, c| {
                if r == c {
                    F::one()
                } else {
                    F::zero()
                }
            });
        }
        let mut out = QMat::zeros(target.dim, self.dim);
        for c in 0..self.dim {
            let amb = self.section_f::<F>(&std_col_f::<F>(self.dim, c));
            let mut img = vec![F::zero(); target.dim];
            for (mi, mono) in self.monomials.iter().enumerate() {
                if amb[mi].is_zero() {
                    continue;
                }
                // wedge of the images of the monomial's basis vectors
                let vecs: Vec<Vec<F>> = mono.iter().map(|&i| f.col_vec(i)).collect();
                let w = target.wedge_of(&vecs);
                for (r, v) in w.iter().enumerate() {
                    img[r] = img[r].add_ref(&v.mul_ref(&amb[mi]));
                }
            }
            for r in 0..target.dim {
                out[(r, c)] = img[r].clone();
            }
        }
        out
    }
}

/// Dual of a full-rank lattice with respect to the standard pairing.
pub fn dual_of_full_lattice(l: &ZLattice) -> ZLattice {
    l.dual().expect("lattice must have full rank")
}

/// `{v in L : m v = 0}` as a sublattice of `L`, computed on the integer
/// coordinates of `L`'s basis so the result is exact and saturated in `L`.
pub fn lattice_subspace_kernel(l: &ZLattice, m: &QMat<BigRational>) -> ZLattice {
    if l.is_zero() {
        return l.clone();
    }
    let rows = l.q_basis_rows();
    // Integer matrix with column j = denominator-cleared image of basis j.
    let mut denom = BigInt::one();
    let images: Vec<Vec<BigRational>> = rows.iter().map(|r| m.mul_vec(r)).collect();
    for img in &images {
        for v in img {
            denom = num_integer::Integer::lcm(&denom, v.denom());
        }
    }
    let mat = IntMat::from_fn(m.rows(), rows.len(), |i, j| {
        let q = &images[j][i] * BigRational::from_integer(denom.clone());
        q.to_integer()
    });
    let coeffs = exact_linalg::right_kernel(&mat);
    let mut out_rows: Vec<Vec<BigRational>> = Vec::new();
    for ci in 0..coeffs.rows() {
        let c = coeffs.row(ci);
        let mut v = vec![BigRational::zero(); l.dim()];
        for (j, cj) in c.iter().enumerate() {
            if cj.is_zero() {
                continue;
            }
            let cq = BigRational::from_integer(cj.clone());
            for (t, b) in rows[j].iter().enumerate() {
                let add = &cq * b;
                v[t] += add;
            }
        }
        out_rows.push(v);
    }
    if out_rows.is_empty() {
        return ZLattice::zero(l.dim());
    }
    ZLattice::from_q_rows(&out_rows, l.dim())
}

/// Kronecker product lattice: basis `a_i ⊗ b_j`.
pub fn kron_lattice(a: &ZLattice, b: &ZLattice) -> ZLattice {
    let p = a.dim();
    let q = b.dim();
    let mut rows = Vec::new();
    for ra in a.q_basis_rows() {
        for rb in b.q_basis_rows() {
            let mut row = Vec::with_capacity(p * q);
            for x in &ra {
                for y in &rb {
                    row.push(x * y);
                }
            }
            rows.push(row);
        }
    }
    if rows.is_empty() {
        ZLattice::zero(p * q)
    } else {
        ZLattice::from_q_rows(&rows, p * q)
    }
}

/// Exterior power of a presented module via the standard relation matrix:
/// generators are the wedge monomials, and each relation `ρ` wedged with each
/// `(a-1)`-monomial contributes a relation.
pub fn exterior_power_presented(p: &PresentedModule, a: usize) -> PresentedModule {
    let g = &p.group;
    let m = p.generators;
    if a == 0 {
        return PresentedModule::free(g, 1);
    }
    let monomials = crate::gmodule::index_combinations(m, a);
    let mono_index = |s: &[usize]| monomials.iter().position(|t| t == s).unwrap();
    let tails = crate::gmodule::index_combinations(m, a - 1);
    let mut rel_rows: Vec<Vec<QGrElt>> = Vec::new();
    for r in 0..p.relations.rows() {
        for tail in &tails {
            let mut row = vec![QGrElt::zero(g); monomials.len()];
            for i in 0..m {
                let c = &p.relations[(r, i)];
                if c.is_zero() || tail.contains(&i) {
                    continue;
                }
                // sign and sorted monomial of i ∧ tail
                let mut s = tail.clone();
                let pos = s.iter().position(|&t| t > i).unwrap_or(s.len());
                s.insert(pos, i);
                let sign = if pos % 2 == 0 { 1 } else { -1 };
                let idx = mono_index(&s);
                let term = if sign > 0 { c.clone() } else { c.neg() };
                row[idx] = row[idx].add(&term);
            }
            if row.iter().any(|e| !e.is_zero()) {
                rel_rows.push(row);
            }
        }
    }
    let relations = if rel_rows.is_empty() {
        QGrMat::zeros(g, 0, monomials.len())
    } else {
        QGrMat::from_fn(g, rel_rows.len(), monomials.len(), |r, c| rel_rows[r][c].clone())
    };
    PresentedModule::new(g.clone(), monomials.len(), relations)
}

/// The matrix of `∧^a f` on wedge-monomial bases for a `Z[G]`-matrix `f`.
pub fn wedge_map(f: &QGrMat, a: usize) -> QGrMat {
    let g = &f.group;
    let rows = crate::gmodule::index_combinations(f.rows(), a);
    let cols = crate::gmodule::index_combinations(f.cols(), a);
    GrMat::from_fn(g, rows.len(), cols.len(), |r, c| {
        f.submatrix(&rows[r], &cols[c]).det()
    })
}

fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let mut r = 1usize;
    for i in 0..k {
        r = r * (n - i) / (i + 1);
    }
    r
}

fn std_col(k: usize, i: usize) -> Vec<BigRational> {
    let mut v = vec![BigRational::zero(); k];
    v[i] = BigRational::one();
    v
}

fn std_col_f<F: Field>(k: usize, i: usize) -> Vec<F> {
    let mut v = vec![F::zero(); k];
    v[i] = F::one();
    v
}

fn int_col(m: &IntMat, c: usize) -> Vec<BigRational> {
    (0..m.rows())
        .map(|r| BigRational::from_integer(m[(r, c)].clone()))
        .collect()
}

fn monomial_vectors(k: usize, mono: &[usize]) -> Vec<Vec<BigRational>> {
    mono.iter().map(|&i| std_col(k, i)).collect()
}

/// Laplace expansion of `v_1 ∧ ... ∧ v_a` into the monomial basis: the
/// coefficient at monomial `S` is the minor `det(rows S of [v_1 .. v_a])`.
fn expand_f<F: Field>(monomials: &[Vec<usize>], vectors: &[Vec<F>]) -> Vec<F> {
    let a = vectors.len();
    monomials
        .iter()
        .map(|s| {
            let m = QMat::from_fn(a, a, |r, c| vectors[c][s[r]].clone());
            m.det()
        })
        .collect()
}

fn expand_q(monomials: &[Vec<usize>], vectors: &[Vec<BigRational>]) -> Vec<BigRational> {
    expand_f(monomials, vectors)
}

fn apply_q_mat<F: Field + From<BigRational>>(m: &QMat<BigRational>, v: &[F]) -> Vec<F> {
    assert_eq!(m.cols(), v.len());
    (0..m.rows())
        .map(|r| {
            let mut acc = F::zero();
            for c in 0..m.cols() {
                if !m[(r, c)].is_zero() && !v[c].is_zero() {
                    let coef: F = F::from(m[(r, c)].clone());
                    acc = acc.add_ref(&coef.mul_ref(&v[c]));
                }
            }
            acc
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::FiniteAbelianGroup;

    fn e(g: &GroupRef, c: Vec<i64>) -> QGrElt {
        QGrElt::from_int_coeffs(g, c)
    }

    #[test]
    fn wedge_of_free_rank2_trivial_group() {
        // G = 1, M = Z^2: (u+v) ∧ (u-v) = -2 u∧v.
        let g = FiniteAbelianGroup::trivial();
        let m = GLattice::free(&g, 2);
        let w = WedgeModel::new(&m, 2);
        assert_eq!(w.dim, 1);
        let q = |x: i64| BigRational::from_integer(BigInt::from(x));
        let val = w.wedge_of(&[vec![q(1), q(1)], vec![q(1), q(-1)]]);
        assert_eq!(val, vec![q(-2)]);
    }

    #[test]
    fn wedge_model_of_regular_rank1_is_zero_in_degree_2() {
        // ∧^2_{Z[G]} Z[G] = 0.
        let g = FiniteAbelianGroup::cyclic(2);
        let m = GLattice::free(&g, 1);
        let w = WedgeModel::new(&m, 2);
        assert_eq!(w.dim, 0);
    }

    #[test]
    fn wedge_model_dims_regular_rank2() {
        // ∧^2_{Z[G]} Z[G]^2 is free of rank 1: dim over Q is |G|.
        let g = FiniteAbelianGroup::cyclic(2);
        let m = GLattice::free(&g, 2);
        let w = WedgeModel::new(&m, 2);
        assert_eq!(w.dim, 2);
        // image lattice should be everything: ∧ of free is free on monomials
        let img = w.image_lattice();
        let bid = w.bidual_lattice();
        assert_eq!(img, bid);
    }

    #[test]
    fn bidual_of_rank1_fixed_lattice() {
        // G = Z/2, M = Z(1+g) ⊂ Z[G]: ∩^1 M = M (first power biduals of
        // lattices are the lattice itself).
        let g = FiniteAbelianGroup::cyclic(2);
        let m = GLattice::new(g.clone(), 1, vec![IntMat::identity(1)]).unwrap();
        let w = WedgeModel::new(&m, 1);
        assert_eq!(w.dim, 1);
        let bid = w.bidual_lattice();
        assert_eq!(bid, ZLattice::standard(1));
        assert_eq!(w.image_lattice(), bid);
    }

    #[test]
    fn a_zero_model_is_group_ring() {
        let g = FiniteAbelianGroup::cyclic(3);
        let m = GLattice::free(&g, 1);
        let w = WedgeModel::new(&m, 0);
        assert_eq!(w.dim, 3);
        assert_eq!(w.bidual_lattice(), ZLattice::standard(3));
        let empty: [Vec<BigRational>; 0] = [];
        let one = w.wedge_of(&empty);
        assert_eq!(one[0], BigRational::one());
    }

    #[test]
    fn exterior_power_presented_ranks() {
        let g = FiniteAbelianGroup::cyclic(2);
        let free2 = PresentedModule::free(&g, 2);
        let w2 = exterior_power_presented(&free2, 2);
        assert_eq!(w2.generators, 1);
        assert_eq!(w2.relations.rows(), 0);
        let w1 = exterior_power_presented(&free2, 1);
        assert_eq!(w1.generators, 2);
        let w0 = exterior_power_presented(&free2, 0);
        assert_eq!(w0.generators, 1);
    }

    #[test]
    fn wedge_map_of_diagonal() {
        let g = FiniteAbelianGroup::trivial();
        let f = QGrMat::from_fn(&g, 2, 2, |r, c| {
            if r == c {
                e(&g, vec![r as i64 + 2])
            } else {
                e(&g, vec![0])
            }
        });
        let w = wedge_map(&f, 2);
        assert_eq!(w.rows(), 1);
        assert_eq!(w[(0, 0)], e(&g, vec![6]));
    }

    #[test]
    fn evaluation_lattice_rank1() {
        // G = Z/2, M = Z(1+g), eta = (1/2)(1+g)-class: I(eta) = Z(1+g) since
        // the transported functional sends (1+g) to 1+g.
        let g = FiniteAbelianGroup::cyclic(2);
        let m = GLattice::new(g.clone(), 1, vec![IntMat::identity(1)]).unwrap();
        let w = WedgeModel::new(&m, 1);
        let half = BigRational::new(BigInt::one(), BigInt::from(2));
        let ideal = w.evaluation_lattice(&[half]);
        let expect = IdealLattice::from_generators(
            g.clone(),
            &[e(&g, vec![1, 1]).scale(&BigRational::new(BigInt::one(), BigInt::from(2)))],
        );
        assert_eq!(ideal, expect);
    }
}
