//! Strictly admissible complexes as square group-ring matrices, their
//! three-term relatives, cohomology, duality, cones, reduction to strict
//! shape and coinvariant descent.

use crate::cyclotomic::CycScalar;
use crate::gmodule::{GLattice, PresentedModule, TorsionDecomp};
use crate::group::{quotient_group, GroupRef, Subgroup};
use crate::group_ring::{
    idempotent_from_rank_classes, Character, GrElt, QGrElt, QGrMat, RankIdempotents,
};
use exact_linalg::{right_kernel, IntMat, QMat, ZLattice};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::fmt;

#[derive(Clone, Debug)]
pub enum ComplexError {
    NotAdmissible(String),
    Precondition(String),
    /// Global integral computation failed; retry with p-power denominators.
    PLocalFallback(String),
}

impl fmt::Display for ComplexError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ComplexError::NotAdmissible(s) => write!(f, "complex is not admissible: {}", s),
            ComplexError::Precondition(s) => write!(f, "{}", s),
            ComplexError::PLocalFallback(s) => {
                write!(f, "{} (fall back to p-local mode with --prime)", s)
            }
        }
    }
}

impl std::error::Error for ComplexError {}

/// A strictly admissible complex `P -> P` in degrees 1 and 2, represented by
/// a square matrix over `Z[G]` with `psi(b_j) = sum_i psi_ij b_i`.
#[derive(Clone)]
pub struct StrictComplex {
    pub group: GroupRef,
    pub d: usize,
    pub psi: QGrMat,
}

impl StrictComplex {
    pub fn new(group: GroupRef, psi: QGrMat) -> Result<Self, ComplexError> {
        if psi.rows() != psi.cols() {
            return Err(ComplexError::NotAdmissible(
                "strict complexes require a square matrix".into(),
            ));
        }
        if !psi.is_integral() {
            return Err(ComplexError::NotAdmissible(
                "differential must have Z[G] entries".into(),
            ));
        }
        Ok(StrictComplex {
            group,
            d: psi.rows(),
            psi,
        })
    }

    /// `RHom(C, Z[G][-3])`: the transposed matrix on dual bases.
    pub fn dual(&self) -> StrictComplex {
        StrictComplex {
            group: self.group.clone(),
            d: self.d,
            psi: self.psi.transpose(),
        }
    }

    pub fn cohomology(&self) -> Cohomology {
        let g = &self.group;
        let big = self.psi.restrict_scalars();
        let h1 = KernelData::from_kernel_of(g, &big, self.d);
        let h2 = PresentedModule::new(g.clone(), self.d, self.psi.transpose());
        let h2_decomp = h2.torsion_decomp();
        let chars = Character::all(g);
        let ranks: Vec<usize> = chars
            .iter()
            .map(|chi| {
                let m = self.psi.apply_character(chi);
                self.d - m.rank()
            })
            .collect();
        Cohomology {
            group: g.clone(),
            h1,
            h2,
            h2_decomp,
            h3: None,
            ranks_h2: ranks,
        }
    }
}

impl fmt::Debug for StrictComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "StrictComplex(d = {} over {:?})", self.d, self.group)
    }
}

/// A complex of free modules `P1 -> P2 -> P3` with composite zero, starting
/// in degree `start_degree` (1 for the admissible shape acyclic outside
/// degrees 1..3, 0 for the degree-0 shape used by the finite-case identity).
#[derive(Clone)]
pub struct ThreeTermComplex {
    pub group: GroupRef,
    pub start_degree: usize,
    pub d1: QGrMat,
    pub d2: QGrMat,
}

impl ThreeTermComplex {
    pub fn new(
        group: GroupRef,
        start_degree: usize,
        d1: QGrMat,
        d2: QGrMat,
    ) -> Result<Self, ComplexError> {
        if start_degree > 1 {
            return Err(ComplexError::NotAdmissible(
                "start degree must be 0 or 1".into(),
            ));
        }
        if d2.cols() != d1.rows() {
            return Err(ComplexError::NotAdmissible(
                "differential shapes do not compose".into(),
            ));
        }
        if !d1.is_integral() || !d2.is_integral() {
            return Err(ComplexError::NotAdmissible(
                "differentials must have Z[G] entries".into(),
            ));
        }
        if !d2.mul(&d1).is_zero() {
            return Err(ComplexError::NotAdmissible("d2 . d1 != 0".into()));
        }
        Ok(ThreeTermComplex {
            group,
            start_degree,
            d1,
            d2,
        })
    }

    pub fn ranks(&self) -> (usize, usize, usize) {
        (self.d1.cols(), self.d1.rows(), self.d2.rows())
    }

    pub fn euler_characteristic_zero(&self) -> bool {
        let (s1, s2, s3) = self.ranks();
        s1 + s3 == s2
    }

    /// Cohomology in the three possible degrees. For a 0-started complex the
    /// kernel of `d1` must vanish (acyclicity in degree 0).
    pub fn cohomology(&self) -> Result<ThreeTermCohomology, ComplexError> {
        let g = &self.group;
        let big1 = self.d1.restrict_scalars();
        let big2 = self.d2.restrict_scalars();
        let (s1, s2, _s3) = self.ranks();
        let low = KernelData::from_kernel_of(g, &big1, s1);
        if self.start_degree == 0 && low.rank() > 0 {
            return Err(ComplexError::NotAdmissible(
                "0-started complex has cohomology in degree 0".into(),
            ));
        }
        // middle cohomology ker(d2)/im(d1), presented on a kernel basis
        let k2 = KernelData::from_kernel_of(g, &big2, s2);
        let t = k2.rank();
        let n = g.order() as usize;
        let im1 = column_lattice(&big1);
        let mid = if t == 0 {
            PresentedModule::free(g, 0)
        } else {
            // relations: Z[G]-combinations of kernel generators landing in im(d1)
            let mut ev = IntMat::zeros(s2 * n, t * n);
            let free = GLattice::free(g, s2);
            for i in 0..t {
                let ki = k2.rows.row_vec(i);
                for h in g.elements() {
                    let hk = free.action_of(h).mul_vec(&ki);
                    for (r, v) in hk.iter().enumerate() {
                        ev[(r, i * n + h)] = v.clone();
                    }
                }
            }
            let rel = im1.preimage(&ev).expect("dimensions agree");
            let rel_rows: Vec<Vec<QGrElt>> = rel
                .q_basis_rows()
                .into_iter()
                .map(|row| {
                    let ints: Vec<BigRational> = row;
                    QGrMat::vec_as_column(g, &ints)
                })
                .collect();
            let relations = if rel_rows.is_empty() {
                QGrMat::zeros(g, 0, t)
            } else {
                QGrMat::from_fn(g, rel_rows.len(), t, |r, c| rel_rows[r][c].clone())
            };
            PresentedModule::new(g.clone(), t, relations)
        };
        let high = PresentedModule::new(g.clone(), self.d2.rows(), self.d2.transpose());
        Ok(ThreeTermCohomology {
            group: g.clone(),
            low,
            mid,
            mid_kernel: k2,
            high,
        })
    }

    /// Invariant factors of the cohomology of highest degree; `None` when it
    /// is infinite.
    pub fn h3_order(&self) -> Option<BigInt> {
        let big2 = self.d2.restrict_scalars();
        let dim = big2.rows();
        let im = column_lattice(&big2);
        if im.rank() < dim {
            return None;
        }
        ZLattice::standard(dim).index_of(&im).ok()
    }
}

impl fmt::Debug for ThreeTermComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (s1, s2, s3) = self.ranks();
        write!(
            f,
            "ThreeTermComplex(start {}, ranks {}-{}-{} over {:?})",
            self.start_degree, s1, s2, s3, self.group
        )
    }
}

/// A saturated kernel lattice inside a free module `Z[G]^d`, with the induced
/// G-action on its basis coordinates.
#[derive(Clone)]
pub struct KernelData {
    pub group: GroupRef,
    /// `rank x (d |G|)` Hermite basis of the kernel.
    pub rows: IntMat,
    pub ambient_blocks: usize,
    pub glat: GLattice,
}

impl KernelData {
    pub fn from_kernel_of(group: &GroupRef, big: &IntMat, ambient_blocks: usize) -> KernelData {
        let rows = right_kernel(big);
        Self::from_rows(group, rows, ambient_blocks)
    }

    pub fn from_rows(group: &GroupRef, rows: IntMat, ambient_blocks: usize) -> KernelData {
        let k = rows.rows();
        let free = GLattice::free(group, ambient_blocks);
        let rows_t = QMat::from_int(&rows.transpose());
        let mut action = Vec::new();
        for i in 0..group.num_factors() {
            let bg = &free.action[i];
            let mut a = IntMat::zeros(k, k);
            for j in 0..k {
                let img = bg.mul_vec(&rows.row_vec(j));
                let imgq: Vec<BigRational> = img
                    .iter()
                    .map(|x| BigRational::from_integer(x.clone()))
                    .collect();
                let sol = rows_t
                    .solve(&imgq)
                    .expect("kernel lattice is G-stable");
                for (r, c) in sol.iter().enumerate() {
                    assert!(c.is_integer(), "kernel lattice is saturated");
                    a[(r, j)] = c.to_integer();
                }
            }
            action.push(a);
        }
        let glat =
            GLattice::new(group.clone(), k, action).expect("kernel action is a group action");
        KernelData {
            group: group.clone(),
            rows,
            ambient_blocks,
            glat,
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.rows()
    }

    /// Embed kernel coordinates into the flat ambient coordinates.
    pub fn embed(&self, coords: &[BigRational]) -> Vec<BigRational> {
        assert_eq!(coords.len(), self.rank());
        let dim = self.rows.cols();
        let mut out = vec![BigRational::zero(); dim];
        for (i, c) in coords.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for j in 0..dim {
                let add = c * BigRational::from_integer(self.rows[(i, j)].clone());
                out[j] += add;
            }
        }
        out
    }

    /// Coordinates of a flat ambient vector lying in the rational span.
    pub fn coords_of(&self, flat: &[BigRational]) -> Option<Vec<BigRational>> {
        let rows_t = QMat::from_int(&self.rows.transpose());
        let sol = rows_t.solve(flat)?;
        // verify exactly
        if self.embed(&sol) == flat {
            Some(sol)
        } else {
            None
        }
    }

    pub fn lattice(&self) -> ZLattice {
        ZLattice::from_int_rows(&self.rows, &BigInt::one())
    }
}

/// Cohomology of a strict complex.
pub struct Cohomology {
    pub group: GroupRef,
    pub h1: KernelData,
    pub h2: PresentedModule,
    pub h2_decomp: TorsionDecomp,
    pub h3: Option<PresentedModule>,
    /// Character ranks of `H^2` (equivalently of `H^1`).
    pub ranks_h2: Vec<usize>,
}

impl Cohomology {
    pub fn idempotents(&self, a: usize) -> RankIdempotents {
        idempotent_from_rank_classes(&self.group, &self.ranks_h2, a)
            .expect("matrix ranks are Galois stable")
    }

    /// Rank of `H^1` at each character via trace inner products.
    pub fn h1_char_multiplicities(&self) -> Vec<usize> {
        self.h1.glat.char_multiplicities()
    }

    /// Invariant factors of the torsion of `H^2`.
    pub fn h2_invariants(&self) -> Vec<BigInt> {
        self.h2_decomp.invariants.clone()
    }
}

/// Cohomology of a three-term complex; degree labels depend on the start
/// degree (low = first possibly-nonzero degree).
pub struct ThreeTermCohomology {
    pub group: GroupRef,
    pub low: KernelData,
    pub mid: PresentedModule,
    /// Kernel of the second differential; the presentation `mid` lives on its
    /// basis vectors.
    pub mid_kernel: KernelData,
    pub high: PresentedModule,
}

/// The lattice spanned by the columns of an integer matrix.
pub fn column_lattice(m: &IntMat) -> ZLattice {
    ZLattice::from_int_rows(&m.transpose(), &BigInt::one())
}

/// Mapping cone of `theta : P[-1] ⊕ P[-2] -> C` for a strict complex `C` and
/// a free module `P` of rank `p_rank`, with the sign convention
/// `d(b, a) = (d_B b + f a, -d_A a)`. `theta1` maps into `H^1(C)` (columns =
/// kernel-basis coordinates), `theta2` into `H^2(C)` (columns = generator
/// coordinates). The result is a 0-started three-term complex.
pub fn cone_with_projective(
    c: &StrictComplex,
    p_rank: usize,
    theta1: &IntMat,
    theta2: &QGrMat,
    coh: &Cohomology,
) -> Result<ThreeTermComplex, ComplexError> {
    let g = &c.group;
    let n = g.order() as usize;
    assert_eq!(theta1.cols(), p_rank);
    assert_eq!(theta1.rows(), coh.h1.rank());
    assert_eq!(theta2.cols(), p_rank);
    assert_eq!(theta2.rows(), c.d);
    // theta1 must be injective with torsion-free cokernel, as a map of
    // Z[G]-modules; check on the restricted-scalars matrix whose columns are
    // the kernel coordinates of h * theta1(e_j).
    if p_rank > 0 {
        let k = coh.h1.rank();
        let mut t = IntMat::zeros(k, p_rank * n);
        for j in 0..p_rank {
            let col: Vec<BigRational> = (0..k)
                .map(|r| BigRational::from_integer(theta1[(r, j)].clone()))
                .collect();
            for h in g.elements() {
                let img = coh.h1.glat.action_of(h).mul_vec(
                    &col.iter().map(|x| x.to_integer()).collect::<Vec<_>>(),
                );
                for (r, v) in img.iter().enumerate() {
                    t[(r, j * n + h)] = v.clone();
                }
            }
        }
        if right_kernel(&t).rows() > 0 {
            return Err(ComplexError::Precondition(
                "theta1 is not injective".into(),
            ));
        }
        let s = exact_linalg::snf(&t);
        if s.invariants().iter().any(|d| !d.is_one()) {
            return Err(ComplexError::Precondition(
                "cok(theta1) has torsion".into(),
            ));
        }
    }
    // chain-level theta1: P -> P^1 through the kernel embedding
    let mut d1_cols: Vec<Vec<QGrElt>> = Vec::new();
    for j in 0..p_rank {
        let coords: Vec<BigRational> = (0..coh.h1.rank())
            .map(|r| BigRational::from_integer(theta1[(r, j)].clone()))
            .collect();
        let flat = coh.h1.embed(&coords);
        let mut col = QGrMat::vec_as_column(g, &flat);
        // extend with the zero P-block
        col.extend((0..p_rank).map(|_| QGrElt::zero(g)));
        d1_cols.push(col);
    }
    let d1 = QGrMat::from_fn(g, c.d + p_rank, p_rank, |r, cidx| d1_cols[cidx][r].clone());
    // d2 = [psi | theta2-lift]: for a strict complex the generators of H^2
    // are the standard basis classes, so the lift is theta2 itself.
    let d2 = QGrMat::from_fn(g, c.d, c.d + p_rank, |r, cidx| {
        if cidx < c.d {
            c.psi[(r, cidx)].clone()
        } else {
            theta2[(r, cidx - c.d)].clone()
        }
    });
    ThreeTermComplex::new(g.clone(), 0, d1, d2)
}

/// Output of [`reduce_to_strict`].
pub struct Reduction {
    pub x: QGrElt,
    pub complex: StrictComplex,
    /// Chosen column subset of `d2` and the multiple of `|H^3|` used.
    pub minor_cols: Vec<usize>,
    pub n_multiple: BigInt,
    /// `H^1` agreed as embedded lattices with matching actions.
    pub h1_equal: bool,
    /// Invariants of `H^2(C_x) / H^2(C)`.
    pub quotient_invariants: Vec<BigInt>,
    /// The quotient is annihilated by `x`.
    pub quotient_annihilated: bool,
}

/// Reduce an admissible three-term complex with finite `H^3` to a strict
/// complex: pick an `s3 x s3` column minor `M` of `d2` and a multiple `n` of
/// `|H^3|`, set `phi(x_j) = b_j + c_j` with `d2 b_j` the j-th minor column
/// and `d2 c_j = n x_j`, so `d2 . phi = M + nI` is injective; then
/// `C_x = [P^1 ⊕ P^3 -> P^2]` with `x = det(M + nI)`.
pub fn reduce_to_strict(c: &ThreeTermComplex) -> Result<Reduction, ComplexError> {
    let g = &c.group;
    let n_ord = g.order() as usize;
    let (s1, s2, s3) = c.ranks();
    if c.start_degree != 1 {
        return Err(ComplexError::Precondition(
            "reduction expects a complex in degrees 1..3".into(),
        ));
    }
    if s2 < s3 {
        return Err(ComplexError::Precondition("rank of P^2 below rank of P^3".into()));
    }
    if s1 + s3 != s2 {
        return Err(ComplexError::Precondition(
            "Euler characteristic must vanish for a square strict output".into(),
        ));
    }
    let Some(h3_order) = c.h3_order() else {
        return Err(ComplexError::PLocalFallback(
            "H^3 is infinite; global reduction unavailable".into(),
        ));
    };
    let h3_order = if h3_order.is_zero() {
        BigInt::one()
    } else {
        h3_order
    };
    let big2 = c.d2.restrict_scalars();
    let chars = Character::all(g);
    for cols in crate::gmodule::index_combinations(s2, s3) {
        'next_n: for mult in 1..=24u32 {
            let n_mul = &h3_order * BigInt::from(mult);
            // minor block M on the chosen columns
            let m_block = c.d2.submatrix(&(0..s3).collect::<Vec<_>>(), &cols);
            // d2 ∘ phi = M + n I must be invertible at every character
            let mut dphi = m_block.clone();
            for i in 0..s3 {
                let shift = GrElt::from_coeffs(
                    g,
                    (0..n_ord)
                        .map(|h| {
                            if h == g.identity() {
                                BigRational::from_integer(n_mul.clone())
                            } else {
                                BigRational::zero()
                            }
                        })
                        .collect(),
                );
                dphi[(i, i)] = dphi[(i, i)].add(&shift);
            }
            let det = dphi.det();
            let det_cyc = det.to_cyc();
            for chi in &chars {
                if chi.apply(&det_cyc).is_zero() {
                    continue 'next_n;
                }
            }
            // c_j: solve d2 c = n * x_j over Z
            let mut phi_cols: Vec<Vec<QGrElt>> = Vec::new();
            for (j, &bcol) in cols.iter().enumerate() {
                let mut rhs = vec![BigInt::zero(); s3 * n_ord];
                rhs[j * n_ord + g.identity()] = n_mul.clone();
                let Some(sol) = crate::gmodule::solve_integer_system(&big2, &rhs) else {
                    continue 'next_n;
                };
                let solq: Vec<BigRational> =
                    sol.iter().map(|v| BigRational::from_integer(v.clone())).collect();
                let mut col = QGrMat::vec_as_column(g, &solq);
                // add b_j = standard basis vector of the chosen column
                col[bcol] = col[bcol].add(&QGrElt::one(g));
                phi_cols.push(col);
            }
            let phi = QGrMat::from_fn(g, s2, s3, |r, j| phi_cols[j][r].clone());
            // verify d2 ∘ phi = M + n I
            let composite = c.d2.mul(&phi);
            if composite != dphi {
                continue 'next_n;
            }
            let psi_x = c.d1.augment(&phi);
            let strict = StrictComplex::new(g.clone(), psi_x)?;
            // (i) H^1 comparison: ker(psi_x) must equal ker(d1) ⊕ 0.
            let coh_c = c.cohomology()?;
            let kx = right_kernel(&strict.psi.restrict_scalars());
            let mut extended = IntMat::zeros(coh_c.low.rank(), (s1 + s3) * n_ord);
            for r in 0..coh_c.low.rank() {
                for cidx in 0..s1 * n_ord {
                    extended[(r, cidx)] = coh_c.low.rows[(r, cidx)].clone();
                }
            }
            let h1_equal = ZLattice::from_int_rows(&kx, &BigInt::one())
                == ZLattice::from_int_rows(&extended, &BigInt::one());
            // (ii) H^2(C) -> H^2(C_x): quotient invariants of
            // Z^(s2|G|) / (ker d2 + im psi_x) relative to Z^(s2|G|) / im psi_x.
            let im_x = column_lattice(&strict.psi.restrict_scalars());
            let sub = im_x
                .sum(&coh_c.mid_kernel.lattice())
                .expect("same ambient");
            let full = ZLattice::standard(s2 * n_ord);
            let quotient_invariants = if sub.rank() == s2 * n_ord {
                full.quotient_invariants(&sub).expect("finite quotient")
            } else {
                return Err(ComplexError::PLocalFallback(
                    "H^2 quotient is infinite".into(),
                ));
            };
            // annihilation: x * e_i lies in ker d2 + im psi_x for every i
            let mut quotient_annihilated = true;
            for i in 0..s2 {
                let mut vec = vec![QGrElt::zero(g); s2];
                vec[i] = det.clone();
                let flat = QGrMat::column_as_vec(&vec);
                if !sub.contains_vec(&flat) {
                    quotient_annihilated = false;
                }
            }
            return Ok(Reduction {
                x: det,
                complex: strict,
                minor_cols: cols.clone(),
                n_multiple: n_mul,
                h1_equal,
                quotient_invariants,
                quotient_annihilated,
            });
        }
    }
    Err(ComplexError::PLocalFallback(
        "no admissible (minor, n) pair within the search bound".into(),
    ))
}

/// Coinvariant data for `C_J = Z[G/J] ⊗ C`.
pub struct Coinvariants {
    pub quotient: crate::group::QuotientGroup,
    pub complex: StrictComplex,
    /// The bijection `P_J -> P^J` holds on the instance (checked): the
    /// `T_J`-images of a kernel basis of `psi_J` span the fixed points of
    /// `ker(psi)`.
    pub h1_comparison: bool,
    /// `H^2(C_J) = H^2(C)_J` holds on the instance (checked).
    pub h2_comparison: bool,
}

/// Reduce the coefficients of an element along the group projection.
pub fn project_elt(elt: &QGrElt, q: &crate::group::QuotientGroup) -> QGrElt {
    let mut out = QGrElt::zero(&q.group);
    for (g, c) in elt.coeffs.iter().enumerate() {
        if !c.is_zero() {
            let t = q.project[g];
            out.coeffs[t] = &out.coeffs[t] + c;
        }
    }
    out
}

pub fn project_matrix(m: &QGrMat, q: &crate::group::QuotientGroup) -> QGrMat {
    QGrMat::from_fn(&q.group, m.rows(), m.cols(), |r, c| project_elt(&m[(r, c)], q))
}

/// `T_J`-lift: a section of the coefficient projection composed with
/// multiplication by `sum_{j in J} j`.
pub fn tj_lift(elt: &QGrElt, group: &GroupRef, j: &Subgroup, q: &crate::group::QuotientGroup) -> QGrElt {
    // choose for each quotient element a representative in G
    let mut rep = vec![usize::MAX; q.group.order() as usize];
    for g in group.elements() {
        let t = q.project[g];
        if rep[t] == usize::MAX {
            rep[t] = g;
        }
    }
    let mut out = QGrElt::zero(group);
    for (t, c) in elt.coeffs.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        for &jj in j.elements() {
            let idx = group.mul(rep[t], jj);
            out.coeffs[idx] = &out.coeffs[idx] + c;
        }
    }
    out
}

pub fn coinvariants(
    c: &StrictComplex,
    j: &Subgroup,
) -> Result<Coinvariants, ComplexError> {
    let g = &c.group;
    if !j.is_subgroup_of(g) {
        return Err(ComplexError::Precondition("J is not a subgroup".into()));
    }
    let q = quotient_group(g, j);
    let psi_j = project_matrix(&c.psi, &q);
    let complex = StrictComplex::new(q.group.clone(), psi_j)?;
    // H^1 comparison: T_J-lifts of a kernel basis of psi_J span ker(psi)^J.
    let kj = right_kernel(&complex.psi.restrict_scalars());
    let mut lifted_rows: Vec<Vec<BigRational>> = Vec::new();
    for r in 0..kj.rows() {
        let coords: Vec<BigRational> = kj
            .row(r)
            .iter()
            .map(|x| BigRational::from_integer(x.clone()))
            .collect();
        let col = QGrMat::vec_as_column(&q.group, &coords);
        let lifted: Vec<QGrElt> = col.iter().map(|e| tj_lift(e, g, j, &q)).collect();
        lifted_rows.push(QGrMat::column_as_vec(&lifted));
    }
    let lifted_lattice = if lifted_rows.is_empty() {
        ZLattice::zero(c.d * g.order() as usize)
    } else {
        ZLattice::from_q_rows(&lifted_rows, c.d * g.order() as usize)
    };
    // fixed points of ker(psi): kernel of [psi; (1 - j_gen) for generators]
    let k = right_kernel(&c.psi.restrict_scalars());
    let fixed = fixed_point_sublattice(g, j, &k, c.d);
    let h1_comparison = lifted_lattice == fixed;
    // H^2 comparison: Z[G/J]^d / im(psi_J) vs H^2(C)_J presented by adding
    // the relations (1 - j) e_i; compare torsion invariants and rank.
    let h2_j = PresentedModule::new(q.group.clone(), complex.d, complex.psi.transpose());
    let mut extra_rows: Vec<Vec<QGrElt>> = Vec::new();
    for r in 0..c.psi.rows() {
        let row: Vec<QGrElt> = (0..c.d).map(|cc| c.psi[(cc, r)].clone()).collect();
        // note: relations of cok are columns of psi = rows of psi^T
        extra_rows.push(row);
    }
    for &jj in j.elements() {
        if jj == g.identity() {
            continue;
        }
        for i in 0..c.d {
            let mut row = vec![QGrElt::zero(g); c.d];
            row[i] = QGrElt::one(g).sub(&QGrElt::of_element(g, jj));
            extra_rows.push(row);
        }
    }
    let coinv_pres = PresentedModule::new(
        g.clone(),
        c.d,
        QGrMat::from_fn(g, extra_rows.len(), c.d, |r, cc| extra_rows[r][cc].clone()),
    );
    let ta = h2_j.torsion_decomp();
    let tb = coinv_pres.torsion_decomp();
    let h2_comparison = ta.invariants == tb.invariants && ta.tf.rank == tb.tf.rank;
    Ok(Coinvariants {
        quotient: q,
        complex,
        h1_comparison,
        h2_comparison,
    })
}

/// The sublattice of a kernel lattice fixed by every element of `J`.
fn fixed_point_sublattice(
    g: &GroupRef,
    j: &Subgroup,
    kernel_rows: &IntMat,
    blocks: usize,
) -> ZLattice {
    let lat = ZLattice::from_int_rows(kernel_rows, &BigInt::one());
    let free = GLattice::free(g, blocks);
    let mut cur = lat;
    for &jj in j.elements() {
        if jj == g.identity() {
            continue;
        }
        let a = free.action_of(jj);
        let m = QMat::from_fn(a.rows(), a.cols(), |r, c| {
            let mut v = BigRational::from_integer(a[(r, c)].clone());
            if r == c {
                v -= BigRational::one();
            }
            v
        });
        cur = crate::exterior::lattice_subspace_kernel(&cur, &m);
    }
    cur
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::FiniteAbelianGroup;

    fn e(g: &GroupRef, c: Vec<i64>) -> QGrElt {
        QGrElt::from_int_coeffs(g, c)
    }

    fn diag_complex(g: &GroupRef, entries: Vec<QGrElt>) -> StrictComplex {
        let d = entries.len();
        let psi = QGrMat::from_fn(g, d, d, |r, c| {
            if r == c {
                entries[r].clone()
            } else {
                QGrElt::zero(g)
            }
        });
        StrictComplex::new(g.clone(), psi).unwrap()
    }

    #[test]
    fn cohomology_of_diag_0_2() {
        let g = FiniteAbelianGroup::trivial();
        let c = diag_complex(&g, vec![e(&g, vec![0]), e(&g, vec![2])]);
        let coh = c.cohomology();
        assert_eq!(coh.h1.rank(), 1);
        assert_eq!(coh.h2_invariants(), vec![BigInt::from(2)]);
        assert_eq!(coh.h2_decomp.tf.rank, 1);
        assert_eq!(coh.ranks_h2, vec![1]);
        let ids = coh.idempotents(1);
        assert_eq!(ids.e_eq, e(&g, vec![1]));
    }

    #[test]
    fn cohomology_of_identity_is_trivial() {
        let g = FiniteAbelianGroup::cyclic(2);
        let c = diag_complex(&g, vec![e(&g, vec![1, 0])]);
        let coh = c.cohomology();
        assert_eq!(coh.h1.rank(), 0);
        assert!(coh.h2_invariants().is_empty());
        assert_eq!(coh.h2_decomp.tf.rank, 0);
        assert_eq!(coh.ranks_h2, vec![0, 0]);
        let ids = coh.idempotents(0);
        assert_eq!(ids.e_eq, e(&g, vec![1, 0]));
    }

    #[test]
    fn cohomology_of_one_minus_g() {
        let g = FiniteAbelianGroup::cyclic(2);
        let c = diag_complex(&g, vec![e(&g, vec![1, -1])]);
        let coh = c.cohomology();
        // H^1 = Z(1+g)
        assert_eq!(coh.h1.rank(), 1);
        assert_eq!(
            coh.h1.rows.row_vec(0),
            vec![BigInt::one(), BigInt::one()]
        );
        // ranks: 1 at the trivial character, 0 at the sign character
        assert_eq!(coh.ranks_h2, vec![1, 0]);
        let ids = coh.idempotents(1);
        let half = BigRational::new(BigInt::one(), BigInt::from(2));
        assert_eq!(ids.e_eq.coeffs, vec![half.clone(), half]);
        // semisimplicity: H^1 and H^2 have the same character ranks
        assert_eq!(coh.h1_char_multiplicities(), coh.ranks_h2);
    }

    #[test]
    fn dual_complex_cohomology() {
        let g = FiniteAbelianGroup::trivial();
        let c = diag_complex(&g, vec![e(&g, vec![0]), e(&g, vec![2])]);
        let d = c.dual();
        let coh = d.cohomology();
        assert_eq!(coh.h1.rank(), 1);
        assert_eq!(coh.h2_invariants(), vec![BigInt::from(2)]);
        // double dual equals the original matrix
        assert!(d.dual().psi == c.psi);
    }

    #[test]
    fn cone_of_iso_theta1() {
        // C with psi = diag(0, 2) over the trivial group; theta1 : Z -> H^1
        // an isomorphism, theta2 = 0. The cone has H^1 = Z (from the shifted
        // P) and H^2 = H^2(C).
        let g = FiniteAbelianGroup::trivial();
        let c = diag_complex(&g, vec![e(&g, vec![0]), e(&g, vec![2])]);
        let coh = c.cohomology();
        let theta1 = IntMat::identity(1);
        let theta2 = QGrMat::zeros(&g, 2, 1);
        let cone = cone_with_projective(&c, 1, &theta1, &theta2, &coh).unwrap();
        assert_eq!(cone.start_degree, 0);
        let (s1, s2, s3) = cone.ranks();
        assert_eq!((s1, s2, s3), (1, 3, 2));
        let coh_d = cone.cohomology().unwrap();
        // degree-1 cohomology (mid): free of rank 1
        let t = coh_d.mid.torsion_decomp();
        assert!(t.invariants.is_empty());
        assert_eq!(t.tf.rank, 1);
        // degree-2 cohomology (high): Z + Z/2
        let t2 = coh_d.high.torsion_decomp();
        assert_eq!(t2.invariants, vec![BigInt::from(2)]);
        assert_eq!(t2.tf.rank, 1);
    }

    #[test]
    fn cone_rejects_non_injective_theta1() {
        let g = FiniteAbelianGroup::trivial();
        let c = diag_complex(&g, vec![e(&g, vec![0]), e(&g, vec![2])]);
        let coh = c.cohomology();
        let theta1 = IntMat::zeros(1, 1);
        let theta2 = QGrMat::zeros(&g, 2, 1);
        assert!(cone_with_projective(&c, 1, &theta1, &theta2, &coh).is_err());
    }

    #[test]
    fn reduction_with_torsion_quotient() {
        // G = 1: 0 -> Z -> Z with d2 = [2]: H^3 = Z/2. The first admissible
        // pair is n = 2, so d2.phi = [4], x = 4 and H^2 grows by Z/2.
        let g = FiniteAbelianGroup::trivial();
        let d1 = QGrMat::zeros(&g, 1, 0);
        let d2 = QGrMat::from_fn(&g, 1, 1, |_, _| e(&g, vec![2]));
        let c = ThreeTermComplex::new(g.clone(), 1, d1, d2).unwrap();
        assert_eq!(c.h3_order(), Some(BigInt::from(2)));
        let red = reduce_to_strict(&c).unwrap();
        assert_eq!(red.x, e(&g, vec![4]));
        assert!(red.h1_equal);
        assert!(red.quotient_annihilated);
        assert_eq!(red.quotient_invariants, vec![BigInt::from(2)]);
        // the quotient order divides x
        let q: BigInt = red.quotient_invariants.iter().product();
        assert!((red.x.coeffs[0].to_integer() % q).is_zero());
    }

    #[test]
    fn reduction_balanced_with_free_h2() {
        // G = 1, ranks (1, 2, 1): d1 = (0,0)^T, d2 = [0 2].
        let g = FiniteAbelianGroup::trivial();
        let d1 = QGrMat::from_fn(&g, 2, 1, |_, _| e(&g, vec![0]));
        let d2 = QGrMat::from_fn(&g, 1, 2, |_, c| e(&g, vec![if c == 1 { 2 } else { 0 }]));
        let c = ThreeTermComplex::new(g.clone(), 1, d1, d2).unwrap();
        let red = reduce_to_strict(&c).unwrap();
        assert_eq!(red.x, e(&g, vec![2]));
        assert!(red.h1_equal);
        assert!(red.quotient_annihilated);
        assert!(red.quotient_invariants.is_empty());
        assert_eq!(red.complex.d, 2);
    }

    #[test]
    fn reduction_with_trivial_h3() {
        let g = FiniteAbelianGroup::trivial();
        // 0 -> Z -> Z with d2 unimodular: H^3 = 0, x = det-based unit shift
        let d1 = QGrMat::zeros(&g, 1, 0);
        let d2 = QGrMat::from_fn(&g, 1, 1, |_, _| e(&g, vec![1]));
        let c = ThreeTermComplex::new(g.clone(), 1, d1, d2).unwrap();
        let red = reduce_to_strict(&c).unwrap();
        assert!(red.h1_equal);
        assert!(red.quotient_annihilated);
    }

    #[test]
    fn coinvariants_z2() {
        let g = FiniteAbelianGroup::cyclic(2);
        let c = diag_complex(&g, vec![e(&g, vec![1, -1])]);
        let j = g.subgroup(&[1]);
        let co = coinvariants(&c, &j).unwrap();
        assert_eq!(co.quotient.group.order(), 1);
        // psi_J = 0 over Z
        assert!(co.complex.psi.is_zero());
        assert!(co.h1_comparison);
        assert!(co.h2_comparison);
        // trivial subgroup: C_J = C
        let triv = g.subgroup(&[]);
        let co2 = coinvariants(&c, &triv).unwrap();
        assert!(co2.complex.psi == c.psi);
        assert!(co2.h1_comparison && co2.h2_comparison);
    }

    #[test]
    fn coinvariants_of_acyclic() {
        let g = FiniteAbelianGroup::cyclic(4);
        let c = diag_complex(&g, vec![e(&g, vec![1, 0, 0, 0])]);
        let j = g.subgroup(&[2]);
        let co = coinvariants(&c, &j).unwrap();
        let coh = co.complex.cohomology();
        assert_eq!(coh.h1.rank(), 0);
        assert!(coh.h2_invariants().is_empty());
        assert_eq!(coh.h2_decomp.tf.rank, 0);
    }
}
