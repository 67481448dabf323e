//! Higher special elements for complexes of modules over integral group
//! rings of finite abelian groups.
//!
//! The crate provides exact arithmetic in `Z[G]`, `Q[G]` and `Q(zeta_e)[G]`,
//! finitely generated `Z[G]`-modules with Fitting ideals, exterior powers and
//! biduals, strictly admissible two-term complexes and their three-term
//! relatives, the determinant evaluation `theta_lambda` with characteristic
//! elements and higher special elements, subgroup-descent machinery (norm
//! operator, Bockstein maps and the Mazur-Rubin-Sano congruence checker),
//! independent brute-force oracles, and a CLI over a JSON instance format.
//!
//! All arithmetic is exact; there is no floating point anywhere.

pub mod complexes;
pub mod cyclotomic;
pub mod exterior;
pub mod group;
pub mod gmodule;
pub mod group_ring;

pub use cyclotomic::CycScalar;
pub use group::{FiniteAbelianGroup, GroupRef, Subgroup};
pub use group_ring::{GrElt, GrMat, QGrElt, QGrMat};
