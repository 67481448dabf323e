//! Exact linear algebra over the integers and over exact fields.
//!
//! Everything in this crate is computed with arbitrary-precision integers or
//! rationals; there is no floating point anywhere. The main pieces are
//!
//! * [`IntMat`], a dense matrix of [`num_bigint::BigInt`] entries,
//! * Hermite and Smith normal forms with unimodular transforms,
//! * [`ZLattice`], finitely generated subgroups of `(1/D)Z^n` in canonical
//!   Hermite form, with sum / intersection / index / dual arithmetic,
//! * [`QMat`], a dense matrix over any [`Field`], used for rational and
//!   cyclotomic elimination.

pub mod field;
pub mod int_mat;
pub mod normal_form;
pub mod q_mat;
pub mod z_lattice;

pub use field::Field;
pub use int_mat::IntMat;
pub use normal_form::{hnf, left_kernel, right_kernel, snf, HnfResult, SnfResult};
pub use q_mat::QMat;
pub use z_lattice::{LatticeError, ZLattice};

use num_bigint::BigInt;
use num_rational::BigRational;

/// Column vector over the integers.
pub type ZVec = Vec<BigInt>;
/// Column vector over the rationals.
pub type QVec = Vec<BigRational>;
