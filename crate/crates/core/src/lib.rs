//! Exact integral lattices, discriminant forms, and the genus-bound engine
//! for cuspidal real curves on the ellipsoid.
//!
//! All arithmetic is exact: lattice data uses arbitrary-precision integers
//! and rationals, the bound engine uses `i64` rationals on degrees up to
//! [`bounds::MAX_DEGREE`].

pub mod abelian;
pub mod bounds;
pub mod discriminant;
pub mod error;
pub mod lattice;
pub mod matrix;
pub mod par;
pub mod verify;

pub use abelian::{cokernel, integer_kernel, is_prime, smith_normal_form, FiniteAbelianGroup, SnfResult};
pub use bounds::{
    alexander_bound, alexander_shape, budget, classify, covering_numerics, curve_data,
    derived_bound, even_case_slack, g0, g1, odd_case_slack, rank_l_minus, AlexanderShape,
    CurveData, EigenlatticeBudget, Parity, Rational, Source, Status, Verdict,
};
pub use discriminant::{
    discr, discriminant_group, extend_by_kernel, glue_primitive, kernel_of_extension,
    primitive_hull, rank_perp_lower_bound, DiscSubgroup, DiscriminantForm, Extension,
    PrimitiveHull, QmodZ,
};
pub use error::{Error, Result};
pub use lattice::{Lattice, LatticeRecord, Signature, Standard};
pub use matrix::IntMatrix;
pub use par::Execution;
