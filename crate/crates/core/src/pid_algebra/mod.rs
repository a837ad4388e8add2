//! Finitely generated modules over Z, Q and F_p, the exact integer-matrix
//! kernel, and the homological functors built on them.

mod complex;
mod functors;
mod matrix;
mod module;
mod text;

pub use complex::{homology_of_complex, homology_with_counts};
pub use functors::{change_coefficients, cohomology_uct, kunneth};
pub use matrix::{rank, smith_normal_form, IntMatrix, PidScalar};
pub use module::{FGModule, GradedModule, Prime, Ring};

/// `normalize_module`: canonical module from a rank and unordered divisors.
pub fn normalize_module(ring: Ring, rank: i64, divisors: &[i64]) -> crate::Result<FGModule> {
    FGModule::normalize(ring, rank, divisors)
}

/// Alternating sum of free ranks.
pub fn euler_characteristic(x: &GradedModule) -> i64 {
    x.euler_characteristic()
}
