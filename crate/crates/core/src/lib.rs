pub mod catalog;
pub mod engine;
pub mod error;
pub mod oracle;
pub mod pid_algebra;
pub mod planner;

pub use catalog::{BouquetDesc, ManifoldDesc, ManifoldSpec};
pub use engine::{BubblingOp, BubblingScript, ReebProfile};
pub use error::{Error, Result};
pub use pid_algebra::{FGModule, GradedModule, IntMatrix, Ring};
pub use planner::{PlanReport, TargetSpec};

/// Arbitrary-precision integer matrix; the default for every homology computation.
pub type Matrix = pid_algebra::IntMatrix<num_bigint::BigInt>;
/// Fixed-width matrix for small inputs.
pub type SmallMatrix = pid_algebra::IntMatrix<i64>;
