//! Exact representation-theoretic computations for monoids of monotone transformations.
//!
//! The crate builds the monoids `Op_n`, `OD_n` and `COD_n`, their Green structure,
//! Schützenberger modules, monoid algebras in a quiver presentation, and the
//! decomposition of the `COD_n` algebra as a product of two `Op_n` algebras.

pub mod algebra;
pub mod covering;
pub mod error;
pub mod field;
pub mod green;
pub mod monoid;
pub mod pipeline;
pub mod report;
pub mod schutz;
pub mod skeleton;
pub mod sparse;
pub mod transform;

pub use error::{Error, Result};
pub use field::{FMatrix, PrimeField, DEFAULT_PRIME};
pub use green::{eggbox, sandwich_matrix, sandwich_right_invertible, GreenData, SandwichMatrix};
pub use monoid::{Limits, MonoidKind, MonoidTable};
pub use report::{Check, Report};
pub use transform::{CanonicalLabel, Sign, Subset, Transformation};
