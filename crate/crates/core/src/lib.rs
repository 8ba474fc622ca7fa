//! Exact computations with para-cyclic modules: axiom checks, the derived
//! complexes `C♮`, `C♮♮`, `C^λ`, `C_T`, the basic perturbation lemma in its
//! para-complex form, the comparison maps between the three models of cyclic
//! homology, and the periodicity operator.

pub mod builders;
pub mod comparison;
pub mod cyclic;
pub mod error;
pub mod graded;
pub mod homology;
pub mod linalg;
pub mod para_s;
pub mod perturbation;
pub mod report;
pub mod suites;
pub mod zoo;

pub use error::{ParacycError, Result};
pub use graded::{GradedMap, GradedModule};
pub use linalg::{Rational, RationalMatrix};
pub use report::ValidationReport;
