//! Exact computations with finite-dimensional algebras, Hopf algebras,
//! quantum torsors and cotorsors given by structure constants.

pub mod algebra;
pub mod compose;
pub mod cotorsor;
pub mod error;
pub mod gallery;
pub mod hopf;
pub mod linalg;
pub mod par;
pub mod report;
pub mod scalar;
pub mod side;
pub mod tensor;
pub mod tor;
pub mod torsor;

pub use error::{Error, Result};
pub use report::{Check, Outcome, Report, Witness};
pub use scalar::{FieldSpec, Scalar};
pub use tensor::{LinearMap, Tensor};
