pub mod algebra;
pub mod enumerate;
pub mod error;
pub mod graph;
pub mod koszul;
pub mod linalg;
pub mod oracle;
pub mod scalar;

pub use error::{Error, Result};
pub use scalar::{FieldSpec, Fp, Gf3, Gf5, Gf7, Rational, Scalar};

pub type RationalMatrix = linalg::ExactMatrix<Rational>;
pub type RationalElement = algebra::GradedElement<Rational>;
pub type Gf5Element = algebra::GradedElement<Gf5>;
pub type RationalModule = koszul::SModule<Rational>;
