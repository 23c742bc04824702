pub mod canonical_form;
pub mod clifford;
pub mod error;
pub mod exterior;
pub mod groups;
pub mod hopf;
pub mod lcp;
pub mod linalg;
pub mod octonion;
pub mod scalar;
pub mod suite;
pub mod triality;

pub use error::{Error, Result};
pub use scalar::{Rational, Scalar};
