//! Polynomials: sparse multivariate, homogeneous trivariate forms, binary
//! forms, dense univariate polynomials, resultants and root extraction.

mod homog;
mod local;
pub mod resultant;
pub mod roots;
mod sparse;
mod univariate;

use thiserror::Error;

use crate::coeff::CoeffError;

pub use homog::{HomogPoly, Point, XYZ};
pub use local::{translate_to_origin, AffineLocalPoly, Chart, UV};
pub use resultant::{discriminant_binary, resultant, resultant_binary, resultant_bivariate};
pub use roots::{binary_roots, roots};
pub use sparse::{monomials_of_degree, Poly};
pub use univariate::{BinaryForm, UniPoly};

#[derive(Debug, Clone, Error, PartialEq)]
pub enum PolyError {
    #[error("polynomial is not homogeneous: terms {first} and {second} have different degrees")]
    NotHomogeneous { first: String, second: String },
    #[error("degree {got} is too small (need at least {needed})")]
    DegreeTooSmall { needed: u32, got: u32 },
    #[error("squarefree part undefined: a factor exponent is divisible by the characteristic")]
    CharDividesExponent,
    #[error("operation undefined for the zero polynomial")]
    ZeroPolynomial,
    #[error("polynomial division is not exact")]
    NotDivisible,
    #[error("field has fewer than {needed} elements available for interpolation")]
    FieldTooSmall { needed: usize },
    #[error("{0}")]
    Unsupported(String),
    #[error(transparent)]
    Coeff(#[from] CoeffError),
}
