//! Exact analysis of reduced plane projective curves.

pub mod analyze;
pub mod classify;
pub mod coeff;
pub mod construct;
pub mod graded;
pub mod linalg;
pub mod local;
pub mod parse;
pub mod poly;

use thiserror::Error;

/// Any error raised by the library.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error(transparent)]
    Parse(#[from] parse::ParseError),
    #[error(transparent)]
    Coeff(#[from] coeff::CoeffError),
    #[error(transparent)]
    Poly(#[from] poly::PolyError),
    #[error(transparent)]
    Local(#[from] local::LocalError),
    #[error(transparent)]
    Graded(#[from] graded::GradedError),
    #[error(transparent)]
    Classify(#[from] classify::ClassifyError),
    #[error(transparent)]
    Analyze(#[from] analyze::AnalyzeError),
    #[error(transparent)]
    Construct(#[from] construct::ConstructError),
    #[error(transparent)]
    Catalog(#[from] construct::CatalogError),
}

impl Error {
    /// Whether the error comes from malformed input rather than from the
    /// mathematics.
    pub fn is_input_error(&self) -> bool {
        use construct::ConstructError as C;
        match self {
            Error::Parse(_) | Error::Catalog(_) => true,
            Error::Coeff(e) => matches!(
                e,
                coeff::CoeffError::NotPrime(_) | coeff::CoeffError::BadModulus(_) | coeff::CoeffError::Parse(_)
            ),
            Error::Construct(e) => matches!(
                e,
                C::BadParams(_) | C::UnknownEntry(_) | C::Parse(_) | C::DegreeMismatch { .. }
            ),
            Error::Poly(poly::PolyError::NotHomogeneous { .. }) => true,
            _ => false,
        }
    }

    /// Short machine-readable name of the variant.
    pub fn kind(&self) -> String {
        let dbg = match self {
            Error::Parse(e) => format!("{e:?}"),
            Error::Coeff(e) => format!("{e:?}"),
            Error::Poly(e) => format!("{e:?}"),
            Error::Local(e) => format!("{e:?}"),
            Error::Graded(e) => format!("{e:?}"),
            Error::Classify(e) => format!("{e:?}"),
            Error::Analyze(e) => format!("{e:?}"),
            Error::Construct(e) => format!("{e:?}"),
            Error::Catalog(e) => format!("{e:?}"),
        };
        dbg.split(|c: char| !c.is_alphanumeric()).next().unwrap_or("").to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn error_kinds() {
        let e: Error = local::LocalError::NotIsolated { cap: 4 }.into();
        assert_eq!(e.kind(), "NotIsolated");
        assert!(!e.is_input_error());
        let p = parse::parse_homog("x+y^2", &coeff::Field::rationals()).unwrap_err();
        let e: Error = p.into();
        assert!(e.is_input_error());
        assert_eq!(e.kind(), "NotHomogeneous");
    }
}
