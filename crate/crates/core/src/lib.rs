//! Exact computer algebra for associative dialgebras.
//!
//! Free dialgebras are represented on the disequence basis `[a1 ... an]@m`.
//! Finitely presented dialgebras (and their associated associative
//! algebras) are handled through degree-truncated echelon forms, from which
//! the crate derives linear bases, growth series and Gelfand-Kirillov
//! dimension estimates.

pub mod cli;
pub mod dimonomial;
pub mod element;
pub mod error;
pub mod growth;
pub mod parse;
pub mod presentation;
pub mod scalar;

pub use dimonomial::{Alphabet, Disequence, Letter};
pub use element::{axiom_residuals, DiElement, Product};
pub use error::{Error, Result};
pub use parse::parse_element;
pub use scalar::{Scalar, ScalarKind};
