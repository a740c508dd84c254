//! Exact arithmetic on polynomial, Laurent and Weyl algebras and their
//! tensor products, with automorphism families, weight filtrations,
//! growth estimates, and certified computation of Aut-stable spans.

pub mod cli;
pub mod closure;
pub mod element;
pub mod expr;
pub mod family;
pub mod filtration;
pub mod growth;
pub mod linalg;
pub mod monomial;
pub mod morphism;
pub mod par;
pub mod scalar;
pub mod signature;

pub use element::{commutator, is_central, multiply, Degree, Element};
pub use expr::{format_element, parse_element};
pub use family::{builtin_family, AutFamily};
pub use monomial::Monomial;
pub use morphism::{EndoMap, ValidatedMap};
pub use par::Execution;
pub use scalar::{Field, Scalar};
pub use signature::Signature;
