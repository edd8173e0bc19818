//! Exact exterior calculus over polynomial coefficients and a decision
//! engine for constant-coefficient differential forms and multivector
//! fields.

pub mod connection;
pub mod detector;
pub mod error;
pub mod exterior;
pub mod linalg;
pub mod oracle;
pub mod poly;

pub use error::{Error, Result};
pub use exterior::{Chart, DiffForm, ForwardChart, MultiIndex, MultiVector};
pub use poly::{Poly, Rational};
