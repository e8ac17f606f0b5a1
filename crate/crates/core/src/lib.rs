//! Numerical toolkit for non-extreme de Branges–Rovnyak spaces `H(b)`.
//!
//! A symbol is given through its Smirnov-class quotient `φ = b/a`. The crate
//! computes `H(b)`-norms of polynomials through the co-analytic Toeplitz
//! operator, builds the Pythagorean pair `(a, b)` from `φ`, and tests
//! containment of Hardy, Dirichlet and weighted spaces in `H(b)`:
//!
//! - [`series`]: truncated power series and the closed-form symbols.
//! - [`boundary`]: boundary grids, outer functions, the pair `(a, b)`.
//! - [`toeplitz`]: `T_φ̄` on polynomials and `H(b)`-norms.
//! - [`hardy`]: `H^p` membership and `H^p ⊂ H(b)`.
//! - [`carleson`]: dyadic Carleson squares and weighted containment.
//! - [`casestudy`]: the `(1 - z)^{-c}` family with and without the singular
//!   inner factor.
//! - [`cli`]: the command-line front end.

pub mod boundary;
pub mod carleson;
pub mod casestudy;
pub mod cli;
pub mod error;
pub mod hardy;
pub mod quadrature;
pub mod series;
pub mod symbol;
pub mod toeplitz;

pub use error::{Error, Result};
pub use series::PowerSeries;
pub use symbol::{DiskPoint, Symbol};
