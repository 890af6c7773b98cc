//! Exact local root numbers W(χ) of finite-order characters of unramified
//! p-adic fields.
//!
//! Values live in cyclotomic fields and are compared exactly. Two independent
//! routes compute W: a normalized Gauss-sum oracle summed over the unit classes
//! modulo the conductor, and closed formulas built from logarithmic characters
//! χ_α(x) = ψ_K(α·log x). The [`verify`] module checks Galois-action and
//! Adams-operation identities against both.

pub mod arith;
pub mod character;
pub mod cyclotomic;
pub mod epsilon;
mod error;
pub mod hilbert;
pub mod padic;
pub mod spec;
pub mod suites;
pub mod verify;
pub mod virtual_char;

pub use character::MultiplicativeCharacter;
pub use cyclotomic::{CyclotomicNumber, GaloisElement, RootOfUnity};
pub use epsilon::{Backend, EpsilonValue};
pub use error::{Error, Result};
pub use padic::{PadicElement, UnramifiedField};
pub use virtual_char::VirtualCharacter;
