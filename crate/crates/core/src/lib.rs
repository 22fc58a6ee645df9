//! Global representations of finite group families over the rationals.
//!
//! Objects are contravariant functors from a finite family of groups (with
//! surjections as morphisms) to finite-dimensional vector spaces. The crate
//! builds families, constructs and manipulates such objects, decides membership
//! in Serre tensor ideals through supports with checkable certificates, and
//! computes the space of prime Serre ideals.

pub mod checks;
pub mod error;
pub mod exactla;
pub mod family;
pub mod kan;
pub mod rep;
pub mod serre;
pub mod spectrum;

pub use error::{Error, Result};
