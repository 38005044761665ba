//! Exact homological algebra over quotients of path algebras.
//!
//! The crate works over `Q` or `F_p` and never uses floating point. Paths
//! compose left to right and modules are right modules, i.e. quiver
//! representations whose arrow maps run from source to target.
#![no_std]

extern crate alloc;

pub mod error;
pub mod field;
pub mod linalg;
pub mod quiver;
pub mod presentation;
pub mod groebner;
pub mod algebra;
pub mod growth;
pub mod repr;
pub mod free;
pub mod resolution;
pub mod ext;
pub mod regularity;
pub mod sca;
pub mod constructions;
pub mod yoneda;
pub mod corpus;

pub use error::{Error, Result};
pub use field::{Field, Scalar};
