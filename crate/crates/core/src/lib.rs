//! Exact free-group machinery for certifying that an element of a finitely
//! generated subgroup is not a non-generator.
//!
//! The crate is organised bottom-up:
//!
//! - [`words`]: reduced words, cyclic forms, primitive roots and compressed
//!   power words with arbitrary-precision exponents.
//! - [`stallings`]: folded core graphs of finitely generated subgroups
//!   (membership, rank, shortest element, equality).
//! - [`geometry`]: word-metric constants (growth, quasiconvexity,
//!   commensurators, ball sizes, the length-deficit constant `K(g, c)`) and
//!   the broken-geodesic sequence checks.
//! - [`witness`]: the full construction of a generating set `Q` of `H` such
//!   that `Q - {g}` generates a proper subgroup, with sampled verification
//!   and a serialisable certificate.

pub mod error;
pub mod geometry;
pub mod stallings;
pub mod witness;
pub mod words;

pub use error::{Error, Result};
pub use words::{GroupDescriptor, Letter, PowerWord, Word};
