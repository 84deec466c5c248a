//! PGM round functions induced by exact-transversal logarithmic
//! signatures, and tools to check which permutation group they generate.

pub mod cipher;
pub mod cli;
pub mod error;
pub mod group;
pub mod perm;
pub mod permgroup;
pub mod signatures;
pub mod transforms;
pub mod witnesses;

pub use error::{Error, Result};
pub use perm::Permutation;
