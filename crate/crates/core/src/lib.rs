//! Snake modules for quantum affine sl(n+1): ℓ-weights, segments and their
//! factorization, the lattice path model for q-characters, extended
//! T-systems, the inflation map between ranks, and the imaginary module
//! family.
//!
//! Bulk enumeration runs on rayon when the `parallel` feature is on (the
//! default); see [`exec`] for forcing sequential execution at runtime.

pub mod cache;
pub mod character;
pub mod error;
pub mod exec;
pub mod imaginary;
pub mod inflation;
pub mod limits;
pub mod lweight;
pub mod paths;
pub mod qcharacter;
pub mod segments;
pub mod verify;

pub use character::Character;
pub use error::{Error, Result};
pub use lweight::{Generator, LWeight, Weight};
pub use paths::Path;
pub use qcharacter::PrimeSnake;
pub use segments::{Segment, SegmentContext};
