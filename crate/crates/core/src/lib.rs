//! Pattern avoidance in Latin squares.
//!
//! A Latin square avoids a permutation pattern when every row and every
//! column, read as a permutation, avoids it. This crate enumerates avoiders
//! exactly, builds the explicit avoiding squares for patterns of length
//! three, partitions patterns into Wilf classes by their avoider counts, and
//! studies forced monotone subsequences in rows and columns.
//!
//! Every symbol, row and column index visible through the API is 1-based.

pub mod analysis;
pub mod bigcount;
pub mod construct;
pub mod enumerate;
pub mod error;
pub mod perm;
pub mod rectpat;
pub mod square;

pub use enumerate::{AvoidanceSpec, CountResult, EnumerationConfig, Enumerator};
pub use error::{Error, Result};
pub use perm::Permutation;
pub use rectpat::LatinRectangle;
pub use square::LatinSquare;
