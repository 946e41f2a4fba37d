//! Ballot matrices and labeled interval orders.
//!
//! A ballot matrix is an upper-triangular matrix of disjoint ballots
//! (ordered set partitions) with no empty row, signed by the parity of its
//! blocks plus its dimension. A sign-reversing involution on ballot matrices
//! keeps the induced interval order fixed and leaves exactly one fixed point
//! per labeled interval order. Fixed points split into a permutation and an
//! inversion table, which leads to counting formulas built from descent sets
//! and ascent-bottom sets.
//!
//! Every construction here is paired with an independent brute-force count
//! so the identities can be checked by enumeration.

pub mod ascent;
pub mod ballot;
pub mod counting;
mod error;
pub mod fixedpoint;
mod intset;
pub mod matrix;
pub mod perm;
pub mod poset;
pub mod verify;

pub use ascent::{ballot_to_perm_decreasing, ConstructionChoice};
pub use ballot::Ballot;
pub use counting::BigCount;
pub use error::{Error, Result};
pub use fixedpoint::{CompositionMatrix, FixedPointMatrix, FixedPointPair};
pub use intset::IntSet;
pub use matrix::{BallotMatrix, EntryOrder};
pub use perm::{InversionTable, Permutation};
pub use poset::{poset_of, Poset};
