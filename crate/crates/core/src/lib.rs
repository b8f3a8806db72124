//! Sorting permutations with the fewest cyclically adjacent transpositions.
//!
//! The positions of a permutation are arranged on a circle, and a single
//! move exchanges the elements in two neighbouring positions, including the
//! pair formed by the last and first position. This crate
//!
//! * computes minimum-length sorting sequences from displacement vectors
//!   ([`sorter::optimal_sort`]), never exceeding `⌊n²/4⌋` moves,
//! * provides an exact breadth-first oracle over the Cayley graph for small
//!   `n` ([`oracle`]),
//! * checks the structural facts behind the `⌊n²/4⌋` bound on concrete
//!   sequences ([`reduction`]), and
//! * drives all of the above from a command-line front end ([`cli`]).

pub mod cli;
pub mod displacement;
pub mod error;
pub mod oracle;
pub mod perm;
pub mod reduction;
pub mod sorter;

pub use displacement::{DisplacementVector, NetCountMatrix};
pub use error::{Error, Result};
pub use perm::{Element, Permutation, Swap, Transposition};
pub use sorter::SwapSequence;

/// `⌊n²/4⌋`, the largest number of moves any permutation of `n` elements needs.
pub fn diameter_bound(n: usize) -> u64 {
    (n as u64 * n as u64) / 4
}
