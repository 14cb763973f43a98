//! Perfect and spherical bitrades in Hamming graphs `H(n, q)`.
//!
//! A pair `(T0, T1)` of disjoint vertex sets is a *perfect bitrade* when every
//! radius-1 ball meets both parts in the same number of words, and that number
//! is 0 or 1. Replacing balls by spheres (the center excluded) gives a
//! *spherical bitrade*. The crate provides:
//!
//! - [`hamming`]: words, distances, spheres, balls and faces of `H(n, q)`;
//! - [`field`]: table-driven arithmetic in `GF(p^k)`;
//! - [`linear`]: parity-check codes, in particular the MDS codes used by the
//!   linear construction;
//! - [`construct`]: the alternating-group, MDS, tensor-product and
//!   spherical-to-perfect constructions;
//! - [`verify`]: independent checkers (ball/sphere counting, eigenfunction
//!   equations, distance-2 counts, zero face sums);
//! - [`search`]: exhaustive branch-and-bound, tabu local search and randomized
//!   restarts for small bitrades;
//! - [`io`]: JSON and text serialization of bitrades.

pub mod construct;
pub mod error;
pub mod field;
pub mod hamming;
pub mod io;
pub mod linear;
pub mod search;
pub mod verify;

pub use construct::{Bitrade, BitradeKind};
pub use error::{Error, Result};
pub use hamming::{Code, Distance, Face, HammingParams, Word};

/// Number of worker threads requested through `BITRADE_THREADS`, if set.
pub fn thread_limit() -> Option<usize> {
    std::env::var("BITRADE_THREADS")
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .filter(|&n| n > 0)
}
