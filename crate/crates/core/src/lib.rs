//! Exact word combinatorics and spectral invariants for the affine Coxeter
//! group of type Ã_n.
//!
//! The crate is `no_std` (it needs `alloc`). Everything is exact: group
//! elements are compared through the affine-permutation model, matrices and
//! polynomials carry arbitrary-precision rational entries, and the modular
//! evaluation path used for identity testing works over a prime field.
//!
//! Module map:
//!
//! * [`words`]: letters, words, the admissible move calculus and traces.
//! * [`affine`]: window-notation model of Ã_n, the quotient onto S_{n+1} and
//!   translation vectors.
//! * [`lattice`]: the cyclic words `p_i`, the lattice generators `g_j`, their
//!   relations and coordinates on the translation subgroup.
//! * [`echelon`]: echelon, block echelon and Ã-echelon normal forms.
//! * [`poly`]: sparse multivariate polynomials, pencil determinants and
//!   modular identity testing.
//! * [`reps`]: matrix representations and characters.
//! * [`spectra`]: probe sets, spectral divisors, trace sums and the
//!   character-determination verifier.

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod affine;
pub mod echelon;
mod error;
pub mod lattice;
pub mod matrix;
pub mod poly;
pub mod reps;
pub mod spectra;
pub mod words;

pub use error::{Error, Result};

/// Exact rational scalar used throughout the crate.
pub type Rational = num_rational::BigRational;

/// Smallest supported rank. Ã_1 has an infinite bond and is excluded.
pub const MIN_RANK: usize = 2;

pub(crate) fn check_rank(n: usize) -> Result<()> {
    if n < MIN_RANK {
        Err(Error::RankTooSmall(n))
    } else {
        Ok(())
    }
}
