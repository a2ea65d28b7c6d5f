//! Locality analysis for nonredundant bitstring-to-integer representations.
//!
//! A representation is a bijection between the `ell`-bit strings and the
//! integers `[0, 2^ell)`. This crate builds such representations (standard
//! binary, reflected Gray, bound-attaining labelings, suboptimal Gray codes),
//! measures their point and general locality exactly, and runs the three
//! evolutionary engines (simulated annealing, (1+1)-ES and a generational GA)
//! together with an exact Markov-chain model of the annealer.
//!
//! The crate is `no_std` and only needs `alloc`. The `parallel` feature fans
//! experiment trials out over rayon; results are bit-identical either way.
#![no_std]

extern crate alloc;
#[cfg(any(feature = "std", test))]
extern crate std;

pub mod error;
pub mod fitness;
pub mod gea;
pub mod locality;
pub mod markov;
pub mod representation;

pub use error::{Error, Result};
pub use representation::{Representation, RepresentationKind};

/// Number of set bits in `x ^ y`.
#[inline]
pub fn hamming(x: u32, y: u32) -> u32 {
    (x ^ y).count_ones()
}

/// Per-trial random stream: ChaCha8 keyed by `seed`, on stream `stream`.
///
/// Every randomized routine in the crate draws from one of these, so results
/// depend only on `(seed, stream)` and never on scheduling.
pub fn seeded_rng(seed: u64, stream: u64) -> rand_chacha::ChaCha8Rng {
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}
