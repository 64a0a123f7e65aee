//! Hidden subgroup problem over the wreath products `W_n = Z_2^n ≀ Z_2`.
//!
//! The crate is `no_std` (it needs `alloc`) and holds every algorithm:
//!
//! * [`element`]: arithmetic on `(x, y; a)` triples, the bijection `phi` and
//!   the pairing `mu`.
//! * [`f2`]: exact linear algebra over `F_2`.
//! * [`subgroup`]: generated subgroups, their perps, hidden functions and
//!   test oracles (enumeration, random subgroups).
//! * [`sim`]: a seedable statevector simulator.
//! * [`qft`]: the Fourier transform of `W_n`, built as a circuit, as a block
//!   matrix and entrywise.
//! * [`solver`]: Fourier sampling and reconstruction of the hidden subgroup.
//! * [`suites`]: brute-force property suites used by the harness.
//!
//! Elements are packed into one machine word. Bits `0..n` hold `x`, bits
//! `n..2n` hold `y` and bit `2n` holds the swap bit `a`; the same layout is
//! used for basis states of the simulator.
#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod element;
mod error;
pub mod f2;
pub mod qft;
pub mod sim;
pub mod solver;
pub mod subgroup;
pub mod suites;

pub use element::GroupElement;
pub use error::{Error, Result};
pub use f2::{BitMatrix, BitVector};
pub use subgroup::{HiddenFunction, Subgroup};

/// Seeded generator used across the crate.
pub type Rng = rand_chacha::ChaCha8Rng;

/// Builds the generator for stream `stream` of `seed`.
///
/// Independent trials of one experiment draw from distinct streams, so their
/// results do not depend on execution order.
pub fn seeded_rng(seed: u64, stream: u64) -> Rng {
    use rand::SeedableRng;
    let mut rng = Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}
