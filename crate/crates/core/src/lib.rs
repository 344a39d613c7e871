//! The imbalance sieve over integer pairs `(p, q)`, `p > q >= 1`, ordered
//! lexicographically, with each pair mapped to the reduced fraction
//! `(p − q)/(p + q)`.
//!
//! - [`arith`]: exact `i64` pairs and fractions, the index map and its inverse.
//! - [`sieve`]: the row stream, first-appearance laws, the duplicate-free
//!   stream of `(0, 1) ∩ ℚ` and its rank.
//! - [`qenum`]: a rank/unrank bijection `ℕ ↔ ℚ` through the Cayley transform.
//! - [`verify`]: brute-force checks of all of the above at finite bounds.
//! - [`output`]: the text formats used by the `imbalance` command.
//! - [`totient`]: Euler's totient table behind the rank functions.

pub mod arith;
pub mod error;
pub mod output;
pub mod qenum;
pub mod sieve;
pub mod totient;
pub mod verify;

pub use arith::{
    gcd, imbalance, iteration_index, pair_from_index, parity_denominator, phi_inverse,
    reduced_denominator, Fraction, Pair,
};
pub use error::{Error, Result};
pub use qenum::{cayley, cayley_inverse, invert, negate, q_rank, q_unrank, QEntry, QEnumeration};
pub use sieve::{
    count_new_denominators, distinct_fractions, first_appearance, first_appearance_index,
    first_appearance_order, fraction_at_rank, fraction_rank, sieve_stream, DistinctFraction,
    DistinctFractions, FirstAppearance, FirstAppearances, SieveItem, SieveStream,
};
pub use verify::{CheckReport, Counterexample, Verifier};
