//! Deciding whether sparse univariate integer polynomials have p-adic
//! rational roots.
//!
//! The crate is organized bottom-up:
//!
//! - [`bigmod`]: valuations, modular powering, multiplicative orders,
//!   primality, factoring and quadratic residues.
//! - [`sparsepoly`]: polynomials stored as sorted `(coefficient, exponent)`
//!   lists, with exponents of arbitrary size.
//! - [`padic`]: the binomial decision procedure, Hensel lifting, and a
//!   brute-force `Q_p` root oracle.
//! - [`plaisted`]: encoding of 3CNF formulas as divisors of `x^Q - 1`.
//! - [`reduce`]: the randomized reduction from a formula to one polynomial
//!   over `Q_p`, recorded as a replayable transcript.
//! - [`primes`]: primes in the progression `1 + kQ_n` and prime-density
//!   measurements.

pub mod bigmod;
pub mod decimal;
pub mod error;
pub mod padic;
pub mod plaisted;
pub mod primes;
pub mod reduce;
pub mod sparsepoly;

pub use error::{Error, Result};

/// Signed arbitrary-precision integer used for coefficients.
pub type Int = num_bigint::BigInt;
/// Unsigned arbitrary-precision integer used for exponents, moduli and residues.
pub type Nat = num_bigint::BigUint;

pub use bigmod::{Modulus, Valuation};
pub use padic::{PadicDecision, Rule};
pub use plaisted::{Assignment, BinomialProduct, Cnf3};
pub use reduce::ReductionTranscript;
pub use sparsepoly::SparsePoly;
