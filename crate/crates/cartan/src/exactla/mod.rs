//! Exact linear algebra substrate.
//!
//! Four kernels, all exact:
//! - [`fp`]: matrices over a prime field `F_p` (2 <= p <= 61) with reduced
//!   row echelon form, nullspaces and characteristic polynomials,
//! - [`poly`]: univariate polynomials over `F_p` with deterministic
//!   Berlekamp factorization,
//! - [`intmat`]: arbitrary-precision integer matrices with Smith normal
//!   form (intermediate entries blow past native range even for 6x6
//!   inputs, hence big integers),
//! - [`chain`]: matrices over the chain rings `Z/p^n` and `F_p[t]/(t^m)`
//!   with Howell normal form, which is the canonical echelon form that
//!   still supports span-membership over rings with zero divisors.
//!
//! All outputs carry canonical residues only, and every form computed here
//! is deterministic, so downstream results are reproducible byte-for-byte.

pub mod chain;
pub mod fp;
pub mod intmat;
pub mod poly;

pub use chain::{ChainKind, ChainMatrix, ChainRing};
pub use fp::{FpMatrix, PrimeField, Rref};
pub use intmat::{IntMatrix, Snf};
pub use poly::FpPoly;
