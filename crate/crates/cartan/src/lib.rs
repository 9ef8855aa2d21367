//! Exact modular representation theory of finite groups at desk scale.
//!
//! The crate builds group algebras `R[G]` where `R` is a prime field `F_p`
//! or a local artinian chain ring (`Z/p^n` or `F_p[t]/(t^m)`), and computes
//! their structural invariants exactly:
//!
//! - composition series of modules via a seeded MeatAxe with Norton
//!   irreducibility certificates ([`modrep`]),
//! - Jacobson radicals, primitive idempotents and their lifts ([`groupalg`]),
//! - projective indecomposables, projective covers and projectivity tests,
//! - Cartan matrices and the `K_0`/`G_0` lattice maps ([`grothendieck`]),
//! - chain-ring group algebras with radical filtrations and the Cartan
//!   scaling law ([`artinring`]),
//! - named verification suites that machine-check the structure theorems
//!   on a corpus of small groups ([`verify`]).
//!
//! Everything is exact integer/residue arithmetic; there is no floating
//! point anywhere. All randomized procedures take an explicit seed and
//! their results are seed-independent (the seed only affects the search
//! path).
//!
//! The `examples/` directory is the best starting point; each example is a
//! runnable tour of one capability. A thin `cartan` binary exposes the same
//! functionality as subcommands (`describe`, `cartan`, `chop`, `projtest`,
//! `artin`, `verify`).

pub mod artinring;
pub mod cli;
pub mod error;
pub mod exactla;
pub mod grothendieck;
pub mod groupalg;
pub mod groups;
pub mod modrep;
pub mod verify;

pub use error::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
