//! Crate-wide error type.

use thiserror::Error;

/// Everything that can go wrong across the crate.
///
/// Variants are grouped roughly by the module that raises them. User-input
/// problems (spec syntax, bad tables, unknown suites) are distinguished from
/// computational failures (an undecided irreducibility test) so the CLI can
/// map them to different exit codes.
#[derive(Debug, Error)]
pub enum Error {
    // ---- exact linear algebra ----
    #[error("matrix is not square ({rows}x{cols})")]
    NonSquare { rows: usize, cols: usize },
    #[error("cannot factor the zero polynomial")]
    ZeroPolynomial,
    #[error("{0} is not a prime in the supported range 2..=61")]
    BadPrime(u64),

    // ---- groups ----
    #[error("group spec syntax error: {0}")]
    SpecSyntax(String),
    #[error("unsupported group: {0}")]
    UnsupportedGroup(String),
    #[error("group order {0} exceeds the limit of 64")]
    OrderLimitExceeded(usize),
    #[error("not a group ({axiom}): witness {witness}")]
    NotAGroup { axiom: String, witness: String },
    #[error("subgroup is not normal (conjugation by element {by} moves element {moved} outside)")]
    NotNormal { by: usize, moved: usize },
    #[error("Sylow {p}-subgroup is not normal")]
    SylowNotNormal { p: u64 },

    // ---- algebras and modules ----
    #[error("elements belong to different algebras")]
    ParentMismatch,
    #[error("element is not idempotent modulo the given nilpotent ideal")]
    NotApproxIdempotent,
    #[error("irreducibility undecided for a module of dimension {dim} over F_{p} after {attempts} attempts")]
    IrreducibilityUndecided { dim: usize, p: u64, attempts: usize },
    #[error("module is not projective")]
    NotProjective,

    // ---- coefficient specs / files ----
    #[error("coefficient spec syntax error: {0}")]
    CoeffSyntax(String),
    #[error("module file invalid: {0}")]
    ModuleFile(String),

    // ---- verification ----
    #[error("unknown suite: {0}")]
    UnknownSuite(String),
    #[error("incompatible input for suite {suite}: {reason}")]
    IncompatibleInput { suite: String, reason: String },
    #[error("corpus config error: {0}")]
    ConfigError(String),

    // ---- plumbing ----
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

impl Error {
    /// Exit code the CLI uses for this error: 2 for usage/input problems,
    /// 3 for computational failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::SpecSyntax(_)
            | Error::UnsupportedGroup(_)
            | Error::OrderLimitExceeded(_)
            | Error::NotAGroup { .. }
            | Error::CoeffSyntax(_)
            | Error::ModuleFile(_)
            | Error::UnknownSuite(_)
            | Error::IncompatibleInput { .. }
            | Error::ConfigError(_)
            | Error::BadPrime(_)
            | Error::Io(_)
            | Error::Json(_) => 2,
            _ => 3,
        }
    }
}
