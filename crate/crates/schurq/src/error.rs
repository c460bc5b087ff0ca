//! Error type shared across the crate.

use thiserror::Error;

#[derive(Debug, Clone, Error)]
pub enum Error {
    /// Series inversion requires a unit constant term.
    #[error("cannot invert series: constant term is {found}, expected +1 or -1")]
    NonUnitConstant { found: String },

    /// Requested coefficient lies outside the stored window, or the exponent
    /// is not representable on the series' offset lattice.
    #[error("exponent {exponent24}/24 is not representable in window [{lo24}/24, {hi24}/24] with step 1")]
    ExponentOutOfRange {
        exponent24: i64,
        lo24: i64,
        hi24: i64,
    },

    /// Two series whose offsets differ by a non-integer power of q cannot be
    /// added or compared.
    #[error("offsets {a24}/24 and {b24}/24 differ by a fractional power of q; series are incomparable")]
    IncomparableOffsets { a24: i64, b24: i64 },

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("evaluation point {0} is outside (0, 1)")]
    EvalPointOutOfRange(f64),

    #[error("evaluation point must satisfy Re z > 0, got Re z = {0}")]
    EvalPointNotDecaying(f64),

    /// The geometric tail extrapolation is only valid while rho * q0 < 1.
    #[error("tail clamp failed: extrapolated ratio times q0 is {0} >= 1; increase truncation or lower q0")]
    TailClampFailed(f64),

    #[error("tolerance {tol:e} unreachable at truncation {trunc}: tail bound {tail:e}; estimated required truncation {required}")]
    ToleranceUnreachable {
        tol: f64,
        trunc: usize,
        tail: f64,
        required: usize,
    },

    #[error("truncation {requested} exceeds the compute budget {budget}")]
    BudgetExceeded { requested: usize, budget: usize },

    /// Non-convergent Pochhammer normalization (infinite product with k = 0).
    #[error("infinite Pochhammer product requires exponent k >= 1, got k = 0")]
    DivergentProduct,

    /// The exponent ledger of a theta/eta quotient must cancel exactly.
    #[error("internal error: final exponent offset is {0}/24, expected 0 (broken exponent ledger)")]
    BrokenExponentLedger(i64),

    #[error("residue set is invalid: {0}")]
    InvalidResidues(String),

    #[error("the asymptotic estimate is non-positive at n = {n}; no log-space value exists")]
    NonPositiveEstimate { n: u64 },
}

pub type Result<T> = std::result::Result<T, Error>;
