//! Crate-wide error type.
//!
//! Every fallible operation in this crate returns [`Result`]. Variants are
//! grouped by the area that raises them; messages carry enough context to be
//! actionable without a debugger.

use thiserror::Error;

/// Errors raised by the exact-arithmetic engine.
#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum Error {
    // ----- matrices -----
    /// A matrix had the wrong shape for the requested operation.
    #[error("matrix shape mismatch: {0}")]
    Shape(String),
    /// A square matrix required to be invertible was singular.
    #[error("singular matrix: {0}")]
    Singular(String),
    /// Input failed Seifert-matrix validation: det(V - V^t) must be +/-1.
    #[error("not a Seifert matrix: det(V - V^t) = {det}, expected +/-1")]
    NotSeifert { det: String },

    // ----- polynomials -----
    /// Operation required a nonzero polynomial.
    #[error("zero polynomial not allowed: {0}")]
    ZeroPolynomial(String),
    /// Operation required a symmetric (palindromic) polynomial.
    #[error("polynomial is not symmetric: {0}")]
    NotSymmetric(String),
    /// Polynomial evaluation hit a forbidden value (e.g. root at t = +/-1).
    #[error("forbidden value: {0}")]
    ForbiddenValue(String),
    /// Exact division failed where divisibility was required.
    #[error("exact division failed: {0}")]
    Indivisible(String),

    // ----- integer factorization -----
    /// Complete integer factorization exceeded the configured effort bound.
    #[error("integer factorization limit reached on {n}")]
    FactorizationLimit { n: String },

    // ----- p-adic -----
    /// p must be prime for p-adic operations.
    #[error("{0} is not prime")]
    NotPrime(String),
    /// The prime divides a leading coefficient where a unit is required.
    #[error("p = {p} divides the leading coefficient of {poly}")]
    LeadingCoefficientDivisible { p: u64, poly: String },
    /// A Hensel-type lift failed (non-simple root, zero reduction, ...).
    #[error("lift failed at p = {p}: {reason}")]
    LiftFailed { p: u64, reason: String },
    /// Working precision was insufficient to separate/decide; caller should
    /// escalate precision or report an undetermined verdict.
    #[error("p-adic precision insufficient at p = {p}: {reason}")]
    PrecisionInsufficient { p: u64, reason: String },
    /// Requested precision exceeds the configured ceiling.
    #[error("precision ceiling exceeded at p = {p}: requested {requested}, ceiling {ceiling}")]
    PrecisionCeiling { p: u64, requested: u32, ceiling: u32 },

    // ----- Witt groups -----
    /// Diagonal forms must have entries not killed by the residue map.
    #[error("invalid diagonal form: {0}")]
    InvalidForm(String),
    /// Brute-force metabolizer search requires an even-rank form.
    #[error("odd-rank form is never metabolic (rank {rank})")]
    OddRank { rank: usize },
    /// Brute-force search size guard.
    #[error("brute-force search too large: {0}")]
    SearchTooLarge(String),

    // ----- isometric structures / engine -----
    /// The requested operation needs a nonsingular Seifert matrix.
    #[error("matrix is singular (det V = 0); reduce_to_nonsingular first")]
    SingularSeifert,
    /// An operation's documented precondition was not met by the input.
    #[error("precondition violated: {0}")]
    Precondition(String),
    /// A claimed certificate failed independent replay.
    #[error("certificate verification failed: {0}")]
    CertificateInvalid(String),
    /// Internal cross-check between two independent computations failed.
    #[error("internal consistency check failed: {0}")]
    Inconsistency(String),

    // ----- parsing -----
    /// Input text could not be parsed as a matrix.
    #[error("parse error: {0}")]
    Parse(String),
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
