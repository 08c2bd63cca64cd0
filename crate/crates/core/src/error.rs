//! Error type shared by every module of the core crate.
//!
//! Each variant carries the id of the constraint it violates so that
//! front ends can report it verbatim (e.g. `4.3.5-parity`).

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// A quotient pairing was requested on classes whose pullback pairing is odd.
    #[error("odd pullback pairing {value}: operands are not pullbacks of integral quotient classes")]
    OddPairing { value: String },

    #[error("parity violation [{id}]: {detail}")]
    ParityViolation { id: &'static str, detail: String },

    #[error("excluded in characteristic {p} [{id}]: {lhs} > {rhs}")]
    CharPExcluded {
        id: &'static str,
        p: i64,
        lhs: i128,
        rhs: i128,
    },

    #[error("ramification index rho = {rho} must be odd [4.3.3-rho-odd]")]
    RhoEven { rho: i64 },

    #[error("ramification index rho = {rho} outside 1..=2d-1 = {max} [4.3.3-rho-range]")]
    RhoOutOfRange { rho: i64, max: i64 },

    #[error("divisibility failure [{id}]: {detail}")]
    NotDivisible { id: &'static str, detail: String },

    #[error("negative genus [4.4.2-genus-tilde]: numerator {numerator}")]
    NegativeGenus { numerator: i128 },

    #[error("degree n = {n} too small for the osculating bound [4.5]")]
    DegreeTooSmall { n: i64 },

    #[error("rational-image constraint violated [5.2-rational-image]: gamma^(2) = {gamma_sq}, expected {expected}")]
    RationalImageViolation { gamma_sq: i128, expected: i128 },

    #[error("search box of radius {radius} exhausted: minimum sits on the box boundary")]
    SearchBoxExhausted { radius: i64 },

    #[error("Lambda is not nef [5.12]")]
    NotNef,

    #[error("anticanonical degree {degree} < 2 [5.16]")]
    AnticanonicalDegreeTooSmall { degree: i128 },

    #[error("constraint violated [{id}]: {detail}")]
    ConstraintViolation { id: &'static str, detail: String },

    /// A lattice identity that must hold by construction failed.
    #[error("internal consistency failure [{id}]: {detail}")]
    IdentityFailure { id: &'static str, detail: String },

    #[error("no solutions within bound {bound} [5.14]")]
    NoSolutions { bound: i64 },

    #[error("invalid parameter `{name}`: {detail}")]
    InvalidParameter { name: &'static str, detail: String },
}

impl Error {
    /// Constraint id used in reports and CLI messages.
    pub fn constraint_id(&self) -> &'static str {
        match self {
            Error::OddPairing { .. } => "quotient-odd-pairing",
            Error::ParityViolation { id, .. }
            | Error::CharPExcluded { id, .. }
            | Error::NotDivisible { id, .. }
            | Error::ConstraintViolation { id, .. }
            | Error::IdentityFailure { id, .. } => id,
            Error::RhoEven { .. } => "4.3.3-rho-odd",
            Error::RhoOutOfRange { .. } => "4.3.3-rho-range",
            Error::NegativeGenus { .. } => "4.4.2-genus-tilde",
            Error::DegreeTooSmall { .. } => "4.5",
            Error::RationalImageViolation { .. } => "5.2-rational-image",
            Error::SearchBoxExhausted { .. } => "search-box",
            Error::NotNef => "5.12",
            Error::AnticanonicalDegreeTooSmall { .. } => "5.16",
            Error::NoSolutions { .. } => "5.14",
            Error::InvalidParameter { .. } => "parameter",
        }
    }

    /// True when the error signals a broken internal invariant rather than bad input.
    pub fn is_internal(&self) -> bool {
        matches!(self, Error::IdentityFailure { .. })
    }
}

/// Largest magnitude accepted for scalar parameters (n, d, rho, m, g, p and
/// the coordinates of type vectors). Keeps every derived quantity well inside
/// `i128`.
pub const MAX_PARAM: i64 = 1 << 31;

pub(crate) fn check_param(name: &'static str, value: i64) -> Result<()> {
    if value.abs() > MAX_PARAM {
        return Err(Error::InvalidParameter {
            name,
            detail: format!("|{value}| exceeds {MAX_PARAM}"),
        });
    }
    Ok(())
}
