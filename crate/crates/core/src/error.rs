use std::fmt;

/// Errors surfaced by this crate. Numeric preconditions that callers can
/// violate get their own variants; internal invariants panic instead.
#[derive(Debug)]
pub enum Error {
    /// Modulus failed the deterministic primality test.
    NotPrime(u64),
    /// Modulus is 2 (the arithmetic here requires an odd prime).
    NotOddPrime(u64),
    /// Modulus does not fit the fast-reduction word range (p >= 2^63).
    PrimeTooLarge(u64),
    /// A scalar argument fell outside its documented range.
    OutOfRange {
        what: &'static str,
        value: u64,
        lo: u64,
        hi: u64,
    },
    /// A window [H, H+N] has empty intersection with [2, p-1].
    EmptyWindow { p: u64, h: u64, n: u64 },
    /// Estimated work exceeds the scan budget and --force was not given.
    BudgetExceeded { estimated: u128, limit: u128 },
    /// A cost guard (enumeration size, brute-force bound, ...) was exceeded.
    GuardExceeded {
        what: &'static str,
        value: u64,
        max: u64,
    },
    /// Two polynomials over different moduli were combined.
    MismatchedModulus { left: u64, right: u64 },
    /// An operation that needs a nonzero polynomial received zero.
    ZeroPolynomial,
    /// A structurally invalid argument combination.
    Invalid(&'static str),
    /// Malformed textual input (polynomial, cycle list, integer set).
    Parse(String),
    /// Checkpoint file exists but is not in the expected key=value format.
    Checkpoint(String),
    Io(std::io::Error),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::NotPrime(n) => write!(f, "{n} is not prime"),
            Error::NotOddPrime(n) => write!(f, "{n} is not an odd prime"),
            Error::PrimeTooLarge(n) => write!(f, "prime {n} exceeds the supported word range (< 2^63)"),
            Error::OutOfRange { what, value, lo, hi } => {
                write!(f, "{what} = {value} outside [{lo}, {hi}]")
            }
            Error::EmptyWindow { p, h, n } => {
                write!(f, "window [{h}, {}] misses [2, {}] entirely (p = {p})", h.saturating_add(*n), p - 1)
            }
            Error::BudgetExceeded { estimated, limit } => write!(
                f,
                "estimated {estimated} modular multiplications exceeds budget {limit}; rerun with --force to override"
            ),
            Error::GuardExceeded { what, value, max } => {
                write!(f, "{what} = {value} exceeds guard {max}")
            }
            Error::MismatchedModulus { left, right } => {
                write!(f, "polynomials over different moduli: {left} vs {right}")
            }
            Error::ZeroPolynomial => write!(f, "zero polynomial not allowed here"),
            Error::Invalid(s) => write!(f, "{s}"),
            Error::Parse(s) => write!(f, "parse error: {s}"),
            Error::Checkpoint(s) => write!(f, "bad checkpoint: {s}"),
            Error::Io(e) => write!(f, "io error: {e}"),
        }
    }
}

impl std::error::Error for Error {
    fn source(&self) -> Option<&(dyn std::error::Error + 'static)> {
        match self {
            Error::Io(e) => Some(e),
            _ => None,
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e)
    }
}

pub type Result<T> = std::result::Result<T, Error>;
