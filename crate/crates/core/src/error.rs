use core::fmt;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Polynomials handled here have degree at least two.
    DegreeTooSmall { degree: usize },
    /// A computed quantity left the finite range.
    Overflow { what: &'static str },
    /// An input contained NaN or an infinity.
    NonFinite { what: &'static str },
    /// The root finder hit its iteration cap.
    NoConvergence { iterations: usize },
    PermutationOutOfRange { mu: u64, arity: usize },
    ArityMismatch { expected: usize, found: usize },
    HistoryLength { expected: usize, found: usize },
    /// The second-order recursion divides by a vanishing coefficient.
    DivisionByZero { component: usize, ell: usize },
    /// q-discrete time needs q != 1.
    QEqualsOne,
    InvalidRotation { q: i64, p: u64 },
    TrajectoryTooShort { len: usize, required: usize },
    ZeroDenominator { component: usize },
    Invalid { reason: &'static str },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::DegreeTooSmall { degree } => {
                write!(f, "polynomial degree {degree} is below the minimum of 2")
            }
            Error::Overflow { what } => write!(f, "non-finite value while computing {what}"),
            Error::NonFinite { what } => write!(f, "non-finite input: {what}"),
            Error::NoConvergence { iterations } => {
                write!(f, "root finder did not converge within {iterations} iterations")
            }
            Error::PermutationOutOfRange { mu, arity } => {
                write!(f, "permutation index {mu} outside [1, {arity}!]")
            }
            Error::ArityMismatch { expected, found } => {
                write!(f, "expected {expected} entries, found {found}")
            }
            Error::HistoryLength { expected, found } => {
                write!(f, "seed of order {expected} was given {found} states")
            }
            Error::DivisionByZero { component, ell } => write!(
                f,
                "coefficient y_{} vanishes at step {ell}; the second-order recursion is undefined",
                component + 1
            ),
            Error::QEqualsOne => write!(f, "q-discrete time requires q != 1"),
            Error::InvalidRotation { q, p } => {
                write!(f, "rotation {q}/{p} needs p > 0 and gcd(|q|, p) = 1")
            }
            Error::TrajectoryTooShort { len, required } => {
                write!(f, "trajectory has {len} states, at least {required} required")
            }
            Error::ZeroDenominator { component } => {
                write!(f, "sigma_{} of the first state vanishes", component + 1)
            }
            Error::Invalid { reason } => f.write_str(reason),
        }
    }
}

impl core::error::Error for Error {}
