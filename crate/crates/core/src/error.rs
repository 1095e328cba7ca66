use core::fmt;

/// Errors raised by the analysis routines.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A state or argument lies outside the domain of the operation.
    Domain { what: &'static str, value: f64 },
    /// The first derivative vanishes where a quotient by it is needed.
    DegenerateDerivative { x: f64 },
    /// The quantity deciding a non-hyperbolic classification is itself zero.
    UnresolvedClassification {
        x: f64,
        quantity: &'static str,
        value: f64,
    },
    /// A point supplied as a fixed point does not satisfy `f(x) = x`.
    NotAFixedPoint { x: f64, residual: f64 },
    /// Theorem-based prediction was requested outside the analysed regime.
    UnsupportedParams(&'static str),
    /// An exhaustive grid would exceed the evaluation cap.
    GridTooLarge { points: u128, cap: u128 },
    /// Invalid numeric configuration (empty grids, non-positive steps, ...).
    InvalidArgument(&'static str),
}

pub type Result<T, E = Error> = core::result::Result<T, E>;

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Domain { what, value } => write!(f, "{what} out of domain: {value}"),
            Error::DegenerateDerivative { x } => {
                write!(f, "first derivative vanishes at x = {x}")
            }
            Error::UnresolvedClassification { x, quantity, value } => write!(
                f,
                "cannot classify fixed point {x}: deciding quantity {quantity} = {value} is zero"
            ),
            Error::NotAFixedPoint { x, residual } => {
                write!(f, "{x} is not a fixed point (|f(x) - x| = {residual})")
            }
            Error::UnsupportedParams(why) => write!(f, "unsupported parameters: {why}"),
            Error::GridTooLarge { points, cap } => {
                write!(f, "grid has {points} points, cap is {cap}")
            }
            Error::InvalidArgument(why) => write!(f, "invalid argument: {why}"),
        }
    }
}

impl core::error::Error for Error {}
