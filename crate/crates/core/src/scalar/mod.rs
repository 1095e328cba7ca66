//! One-dimensional parametric maps on `[0, 1]`.
//!
//! A [`Map1D`] is one of four built-in families together with its parameter
//! (the inverse temperature `β` for the sigmoid families, `µ` for the logistic
//! ones). Every derivative is evaluated in closed form; second-iterate families
//! use exact chain-rule composition of the base family's derivatives.

mod cycles;
pub(crate) mod fixed_points;
mod map;
pub(crate) mod roots;

pub use cycles::{find_cycles, CycleReport, MAX_CYCLE_PERIOD};
pub use fixed_points::{
    classify_fixed_point, find_fixed_points, schwarzian, Evidence, FixedPointReport, Stability,
    FIXED_POINT_TOLERANCE, HYPERBOLICITY_TOLERANCE,
};
pub use map::{Derivative, Jet, Map1D, MapFamily};
