//! Brute-force verifiers that share no code path with the analytic routines
//! they check: central finite differences, long-run period detection and
//! exhaustive grid minimisation.

use alloc::vec;
use alloc::vec::Vec;

use crate::{Error, Result};

/// Default step for first and second derivatives.
pub const FD_STEP: f64 = 1e-4;
/// Default step for third derivatives.
pub const FD_STEP_THIRD: f64 = 1e-3;
/// Default number of post-burn-in iterates inspected by [`long_run_period`].
pub const PERIOD_WINDOW: usize = 64;
/// Default closeness tolerance for [`long_run_period`].
pub const PERIOD_TOLERANCE: f64 = 1e-8;
/// Largest grid [`grid_minimize`] will scan.
pub const GRID_CAP: u128 = 100_000_000;

/// The default finite-difference step for a derivative order.
pub fn default_step(order: u8) -> f64 {
    if order >= 3 {
        FD_STEP_THIRD
    } else {
        FD_STEP
    }
}

/// Central finite difference of order 1, 2 (five-point stencils) or 3
/// (seven-point stencil), all fourth-order accurate in `h`.
///
/// Errors from `f` (for instance a stencil node leaving the function's
/// domain) are passed through.
pub fn fd_derivative<F>(f: F, x: f64, order: u8, h: f64) -> Result<f64>
where
    F: Fn(f64) -> Result<f64>,
{
    if !(h > 0.0) {
        return Err(Error::InvalidArgument(
            "finite-difference step must be positive",
        ));
    }
    let at = |k: f64| f(x + k * h);
    match order {
        1 => {
            let (m2, m1, p1, p2) = (at(-2.0)?, at(-1.0)?, at(1.0)?, at(2.0)?);
            Ok((m2 - 8.0 * m1 + 8.0 * p1 - p2) / (12.0 * h))
        }
        2 => {
            let (m2, m1, c, p1, p2) = (at(-2.0)?, at(-1.0)?, f(x)?, at(1.0)?, at(2.0)?);
            Ok((-m2 + 16.0 * m1 - 30.0 * c + 16.0 * p1 - p2) / (12.0 * h * h))
        }
        3 => {
            let (m3, m2, m1) = (at(-3.0)?, at(-2.0)?, at(-1.0)?);
            let (p1, p2, p3) = (at(1.0)?, at(2.0)?, at(3.0)?);
            Ok((m3 - 8.0 * m2 + 13.0 * m1 - 13.0 * p1 + 8.0 * p2 - p3) / (8.0 * h * h * h))
        }
        _ => Err(Error::InvalidArgument(
            "finite-difference order must be 1, 2 or 3",
        )),
    }
}

/// States whose orbits can be compared.
pub trait Phase: Clone {
    /// Max-norm distance.
    fn distance(&self, other: &Self) -> f64;
}

impl Phase for f64 {
    fn distance(&self, other: &Self) -> f64 {
        (self - other).abs()
    }
}

/// Smallest `p ≤ window / 2` such that, after `burn_in` steps, every pair of
/// iterates `p` apart inside the next `window` iterates is closer than `tol`.
/// `None` when no such `p` exists.
pub fn long_run_period<S, F>(
    step: F,
    s0: S,
    burn_in: usize,
    window: usize,
    tol: f64,
) -> Result<Option<usize>>
where
    S: Phase,
    F: Fn(&S) -> S,
{
    if window < 2 || burn_in < window {
        return Err(Error::InvalidArgument("need burn_in >= window >= 2"));
    }
    let mut state = s0;
    for _ in 0..burn_in {
        state = step(&state);
    }
    let mut tail = Vec::with_capacity(window);
    for _ in 0..window {
        tail.push(state.clone());
        state = step(&state);
    }
    let period = (1..=window / 2).find(|&p| {
        tail.iter()
            .zip(&tail[p..])
            .all(|(a, b)| a.distance(b) < tol)
    });
    Ok(period)
}

/// A uniform grid on `[lo, hi]` including both ends.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub lo: f64,
    pub hi: f64,
    pub points: usize,
}

impl GridSpec {
    pub fn new(lo: f64, hi: f64, points: usize) -> Result<Self> {
        if !(lo < hi) {
            return Err(Error::InvalidArgument("grid needs lo < hi"));
        }
        if points < 2 {
            return Err(Error::InvalidArgument("grid needs at least two points"));
        }
        Ok(GridSpec { lo, hi, points })
    }

    /// `points` interior points `i / (points + 1)` of `(0, 1)`.
    pub fn open_unit(points: usize) -> Result<Self> {
        let n = points as f64 + 1.0;
        GridSpec::new(1.0 / n, points as f64 / n, points)
    }

    pub fn value(&self, i: usize) -> f64 {
        if i + 1 == self.points {
            self.hi
        } else {
            self.lo + (self.hi - self.lo) * i as f64 / (self.points - 1) as f64
        }
    }
}

/// Exhaustive minimisation of `f` over the product grid. Ties go to the
/// lexicographically smallest point; NaN values are skipped.
pub fn grid_minimize<F>(f: F, specs: &[GridSpec]) -> Result<(Vec<f64>, f64)>
where
    F: Fn(&[f64]) -> f64,
{
    if specs.is_empty() {
        return Err(Error::InvalidArgument("grid needs at least one dimension"));
    }
    let total = specs
        .iter()
        .try_fold(1u128, |acc, s| acc.checked_mul(s.points as u128))
        .unwrap_or(u128::MAX);
    if total > GRID_CAP {
        return Err(Error::GridTooLarge {
            points: total,
            cap: GRID_CAP,
        });
    }

    let mut index = vec![0usize; specs.len()];
    let mut point: Vec<f64> = specs.iter().map(|s| s.value(0)).collect();
    let mut best: Option<(Vec<f64>, f64)> = None;
    loop {
        let v = f(&point);
        if !v.is_nan() && best.as_ref().is_none_or(|(_, b)| v < *b) {
            best = Some((point.clone(), v));
        }
        // odometer, last coordinate fastest
        let mut d = specs.len();
        loop {
            if d == 0 {
                return best.ok_or(Error::InvalidArgument("objective is NaN everywhere"));
            }
            d -= 1;
            index[d] += 1;
            if index[d] < specs[d].points {
                point[d] = specs[d].value(index[d]);
                break;
            }
            index[d] = 0;
            point[d] = specs[d].value(0);
        }
    }
}
