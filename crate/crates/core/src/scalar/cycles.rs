use alloc::vec::Vec;

#[cfg(feature = "serde")]
use serde::{Deserialize, Serialize};

use super::fixed_points::HYPERBOLICITY_TOLERANCE;
use super::map::Map1D;
use super::roots::scan_unit_interval;
use crate::{Error, Result};

/// Largest period [`find_cycles`] searches.
pub const MAX_CYCLE_PERIOD: usize = 8;

/// Candidates returning within this distance under a lower iterate belong to
/// a shorter orbit. Sized above the location error of a triple root of
/// `f^p(x) - x`, which is what a fixed point looks like at a bifurcation.
const SEPARATION: f64 = 1e-4;

/// Two roots within this distance are the same orbit point.
const SAME_POINT: f64 = 1e-7;

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct CycleReport {
    /// Orbit points starting from the smallest, in iteration order.
    pub points: Vec<f64>,
    pub period: usize,
    /// `d/dx f^period` at the cycle.
    pub multiplier: f64,
    pub stable: bool,
}

/// Periodic orbits of minimal period `2..=max_period`.
pub fn find_cycles(map: &Map1D, max_period: usize) -> Result<Vec<CycleReport>> {
    if max_period > MAX_CYCLE_PERIOD {
        return Err(Error::InvalidArgument("max_period must be at most 8"));
    }
    let mut cycles: Vec<CycleReport> = Vec::new();
    for period in 2..=max_period {
        let roots = scan_unit_interval(
            |x| {
                let (value, slope) = iterate_with_slope(map, x, period);
                (value - x, slope - 1.0)
            },
            &[],
        );
        for root in roots {
            let x = root.x;
            let shorter = (1..period)
                .filter(|d| period % d == 0)
                .any(|d| (map.iterate(x, d) - x).abs() <= SEPARATION);
            if shorter {
                continue;
            }
            let known = cycles
                .iter()
                .filter(|c| c.period == period)
                .any(|c| c.points.iter().any(|&p| (p - x).abs() <= SAME_POINT));
            if known {
                continue;
            }
            cycles.push(orbit_report(map, x, period));
        }
    }
    Ok(cycles)
}

fn orbit_report(map: &Map1D, start: f64, period: usize) -> CycleReport {
    let mut orbit = Vec::with_capacity(period);
    let mut x = start;
    for _ in 0..period {
        orbit.push(x);
        x = map.apply(x);
    }
    let first = orbit
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(b.1))
        .map(|(i, _)| i)
        .unwrap_or(0);
    orbit.rotate_left(first);
    let multiplier: f64 = orbit.iter().map(|&p| map.jet_unchecked(p).dx).product();
    CycleReport {
        stable: multiplier.abs() < 1.0 - HYPERBOLICITY_TOLERANCE,
        points: orbit,
        period,
        multiplier,
    }
}

/// `(f^n(x), d/dx f^n(x))`.
pub(crate) fn iterate_with_slope(map: &Map1D, mut x: f64, n: usize) -> (f64, f64) {
    let mut slope = 1.0;
    for _ in 0..n {
        let jet = map.jet_unchecked(x);
        slope *= jet.dx;
        x = jet.value;
    }
    (x, slope)
}
