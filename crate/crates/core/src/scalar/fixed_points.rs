use alloc::vec::Vec;

#[cfg(feature = "serde")]
use serde::{Deserialize, Serialize};

use super::map::{Jet, Map1D};
use super::roots::scan_unit_interval;
use crate::{Error, Result};

/// Maximum `|f(x) - x|` for a reported fixed point.
pub const FIXED_POINT_TOLERANCE: f64 = 1e-12;

/// Band on `||f_x| - 1|` (and on the deciding higher-order quantities) inside
/// which a value is treated as exactly critical.
pub const HYPERBOLICITY_TOLERANCE: f64 = 1e-9;

/// Residual accepted by [`classify_fixed_point`] for a caller-supplied point.
const CLASSIFY_RESIDUAL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub enum Stability {
    AttractingHyperbolic,
    RepellingHyperbolic,
    NonHyperbolicAsymptoticallyStable,
    NonHyperbolicUnstable,
    NonHyperbolicSemiStableLeft,
    NonHyperbolicSemiStableRight,
}

impl Stability {
    pub fn is_hyperbolic(self) -> bool {
        matches!(
            self,
            Stability::AttractingHyperbolic | Stability::RepellingHyperbolic
        )
    }

    /// Attracts every orbit starting close enough on both sides.
    pub fn is_attracting(self) -> bool {
        matches!(
            self,
            Stability::AttractingHyperbolic | Stability::NonHyperbolicAsymptoticallyStable
        )
    }
}

/// The derivative values a classification was based on.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct Evidence {
    pub fx: f64,
    pub fxx: Option<f64>,
    pub fxxx: Option<f64>,
    pub schwarzian: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct FixedPointReport {
    pub location: f64,
    pub multiplier: f64,
    pub stability: Stability,
    pub evidence: Evidence,
}

/// Every solution of `f(x) = x` in `[0, 1]`, sorted ascending and classified.
pub fn find_fixed_points(map: &Map1D) -> Result<Vec<FixedPointReport>> {
    fixed_point_locations(map)
        .into_iter()
        .map(|x| classify_fixed_point(map, x))
        .collect()
}

/// Sorted fixed-point locations without classification.
///
/// For sigmoid families `1/2` is supplied explicitly. For second iterates the
/// base map's fixed points are supplied as well: they are simple roots of
/// `f(x) - x` even where they are triple roots of `f(f(x)) - x`.
pub(crate) fn fixed_point_locations(map: &Map1D) -> Vec<f64> {
    let mut known: Vec<f64> = Vec::new();
    if map.family.is_second_iterate() {
        known = fixed_point_locations(&map.base());
    } else if map.family.is_sigmoid() {
        known.push(0.5);
    }
    scan_unit_interval(
        |x| {
            let jet = map.jet_unchecked(x);
            (jet.value - x, jet.dx - 1.0)
        },
        &known,
    )
    .into_iter()
    .map(|r| r.x)
    .collect()
}

/// Stability of a fixed point from the linearisation, or from higher
/// derivatives / the Schwarzian when the multiplier is `±1`.
pub fn classify_fixed_point(map: &Map1D, x_star: f64) -> Result<FixedPointReport> {
    let jet = map.jet(x_star)?;
    let residual = (jet.value - x_star).abs();
    if residual > CLASSIFY_RESIDUAL {
        return Err(Error::NotAFixedPoint {
            x: x_star,
            residual,
        });
    }
    let (stability, evidence) = classify_jet(x_star, &jet)?;
    Ok(FixedPointReport {
        location: x_star,
        multiplier: jet.dx,
        stability,
        evidence,
    })
}

fn classify_jet(x: f64, jet: &Jet) -> Result<(Stability, Evidence)> {
    let fx = jet.dx;
    let mut evidence = Evidence {
        fx,
        fxx: None,
        fxxx: None,
        schwarzian: None,
    };
    let near_zero = |v: f64| v.abs() <= HYPERBOLICITY_TOLERANCE;

    if !near_zero(fx.abs() - 1.0) {
        let stability = if fx.abs() < 1.0 {
            Stability::AttractingHyperbolic
        } else {
            Stability::RepellingHyperbolic
        };
        return Ok((stability, evidence));
    }

    if fx > 0.0 {
        // multiplier +1
        evidence.fxx = Some(jet.dxx);
        if !near_zero(jet.dxx) {
            let stability = if jet.dxx > 0.0 {
                Stability::NonHyperbolicSemiStableLeft
            } else {
                Stability::NonHyperbolicSemiStableRight
            };
            return Ok((stability, evidence));
        }
        evidence.fxxx = Some(jet.dxxx);
        if near_zero(jet.dxxx) {
            return Err(Error::UnresolvedClassification {
                x,
                quantity: "f_xxx",
                value: jet.dxxx,
            });
        }
        let stability = if jet.dxxx < 0.0 {
            Stability::NonHyperbolicAsymptoticallyStable
        } else {
            Stability::NonHyperbolicUnstable
        };
        Ok((stability, evidence))
    } else {
        // multiplier -1
        let s = schwarzian_of(jet);
        evidence.fxx = Some(jet.dxx);
        evidence.fxxx = Some(jet.dxxx);
        evidence.schwarzian = Some(s);
        if near_zero(s) {
            return Err(Error::UnresolvedClassification {
                x,
                quantity: "schwarzian",
                value: s,
            });
        }
        let stability = if s < 0.0 {
            Stability::NonHyperbolicAsymptoticallyStable
        } else {
            Stability::NonHyperbolicUnstable
        };
        Ok((stability, evidence))
    }
}

fn schwarzian_of(jet: &Jet) -> f64 {
    let ratio = jet.dxx / jet.dx;
    jet.dxxx / jet.dx - 1.5 * ratio * ratio
}

/// `f_xxx / f_x - (3/2) (f_xx / f_x)^2`.
pub fn schwarzian(map: &Map1D, x: f64) -> Result<f64> {
    let jet = map.jet(x)?;
    if jet.dx.abs() <= 1e-12 {
        return Err(Error::DegenerateDerivative { x });
    }
    Ok(schwarzian_of(&jet))
}
